"""Food-chain parameterization, environmental noise, and effective rates.

A chain has n species: species 1 is the prey (logistic growth, rate ``a10``,
self-limitation ``a11``); species j >= 2 is a predator that eats species j-1
and is eaten by species j+1.  Interaction coefficients are stored 0-based
internally; every public index and report label is 1-based.

Environmental noise enters through a per-unit-time covariance matrix
``sigma`` (possibly rank deficient, e.g. all species driven by one shared
Brownian motion) or through a factor ``gamma`` with gamma^T gamma = sigma.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    NonPositiveCoefficientError,
    NotPositiveSemidefiniteError,
    ZeroIntracompetitionError,
)

# Relative tolerances for noise validation (standard numerical practice).
SYMMETRY_RTOL = 1e-12
PSD_RTOL = 1e-10
FACTOR_RTOL = 1e-10


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class FoodChain:
    """Validated interaction coefficients of an n-species chain.

    death[k]     is a(k+2, 0), the death rate of predator k+2
    prey_on[k]   is a(k+2, k+1), consumption of the level below
    preyed_by[k] is a(k+1, k+2), loss of species k+1 to the level above
    """

    n: int
    a10: float
    a11: float
    death: np.ndarray
    prey_on: np.ndarray
    preyed_by: np.ndarray

    def rate_death(self, j: int) -> float:
        """a(j,0) for a predator species 2 <= j <= n."""
        return float(self.death[j - 2])

    def rate_eats(self, j: int) -> float:
        """a(j,j-1): rate at which species j consumes species j-1 (2 <= j <= n)."""
        return float(self.prey_on[j - 2])

    def rate_eaten(self, j: int) -> float:
        """a(j,j+1): rate at which species j is lost to species j+1 (1 <= j <= n-1)."""
        return float(self.preyed_by[j - 1])

    def base_rates(self) -> np.ndarray:
        """Per-capita rates at the origin: (a10, -a20, ..., -an0)."""
        return np.concatenate(([self.a10], -self.death))

    def interaction_matrix(self) -> np.ndarray:
        """Matrix M with per-capita growth f(x) = base_rates() + M x."""
        m = np.zeros((self.n, self.n))
        m[0, 0] = -self.a11
        if self.n > 1:
            m[0, 1] = -self.preyed_by[0]
        for i in range(1, self.n):
            m[i, i - 1] = self.prey_on[i - 1]
            if i < self.n - 1:
                m[i, i + 1] = -self.preyed_by[i]
        return m


@dataclass(frozen=True)
class NoiseModel:
    """Environmental covariance ``sigma`` and optional factor ``gamma``.

    ``rank`` is the numerical rank of sigma (eigenvalues above
    PSD_RTOL * lambda_max); rank < n means degenerate noise.
    """

    sigma: np.ndarray
    gamma: np.ndarray | None
    rank: int

    @property
    def n(self) -> int:
        return self.sigma.shape[0]

    def diag(self) -> np.ndarray:
        return np.diag(self.sigma).copy()


@dataclass(frozen=True)
class EffectiveRates:
    """Noise-shifted per-capita rates.

    tilde_a[0] = a10 - sigma_11/2 (prey growth, lowered by noise);
    tilde_a[j-1] = a(j,0) + sigma_jj/2 for j >= 2 (predator death, raised).
    """

    tilde_a: np.ndarray

    @property
    def n(self) -> int:
        return self.tilde_a.shape[0]

    def growth(self) -> float:
        """Effective prey growth rate (may be negative under strong noise)."""
        return float(self.tilde_a[0])

    def death(self, j: int) -> float:
        """Effective death rate of predator j >= 2 (always positive)."""
        return float(self.tilde_a[j - 1])


def _positive(value: float, symbol: str) -> float:
    value = float(value)
    if not np.isfinite(value) or value <= 0.0:
        raise NonPositiveCoefficientError(symbol, value)
    return value


def validate_chain(
    n: int,
    a10: float,
    a11: float,
    death: Sequence[float],
    prey_on: Sequence[float],
    preyed_by: Sequence[float],
) -> FoodChain:
    """Validate raw coefficients and build an immutable FoodChain.

    Every coefficient must be strictly positive.  a11 = 0 (prey growing
    without self-limitation) is rejected explicitly: the classification
    theory underlying this package does not apply there.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise DimensionMismatchError(f"n must be an integer >= 1, got {n!r}")
    n = int(n)
    a10 = _positive(a10, "a(1,0)")
    a11 = float(a11)
    if a11 == 0.0:
        raise ZeroIntracompetitionError("a(1,1) = 0 is outside the supported model class")
    if not np.isfinite(a11) or a11 < 0.0:
        raise NonPositiveCoefficientError("a(1,1)", a11)

    death = np.asarray(death, dtype=float)
    prey_on = np.asarray(prey_on, dtype=float)
    preyed_by = np.asarray(preyed_by, dtype=float)
    for name, vec in (("death", death), ("prey_on", prey_on), ("preyed_by", preyed_by)):
        if vec.shape != (n - 1,):
            raise DimensionMismatchError(
                f"{name} must have length n-1 = {n - 1}, got shape {vec.shape}"
            )
    for k in range(n - 1):
        _positive(death[k], f"a({k + 2},0)")
        _positive(prey_on[k], f"a({k + 2},{k + 1})")
        _positive(preyed_by[k], f"a({k + 1},{k + 2})")

    return FoodChain(
        n=n,
        a10=a10,
        a11=a11,
        death=_readonly(death),
        prey_on=_readonly(prey_on),
        preyed_by=_readonly(preyed_by),
    )


def _noise_rank(eigvals: np.ndarray) -> int:
    lam_max = float(eigvals.max(initial=0.0))
    return int(np.sum(eigvals > PSD_RTOL * lam_max)) if lam_max > 0.0 else 0


def noise_from_sigma(sigma) -> NoiseModel:
    """Build a NoiseModel from a covariance matrix (gamma left unset)."""
    sigma = np.array(sigma, dtype=float)
    if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1]:
        raise DimensionMismatchError(f"sigma must be square, got shape {sigma.shape}")
    if not np.all(np.isfinite(sigma)):
        raise NotPositiveSemidefiniteError("sigma contains non-finite entries")
    scale = float(np.abs(sigma).max(initial=0.0))
    if np.abs(sigma - sigma.T).max(initial=0.0) > SYMMETRY_RTOL * (1.0 + scale):
        raise DimensionMismatchError("sigma is not symmetric within tolerance")
    sigma = 0.5 * (sigma + sigma.T)
    eigvals = np.linalg.eigvalsh(sigma)
    lam_max = float(eigvals.max(initial=0.0))
    if eigvals.min(initial=0.0) < -PSD_RTOL * max(lam_max, 1e-300):
        raise NotPositiveSemidefiniteError(
            f"sigma has eigenvalue {eigvals.min():g} below -{PSD_RTOL:g} * lambda_max"
        )
    return NoiseModel(sigma=_readonly(sigma), gamma=None, rank=_noise_rank(eigvals))


def noise_from_gamma(gamma) -> NoiseModel:
    """Build a NoiseModel from a factor; sigma is derived as gamma^T gamma.

    Supplying gamma directly is the natural way to express perfectly
    correlated environments, e.g. one shared Brownian motion: a single
    nonzero row makes sigma rank one.
    """
    gamma = np.array(gamma, dtype=float)
    if gamma.ndim != 2 or gamma.shape[0] != gamma.shape[1]:
        raise DimensionMismatchError(f"gamma must be square, got shape {gamma.shape}")
    if not np.all(np.isfinite(gamma)):
        raise NotPositiveSemidefiniteError("gamma contains non-finite entries")
    sigma = gamma.T @ gamma
    sigma = 0.5 * (sigma + sigma.T)
    eigvals = np.linalg.eigvalsh(sigma)
    return NoiseModel(sigma=_readonly(sigma), gamma=_readonly(gamma), rank=_noise_rank(eigvals))


def zero_noise(n: int) -> NoiseModel:
    """Deterministic mode: sigma = 0."""
    z = np.zeros((n, n))
    return NoiseModel(sigma=_readonly(z), gamma=_readonly(z), rank=0)


def factor_noise(noise: NoiseModel) -> NoiseModel:
    """Return a NoiseModel with gamma populated so that gamma^T gamma = sigma.

    Uses a symmetric eigendecomposition; eigenvalues in
    [-PSD_RTOL * lambda_max, 0) are clamped to zero so rank-deficient
    covariances factor cleanly.  Anything below the clamp raises.
    """
    if noise.gamma is not None:
        return noise
    eigvals, eigvecs = np.linalg.eigh(noise.sigma)
    lam_max = float(eigvals.max(initial=0.0))
    if eigvals.min(initial=0.0) < -PSD_RTOL * max(lam_max, 1e-300):
        raise NotPositiveSemidefiniteError(
            f"sigma has eigenvalue {eigvals.min():g} below the clamp threshold"
        )
    clamped = np.clip(eigvals, 0.0, None)
    gamma = np.sqrt(clamped)[:, None] * eigvecs.T  # gamma^T gamma = V diag(lam) V^T
    resid = np.abs(gamma.T @ gamma - noise.sigma).max(initial=0.0)
    scale = float(np.abs(noise.sigma).max(initial=0.0))
    if resid > FACTOR_RTOL * (1.0 + scale):
        raise NotPositiveSemidefiniteError(
            f"factorization residual {resid:g} exceeds tolerance"
        )
    return NoiseModel(sigma=noise.sigma, gamma=_readonly(gamma), rank=noise.rank)


def effective_rates(chain: FoodChain, noise: NoiseModel) -> EffectiveRates:
    """Shift growth/death rates by half the per-species noise variance."""
    if noise.n != chain.n:
        raise DimensionMismatchError(
            f"noise dimension {noise.n} does not match chain with n={chain.n}"
        )
    half = 0.5 * noise.diag()
    tilde = np.concatenate(([chain.a10 - half[0]], chain.death + half[1:]))
    return EffectiveRates(tilde_a=_readonly(tilde))
