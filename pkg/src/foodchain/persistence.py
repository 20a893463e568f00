"""Persistence/extinction classification of the stochastic chain.

The key scalar is kappa_tilde(j): the noise-adjusted persistence criterion
of the sub-chain 1..j.  It is strictly decreasing in j, and its sign matches
both the sign of the top equilibrium abundance x_j of the sub-chain and the
sign of the invasion rate I_j, so a single index

    j* = largest j with kappa_tilde(j) > 0

splits the chain: species 1..j* persist (their time-averaged abundances
converge to the sub-chain equilibrium) and species j*+1..n die out in mean.
For two-species chains the extinction verdicts sharpen to almost-sure
exponential decay at explicit rates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import EffectiveRates, FoodChain, NoiseModel, effective_rates, zero_noise
from .equilibrium import _sweep_extended
from .errors import (
    IndexOutOfRangeError,
    InfeasibleBoundaryError,
    NonPositiveCoefficientError,
)

_LD = np.longdouble

# |kappa_tilde| at or below this is treated as exactly zero (critical case).
CRITICAL_TOL = 1e-12

PERSISTENT = "persistent"
WEAK_EXTINCTION = "weak_extinction"
EXTINCT_EXPONENTIAL = "extinct_exponential"
CRITICAL = "critical"


@dataclass(frozen=True)
class Verdict:
    """Per-species outcome; rate is the almost-sure log-growth when known."""

    species: int
    status: str
    rate: float | None = None


@dataclass(frozen=True)
class ClassificationReport:
    kappa_tilde: np.ndarray
    kappa_det: np.ndarray
    invasion: np.ndarray
    j_star: int
    verdicts: list[Verdict]
    critical: bool
    # "strong" needs full-rank noise; degenerate noise only supports the
    # time-average statement, and "none" means even the prey dies out.
    persistence_kind: str

    def to_dict(self) -> dict:
        out: dict = {
            "n": int(self.kappa_tilde.shape[0]),
            "kappa_tilde": [float(v) for v in self.kappa_tilde],
            "kappa_det": [float(v) for v in self.kappa_det],
            "invasion": [float(v) for v in self.invasion],
            "j_star": int(self.j_star),
            "critical": bool(self.critical),
            "persistence_kind": self.persistence_kind,
            "verdicts": [],
        }
        for v in self.verdicts:
            entry: dict = {"species": v.species, "status": v.status}
            if v.rate is not None:
                entry["rate"] = float(v.rate)
            out["verdicts"].append(entry)
        return out


def _check_index(chain: FoodChain, j: int) -> None:
    if not isinstance(j, (int, np.integer)) or not (1 <= j <= chain.n):
        raise IndexOutOfRangeError(f"index j={j!r} outside 1..{chain.n}")


def _criterion(chain: FoodChain, growth: float, death_of, j: int) -> float:
    """Shared kernel for the persistence criterion of the 1..j sub-chain.

    growth is the (effective) prey growth rate; death_of(m) the (effective)
    death rate of predator m.  For j >= 2:

        growth - (a11/a(2,1)) * [ death(2) + sum over even m <= j of
                  (prod_{i=2}^{m/2} a(2i-2,2i-1)/a(2i,2i-1)) death(m) ]
               - sum over odd m, 3 <= m <= j, of
                  (prod_{i=1}^{(m-1)/2} a(2i-1,2i)/a(2i+1,2i)) death(m)

    with empty sums/products 0/1, so j = 2 and 3 come out of the same code.
    Evaluated in extended precision: the sum cancels near the persistence
    threshold, and sign agreement with the equilibrium solve is tested at a
    1e-12 zero threshold.
    """
    if j == 1:
        return float(growth)
    k = j // 2 if j % 2 == 0 else (j - 1) // 2
    ell = j // 2 - 1 if j % 2 == 0 else (j - 1) // 2
    bracket = _LD(death_of(2))
    prod = _LD(1.0)
    for m in range(2, k + 1):
        prod *= _LD(chain.rate_eaten(2 * m - 2)) / _LD(chain.rate_eats(2 * m))
        bracket += prod * _LD(death_of(2 * m))
    total = _LD(growth) - (_LD(chain.a11) / _LD(chain.rate_eats(2))) * bracket
    prod = _LD(1.0)
    for m in range(1, ell + 1):
        prod *= _LD(chain.rate_eaten(2 * m - 1)) / _LD(chain.rate_eats(2 * m + 1))
        total -= prod * _LD(death_of(2 * m + 1))
    return float(total)


def kappa_tilde(chain: FoodChain, rates: EffectiveRates, j: int) -> float:
    """Stochastic persistence criterion of the sub-chain 1..j (kappa_tilde(1) = growth)."""
    _check_index(chain, j)
    return _criterion(chain, rates.growth(), rates.death, j)


def kappa_deterministic(chain: FoodChain, j: int) -> float:
    """Zero-noise persistence criterion (raw rates in place of effective ones)."""
    _check_index(chain, j)
    return _criterion(chain, chain.a10, chain.rate_death, j)


def invasion_rate(chain: FoodChain, rates: EffectiveRates, j: int) -> float:
    """Per-capita log-growth of species j introduced into the 1..j-1 community.

    I_1 is the effective prey growth rate; for j >= 2 it is
    -ta(j,0) + a(j,j-1) * x_{j-1} with x from the length-(j-1) equilibrium.
    """
    _check_index(chain, j)
    if j == 1:
        return rates.growth()
    _, _, x = _sweep_extended(chain, rates, j - 1)
    return float(-_LD(rates.death(j)) + _LD(chain.rate_eats(j)) * x[j - 2])


def deterministic_limit_rates(chain: FoodChain, j: int) -> float:
    """Invasion rate in the zero-noise limit (the value I_j increases to as noise vanishes)."""
    _check_index(chain, j)
    return invasion_rate(chain, effective_rates(chain, zero_noise(chain.n)), j)


def lyapunov_at_boundary(chain: FoodChain, rates: EffectiveRates, j: int) -> np.ndarray:
    """Per-species Lyapunov exponents at the 1..j boundary community.

    Evaluates lambda_i = f_i(x) - sigma_ii/2 at the sub-chain equilibrium
    (padded with zeros for absent species).  By construction lambda_i = 0
    for i <= j, lambda_{j+1} equals the invasion rate, and higher predators
    decay at their effective death rates.
    """
    _check_index(chain, j)
    if kappa_tilde(chain, rates, j) <= 0.0:
        raise InfeasibleBoundaryError(
            f"sub-chain 1..{j} has kappa_tilde <= 0; its equilibrium is not feasible"
        )
    _, _, x = _sweep_extended(chain, rates, j)
    x_full = np.zeros(chain.n, dtype=_LD)
    x_full[:j] = x
    tilde_b = rates.tilde_a.astype(_LD)
    tilde_b[1:] = -tilde_b[1:]
    lam = tilde_b + chain.interaction_matrix().astype(_LD) @ x_full
    return lam.astype(float)


def apex_extension(
    chain: FoodChain,
    rates: EffectiveRates,
    new_death: float,
    new_prey_on: float,
    new_sigma: float = 0.0,
) -> float:
    """kappa_tilde(n+1) after appending one predator on top of the chain.

    Only one new term appears; with ta = new_death + new_sigma/2:

        n even: kappa_tilde(n) - (prod_{i=1}^{n/2} a(2i-1,2i)/a(2i+1,2i)) * ta
        n odd:  kappa_tilde(n) - (a11/a(2,1)) *
                (prod_{i=2}^{(n+1)/2} a(2i-2,2i-1)/a(2i,2i-1)) * ta

    where a(n+1,n) = new_prey_on supplies the deepest ratio.  The result is
    always strictly below kappa_tilde(n).
    """
    new_death = float(new_death)
    new_prey_on = float(new_prey_on)
    new_sigma = float(new_sigma)
    if not np.isfinite(new_death) or new_death <= 0.0:
        raise NonPositiveCoefficientError(f"a({chain.n + 1},0)", new_death)
    if not np.isfinite(new_prey_on) or new_prey_on <= 0.0:
        raise NonPositiveCoefficientError(f"a({chain.n + 1},{chain.n})", new_prey_on)
    if new_sigma < 0.0 or not np.isfinite(new_sigma):
        raise NonPositiveCoefficientError(f"sigma_{chain.n + 1}{chain.n + 1}", new_sigma)

    n = chain.n
    ta_new = _LD(new_death) + _LD(0.5) * _LD(new_sigma)
    base = _LD(kappa_tilde(chain, rates, n))

    def eats(level: int) -> _LD:
        return _LD(new_prey_on if level == n + 1 else chain.rate_eats(level))

    if n % 2 == 0:
        prod = _LD(1.0)
        for i in range(1, n // 2 + 1):
            prod *= _LD(chain.rate_eaten(2 * i - 1)) / eats(2 * i + 1)
        return float(base - prod * ta_new)
    prod = _LD(chain.a11) / eats(2)
    for i in range(2, (n + 1) // 2 + 1):
        prod *= _LD(chain.rate_eaten(2 * i - 2)) / eats(2 * i)
    return float(base - prod * ta_new)


def classify(chain: FoodChain, noise: NoiseModel) -> ClassificationReport:
    """Full classification of a chain under a given noise model."""
    rates = effective_rates(chain, noise)
    n = chain.n
    kt = np.array([kappa_tilde(chain, rates, j) for j in range(1, n + 1)])
    kd = np.array([kappa_deterministic(chain, j) for j in range(1, n + 1)])
    inv = np.array([invasion_rate(chain, rates, j) for j in range(1, n + 1)])

    # The criterion is strictly decreasing in j; a violation is a bug.
    assert np.all(np.diff(kt) < 0.0), "kappa_tilde must decrease strictly in j"

    j_star = 0
    for j in range(n, 0, -1):
        if kt[j - 1] > 0.0:
            j_star = j
            break

    statuses: list[str] = []
    det_rates: list[float | None] = []
    for j in range(1, n + 1):
        if j <= j_star:
            statuses.append(PERSISTENT)
        else:
            statuses.append(WEAK_EXTINCTION)
        det_rates.append(None)

    if n == 2:
        i1, i2 = float(inv[0]), float(inv[1])
        if i1 <= 0.0:
            statuses = [EXTINCT_EXPONENTIAL, EXTINCT_EXPONENTIAL]
            det_rates = [i1, -rates.death(2)]
        elif i2 < 0.0:
            statuses[1] = EXTINCT_EXPONENTIAL
            det_rates[1] = i2

    critical_mask = np.abs(kt) <= CRITICAL_TOL
    for j in np.flatnonzero(critical_mask):
        statuses[j] = CRITICAL
        det_rates[j] = None

    verdicts = [
        Verdict(species=j + 1, status=statuses[j], rate=det_rates[j]) for j in range(n)
    ]
    if kt[n - 1] > 0.0:
        kind = "strong" if noise.rank == n else "time_average"
    else:
        kind = "none"
    return ClassificationReport(
        kappa_tilde=kt,
        kappa_det=kd,
        invasion=inv,
        j_star=j_star,
        verdicts=verdicts,
        critical=bool(critical_mask.any()),
        persistence_kind=kind,
    )
