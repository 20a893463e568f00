"""Boundary-equilibrium solves for sub-chains of length j.

The expected abundances of a community in which only species 1..j are
present solve the linear system A x = a with

    row 1:  -a11 x1 - a(1,2) x2                  = -ta(1,0)
    row i:   a(i,i-1) x_{i-1} - a(i,i+1) x_{i+1} = ta(i,0)   (2 <= i < j)
    row j:   a(j,j-1) x_{j-1}                    = ta(j,0)

where ta are the effective (noise-shifted) rates.  The matrix couples each
row to its neighbours only, so a specialized elimination sweep solves it in
O(j): primed coefficients c', d' are built front to back, the last unknown
is x_j = d'_j, and a standard back-substitution recovers the rest.  A dense
partial-pivot solve is kept alongside as an independent oracle.

Numerical note: the sweep has no pivoting, and for strongly scaled chains
(coefficient ratios spanning several decades) some solution components are
tiny differences of huge intermediates.  To keep componentwise agreement
with the pivoted oracle, the sweep runs in extended precision where the
platform provides it (x86 80-bit long double) and always applies two
residual-correction passes, each solved by the same sweep.  This is cheap
at j <= 12 and makes the full random-chain test corpus agree with the
oracle to well below 1e-9.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import EffectiveRates, FoodChain
from .errors import IndexOutOfRangeError, NumericalBreakdownError, SingularMatrixError

_LD = np.longdouble

_REFINE_PASSES = 2


@dataclass(frozen=True)
class EquilibriumSolution:
    """Solution x of the length-j sub-chain system; feasible iff min(x) > 0."""

    j: int
    x: np.ndarray
    feasible: bool


@dataclass(frozen=True)
class SweepCoefficients:
    """Primed coefficients of the elimination sweep; x_j equals d_prime[-1]."""

    c_prime: np.ndarray
    d_prime: np.ndarray


def _check_subchain(chain: FoodChain, j: int, upper: int | None = None) -> None:
    hi = chain.n if upper is None else upper
    if not isinstance(j, (int, np.integer)) or not (1 <= j <= hi):
        raise IndexOutOfRangeError(f"sub-chain index j={j!r} outside 1..{hi}")


def build_system(chain: FoodChain, rates: EffectiveRates, j: int):
    """Assemble (A, a) for the length-j sub-chain equilibrium."""
    _check_subchain(chain, j)
    a_mat = np.zeros((j, j))
    a_mat[0, 0] = -chain.a11
    if j >= 2:
        a_mat[0, 1] = -chain.rate_eaten(1)
    for i in range(2, j + 1):
        a_mat[i - 1, i - 2] = chain.rate_eats(i)
        if i < j:
            a_mat[i - 1, i] = -chain.rate_eaten(i)
    rhs = rates.tilde_a[:j].copy()
    rhs[0] = -rhs[0]
    return a_mat, rhs


def _sweep_kernel(a11, eats, eaten, d, j: int):
    """One pass of the primed recursion plus back-substitution.

    d is the right-hand side (first entry already negated); eats[k] is
    a(k+2,k+1) and eaten[k] is a(k+1,k+2).  Works in whatever dtype the
    inputs carry.  With d = (-ta(1,0), ta(2,0), ...) this is

        c'_1 = c_1 / (-a11)                d'_1 = d_1 / (-a11)
        c'_i = c_i / (-f_i c'_{i-1})       d'_i = (d_i - f_i d'_{i-1}) / (-f_i c'_{i-1})

    for c_i = -a(i,i+1), f_i = a(i,i-1); row i becomes x_i + c'_i x_{i+1} = d'_i,
    so x_j = d'_j and x_i = d'_i - c'_i x_{i+1} on the way back.
    """
    if a11 == 0.0:
        raise NumericalBreakdownError("a11 = 0 in sweep")
    c_prime = np.empty(j - 1, dtype=d.dtype)
    d_prime = np.empty(j, dtype=d.dtype)
    d_prime[0] = d[0] / (-a11)
    if j >= 2:
        c_prime[0] = -eaten[0] / (-a11)
    for i in range(2, j + 1):
        denom = -eats[i - 2] * c_prime[i - 2]
        if denom == 0.0:
            raise NumericalBreakdownError(f"zero pivot at sweep index {i}")
        d_prime[i - 1] = (d[i - 1] - eats[i - 2] * d_prime[i - 2]) / denom
        if i < j:
            c_prime[i - 1] = -eaten[i - 1] / denom

    x = np.empty(j, dtype=d.dtype)
    x[j - 1] = d_prime[j - 1]
    for i in range(j - 2, -1, -1):
        x[i] = d_prime[i] - c_prime[i] * x[i + 1]
    return c_prime, d_prime, x


def _sweep_extended(chain: FoodChain, rates: EffectiveRates, j: int):
    """Extended-precision sweep with residual-correction passes.

    Returns (c_prime, d_prime, x) in extended precision; d_prime holds the
    raw recursion values except that its last entry is kept equal to the
    refined tail, preserving the x_j = d'_j identity exactly.
    """
    a11 = _LD(chain.a11)
    eats = chain.prey_on[: max(j - 1, 0)].astype(_LD)
    eaten = chain.preyed_by[: max(j - 1, 0)].astype(_LD)
    d = rates.tilde_a[:j].astype(_LD)
    d[0] = -d[0]
    c_prime, d_prime, x = _sweep_kernel(a11, eats, eaten, d, j)

    a_mat = np.zeros((j, j), dtype=_LD)
    a_mat[0, 0] = -a11
    if j >= 2:
        a_mat[0, 1] = -eaten[0]
    for i in range(2, j + 1):
        a_mat[i - 1, i - 2] = eats[i - 2]
        if i < j:
            a_mat[i - 1, i] = -eaten[i - 1]
    for _ in range(_REFINE_PASSES):
        resid = d - a_mat @ x
        _, _, delta = _sweep_kernel(a11, eats, eaten, resid, j)
        x = x + delta
    d_prime[j - 1] = x[j - 1]
    return c_prime, d_prime, x


def forward_sweep(
    chain: FoodChain, rates: EffectiveRates, j: int
) -> tuple[SweepCoefficients, EquilibriumSolution]:
    """Solve the sub-chain system by the specialized elimination sweep.

    All denominators are nonzero for positive coefficients, so a breakdown
    here is a bug, not an input error.
    """
    _check_subchain(chain, j)
    c_prime, d_prime, x = _sweep_extended(chain, rates, j)
    x64 = x.astype(float)
    coeffs = SweepCoefficients(
        c_prime=c_prime.astype(float), d_prime=d_prime.astype(float)
    )
    coeffs.d_prime[j - 1] = x64[j - 1]  # keep the tail identity exact in float64
    sol = EquilibriumSolution(j=j, x=x64, feasible=bool(np.all(x64 > 0.0)))
    return coeffs, sol


def generic_solve(a_mat: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Oracle: dense partial-pivot Gaussian elimination (LAPACK via numpy).

    One step of iterative refinement is applied when the raw residual is
    above 1e-10 * (1 + ||rhs||_inf); for well-scaled systems the returned
    residual satisfies that bound (property-tested on random chains).
    """
    a_mat = np.asarray(a_mat, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    try:
        x = np.linalg.solve(a_mat, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(str(exc)) from exc
    if not np.all(np.isfinite(x)):
        raise SingularMatrixError("solve produced non-finite values")
    tol = 1e-10 * (1.0 + float(np.abs(rhs).max(initial=0.0)))
    resid = rhs - a_mat @ x
    if np.abs(resid).max(initial=0.0) > tol:
        try:
            x = x + np.linalg.solve(a_mat, resid)
        except np.linalg.LinAlgError as exc:
            raise SingularMatrixError(str(exc)) from exc
    return x


def _ratio_up_down(chain: FoodChain, i: int):
    # l_i = a(i,i+1) / a(i,i-1): loss-upward over gain-downward at level i.
    return _LD(chain.rate_eaten(i)) / _LD(chain.rate_eats(i))


def closed_form_c(chain: FoodChain, j: int) -> float:
    """Closed form for c'_j, 1 <= j <= n-1.

    The two-term recurrence gives c'_j / c'_{j-2} = l_j / l_{j-1} with
    l_i = a(i,i+1)/a(i,i-1), so same-parity ratios telescope:

        even j:  c'_j = c'_2 * prod_{i=2}^{j/2} l_{2i} / l_{2i-1}
        odd  j:  c'_j = c'_1 * prod_{i=1}^{(j-1)/2} l_{2i+1} / l_{2i}

    All factors are positive, so every c'_j is positive.
    """
    _check_subchain(chain, j, upper=chain.n - 1)
    if j == 1:
        return float(_LD(chain.rate_eaten(1)) / _LD(chain.a11))
    if j % 2 == 0:
        value = (
            _LD(chain.a11)
            * _LD(chain.rate_eaten(2))
            / (_LD(chain.rate_eats(2)) * _LD(chain.rate_eaten(1)))
        )
        for i in range(2, j // 2 + 1):
            value *= _ratio_up_down(chain, 2 * i) / _ratio_up_down(chain, 2 * i - 1)
    else:
        value = _LD(chain.rate_eaten(1)) / _LD(chain.a11)
        for i in range(1, (j - 1) // 2 + 1):
            value *= _ratio_up_down(chain, 2 * i + 1) / _ratio_up_down(chain, 2 * i)
    return float(value)


def closed_form_dn(chain: FoodChain, rates: EffectiveRates, j: int) -> float:
    """Closed form for d'_j = x_j of the length-j sub-chain, 1 <= j <= n.

    Unrolling the d' recurrence gives

        d'_j = P_j * [ ta(1,0)/a11 - sum_{m=2}^{j} (ta(m,0)/a(m,m-1)) * Q_{m-2} ]

    with Q_m = prod_{i=1}^{m} c'_i and P_j = 1/Q_{j-1}.  Both collapse to
    products of the parity-alternating ratios l_i = a(i,i+1)/a(i,i-1):
    even-length Q is l_2 l_4 ..., odd-length Q is (a(1,2)/a11) l_3 l_5 ...
    Empty sums are 0 and empty products 1, so every j >= 1 is covered.
    """
    _check_subchain(chain, j)
    a11 = _LD(chain.a11)
    ta = rates.tilde_a.astype(_LD)
    bracket = ta[0] / a11
    even_prod = _LD(1.0)  # prod of l_{2i} for even death indices seen so far
    odd_prod = _LD(1.0)   # prod of l_{2i+1} for odd death indices seen so far
    for m in range(2, j + 1):
        if m % 2 == 0:
            term = (ta[m - 1] / _LD(chain.rate_eats(m))) * even_prod
        else:
            term = (ta[m - 1] / _LD(chain.rate_eats(m))) * odd_prod * (
                _LD(chain.rate_eaten(1)) / a11
            )
        bracket -= term
        if m < j:  # products feed later terms only; a(j,j+1) may not exist
            if m % 2 == 0:
                even_prod *= _ratio_up_down(chain, m)
            else:
                odd_prod *= _ratio_up_down(chain, m)
    if j % 2 == 1:
        prefactor = _LD(1.0)
        for i in range(1, (j - 1) // 2 + 1):
            prefactor /= _ratio_up_down(chain, 2 * i)
    else:
        prefactor = a11 / _LD(chain.rate_eaten(1))
        for i in range(1, (j - 2) // 2 + 1):
            prefactor /= _ratio_up_down(chain, 2 * i + 1)
    return float(prefactor * bracket)
