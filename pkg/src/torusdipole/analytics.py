"""Two-level perturbation model for the quasi-degenerate (+n, -n) pair.

In the subspace {F_n, F_-n} (n >= 2) the total Hamiltonian reads

    A_I [[1 + delta_I, eps_I], [eps_I, 1 - delta_I]]

with A_I the mean diagonal, delta_I the diagonal asymmetry and eps_I the
coupling.  The exact parameters come straight from the Lambda-basis element
formulas; the large-a forms (k-coefficients, approximate elements) are kept
alongside for the closed-form trends in n, m and a.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from torusdipole.integrals import _Iln2, check_aspect
from torusdipole.operators import Geometry, free_element, interaction_element

T3_QUANTUM = 2.5
HALF_PERIOD_DROP = 1.25
VALIDITY_RATIO = 10.0


@dataclass(frozen=True)
class TwoLevelParams:
    A_I: float
    delta_I: float
    eps_I: float

    def __post_init__(self):
        for name in ("A_I", "delta_I", "eps_I"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} is not finite")

    @property
    def ratio(self) -> float:
        """delta_I / eps_I (signed; infinite when eps_I vanishes)."""
        if self.eps_I == 0.0:
            return math.copysign(math.inf, self.delta_I) if self.delta_I else math.nan
        return self.delta_I / self.eps_I

    def eigenvalues(self) -> tuple[float, float]:
        s = math.hypot(self.eps_I, self.delta_I)
        return self.A_I * (1.0 + s), self.A_I * (1.0 - s)

    def matrix(self) -> np.ndarray:
        return self.A_I * np.array([[1.0 + self.delta_I, self.eps_I], [self.eps_I, 1.0 - self.delta_I]])


class TwoLevelSolution(NamedTuple):
    alpha_plus: float
    alpha_minus: float
    v_plus: np.ndarray
    v_minus: np.ndarray
    theta_plus: float
    theta_minus: float
    degenerate: bool


def two_level_solve(eps: float, delta: float) -> TwoLevelSolution:
    """Eigenpairs of [[1 + delta, eps], [eps, 1 - delta]].

    alpha_pm = 1 +/- sqrt(eps^2 + delta^2) and v_pm = (cos theta_pm, sin theta_pm)
    is the eigenvector of alpha_pm, so tan theta_pm = (+/- s - delta)/eps with
    s = sqrt(eps^2 + delta^2).  For eps > 0 this is
    -delta/eps +/- sqrt(1 + delta^2/eps^2); for eps < 0 the two roots of that
    expression belong to the opposite eigenvalues.  Angles lie in [-pi/2, pi/2];
    eps = 0 is the limit eps -> +0.  The fully degenerate point eps = delta = 0
    returns the canonical basis and sets ``degenerate``.
    """
    eps, delta = float(eps), float(delta)
    if not (math.isfinite(eps) and math.isfinite(delta)):
        raise ValueError(f"eps and delta must be finite (got {eps}, {delta})")
    s = math.hypot(eps, delta)
    if s == 0.0:
        e0, e1 = np.array([1.0, 0.0]), np.array([0.0, 1.0])
        return TwoLevelSolution(1.0, 1.0, e0, e1, 0.0, math.pi / 2, True)

    # tan theta_+ = (s - delta)/eps = eps/(s + delta); use the form without cancellation
    if delta >= 0:
        theta_plus = math.atan(eps / (s + delta))
    elif eps == 0.0:
        theta_plus = math.pi / 2
    else:
        theta_plus = math.atan((s - delta) / eps)
    # t_plus * t_minus = -1
    theta_minus = theta_plus - math.pi / 2 if theta_plus >= 0 else theta_plus + math.pi / 2

    def vec(theta):
        return np.array([math.cos(theta), math.sin(theta)])

    return TwoLevelSolution(1.0 + s, 1.0 - s, vec(theta_plus), vec(theta_minus), theta_plus, theta_minus, False)


def _check_pair(n: int) -> int:
    n = int(n)
    if n < 2:
        raise ValueError(f"the two-level model needs n >= 2 (got n={n})")
    return n


def pair_block(geometry: Geometry, n: int, m: int, i: float) -> np.ndarray:
    """Exact 2x2 block of the total Hamiltonian on (F_n, F_-n)."""
    a = geometry.a
    pp = free_element(a, m, n, n) + interaction_element(geometry, n, 0, i)
    mm = free_element(a, m, -n, -n) + interaction_element(geometry, -n, 0, i)
    # row -n, column n: offset 2n
    pm = free_element(a, m, -n, n) + interaction_element(geometry, n, 2 * n, i)
    return np.array([[pp, pm], [pm, mm]])


def exact_two_level_params(geometry: Geometry, n: int, m: int, i: float) -> TwoLevelParams:
    """A_I, delta_I, eps_I from the exact free and interaction elements."""
    n = _check_pair(n)
    block = pair_block(geometry, n, m, i)
    A_I = 0.5 * (block[0, 0] + block[1, 1])
    if A_I <= 0:
        raise ValueError(f"A_I = {A_I} is not positive; outside the two-level regime")
    return TwoLevelParams(A_I, (block[0, 0] - block[1, 1]) / (2 * A_I), block[0, 1] / A_I)


def a_i_variants(geometry: Geometry, n: int, m: int, i: float) -> dict[str, float]:
    """Three evaluations of A_I.

    ``exact``   mean diagonal of the exact 2x2 block;
    ``display`` A + (i^2/8) lam (lam - 2 ln a + Iln2_2 + Iln2_0), lam = ln(2aL/R);
    ``large_a`` a^2 (n^2 - 1/4) + (i^2/8) lam ln(2L/R).
    The three disagree in the i^2 term; see the tests for the measured gaps.
    """
    n = _check_pair(n)
    a, lam = geometry.a, geometry.lam
    A = free_element(a, m, n, n)
    display = A + i * i / 8 * lam * (lam - 2 * math.log(a) + _Iln2(a, 2) + _Iln2(a, 0))
    large_a = a * a * (n * n - 0.25) + i * i / 8 * lam * math.log(2 * geometry.L_over_R)
    return {"exact": exact_two_level_params(geometry, n, m, i).A_I, "display": display, "large_a": large_a}


def _harmonic(k: int) -> float:
    return sum(1.0 / j for j in range(1, k + 1))


@dataclass(frozen=True)
class KCoefficients:
    """Large-a ratio delta_I/eps_I = k1 x / (1 + k2 x + k3 x^2), x = I/I_0."""

    k1: float
    k2: float
    k3: float
    n: int
    m: int
    a: float

    def ratio(self, i: float) -> float:
        return ratio(i, self)

    def denominator(self, i: float) -> float:
        return 1.0 + self.k2 * i + self.k3 * i * i


def k_coefficients(a: float, n: int, m: int, L_over_R: float = 8.0) -> KCoefficients:
    a = check_aspect(a)
    n = _check_pair(n)
    m = int(m)
    if a < 2.0:
        warnings.warn(f"k-coefficients are a large-a approximation; a={a} < 2", stacklevel=2)
    mq = m * m - 0.25
    k1 = n * (2 * a) ** (2 * n) / (2 * (2 * n + 1) * mq)
    k2 = -(2.0 ** (2 * n - 3)) * a * a / mq * (
        _harmonic(2 * n - 2) + 2 * (3 * n - 1) / (n * (2 * n - 1)) - 1 / (2.0 ** (2 * n - 3) * (2 * n - 1))
    ) / (2 * n + 1)
    k3 = 2.0 ** (2 * n - 5) * a * a / mq * (
        (2 + _harmonic(2 * n - 3)) * math.log(a) + math.log(2 * L_over_R) / 2.0 ** (2 * n - 3)
    ) / ((2 * n + 1) * (n - 1))
    return KCoefficients(k1, k2, k3, n, m, a)


def ratio(i: float, k: KCoefficients) -> float:
    return k.k1 * i / k.denominator(i)


def ratio_derivative(i: float, k: KCoefficients) -> float:
    return k.k1 * (1.0 - k.k3 * i * i) / k.denominator(i) ** 2


def divergence_current(k: KCoefficients) -> float:
    """Positive root x_d of 1 + k2 x + k3 x^2 (m = 0 sign pattern only)."""
    if not k.k3 < 0:
        raise ValueError(f"divergence current needs k3 < 0 (m = 0 pattern); got k3={k.k3}")
    return (-k.k2 - math.sqrt(k.k2 * k.k2 - 4 * k.k3)) / (2 * k.k3)


def peak_current_and_ratio(k: KCoefficients) -> tuple[float, float]:
    """(i_max, ratio_max) = (1/sqrt(k3), k1/(k2 + 2 sqrt(k3))) for k3 > 0."""
    if not k.k3 > 0:
        raise ValueError(f"peak current needs k3 > 0 (m != 0 pattern); got k3={k.k3}")
    root = math.sqrt(k.k3)
    return 1.0 / root, k.k1 / (k.k2 + 2 * root)


def predicted_observables(n: int, i: float) -> tuple[float, tuple[float, float]]:
    """Splitting n*i and the dipole pair (-5n/2, +5n/2) deep in the delta-dominated regime."""
    return n * i, (-T3_QUANTUM * n, T3_QUANTUM * n)


@dataclass(frozen=True)
class PairElements:
    diag_plus: float
    diag_minus: float
    offdiag: float


def approx_large_a_elements(a: float, n: int, m: int, i: float, L_over_R: float = 8.0,
                            include_free: bool = True) -> PairElements:
    """Large-a forms of the (n, n), (-n, -n) and (-n, n) elements.

    With ``include_free`` the free-Hamiltonian limits a^2 (n^2 - 1/4) and
    (2n+1)(m^2 - 1/4)/(2a)^{2n} are added, so the result approximates the
    total 2x2 block; otherwise only the interaction part is returned.
    """
    a = check_aspect(a)
    n = _check_pair(n)
    lam = math.log(2 * a * L_over_R)
    l2 = math.log(2 * L_over_R)
    diag_plus = n * i / 2 * (1 + i / (8 * n) * lam * l2)
    diag_minus = -n * i / 2 * (1 - i / (4 * n) * lam * l2)
    offdiag = i / (8 * a ** (2 * n - 2)) * (
        1 / (2.0 ** (2 * n - 3) * (2 * n - 1))
        - _harmonic(2 * n - 2)
        - 2 * (3 * n - 1) / (n * (2 * n - 1))
        + i / (4 * (n - 1)) * (l2 / 2.0 ** (2 * n - 3) + math.log(a) * (2 + _harmonic(2 * n - 3)))
    )
    if include_free:
        free_diag = a * a * (n * n - 0.25)
        diag_plus += free_diag
        diag_minus += free_diag
        offdiag += (2 * n + 1) * (m * m - 0.25) / (2 * a) ** (2 * n)
    return PairElements(diag_plus, diag_minus, offdiag)


def pair_isolation(eigenvalues: np.ndarray, n: int) -> float:
    """Distance from the pair (E_{2n-1}, E_{2n}) to its nearest outside level over the pair gap."""
    e = np.asarray(eigenvalues)
    if n < 1 or 2 * n >= len(e):
        raise ValueError(f"pair n={n} needs levels 2n-1, 2n within 0..{len(e) - 1}")
    lo, hi = 2 * n - 1, 2 * n
    gap = e[hi] - e[lo]
    outside = e[lo] - e[lo - 1]
    if hi + 1 < len(e):
        outside = min(outside, e[hi + 1] - e[hi])
    return math.inf if gap == 0 else float(outside / gap)
