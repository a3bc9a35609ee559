"""Angular integrals over the torus cross-section.

The family used by the matrix elements is

    I_n(a)       = (1/2pi) int e^{in t} / (a + cos t) dt
    Iln_n(a)     = (1/2pi) int e^{in t} ln(a + cos t) dt
    Iln2_n(a)    = (1/2pi) int e^{in t} ln^2(a + cos t) dt

plus the two kernels K1, K2 entering the toroidal-dipole matrix elements.
Closed forms are provided where they exist; every closed form has a
quadrature twin (``*_quad``) built on the periodic trapezoid rule, which is
spectrally accurate for these analytic periodic integrands.
"""

from __future__ import annotations

import math
import warnings
from functools import lru_cache
from typing import Callable

import numpy as np

A_MIN = 1.0 + 1e-9
QUAD_EPS = 1e-13
QUAD_MAX_POINTS = 2**18


class DomainError(ValueError):
    """Raised when the aspect ratio is outside a > 1."""


class QuadratureError(RuntimeError):
    """Raised when a quadrature refinement ladder does not stabilize."""

    def __init__(self, message: str, last: complex, previous: complex):
        super().__init__(f"{message} (last={last!r}, previous={previous!r})")
        self.last = last
        self.previous = previous


def check_aspect(a: float) -> float:
    a = float(a)
    if not math.isfinite(a) or a < A_MIN:
        raise DomainError(f"aspect ratio must satisfy a > 1 (got a={a!r}, minimum {A_MIN!r})")
    return a


def sgn(n: int) -> int:
    """Sign with sgn(0) = 0."""
    return (n > 0) - (n < 0)


# ---------------------------------------------------------------------------
# periodic trapezoid quadrature
# ---------------------------------------------------------------------------

def quadrature_periodic(integrand: Callable[[np.ndarray], np.ndarray], points: int) -> complex:
    """Equal-spaced trapezoid sum of ``integrand`` over one period [0, 2pi).

    Returns the plain integral (no 1/2pi normalization); see
    :func:`periodic_mean` for the normalized, self-refining variant.
    """
    points = int(points)
    if points < 8:
        raise ValueError(f"need at least 8 quadrature points, got {points}")
    theta = 2.0 * np.pi * np.arange(points) / points
    values = np.asarray(integrand(theta))
    return complex(values.sum() * (2.0 * np.pi / points))


def periodic_mean(
    integrand: Callable[[np.ndarray], np.ndarray],
    eps: float = QUAD_EPS,
    start: int = 16,
    max_points: int = QUAD_MAX_POINTS,
) -> complex:
    """(1/2pi) times the period integral, doubling points until two successive
    results differ by less than ``eps``.

    ``start`` is rounded up to a power of two.  Callers integrating a harmonic
    e^{in t} should pass ``start > 2|n|`` so the first rungs are not aliased.
    """
    points = 1 << max(3, math.ceil(math.log2(max(start, 8))))
    before = previous = quadrature_periodic(integrand, points) / (2.0 * np.pi)
    while points * 2 <= max_points:
        points *= 2
        current = quadrature_periodic(integrand, points) / (2.0 * np.pi)
        if abs(current - previous) < eps:
            return current
        before, previous = previous, current
    raise QuadratureError(
        f"periodic quadrature did not reach eps={eps:g} within {max_points} points", previous, before
    )


def _harmonic_start(n: int) -> int:
    return max(16, 2 * abs(n) + 16)


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _In(a: float, n: int) -> float:
    r = math.sqrt(a * a - 1.0)
    return (r - a) ** abs(n) / r


def fourier_integral_In(a: float, n: int) -> float:
    """I_n(a) = (-a + sqrt(a^2-1))^|n| / sqrt(a^2-1)."""
    return _In(check_aspect(a), int(n))


@lru_cache(maxsize=None)
def _Iln(a: float, n: int) -> float:
    if n == 0:
        return math.log((a + math.sqrt(a * a - 1.0)) / 2.0)
    return (_In(a, n - 1) - _In(a, n + 1)) / (2.0 * n)


def log_integral_Iln(a: float, n: int) -> float:
    """Fourier coefficient of ln(a + cos t).

    For n != 0 this is (I_{n-1} - I_{n+1}) / (2n), obtained by integrating by
    parts; for n = 0 it is ln((a + sqrt(a^2-1))/2).
    """
    return _Iln(check_aspect(a), int(n))


@lru_cache(maxsize=None)
def _Iln2(a: float, n: int) -> float:
    n = abs(n)

    def f(t):
        return np.cos(n * t) * np.log(a + np.cos(t)) ** 2

    return periodic_mean(f, start=_harmonic_start(n)).real


def log2_integral_Iln2(a: float, n: int) -> float:
    """Fourier coefficient of ln^2(a + cos t), by refined periodic quadrature.

    No closed form exists; the trapezoid ladder is refined until successive
    doublings agree to 1e-13.
    """
    return _Iln2(check_aspect(a), int(n))


def taylor_Iln2(a: float, n: int, order: int | None = None) -> float:
    """Large-a series for Iln2_n(a), truncated at power ``order`` of 1/a.

    Writes ln^2(a + cos t) = sum_k c_k (cos t / a)^k with
    c_0 = ln^2 a and c_k = (-1)^k (2/k) (H_{k-1} - ln a) for k >= 1, and uses
    the exact harmonic content of cos^k.  The default ``order = |n|`` keeps
    only the lowest-order term of each harmonic:

        Iln2_0 ~ ln^2 a,   Iln2_n ~ (-1)^n 2^{1-n} (H_{n-1} - ln a) / (n a^n).
    """
    a = check_aspect(a)
    n = abs(int(n))
    if a < 10.0:
        warnings.warn(f"taylor_Iln2 is a large-a expansion; a={a} < 10", stacklevel=2)
    if order is None:
        order = n
    if order < n:
        return 0.0
    ln_a = math.log(a)
    total = 0.0
    harmonic = 0.0  # H_{k-1}
    for k in range(0, order + 1):
        if k == 0:
            ck = ln_a * ln_a
        else:
            ck = (-1) ** k * (2.0 / k) * (harmonic - ln_a)
            harmonic += 1.0 / k
        if k < n or (k - n) % 2:
            continue
        # (1/2pi) int cos^k t cos(n t) dt
        weight = math.comb(k, (k - n) // 2) / 2.0**k
        total += ck * weight / a**k
    return total


# ---------------------------------------------------------------------------
# toroidal-dipole kernels
# ---------------------------------------------------------------------------

def kernel_K1(n2: int, n: int, a: float) -> complex:
    """Five-delta closed form of the polynomial part of the dipole kernel."""
    a = check_aspect(a)
    n2, n = int(n2), int(n)
    if n == -2:
        return 0.75j * (n2 - 0.5)
    if n == 2:
        return 0.75j * (n2 + 0.5)
    if n == -1:
        return 1j / (4 * a) * (4 * n2 * (a * a + 1) + a * a - 2)
    if n == 1:
        return 1j / (4 * a) * (4 * n2 * (a * a + 1) - a * a + 2)
    if n == 0:
        return 2.5j * n2
    return 0j


def kernel_K2(n: int, a: float) -> complex:
    """-i sgn(n) (a^2-1)/2 (sqrt(a^2-1) - a)^|n|; odd in n."""
    a = check_aspect(a)
    n = int(n)
    r = math.sqrt(a * a - 1.0)
    return -1j * sgn(n) * (a * a - 1.0) / 2.0 * (r - a) ** abs(n)


# ---------------------------------------------------------------------------
# quadrature twins
# ---------------------------------------------------------------------------

def In_quad(a: float, n: int, eps: float = QUAD_EPS) -> float:
    a = check_aspect(a)
    return periodic_mean(lambda t: np.cos(n * t) / (a + np.cos(t)), eps, _harmonic_start(n)).real


def Iln_quad(a: float, n: int, eps: float = QUAD_EPS) -> float:
    a = check_aspect(a)
    return periodic_mean(lambda t: np.cos(n * t) * np.log(a + np.cos(t)), eps, _harmonic_start(n)).real


def K1_quad(n2: int, n: int, a: float, eps: float = QUAD_EPS) -> complex:
    a = check_aspect(a)

    def f(t):
        c, s = np.cos(t), np.sin(t)
        poly = 3 * a * np.cos(2 * t) + 4 * (a * a + 1) * c + 5 * a
        return np.exp(1j * n * t) * (1j * n2 * poly + (3 * a * c - a * a + 2) * s)

    return periodic_mean(f, eps, _harmonic_start(n)) / (2 * a)


def K2_quad(n: int, a: float, eps: float = QUAD_EPS) -> complex:
    a = check_aspect(a)
    mean = periodic_mean(lambda t: np.exp(1j * n * t) * np.sin(t) / (a + np.cos(t)), eps, _harmonic_start(n))
    return (a * a - 1) / 2 * mean


def clear_caches() -> None:
    for fn in (_In, _Iln, _Iln2):
        fn.cache_clear()
