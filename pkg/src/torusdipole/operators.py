"""Hamiltonian and toroidal-dipole matrices in the momentum (Lambda) and parity bases.

Basis functions are F_n = a/(2 pi R) e^{i(n t + m phi)} / sqrt(a + cos t).  With
the surface measure r^2 (a + cos t) dt dphi, a matrix element of an operator O
reduces to

    <F_n1|O|F_n2> = (1/2pi) int e^{-i n1 t} sqrt(h) O[e^{i n2 t}/sqrt(h)] dt,  h = a + cos t,

which is what the ``*_oracle`` functions evaluate by periodic quadrature.  The
closed forms are written in terms of the offset n = n2 - n1 (row n2 - n, column n2).
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from torusdipole.integrals import (
    QUAD_EPS,
    _In,
    _Iln,
    _Iln2,
    check_aspect,
    periodic_mean,
    sgn,
)

log = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-10
TRANSCRIPTION_TOL = 1e-8


class BasisKind(str, enum.Enum):
    LAMBDA = "lambda"
    PARITY = "parity"


class OperatorLabel(str, enum.Enum):
    FREE_H = "FreeH"
    INTERACTION_H = "InteractionH"
    TOTAL_H = "TotalH"
    T3 = "T3"


@dataclass(frozen=True)
class Geometry:
    """Torus shape and wire length.

    ``a`` is R/r, ``R_nm`` the major radius (only used for SI conversion) and
    ``L_over_R`` the wire length in units of R.
    """

    a: float
    R_nm: float = 250.0
    L_over_R: float = 8.0

    def __post_init__(self):
        object.__setattr__(self, "a", check_aspect(self.a))
        if not self.L_over_R > 0:
            raise ValueError(f"L_over_R must be positive, got {self.L_over_R}")
        if not self.R_nm > 0:
            raise ValueError(f"R_nm must be positive, got {self.R_nm}")
        if not self.lam > 0:
            raise ValueError(f"log(2 a L/R) must be positive, got {self.lam}")

    @property
    def lam(self) -> float:
        """Natural log of 2 a L / R."""
        return math.log(2.0 * self.a * self.L_over_R)


@dataclass(frozen=True)
class BasisSpec:
    m: int
    n_max: int
    kind: BasisKind = BasisKind.LAMBDA

    def __post_init__(self):
        object.__setattr__(self, "kind", BasisKind(self.kind))
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "n_max", int(self.n_max))
        if self.n_max < 1:
            raise ValueError(f"n_max must be positive, got {self.n_max}")

    @property
    def dim(self) -> int:
        return 2 * self.n_max + 1

    def labels(self) -> list[tuple[str, int]]:
        """Row labels: ('L', n) for the Lambda basis, ('+', n) / ('-', n) for parity."""
        if self.kind is BasisKind.LAMBDA:
            return [("L", n) for n in range(-self.n_max, self.n_max + 1)]
        return [("+", n) for n in range(0, self.n_max + 1)] + [("-", n) for n in range(1, self.n_max + 1)]


@dataclass
class OperatorMatrix:
    entries: np.ndarray
    basis: BasisSpec
    label: OperatorLabel
    params: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def hermitian_part(self) -> np.ndarray:
        return 0.5 * (self.entries + self.entries.conj().T)


# ---------------------------------------------------------------------------
# unit conversion
# ---------------------------------------------------------------------------

def si_scales(R_nm: float = 250.0, mass_kg: float | None = None, charge_C: float | None = None) -> dict:
    """SI values of the three scales (defaults: electron mass, elementary charge).

    Returns ``energy_J`` = hbar^2/(2 m R^2), ``dipole`` = hbar R/(10 m) in
    J s m / kg, and ``current_A`` = pi hbar/(mu_0 q R).
    """
    from scipy import constants as k

    m = k.m_e if mass_kg is None else mass_kg
    q = k.e if charge_C is None else charge_C
    R = R_nm * 1e-9
    return {
        "energy_J": k.hbar**2 / (2 * m * R**2),
        "dipole": k.hbar * R / (10 * m),
        "current_A": math.pi * k.hbar / (k.mu_0 * q * R),
    }


# ---------------------------------------------------------------------------
# free Hamiltonian
# ---------------------------------------------------------------------------

def _offdiag_free(a: float, d: int) -> float:
    """(|d| sqrt(a^2-1) + a)(sqrt(a^2-1) - a)^|d| / (a^2-1)^{3/2}."""
    r = math.sqrt(a * a - 1.0)
    d = abs(d)
    return (d * r + a) * (r - a) ** d / r**3


def free_element(a: float, m: int, n1: int, n2: int) -> float:
    a = check_aspect(a)
    diag = (n1 * n1 - 0.25) if n1 == n2 else 0.0
    return a * a * (diag + _offdiag_free(a, n1 - n2) * (m * m - 0.25))


def free_parity_element(a: float, m: int, parity: str, n1: int, n2: int, parity2: str | None = None) -> float:
    """Free Hamiltonian between parity states F(parity)_n1 and F(parity2)_n2.

    ``parity2`` defaults to ``parity``; mixed parities give exactly zero.
    """
    a = check_aspect(a)
    parity2 = parity if parity2 is None else parity2
    for p, n in ((parity, n1), (parity2, n2)):
        if p not in "+-" or len(p) != 1:
            raise ValueError(f"parity must be '+' or '-', got {p!r}")
        if n < (1 if p == "-" else 0):
            raise ValueError(f"index {n} outside the {p!r} parity range")
    if parity != parity2:
        return 0.0
    sign = 1.0 if parity == "+" else -1.0
    mq = m * m - 0.25
    if n1 == 0 and n2 == 0:
        return free_element(a, m, 0, 0)
    if n1 == 0 or n2 == 0:
        # <F+_n|H|F_0> = sqrt(2) <F_n|H|F_0>
        return math.sqrt(2.0) * a * a * _offdiag_free(a, n1 - n2) * mq
    if n1 == n2:
        n = n1
        return a * a * ((n * n - 0.25) + (_offdiag_free(a, 0) + sign * _offdiag_free(a, 2 * n)) * mq)
    return a * a * (_offdiag_free(a, n1 - n2) + sign * _offdiag_free(a, n1 + n2)) * mq


def free_element_oracle(a: float, m: int, n1: int, n2: int, eps: float = QUAD_EPS) -> float:
    """Free Hamiltonian element by applying the differential operator and integrating."""
    a = check_aspect(a)

    def f(t):
        c, s = np.cos(t), np.sin(t)
        h = a + c
        x = s / (2 * h)  # (h^{-1/2})' / h^{-1/2}
        dx = (a * c + 1) / (2 * h * h)
        d = 1j * n2 + x  # g'/g for g = e^{i n2 t}/sqrt(h)
        op = dx + d * d - 2 * x * d - m * m / h**2 + a * a / (4 * h * h)
        return np.exp(1j * (n2 - n1) * t) * (-a * a * op)

    return periodic_mean(f, eps, 2 * abs(n2 - n1) + 32).real


# ---------------------------------------------------------------------------
# interaction Hamiltonian
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def interaction_coefficients(a: float, L_over_R: float, n: int) -> tuple[float, float, float]:
    """Split <F_{n2-n}|H_I|F_{n2}> = i (c0 + n2 c1) + i^2 q for current i.

    The terms restricted to n+1 != 0, n-1 != 0 (linear) and n+2 != 0, n != 0,
    n-2 != 0 (quadratic) are simply absent at the excluded offsets; the
    log(2/(a + sqrt(a^2-1))) delta terms carry those limits exactly.
    """
    lam = math.log(2.0 * a * L_over_R)
    r = math.sqrt(a * a - 1.0)
    lg = math.log(2.0 / (a + r))
    In = lambda j: _In(a, j)  # noqa: E731
    L2 = lambda j: _Iln2(a, j)  # noqa: E731
    d = lambda j: 1.0 if j == 0 else 0.0  # noqa: E731

    guarded = 0.0
    if n + 1 != 0:
        guarded += (In(n + 2) - In(n)) / (4 * (n + 1))
    if n - 1 != 0:
        guarded += (In(n) - In(n - 2)) / (4 * (n - 1))
    c1 = a * (-(lam / 2) * (d(n + 1) + d(n - 1)) - (lg / 2) * (d(n + 1) + d(n - 1)) - guarded)
    c0 = a * (
        -lam * (In(n + 2) - In(n - 2)) / 8
        + (In(n + 2) - In(n - 2)) / 8
        - ((n + 1) * L2(n + 1) + (n - 1) * L2(n - 1)) / 8
        - (a / 4) * (lam * (In(n + 1) - In(n - 1)) + n * L2(n))
    )

    band = d(n + 2) + 2 * d(n) + d(n - 2)
    tail = 2 * lg * band
    if n + 2 != 0:
        tail += (In(n + 3) - In(n + 1)) / (n + 2)
    if n != 0:
        tail += 2 * (In(n + 1) - In(n - 1)) / n
    if n - 2 != 0:
        tail += (In(n - 1) - In(n - 3)) / (n - 2)
    q = (lam * lam * band + lam * tail + (L2(n + 2) + 2 * L2(n) + L2(n - 2))) / 16
    return c0, c1, q


def interaction_element(geometry: Geometry, n2: int, n: int, i: float) -> float:
    """<F_{n2-n}|H_I|F_{n2}> for current i (units of I_0); independent of m."""
    c0, c1, q = interaction_coefficients(geometry.a, geometry.L_over_R, int(n))
    return i * (c0 + n2 * c1) + i * i * q


def interaction_element_oracle(geometry: Geometry, n1: int, n2: int, i: float, eps: float = QUAD_EPS) -> complex:
    """<F_n1|H_I|F_n2> by applying the interaction operator to F_n2 and integrating."""
    a, lam = geometry.a, geometry.lam

    def f(t):
        c, s = np.cos(t), np.sin(t)
        h = a + c
        big = lam - np.log(h)  # log(2a L / (R h))
        d = 1j * n2 + s / (2 * h)
        op = (
            1j * i * a * big * c * d
            + 0.5j * i * a * s / h * (c - (a + 2 * c) * big)
            + i * i * c * c * big * big / 4
        )
        return np.exp(1j * (n2 - n1) * t) * op

    return periodic_mean(f, eps, 2 * abs(n2 - n1) + 32)


# ---------------------------------------------------------------------------
# toroidal dipole
# ---------------------------------------------------------------------------

def t3_free_element(a: float, n2: int, n: int) -> float:
    """<F_{n2-n}| T3^(j,0) |F_{n2}> in units hbar R/(10 m_p)."""
    a = check_aspect(a)
    r = math.sqrt(a * a - 1.0)
    d = lambda j: 1.0 if j == 0 else 0.0  # noqa: E731
    inner = (
        0.75 * (n2 * (d(n + 2) + d(n - 2)) - 0.5 * (d(n + 2) - d(n - 2)))
        + n2 * (a * a + 1) / a * (d(n + 1) + d(n - 1))
        + (a * a - 2) / (4 * a) * (d(n + 1) - d(n - 1))
        + 2.5 * n2 * d(n)
        - sgn(n) * (a * a - 1) / 2 * (r - a) ** abs(n)
    )
    return -inner


def t3_theta_element(a: float, n1: int, n2: int) -> float:
    """<F_n1| T3^(theta) |F_n2>: the five-band theta component (units hbar R/(10 m_p))."""
    a = check_aspect(a)
    k = n1 - n2
    band = {0: 2.5 * a, 1: a * a + 1, -1: a * a + 1, 2: 0.75 * a, -2: 0.75 * a}.get(k, 0.0)
    return -(n1 + n2) / (2 * a) * band


@lru_cache(maxsize=None)
def t3_current_coefficient(a: float, L_over_R: float, n: int) -> float:
    lam = math.log(2.0 * a * L_over_R)

    def stencil(g):
        return (
            0.75 * a * (g(n + 3) + g(n - 3))
            + (a * a + 1) * (g(n + 2) + g(n - 2))
            + 3.25 * a * (g(n + 1) + g(n - 1))
            + 2 * (a * a + 1) * g(n)
        )

    delta = stencil(lambda j: 1.0 if j == 0 else 0.0)
    logs = stencil(lambda j: _Iln(a, j))
    return (lam * delta - logs) / (4 * a * a)


def t3_current_element(geometry: Geometry, n: int, i: float) -> float:
    """<F_{n2-n}| T3^(j,I) |F_{n2}>; proportional to i and independent of n2."""
    return i * t3_current_coefficient(geometry.a, geometry.L_over_R, int(n))


def t3_element(geometry: Geometry, n2: int, n: int, i: float) -> float:
    return t3_free_element(geometry.a, n2, n) + t3_current_element(geometry, n, i)


def t3_element_oracle(geometry: Geometry, n1: int, n2: int, i: float, eps: float = QUAD_EPS) -> complex:
    """<F_n1|T3^(j)|F_n2> from the current-weighted differential operator."""
    a, lam = geometry.a, geometry.lam

    def f(t):
        c, s = np.cos(t), np.sin(t)
        h = a + c
        w = 3 * a * np.cos(2 * t) + 4 * (a * a + 1) * c + 5 * a
        a_theta = 0.5 * i * (lam - np.log(h)) * c
        op = 1j * w / (2 * a) * (1j * n2 + s / (2 * h)) + w / (2 * a * a) * a_theta
        return np.exp(1j * (n2 - n1) * t) * op

    return periodic_mean(f, eps, 2 * abs(n2 - n1) + 32)


def t3_theta_element_oracle(a: float, n1: int, n2: int, eps: float = QUAD_EPS) -> complex:
    a = check_aspect(a)

    def f(t):
        c, s = np.cos(t), np.sin(t)
        h = a + c
        w = 3 * a * np.cos(2 * t) + 4 * (a * a + 1) * c + 5 * a
        tt = 1j * (9 * a * c * c + 2 * (5 * a * a + 2) * c + a * (2 * a * a + 3)) * s / (2 * a * h)
        op = 1j * w / (2 * a) * (1j * n2 + s / (2 * h)) - tt
        return np.exp(1j * (n2 - n1) * t) * op

    return periodic_mean(f, eps, 2 * abs(n2 - n1) + 32)


# ---------------------------------------------------------------------------
# assembly
# ---------------------------------------------------------------------------

def parity_transform(n_max: int) -> np.ndarray:
    """Orthogonal U with (parity vector) = U (Lambda vector); H_par = U H U^T."""
    dim = 2 * n_max + 1
    u = np.zeros((dim, dim))
    col = lambda n: n + n_max  # noqa: E731
    u[0, col(0)] = 1.0
    h = 1.0 / math.sqrt(2.0)
    for n in range(1, n_max + 1):
        u[n, col(n)] = h
        u[n, col(-n)] = h
        u[n_max + n, col(n)] = h
        u[n_max + n, col(-n)] = -h
    return u


@dataclass(frozen=True)
class LambdaTerms:
    """Current-polynomial pieces of H and T3 in the Lambda basis.

    H(i) = free + i * h_lin + i^2 * h_quad and T3(i) = t3_free + i * t3_lin.
    """

    free: np.ndarray
    h_lin: np.ndarray
    h_quad: np.ndarray
    t3_free: np.ndarray
    t3_lin: np.ndarray


@lru_cache(maxsize=64)
def lambda_terms(geometry: Geometry, m: int, n_max: int) -> LambdaTerms:
    a, lr = geometry.a, geometry.L_over_R
    ns = np.arange(-n_max, n_max + 1)
    offsets = np.arange(-2 * n_max, 2 * n_max + 1)
    k = ns[None, :] - ns[:, None]  # n2 - n1
    n2 = np.broadcast_to(ns[None, :], k.shape)
    kk = k + 2 * n_max

    coeffs = np.array([interaction_coefficients(a, lr, int(o)) for o in offsets])
    c0, c1, q = coeffs[kk, 0], coeffs[kk, 1], coeffs[kk, 2]
    offdiag = np.array([_offdiag_free(a, int(o)) for o in offsets])
    free = a * a * (np.diag(ns * ns - 0.25) + offdiag[kk] * (m * m - 0.25))

    r = math.sqrt(a * a - 1.0)
    t3_free = np.zeros(k.shape)
    t3_free -= np.where(np.abs(k) == 2, 0.75 * n2, 0.0)
    t3_free -= np.where(k == -2, -0.375, 0.0) + np.where(k == 2, 0.375, 0.0)
    t3_free -= np.where(np.abs(k) == 1, n2 * (a * a + 1) / a, 0.0)
    t3_free -= np.where(k == -1, (a * a - 2) / (4 * a), 0.0) - np.where(k == 1, (a * a - 2) / (4 * a), 0.0)
    t3_free -= np.where(k == 0, 2.5 * n2, 0.0)
    t3_free += np.sign(k) * (a * a - 1) / 2 * (r - a) ** np.abs(k)
    t3_lin = np.array([t3_current_coefficient(a, lr, int(o)) for o in offsets])[kk]

    terms = LambdaTerms(free, c0 + n2 * c1, q, t3_free, t3_lin)
    for arr in (terms.free, terms.h_lin, terms.h_quad, terms.t3_free, terms.t3_lin):
        arr.setflags(write=False)
    return terms


@lru_cache(maxsize=64)
def _parity_free(a: float, m: int, n_max: int) -> np.ndarray:
    dim = 2 * n_max + 1
    out = np.zeros((dim, dim))
    plus = range(0, n_max + 1)
    minus = range(1, n_max + 1)
    for r, n1 in enumerate(plus):
        for c, n2 in enumerate(plus):
            out[r, c] = free_parity_element(a, m, "+", n1, n2)
    for r, n1 in enumerate(minus):
        for c, n2 in enumerate(minus):
            out[n_max + 1 + r, n_max + 1 + c] = free_parity_element(a, m, "-", n1, n2)
    out.setflags(write=False)
    return out


def _symmetrize(mat: np.ndarray, what: str) -> np.ndarray:
    residual = float(np.max(np.abs(mat - mat.conj().T))) if mat.size else 0.0
    log.debug("%s pre-symmetrization hermiticity residual %.3e", what, residual)
    if residual > TRANSCRIPTION_TOL * max(1.0, float(np.max(np.abs(mat)))):
        raise ArithmeticError(f"{what} is not Hermitian (residual {residual:.3e}); element transcription fault")
    return 0.5 * (mat + mat.conj().T)


def assemble_hamiltonian(geometry: Geometry, basis: BasisSpec, i: float, part: str = "total") -> OperatorMatrix:
    """Total (free + interaction) Hamiltonian in the requested basis.

    ``part`` may be "free", "interaction" or "total".
    """
    if not math.isfinite(i):
        raise ValueError(f"current must be finite, got {i}")
    terms = lambda_terms(geometry, basis.m, basis.n_max)
    label = {"free": OperatorLabel.FREE_H, "interaction": OperatorLabel.INTERACTION_H,
             "total": OperatorLabel.TOTAL_H}[part]
    inter = i * terms.h_lin + (i * i) * terms.h_quad
    if basis.kind is BasisKind.LAMBDA:
        mat = {"free": terms.free, "interaction": inter, "total": terms.free + inter}[part]
    else:
        u = parity_transform(basis.n_max)
        free = _parity_free(geometry.a, basis.m, basis.n_max)
        if part == "free" or i == 0:
            inter_p = np.zeros_like(free)
        else:
            inter_p = u @ inter @ u.T
        mat = {"free": free, "interaction": inter_p, "total": free + inter_p}[part]
    mat = _symmetrize(np.array(mat), label.value)
    return OperatorMatrix(mat, basis, label, {"a": geometry.a, "L_over_R": geometry.L_over_R, "i": i})


def assemble_t3(geometry: Geometry, basis: BasisSpec, i: float) -> OperatorMatrix:
    """Toroidal-dipole matrix T3^(j,0) + T3^(j,I); not Hermitian in general."""
    terms = lambda_terms(geometry, basis.m, basis.n_max)
    mat = terms.t3_free + i * terms.t3_lin
    if basis.kind is BasisKind.PARITY:
        u = parity_transform(basis.n_max)
        mat = u @ mat @ u.T
    return OperatorMatrix(np.array(mat), basis, OperatorLabel.T3,
                          {"a": geometry.a, "L_over_R": geometry.L_over_R, "i": i})


def to_lambda(vectors: np.ndarray, basis: BasisSpec) -> np.ndarray:
    """Express column vectors given in ``basis`` in the Lambda basis."""
    if basis.kind is BasisKind.LAMBDA:
        return vectors
    return parity_transform(basis.n_max).T @ vectors
