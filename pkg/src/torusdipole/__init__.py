"""Charged particle on a torus surface threaded by an axial filiform current.

Spectral simulation of stationary states, energy levels and toroidal-dipole
expectation values.  All quantities are dimensionless: energies in units of
hbar^2/(2 m_p R^2), toroidal dipoles in hbar R/(10 m_p) and currents in
I_0 = pi hbar/(mu_0 q R).
"""

__version__ = "0.1.0"

from torusdipole.integrals import (
    DomainError,
    QuadratureError,
    fourier_integral_In,
    kernel_K1,
    kernel_K2,
    log2_integral_Iln2,
    log_integral_Iln,
    periodic_mean,
    quadrature_periodic,
    taylor_Iln2,
)
from torusdipole.operators import (
    BasisKind,
    BasisSpec,
    Geometry,
    OperatorMatrix,
    assemble_hamiltonian,
    assemble_t3,
)
from torusdipole.spectral import Spectrum, eigendecompose, expectation_t3, level_split

__all__ = [
    "BasisKind",
    "BasisSpec",
    "DomainError",
    "Geometry",
    "OperatorMatrix",
    "QuadratureError",
    "Spectrum",
    "assemble_hamiltonian",
    "assemble_t3",
    "eigendecompose",
    "expectation_t3",
    "fourier_integral_In",
    "kernel_K1",
    "kernel_K2",
    "level_split",
    "log2_integral_Iln2",
    "log_integral_Iln",
    "periodic_mean",
    "quadrature_periodic",
    "taylor_Iln2",
]
