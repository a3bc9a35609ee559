"""Dense Hermitian eigendecomposition and level observables."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from torusdipole.operators import BasisKind, BasisSpec, OperatorMatrix, to_lambda

INPUT_HERMITIAN_TOL = 1e-8


@dataclass
class Spectrum:
    """Eigenpairs sorted by ascending energy; level index eta is the column index."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    basis: BasisSpec | None = None
    params: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    @property
    def eta_labels(self) -> np.ndarray:
        return np.arange(self.dim)


@dataclass
class LevelObservables:
    eta: int
    energy: float
    t3: float
    coefficients: list[tuple[int, complex]]


def fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude entry of each column real and positive.

    Ties go to the lowest row index, so the result is reproducible.
    """
    vectors = np.array(vectors, copy=True)
    if vectors.size == 0:
        return vectors
    rows = np.argmax(np.abs(vectors) - 1e-12 * np.arange(vectors.shape[0])[:, None], axis=0)
    pivots = vectors[rows, np.arange(vectors.shape[1])]
    phases = np.where(np.abs(pivots) > 0, np.abs(pivots) / np.where(pivots == 0, 1, pivots), 1.0)
    if np.iscomplexobj(vectors):
        vectors *= phases[None, :]
    else:
        vectors *= np.real(phases)[None, :]
    return vectors


def eigendecompose(H: OperatorMatrix | np.ndarray, tol: float = INPUT_HERMITIAN_TOL) -> Spectrum:
    """Full spectrum of a Hermitian matrix with a deterministic phase convention."""
    if isinstance(H, OperatorMatrix):
        mat, basis, params = H.entries, H.basis, dict(H.params)
    else:
        mat, basis, params = np.asarray(H), None, {}
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {mat.shape}")
    scale = max(1.0, float(np.max(np.abs(mat)))) if mat.size else 1.0
    residual = float(np.max(np.abs(mat - mat.conj().T))) if mat.size else 0.0
    if residual > tol * scale:
        raise ValueError(f"matrix is not Hermitian (residual {residual:.3e})")
    if basis is not None and basis.kind is BasisKind.PARITY:
        split = basis.n_max + 1
        if not np.any(mat[:split, split:]) and not np.any(mat[split:, :split]):
            values, vectors = eigh_blocks(mat, split)
            return Spectrum(values, fix_phases(vectors), basis, params)
    values, vectors = _eigh(mat)
    return Spectrum(values, fix_phases(vectors), basis, params)


def _eigh(mat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    try:
        return scipy.linalg.eigh(mat, check_finite=True)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise ArithmeticError(f"eigensolver did not converge: {exc}") from exc


def eigh_blocks(mat: np.ndarray, split: int) -> tuple[np.ndarray, np.ndarray]:
    """Eigenpairs of a matrix that is block diagonal at ``split``, merged by energy.

    Solving the blocks separately keeps eigenvectors of nearly degenerate
    levels from different blocks unmixed; a joint solve would mix them at the
    level of roundoff / gap.
    """
    dim = mat.shape[0]
    w1, v1 = _eigh(mat[:split, :split])
    w2, v2 = _eigh(mat[split:, split:])
    values = np.concatenate([w1, w2])
    vectors = np.zeros((dim, dim), dtype=np.result_type(v1, v2))
    vectors[:split, : len(w1)] = v1
    vectors[split:, len(w1):] = v2
    order = np.argsort(values, kind="stable")
    return values[order], vectors[:, order]


def _check_same_basis(spectrum: Spectrum, t3: OperatorMatrix) -> None:
    if spectrum.basis is not None and t3.basis != spectrum.basis:
        raise ValueError(f"basis mismatch: spectrum in {spectrum.basis}, operator in {t3.basis}")
    if t3.dim != spectrum.dim:
        raise ValueError(f"dimension mismatch: {spectrum.dim} vs {t3.dim}")


def expectations_t3(spectrum: Spectrum, t3: OperatorMatrix) -> np.ndarray:
    """<T3> on every level (real part of v^H Herm(T3) v)."""
    _check_same_basis(spectrum, t3)
    v = spectrum.eigenvectors
    herm = t3.hermitian_part()
    return np.real(np.einsum("ij,ij->j", v.conj(), herm @ v))


def expectation_t3(spectrum: Spectrum, t3: OperatorMatrix, eta: int) -> float:
    _check_same_basis(spectrum, t3)
    if not 0 <= eta < spectrum.dim:
        raise IndexError(f"eta={eta} outside 0..{spectrum.dim - 1}")
    v = spectrum.eigenvectors[:, eta]
    return float(np.real(v.conj() @ t3.hermitian_part() @ v))


def level_split(spectrum: Spectrum, n: int) -> float:
    """E_{2n} - E_{2n-1}: splitting of the quasi-degenerate +/-n pair."""
    if n < 1 or 2 * n > spectrum.dim - 1:
        raise IndexError(f"pair n={n} needs levels 2n-1, 2n within 0..{spectrum.dim - 1}")
    return float(spectrum.eigenvalues[2 * n] - spectrum.eigenvalues[2 * n - 1])


def lambda_vectors(spectrum: Spectrum) -> np.ndarray:
    """Eigenvectors expressed in the Lambda basis, phase-fixed there."""
    if spectrum.basis is None:
        raise ValueError("spectrum carries no basis information")
    return fix_phases(to_lambda(spectrum.eigenvectors, spectrum.basis))


def coefficients(spectrum: Spectrum, eta: int, top_k: int | None = None) -> list[tuple[int, complex]]:
    """Largest Lambda-basis amplitudes of level ``eta`` as (n, amplitude) pairs."""
    if not 0 <= eta < spectrum.dim:
        raise IndexError(f"eta={eta} outside 0..{spectrum.dim - 1}")
    vec = lambda_vectors(spectrum)[:, eta]
    n_max = spectrum.basis.n_max
    order = sorted(range(len(vec)), key=lambda j: (-round(abs(vec[j]), 14), j))
    if top_k is not None:
        order = order[:top_k]
    return [(j - n_max, complex(vec[j])) for j in order]


def level_observables(spectrum: Spectrum, t3: OperatorMatrix, eta: int, top_k: int = 5) -> LevelObservables:
    return LevelObservables(
        eta=eta,
        energy=float(spectrum.eigenvalues[eta]),
        t3=expectation_t3(spectrum, t3, eta),
        coefficients=coefficients(spectrum, eta, top_k),
    )
