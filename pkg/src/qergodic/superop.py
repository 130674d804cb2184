"""Row-major vectorization and the Kraus <-> superoperator round trip.

``vec`` stacks rows, so a map with Kraus operators ``M_i`` is represented by
``sum_i kron(M_i, conj(M_i))`` acting on ``vec(rho)``.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError, NotPSDError
from .operators import DEFAULT_TOL, Tolerances, rank_cut

VECTORIZATION = "row-major"


def vec(a: np.ndarray) -> np.ndarray:
    return np.asarray(a, dtype=complex).reshape(-1)


def unvec(v: np.ndarray, dim: int | None = None) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    if dim is None:
        dim = int(round(np.sqrt(v.size)))
    if dim * dim != v.size:
        raise DimensionMismatchError(f"cannot reshape length {v.size} to a square matrix")
    return v.reshape(dim, dim)


def superoperator_from_kraus(kraus) -> np.ndarray:
    kraus = [np.asarray(k, dtype=complex) for k in kraus]
    d = kraus[0].shape[0]
    out = np.zeros((d * d, d * d), dtype=complex)
    for k in kraus:
        out += np.kron(k, np.conj(k))
    return out


def left_multiplication(a: np.ndarray) -> np.ndarray:
    """Superoperator of ``X -> A X``."""
    return np.kron(a, np.eye(a.shape[0]))


def right_multiplication(a: np.ndarray) -> np.ndarray:
    """Superoperator of ``X -> X A``."""
    return np.kron(np.eye(a.shape[0]), a.T)


def apply_superoperator(s: np.ndarray, rho: np.ndarray) -> np.ndarray:
    d = rho.shape[0]
    return unvec(s @ vec(rho), d)


def choi_from_superoperator(s: np.ndarray) -> np.ndarray:
    """Choi matrix ``sum_i vec(M_i) vec(M_i)^dag`` (row-major ``vec``)."""
    d = int(round(np.sqrt(s.shape[0])))
    return s.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)


def superoperator_from_choi(j: np.ndarray) -> np.ndarray:
    d = int(round(np.sqrt(j.shape[0])))
    return j.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)


def kraus_from_superoperator(s: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> list[np.ndarray]:
    """Canonical (Choi-eigenvector) Kraus list for a CP superoperator.

    Raises
    ------
    NotPSDError
        If the Choi matrix has an eigenvalue below ``-tol.equality`` (scaled
        by its largest eigenvalue), i.e. the map is not completely positive.
    """
    j = choi_from_superoperator(np.asarray(s, dtype=complex))
    j = (j + np.conj(j).T) / 2
    evals, evecs = np.linalg.eigh(j)
    scale = max(1.0, np.abs(evals).max())
    if evals.min() < -tol.equality * scale:
        raise NotPSDError(f"Choi matrix has eigenvalue {evals.min():.3e}; map is not CP")
    d = int(round(np.sqrt(s.shape[0])))
    cut = rank_cut(evals, tol)
    kraus = [np.sqrt(lam) * unvec(evecs[:, i], d)
             for i, lam in reversed(list(enumerate(evals))) if lam > cut]
    if not kraus:
        kraus = [np.zeros((d, d), dtype=complex)]
    return kraus
