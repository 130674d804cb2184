"""Dense operator primitives and tolerance-aware predicates.

Operators are plain ``numpy`` complex arrays of shape ``(d, d)``. Every
predicate compares against an explicit :class:`Tolerances` record; nothing
here is tested for exact equality.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, NotPSDError, NotUnitTraceError


@dataclass(frozen=True)
class Tolerances:
    """Absolute tolerances threaded through every numerical decision.

    Attributes
    ----------
    rank : float
        Relative cut below which singular/eigenvalues count as zero. The
        actual cut is ``rank * max(largest, 1)``.
    equality : float
        Trace-norm distance under which two operators are treated as equal.
    peripheral : float
        ``| |lambda| - 1 |`` under which an eigenvalue is peripheral.
    cluster : float
        Distance under which two eigenvalues are the same cluster.
    """

    rank: float = 1e-10
    equality: float = 1e-9
    peripheral: float = 1e-8
    cluster: float = 1e-8

    def scaled(self, factor: float) -> "Tolerances":
        return Tolerances(self.rank * factor, self.equality * factor,
                          self.peripheral * factor, self.cluster * factor)

    def to_dict(self) -> dict:
        return {"rank": self.rank, "equality": self.equality,
                "peripheral": self.peripheral, "cluster": self.cluster}


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class PolarParts:
    """``A = isometry @ modulus`` with ``modulus = sqrt(A^dag A)``."""

    isometry: np.ndarray
    modulus: np.ndarray

    def recompose(self) -> np.ndarray:
        return self.isometry @ self.modulus


def as_operator(a) -> np.ndarray:
    """Return ``a`` as a square complex array, raising on bad shapes."""
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise DimensionMismatchError(f"expected a square matrix, got shape {arr.shape}")
    return arr


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(a).T


def rank_cut(values, tol: Tolerances = DEFAULT_TOL) -> float:
    """Zero threshold for a set of singular values or eigenvalue moduli."""
    values = np.abs(np.asarray(values))
    top = values.max() if values.size else 0.0
    return tol.rank * max(top, 1.0)


def hermitize(a: np.ndarray) -> tuple[np.ndarray, float]:
    """Split off the Hermitian part; also return the trace norm of what was dropped."""
    a = as_operator(a)
    h = (a + dagger(a)) / 2
    return h, trace_norm(a - h)


def trace_norm(a: np.ndarray) -> float:
    """Sum of singular values, ``Tr sqrt(A^dag A)``."""
    return float(np.linalg.svd(as_operator(a), compute_uv=False).sum())


def hs_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Hilbert-Schmidt product ``Tr[A^dag B]``."""
    return complex(np.vdot(a, b))


def is_hermitian(a, tol: Tolerances = DEFAULT_TOL) -> bool:
    a = as_operator(a)
    return trace_norm(a - dagger(a)) < tol.equality


def is_psd(a, tol: Tolerances = DEFAULT_TOL) -> bool:
    a = as_operator(a)
    if not is_hermitian(a, tol):
        return False
    h, _ = hermitize(a)
    return bool(np.linalg.eigvalsh(h).min() > -tol.equality)


def is_unitary(a, tol: Tolerances = DEFAULT_TOL) -> bool:
    a = as_operator(a)
    return trace_norm(dagger(a) @ a - np.eye(a.shape[0])) < tol.equality


def is_projector(a, tol: Tolerances = DEFAULT_TOL) -> bool:
    a = as_operator(a)
    return is_hermitian(a, tol) and trace_norm(a @ a - a) < tol.equality


def _check_psd(h: np.ndarray, tol: Tolerances) -> np.ndarray:
    evals = np.linalg.eigvalsh(h)
    if evals.min() < -tol.equality * max(1.0, np.abs(evals).max()):
        raise NotPSDError(f"operator has eigenvalue {evals.min():.3e}")
    return evals


def support_projector(a, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthogonal projector onto the span of eigenvectors above the rank cut."""
    h, _ = hermitize(a)
    _check_psd(h, tol)
    evals, evecs = np.linalg.eigh(h)
    keep = evecs[:, evals > rank_cut(evals, tol)]
    p = keep @ dagger(keep)
    return (p + dagger(p)) / 2


def support_contains(rho, sigma, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff ``Supp(sigma)`` lies inside ``Supp(rho)``.

    Equivalently ``rho = q sigma + (1 - q) tau`` for some ``q`` in ``(0, 1]``
    and some state ``tau``.
    """
    rho, sigma = as_operator(rho), as_operator(sigma)
    if rho.shape != sigma.shape:
        raise DimensionMismatchError(f"{rho.shape} vs {sigma.shape}")
    for name, x in (("rho", rho), ("sigma", sigma)):
        if not is_psd(x, tol):
            raise NotPSDError(f"{name} is not positive semidefinite")
        if abs(np.trace(x) - 1) > tol.equality:
            raise NotUnitTraceError(f"{name} has trace {np.trace(x).real:.12g}")
    q = np.eye(rho.shape[0]) - support_projector(rho, tol)
    return trace_norm(q @ sigma @ q) < tol.equality


def polar_decompose(a) -> PolarParts:
    """Polar decomposition ``A = U |A|`` with a fully unitary ``U``.

    On ``Ker |A|`` the unitary is completed by the kernel-to-cokernel map
    closest to the identity, so Hermitian PSD and normal inputs get ``U``
    acting as the identity there. The completion is deterministic.
    """
    a = as_operator(a)
    w, s, vh = np.linalg.svd(a)
    r = int(np.sum(s > rank_cut(s)))
    v = dagger(vh)
    u = w[:, :r] @ dagger(v[:, :r])
    if r < a.shape[0]:
        wk, vk = w[:, r:], v[:, r:]
        # Procrustes: unitary Q maximizing Re Tr(wk Q vk^dag)
        x, _, yh = np.linalg.svd(dagger(wk) @ vk)
        u = u + wk @ (x @ yh) @ dagger(vk)
    modulus = (v * s) @ vh
    modulus = (modulus + dagger(modulus)) / 2
    return PolarParts(isometry=u, modulus=modulus)


def commutator_norm(a, b) -> float:
    """Trace norm of ``AB - BA``."""
    a, b = as_operator(a), as_operator(b)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"{a.shape} vs {b.shape}")
    return trace_norm(a @ b - b @ a)


def positive_negative_parts(h: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Orthogonally supported PSD parts with ``h = pos - neg``."""
    h, _ = hermitize(h)
    evals, evecs = np.linalg.eigh(h)
    cut = rank_cut(evals, tol)
    pos = np.where(evals > cut, evals, 0.0)
    neg = np.where(evals < -cut, -evals, 0.0)
    return (evecs * pos) @ dagger(evecs), (evecs * neg) @ dagger(evecs)


def ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def projector(vec) -> np.ndarray:
    """``|v><v|`` for a (not necessarily normalized) vector."""
    v = np.asarray(vec, dtype=complex).ravel()
    return np.outer(v, np.conj(v))


def matrix_units(dim: int) -> list[np.ndarray]:
    """The basis ``|j><k|`` in row-major order."""
    units = []
    for j in range(dim):
        for k in range(dim):
            e = np.zeros((dim, dim), dtype=complex)
            e[j, k] = 1.0
            units.append(e)
    return units


def probe_states(dim: int) -> list[np.ndarray]:
    """Pure states whose projectors span the full operator space.

    ``|k>`` for every k, then ``(|j> + |k>)/sqrt2`` and ``(|j> + i|k>)/sqrt2``
    for ``j < k``.
    """
    states = [projector(ket(k, dim)) for k in range(dim)]
    for j in range(dim):
        for k in range(j + 1, dim):
            states.append(projector((ket(j, dim) + ket(k, dim)) / np.sqrt(2)))
            states.append(projector((ket(j, dim) + 1j * ket(k, dim)) / np.sqrt(2)))
    return states


PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def shift_operator(dim: int) -> np.ndarray:
    """``S|n> = |(n + 1) mod d>``."""
    return np.roll(np.eye(dim, dtype=complex), 1, axis=0)


def clock_operator(dim: int) -> np.ndarray:
    """``M|n> = omega^n |n>`` with ``omega = exp(2 pi i / d)``."""
    return np.diag(np.exp(2j * np.pi * np.arange(dim) / dim))


def fourier_matrix(dim: int) -> np.ndarray:
    """Unitary with columns ``|e_n> = d^{-1/2} sum_k exp(2 pi i k n / d) |k>``."""
    k = np.arange(dim)
    return np.exp(2j * np.pi * np.outer(k, k) / dim) / np.sqrt(dim)
