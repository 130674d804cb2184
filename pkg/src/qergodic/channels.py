"""Quantum channels in Kraus form, their algebra, and a gallery of examples.

Channel equality is only meaningful at the superoperator level; Kraus lists
are never canonicalized behind the caller's back.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import superop
from .errors import BadParamsError, BadWeightsError, DimensionMismatchError, UnknownNameError
from .operators import (
    DEFAULT_TOL,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    Tolerances,
    as_operator,
    clock_operator,
    dagger,
    fourier_matrix,
    ket,
    shift_operator,
    trace_norm,
)

# compose() switches to the superoperator route above this many Kraus factors
MAX_KRAUS_FACTORS = 64


@dataclass(frozen=True, eq=False)
class Channel:
    """A completely positive map ``rho -> sum_i M_i rho M_i^dag``.

    Trace preservation is not enforced at construction; use :func:`validate`.
    """

    kraus: tuple
    label: str = ""

    def __post_init__(self):
        ops = tuple(as_operator(k) for k in self.kraus)
        if not ops:
            raise DimensionMismatchError("a channel needs at least one Kraus operator")
        d = ops[0].shape[0]
        for k in ops:
            if k.shape != (d, d):
                raise DimensionMismatchError(f"Kraus operator of shape {k.shape} in a d={d} channel")
            k.setflags(write=False)
        object.__setattr__(self, "kraus", ops)

    @property
    def dim(self) -> int:
        return self.kraus[0].shape[0]

    def __len__(self) -> int:
        return len(self.kraus)

    def __call__(self, rho):
        return apply(self, rho)

    def superoperator(self) -> np.ndarray:
        return superop.superoperator_from_kraus(self.kraus)

    def __repr__(self) -> str:
        name = self.label or "Channel"
        return f"<{name}: d={self.dim}, {len(self.kraus)} Kraus>"


class AdjointChannel(Channel):
    """Heisenberg-picture map with Kraus ``{M_i^dag}``; unital instead of TP."""

    def unit_defect(self) -> float:
        return trace_norm(apply(self, np.eye(self.dim)) - np.eye(self.dim))


@dataclass(frozen=True)
class ValidationReport:
    tp_defect: float
    dims: tuple
    accepted: bool


def _same_dim(a: Channel, b: Channel):
    if a.dim != b.dim:
        raise DimensionMismatchError(f"d={a.dim} vs d={b.dim}")


def validate(c: Channel, tol: Tolerances = DEFAULT_TOL) -> ValidationReport:
    """Trace-preservation defect ``||sum M_i^dag M_i - I||_1``."""
    d = c.dim
    gram = sum(dagger(k) @ k for k in c.kraus)
    defect = trace_norm(gram - np.eye(d))
    return ValidationReport(defect, tuple(k.shape for k in c.kraus), defect < tol.equality)


def apply(c: Channel, rho) -> np.ndarray:
    rho = as_operator(rho)
    if rho.shape[0] != c.dim:
        raise DimensionMismatchError(f"operator of dim {rho.shape[0]} into d={c.dim} channel")
    return sum(k @ rho @ dagger(k) for k in c.kraus)


def from_superoperator(s: np.ndarray, label: str = "", tol: Tolerances = DEFAULT_TOL) -> Channel:
    return Channel(tuple(superop.kraus_from_superoperator(s, tol)), label)


def identity(dim: int) -> Channel:
    return Channel((np.eye(dim),), "identity")


def compose(a: Channel, b: Channel, label: str = "") -> Channel:
    """``a o b``: first ``b``, then ``a``. Kraus list ``{A_i B_j}``."""
    _same_dim(a, b)
    label = label or f"({a.label or 'A'} o {b.label or 'B'})"
    if len(a) * len(b) > MAX_KRAUS_FACTORS:
        return from_superoperator(a.superoperator() @ b.superoperator(), label)
    return Channel(tuple(x @ y for x in a.kraus for y in b.kraus), label)


def power(c: Channel, n: int) -> Channel:
    """``n``-fold composition; ``n = 0`` gives the identity channel."""
    if n < 0:
        raise BadParamsError("power must be nonnegative")
    if n == 0:
        return identity(c.dim)
    label = f"{c.label or 'M'}^{n}"
    if len(c) ** n > MAX_KRAUS_FACTORS:
        s = np.linalg.matrix_power(c.superoperator(), n)
        return from_superoperator(s, label)
    out = c
    for _ in range(n - 1):
        out = Channel(tuple(x @ y for x in out.kraus for y in c.kraus))
    return Channel(out.kraus, label)


def convex_combine(terms, label: str = "") -> Channel:
    """Mixture ``sum_j p_j C_j`` realised by ``sqrt(p_j)``-scaled Kraus lists.

    ``terms`` is an iterable of ``(weight, channel)`` pairs. Zero-weight terms
    are dropped.
    """
    terms = list(terms)
    if not terms:
        raise BadWeightsError("empty mixture")
    weights = np.array([float(w) for w, _ in terms])
    if np.any(weights < 0) or abs(weights.sum() - 1) > 1e-12:
        raise BadWeightsError(f"weights {weights.tolist()} are not a probability vector")
    d = terms[0][1].dim
    kraus = []
    for w, ch in terms:
        if ch.dim != d:
            raise DimensionMismatchError(f"d={ch.dim} vs d={d}")
        if w > 0:
            kraus.extend(np.sqrt(w) * k for k in ch.kraus)
    if not label:
        label = " + ".join(f"{w:g}*{ch.label or 'C'}" for w, ch in terms)
    return Channel(tuple(kraus), label)


def adjoint(c: Channel) -> AdjointChannel:
    return AdjointChannel(tuple(dagger(k) for k in c.kraus), f"{c.label or 'M'}^dag")


def is_unital(c: Channel, tol: Tolerances = DEFAULT_TOL) -> bool:
    eye = np.eye(c.dim)
    return trace_norm(apply(c, eye) - eye) < tol.equality


def superoperator_distance(a: Channel, b: Channel) -> float:
    """Max-abs distance between superoperators: Kraus-freedom-blind equality."""
    _same_dim(a, b)
    return float(np.abs(a.superoperator() - b.superoperator()).max())


# ----------------------------------------------------------------------------
# gallery
# ----------------------------------------------------------------------------

def flip() -> Channel:
    """Qubit channel swapping populations: Kraus ``{|0><1|, |1><0|}``."""
    return Channel((np.outer(ket(0, 2), ket(1, 2)), np.outer(ket(1, 2), ket(0, 2))), "flip")


def dephasing(dim: int = 2) -> Channel:
    """Complete dephasing ``rho -> sum_n <n|rho|n> |n><n|``."""
    return Channel(tuple(np.outer(ket(n, dim), ket(n, dim)) for n in range(dim)), "dephasing")


def erasure(dim: int, rho0=None) -> Channel:
    """``A -> rho0 Tr[A]``; defaults to ``rho0 = |0><0|``.

    Kraus operators are ``sqrt(r_j) |r_j><k|`` over the eigenpairs of ``rho0``
    and the computational basis.
    """
    if rho0 is None:
        rho0 = np.zeros((dim, dim), dtype=complex)
        rho0[0, 0] = 1
    rho0 = as_operator(rho0)
    if rho0.shape[0] != dim:
        raise BadParamsError("rho0 has the wrong dimension")
    evals, evecs = np.linalg.eigh((rho0 + dagger(rho0)) / 2)
    if evals.min() < -1e-12 or abs(evals.sum() - 1) > 1e-9:
        raise BadParamsError("rho0 must be a density matrix")
    kraus = [np.sqrt(r) * np.outer(evecs[:, j], ket(k, dim))
             for j, r in enumerate(evals) if r > 1e-14 for k in range(dim)]
    return Channel(tuple(kraus), "erasure")


def pauli_xy(p: float) -> Channel:
    """``p X rho X + (1 - p) Y rho Y``."""
    if not 0 <= p <= 1:
        raise BadParamsError("p must lie in [0, 1]")
    return Channel((np.sqrt(p) * PAULI_X, np.sqrt(1 - p) * PAULI_Y), f"pauli_xy({p:g})")


def pauli_xyz(px: float, py: float, pz: float) -> Channel:
    """``px X.X + py Y.Y + pz Z.Z`` with the three weights summing to one."""
    w = np.array([px, py, pz], dtype=float)
    if np.any(w < 0) or abs(w.sum() - 1) > 1e-12:
        raise BadParamsError("pauli_xyz weights must be a probability vector")
    return Channel((np.sqrt(px) * PAULI_X, np.sqrt(py) * PAULI_Y, np.sqrt(pz) * PAULI_Z),
                   f"pauli_xyz({px:g},{py:g},{pz:g})")


def shift_multiply(dim: int, p: float) -> Channel:
    """``p S.S^dag + (1 - p) M.M^dag`` with shift ``S`` and clock ``M``."""
    if not 0 <= p <= 1:
        raise BadParamsError("p must lie in [0, 1]")
    return Channel((np.sqrt(p) * shift_operator(dim), np.sqrt(1 - p) * clock_operator(dim)),
                   f"shift_multiply({dim},{p:g})")


def fourier(dim: int) -> Channel:
    """Measure in the computational basis, re-prepare ``|e_n>``: Kraus ``{|e_n><n|}``."""
    f = fourier_matrix(dim)
    return Channel(tuple(np.outer(f[:, n], ket(n, dim)) for n in range(dim)), f"fourier({dim})")


def depolarizing(dim: int, p: float) -> Channel:
    """``(1 - p) rho + p Tr[rho] I/d`` via the clock-and-shift twirl."""
    if not 0 <= p <= 1:
        raise BadParamsError("p must lie in [0, 1]")
    s, m = shift_operator(dim), clock_operator(dim)
    kraus = [np.sqrt(1 - p + p / dim**2) * np.eye(dim)]
    for a in range(dim):
        for b in range(dim):
            if a or b:
                kraus.append(np.sqrt(p) / dim * np.linalg.matrix_power(s, a) @ np.linalg.matrix_power(m, b))
    return Channel(tuple(kraus), f"depolarizing({dim},{p:g})")


GALLERY = {
    "identity": lambda dim: identity(dim),
    "flip": lambda dim: flip(),
    "erasure": lambda dim, rho0=None: erasure(dim, rho0),
    "pauli_xy": lambda dim, p=0.5: pauli_xy(p),
    "pauli_xyz": lambda dim, px=1 / 3, py=1 / 3, pz=1 / 3: pauli_xyz(px, py, pz),
    "shift_multiply": lambda dim, p=0.5: shift_multiply(dim, p),
    "fourier": lambda dim: fourier(dim),
    "depolarizing": lambda dim, p=0.5: depolarizing(dim, p),
}

_QUBIT_ONLY = {"flip", "pauli_xy", "pauli_xyz"}


def gallery(name: str, dim: int = 2, **params) -> Channel:
    """Build a named example channel.

    Parameters
    ----------
    name : str
        One of ``identity, flip, erasure, pauli_xy, pauli_xyz,
        shift_multiply, fourier, depolarizing``.
    dim : int
        Hilbert-space dimension. Qubit-only channels require ``dim == 2``.
    **params
        ``p`` for ``pauli_xy``, ``shift_multiply`` and ``depolarizing``;
        ``px, py, pz`` for ``pauli_xyz``; ``rho0`` for ``erasure``.
    """
    if name not in GALLERY:
        raise UnknownNameError(name)
    if not isinstance(dim, (int, np.integer)) or dim < 1:
        raise BadParamsError(f"bad dimension {dim!r}")
    if name in _QUBIT_ONLY and dim != 2:
        raise BadParamsError(f"{name} is defined for qubits only")
    try:
        return GALLERY[name](int(dim), **params)
    except TypeError as exc:
        raise BadParamsError(str(exc)) from exc


# ----------------------------------------------------------------------------
# random sampling (numpy PCG64, 64-bit seeds)
# ----------------------------------------------------------------------------

def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) % 2**64))


def child_seed(seed: int, index: int) -> int:
    """Deterministic 64-bit seed for item ``index`` of a corpus."""
    return int(np.random.SeedSequence([int(seed) % 2**64, index]).generate_state(1, np.uint64)[0])


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def _phase_fixed_qr(z: np.ndarray) -> np.ndarray:
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    phases = np.where(np.abs(diag) > 0, diag / np.abs(diag), 1.0)
    return q * phases


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    return _phase_fixed_qr(_ginibre(rng, dim, dim))


def random_channel(dim: int, kraus_count: int, seed: int) -> Channel:
    """Stinespring-Gaussian channel.

    A complex Gaussian ``(d * kraus_count) x d`` matrix is QR-orthonormalized
    into an isometry whose ``d x d`` row blocks are the Kraus operators.
    """
    if kraus_count < 1:
        raise BadParamsError("kraus_count must be >= 1")
    v = _phase_fixed_qr(_ginibre(rng_for(seed), dim * kraus_count, dim))
    kraus = tuple(v[i * dim:(i + 1) * dim] for i in range(kraus_count))
    return Channel(kraus, f"random({dim},{kraus_count},{seed})")


def random_unitary_channel(dim: int, probabilities, seed: int) -> Channel:
    """``sum_i p_i U_i . U_i^dag`` with Haar-random ``U_i``."""
    p = np.asarray(probabilities, dtype=float)
    if p.ndim != 1 or p.size == 0 or np.any(p < 0) or abs(p.sum() - 1) > 1e-12:
        raise BadWeightsError(f"{p.tolist()} is not a probability vector")
    rng = rng_for(seed)
    kraus = tuple(np.sqrt(pi) * haar_unitary(dim, rng) for pi in p)
    return Channel(kraus, f"random_unitary({dim},{seed})")


def random_reducible_channel(dim: int, kraus_count: int, seed: int, split: int | None = None) -> Channel:
    """Non-ergodic channel: a direct sum of two random channels, rotated by a Haar unitary.

    The two blocks are orthogonal invariant subspaces, so the channel has at
    least two fixed states with orthogonal supports.
    """
    if dim < 2:
        raise BadParamsError("need dim >= 2 for a reducible channel")
    rng = rng_for(seed)
    split = split or max(1, dim // 2)
    d1, d2 = split, dim - split
    blocks = []
    for dd in (d1, d2):
        v = _phase_fixed_qr(_ginibre(rng, dd * kraus_count, dd))
        blocks.append([v[i * dd:(i + 1) * dd] for i in range(kraus_count)])
    w = haar_unitary(dim, rng)
    kraus = []
    for a, b in zip(*blocks):
        k = np.zeros((dim, dim), dtype=complex)
        k[:d1, :d1] = a
        k[d1:, d1:] = b
        kraus.append(w @ k @ dagger(w))
    return Channel(tuple(kraus), f"random_reducible({dim},{kraus_count},{seed})")


def random_state(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Density matrix ``G G^dag / Tr`` from a ``dim x rank`` Ginibre matrix."""
    g = _ginibre(rng, dim, rank or dim)
    rho = g @ dagger(g)
    return rho / np.trace(rho).real
