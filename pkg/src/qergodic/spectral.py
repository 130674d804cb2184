"""Superoperator spectra, fixed points, and the ergodic/mixing verdict."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import superop
from .channels import Channel, validate
from .errors import EigFailureError, NotErgodicError
from .operators import (
    DEFAULT_TOL,
    Tolerances,
    as_operator,
    dagger,
    hermitize,
    positive_negative_parts,
    probe_states,
    rank_cut,
    trace_norm,
)


class Verdict(str, enum.Enum):
    NON_ERGODIC = "NonErgodic"
    ERGODIC_NOT_MIXING = "ErgodicNotMixing"
    MIXING = "Mixing"
    UNRELIABLE = "Unreliable"

    def __str__(self) -> str:
        return self.value

    @property
    def ergodic(self) -> bool:
        return self in (Verdict.MIXING, Verdict.ERGODIC_NOT_MIXING)


def _as_superoperator(c) -> np.ndarray:
    if isinstance(c, Channel):
        return c.superoperator()
    s = np.asarray(c, dtype=complex)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError(f"not a superoperator: shape {s.shape}")
    return s


def to_superoperator(c: Channel) -> np.ndarray:
    """``sum_i kron(M_i, conj(M_i))``, acting on row-major ``vec(rho)``."""
    return c.superoperator()


def spectral_order(values) -> np.ndarray:
    """Indices sorting by modulus (descending) then argument (ascending)."""
    values = np.asarray(values)
    mod = np.round(np.abs(values), 12)
    arg = np.round(np.angle(values), 12)
    return np.lexsort((arg, -mod))


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: list
    residuals: np.ndarray


def spectrum(c, tol: Tolerances = DEFAULT_TOL) -> Spectrum:
    """All ``d^2`` eigenpairs, eigenvectors un-vectorized to operators.

    Raises
    ------
    EigFailureError
        If LAPACK fails or a pair has relative residual above ``1e-7``.
    """
    s = _as_superoperator(c)
    d = int(round(np.sqrt(s.shape[0])))
    try:
        evals, evecs = np.linalg.eig(s)
    except np.linalg.LinAlgError as exc:
        raise EigFailureError(str(exc)) from exc
    order = spectral_order(evals)
    evals, evecs = evals[order], evecs[:, order]
    ops, res = [], []
    for lam, v in zip(evals, evecs.T):
        a = superop.unvec(v, d)
        r = trace_norm(superop.unvec(s @ v, d) - lam * a) / max(trace_norm(a), 1e-300)
        ops.append(a)
        res.append(r)
    res = np.array(res)
    if res.size and res.max() > 1e-7:
        raise EigFailureError(f"eigenpair residual {res.max():.2e} exceeds 1e-7")
    return Spectrum(evals, ops, res)


def eigenspace(s: np.ndarray, value: complex, count: int) -> np.ndarray:
    """Orthonormal columns spanning the (numerical) kernel of ``s - value I``.

    ``count`` is the cluster multiplicity counted from the eigenvalues; the
    basis is taken from the smallest right singular vectors, which is more
    accurate than eigenvectors for clustered values.
    """
    n = s.shape[0]
    _, _, vh = np.linalg.svd(s - value * np.eye(n))
    return np.conj(vh[n - count:]).T


def count_near(values, target: complex, radius: float) -> int:
    return int(np.sum(np.abs(np.asarray(values) - target) < radius))


def fixed_point_projection(c, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Spectral projection onto the eigenvalue-1 eigenspace (the Cesaro limit).

    The eigenvalue 1 of a channel is semisimple, so with right and left
    kernel bases ``R`` and ``L`` the projection is ``R (L^dag R)^-1 L^dag``.
    Its action sends every state to a fixed state.
    """
    s = _as_superoperator(c)
    k = count_near(np.linalg.eigvals(s), 1.0, tol.cluster)
    if k == 0:
        raise EigFailureError("no eigenvalue within cluster tolerance of 1")
    return spectral_projection(s, 1.0, k)


def spectral_projection(s: np.ndarray, value: complex, count: int) -> np.ndarray:
    """Projection onto a semisimple eigenspace along the complementary invariant subspace."""
    r = eigenspace(s, value, count)
    left = eigenspace(dagger(s), np.conj(value), count)
    return r @ np.linalg.solve(dagger(left) @ r, dagger(left))


def probe_fixed_states(c, tol: Tolerances = DEFAULT_TOL) -> list[np.ndarray]:
    """Cesaro limits of the probe states; together they span the fixed states."""
    s = _as_superoperator(c)
    d = int(round(np.sqrt(s.shape[0])))
    proj = fixed_point_projection(s, tol)
    out = []
    for rho in probe_states(d):
        h, _ = hermitize(superop.apply_superoperator(proj, rho))
        out.append(h / np.trace(h).real)
    return out


@dataclass
class FixedSpace:
    """Eigenvalue-1 eigenspace of a channel.

    ``basis`` is Hilbert-Schmidt orthonormal. ``state`` is the normalized
    fixed state when the space is one-dimensional. ``positive_parts`` holds
    the PSD pieces ``X+, X-, Y+, Y-`` of every basis element together with
    the largest fixed-point defect among them.
    """

    dim: int
    basis: list
    state: np.ndarray | None = None
    positive_parts: list = field(default_factory=list)
    positive_part_defect: float = 0.0
    clipped_mass: float = 0.0
    hermitian_defect: float = 0.0
    reliable: bool = True


def state_from_representative(a: np.ndarray) -> tuple[np.ndarray, float, float, bool]:
    """Hermitize and trace-normalize a fixed-point representative.

    Eigenvalues in ``[-1e-9, 0)`` are clipped; anything more negative, or more
    than ``1e-8`` clipped mass, marks the result unreliable.
    """
    tr = np.trace(a)
    if abs(tr) < 1e-14:
        return a, np.inf, np.inf, False
    h, skew = hermitize(a / tr)
    evals, evecs = np.linalg.eigh(h)
    neg = evals[evals < 0]
    mass = float(-neg.sum())
    reliable = bool(evals.min() >= -1e-9 and mass <= 1e-8)
    evals = np.clip(evals, 0, None)
    rho = (evecs * evals) @ dagger(evecs)
    rho = rho / np.trace(rho).real
    return (rho + dagger(rho)) / 2, mass, skew, reliable


def fixed_space(c, tol: Tolerances = DEFAULT_TOL) -> FixedSpace:
    s = _as_superoperator(c)
    d = int(round(np.sqrt(s.shape[0])))
    try:
        evals = np.linalg.eigvals(s)
    except np.linalg.LinAlgError as exc:
        raise EigFailureError(str(exc)) from exc
    k = count_near(evals, 1.0, tol.cluster)
    if k == 0:
        raise EigFailureError("no eigenvalue within cluster tolerance of 1")
    cols = eigenspace(s, 1.0, k)
    basis = [superop.unvec(v, d) for v in cols.T]
    if k == 1:
        rho, mass, skew, ok = state_from_representative(basis[0])
        return FixedSpace(1, basis, rho, [rho], 0.0, mass, skew, ok)
    parts, worst = [], 0.0
    for a in basis:
        x = (a + dagger(a)) / 2
        y = (a - dagger(a)) / 2j
        for h in (x, y):
            for piece in positive_negative_parts(h, tol):
                if trace_norm(piece) <= rank_cut([1.0], tol):
                    continue
                img = superop.apply_superoperator(s, piece)
                worst = max(worst, trace_norm(img - piece) / trace_norm(piece))
                parts.append(piece)
    return FixedSpace(k, basis, None, parts, worst)


@dataclass
class SpectralReport:
    eigenvalues: np.ndarray
    peripheral: np.ndarray
    fixed_space_dim: int
    fixed_state: np.ndarray | None
    fixed_basis: list
    verdict: Verdict
    faithful: bool
    diagnostics: dict
    tolerances: Tolerances = DEFAULT_TOL

    @property
    def ergodic(self) -> bool:
        return self.verdict.ergodic

    @property
    def mixing(self) -> bool:
        return self.verdict is Verdict.MIXING

    def to_dict(self) -> dict:
        from .io import operator_to_json

        return {
            "verdict": self.verdict.value,
            "eigenvalues": [[float(z.real), float(z.imag)] for z in self.eigenvalues],
            "peripheral": [[float(z.real), float(z.imag)] for z in self.peripheral],
            "fixed_space_dim": self.fixed_space_dim,
            "fixed_state": None if self.fixed_state is None else operator_to_json(self.fixed_state),
            "faithful": self.faithful,
            "diagnostics": self.diagnostics,
            "tolerances": self.tolerances.to_dict(),
        }


def classify(c, tol: Tolerances = DEFAULT_TOL) -> SpectralReport:
    """Spectral verdict: NonErgodic, ErgodicNotMixing or Mixing.

    NonErgodic iff the eigenvalue-1 space has dimension above one. Mixing iff
    that space is one-dimensional and 1 is the only peripheral eigenvalue.
    ``faithful`` refers to ``rho*`` when ergodic; otherwise to the fixed state
    of largest support (the Cesaro limit of ``I/d``).
    """
    s = _as_superoperator(c)
    d = int(round(np.sqrt(s.shape[0])))
    try:
        evals = np.linalg.eigvals(s)
    except np.linalg.LinAlgError as exc:
        raise EigFailureError(str(exc)) from exc
    evals = evals[spectral_order(evals)]
    peripheral = evals[np.abs(np.abs(evals) - 1) < tol.peripheral]
    fs = fixed_space(s, tol)
    diagnostics = {
        "max_modulus": float(np.abs(evals).max()),
        "positive_part_defect": fs.positive_part_defect,
    }
    if isinstance(c, Channel):
        diagnostics["tp_defect"] = validate(c, tol).tp_defect
    if fs.dim > 1:
        verdict = Verdict.NON_ERGODIC
        rho = superop.apply_superoperator(fixed_point_projection(s, tol), np.eye(d) / d)
        rho, _, _, _ = state_from_representative(rho)
        faithful = bool(np.linalg.eigvalsh(rho).min() > rank_cut([1.0], tol))
        state = None
    else:
        state = fs.state
        diagnostics.update(clipped_mass=fs.clipped_mass, hermitian_defect=fs.hermitian_defect)
        faithful = bool(np.linalg.eigvalsh(state).min() > rank_cut([1.0], tol))
        if not fs.reliable:
            verdict = Verdict.UNRELIABLE
        elif len(peripheral) == 1:
            verdict = Verdict.MIXING
        else:
            verdict = Verdict.ERGODIC_NOT_MIXING
    return SpectralReport(evals, peripheral, fs.dim, state, fs.basis, verdict, faithful,
                          diagnostics, tol)


def cesaro_average(c, rho, n: int) -> np.ndarray:
    """``(N + 1)^-1 sum_{k=0}^{N} M^k(rho)``."""
    s = _as_superoperator(c)
    rho = as_operator(rho)
    v = superop.vec(rho)
    acc = np.zeros_like(v)
    for _ in range(n + 1):
        acc += v
        v = s @ v
    return superop.unvec(acc / (n + 1), rho.shape[0])


@dataclass(frozen=True)
class ObservableAverage:
    average: complex
    reference: complex | None


def observable_average(c, a, rho, n: int, with_reference: bool = False,
                       tol: Tolerances = DEFAULT_TOL) -> ObservableAverage:
    """Time average of ``Tr[A M^k(rho)]`` for ``k = 0..N``.

    With ``with_reference`` the ergodic limit ``Tr[A rho*]`` is returned too;
    this raises :class:`NotErgodicError` for non-ergodic channels.
    """
    a = as_operator(a)
    avg = complex(np.trace(a @ cesaro_average(c, rho, n)))
    ref = None
    if with_reference:
        report = classify(c, tol)
        if not report.ergodic:
            raise NotErgodicError(f"channel is {report.verdict.value}; no unique fixed state")
        ref = complex(np.trace(a @ report.fixed_state))
    return ObservableAverage(avg, ref)
