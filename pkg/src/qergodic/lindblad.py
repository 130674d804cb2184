"""Lindblad generators, their reduction to a channel, and semigroup evolution.

A generator is stored as ``(H, {A_i})`` with

    L(rho) = i[H, rho] + 2 A(rho) - A^dag(I) rho - rho A^dag(I)
           = 2 A(rho) - G rho - rho G^dag,     G = A^dag(I) - i H,

where ``A(rho) = sum_i A_i rho A_i^dag`` is completely positive but need not
preserve the trace.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from . import superop
from .channels import Channel, validate
from .errors import (
    BadParamsError,
    BadWeightsError,
    CrossCheckError,
    GPlusGdagNotPSDError,
    NearSingularTLError,
    NotFaithfulError,
    PreconditionNotMetError,
    ReductionMismatchError,
)
from .operators import (
    DEFAULT_TOL,
    PAULI_X,
    PAULI_Z,
    Tolerances,
    as_operator,
    dagger,
    is_hermitian,
    rank_cut,
    trace_norm,
)
from .spectral import classify, count_near, spectral_projection, state_from_representative

# largest ||t L|| handed to a single expm call; longer times are sliced
EXPM_SLICE_NORM = 1e4
# I + G must have a condition number below this to invert T_L
TL_CONDITION_LIMIT = 1e12


@dataclass(frozen=True, eq=False)
class LindbladGenerator:
    hamiltonian: np.ndarray
    cp_kraus: tuple
    label: str = ""

    def __post_init__(self):
        h = as_operator(self.hamiltonian)
        ops = tuple(as_operator(a) for a in self.cp_kraus)
        if not ops:
            raise BadParamsError("cp_kraus must be nonempty; use A = I/sqrt2 for a pure Hamiltonian")
        d = h.shape[0]
        if any(a.shape != (d, d) for a in ops):
            raise BadParamsError("cp_kraus dimensions differ from H")
        if not is_hermitian(h):
            raise BadParamsError("H is not Hermitian")
        h = (h + dagger(h)) / 2
        for a in (h,) + ops:
            a.setflags(write=False)
        object.__setattr__(self, "hamiltonian", h)
        object.__setattr__(self, "cp_kraus", ops)

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]

    @property
    def a_dag_identity(self) -> np.ndarray:
        """``A^dag(I) = sum_i A_i^dag A_i``."""
        return sum(dagger(a) @ a for a in self.cp_kraus)

    @property
    def g(self) -> np.ndarray:
        return self.a_dag_identity - 1j * self.hamiltonian

    def superoperator(self) -> np.ndarray:
        return to_superoperator(self)

    def __call__(self, rho) -> np.ndarray:
        return apply_generator(self, rho)

    def __repr__(self) -> str:
        return f"<{self.label or 'Lindblad'}: d={self.dim}, {len(self.cp_kraus)} A-Kraus>"


def from_channel(c: Channel, gamma: float) -> LindbladGenerator:
    """``gamma (M - I)``, i.e. ``H = 0`` and ``A = (gamma / 2) M``."""
    if not gamma > 0:
        raise BadParamsError(f"gamma must be positive, got {gamma}")
    kraus = tuple(np.sqrt(gamma / 2) * k for k in c.kraus)
    return LindbladGenerator(np.zeros((c.dim, c.dim), dtype=complex), kraus,
                             f"{gamma:g}*({c.label or 'M'} - I)")


def lindblad_plus_minus(sign: int) -> LindbladGenerator:
    """Qubit generator ``+-i[X, rho] + Z rho Z - rho``."""
    if sign not in (1, -1):
        raise BadParamsError("sign must be +1 or -1")
    return LindbladGenerator(sign * PAULI_X, (PAULI_Z / np.sqrt(2),), "L+" if sign > 0 else "L-")


def apply_generator(l: LindbladGenerator, rho) -> np.ndarray:
    rho = as_operator(rho)
    h = l.hamiltonian
    ad = l.a_dag_identity
    cp = sum(a @ rho @ dagger(a) for a in l.cp_kraus)
    return 1j * (h @ rho - rho @ h) + 2 * cp - ad @ rho - rho @ ad


def to_superoperator(l: LindbladGenerator) -> np.ndarray:
    """``2 sum A (x) conj(A) - G (x) I - I (x) conj(G)`` (row-major ``vec``)."""
    g = l.g
    eye = np.eye(l.dim)
    return (2 * superop.superoperator_from_kraus(l.cp_kraus)
            - np.kron(g, eye) - np.kron(eye, np.conj(g)))


def null_space_dim(l: LindbladGenerator, tol: Tolerances = DEFAULT_TOL) -> int:
    """Number of eigenvalues of ``L`` within ``tol.cluster * max(1, ||L||)`` of zero."""
    s = to_superoperator(l)
    scale = max(1.0, np.linalg.norm(s, 2))
    return count_near(np.linalg.eigvals(s), 0.0, tol.cluster * scale)


def generator_fixed_state(l: LindbladGenerator, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Stationary state of largest support: the long-time limit of ``I/d``."""
    s = to_superoperator(l)
    k = max(1, null_space_dim(l, tol))
    proj = spectral_projection(s, 0.0, k)
    rho, _, _, _ = state_from_representative(
        superop.apply_superoperator(proj, np.eye(l.dim) / l.dim))
    return rho


# ----------------------------------------------------------------------------
# reduction L = S_L - T_L and M_L = S_L o T_L^-1
# ----------------------------------------------------------------------------

@dataclass
class SemigroupReport:
    ml_channel: Channel
    ergodic: bool
    fixed_state: np.ndarray
    convergence_samples: list = field(default_factory=list)
    s_l: tuple = ()
    t_l: tuple = ()
    t_l_inverse: tuple = ()
    reduction_defect: float = 0.0
    condition_number: float = 1.0


def _i_plus_g(l: LindbladGenerator) -> np.ndarray:
    m = np.eye(l.dim) + l.g
    cond = np.linalg.cond(m)
    if not np.isfinite(cond) or cond >= TL_CONDITION_LIMIT:
        raise NearSingularTLError(f"cond(I + G) = {cond:.3e}")
    return m


def reduce_to_channel(l: LindbladGenerator, tol: Tolerances = DEFAULT_TOL,
                      samples: int = 6) -> SemigroupReport:
    """Split ``L = S_L - T_L`` and build the channel ``M_L = S_L o T_L^-1``.

    ``S_L(rho) = 2 A(rho) + (I - G) rho (I - G^dag) / 2``,
    ``T_L(rho) = (I + G) rho (I + G^dag) / 2`` and
    ``T_L^-1(rho) = 2 (I + G)^-1 rho (I + G^dag)^-1``.
    """
    d = l.dim
    g = l.g
    eye = np.eye(d)
    ipg = _i_plus_g(l)
    inv = np.linalg.inv(ipg)
    s_kraus = tuple(np.sqrt(2) * a for a in l.cp_kraus) + ((eye - g) / np.sqrt(2),)
    t_kraus = ((eye + g) / np.sqrt(2),)
    tinv_kraus = (np.sqrt(2) * inv,)
    ml_kraus = tuple(2 * a @ inv for a in l.cp_kraus) + ((eye - g) @ inv,)
    ml = Channel(ml_kraus, f"M_L[{l.label or 'L'}]")

    s_l = to_superoperator(l)
    diff = superop.superoperator_from_kraus(s_kraus) - superop.superoperator_from_kraus(t_kraus)
    defect = float(np.abs(diff - s_l).max())
    if defect >= 1e-9 * max(1.0, float(np.abs(s_l).max())):
        raise ReductionMismatchError(f"S_L - T_L differs from L by {defect:.2e}")
    tp = validate(ml, tol).tp_defect
    if tp >= 1e-8:
        raise ReductionMismatchError(f"M_L is not trace preserving (defect {tp:.2e})")

    ergodic = classify(ml, tol).fixed_space_dim == 1
    rho_inf = generator_fixed_state(l, tol)
    conv = []
    if samples:
        evals = np.linalg.eigvals(s_l)
        rates = -evals.real[evals.real < -1e-9]
        gap = rates.min() if rates.size else 1.0
        rho0 = np.zeros((d, d), dtype=complex)
        rho0[0, 0] = 1
        for k in range(samples):
            t = float(2.0**k / gap)
            conv.append((t, trace_norm(evolve(l, rho0, t) - rho_inf)))
    return SemigroupReport(ml, ergodic, rho_inf, conv, s_kraus, t_kraus, tinv_kraus,
                           defect, float(np.linalg.cond(ipg)))


def semigroup_ergodic(l: LindbladGenerator, tol: Tolerances = DEFAULT_TOL,
                      cross_check: bool = True) -> bool:
    """Unique stationary state iff ``M_L`` is ergodic."""
    result = reduce_to_channel(l, tol, samples=0).ergodic
    if cross_check:
        direct = null_space_dim(l, tol) == 1
        if direct != result:
            raise CrossCheckError(f"M_L says ergodic={result}, kernel of L says {direct}")
    return result


# ----------------------------------------------------------------------------
# evolution
# ----------------------------------------------------------------------------

def propagator(l: LindbladGenerator, t: float) -> np.ndarray:
    """Superoperator ``exp(t L)``; arguments above ``1e4`` in norm are sliced and squared."""
    if t < 0:
        raise BadParamsError("t must be nonnegative")
    s = to_superoperator(l) * t
    norm = np.linalg.norm(s, 1)
    slices = max(1, int(np.ceil(norm / EXPM_SLICE_NORM)))
    step = expm(s / slices)
    return step if slices == 1 else np.linalg.matrix_power(step, slices)


def evolve(l: LindbladGenerator, rho, t: float) -> np.ndarray:
    rho = as_operator(rho)
    return superop.apply_superoperator(propagator(l, t), rho)


# ----------------------------------------------------------------------------
# convex combinations and the ergodic representative
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorMixture:
    generator: LindbladGenerator
    matched: bool
    ergodic: bool


def convex_combine_generators(l1: LindbladGenerator, l2: LindbladGenerator, p: float,
                              tol: Tolerances = DEFAULT_TOL) -> GeneratorMixture:
    """``p L + (1 - p) L'``; reports whether ``H`` and ``A^dag(I)`` agree.

    With matched ``G`` and an ergodic ``L`` the mixture must be ergodic; a
    violation raises :class:`CrossCheckError`.
    """
    if not 0 <= p <= 1:
        raise BadWeightsError(f"p={p} outside [0, 1]")
    if l1.dim != l2.dim:
        raise BadParamsError(f"d={l1.dim} vs d={l2.dim}")
    h = p * l1.hamiltonian + (1 - p) * l2.hamiltonian
    kraus = []
    if p > 0:
        kraus += [np.sqrt(p) * a for a in l1.cp_kraus]
    if p < 1:
        kraus += [np.sqrt(1 - p) * a for a in l2.cp_kraus]
    mix = LindbladGenerator(h, tuple(kraus), f"{p:g}*{l1.label or 'L'} + {1 - p:g}*{l2.label or 'L'}")
    matched = (trace_norm(l1.hamiltonian - l2.hamiltonian) < tol.equality
               and trace_norm(l1.a_dag_identity - l2.a_dag_identity) < tol.equality)
    ergodic = semigroup_ergodic(mix, tol)
    if matched and p > 0 and not ergodic and semigroup_ergodic(l1, tol):
        raise CrossCheckError("matched-G mixture of an ergodic generator is not ergodic")
    return GeneratorMixture(mix, matched, ergodic)


def ergodic_representative(g_target, rho_star, tol: Tolerances = DEFAULT_TOL) -> LindbladGenerator:
    """Generator with ``A(rho) = rho* Tr[rho Q]``, ``Q = (G + G^dag)/2``, and the given ``G``.

    Kraus operators are ``sqrt(r_j q_k) |r_j><q_k|`` over the eigenpairs of
    ``rho*`` and ``Q``; ``H = i (G - Q)`` carries the anti-Hermitian part.
    """
    g = as_operator(g_target)
    rho = as_operator(rho_star)
    d = g.shape[0]
    if rho.shape != (d, d):
        raise BadParamsError("G and rho* differ in dimension")
    r_vals, r_vecs = np.linalg.eigh((rho + dagger(rho)) / 2)
    if (not is_hermitian(rho, tol) or abs(np.trace(rho) - 1) > tol.equality
            or r_vals.min() <= rank_cut([1.0], tol)):
        raise NotFaithfulError("rho* must be a full-rank density matrix")
    q = (g + dagger(g)) / 2
    q_vals, q_vecs = np.linalg.eigh(q)
    if q_vals.min() < -tol.equality:
        raise GPlusGdagNotPSDError(f"(G + G^dag)/2 has eigenvalue {q_vals.min():.3e}")
    if q_vals.max() <= rank_cut(q_vals, tol):
        raise PreconditionNotMetError("G + G^dag vanishes; the dissipative part is empty")
    q_vals = np.clip(q_vals, 0, None)
    kraus = tuple(np.sqrt(r * qk) * np.outer(r_vecs[:, j], np.conj(q_vecs[:, k]))
                  for j, r in enumerate(r_vals) for k, qk in enumerate(q_vals) if qk > 0)
    h = 1j * (g - q)
    gen = LindbladGenerator((h + dagger(h)) / 2, kraus, "ergodic_representative")
    if not semigroup_ergodic(gen, tol):
        raise CrossCheckError("constructed representative is not ergodic")
    return gen
