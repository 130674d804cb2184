"""Structural ergodicity and mixing tests, cross-checked against the spectral verdict.

Every routine here reaches its answer without looking at the eigenvalue-1
multiplicity directly (orbit spans, commutants, invariant projectors,
intertwiners). Where a theorem ties the answer to :func:`classify`, the two
are compared and a disagreement raises :class:`CrossCheckError`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import superop
from .channels import Channel, apply, compose, convex_combine, is_unital, random_state, rng_for
from .errors import (
    BadParamsError,
    BadWitnessError,
    CrossCheckError,
    DimensionMismatchError,
    NotErgodicError,
    NotQubitError,
    NotRandomUnitaryError,
    NotUnitalError,
    PreconditionNotMetError,
)
from .operators import (
    DEFAULT_TOL,
    Tolerances,
    as_operator,
    commutator_norm,
    dagger,
    is_projector,
    is_unitary,
    polar_decompose,
    positive_negative_parts,
    rank_cut,
    support_contains,
    support_projector,
    trace_norm,
)
from .spectral import classify, eigenspace, probe_fixed_states

# residual under which an orbit vector counts as already in the span
ORBIT_RESIDUAL = 1e-9
# invariance test for projectors
INVARIANCE_TOL = 1e-8
# intertwiner relation and root-of-unity matching
INTERTWINER_TOL = 1e-7
ROOT_TOL = 1e-6


# ----------------------------------------------------------------------------
# helpers
# ----------------------------------------------------------------------------

def is_random_unitary(c: Channel, tol: float = 1e-8) -> bool:
    """Each Kraus operator is a multiple of a unitary: ``M^dag M`` proportional to ``I``."""
    d = c.dim
    for k in c.kraus:
        g = dagger(k) @ k
        if trace_norm(g - np.trace(g).real / d * np.eye(d)) >= tol:
            return False
    return True


def underlying_unitaries(c: Channel) -> list[np.ndarray]:
    """``M_i / sqrt(p_i)`` for the nonzero-weight Kraus operators of a random-unitary channel."""
    d = c.dim
    out = []
    for k in c.kraus:
        w = np.trace(dagger(k) @ k).real / d
        if w > 1e-14:
            out.append(k / np.sqrt(w))
    return out


def span_contains_invertible(c: Channel, tol: Tolerances = DEFAULT_TOL, seed: int = 0) -> bool:
    """True iff ``span{M_i}`` contains an invertible operator.

    A random complex combination is invertible with probability one when any
    element of the span is; the seed makes the draw reproducible.
    """
    rng = rng_for(seed)
    coeffs = rng.standard_normal(len(c)) + 1j * rng.standard_normal(len(c))
    a = sum(z * k for z, k in zip(coeffs, c.kraus))
    s = np.linalg.svd(a, compute_uv=False)
    return bool(s.min() > 1e-8 * max(s.max(), 1.0))


def invariance_defect(c: Channel, p) -> float:
    """``||M(P) - P M(P) P||_1``; zero iff ``Supp P`` is an invariant subspace."""
    p = as_operator(p)
    mp = apply(c, p)
    return trace_norm(mp - p @ mp @ p)


# ----------------------------------------------------------------------------
# orbits and Wielandt
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class OrbitSpan:
    """Growth of ``span{K_w phi}`` over Kraus words ``w``.

    ``dims[n]`` is the span dimension using all words of length at most ``n``
    (``dims[0] = 1`` for ``phi`` itself). Iteration stops once the span is
    full or stops growing, so ``dims`` may be shorter than ``max_len + 1``.
    """

    dims: tuple
    reached_full: bool
    steps_needed: int | None


def _add_to_basis(basis: list, v: np.ndarray) -> bool:
    norm = np.linalg.norm(v)
    if norm < 1e-14:
        return False
    v = v / norm
    for _ in range(2):
        for q in basis:
            v = v - np.vdot(q, v) * q
    r = np.linalg.norm(v)
    if r <= ORBIT_RESIDUAL:
        return False
    basis.append(v / r)
    return True


def orbit_span(c: Channel, phi, max_len: int) -> OrbitSpan:
    phi = np.asarray(phi, dtype=complex).ravel()
    d = c.dim
    if phi.size != d:
        raise DimensionMismatchError(f"vector of length {phi.size} for d={d}")
    if abs(np.linalg.norm(phi) - 1) > 1e-9:
        raise BadParamsError("phi must be a unit vector")
    basis: list = []
    _add_to_basis(basis, phi)
    frontier = list(basis)
    dims = [len(basis)]
    steps = 0 if len(basis) == d else None
    n = 0
    while steps is None and n < max_len and frontier:
        n += 1
        start = len(basis)
        for v in frontier:
            for k in c.kraus:
                _add_to_basis(basis, k @ v)
        frontier = basis[start:]
        dims.append(len(basis))
        if len(basis) == d:
            steps = n
    return OrbitSpan(tuple(dims), len(basis) == d, steps)


@dataclass(frozen=True)
class WielandtCheck:
    bound: int
    satisfied: bool
    steps_needed: int | None


def wielandt_bound(dim: int, kraus_count: int) -> int:
    """``d^2 (d^2 - |X| - 1)``, floored at one."""
    return max(1, dim**2 * (dim**2 - kraus_count - 1))


def wielandt_check(c: Channel, tol: Tolerances = DEFAULT_TOL,
                   require_mixing: bool = True) -> WielandtCheck:
    """Orbit of every computational basis vector spans the space within the bound.

    The bound is a theorem only for mixing channels with faithful fixed
    state. ``require_mixing=False`` relaxes the precondition to ergodic and
    faithful, to measure orbits of periodic channels.

    Raises
    ------
    PreconditionNotMetError
        If the precondition above fails.
    """
    report = classify(c, tol)
    regime = report.mixing if require_mixing else report.ergodic
    if not (regime and report.faithful):
        raise PreconditionNotMetError(
            f"Wielandt check needs a mixing channel with faithful fixed state "
            f"(got {report.verdict.value}, faithful={report.faithful})")
    d = c.dim
    bound = wielandt_bound(d, len(c))
    worst = 0
    for j in range(d):
        phi = np.zeros(d, dtype=complex)
        phi[j] = 1
        orb = orbit_span(c, phi, bound)
        if not orb.reached_full:
            return WielandtCheck(bound, False, None)
        worst = max(worst, orb.steps_needed)
    return WielandtCheck(bound, True, worst)


# ----------------------------------------------------------------------------
# invariant subspaces
# ----------------------------------------------------------------------------

@dataclass
class InvariantSubspaceReport:
    """``minimal_subspace`` is the support projector of ``rho*`` when ergodic.

    For non-ergodic channels it is ``None`` and ``witnesses`` holds two
    invariant projectors with orthogonal supports.
    """

    minimal_subspace: np.ndarray | None
    is_irreducible: bool
    witnesses: list = field(default_factory=list)
    fixed_space_dim: int = 1
    max_invariance_defect: float = 0.0


def orthogonal_fixed_states(c, tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Two fixed states with orthogonal supports for a non-ergodic channel.

    Two distinct fixed states are obtained by projecting probe states onto the
    fixed space; the positive and negative parts of their difference are
    themselves fixed (up to normalization) and orthogonally supported.
    """
    states = probe_fixed_states(c, tol)
    base = states[0]
    for other in states[1:]:
        if trace_norm(other - base) > 1e-6:
            pos, neg = positive_negative_parts(base - other, tol)
            return pos / np.trace(pos).real, neg / np.trace(neg).real
    raise NotErgodicError("fixed space is spanned by a single state")


def minimal_invariant_subspace(c: Channel, tol: Tolerances = DEFAULT_TOL) -> InvariantSubspaceReport:
    report = classify(c, tol)
    d = c.dim
    if report.fixed_space_dim == 1:
        p = support_projector(report.fixed_state, tol)
        defect = invariance_defect(c, p)
        if defect >= INVARIANCE_TOL:
            raise CrossCheckError(f"support of rho* not invariant (defect {defect:.2e})")
        rank = int(round(np.trace(p).real))
        return InvariantSubspaceReport(p, rank == d, [p], 1, defect)
    a, b = orthogonal_fixed_states(c, tol)
    witnesses = [support_projector(a, tol), support_projector(b, tol)]
    defect = max(invariance_defect(c, w) for w in witnesses)
    if defect >= INVARIANCE_TOL:
        raise CrossCheckError(f"witness projector not invariant (defect {defect:.2e})")
    return InvariantSubspaceReport(None, False, witnesses, report.fixed_space_dim, defect)


# ----------------------------------------------------------------------------
# commutants and unital channels
# ----------------------------------------------------------------------------

def commutant_dimension(generators, tol: Tolerances = DEFAULT_TOL) -> int:
    """Dimension of ``{X : XG = GX}`` over the generators and their adjoints."""
    gens = [as_operator(g) for g in generators]
    if not gens:
        raise BadParamsError("need at least one generator")
    d = gens[0].shape[0]
    if any(g.shape != (d, d) for g in gens):
        raise DimensionMismatchError("generators differ in dimension")
    eye = np.eye(d)
    blocks = []
    for g in gens:
        for h in (g, dagger(g)):
            blocks.append(np.kron(h, eye) - np.kron(eye, h.T))
    s = np.linalg.svd(np.vstack(blocks), compute_uv=False)
    return int(d * d - np.sum(s > rank_cut(s, tol)))


def _require_unital(c: Channel, tol: Tolerances):
    if not is_unital(c, tol):
        raise NotUnitalError(f"{c.label or 'channel'} is not unital")


def unital_ergodic(c: Channel, tol: Tolerances = DEFAULT_TOL, cross_check: bool = True) -> bool:
    """Ergodic iff the Kraus operators (with adjoints) have trivial commutant."""
    _require_unital(c, tol)
    result = commutant_dimension(c.kraus, tol) == 1
    if cross_check:
        spectral = classify(c, tol).fixed_space_dim == 1
        if spectral != result:
            raise CrossCheckError(f"commutant says ergodic={result}, spectrum says {spectral}")
    return result


def qubit_random_unitary_ergodic(c: Channel, tol: Tolerances = DEFAULT_TOL,
                                 cross_check: bool = True) -> bool:
    """Ergodic iff two of the underlying unitaries fail to commute."""
    if c.dim != 2:
        raise NotQubitError(f"d={c.dim}")
    if not is_random_unitary(c):
        raise NotRandomUnitaryError(f"{c.label or 'channel'} is not random-unitary")
    us = underlying_unitaries(c)
    result = any(commutator_norm(a, b) > INVARIANCE_TOL
                 for i, a in enumerate(us) for b in us[i + 1:])
    if cross_check:
        spectral = classify(c, tol).ergodic
        if spectral != result:
            raise CrossCheckError(f"commutators say ergodic={result}, spectrum says {spectral}")
    return result


def square_modulus(c: Channel) -> Channel:
    """The unital channel ``M^dag o M``."""
    adj = Channel(tuple(dagger(k) for k in c.kraus), f"{c.label or 'M'}^dag")
    return compose(adj, c, f"{c.label or 'M'}^dag M")


def is_diagonalizable(c: Channel, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Normal superoperator: ``S S^dag = S^dag S``."""
    s = c.superoperator()
    return float(np.abs(s @ dagger(s) - dagger(s) @ s).max()) < tol.equality


@dataclass(frozen=True)
class SquareModulusReport:
    sufficient_verdict: bool
    square_modulus_ergodic: bool
    diagonalizable: bool
    channel_mixing: bool


def square_modulus_mixing_test(c: Channel, tol: Tolerances = DEFAULT_TOL) -> SquareModulusReport:
    """Ergodic square modulus is sufficient for mixing, and necessary when normal."""
    _require_unital(c, tol)
    sq_ergodic = classify(square_modulus(c), tol).fixed_space_dim == 1
    mixing = classify(c, tol).mixing
    diag = is_diagonalizable(c, tol)
    if sq_ergodic and not mixing:
        raise CrossCheckError("square modulus ergodic but channel not mixing")
    if diag and mixing and not sq_ergodic:
        raise CrossCheckError("diagonalizable mixing channel with non-ergodic square modulus")
    return SquareModulusReport(sq_ergodic, sq_ergodic, diag, mixing)


def streater_witness_check(c: Channel, p, u, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff ``M(P) = U P U^dag`` for the given proper projector and unitary."""
    p, u = as_operator(p), as_operator(u)
    d = c.dim
    if p.shape != (d, d) or u.shape != (d, d):
        raise BadWitnessError("witness dimension mismatch")
    if not is_projector(p, tol):
        raise BadWitnessError("P is not a projector")
    rank = np.trace(p).real
    if not 0.5 < rank < d - 0.5:
        raise BadWitnessError(f"P must be a proper nonzero projector (rank {rank:.3g})")
    if not is_unitary(u, tol):
        raise BadWitnessError("U is not unitary")
    _require_unital(c, tol)
    hit = trace_norm(apply(c, p) - u @ p @ dagger(u)) < INVARIANCE_TOL
    if hit and classify(square_modulus(c), tol).fixed_space_dim == 1:
        raise CrossCheckError("witness found but square modulus is ergodic")
    return hit


# ----------------------------------------------------------------------------
# peripheral spectrum
# ----------------------------------------------------------------------------

@dataclass
class PeripheralStructure:
    """Peripheral eigenvalues with their unitary intertwiners.

    ``intertwiners`` pairs each peripheral ``omega`` with ``U_omega`` satisfying
    ``M_i U = omega U M_i``, phase-normalized so ``U^L = I``. ``partial`` is set
    when ``rho*`` is not faithful; the group claims are then not asserted.
    """

    group_order: int
    eigenvalues: np.ndarray
    intertwiners: list
    representation_defect: float
    multiplicative_defect: float
    simple: bool
    partial: bool

    @property
    def cyclic_group(self) -> np.ndarray:
        n = max(self.group_order, 1)
        return np.exp(2j * np.pi * np.arange(n) / n)


def _cluster(values, radius: float) -> list[tuple[complex, int]]:
    out: list[list] = []
    for z in values:
        for entry in out:
            if abs(entry[0] - z) < radius:
                entry[1] += 1
                break
        else:
            out.append([complex(z), 1])
    return [(z, m) for z, m in out]


def group_order(values, max_order: int, tol: float = INTERTWINER_TOL) -> int:
    """Smallest ``L <= max_order`` with every value an ``L``-th root of unity; 0 if none."""
    values = np.asarray(values)
    for n in range(1, max_order + 1):
        if np.all(np.abs(values**n - 1) < tol):
            return n
    return 0


def _normalize_phase(u: np.ndarray, order: int) -> np.ndarray:
    if order < 1:
        return u
    w = np.linalg.matrix_power(u, order)
    tr = np.trace(w)
    alpha = np.angle(tr) if abs(tr) > 1e-8 else np.angle(np.linalg.det(w)) / u.shape[0]
    return u * np.exp(-1j * alpha / order)


def _phase_distance(a: np.ndarray, b: np.ndarray) -> float:
    overlap = np.vdot(b, a)
    phase = overlap / abs(overlap) if abs(overlap) > 1e-14 else 1.0
    return trace_norm(a - phase * b)


def peripheral_structure(c: Channel, tol: Tolerances = DEFAULT_TOL) -> PeripheralStructure:
    report = classify(c, tol)
    if not report.ergodic:
        raise NotErgodicError(f"channel is {report.verdict.value}")
    d = c.dim
    s = c.superoperator()
    clusters = _cluster(report.peripheral, tol.cluster)
    values = np.array([z for z, _ in clusters])
    order = group_order(values, d * d)
    pairs = []
    for omega, _ in clusters:
        if abs(omega - 1) < tol.cluster:
            omega = 1.0 + 0j
        a = superop.unvec(eigenspace(s, omega, 1)[:, 0], d)
        u = polar_decompose(a).isometry
        u = _normalize_phase(u, order)
        pairs.append((omega, u))
    mult = max((trace_norm(k @ u - w * u @ k) for w, u in pairs for k in c.kraus), default=0.0)
    rep = 0.0
    for w1, u1 in pairs:
        for w2, u2 in pairs:
            target = [u for w, u in pairs if abs(w - w1 * w2) < 1e-6]
            if target:
                rep = max(rep, _phase_distance(u1 @ u2, target[0]))
            else:
                rep = np.inf
    return PeripheralStructure(order, values, pairs, rep, mult,
                               all(m == 1 for _, m in clusters), not report.faithful)


def random_unitary_root_check(c: Channel, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Every peripheral eigenvalue is a ``d``-th root of unity."""
    if not (is_random_unitary(c) or span_contains_invertible(c, tol)):
        raise PreconditionNotMetError("Kraus span contains no invertible operator")
    report = classify(c, tol)
    if not (report.ergodic and report.faithful):
        raise PreconditionNotMetError("needs an ergodic channel with faithful fixed state")
    return bool(np.all(np.abs(report.peripheral**c.dim - 1) < ROOT_TOL))


def mixing_via_power_ergodicity(c: Channel, tol: Tolerances = DEFAULT_TOL) -> tuple[bool, int]:
    """Mixing iff every power up to ``d^2`` is ergodic (``M^d`` alone if the span has an invertible).

    Returns
    -------
    (is_mixing, k_checked)
        ``k_checked`` is the last power examined.
    """
    report = classify(c, tol)
    if not (report.ergodic and report.faithful):
        raise PreconditionNotMetError("needs an ergodic channel with faithful fixed state")
    d = c.dim
    s = c.superoperator()
    if span_contains_invertible(c, tol):
        ks = [d]
    else:
        ks = range(1, d * d + 1)
    result, k_checked = True, 0
    for k in ks:
        k_checked = k
        if classify(np.linalg.matrix_power(s, k), tol).fixed_space_dim != 1:
            result = False
            break
    if result != report.mixing:
        raise CrossCheckError(f"power test says mixing={result}, spectrum says {report.mixing}")
    return result, k_checked


# ----------------------------------------------------------------------------
# randomization
# ----------------------------------------------------------------------------

def f_n(lam: float, n: int) -> float:
    """``sum_{k=0}^{N} lambda^k``."""
    return float(sum(lam**k for k in range(n + 1)))


@dataclass
class RandomizationReport:
    ergodic: bool
    mixing: bool
    support_contained: bool
    min_bound_margin: float
    mixed_verdict: str

    @property
    def ok(self) -> bool:
        return self.ergodic and self.support_contained and self.min_bound_margin > 1e-9


def verify_randomization_stability(c_ergodic: Channel, c_other: Channel, p: float,
                                   tol: Tolerances = DEFAULT_TOL, seed: int = 0,
                                   ns=(1, 5, 20), lams=(0.5, 1.0, 1.5),
                                   n_pairs: int = 3) -> RandomizationReport:
    """Check that ``p M + (1 - p) M'`` stays ergodic and inherits the support of ``rho*``.

    The strict bound ``||sum lambda^n M_p^n(rho - rho')||_1 < f_N(lambda) ||rho - rho'||_1``
    is evaluated at every ``(N, lambda)`` on ``n_pairs`` seeded pairs of random
    states and on the pair ``|0><0|, |1><1|``.
    """
    if not 0 < p <= 1:
        raise PreconditionNotMetError(f"p={p} outside (0, 1]")
    base = classify(c_ergodic, tol)
    if not base.ergodic:
        raise PreconditionNotMetError(f"first channel is {base.verdict.value}")
    mixed = convex_combine([(p, c_ergodic), (1 - p, c_other)])
    rep = classify(mixed, tol)
    contained = rep.ergodic and support_contains(rep.fixed_state, base.fixed_state, tol)
    s = mixed.superoperator()
    d = c_ergodic.dim
    rng = rng_for(seed)
    e0, e1 = np.zeros((d, d), complex), np.zeros((d, d), complex)
    e0[0, 0] = 1
    e1[-1, -1] = 1
    pairs = [(e0, e1)] + [(random_state(d, rng), random_state(d, rng)) for _ in range(n_pairs)]
    margin = np.inf
    for rho, rho2 in pairs:
        delta = superop.vec(rho - rho2)
        norm = trace_norm(rho - rho2)
        for n in ns:
            powers = [delta]
            for _ in range(n):
                powers.append(s @ powers[-1])
            for lam in lams:
                acc = sum(lam**k * v for k, v in enumerate(powers))
                lhs = trace_norm(superop.unvec(acc, d))
                margin = min(margin, f_n(lam, n) * norm - lhs)
    return RandomizationReport(rep.ergodic, rep.mixing, bool(contained), float(margin),
                               rep.verdict.value)
