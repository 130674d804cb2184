"""Seeded property suites over random channel corpora.

Each suite walks a corpus whose item ``i`` is generated from
``child_seed(seed, i)``; every failed check becomes a :class:`Violation`
carrying enough data (seed, index, channel JSON) to reproduce it.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import channels as ch
from . import ergodicity as erg
from . import lindblad as lb
from . import superop
from .errors import QergodicError
from .io import channel_to_json, write_json
from .operators import DEFAULT_TOL, Tolerances, dagger, polar_decompose, trace_norm
from .spectral import classify, eigenspace

SUITES = ("spectral", "randomization", "unital", "peripheral", "lindblad")

# gallery channels that are ergodic; used as the fixed side of randomization pairs
ERGODIC_GALLERY = (
    ("flip", 2, {}),
    ("erasure", 2, {}),
    ("pauli_xy", 2, {"p": 0.3}),
    ("pauli_xyz", 2, {"px": 0.2, "py": 0.3, "pz": 0.5}),
    ("shift_multiply", 3, {"p": 0.5}),
    ("fourier", 3, {}),
    ("depolarizing", 3, {"p": 0.4}),
)


@dataclass
class Violation:
    suite: str
    index: int
    seed: int
    check: str
    detail: str
    channel: dict | None = None


@dataclass
class SuiteResult:
    suite: str
    seed: int
    corpus_size: int
    checks: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def corpus_channel(seed: int, index: int, reducible_every: int = 0) -> tuple[int, ch.Channel]:
    """Item ``index`` of the corpus: ``d`` in {2, 3}, 1 to 4 Kraus operators."""
    s = ch.child_seed(seed, index)
    d = 2 + s % 2
    k = 1 + (s >> 8) % 4
    if reducible_every and index % reducible_every == reducible_every - 1:
        return s, ch.random_reducible_channel(d, k, s)
    return s, ch.random_channel(d, k, s)


class _Checker:
    def __init__(self, suite: str, index: int, seed: int, c: ch.Channel | None):
        self.suite, self.index, self.seed, self.c = suite, index, seed, c
        self.count = 0
        self.violations: list[Violation] = []

    def __call__(self, name: str, ok: bool, detail: str = ""):
        self.count += 1
        if not ok:
            cj = channel_to_json(self.c) if self.c is not None else None
            self.violations.append(Violation(self.suite, self.index, self.seed, name, detail, cj))


def _greedy_match(a, b) -> float:
    b = list(b)
    worst = 0.0
    for z in a:
        j = int(np.argmin([abs(z - w) for w in b]))
        worst = max(worst, abs(z - b[j]))
        b.pop(j)
    return worst


# ----------------------------------------------------------------------------
# per-item checks
# ----------------------------------------------------------------------------

def _spectral_item(seed: int, index: int, tol: Tolerances) -> _Checker:
    s, c = corpus_channel(seed, index, reducible_every=5)
    chk = _Checker("spectral", index, s, c)
    sop = c.superoperator()
    d = c.dim
    ev = np.linalg.eigvals(sop)
    ev_adj = np.linalg.eigvals(dagger(sop))
    chk("adjoint_spectrum_conjugate", _greedy_match(np.conj(ev), ev_adj) < 1e-7)
    chk("unit_disk", np.abs(ev).max() <= 1 + 1e-8, f"max |lambda| = {np.abs(ev).max():.3e}")
    chk("conjugation_closed", _greedy_match(ev, np.conj(ev)) < 1e-7)
    left = superop.vec(np.eye(d)) @ sop
    chk("trace_preservation", np.linalg.norm(left - superop.vec(np.eye(d))) < 1e-9)
    rep = classify(c, tol)
    chk("fixed_space_nonempty", rep.fixed_space_dim >= 1)
    if rep.ergodic:
        adj_fixed = eigenspace(dagger(sop), 1.0, 1)[:, 0]
        a = superop.unvec(adj_fixed, d)
        a = (a + dagger(a)) / 2
        scale = np.trace(a) / d
        chk("constants_of_motion", trace_norm(a - scale * np.eye(d)) < 1e-7 * max(1, trace_norm(a)))
        for omega in rep.peripheral:
            vec = eigenspace(sop, omega, 1)[:, 0]
            modulus = polar_decompose(superop.unvec(vec, d)).modulus
            modulus = modulus / np.trace(modulus).real
            chk("peripheral_modulus_fixed", trace_norm(modulus - rep.fixed_state) < 1e-6)
    return chk


def _randomization_item(seed: int, index: int, tol: Tolerances) -> _Checker:
    s, other = corpus_channel(seed, index)
    name, dim, params = ERGODIC_GALLERY[index % len(ERGODIC_GALLERY)]
    base = ch.gallery(name, dim, **params)
    if other.dim != dim:
        other = ch.random_channel(dim, len(other), s)
    chk = _Checker("randomization", index, s, other)
    for p in (0.1, 0.5, 0.9):
        r = erg.verify_randomization_stability(base, other, p, tol, seed=s)
        chk(f"ergodic[{name},p={p}]", r.ergodic, r.mixed_verdict)
        chk(f"support[{name},p={p}]", r.support_contained)
        chk(f"bound[{name},p={p}]", r.min_bound_margin > 1e-9, f"margin {r.min_bound_margin:.3e}")
    for p in (0.25, 0.5, 0.75):
        mix = ch.convex_combine([(p, other), (1 - p, ch.identity(other.dim))])
        per = classify(mix, tol).peripheral
        chk(f"identity_mixture_peripheral[p={p}]", bool(np.all(np.abs(per - 1) < tol.peripheral)),
            str(per))
    return chk


def _unital_item(seed: int, index: int, tol: Tolerances) -> _Checker:
    s = ch.child_seed(seed, index)
    d = 2 + s % 2
    k = 1 + (s >> 8) % 3
    rng = ch.rng_for(s)
    probs = rng.dirichlet(np.ones(k))
    if index % 3 == 2:
        # commuting unitaries: a shared eigenbasis makes the channel non-ergodic
        w = ch.haar_unitary(d, rng)
        kraus = [np.sqrt(p) * w @ np.diag(np.exp(2j * np.pi * rng.random(d))) @ dagger(w) for p in probs]
        c = ch.Channel(tuple(kraus), f"commuting_unitary({d},{s})")
    else:
        c = ch.random_unitary_channel(d, probs, s)
    chk = _Checker("unital", index, s, c)
    rep = classify(c, tol)
    chk("unital_ergodic_agrees", erg.unital_ergodic(c, tol, cross_check=False) == (rep.fixed_space_dim == 1))
    sq = erg.square_modulus_mixing_test(c, tol)
    chk("square_modulus_sufficient", (not sq.sufficient_verdict) or sq.channel_mixing)
    if d == 2:
        chk("qubit_commutator_agrees",
            erg.qubit_random_unitary_ergodic(c, tol, cross_check=False) == rep.ergodic)
    return chk


def _peripheral_item(seed: int, index: int, tol: Tolerances) -> _Checker:
    s, c = corpus_channel(seed, index, reducible_every=4)
    if index % 2:
        d = c.dim
        probs = ch.rng_for(s).dirichlet(np.ones(2))
        c = ch.random_unitary_channel(d, probs, s)
    chk = _Checker("peripheral", index, s, c)
    rep = classify(c, tol)
    inv = erg.minimal_invariant_subspace(c, tol)
    chk("invariant_iff_ergodic", (inv.minimal_subspace is not None) == rep.ergodic)
    adj = ch.adjoint(c)
    for p in inv.witnesses:
        chk("invariance", erg.invariance_defect(c, p) < erg.INVARIANCE_TOL)
        comp = np.eye(c.dim) - p
        if trace_norm(comp) > 0.5:
            chk("adjoint_duality", erg.invariance_defect(adj, comp) < erg.INVARIANCE_TOL)
    if rep.ergodic and rep.faithful:
        ps = erg.peripheral_structure(c, tol)
        chk("group_order_bound", 1 <= ps.group_order <= c.dim**2, str(ps.group_order))
        chk("multiplicative", ps.multiplicative_defect < erg.INTERTWINER_TOL,
            f"{ps.multiplicative_defect:.2e}")
        chk("representation", ps.representation_defect < 1e-6, f"{ps.representation_defect:.2e}")
        chk("simple", ps.simple)
        if erg.is_random_unitary(c) or erg.span_contains_invertible(c, tol):
            chk("roots_of_unity", erg.random_unitary_root_check(c, tol))
        chk("commutant_irreducible", erg.commutant_dimension(c.kraus, tol) == 1)
    return chk


def _lindblad_item(seed: int, index: int, tol: Tolerances) -> _Checker:
    s, c = corpus_channel(seed, index, reducible_every=4)
    chk = _Checker("lindblad", index, s, c)
    gamma = 0.5 + (s % 1000) / 500.0
    gen = lb.from_channel(c, gamma)
    lsop = gen.superoperator()
    mapped = gamma * (np.linalg.eigvals(c.superoperator()) - 1)
    chk("spectral_mapping", _greedy_match(mapped, np.linalg.eigvals(lsop)) < 1e-8)
    rep = lb.reduce_to_channel(gen, tol, samples=0)
    chk("reduction", rep.reduction_defect < 1e-9)
    ml_adj = ch.adjoint(rep.ml_channel)
    chk("ml_unit_preserving", ml_adj.unit_defect() < 1e-9)
    chk("ergodic_equivalence", rep.ergodic == classify(c, tol).ergodic)
    t_l = ch.Channel(rep.t_l)
    k = lb.null_space_dim(gen, tol)
    for v in eigenspace(lsop, 0.0, k).T:
        a = superop.unvec(v, c.dim)
        ta = ch.apply(t_l, a)
        chk("fixed_point_transport", trace_norm(ch.apply(rep.ml_channel, ta) - ta) < 1e-7)
    rho = ch.random_state(c.dim, ch.rng_for(s))
    chained = lb.evolve(gen, lb.evolve(gen, rho, 0.3), 0.7)
    chk("semigroup_law", trace_norm(chained - lb.evolve(gen, rho, 1.0)) < 1e-8)
    if rep.ergodic:
        fixed = rep.fixed_state
        big = 40.0 / gamma
        far = trace_norm(lb.evolve(gen, rho, big) - fixed)
        half = trace_norm(lb.evolve(gen, rho, big / 2) - fixed)
        chk("continuous_mixing", far <= half + 1e-12, f"{far:.2e} vs {half:.2e}")
    return chk


_ITEMS = {
    "spectral": _spectral_item,
    "randomization": _randomization_item,
    "unital": _unital_item,
    "peripheral": _peripheral_item,
    "lindblad": _lindblad_item,
}


def _run_item(args) -> _Checker:
    suite, seed, index, tol = args
    try:
        return _ITEMS[suite](seed, index, tol)
    except QergodicError as exc:
        chk = _Checker(suite, index, ch.child_seed(seed, index), None)
        chk(type(exc).__name__, False, str(exc))
        return chk


def run_suite(suite: str, seed: int, corpus_size: int, tol: Tolerances = DEFAULT_TOL,
              jobs: int = 1) -> SuiteResult:
    """Run one suite; results are ordered by corpus index regardless of ``jobs``."""
    if suite not in _ITEMS:
        raise KeyError(suite)
    args = [(suite, seed, i, tol) for i in range(corpus_size)]
    if jobs > 1 and corpus_size > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            items = list(pool.map(_run_item, args))
    else:
        items = [_run_item(a) for a in args]
    out = SuiteResult(suite, seed, corpus_size)
    for item in items:
        out.checks += item.count
        out.violations.extend(item.violations)
    return out


def run(suite: str, seed: int, corpus_size: int, tol: Tolerances = DEFAULT_TOL,
        jobs: int = 1) -> list[SuiteResult]:
    names = SUITES if suite == "all" else (suite,)
    return [run_suite(name, seed, corpus_size, tol, jobs) for name in names]


def dump_violations(results, out_dir) -> list[Path]:
    out_dir = Path(out_dir)
    paths = []
    for res in results:
        for v in res.violations:
            out_dir.mkdir(parents=True, exist_ok=True)
            path = out_dir / f"violation-{v.suite}-{v.index}-{len(paths)}.json"
            write_json(path, asdict(v))
            paths.append(path)
    return paths
