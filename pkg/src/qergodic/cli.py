"""Command-line front end.

Exit codes: 0 success, 1 file or parse error, 2 invalid input (for example a
channel that is not trace preserving), 3 numerically unreliable result.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field, fields

import numpy as np

from . import channels as ch
from . import ergodicity as erg
from . import io
from . import lindblad as lb
from . import proptest
from .errors import (
    BadParamsError,
    CrossCheckError,
    DimensionMismatchError,
    EigFailureError,
    FormatError,
    NearSingularTLError,
    PreconditionNotMetError,
    QergodicError,
    ReductionMismatchError,
    UnknownNameError,
)
from .operators import DEFAULT_TOL, Tolerances, trace_norm
from .spectral import Verdict, classify, spectrum

EXIT_OK, EXIT_IO, EXIT_INVALID, EXIT_UNRELIABLE = 0, 1, 2, 3


@dataclass
class RunConfig:
    """Options loadable from a JSON file; unknown keys are rejected."""

    command: str | None = None
    inputs: list = field(default_factory=list)
    tolerances: dict = field(default_factory=dict)
    seed: int = 0
    corpus_size: int = 100
    format: str = "text"

    @classmethod
    def from_json(cls, obj) -> "RunConfig":
        if not isinstance(obj, dict):
            raise FormatError("config: expected a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise FormatError(f"config: unknown keys {sorted(unknown)}")
        cfg = cls(**obj)
        tol_keys = set(DEFAULT_TOL.to_dict())
        if not isinstance(cfg.tolerances, dict) or set(cfg.tolerances) - tol_keys:
            raise FormatError(f"config: tolerances may only set {sorted(tol_keys)}")
        if cfg.format not in ("text", "json"):
            raise FormatError("config: format must be 'text' or 'json'")
        if isinstance(cfg.seed, bool) or not isinstance(cfg.seed, int):
            raise FormatError("config: seed must be an integer")
        if isinstance(cfg.corpus_size, bool) or not isinstance(cfg.corpus_size, int) or cfg.corpus_size < 0:
            raise FormatError("config: corpus_size must be a nonnegative integer")
        return cfg

    def tol(self) -> Tolerances:
        return Tolerances(**{**DEFAULT_TOL.to_dict(), **self.tolerances})


def _fmt_complex(z: complex) -> str:
    z = complex(z)
    if abs(z.imag) < 1e-12:
        return f"{z.real:+.10g}"
    return f"{z.real:+.10g}{z.imag:+.10g}j"


def _fmt_matrix(a: np.ndarray) -> str:
    rows = ["  [" + ", ".join(_fmt_complex(x) for x in row) + "]" for row in a]
    return "\n".join(rows)


def _emit(fmt: str, payload: dict, text: str, out=None):
    out = out or sys.stdout
    if fmt == "json":
        out.write(io.dumps(payload) + "\n")
    else:
        out.write(text.rstrip("\n") + "\n")


def _load_valid_channel(path, tol: Tolerances) -> ch.Channel:
    c = io.load_channel(path)
    rep = ch.validate(c, tol)
    if not rep.accepted:
        raise BadParamsError(f"channel is not trace preserving (defect {rep.tp_defect:.3e})")
    return c


def _try(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except PreconditionNotMetError as exc:
        return {"skipped": f"{type(exc).__name__}: {exc}"}


def structural_report(c: ch.Channel, tol: Tolerances) -> dict:
    """All structural tests whose preconditions hold, as JSON-ready values."""
    rep = classify(c, tol)
    out: dict = {}
    inv = erg.minimal_invariant_subspace(c, tol)
    out["minimal_invariant_subspace"] = {
        "exists": inv.minimal_subspace is not None,
        "rank": None if inv.minimal_subspace is None else int(round(np.trace(inv.minimal_subspace).real)),
        "irreducible": inv.is_irreducible,
        "witness_ranks": [int(round(np.trace(w).real)) for w in inv.witnesses],
        "max_invariance_defect": inv.max_invariance_defect,
    }
    out["commutant_dimension"] = erg.commutant_dimension(c.kraus, tol)
    if ch.is_unital(c, tol):
        out["unital_ergodic"] = erg.unital_ergodic(c, tol)
        sq = erg.square_modulus_mixing_test(c, tol)
        out["square_modulus"] = {"ergodic": sq.square_modulus_ergodic,
                                 "diagonalizable": sq.diagonalizable}
    if c.dim == 2 and erg.is_random_unitary(c):
        out["qubit_random_unitary_ergodic"] = erg.qubit_random_unitary_ergodic(c, tol)
    if rep.ergodic:
        ps = erg.peripheral_structure(c, tol)
        out["peripheral_structure"] = {
            "group_order": ps.group_order,
            "multiplicative_defect": ps.multiplicative_defect,
            "representation_defect": ps.representation_defect,
            "simple": ps.simple,
            "partial": ps.partial,
        }
        mix = _try(erg.mixing_via_power_ergodicity, c, tol)
        out["mixing_via_powers"] = mix if isinstance(mix, dict) else {"mixing": mix[0], "k_checked": mix[1]}
        roots = _try(erg.random_unitary_root_check, c, tol)
        out["roots_of_unity"] = roots
        w = _try(erg.wielandt_check, c, tol)
        out["wielandt"] = w if isinstance(w, dict) else {"bound": w.bound, "satisfied": w.satisfied,
                                                          "steps_needed": w.steps_needed}
    return out


def _structural_text(s: dict) -> str:
    lines = ["structural:"]
    for key, val in s.items():
        lines.append(f"  {key}: {json.dumps(val)}")
    return "\n".join(lines)


def cmd_classify(args, cfg: RunConfig) -> int:
    tol = cfg.tol()
    c = _load_valid_channel(args.path, tol)
    rep = classify(c, tol)
    payload: dict = {"channel": c.label, "dim": c.dim}
    text = [f"channel: {c.label or args.path} (d={c.dim}, {len(c)} Kraus)"]
    if args.method in ("spectral", "both"):
        payload.update(rep.to_dict())
        text.append(f"verdict: {rep.verdict.value}")
        text.append("peripheral: " + ", ".join(_fmt_complex(z) for z in rep.peripheral))
        text.append(f"fixed space dim: {rep.fixed_space_dim}")
        text.append(f"faithful: {rep.faithful}")
        if rep.fixed_state is not None:
            text.append("fixed state:\n" + _fmt_matrix(rep.fixed_state))
    else:
        payload["verdict"] = rep.verdict.value
        payload["tolerances"] = tol.to_dict()
        text.append(f"verdict: {rep.verdict.value}")
    if args.method in ("structural", "both") and rep.verdict is not Verdict.UNRELIABLE:
        s = structural_report(c, tol)
        payload["structural"] = s
        text.append(_structural_text(s))
    _emit(cfg.format, payload, "\n".join(text))
    return EXIT_UNRELIABLE if rep.verdict is Verdict.UNRELIABLE else EXIT_OK


def _parse_params(items) -> dict:
    params = {}
    for item in items or []:
        if "=" not in item:
            raise BadParamsError(f"parameter '{item}' is not key=value")
        key, val = item.split("=", 1)
        try:
            params[key] = float(val)
        except ValueError as exc:
            raise BadParamsError(f"parameter {key} needs a number") from exc
    return params


def cmd_gallery(args, cfg: RunConfig) -> int:
    c = ch.gallery(args.name, args.dim, **_parse_params(args.param))
    obj = io.channel_to_json(c)
    if args.output:
        io.write_json(args.output, obj)
        if cfg.format == "text":
            print(f"wrote {c.label} (d={c.dim}, {len(c)} Kraus) to {args.output}")
        else:
            print(io.dumps({"written": args.output, "label": c.label}))
    else:
        print(io.dumps(obj))
    return EXIT_OK


def cmd_spectrum(args, cfg: RunConfig) -> int:
    tol = cfg.tol()
    c = _load_valid_channel(args.path, tol)
    sp = spectrum(c, tol)
    payload = {"eigenvalues": [[float(z.real), float(z.imag)] for z in sp.eigenvalues],
               "residuals": [float(r) for r in sp.residuals], "tolerances": tol.to_dict()}
    text = "\n".join(f"{_fmt_complex(z)}  |lambda|={abs(z):.10f}" for z in sp.eigenvalues)
    _emit(cfg.format, payload, text)
    return EXIT_OK


def cmd_proptest(args, cfg: RunConfig) -> int:
    tol = cfg.tol()
    results = proptest.run(args.suite, cfg.seed, cfg.corpus_size, tol, args.jobs)
    paths = proptest.dump_violations(results, args.out_dir)
    payload = {"seed": cfg.seed, "corpus_size": cfg.corpus_size, "tolerances": tol.to_dict(),
               "suites": [{"suite": r.suite, "checks": r.checks, "violations": len(r.violations)}
                          for r in results],
               "reproducers": [str(p) for p in paths]}
    lines = [f"seed={cfg.seed} corpus={cfg.corpus_size}"]
    for r in results:
        lines.append(f"{r.suite:14s} checks={r.checks:6d} violations={len(r.violations)}")
    for p in paths:
        lines.append(f"reproducer: {p}")
    _emit(cfg.format, payload, "\n".join(lines))
    return EXIT_OK if all(r.ok for r in results) else EXIT_INVALID


def cmd_evolve(args, cfg: RunConfig) -> int:
    tol = cfg.tol()
    gen = io.load_generator(args.generator)
    rho = io.load_operator(args.rho)
    if rho.shape[0] != gen.dim:
        raise DimensionMismatchError(f"state of dim {rho.shape[0]} for d={gen.dim} generator")
    fixed = lb.reduce_to_channel(gen, tol, samples=0).fixed_state
    rows = []
    for t in args.t:
        out = lb.evolve(gen, rho, t)
        rows.append({"t": t, "distance": trace_norm(out - fixed), "state": io.operator_to_json(out)})
    payload = {"fixed_state": io.operator_to_json(fixed), "samples": rows, "tolerances": tol.to_dict()}
    text = "t,trace_distance\n" + "\n".join(f"{r['t']:.10g},{r['distance']:.10e}" for r in rows)
    _emit(cfg.format, payload, text)
    return EXIT_OK


def cmd_reduce(args, cfg: RunConfig) -> int:
    tol = cfg.tol()
    gen = io.load_generator(args.generator)
    rep = lb.reduce_to_channel(gen, tol)
    ergodic = lb.semigroup_ergodic(gen, tol)
    ml = io.channel_to_json(rep.ml_channel)
    if args.output:
        io.write_json(args.output, ml)
    payload = {"ergodic": ergodic, "fixed_state": io.operator_to_json(rep.fixed_state),
               "condition_number": rep.condition_number, "reduction_defect": rep.reduction_defect,
               "convergence": [[t, d] for t, d in rep.convergence_samples],
               "ml_channel": ml, "tolerances": tol.to_dict()}
    text = [f"semigroup ergodic: {ergodic}",
            f"cond(I + G): {rep.condition_number:.4g}",
            f"|S_L - T_L - L|: {rep.reduction_defect:.3e}",
            "fixed state:\n" + _fmt_matrix(rep.fixed_state),
            "t,trace_distance"] + [f"{t:.6g},{d:.6e}" for t, d in rep.convergence_samples]
    if args.output:
        text.append(f"M_L written to {args.output}")
    _emit(cfg.format, payload, "\n".join(text))
    return EXIT_OK


COMMANDS = {
    "classify": cmd_classify,
    "gallery": cmd_gallery,
    "spectrum": cmd_spectrum,
    "proptest": cmd_proptest,
    "evolve": cmd_evolve,
    "reduce": cmd_reduce,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration (strict)")
    common.add_argument("--format", choices=("text", "json"), default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--corpus", type=int, default=None, help="corpus size for proptest")
    common.add_argument("--tol-peripheral", type=float, default=None)

    parser = argparse.ArgumentParser(prog="qergodic", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="classify a channel JSON file")
    p.add_argument("path", nargs="?")
    p.add_argument("--method", choices=("spectral", "structural", "both"), default="both")

    p = sub.add_parser("gallery", parents=[common], help="write a named example channel")
    p.add_argument("name")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--param", action="append", metavar="KEY=VALUE")
    p.add_argument("-o", "--output")

    p = sub.add_parser("spectrum", parents=[common], help="eigenvalues of a channel")
    p.add_argument("path", nargs="?")

    p = sub.add_parser("proptest", parents=[common], help="run a property suite")
    p.add_argument("suite", choices=proptest.SUITES + ("all",))
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out-dir", default="proptest-violations")

    p = sub.add_parser("evolve", parents=[common], help="evolve a state under a generator")
    p.add_argument("generator", nargs="?")
    p.add_argument("rho", nargs="?")
    p.add_argument("--t", type=float, nargs="+", required=True)

    p = sub.add_parser("reduce", parents=[common], help="reduce a generator to its channel M_L")
    p.add_argument("generator", nargs="?")
    p.add_argument("-o", "--output")
    return parser


_INPUT_SLOTS = {
    "classify": ("path",),
    "spectrum": ("path",),
    "evolve": ("generator", "rho"),
    "reduce": ("generator",),
}


def _config(args) -> RunConfig:
    cfg = RunConfig.from_json(io.read_json(args.config)) if args.config else RunConfig()
    if cfg.command not in (None, args.command):
        raise FormatError(f"config is for '{cfg.command}', not '{args.command}'")
    slots = [n for n in _INPUT_SLOTS.get(args.command, ())]
    queue = list(cfg.inputs)
    for name in slots:
        if getattr(args, name) is None:
            if not queue:
                raise FormatError(f"missing input '{name}' (give it on the command line or in config inputs)")
            setattr(args, name, queue.pop(0))
    if args.format is not None:
        cfg.format = args.format
    if args.seed is not None:
        cfg.seed = args.seed
    if args.corpus is not None:
        if args.corpus < 0:
            raise BadParamsError("--corpus must be nonnegative")
        cfg.corpus_size = args.corpus
    if args.tol_peripheral is not None:
        cfg.tolerances = {**cfg.tolerances, "peripheral": args.tol_peripheral}
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg)
    except (OSError, json.JSONDecodeError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (EigFailureError, NearSingularTLError, ReductionMismatchError, CrossCheckError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_UNRELIABLE
    except (UnknownNameError, QergodicError, ValueError) as exc:
        print(f"invalid input: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
