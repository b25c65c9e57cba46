"""Command-line interface: ``blackwell-kit <command> ...``.

Exit status: 0 on success, 1 on domain or I/O errors, 2 on usage errors.
A negative degradation answer is a result, not an error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import analysis, blackwell as bw, io, operations as ops, parameters as par
from .blackwell import BlackwellMeasure
from .channel_core import Channel, channel_distance, compose
from .errors import ChannelError, DimensionMismatch, ParseError
from .selftest import SelftestConfig, format_report, run_selftest

SEED_ENV = "BLACKWELL_KIT_SEED"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: list[str]
    seed: int = 0
    fmt: str = "text"
    output: str | None = None
    options: dict[str, Any] = field(default_factory=dict)


def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return v


def _nonneg(text: str) -> float:
    v = float(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _fmt_value(v, precise: bool) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v)) if precise else format(float(v), ".12g")
    if isinstance(v, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_fmt_value(x, precise) for x in v) + "]"
    return str(v)


def _to_jsonable(v):
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, (list, tuple)):
        return [_to_jsonable(x) for x in v]
    return v


def render(result: dict[str, Any], fmt: str) -> str:
    if fmt == "json":
        return json.dumps({k: _to_jsonable(v) for k, v in result.items()}, indent=2) + "\n"
    sep = "\t" if fmt == "tsv" else ": "
    return "".join(f"{k}{sep}{_fmt_value(v, False)}\n" for k, v in result.items())


def _parse_floats(text: str) -> np.ndarray:
    try:
        return np.array([float(t) for t in text.split(",")])
    except ValueError:
        raise UsageError(f"cannot parse number list {text!r}") from None


def _parse_joint(text: str) -> par.JointPrior:
    rows = [_parse_floats(r) for r in text.split(";")]
    if len({r.size for r in rows}) != 1:
        raise UsageError("joint prior rows must have equal length")
    try:
        return par.JointPrior(np.vstack(rows))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _parse_code(text: str) -> par.Code:
    words = []
    for w in text.split(","):
        w = w.strip()
        if not w:
            raise UsageError("empty codeword")
        words.append(tuple(int(c) for c in (w.split(":") if ":" in w else w)))
    try:
        return par.Code.from_words(words)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _channel(path: str) -> Channel:
    obj = io.load_any(path)
    if isinstance(obj, BlackwellMeasure):
        return bw.channel_from_measure(obj)
    if not isinstance(obj, Channel):
        raise ParseError(f"{path}: expected a channel file")
    return obj


def _measure(path: str) -> BlackwellMeasure:
    obj = io.load_any(path)
    if isinstance(obj, Channel):
        return bw.blackwell_measure(obj)
    if not isinstance(obj, BlackwellMeasure):
        raise ParseError(f"{path}: expected a channel or measure file")
    return obj


def _prior(args, n: int) -> np.ndarray:
    if args.prior is None:
        return np.full(n, 1.0 / n)
    p = _parse_floats(args.prior)
    if p.size != n:
        raise DimensionMismatch(f"prior has {p.size} entries, channel has {n} inputs")
    return p


# commands

def cmd_param(args) -> dict[str, Any]:
    name = args.name
    obj = io.load_any(args.channel)
    if isinstance(obj, ops.BinaryOp):
        raise ParseError(f"{args.channel}: expected a channel or measure file")
    is_measure = isinstance(obj, BlackwellMeasure)
    n = obj.alphabet_size if is_measure else obj.input_size
    if name in ("mutual-information", "mi"):
        p = _prior(args, n)
        v = bw.mutual_information_of(p, obj) if is_measure else par.mutual_information(p, obj)
        return {"mutual_information": v}
    if name == "symmetric-capacity":
        p = np.full(n, 1.0 / n)
        v = bw.mutual_information_of(p, obj) if is_measure else par.mutual_information(p, obj)
        return {"symmetric_capacity": v}
    if name == "map-error":
        p = _prior(args, n)
        return {"map_error": bw.map_error_of(p, obj) if is_measure else par.map_error(p, obj)}
    if name == "bhattacharyya":
        return {"bhattacharyya": bw.bhattacharyya_of(obj) if is_measure else par.bhattacharyya(obj)}
    W = bw.channel_from_measure(obj) if is_measure else obj
    if name == "capacity":
        r = par.capacity(W, tol=args.tol)
        return {"capacity": r.value, "lower_bound": r.lower_bound, "upper_bound": r.upper_bound,
                "gap": r.gap, "iterations": r.iterations,
                "maximizing_input": np.asarray(r.maximizing_input)}
    if name == "correct-guess":
        if args.joint is None:
            raise UsageError("correct-guess needs --joint 'p00,p01;p10,p11'")
        return {"correct_guess_prob": par.correct_guess_prob(_parse_joint(args.joint), W)}
    if name == "code-error":
        if args.code is None:
            raise UsageError("code-error needs --code '00,11'")
        code = _parse_code(args.code)
        v = bw.code_error_of(code, obj) if is_measure else par.code_error(code, W)
        return {"code_error": v}
    if name == "optimal-code-error":
        if args.n is None or args.m is None:
            raise UsageError("optimal-code-error needs --n and --m")
        return {"optimal_code_error": par.optimal_code_error(args.n, args.m, W)}
    raise UsageError(f"unknown parameter {name!r}")


OP_ARITY = {"compose": 2, "sum": 2, "product": 2, "interpolate": 2,
            "polar-minus": 2, "polar-plus": 2, "right-inverse": 1}


def cmd_op(args):
    name, files = args.name, args.files
    if len(files) != OP_ARITY[name]:
        raise UsageError(f"op {name} takes {OP_ARITY[name]} file(s)")
    if name == "right-inverse":
        inv = ops.right_inverse(io.load_op(files[0]))
        return ops.check_uniformity_preserving(inv.table)
    if name in ("polar-minus", "polar-plus"):
        W, op = _channel(files[0]), io.load_op(files[1])
        return ops.polar_minus(W, op) if name == "polar-minus" else ops.polar_plus(W, op)
    A, B = _channel(files[0]), _channel(files[1])
    if name == "compose":
        return compose(A, B)
    if name == "sum":
        return ops.channel_sum(A, B)
    if name == "product":
        return ops.channel_product(A, B)
    if args.alpha is None:
        raise UsageError("interpolate needs --alpha")
    return ops.interpolate(args.alpha, A, B)


def cmd_blackwell(args):
    if args.to_channel:
        return bw.channel_from_measure(io.load_measure(args.file))
    obj = io.load_any(args.file)
    if isinstance(obj, BlackwellMeasure):
        return obj
    if not isinstance(obj, Channel):
        raise ParseError(f"{args.file}: expected a channel or measure file")
    return bw.blackwell_measure(obj, atom_tol=args.atom_tol)


def cmd_equiv(args) -> dict[str, Any]:
    a, b = _measure(args.first), _measure(args.second)
    if a.alphabet_size != b.alphabet_size:
        raise DimensionMismatch("inputs have different input alphabets")
    return {"equivalent": bw.measures_equal(a, b, args.atom_tol),
            "rank_first": a.rank, "rank_second": b.rank}


def cmd_degraded(args) -> dict[str, Any]:
    W_deg, W = _channel(args.degraded), _channel(args.channel)
    res = analysis.is_degraded(W_deg, W, tol=args.lp_tol)
    if res.degraded:
        return {"degraded": True, "residual": res.residual, "witness": res.intermediate.matrix}
    return {"degraded": False, "infeasibility": res.infeasibility}


def cmd_dist(args) -> dict[str, Any]:
    if args.kind == "channel":
        return {"channel_distance": channel_distance(_channel(args.first), _channel(args.second))}
    if args.kind == "tv":
        return {"tv_distance": bw.tv_distance(_measure(args.first), _measure(args.second), args.atom_tol)}
    budget = analysis.NoisinessBudget(args.m_max, args.samples, args.seed)
    est = analysis.noisiness_lower_bound(_channel(args.first), _channel(args.second), budget)
    return {"noisiness_lower_bound": est.lower_bound, "m_max_used": est.m_max_used,
            "priors_sampled": est.priors_sampled, "witness_prior": est.witness_prior.weights}


def cmd_probe(args) -> dict[str, Any]:
    rep = analysis.continuity_probe(_channel(args.channel), args.param, args.radius, args.samples, args.seed)
    return {"param": rep.param, "radius": rep.radius, "samples": rep.samples,
            "max_param_deviation": rep.max_param_deviation,
            "max_channel_distance": rep.max_channel_distance}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=("text", "json", "tsv"), default="text")
    common.add_argument("--output", "-o", help="write to this path instead of stdout")
    common.add_argument("--seed", type=int, default=None,
                        help=f"random seed (default: ${SEED_ENV} or 0)")
    common.add_argument("--atom-tol", type=_positive, default=bw.ATOM_TOL)

    p = argparse.ArgumentParser(prog="blackwell-kit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("param", parents=[common], help="evaluate a channel parameter")
    s.add_argument("name", choices=("mutual-information", "mi", "symmetric-capacity", "capacity",
                                    "map-error", "bhattacharyya", "correct-guess", "code-error",
                                    "optimal-code-error"))
    s.add_argument("channel")
    s.add_argument("--tol", type=_positive, default=1e-9)
    s.add_argument("--prior", help="comma-separated input distribution (default uniform)")
    s.add_argument("--joint", help="joint prior rows separated by ';'")
    s.add_argument("--code", help="comma-separated codewords, e.g. 00,11 (or 0:10,1:2 for |X|>10)")
    s.add_argument("--n", type=int)
    s.add_argument("--m", type=int)

    s = sub.add_parser("op", parents=[common], help="apply a channel operation, print the result file")
    s.add_argument("name", choices=sorted(OP_ARITY))
    s.add_argument("files", nargs="+")
    s.add_argument("--alpha", type=float)

    s = sub.add_parser("blackwell", parents=[common], help="Blackwell measure of a channel (or the reverse)")
    s.add_argument("file")
    s.add_argument("--to-channel", action="store_true", help="read a measure, write a representative channel")

    s = sub.add_parser("equiv", parents=[common], help="test Blackwell equivalence")
    s.add_argument("first")
    s.add_argument("second")

    s = sub.add_parser("degraded", parents=[common], help="is the first channel a garbling of the second?")
    s.add_argument("degraded")
    s.add_argument("channel")
    s.add_argument("--lp-tol", type=_positive, default=analysis.LP_TOL)

    s = sub.add_parser("dist", parents=[common], help="distance between channels or classes")
    s.add_argument("kind", choices=("channel", "tv", "noisiness"))
    s.add_argument("first")
    s.add_argument("second")
    s.add_argument("--m-max", type=int, default=None)
    s.add_argument("--samples", type=int, default=200)

    s = sub.add_parser("probe", parents=[common], help="empirical continuity probe")
    s.add_argument("channel")
    s.add_argument("--param", choices=sorted(analysis.PROBE_PARAMS), default="capacity")
    s.add_argument("--radius", type=_nonneg, default=1e-4)
    s.add_argument("--samples", type=int, default=20)

    s = sub.add_parser("selftest", parents=[common], help="run the seeded invariant suites")
    s.add_argument("--scale", type=_positive, default=1.0, help="multiply every sample count")
    return p


COMMANDS = {"param": cmd_param, "op": cmd_op, "blackwell": cmd_blackwell, "equiv": cmd_equiv,
            "degraded": cmd_degraded, "dist": cmd_dist, "probe": cmd_probe}


def _emit(text: str, output: str | None):
    if output:
        try:
            with open(output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"{output}: {exc.strerror or exc}") from None
    else:
        sys.stdout.write(text)


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.seed is None:
        env = os.environ.get(SEED_ENV)
        try:
            args.seed = int(env) if env else 0
        except ValueError:
            print(f"blackwell-kit: {SEED_ENV} must be an integer", file=sys.stderr)
            return 2
    try:
        if args.command == "selftest":
            results = run_selftest(SelftestConfig(args.seed, args.scale))
            _emit(format_report(results, args.seed), args.output)
            return 0 if all(r.passed for r in results) else 1
        result = COMMANDS[args.command](args)
        if isinstance(result, dict):
            _emit(render(result, args.fmt), args.output)
        else:
            _emit(io.dumps(result), args.output)
        return 0
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"blackwell-kit: error: {exc}", file=sys.stderr)
        return 2
    except (ChannelError, OSError, ValueError) as exc:
        print(f"blackwell-kit: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
