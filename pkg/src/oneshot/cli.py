"""Command-line front end.

Every command reads distributions and channels as JSON (a file given with
``--dist``/``--channel``, or stdin) and writes its result to stdout. A JSON
result carries a ``run`` entry recording the command, its parameters, the
library version and the seeds, so outputs can be piped into the next command
and replayed later. All epsilon parameters are explicit; none default.

Exit codes: 0 success, 1 property-suite failure, 2 argument error,
3 validation error, 4 oracle budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

from . import __version__
from .capacity import build_code, capacity_bounds, evaluate_code
from .common import c_min_bounds, c_min_lower, common_entropy, common_min_entropy, gacs_korner
from .errors import BudgetExceeded, OneShotError
from .oracle import OracleBudget, exact_best_code, exact_c_min
from .prob import Channel, JointDistribution, ProbVector, SubProbVector, from_dict, shannon_entropy, to_csv
from .smooth import (
    h_max,
    h_max_cond,
    h_min,
    h_min_cond,
    smooth_h_max,
    smooth_h_max_cond,
    smooth_h_min,
    smooth_h_min_cond,
)
from .tasks import compress_with_side_info, extract
from .verify import round_floats, run_all
from .zoo import ChannelSpec, blocks, equal, make_channel, product

EXIT_SUITE, EXIT_ARGS, EXIT_VALIDATION, EXIT_BUDGET = 1, 2, 3, 4


class ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ArgumentError(message)


# -- input ---------------------------------------------------------------------


def _read_doc(path: str | None, stdin) -> dict:
    if path in (None, "-"):
        text = stdin.read()
    else:
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as exc:
            raise ArgumentError(f"cannot read {path}: {exc}") from None
    if not text.strip():
        raise ArgumentError("no input: pass a file or pipe JSON on stdin")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise OneShotError(f"input is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise OneShotError("input JSON must be an object")
    return doc


def _load(path, stdin):
    return from_dict(_read_doc(path, stdin))


def _need(obj, kinds, what):
    if not isinstance(obj, kinds):
        raise OneShotError(f"expected {what}, got {type(obj).__name__}")
    return obj


def _as_channel(obj) -> Channel:
    # a joint piped in by mistake is still usable if its rows are stochastic
    if isinstance(obj, JointDistribution):
        obj = Channel(obj.x_labels, obj.y_labels, obj.matrix)
    return _need(obj, Channel, "a channel")


def _as_joint(obj) -> JointDistribution:
    if isinstance(obj, Channel):
        raise OneShotError("expected a joint distribution, got a channel")
    return _need(obj, JointDistribution, "a joint distribution")


# -- commands ------------------------------------------------------------------


def cmd_entropy(a, stdin):
    obj = _load(a.dist, stdin)
    if a.cond:
        j = _as_joint(obj)
        if a.kind == "shannon":
            raise ArgumentError("--kind shannon has no conditional form here")
        if a.eps is None:
            return {"value_bits": (h_min_cond if a.kind == "min" else h_max_cond)(j)}
        rep = (smooth_h_min_cond if a.kind == "min" else smooth_h_max_cond)(j, a.eps)
        return rep.to_dict()
    p = obj.flatten() if isinstance(obj, JointDistribution) else _need(obj, SubProbVector, "a distribution")
    if a.kind == "shannon":
        if a.eps is not None:
            raise ArgumentError("--eps does not apply to --kind shannon")
        return {"value_bits": shannon_entropy(p)}
    if a.eps is None:
        return {"value_bits": (h_min if a.kind == "min" else h_max)(p)}
    rep = (smooth_h_min if a.kind == "min" else smooth_h_max)(p, a.eps)
    return rep.to_dict()


def cmd_common_info(a, stdin):
    cp = gacs_korner(_as_joint(_load(a.dist, stdin)))
    return {
        **cp.to_dict(),
        "n_blocks": len(cp),
        "common_entropy_bits": common_entropy(cp),
        "common_min_entropy_bits": common_min_entropy(cp),
    }


def cmd_cmin(a, stdin):
    j = _as_joint(_load(a.dist, stdin))
    if a.bounds:
        res = c_min_bounds(j, a.eps, a.eps1, a.eps2).to_dict()
    else:
        if a.eps1 is not None or a.eps2 is not None:
            raise ArgumentError("--eps1/--eps2 need --bounds")
        res = c_min_lower(j, a.eps).to_dict()
    if a.oracle:
        res["exact_bits"] = exact_c_min(j, a.eps, _budget(a))
    return res


def cmd_capacity_bounds(a, stdin):
    w = _as_channel(_load(a.channel, stdin))
    return capacity_bounds(w, a.eps, a.eps_prime, a.eps_pp, a.eps1, a.eps2).to_dict()


def cmd_exact_capacity(a, stdin):
    w = _as_channel(_load(a.channel, stdin))
    bits, book, decoder = exact_best_code(w, a.eps, _budget(a))
    return {
        "eps": a.eps,
        "capacity_bits": bits,
        "codebook": [w.x_labels[i] for i in book],
        "decoder": {y: int(m) for y, m in zip(w.y_labels, decoder)},
        "decoders": "deterministic",
        "budget": _budget(a).to_dict(),
    }


def cmd_build_code(a, stdin):
    w = _as_channel(_load(a.channel, stdin))
    if a.input_dist:
        p = _need(_load(a.input_dist, stdin), ProbVector, "an input distribution")
    else:
        p = ProbVector.uniform(w.x_labels)
    code = build_code(w, p, a.eps1, a.eps2, a.eps3, a.eps, a.seed)
    worst, avg = evaluate_code(w, code)
    return {**code.to_dict(), "size": len(code), "max_error": worst, "avg_error": avg, "meta": code.meta}


def cmd_extract(a, stdin):
    j = _as_joint(_load(a.dist, stdin))
    rep = extract(j, a.len, a.seeds, exhaustive=a.exhaustive, eps=a.eps, eps_prime=a.eps_prime)
    return rep.to_dict()


def cmd_compress(a, stdin):
    j = _as_joint(_load(a.dist, stdin))
    rep = compress_with_side_info(j, a.bins, a.seed, exhaustive=a.exhaustive, eps=a.eps, eps_prime=a.eps_prime)
    return rep.to_dict()


def cmd_verify(a, stdin):
    return run_all(tiny=a.tiny)


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.split(",")]


def cmd_gen(a, stdin):
    k, args = a.kind, a.params
    try:
        if k in ("bsc", "bec", "zchannel"):
            return make_channel(ChannelSpec(k, {"p": float(args[0])})).to_dict()
        if k == "identity":
            return make_channel(ChannelSpec(k, {"n": int(args[0])})).to_dict()
        if k == "noisy":
            spec = {"nx": int(args[0]), "ny": int(args[1]) if len(args) > 1 else 2}
            return make_channel(ChannelSpec(k, spec)).to_dict()
        if k == "random":
            spec = {"nx": int(args[0]), "ny": int(args[1]), "seed": int(args[2])}
            return make_channel(ChannelSpec(k, spec)).to_dict()
        if k == "matrix":
            return make_channel(ChannelSpec(k, {"file": args[0]})).to_dict()
        if k == "uniform":
            return ProbVector.uniform(range(int(args[0]))).to_dict()
        if k == "equal":
            return equal(int(args[0])).to_dict()
        if k == "product":
            return product(_floats(args[0]), _floats(args[1])).to_dict()
        if k == "blocks":
            sizes = [tuple(int(v) for v in s.split("x")) for s in args[1].split(",")]
            return blocks(_floats(args[0]), sizes).to_dict()
    except (IndexError, ValueError) as exc:
        if isinstance(exc, OneShotError):
            raise
        raise ArgumentError(f"bad parameters for {k}: {args}") from None
    raise ArgumentError(f"unknown generator {k!r}")


# -- parser --------------------------------------------------------------------


def _budget(a) -> OracleBudget:
    return OracleBudget(
        max_support_atoms=a.max_atoms,
        max_codebook=a.max_codebook,
        max_outputs=a.max_outputs,
        time_limit=a.time_limit,
    )


def _add_budget(p):
    d = OracleBudget()
    p.add_argument("--max-atoms", type=int, default=d.max_support_atoms)
    p.add_argument("--max-codebook", type=int, default=d.max_codebook)
    p.add_argument("--max-outputs", type=int, default=d.max_outputs)
    p.add_argument("--time-limit", type=float, default=d.time_limit)


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="oneshot", description="One-shot information theory on finite alphabets.")
    top.add_argument("--version", action="version", version=__version__)
    top.add_argument("--format", choices=("json", "csv"), default="json")
    top.add_argument("--timing", action="store_true", help="record wall time in the run entry")
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("entropy", help="min-, max- or Shannon entropy, optionally smoothed")
    p.add_argument("--dist", help="JSON file (default: stdin)")
    p.add_argument("--kind", choices=("min", "max", "shannon"), required=True)
    p.add_argument("--eps", type=float)
    p.add_argument("--cond", action="store_true", help="condition X on Y of a joint input")
    p.set_defaults(fn=cmd_entropy)

    p = sub.add_parser("common-info", help="Gacs-Korner common part")
    p.add_argument("--dist")
    p.set_defaults(fn=cmd_common_info)

    p = sub.add_parser("cmin", help="smoothed common min-entropy")
    p.add_argument("--dist")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--bounds", action="store_true", help="also report the upper bound")
    p.add_argument("--eps1", type=float)
    p.add_argument("--eps2", type=float)
    p.add_argument("--oracle", action="store_true", help="also run the exhaustive oracle")
    _add_budget(p)
    p.set_defaults(fn=cmd_cmin)

    p = sub.add_parser("capacity-bounds", help="lower and upper bounds on one-shot capacity")
    p.add_argument("--channel")
    for flag in ("--eps", "--eps-prime", "--eps-pp", "--eps1", "--eps2"):
        p.add_argument(flag, type=float, required=True)
    p.set_defaults(fn=cmd_capacity_bounds)

    p = sub.add_parser("exact-capacity", help="exhaustive one-shot capacity")
    p.add_argument("--channel")
    p.add_argument("--eps", type=float, required=True)
    _add_budget(p)
    p.set_defaults(fn=cmd_exact_capacity)

    p = sub.add_parser("build-code", help="random code with expurgation")
    p.add_argument("--channel")
    p.add_argument("--input-dist", help="input law JSON (default: uniform)")
    p.add_argument("--seed", type=int, required=True)
    for flag in ("--eps1", "--eps2", "--eps3", "--eps"):
        p.add_argument(flag, type=float, required=True)
    p.set_defaults(fn=cmd_build_code)

    p = sub.add_parser("extract", help="hash X to a key independent of Y")
    p.add_argument("--dist")
    p.add_argument("--len", type=int, required=True)
    p.add_argument("--seeds", type=int, default=1, help="number of seeds 0..N-1 to average")
    p.add_argument("--exhaustive", action="store_true", help="average over the whole hash family")
    p.add_argument("--eps", type=float)
    p.add_argument("--eps-prime", type=float)
    p.set_defaults(fn=cmd_extract)

    p = sub.add_parser("compress", help="bin X, decode with side information Y")
    p.add_argument("--dist")
    p.add_argument("--bins", type=int, required=True, help="bin index length in bits")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--eps", type=float)
    p.add_argument("--eps-prime", type=float)
    p.set_defaults(fn=cmd_compress)

    p = sub.add_parser("verify", help="run the property suites")
    p.add_argument("--tiny", action="store_true", help="smaller random suites")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("gen", help="emit a standard channel or distribution")
    p.add_argument(
        "kind",
        choices=("identity", "bsc", "bec", "zchannel", "noisy", "random", "matrix",
                 "uniform", "equal", "product", "blocks"),
    )
    p.add_argument("params", nargs="*")
    p.set_defaults(fn=cmd_gen)
    return top


# -- output --------------------------------------------------------------------


def _scalar_csv(result: dict) -> str:
    flat = {k: v for k, v in result.items() if not isinstance(v, (dict, list))}
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(flat.keys())
    writer.writerow(["" if v is None else v for v in flat.values()])
    return buf.getvalue()


def _render(result: dict, record: dict, fmt: str) -> str:
    result = round_floats(result)
    if fmt == "csv":
        if "matrix" in result or "mass" in result:
            return to_csv(from_dict(result))
        return _scalar_csv(result)
    return json.dumps({**result, "run": round_floats(record)}, sort_keys=True, ensure_ascii=False) + "\n"


def _seeds(args) -> list[int]:
    if args.command == "extract":
        return [] if args.exhaustive else list(range(args.seeds))
    if args.command in ("compress", "build-code") and not getattr(args, "exhaustive", False):
        return [args.seed]
    return []


def run(argv=None, stdin=None) -> tuple[int, str, str]:
    """Execute one command; returns (exit code, stdout text, stderr text)."""
    stdin = sys.stdin if stdin is None else stdin
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except ArgumentError as exc:
        return EXIT_ARGS, "", f"error: {exc}\n"
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0), "", ""
    params = {k: v for k, v in vars(args).items() if k not in ("fn", "command", "format", "timing")}
    start = time.perf_counter()
    try:
        result = args.fn(args, stdin)
    except ArgumentError as exc:
        return EXIT_ARGS, "", f"error: {exc}\n"
    except BudgetExceeded as exc:
        return EXIT_BUDGET, "", f"budget exceeded: {exc}\n"
    except OneShotError as exc:
        return EXIT_VALIDATION, "", f"invalid input: {type(exc).__name__}: {exc}\n"
    record = {
        "command": args.command,
        "argv": argv,
        "params": params,
        "version": __version__,
        "seeds": _seeds(args),
    }
    if args.timing:
        record["wall_time_s"] = time.perf_counter() - start
    code = EXIT_SUITE if args.command == "verify" and not result["passed"] else 0
    return code, _render(result, record, args.format), ""


def main(argv=None) -> int:
    code, out, err = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
