"""Command-line interface: ``zecap <command> [options] FILE...``.

Reports are JSON (stdout, or ``-o``); a short human-readable table goes to
stderr.  Exit codes: 0 success, 1 analysis or validation failure, 2 usage
error.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Optional

from . import __version__
from .additivity import ANY, SizeError, audit_certificate, check_additivity, numeric_multiplicativity_probe
from .channels import ChannelError, KrausChannel, graph_of_channel
from .graphs import BlockGraph, GraphError, NoncommutativeGraph, decompose_block
from .independence import alpha_exact, block_alpha
from .io import ParseError, ValidationError, as_graph, parse_input, to_doc
from .linalg import DimensionError, OperatorSubspace, Tolerances
from .rankone import DEFAULT_SEED, SearchOptions, find_rank_one
from .scenarios import run_scenarios


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    tol: Tolerances = field(default_factory=Tolerances)
    seed: int = DEFAULT_SEED
    restarts: int = 64
    max_iter: int = 500
    max_tensor_dim: int = 16
    output: Optional[str] = None
    any_partner: bool = False
    dim_a: Optional[int] = None
    scenario: Optional[str] = None

    def __post_init__(self):
        if self.seed < 0 or self.restarts < 1 or self.max_iter < 1 or self.max_tensor_dim < 1:
            raise UsageError("seed must be non-negative; restarts, max-iter and max-tensor-dim positive")

    @property
    def opts(self) -> SearchOptions:
        return SearchOptions(self.restarts, self.max_iter, self.seed, self.tol)


def _positive_float(text: str) -> float:
    try:
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not val > 0:
        raise argparse.ArgumentTypeError("must be strictly positive")
    return val


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-orth", type=_positive_float, default=Tolerances.tol_orth)
    common.add_argument("--tol-rank", type=_positive_float, default=Tolerances.tol_rank)
    common.add_argument("--tol-converge", type=_positive_float, default=Tolerances.tol_converge)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--restarts", type=int, default=64)
    common.add_argument("--max-iter", type=int, default=500)
    common.add_argument("--max-tensor-dim", type=int, default=16)
    common.add_argument("-o", "--output", help="write the JSON report here instead of stdout")

    p = argparse.ArgumentParser(prog="zecap", description="Zero-error capacity analysis of quantum channels.")
    p.add_argument("--version", action="version", version=f"zecap {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("build-graph", parents=[common], help="channel file -> graph file")
    s.add_argument("inputs", nargs=1, metavar="CHANNEL")
    s = sub.add_parser("alpha", parents=[common], help="independence number of a graph")
    s.add_argument("inputs", nargs=1, metavar="GRAPH")
    s = sub.add_parser("rank-one", parents=[common], help="rank-one detection in an operator subspace")
    s.add_argument("inputs", nargs=1, metavar="SUBSPACE")
    s = sub.add_parser("block-alpha", parents=[common], help="independence number of a block graph")
    s.add_argument("inputs", nargs=1, metavar="BLOCK")
    s.add_argument("--dim-a", type=int, help="split a plain graph file at this block size")
    s = sub.add_parser("additivity", parents=[common], help="additivity certificate for S and T (or any partner)")
    s.add_argument("inputs", nargs="+", metavar="GRAPH")
    s.add_argument("--any", dest="any_partner", action="store_true", help="certify against every partner")
    s = sub.add_parser("probe", parents=[common], help="numerical multiplicativity probe for S (x) T")
    s.add_argument("inputs", nargs=2, metavar="GRAPH")
    s = sub.add_parser("demo", parents=[common], help="run the regression scenarios")
    s.add_argument("scenario", choices=["paper"])
    return p


def config_from_args(argv=None) -> RunConfig:
    args = build_parser().parse_args(argv)
    try:
        tol = Tolerances(args.tol_orth, args.tol_rank, args.tol_converge)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.command == "additivity" and len(args.inputs) != (1 if args.any_partner else 2):
        raise UsageError("additivity takes S T, or S --any")
    return RunConfig(args.command, list(getattr(args, "inputs", [])), tol, args.seed, args.restarts,
                     args.max_iter, args.max_tensor_dim, args.output, getattr(args, "any_partner", False),
                     getattr(args, "dim_a", None), getattr(args, "scenario", None))


def _graph(path: str, tol: Tolerances) -> NoncommutativeGraph:
    return as_graph(parse_input(path, tol), tol)


def _table(rows) -> str:
    rows = [(str(a), str(b)) for a, b in rows]
    width = max((len(a) for a, _ in rows), default=0)
    return "\n".join(f"  {a:<{width}}  {b}" for a, b in rows)


def _run_command(cfg: RunConfig) -> tuple[dict, list, bool]:
    """Returns (result payload, table rows, ok)."""
    opts, tol = cfg.opts, cfg.tol
    if cfg.command == "build-graph":
        ch = parse_input(cfg.inputs[0], tol)
        if not isinstance(ch, KrausChannel):
            raise ValidationError("build-graph expects a channel document")
        S = graph_of_channel(ch, tol)
        # graph fields sit at top level so the report is itself a graph file
        return to_doc(S), [("dim", S.dim), ("subspace dim", S.sdim)], True

    if cfg.command == "alpha":
        S = _graph(cfg.inputs[0], tol)
        a = alpha_exact(S, opts)
        return {"alpha": a.to_dict()}, [("lower", a.lower), ("upper", a.upper), ("exact", a.exact),
                                        ("method", ", ".join(a.method))], True

    if cfg.command == "rank-one":
        U = parse_input(cfg.inputs[0], tol)
        if not isinstance(U, OperatorSubspace):
            raise ValidationError("rank-one expects a subspace document {rows, cols, basis}")
        v = find_rank_one(U, opts)
        return {"rank_one": v.to_dict()}, [("status", v.status.value), ("rule", v.proof_rule),
                                           ("residual", v.residual)], True

    if cfg.command == "block-alpha":
        obj = parse_input(cfg.inputs[0], tol)
        if not isinstance(obj, BlockGraph):
            if cfg.dim_a is None:
                raise ValidationError("block-alpha expects a block document, or a graph with --dim-a")
            obj = decompose_block(as_graph(obj, tol), cfg.dim_a, tol)
        a = block_alpha(obj, opts)
        return {"block": {"dimA": obj.dimA, "dimB": obj.dimB, "dim_S": obj.S.sdim, "dim_T": obj.T.sdim,
                          "dim_U": obj.U.dim}, "alpha": a.to_dict()}, \
            [("dims", f"{obj.dimA}+{obj.dimB}"), ("exact", a.exact), ("method", ", ".join(a.method))], True

    if cfg.command == "additivity":
        S = _graph(cfg.inputs[0], tol)
        T = ANY if cfg.any_partner else _graph(cfg.inputs[1], tol)
        cert = check_additivity(S, T, opts)
        failures = audit_certificate(cert, S, None if T is ANY else T, opts)
        out = {"certificate": cert.to_dict(), "audit_failures": failures}
        rows = [("verdict", cert.verdict.value), ("rule", cert.rule.value if cert.rule else "-"),
                ("scope", cert.scope), ("audit", "ok" if not failures else "; ".join(failures))]
        return out, rows, not failures

    if cfg.command == "probe":
        S, T = (_graph(p, tol) for p in cfg.inputs)
        rep = numeric_multiplicativity_probe(S, T, opts, cfg.max_tensor_dim)
        rows = [("product_lower", rep.product_lower), ("tensor_lower", rep.tensor_lower),
                ("tensor_upper", rep.tensor_upper), ("consistent", rep.consistent)]
        return {"probe": rep.to_dict()}, rows, rep.consistent

    if cfg.command == "demo":
        results = run_scenarios(opts)
        rows = [(r.key, "PASS" if r.passed else "FAIL") for r in results]
        ok = all(r.passed for r in results)
        return {"scenarios": [r.to_dict() for r in results], "all_passed": ok}, rows, ok

    raise UsageError(f"unknown command {cfg.command!r}")


def run(cfg: RunConfig) -> tuple[int, dict]:
    """Execute one command; returns (exit code, report)."""
    report = {"tool": "zecap", "version": __version__, "command": cfg.command, "inputs": cfg.inputs,
              "seed": cfg.seed, "restarts": cfg.restarts, "max_iter": cfg.max_iter,
              "tolerances": cfg.tol.as_dict()}
    try:
        payload, rows, ok = _run_command(cfg)
    except (ParseError, ValidationError, ChannelError, GraphError, DimensionError, SizeError) as exc:
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        print(f"zecap {cfg.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1, report
    report.update(payload)
    report["ok"] = ok
    print(f"zecap {cfg.command}", file=sys.stderr)
    print(_table(rows), file=sys.stderr)
    return (0 if ok else 1), report


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
    except UsageError as exc:
        print(f"zecap: usage error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # argparse already printed its message
        return int(exc.code or 0)
    code, report = run(cfg)
    text = json.dumps(report, indent=1, sort_keys=False) + "\n"
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
