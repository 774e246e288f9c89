"""Command-line entry point: ``semgus solve FILE [options]``."""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass

from .core.grammar import term_to_listing
from .encode.chc import Representation, emit_smtlib
from .encode.encoder import build_query
from .encode.transforms import make_abstract, make_bounded, vectorize
from .frontend import load_problem, surface
from .frontend.problem import Problem, ProblemError
from .interp.engine import DEFAULT_FUEL
from .solve import (
    DEFAULT_MAX_ITER,
    DEFAULT_STRATEGIES,
    DEFAULT_TIME_LIMIT,
    AllUnknown,
    SolveResult,
    SolverConfig,
    cegis,
    chc_solve,
    enumerate_solve,
    portfolio_solve,
)

EXIT = {"realizable": 0, "unrealizable": 1, "unknown": 2}
USAGE_ERROR = 3
SCHEMA = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Malformed flags exit with the usage status rather than argparse's 2 (which means unknown)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class CliOptions:
    input_path: str
    mode: str = "chc"
    rep: str = "array"
    sem: str = "standard"
    bit: int = 1
    while_mode: str = "join"
    bound: int = 2
    fuse: bool = False
    emit_only: str | None = None
    solver: SolverConfig = SolverConfig()
    max_size: int = 8
    fuel: int = DEFAULT_FUEL
    max_iter: int = DEFAULT_MAX_ITER
    backend: str = "chc"
    output_format: str = "text"

    def check(self) -> None:
        if self.fuse and self.rep == "tree":
            raise UsageError("--fuse needs --rep list or array")
        if self.mode in ("enum", "cegis", "portfolio") and self.sem != "standard":
            raise UsageError(f"--sem {self.sem} applies to --mode chc only")


def exit_status(r: SolveResult) -> int:
    return EXIT[r.kind]


def _semantics(p: Problem, o: CliOptions) -> Problem:
    if o.sem == "vectorized":
        return vectorize(p)
    if o.sem == "abstract":
        return make_abstract(p, o.bit, o.while_mode)
    if o.sem == "bounded":
        return make_bounded(p, o.bound)
    return p


def _solve(p: Problem, o: CliOptions) -> SolveResult:
    if o.mode == "enum":
        return enumerate_solve(p, o.max_size, o.fuel)
    if o.mode == "cegis":
        return cegis(p, o.backend, o.max_iter, o.solver, o.rep, o.max_size, o.fuel)
    if o.mode == "portfolio":
        try:
            return portfolio_solve(p, o.solver, DEFAULT_STRATEGIES, o.max_size, o.fuel)
        except AllUnknown as e:
            return SolveResult.unknown("allUnknown", str(e), strategy="portfolio")
    q = _semantics(p, o)
    return chc_solve(q, o.rep, fused=o.fuse, cfg=o.solver, fuel=o.fuel)


def report(p: Problem, r: SolveResult, seconds: float, fmt: str) -> str:
    g = p.grammar
    if fmt == "json":
        doc = {
            "schema": SCHEMA,
            "problem": p.name,
            "status": r.kind,
            "strategy": r.strategy,
            "seconds": round(seconds, 3),
        }
        if r.term is not None:
            doc["term"] = surface(g, r.term)
            doc["listing"] = list(term_to_listing(g, r.term))
            doc["source"] = r.source
        if r.reason:
            doc["reason"] = r.reason
            doc["detail"] = r.detail
        if r.examples:
            doc["examples"] = [list(e) for e in r.examples]
        doc["diagnostics"] = r.stats
        return json.dumps(doc, sort_keys=True)
    lines = [r.kind]
    if r.term is not None:
        lines.append(f"term: {surface(g, r.term)}")
        lines.append("listing: " + " ".join(map(str, term_to_listing(g, r.term))))
    if r.reason:
        lines.append(f"reason: {r.reason}" + (f" ({r.detail})" if r.detail else ""))
    if r.examples:
        lines.append(f"examples used: {len(r.examples)}")
    lines.append(f"strategy: {r.strategy or '-'}  time: {seconds:.2f}s")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="semgus", description="Semantics-guided synthesis and unrealizability.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    s = sub.add_parser("solve", help="solve a problem file")
    s.add_argument("file")
    s.add_argument("--mode", choices=["chc", "enum", "cegis", "portfolio"], default="chc")
    s.add_argument("--rep", choices=[r.value for r in Representation], default="array")
    s.add_argument("--sem", choices=["standard", "vectorized", "abstract", "bounded"], default="standard")
    s.add_argument("--bit", type=int, default=1, help="bit tracked by the abstract semantics (1-based)")
    s.add_argument("--while-mode", choices=["havoc", "join"], default="join")
    s.add_argument("--bound", type=int, default=2, help="loop bound for --sem bounded")
    s.add_argument("--fuse", action="store_true", help="fused syntax and semantics relations")
    s.add_argument("--emit-only", metavar="PATH", help="write the HORN script and stop")
    s.add_argument("--max-size", type=int, default=8)
    s.add_argument("--fuel", type=int, default=DEFAULT_FUEL)
    s.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER, help="CEGIS rounds")
    s.add_argument("--backend", choices=["chc", "enum"], default="chc", help="example solver inside CEGIS")
    s.add_argument("--format", choices=["text", "json"], default="text")
    s.add_argument("--timeout", type=float, default=DEFAULT_TIME_LIMIT, help="seconds per solver query")
    s.add_argument("--solver", default="z3", help="Horn solver executable (SEMGUS_SOLVER overrides)")
    s.add_argument("--extraction-safe", action="store_true", help="disable solver transforms that hide derivations")
    return ap


def options_from(args: argparse.Namespace) -> CliOptions:
    try:
        cfg = SolverConfig(args.solver, args.timeout, extraction_safe=args.extraction_safe)
    except ValueError as e:
        raise UsageError(str(e)) from None
    return CliOptions(args.file, args.mode, args.rep, args.sem, args.bit, args.while_mode, args.bound, args.fuse,
                      args.emit_only, cfg, args.max_size, args.fuel, args.max_iter, args.backend, args.format)


def run(o: CliOptions, out=None) -> int:
    out = out or sys.stdout
    o.check()
    p = load_problem(o.input_path)
    if o.emit_only:
        q = _semantics(p, o)
        script = emit_smtlib(build_query(q, Representation(o.rep), o.fuse))
        with open(o.emit_only, "w") as fh:
            fh.write(script)
        print(f"wrote {o.emit_only}", file=out)
        return 0
    start = time.monotonic()
    r = _solve(p, o)
    print(report(p, r, time.monotonic() - start, o.output_format), file=out)
    return exit_status(r)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(options_from(args))
    except (UsageError, ProblemError, OSError, ValueError) as e:
        where = ""
        if getattr(e, "line", None):
            where = f" (line {e.line}, column {e.col})"
        print(f"semgus: error: {e}{where}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
