"""Command line: ``hardylab constants|verify|minimize|symmetrize``.

Exit status is 0 when every emitted report passes, 1 when any fails and 2
for usage, parse or I/O errors.  Output is JSON Lines (or CSV with a header),
ordered by case id, and byte-identical for identical arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import constants, varmin, verify
from .errors import HardylabError
from .radial import Domain, unit_ball_volume
from .report import VerificationReport, to_csv, to_jsonl
from .symmetrize import FieldSample, quotient_decrease_check, symmetrize

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

SEARCH_IDS = ("thm1", "thm1_weighted", "thm2", "thm4", "thm5", "brezis_vazquez")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p: argparse.ArgumentParser, volume=True, output_help="write the report stream here instead of stdout"):
    p.add_argument("--dim", type=int, default=3)
    if volume:
        p.add_argument("--volume", type=float, default=None, help="|Omega|; defaults to the unit-ball volume")
    p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    p.add_argument("--output", default=None, help=output_help)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hardylab", description="Sharp constants for Hardy inequalities with remainder terms.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("constants", help="print every applicable closed-form constant")
    _common(p)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--q", type=float, default=1.0)

    p = sub.add_parser("verify", help="run verification cases")
    _common(p)
    p.add_argument("--case", nargs="+", default=["all"], choices=("all",) + verify.CASES, metavar="CASE")
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--grid", type=int, default=8192)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("minimize", help="direct minimisation of one reduced quotient")
    _common(p)
    p.add_argument("--case", required=True, choices=SEARCH_IDS)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--grid", type=int, default=8192)
    p.add_argument("--tol", type=float, default=verify.SEARCH_TOL)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("symmetrize", help="run the symmetrization pipeline on a field sample")
    _common(p, volume=False, output_help="write the full symmetrization result JSON here")
    p.add_argument("--input", required=True)
    p.add_argument("--q", type=float, default=1.0)
    return parser


def _threads() -> int:
    raw = os.environ.get("HARDYLAB_THREADS")
    cpus = os.cpu_count() or 1
    if raw is None or raw == "":
        return cpus
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"HARDYLAB_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError(f"HARDYLAB_THREADS must be a positive integer, got {raw!r}")
    return min(n, cpus)


def _domain(args) -> Domain:
    volume = getattr(args, "volume", None)
    if volume is None:
        volume = unit_ball_volume(args.dim) if args.dim >= 3 else 1.0
    return Domain(args.dim, volume)


def _emit(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from None


def _render(reports, fmt) -> str:
    return to_csv(reports) if fmt == "csv" else to_jsonl(reports)


def cmd_constants(args) -> int:
    records = constants.all_constants(_domain(args), args.p, args.q)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id", "params", "value", "formula_text"])
        for rec in records:
            w.writerow([rec.id, json.dumps(rec.params, sort_keys=True), rec.value, rec.formula_text])
        text = buf.getvalue()
    else:
        text = "".join(json.dumps(rec.as_dict(), sort_keys=True) + "\n" for rec in records)
    _emit(text, args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    cases = list(verify.CASES) if "all" in args.case else sorted(set(args.case))
    dom = _domain(args)
    if args.grid < 16:
        raise UsageError("--grid must be at least 16")

    def run(case):
        return verify.run_case(case, dom, args.grid, args.tol, args.seed, args.p)

    with ThreadPoolExecutor(max_workers=min(_threads(), len(cases))) as pool:
        batches = list(pool.map(run, cases))
    reports = sorted((r for b in batches for r in b), key=lambda r: r.case_id)
    _emit(_render(reports, args.format), args.output)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_minimize(args) -> int:
    dom = _domain(args)
    res = varmin.best_constant_search(args.case, dom, args.grid, args.p, seed=args.seed)
    params = {"N": dom.dim, "volume": dom.volume, "grid": args.grid, "seed": args.seed,
              "converged": res.converged, "starts": len(res.start_values)}
    if args.p is not None:
        params["p"] = args.p
    rep = VerificationReport.compare(f"minimize/{args.case}", params, res.value, res.closed_form, args.tol)
    if not res.converged:
        rep.notes = "descent did not converge from every start"
    _emit(_render([rep], args.format), args.output)
    return EXIT_OK if rep.passed else EXIT_FAIL


def _load_field(path: str) -> FieldSample:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        return FieldSample.from_dict(data)
    except (HardylabError, TypeError) as exc:
        raise UsageError(f"{path}: invalid field sample: {exc}") from None


def cmd_symmetrize(args) -> int:
    field = _load_field(args.input)
    dom = Domain(args.dim, field.total_measure)
    rep = quotient_decrease_check(field, dom, args.q)
    if args.output is not None:
        res = symmetrize(field, dom, strict=False)
        _emit(json.dumps(res.as_dict(), sort_keys=True) + "\n", args.output)
    _emit(_render([rep], args.format), None)
    return EXIT_OK if rep.passed else EXIT_FAIL


COMMANDS = {
    "constants": cmd_constants,
    "verify": cmd_verify,
    "minimize": cmd_minimize,
    "symmetrize": cmd_symmetrize,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"hardylab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HardylabError as exc:
        print(f"hardylab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
