"""Command-line interface: generate, validate, extract, oracle, shatter, bench.

Exit codes: 0 success, 1 domain failure (invalid drawing, violated bound,
failed verification), 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import drawfile
from .drawing import DrawingError, label_ccw, require_valid, select_apex, validate
from .extract import extract_pipeline
from .gen import FAMILIES, GenSpec, RetryBudgetExceeded, generate
from .matching import MatchingConfig
from .oracle import TooLarge, max_disjoint_edges_exact
from .setsys import build_crossing_sets, build_interior_sets, build_intervals, probe_shatter

OK, DOMAIN_FAILURE, USAGE = 0, 1, 2
STAGES = ("validate", "label", "set_systems", "matching", "independent_set", "verify")


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _json(doc) -> str:
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _load(path: str):
    try:
        if path == "-":
            return drawfile.loads(sys.stdin.read())
        return drawfile.read(path)
    except OSError as exc:
        raise UsageError(str(exc)) from exc
    except drawfile.DrawFileError as exc:
        raise UsageError(f"cannot parse {path}: {exc}") from exc


def _multiplier(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact number: {text!r}")


def _config(args) -> MatchingConfig:
    try:
        return MatchingConfig(weight_multiplier=args.multiplier)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_generate(args) -> int:
    try:
        spec = GenSpec(args.family, args.n, args.seed, bends=args.bends)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    try:
        d = generate(spec)
    except RetryBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DOMAIN_FAILURE
    _emit(drawfile.dumps(d), args.out)
    return OK


def cmd_validate(args) -> int:
    d = _load(args.input)
    report = validate(d)
    _emit(_json(report.to_dict(d)), args.out)
    return OK if report.ok else DOMAIN_FAILURE


def cmd_extract(args) -> int:
    d = _load(args.input)
    cfg = _config(args)
    try:
        report = extract_pipeline(d, cfg)
    except DrawingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DOMAIN_FAILURE
    _emit(_json(report.to_dict(d, timings=args.timings)), args.out)
    return OK if report.verified_disjoint else DOMAIN_FAILURE


def cmd_oracle(args) -> int:
    d = _load(args.input)
    try:
        size, witness = max_disjoint_edges_exact(d, args.limit)
    except TooLarge as exc:
        raise UsageError(str(exc)) from exc
    except DrawingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DOMAIN_FAILURE
    _emit(_json({"size": size, "witness": [[d.ids[a], d.ids[b]] for a, b in witness]}), args.out)
    return OK


def shatter_rows(d, ms, trials: int, seed: int):
    """``(family, m, observed_max, bound)`` for each family and ``m``."""
    lab = label_ccw(d, select_apex(d))
    s1 = build_interior_sets(d, lab)
    s2 = build_crossing_sets(d, lab)
    families = [("interior", s1), ("crossing", s2), ("mixed", s1 | s2), ("interval", build_intervals(lab.n))]
    rows = []
    for k, (name, sys_) in enumerate(families):
        for m in ms:
            if m > len(sys_):
                raise UsageError(f"m={m} exceeds the {len(sys_)} rows of the {name} family")
            probe = probe_shatter(sys_, m, trials, [seed, k, m])
            rows.append((name, m, probe.observed_classes, probe.bound))
    return rows


def cmd_shatter(args) -> int:
    d = _load(args.input)
    try:
        require_valid(d)
        rows = shatter_rows(d, args.m, args.trials, args.seed)
    except DrawingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DOMAIN_FAILURE
    _emit(_csv(("family", "m", "observed_max", "bound"), rows), args.out)
    return OK if all(obs <= bound for _, _, obs, bound in rows) else DOMAIN_FAILURE


def bench_row(family: str, N: int, seed: int, cfg: MatchingConfig, timings: bool = False):
    d = generate(GenSpec(family, N, seed))
    r = extract_pipeline(d, cfg)
    row = [family, N, r.n, seed, len(r.chosen), r.turan_bound, r.max_stab,
           f"{r.stab_ratio:.6f}", f"{len(r.chosen) / r.n ** (1 / 3):.6f}", int(r.verified_disjoint)]
    if timings:
        row += [f"{r.timings[s]:.6f}" for s in STAGES]
    return row


def cmd_bench(args) -> int:
    cfg = _config(args)
    header = ["family", "N", "n", "seed", "chosen", "turan_bound", "max_stab",
              "stab_ratio", "chosen_ratio", "verified"]
    if args.timings:
        header += [f"t_{s}" for s in STAGES]
    rows = []
    for family in args.family:
        seeds = [0] if family == "convex" else args.seed
        for N in args.n:
            for seed in seeds:
                try:
                    rows.append(bench_row(family, N, seed, cfg, args.timings))
                except ValueError as exc:
                    raise UsageError(str(exc)) from exc
    rows.sort(key=lambda r: (FAMILIES.index(r[0]), r[1], r[3]))
    _emit(_csv(header, rows), args.out)
    return OK if all(r[9] for r in rows) else DOMAIN_FAILURE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="disjointedges", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def with_out(sp):
        sp.add_argument("--out", help="output path (default: stdout)")
        return sp

    g = with_out(sub.add_parser("generate", help="write a seeded drawing as JSON"))
    g.add_argument("--family", choices=FAMILIES, required=True)
    g.add_argument("--n", type=int, required=True, help="number of vertices")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--bends", type=int, default=2, help="joints per arc (polyline family)")
    g.set_defaults(func=cmd_generate)

    v = with_out(sub.add_parser("validate", help="check a drawing; JSON diagnostics"))
    v.add_argument("input", help="drawing file, or - for stdin")
    v.set_defaults(func=cmd_validate)

    e = with_out(sub.add_parser("extract", help="find pairwise disjoint edges"))
    e.add_argument("input")
    e.add_argument("--multiplier", type=_multiplier, default=Fraction(2), help="weight multiplier, e.g. 2 or 3/2")
    e.add_argument("--timings", action="store_true", help="include stage wall times (not byte-stable)")
    e.set_defaults(func=cmd_extract)

    o = with_out(sub.add_parser("oracle", help="exact maximum for small drawings"))
    o.add_argument("input")
    o.add_argument("--limit", type=int, default=12, help="largest N accepted")
    o.set_defaults(func=cmd_oracle)

    s = with_out(sub.add_parser("shatter", help="probe class counts of random subfamilies"))
    s.add_argument("input")
    s.add_argument("--m", type=int, nargs="+", default=[1, 2, 4, 8, 16])
    s.add_argument("--trials", type=int, default=200)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_shatter)

    b = with_out(sub.add_parser("bench", help="run the pipeline over generated instances"))
    b.add_argument("--family", choices=FAMILIES, nargs="+", default=list(FAMILIES))
    b.add_argument("--n", type=int, nargs="+", default=[9, 21, 51])
    b.add_argument("--seed", type=int, nargs="+", default=[0, 1, 2])
    b.add_argument("--multiplier", type=_multiplier, default=Fraction(2))
    b.add_argument("--timings", action="store_true")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
