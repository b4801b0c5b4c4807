"""Command-line front end.

Exit codes::

    0   success; for ``classify``: Inconclusive or NonvanishingC
    10  classify: CPlusVanishes
    11  classify: CVanishes
    12  classify: Overtwisted
    1   examples: at least one fixture disagrees with its expectations
    2   unreadable or invalid input (front word, presentation, knot table)
    3   inconsistent data or contradictory rule conclusions
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from importlib.resources import files
from pathlib import Path

from .classify import InternalInconsistency, Level, Report, classify
from .front import FrontSyntaxError, FrontValidityError, OrientationError, build_diagram, parse_front_word
from .invariants import ClassicalData, classical_data
from .knots import KnotTableError, default_knot_table, load_knot_table
from .linalg import determinant, smith_normal_form
from .presentation import PresentationError, load_presentation
from .surgery import SurgeryError

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_INCONSISTENT = 3
LEVEL_EXIT = {
    Level.INCONCLUSIVE: 0,
    Level.NONVANISHING_C: 0,
    Level.C_PLUS_VANISHES: 10,
    Level.C_VANISHES: 11,
    Level.OVERTWISTED: 12,
}


def fixtures_dir() -> Path:
    return Path(str(files("legendrian_surgery") / "fixtures"))


def _table(args):
    if args.knot_table:
        return load_knot_table(args.knot_table)
    return default_knot_table()


def invariants_dict(data: ClassicalData) -> dict:
    names = data.names
    return {
        "tb": {n: str(data.tb[n]) for n in names},
        "rot": {n: str(data.rot[n]) for n in names},
        "lk": {f"{a},{b}": str(data.lk[(a, b)])
               for i, a in enumerate(names) for b in names[i + 1:]},
        "writhe": {n: str(data.writhe[n]) for n in names},
        "cusps": {n: data.cusps[n] for n in names},
    }


def _invariants_text(data: ClassicalData) -> str:
    lines = [f"{'component':<10} {'tb':>6} {'rot':>6} {'writhe':>7} {'cusps':>6}"]
    for n in data.names:
        lines.append(f"{n:<10} {str(data.tb[n]):>6} {str(data.rot[n]):>6} "
                     f"{str(data.writhe[n]):>7} {data.cusps[n]:>6}")
    if len(data.names) > 1:
        lines.append("linking numbers:")
        header = " " * 10 + "".join(f"{n:>6}" for n in data.names)
        lines.append(header)
        for a in data.names:
            row = "".join(f"{'.' if a == b else str(data.lk[(a, b)]):>6}" for b in data.names)
            lines.append(f"{a:<10}{row}")
    return "\n".join(lines) + "\n"


def cmd_invariants(args) -> int:
    text = Path(args.front).read_text(encoding="utf-8")
    data = classical_data(build_diagram(parse_front_word(text)))
    if args.format == "json":
        print(json.dumps(invariants_dict(data), indent=2, sort_keys=True))
    else:
        sys.stdout.write(_invariants_text(data))
    return EXIT_OK


def cmd_classify(args) -> int:
    pf = load_presentation(args.presentation)
    report = classify(pf.presentation, _table(args), disabled=args.disable or ())
    if args.format == "json":
        print(report.to_json())
    else:
        sys.stdout.write(report.to_text())
    return LEVEL_EXIT[report.verdict.level]


def _compare(expected: dict, report: Report, data: ClassicalData) -> list[str]:
    diffs = []
    if report.verdict.level.value != expected["level"]:
        diffs.append(f"level: expected {expected['level']}, got {report.verdict.level.value}")
    if report.verdict.rule != expected.get("rule"):
        diffs.append(f"rule: expected {expected.get('rule')}, got {report.verdict.rule}")
    inv = invariants_dict(data)
    for kind, values in expected.get("invariants", {}).items():
        for key, want in values.items():
            got = inv[kind].get(key)
            if got is None or Fraction(got) != Fraction(want):
                diffs.append(f"{kind}[{key}]: expected {want}, got {got}")
    for section, source in (("hypotheses", report.verdict.hypotheses), ("derived", report.derived)):
        for key, want in expected.get(section, {}).items():
            got = source.get(key)
            if got is None or isinstance(got, bool) or Fraction(got) != Fraction(want):
                diffs.append(f"{section}.{key}: expected {want}, got {got}")
    return diffs


def cmd_examples(args) -> int:
    root = fixtures_dir()
    exp_path = Path(args.expectations) if args.expectations else root / "expected.json"
    expected = json.loads(exp_path.read_text(encoding="utf-8"))
    names = sorted(expected)
    if args.fixture:
        if args.fixture not in expected:
            print(f"unknown fixture {args.fixture!r}; known: {', '.join(names)}", file=sys.stderr)
            return EXIT_INPUT
        names = [args.fixture]
    table = _table(args)
    rows = []
    failed = False
    for name in names:
        pf = load_presentation(root / f"{name}.pres")
        report = classify(pf.presentation, table)
        diffs = _compare(expected[name], report, pf.presentation.data)
        failed |= bool(diffs)
        rows.append({"fixture": name, "level": report.verdict.level.value,
                     "rule": report.verdict.rule, "status": "FAIL" if diffs else "PASS",
                     "diffs": diffs})
    if args.format == "json":
        print(json.dumps(rows, indent=2))
    else:
        print(f"{'fixture':<8} {'verdict':<14} {'rule':<13} status")
        for r in rows:
            print(f"{r['fixture']:<8} {r['level']:<14} {r['rule'] or '-':<13} {r['status']}")
            for d in r["diffs"]:
                print(f"    {d}")
    return EXIT_MISMATCH if failed else EXIT_OK


def parse_matrix(text: str) -> list[list[int]]:
    """Rows separated by ';' or newlines, entries by whitespace or commas."""
    rows = []
    for chunk in text.replace("\n", ";").split(";"):
        chunk = chunk.split("#", 1)[0].replace(",", " ").strip()
        if chunk:
            rows.append([int(v) for v in chunk.split()])
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("ragged matrix")
    return rows


def cmd_snf(args) -> int:
    src = args.matrix
    if os.path.isfile(src):
        src = Path(src).read_text(encoding="utf-8")
    m = parse_matrix(src)
    snf = smith_normal_form(m)
    out = {"divisors": snf.divisors, "left": snf.left, "right": snf.right}
    if m and len(m) == len(m[0]):
        out["det"] = str(determinant(m))
    if args.format == "json":
        print(json.dumps(out))
    else:
        print("divisors: " + " ".join(str(d) for d in snf.divisors))
        if "det" in out:
            print(f"det: {out['det']}")
        torsion = [d for d in snf.divisors if d not in (0, 1)]
        free = len(m) - sum(1 for d in snf.divisors if d)
        print("cokernel: " + " + ".join([f"Z/{d}" for d in torsion] + ["Z"] * free or ["0"]))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="legsurg",
        description="Legendrian front invariants and contact surgery classification.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--knot-table", metavar="PATH",
                        help="knot table file (default: bundled table or $LEGSURG_KNOT_TABLE)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", parents=[common], help="tb, rot and linking numbers of a front")
    p.add_argument("front")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("classify", parents=[common], help="classify a surgery presentation")
    p.add_argument("presentation")
    p.add_argument("--disable", action="append", metavar="RULE", help="skip a rule (repeatable)")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("examples", parents=[common], help="replay the bundled fixtures")
    p.add_argument("--fixture", metavar="NAME")
    p.add_argument("--expectations", metavar="PATH", help="alternative expectations file")
    p.set_defaults(func=cmd_examples)

    p = sub.add_parser("snf", parents=[common], help="Smith normal form of an integer matrix")
    p.add_argument("matrix", help="'a b; c d' or a file with one row per line")
    p.set_defaults(func=cmd_snf)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FrontSyntaxError, FrontValidityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InternalInconsistency as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        for r in exc.results:
            hyps = ", ".join(f"{k}={v}" for k, v in r.hypotheses.items())
            print(f"  {r.rule} -> {r.level.value}: {hyps}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except SurgeryError as exc:
        print(f"inconsistent data: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except (PresentationError, KnotTableError, OrientationError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
