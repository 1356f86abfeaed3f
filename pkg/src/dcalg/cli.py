"""``dcalg``: coefficient tables, hypothesis reports, closed-form checks and certificates.

Exit codes: 0 on success or pass, 1 when a verification fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from fractions import Fraction
from typing import Any, Sequence

from .class_sums import StructureError, product_decomposition
from .families import DEFAULT_MAX_ELEMENTS, Family, Kind, LabelError, MembershipError, make_family
from .formula import UnsupportedFamily, theorem_coefficient
from .hypotheses import HYPOTHESES, check_hypothesis
from .matrices import SizeGuardError
from .partitions import SizeError
from .polynomiality import NORMALIZATIONS, InsufficientPoints, verify_polynomiality

__all__ = ["main", "run", "build_parser"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """A flag combination the grammar does not allow."""


def _rational(c: Fraction | int) -> dict[str, str]:
    c = Fraction(c)
    return {"num": str(c.numerator), "den": str(c.denominator)}


def _slash(c: Fraction | int) -> str:
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


def parse_range(text: str) -> range:
    """``"a..b"`` (inclusive) or a single integer."""
    head, sep, tail = text.partition("..")
    try:
        lo = int(head)
        hi = int(tail) if sep else lo
    except ValueError as exc:
        raise UsageError(f"expected 'a..b' or an integer, got {text!r}") from exc
    if hi < lo:
        raise UsageError(f"empty range {text!r}")
    return range(lo, hi + 1)


# ---------------------------------------------------------------------------
# verbs


def _family(args: argparse.Namespace, n: int | None = None) -> Family:
    kind = Kind(args.family)
    if kind is Kind.GL and args.q is None:
        raise UsageError("--family gl needs --q")
    return make_family(kind, args.n if n is None else n, q=args.q, max_elements=args.max_elements)


def _need(args: argparse.Namespace, *names: str) -> None:
    missing = [f"--{x.replace('_', '-')}" for x in names if getattr(args, x, None) is None]
    if missing:
        raise UsageError(f"{args.verb} needs {', '.join(missing)}")


def _header(fam: Family) -> dict[str, Any]:
    out: dict[str, Any] = {"family": fam.kind.value, "n": fam.n}
    if fam.q is not None:
        out["q"] = fam.q
    return out


def cmd_compute(args: argparse.Namespace) -> tuple[int, Any, list[list[str]]]:
    _need(args, "n", "left", "right")
    fam = _family(args)
    left, right = fam.parse_label(args.left), fam.parse_label(args.right)
    targets = [fam.parse_label(t) for t in args.target] if args.target else None
    coeffs = product_decomposition(fam, left, right, targets, threads=args.threads)
    if targets is None:
        coeffs = {lab: v for lab, v in coeffs.items() if v}
    rows = sorted(coeffs.items())
    doc = _header(fam)
    doc.update(left=str(left), right=str(right),
               coefficients=[{"label": str(lab), **_rational(v)} for lab, v in rows])
    if args.breakdown:
        doc["breakdown"] = [theorem_coefficient(fam, left, right, lab).to_json() for lab, _ in rows]
    table = [["label", "coefficient"]] + [[str(lab), _slash(v)] for lab, v in rows]
    return EXIT_OK, doc, table


def cmd_verify_hypotheses(args: argparse.Namespace) -> tuple[int, Any, list[list[str]]]:
    _need(args, "n_max")
    kind = Kind(args.family)
    if kind is Kind.GL and args.q is None:
        raise UsageError("--family gl needs --q")
    which = list(HYPOTHESES) if args.hypothesis.lower() == "all" else [args.hypothesis.upper()]
    if args.hypothesis.lower() == "all" and kind not in (Kind.CENTER_SYM, Kind.CENTER_HYP, Kind.GL):
        which.remove("H'0")
    unknown = [w for w in which if w not in HYPOTHESES]
    if unknown:
        raise UsageError(f"unknown hypothesis {unknown[0]!r}; expected all or one of {', '.join(HYPOTHESES)}")
    n_range = range(args.n_min, args.n_max + 1)
    reports = [check_hypothesis(kind, w, n_range, args.k_max, args.q, args.max_elements) for w in which]
    doc = {"family": kind.value, "n_range": [n_range.start, n_range.stop - 1], "k_max": args.k_max,
           "reports": [r.to_json() for r in reports]}
    if args.q is not None:
        doc["q"] = args.q
    table = [["hypothesis", "instance", "verdict", "witness"]] + [
        [r.hypothesis, r.instance, "pass" if r.verdict else "fail", json.dumps(r.witness, sort_keys=True)]
        for r in reports
    ]
    return (EXIT_OK if all(r.verdict for r in reports) else EXIT_FAIL), doc, table


def cmd_verify_theorem(args: argparse.Namespace) -> tuple[int, Any, list[list[str]]]:
    _need(args, "n")
    fam = _family(args)
    if args.left is not None or args.right is not None:
        _need(args, "left", "right")
        pairs = [(fam.parse_label(args.left), fam.parse_label(args.right))]
    else:
        pairs = [(a, b) for a, b in itertools.product(fam.labels(), repeat=2)
                 if a.proper_size + b.proper_size <= args.operand_total]
    wanted = [fam.parse_label(t) for t in args.target] if args.target else None
    checks, rows, ok = [], [["left", "right", "target", "theorem", "brute_force", "verdict"]], True
    for left, right in pairs:
        brute = product_decomposition(fam, left, right, wanted, threads=args.threads)
        for target, value in sorted(brute.items()):
            br = theorem_coefficient(fam, left, right, target)
            agree = br.total == value
            ok &= agree
            entry = {"left": str(left), "right": str(right), "target": str(target),
                     "theorem": _rational(br.total), "brute_force": _rational(value),
                     "verdict": "pass" if agree else "fail"}
            if args.breakdown:
                entry["breakdown"] = br.to_json()
            checks.append(entry)
            rows.append([str(left), str(right), str(target), _slash(br.total), _slash(value),
                         entry["verdict"]])
    doc = _header(fam)
    doc.update(checks=checks, verdict="pass" if ok else "fail")
    return (EXIT_OK if ok else EXIT_FAIL), doc, rows


def cmd_polyfit(args: argparse.Namespace) -> tuple[int, Any, list[list[str]]]:
    _need(args, "left", "right", "target")
    kind = Kind(args.family)
    fit = parse_range(args.n) if args.n is not None else None
    hold = parse_range(args.holdout) if args.holdout is not None else None
    cert = verify_polynomiality(kind, args.left, args.right, args.target, fit_range=fit,
                                holdout_range=hold, normalization=args.normalization)
    table = [["n", "role", "value"]]
    table += [[str(n), "fit", _slash(v)] for n, v in cert.fit]
    table += [[str(n), "holdout", _slash(v)] for n, v in cert.holdout]
    return (EXIT_OK if cert.verdict else EXIT_FAIL), cert.to_json(), table


def cmd_selftest(args: argparse.Namespace) -> tuple[int, Any, list[list[str]]]:
    from .acceptance import CRITERIA, format_line, run_all

    numbers = sorted(CRITERIA) if args.criteria is None else _criteria(args.criteria)

    def report(res: Any) -> None:
        print(format_line(res), file=sys.stderr, flush=True)

    results = run_all(numbers, report)
    doc = {"criteria": [r.to_json() for r in results],
           "verdict": "pass" if all(r.passed for r in results) else "fail"}
    table = [["criterion", "verdict", "title"]] + [
        [str(r.number), "pass" if r.passed else "fail", r.title] for r in results
    ]
    return (EXIT_OK if all(r.passed for r in results) else EXIT_FAIL), doc, table


def _criteria(text: str) -> list[int]:
    from .acceptance import CRITERIA

    try:
        numbers = [int(tok) for tok in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"--criteria expects comma-separated integers, got {text!r}") from exc
    bad = [c for c in numbers if c not in CRITERIA]
    if bad:
        raise UsageError(f"no acceptance criterion {bad[0]}")
    return numbers


VERBS = {
    "compute": cmd_compute,
    "verify-hypotheses": cmd_verify_hypotheses,
    "verify-theorem": cmd_verify_theorem,
    "polyfit": cmd_polyfit,
    "selftest": cmd_selftest,
}


# ---------------------------------------------------------------------------
# argument grammar


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dcalg", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp: argparse.ArgumentParser, family: bool = True) -> None:
        if family:
            sp.add_argument("--family", required=True, choices=[k.value for k in Kind])
            sp.add_argument("--q", type=int, help="field size, gl only")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--out", help="write the result here instead of stdout")
        sp.add_argument("--max-elements", type=int, default=DEFAULT_MAX_ELEMENTS,
                        help="refuse to enumerate more elements than this")
        sp.add_argument("--threads", type=int, help="worker count (default: $DCALG_THREADS or 1)")

    c = sub.add_parser("compute", help="structure coefficients of one product")
    common(c)
    c.add_argument("--n", type=int)
    c.add_argument("--left")
    c.add_argument("--right")
    c.add_argument("--target", action="append", help="restrict to this class (repeatable)")
    c.add_argument("--breakdown", action="store_true", help="add the closed-form sum term by term")

    h = sub.add_parser("verify-hypotheses", help="exhaustive hypothesis checks")
    common(h)
    h.add_argument("--n-max", type=int)
    h.add_argument("--n-min", type=int, default=1)
    h.add_argument("--k-max", type=int, default=3)
    h.add_argument("--hypothesis", default="all", help=f"all or one of {', '.join(HYPOTHESES)}")

    t = sub.add_parser("verify-theorem", help="closed form against brute force")
    common(t)
    t.add_argument("--n", type=int)
    t.add_argument("--left")
    t.add_argument("--right")
    t.add_argument("--target", action="append")
    t.add_argument("--operand-total", type=int, default=4,
                   help="without --left/--right: all pairs whose proper sizes sum to at most this")
    t.add_argument("--breakdown", action="store_true")

    f = sub.add_parser("polyfit", help="polynomiality certificate for one triple")
    common(f)
    f.add_argument("--left")
    f.add_argument("--right")
    f.add_argument("--target")
    f.add_argument("--n", help="fit range a..b")
    f.add_argument("--holdout", help="holdout range c..d")
    f.add_argument("--normalization", choices=NORMALIZATIONS, default="stated")

    s = sub.add_parser("selftest", help="run the acceptance suite")
    common(s, family=False)
    s.add_argument("--criteria", help="comma-separated subset, e.g. 1,3,9")
    return p


def _render(doc: Any, table: list[list[str]], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(table)
    return buf.getvalue()


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        code, doc, table = VERBS[args.verb](args)
    except (UsageError, LabelError, SizeError, MembershipError, SizeGuardError, UnsupportedFamily,
            InsufficientPoints, StructureError, ValueError) as exc:
        print(f"dcalg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = _render(doc, table, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())
