"""Command-line surface: analyze, verify, zoo, dot, note.

Exit codes: 0 pass, 1 failures found, 2 budget exceeded, 3 input error.
"""

from __future__ import annotations

import argparse
import inspect
import sys

from . import textio
from .convexity import enumerate_convex_poset
from .deciders import (
    decide_cfpp,
    decide_fpp,
    decide_fpp_cposet,
    decide_rfpp,
    dismantle,
)
from .errors import (
    BudgetExceeded,
    NotALattice,
    OrdfixError,
    ParseError,
    UnknownKey,
    UnknownSuite,
    BadParams,
)
from .core import bits, width
from .lattices import Lattice, convex_sublattices
from .selection import decide_csp
from .suites import SUITES, verify_suite
from .zoo import generate

EXIT_PASS = 0
EXIT_FAILURES = 1
EXIT_BUDGET = 2
EXIT_INPUT = 3


def _set_text(mask, labels):
    inner = ",".join(labels.get(x, str(x)) for x in bits(mask))
    return "{" + inner + "}"


def analyze_poset(P, labels=None, no_fast_path=False, budget=None):
    """Full property report for one poset; returns (text, exit_code)."""
    labels = labels or {}
    lines = [f"poset: valid (n={P.n})"]
    budget_hit = False

    def guard(fn):
        nonlocal budget_hit
        try:
            return fn()
        except BudgetExceeded as exc:
            budget_hit = True
            return f"budget-exceeded ({exc.budget})"

    lines.append(f"width: {width(P)}")

    lat = None
    try:
        lat = Lattice(P)
        lines.append("lattice: yes")
    except NotALattice as exc:
        x, y = exc.x, exc.y
        lines.append(
            f"lattice: no ({labels.get(x, x)}, {labels.get(y, y)}: {exc.reason})"
        )

    dis = dismantle(P)
    lines.append(f"dismantlable: {'yes' if dis.holds else 'no'}")

    cp = None

    def cp_size():
        nonlocal cp
        cp = enumerate_convex_poset(P)
        return str(len(cp))

    lines.append(f"|C(P)|: {guard(cp_size)}")

    def render(tag, verdict):
        head = f"{tag}: {'yes' if verdict.holds else 'no'}"
        if verdict.fast_path:
            head += f" [{verdict.fast_path}]"
        out = [head, "  " + textio.verdict_record(verdict)]
        if not verdict.holds and verdict.witness is not None:
            body = textio.format_witness(verdict.witness)
            out.extend("  " + ln for ln in body.splitlines())
        return out

    v = guard(lambda: decide_fpp(P, direct=no_fast_path, budget=budget))
    lines.extend(render("FPP", v) if not isinstance(v, str) else [f"FPP: {v}"])

    v = guard(
        lambda: decide_cfpp(P, exhaustive=no_fast_path, budget=budget, cp=cp)
    )
    lines.extend(render("CFPP", v) if not isinstance(v, str) else [f"CFPP: {v}"])

    if P.n <= 5:
        v = guard(lambda: decide_rfpp(P, budget=budget))
        lines.extend(
            render("RFPP", v) if not isinstance(v, str) else [f"RFPP: {v}"]
        )
    else:
        lines.append("RFPP: skipped (n > 5)")

    v = guard(
        lambda: decide_csp(P, fast_paths=not no_fast_path, budget=budget, cp=cp)
    )
    lines.extend(render("CSP", v) if not isinstance(v, str) else [f"CSP: {v}"])

    v = guard(
        lambda: decide_fpp_cposet(P, force_search=no_fast_path, budget=budget)
    )
    lines.extend(
        render("C(P) FPP", v) if not isinstance(v, str) else [f"C(P) FPP: {v}"]
    )

    if lat is not None:
        cp_poset = cp.as_poset() if cp is not None else None
        if cp_poset is not None:
            try:
                Lattice(cp_poset)
                lines.append("C(P) lattice: yes")
            except NotALattice as exc:
                lines.append(
                    "C(P) lattice: no (X="
                    + _set_text(cp.sets[exc.x], labels)
                    + ", Y="
                    + _set_text(cp.sets[exc.y], labels)
                    + ")"
                )

        def cl_size():
            return str(len(convex_sublattices(lat)))

        lines.append(f"|C_L(T)|: {guard(cl_size)}")

    return "\n".join(lines) + "\n", EXIT_BUDGET if budget_hit else EXIT_PASS


def run_analyze(args):
    try:
        text = open(args.file, encoding="utf-8").read()
        P, labels = textio.parse_poset(text)
    except (OSError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report, code = analyze_poset(
        P, labels, no_fast_path=args.no_fast_path, budget=args.budget
    )
    print(report, end="")
    return code


def run_verify(args):
    kwargs = {}
    if args.max_n is not None:
        kwargs["max_n"] = args.max_n
    if args.seed is not None:
        kwargs["seed"] = args.seed
    if args.workers is not None:
        kwargs["workers"] = args.workers
    if args.k is not None:
        kwargs["k_max"] = args.k
    if args.samples is not None:
        kwargs["samples"] = args.samples
    try:
        fn = SUITES[args.suite]
    except KeyError:
        print(
            f"error: no suite named {args.suite!r}; known: {', '.join(sorted(SUITES))}",
            file=sys.stderr,
        )
        return EXIT_INPUT
    accepted = set(inspect.signature(fn).parameters)
    dropped = {k: v for k, v in kwargs.items() if k in accepted}
    try:
        report = verify_suite(args.suite, **dropped)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    print(
        f"suite {report.suite}: {report.instances} instances, "
        f"{len(report.failures)} failures, {report.elapsed:.1f}s"
    )
    for form, prop, detail in report.failures:
        print(f"FAIL {form} {prop}: {detail}")
    return EXIT_PASS if report.passed else EXIT_FAILURES


def run_zoo(args):
    try:
        ex = generate(args.key, *args.params)
    except (UnknownKey, BadParams) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    text = textio.format_poset(ex.poset, ex.element_labels)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text, end="")
    return EXIT_PASS


def run_dot(args):
    try:
        text = open(args.file, encoding="utf-8").read()
        P, labels = textio.parse_poset(text)
    except (OSError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        if args.target == "P":
            out = textio.poset_dot(P, labels)
        elif args.target == "CP":
            out = textio.cposet_dot(enumerate_convex_poset(P), labels)
        else:
            try:
                lat = Lattice(P)
            except NotALattice as exc:
                print(f"error: not a lattice: {exc}", file=sys.stderr)
                return EXIT_INPUT
            out = textio.cllattice_dot(convex_sublattices(lat), labels)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        print(out, end="")
    return EXIT_PASS


OPEN_PROBLEMS_NOTE = """\
open problems deliberately not searched at this scale:

1. product stability of the fixed point property for maps into convex
   sublattices: every finite lattice carries a monotone selection (send a
   sublattice to its least element), and a selection already forces that
   fixed point property via iteration from the bottom.  Finite instances
   therefore can never separate a product from its factors, and a search
   here would only burn cycles; the question is genuinely about infinite
   lattices.

2. whether every lattice quotient of a lattice with that fixed point
   property is a retract of it: on finite lattices the selection exists
   unconditionally and composing it with block preimages splits every
   quotient, so finite search cannot distinguish the hypotheses either.

Run `ordfix verify clfpp-finite` to see the finite collapse verified
instead.
"""


def run_note(args):
    if args.topic != "open-problems":
        print(f"error: unknown note topic {args.topic!r}", file=sys.stderr)
        return EXIT_INPUT
    print(OPEN_PROBLEMS_NOTE, end="")
    return EXIT_PASS


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ordfix",
        description="Exact fixed-point and selection-property toolkit for finite posets",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full property report for a poset file")
    p.add_argument("file")
    p.add_argument("--no-fast-path", action="store_true")
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(fn=run_analyze)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--max-n", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.set_defaults(fn=run_verify)

    p = sub.add_parser("zoo", help="write a named example structure")
    p.add_argument("key")
    p.add_argument("params", nargs="*", type=int)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=run_zoo)

    p = sub.add_parser("dot", help="emit a Hasse diagram in graph text")
    p.add_argument("file")
    p.add_argument("--target", choices=["P", "CP", "CL"], default="P")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=run_dot)

    p = sub.add_parser("note", help="print a prepared note")
    p.add_argument("topic")
    p.set_defaults(fn=run_note)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except OrdfixError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
