"""Command line: ``frtbialg {check,dims,verify} INSTANCE [flags]``.

Exit codes: 0 all pass, 1 any fail, 2 inconclusive without a fail, 3 usage
or parse error.
"""
from __future__ import annotations

import argparse
import sys

from .instance import InstanceError, load_instance
from .report import EXIT_USAGE
from .suites import SUITES, TARGETS, SuiteError, cmd_check, cmd_dims, run_suite


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="frtbialg", description="Exact verification of FRT-type bialgebroids and their weak Hopf closures.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("instance", help="instance file, or a bundled name such as example-4-1-i1")
        sp.add_argument("--report", metavar="PATH", help="write the JSON report here")
        sp.add_argument("--threads", type=_nonneg, default=1, metavar="K")

    c = sub.add_parser("check", help="σ / face-weight conditions and Frobenius systems")
    common(c)
    d = sub.add_parser("dims", help="graded dimensions of 𝔄(w)")
    common(d)
    d.add_argument("--degree-cap", type=_nonneg, default=2, metavar="N")
    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES)
    common(v)
    v.add_argument("--degree-cap", type=_nonneg, metavar="N")
    v.add_argument("--membership-bound", type=_nonneg, metavar="D")
    v.add_argument("--target", choices=TARGETS, default="a-sigma")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        inst = load_instance(args.instance)
        if args.command == "check":
            rep = cmd_check(inst)
        elif args.command == "dims":
            rep = cmd_dims(inst, args.degree_cap)
        else:
            rep = run_suite(inst, args.suite, args.degree_cap, args.membership_bound,
                            threads=max(1, args.threads), target=args.target)
    except InstanceError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SuiteError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = rep.to_json()
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    print(rep.summary_line())
    if rep.extra.get("dims") is not None:
        print("dims: " + " ".join(str(x) for x in rep.extra["dims"]))
    for r in rep.records:
        if r["verdict"] != "pass":
            print(f"  {r['verdict']}: {r['identity']} @ {r['element']} {r['witness']}")
            break
    return rep.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
