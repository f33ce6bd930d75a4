"""Command-line entry point: ``so3inv <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 input error, 3 a checked identity or
integrality assertion failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import batteries
from .cycloexp import cyclotomic_coeffs, habiro_divisibility_check
from .cyclonum import CycNum
from .habiro import NonUnitDivisor, PrecisionError, RingError
from .invariants import (
    HalfPowerResidue,
    IM_lens,
    IM_series,
    IntegralityViolation,
    SurgeryPresentation,
    lens_tau,
    lens_unified_sides,
    ohtsuki_series,
    tau,
    unified_sides,
)
from .jones import LIBRARY, FramedLink, LinkError
from .laplace import MembershipFailure
from .qlaurent import NotDivisible

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_VIOLATION = 0, 1, 2, 3
VIOLATIONS = (IntegralityViolation, HalfPowerResidue, MembershipFailure, NotDivisible, RingError, NonUnitDivisor)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _roots(values: list[int]) -> list[int]:
    for r in values:
        if r < 3 or r % 2 == 0:
            raise UsageError(f"root orders must be odd and at least 3, got {r}")
    return values


def _load_link(args) -> FramedLink:
    if args.link and args.builtin:
        raise UsageError("give either --link or --builtin, not both")
    if args.link:
        try:
            with open(args.link, encoding="utf-8") as fh:
                link = FramedLink.from_json(fh.read())
        except OSError as exc:
            raise LinkError(f"cannot read {args.link}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise LinkError(f"{args.link} is not valid JSON: {exc}") from None
    elif args.builtin:
        if args.builtin not in LIBRARY:
            raise UsageError(f"unknown builtin {args.builtin!r}; choose from {sorted(LIBRARY)}")
        link = LIBRARY[args.builtin]()
    else:
        raise UsageError("a link is required (--link FILE or --builtin NAME)")
    if args.framings is not None:
        if len(args.framings) != link.n_components:
            raise UsageError(f"{len(args.framings)} framings for {link.n_components} components")
        link = link.with_framings(tuple(args.framings))
    return link


def _add_link_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--link", help="framed link JSON file")
    p.add_argument("--builtin", help=f"library link: {', '.join(sorted(LIBRARY))}")
    p.add_argument("--framings", type=_ints, help="comma-separated framings overriding the file")


def _add_lens_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lens", type=_ints, metavar="D,A", help="lens space L(D, A) in closed form")


def _lens_pair(args) -> tuple[int, int] | None:
    if args.lens is None:
        return None
    if len(args.lens) != 2 or args.lens[0] <= 0:
        raise UsageError("--lens takes D,A with D > 0")
    return args.lens[0], args.lens[1]


def _cyc(v: CycNum) -> dict:
    return v.to_json()


def _series(s: Sequence[Fraction]) -> list[str]:
    return [str(c) for c in s]


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
    p = _Parser(prog="so3inv", description="Quantum SO(3) invariants and the unified invariant.",
                parents=[common])
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("tau", parents=[common], help="tau_M at roots of unity")
    _add_link_args(s)
    s.add_argument("--root", type=_ints, required=True, help="odd root orders, comma-separated")

    s = sub.add_parser("lens", parents=[common], help="closed-form invariant of L(d, a)")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--a", type=int, default=1)
    s.add_argument("--root", type=_ints, required=True)

    s = sub.add_parser("expand", parents=[common], help="cyclotomic expansion and its divisibility certificate")
    _add_link_args(s)
    s.add_argument("--kmax", type=int, default=3)

    s = sub.add_parser("im", parents=[common], help="unified invariant to a given precision")
    _add_link_args(s)
    _add_lens_arg(s)
    s.add_argument("--kmax", type=int, default=4)

    s = sub.add_parser("unified", parents=[common], help="compare (d/r) tau with ev of the unified invariant")
    _add_link_args(s)
    _add_lens_arg(s)
    s.add_argument("--roots", type=_ints, default=[5, 7])

    s = sub.add_parser("ohtsuki", parents=[common], help="Taylor expansion of the unified invariant at q = 1")
    _add_link_args(s)
    _add_lens_arg(s)
    s.add_argument("--order", type=int, default=4)

    s = sub.add_parser("verify", parents=[common], help="run a verification battery")
    s.add_argument("battery", choices=sorted(batteries.BATTERIES) + ["all"])
    s.add_argument("--kmax", type=int, help="k range (twist, habiro)")
    s.add_argument("--bmax", type=int, help="|b| and |d| range (twist)")
    s.add_argument("--roots", type=_ints, help="root orders (lens, integrality, unified)")
    s.add_argument("--order", type=int, help="series order (padic, series)")
    s.add_argument("--seed", type=int, help="random seed (gauss)")
    return p


def _verify(args) -> tuple[dict, int]:
    names = sorted(batteries.BATTERIES) if args.battery == "all" else [args.battery]
    if args.roots is not None:
        _roots(args.roots)
    for n in ("kmax", "bmax", "order"):
        v = getattr(args, n)
        if v is not None and v < 0:
            raise UsageError(f"--{n} must be non-negative")
    results = []
    for name in names:
        kw = {}
        if name == "twist":
            kw = {k: v for k, v in (("kmax", args.kmax), ("bmax", args.bmax)) if v is not None}
        elif name == "habiro" and args.kmax is not None:
            kw = {"kmax": args.kmax, "kmax_links": min(args.kmax, 3)}
        elif name in ("lens", "integrality") and args.roots is not None:
            kw = {"roots": tuple(args.roots)}
        elif name == "unified" and args.roots is not None:
            kw = {"roots": tuple(args.roots)}
        elif name in ("padic", "series") and args.order is not None:
            kw = {"order": args.order}
        elif name == "gauss" and args.seed is not None:
            kw = {"seed": args.seed}
        results.append(batteries.BATTERIES[name](**kw))
    ok = all(b.ok for b in results)
    return {"ok": ok, "batteries": [b.to_json() for b in results]}, EXIT_OK if ok else EXIT_VIOLATION


def run(args) -> tuple[dict, int]:
    cmd = args.command
    if cmd is None:
        raise UsageError("a subcommand is required")
    if cmd == "verify":
        return _verify(args)
    if cmd == "lens":
        roots = _roots(args.root)
        if args.d <= 0:
            raise UsageError("--d must be positive")
        return {"d": args.d, "a": args.a,
                "values": {str(r): _cyc(lens_tau(args.d, args.a, r)) for r in roots}}, EXIT_OK
    if cmd == "tau":
        roots = _roots(args.root)
        sp = SurgeryPresentation(_load_link(args))
        return {"link": sp.link.to_json(), "values": {str(r): _cyc(tau(sp, r)) for r in roots}}, EXIT_OK
    if cmd == "expand":
        if args.kmax < 0:
            raise UsageError("--kmax must be non-negative")
        link = _load_link(args)
        exp = cyclotomic_coeffs(link, args.kmax)
        cert = habiro_divisibility_check(exp)
        return {"expansion": exp.to_json(), "divisibility": cert.to_json()}, EXIT_OK if cert.ok else EXIT_VIOLATION
    lens = _lens_pair(args)
    if cmd == "im":
        if args.kmax < 0:
            raise UsageError("--kmax must be non-negative")
        x = IM_lens(*lens) if lens else IM_series(SurgeryPresentation(_load_link(args)), args.kmax)
        return {"element": x.to_json()}, EXIT_OK
    if cmd == "unified":
        roots = _roots(args.roots)
        rows = {}
        ok = True
        for r in roots:
            if lens:
                lhs, rhs = lens_unified_sides(*lens, r)
            else:
                lhs, rhs = unified_sides(SurgeryPresentation(_load_link(args)), r)
            rows[str(r)] = {"lhs": _cyc(lhs), "rhs": _cyc(rhs), "equal": lhs == rhs}
            ok = ok and lhs == rhs
        return {"ok": ok, "roots": rows}, EXIT_OK if ok else EXIT_VIOLATION
    if cmd == "ohtsuki":
        if args.order < 0:
            raise UsageError("--order must be non-negative")
        x = IM_lens(*lens) if lens else IM_series(SurgeryPresentation(_load_link(args)), args.order)
        return {"d": x.d, "series": _series(ohtsuki_series(x, args.order))}, EXIT_OK
    raise UsageError(f"unknown subcommand {cmd}")


def _text(report: dict, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    for k, v in sorted(report.items()):
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.append(_text(v, indent + 1))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{pad}{k}:")
            for item in v:
                lines.append(_text(item, indent + 1))
                lines.append("")
        else:
            lines.append(f"{pad}{k:<12} {v}")
    return "\n".join(lines)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        report, code = run(args)
    except UsageError as exc:
        print(f"so3inv: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except VIOLATIONS as exc:
        print(f"so3inv: identity violated: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (LinkError, ValueError, PrecisionError) as exc:
        print(f"so3inv: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if getattr(args, "format", "json") == "json":
        sys.stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(_text(report) + "\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
