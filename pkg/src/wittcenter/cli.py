"""Command-line front end: ``wittcenter {witt,weyl,center,verify} ...``."""

from __future__ import annotations

import argparse
import json
import re
import sys

from . import center, poisson2, suites
from ._grammar import ParseError, variable_names
from .poly import PolyRing
from .ring import GF, ZZ, StructureError
from .weyl import commutator, format_weyl, is_central, parse_weyl, weyl_mul, weyl_pow
from .witt import format_ghost, ghost, parse_witt, psi

EXIT_OK, EXIT_FAILURES, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--p", type=int, help="prime")
    parser.add_argument("--n", type=int, help="ambient level (coefficients mod p^(n+1))")
    parser.add_argument("--m", type=int, help="level of the center map")
    parser.add_argument("--d", type=int, help="number of variables of affine space")
    parser.add_argument("--deg", type=int, help="degree bound")
    parser.add_argument("--trials", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--json", action="store_true", help="machine-readable output")


_OPS = {
    "witt": ("Witt vector arithmetic", {
        "add": ("sum of two Witt vectors", 2),
        "mul": ("product of two Witt vectors", 2),
        "ghost": ("ghost components of a Witt vector", 1),
        "psi": ("the universal polynomial psi_i in x, y", 0),
    }),
    "weyl": ("Weyl algebra arithmetic over Z/p^(n+1)", {
        "mul": ("product of two elements", 2),
        "comm": ("commutator [u, v]", 2),
        "pow": ("power: element then exponent", 2),
        "central": ("whether an element is central", 1),
    }),
    "center": ("center maps, brackets, Serre form, center solver", {
        "phi": ("image of a Witt vector over F_p[X, Xi] in the center", 1),
        "bracket": ("bracket of two elements of F_p[X, Xi]", 2),
        "serre": ("Serre one-form of a Witt vector", 1),
        "solve": ("basis of the truncated center from linear algebra", 0),
    }),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wittcenter", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for command, (text, ops) in _OPS.items():
        group = sub.add_parser(command, help=text).add_subparsers(dest="op", required=True)
        for op, (op_help, arity) in ops.items():
            leaf = group.add_parser(op, help=op_help)
            if arity:
                leaf.add_argument("elements", nargs=arity)
            else:
                leaf.set_defaults(elements=[])
            if command == "witt":
                leaf.add_argument("--len", type=int, dest="length", help="expected vector length")
                leaf.add_argument("--i", type=int, help="psi index")
                leaf.add_argument("--over", choices=["Z", "Fp"], default="Z", help="coefficient base ring")
            _common(leaf)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", required=True)
    _common(v)
    return parser


# ---------------------------------------------------------------------------


def _need_p(args) -> int:
    if args.p is None:
        raise UsageError("--p is required")
    return args.p


def _infer_d(texts, pattern: str) -> int:
    idx = [int(mt.group(1)) for t in texts for mt in re.finditer(pattern, t)]
    return max(idx, default=1)


def _witt_ring(args, texts):
    names = []
    for t in texts:
        body = t.strip().strip("[]")
        for part in body.split(";"):
            for n in variable_names(part):
                if n not in names:
                    names.append(n)
    base = ZZ if args.over == "Z" else GF(_need_p(args))
    if not names:
        return base
    return PolyRing(tuple(sorted(names)), base)


def cmd_witt(args) -> str:
    if args.op == "psi":
        if args.i is None:
            raise UsageError("witt psi needs --i")
        return str(psi(args.i, _need_p(args)))
    p = _need_p(args)
    ring = _witt_ring(args, args.elements)
    vecs = [parse_witt(t, p, ring) for t in args.elements]
    if args.length is not None and any(len(v) != args.length for v in vecs):
        raise UsageError(f"expected Witt vectors of length {args.length}")
    if args.op == "ghost":
        if len(vecs) != 1:
            raise UsageError("witt ghost takes one vector")
        return format_ghost(ghost(vecs[0]))
    if len(vecs) != 2:
        raise UsageError(f"witt {args.op} takes two vectors")
    out = vecs[0] + vecs[1] if args.op == "add" else vecs[0] * vecs[1]
    return str(out)


def cmd_weyl(args) -> str:
    p = _need_p(args)
    level = args.n if args.n is not None else 0
    texts = args.elements[:1] if args.op == "pow" else args.elements
    d = args.d or _infer_d(texts, r"[xd](\d+)")
    elems = [parse_weyl(t, p, level, d) for t in texts]
    if args.op == "central":
        return "true" if is_central(elems[0]) else "false"
    if args.op == "pow":
        if len(args.elements) != 2:
            raise UsageError("weyl pow takes an element and an exponent")
        return format_weyl(weyl_pow(elems[0], int(args.elements[1])))
    if len(elems) != 2:
        raise UsageError(f"weyl {args.op} takes two elements")
    op = weyl_mul if args.op == "mul" else commutator
    return format_weyl(op(elems[0], elems[1]))


def cmd_center(args):
    p = _need_p(args)
    if args.op == "solve":
        m = args.m if args.m is not None else 0
        d = args.d or 1
        D = args.deg if args.deg is not None else p ** (m + 1)
        basis = center.center_kernel(p, m, d, D)
        return [format_weyl(e) for e in basis.elements()]
    d = args.d or _infer_d(args.elements, r"(?:X|Xi)(\d+)")
    ring = center.center_ring(p, d)
    if args.op == "bracket":
        if len(args.elements) != 2:
            raise UsageError("center bracket takes two elements")
        z, w = (ring.parse(t) for t in args.elements)
        return str(center.bracket0(z, w, args.n or 1))
    if len(args.elements) != 1:
        raise UsageError(f"center {args.op} takes one Witt vector")
    w = parse_witt(args.elements[0], p, ring)
    m = len(w) - 1 if args.m is None else args.m
    if args.op == "phi":
        out = poisson2.phi_even(m, w) if p == 2 else center.phi_odd(m, w)
        return format_weyl(out)
    return str(center.serre_map(w, m))


def cmd_verify(args):
    cfg = suites.RunConfig(
        p=_need_p(args),
        m=args.m if args.m is not None else 1,
        d=args.d or 1,
        trials=args.trials,
        seed=args.seed,
        deg=args.deg,
        n=args.n,
    )
    return suites.run(args.suite, cfg)


def _summary(report: dict) -> str:
    status = "PASS" if not report["failures"] else "FAIL"
    lines = [
        f"{report['suite']}: {status} ({report['checks']} checks, {len(report['failures'])} failures)"
        f" p={report['p']} m={report['m']} d={report['d']} trials={report['trials']} seed={report['seed']}"
    ]
    for f in report["failures"]:
        lines.append(f"  [{f['trial']}] {f['check']}: expected {f['expected']} got {f['got']} inputs {f['inputs']}")
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            report = cmd_verify(args)
            print(suites.report_json(report) if args.json else _summary(report))
            return EXIT_OK if not report["failures"] else EXIT_FAILURES
        handler = {"witt": cmd_witt, "weyl": cmd_weyl, "center": cmd_center}[args.command]
        result = handler(args)
    except (UsageError, ParseError, StructureError, KeyError, ValueError, ArithmeticError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    if args.json:
        print(json.dumps({"result": result}, sort_keys=True))
    elif isinstance(result, list):
        print("\n".join(result))
    else:
        print(result)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
