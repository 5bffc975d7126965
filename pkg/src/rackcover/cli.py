"""Command-line front end.

Subcommands operate on table files (JSON or plain text) or built-in fixture
names (Q3, R3, Q4, R5, P_n, C_n).  Every subcommand accepts --format
json|text.  Exit codes: 0 success/true, 1 false/property fails, 2 input
error, 3 indeterminate (a verdict beyond a resource cap).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import adjoint, analysis, congruence, core, cover, terms
from .errors import BadShape, CapExceeded, RackError
from .partition import Partition


def _load_structure(arg):
    if os.path.exists(arg):
        with open(arg) as fh:
            return core.loads_table(fh.read())
    try:
        return core.fixture(arg)
    except BadShape:
        raise BadShape(f"{arg!r} is neither a readable file nor a fixture name") from None


def _load_cocycle(path):
    with open(path) as fh:
        obj = json.load(fh)

    def loader(rel):
        base = os.path.join(os.path.dirname(os.path.abspath(path)), rel)
        with open(base) as fh2:
            return core.loads_table(fh2.read())

    return cover.cocycle_from_json(obj, base_loader=loader)


def _emit_json(obj):
    print(json.dumps(obj, indent=2, sort_keys=True))


def _identity_arg(text):
    return terms.parse_identity(text) if "=" in text else terms.builtin(text)


# ------------------------------------------------------------ subcommands

def _cmd_validate(args):
    Q = _load_structure(args.table)
    flags = {
        "size": Q.size,
        "left_quasigroup": True,
        "rack": core.is_rack(Q),
        "quandle": core.is_quandle(Q),
        "connected": analysis.is_connected(Q),
    }
    if args.format == "json":
        _emit_json(flags)
    else:
        for k, v in flags.items():
            print(f"{k}: {_render(v)}")
    return 0


def _cmd_report(args):
    Q = _load_structure(args.table)
    rep = analysis.report(Q)
    if args.format == "json":
        _emit_json(rep.to_json())
    else:
        for key, value in rep.to_json().items():
            print(f"{key}: {_render(value)}")
    return 0


def _named_partition(Q, name):
    if name == "lambda":
        return congruence.cayley_kernel(Q)[0]
    if name == "sigma":
        return congruence.sigma(Q)
    if name == "ip":
        return congruence.ip(Q)
    raise BadShape(f"unknown partition name {name!r}")


def _cmd_quotient(args):
    Q = _load_structure(args.table)
    if args.by:
        alpha = _named_partition(Q, args.by)
    else:
        with open(args.partition) as fh:
            alpha = Partition(json.load(fh))
    quo, proj = congruence.quotient(Q, alpha)
    if args.format == "json":
        obj = core.table_to_json(quo)
        obj["projection"] = [int(x) for x in proj]
        _emit_json(obj)
    else:
        sys.stdout.write(core.format_table_text(quo))
    return 0


def _cmd_extend(args):
    if len(args.inputs) > 2:
        raise BadShape("extend takes TABLE COCYCLE or a single cocycle file")
    if len(args.inputs) == 2:
        Q = _load_structure(args.inputs[0])
        theta, base = _load_cocycle(args.inputs[1])
        if base is not None and base != Q:
            raise BadShape("the cocycle file declares a different base table")
    else:
        theta, Q = _load_cocycle(args.inputs[0])
        if Q is None:
            raise BadShape("cocycle file has no base table; pass one explicitly")
    ext = cover.extend(Q, theta)
    if args.format == "json":
        obj = core.table_to_json(ext.total)
        obj["projection"] = list(ext.projection.to_json())
        _emit_json(obj)
    else:
        sys.stdout.write(core.format_table_text(ext.total))
    return 0


def _cmd_check_identity(args):
    Q = _load_structure(args.table)
    ident = _identity_arg(args.identity)
    if args.cocycle:
        theta, base = _load_cocycle(args.cocycle)
        if base is not None and base != Q:
            raise BadShape("the cocycle file declares a different base table")
        verdict = terms.sat_in_cover(Q, theta, ident)
        where = "cover"
    else:
        verdict = terms.holds(Q, ident)
        where = "base"
    out = {"identity": str(ident), "checked": where, "holds": verdict}
    if not verdict and not args.cocycle:
        cex = terms.counterexample(Q, ident)
        out["counterexample"] = cex
    if args.format == "json":
        _emit_json(out)
    else:
        print(f"identity: {out['identity']}")
        print(f"holds: {_yn(verdict)}")
        if out.get("counterexample"):
            assign = " ".join(f"{k}={v}" for k, v in sorted(out["counterexample"].items()))
            print(f"counterexample: {assign}")
    return 0 if verdict else 1


def _cmd_congruences(args):
    Q = _load_structure(args.table)
    found = congruence.all_congruences(Q)
    if args.format == "json":
        _emit_json({"count": len(found), "congruences": [list(p.to_json()) for p in found]})
    else:
        for p in found:
            print(p)
        print(f"count: {len(found)}")
    return 0


def _cmd_simply_connected(args):
    Q = _load_structure(args.table)
    verdict = adjoint.is_simply_connected(Q, cap=args.cap)
    k = adjoint.adj0_order(Q, cap=args.cap)
    from .permgroup import dis

    out = {
        "size": Q.size,
        "adj0": "indeterminate" if k is adjoint.INDETERMINATE else k,
        "dis": dis(Q).order,
        "simply_connected": (
            "indeterminate" if verdict is adjoint.INDETERMINATE else verdict
        ),
    }
    if args.format == "json":
        _emit_json(out)
    else:
        print(f"size: {out['size']}")
        print(f"adj0: {out['adj0']}")
        print(f"dis: {out['dis']}")
        print(f"simply connected: {_render(out['simply_connected'])}")
    if verdict is adjoint.INDETERMINATE:
        return 3
    return 0 if verdict else 1


def _cmd_cohomologous(args):
    theta, base1 = _load_cocycle(args.first)
    eps, base2 = _load_cocycle(args.second)
    if base1 is None and base2 is None:
        raise BadShape("neither cocycle file carries a base table")
    if base1 is not None and base2 is not None and base1 != base2:
        raise BadShape("the two cocycle files declare different base tables")
    Q = base1 if base1 is not None else base2
    gamma = cover.are_cohomologous(Q, theta, eps)
    out = {"cohomologous": gamma is not None}
    if gamma is not None:
        out["gamma"] = [list(g.image) for g in gamma]
    if args.format == "json":
        _emit_json(out)
    else:
        print(f"cohomologous: {_yn(gamma is not None)}")
        if gamma is not None:
            for x, g in enumerate(gamma):
                print(f"gamma[{x}] = {list(g.image)}")
    return 0 if gamma is not None else 1


def _parse_fiber(text):
    body = text.strip().lower()
    if body.startswith("z"):
        body = body[1:]
    try:
        moduli = tuple(int(p) for p in body.split("x"))
    except ValueError:
        raise BadShape(f"cannot parse fiber {text!r}; use forms like z2, 3, 2x2") from None
    if not moduli or any(m < 1 for m in moduli):
        raise BadShape(f"fiber moduli must be positive: {text!r}")
    return moduli


def _cmd_search_cover(args):
    Q = _load_structure(args.table)
    moduli = _parse_fiber(args.fiber)
    first, hits, total = analysis.search_cover(
        Q, moduli, require_connected=args.connected, fails=args.fails
    )
    out = {"cocycles": total, "matches": hits}
    if first is not None:
        out["cocycle"] = cover.cocycle_to_json(first.cocycle, base=Q)
        out["table"] = core.table_to_json(first.total)
    if args.format == "json":
        _emit_json(out)
    else:
        print(f"cocycles: {total}")
        print(f"matches: {hits}")
        if first is not None:
            print(f"first match over Z{'x'.join(map(str, moduli))}:")
            print(json.dumps(out["cocycle"]["values"]))
            sys.stdout.write(core.format_table_text(first.total))
    return 0 if first is not None else 1


def _yn(v):
    return "yes" if v else "no"


def _render(v):
    if isinstance(v, bool):
        return _yn(v)
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_render(x)}" for k, x in v.items()) + "}"
    if isinstance(v, list):
        return " ".join(str(x) for x in v)
    return str(v)


# ---------------------------------------------------------------- parser

def build_parser():
    parser = argparse.ArgumentParser(
        prog="rackcover",
        description="Finite racks and quandles: construction, covering "
        "extensions, congruences, identities, and simple connectedness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--format", choices=("json", "text"), default="text")
        p.set_defaults(func=fn)
        return p

    p = add("validate", _cmd_validate, "table sanity and rack/quandle flags")
    p.add_argument("table")

    p = add("report", _cmd_report, "full structural report")
    p.add_argument("table")

    p = add("quotient", _cmd_quotient, "factor by a named or file partition")
    p.add_argument("table")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--by", choices=("lambda", "sigma", "ip"))
    group.add_argument("--partition", help="JSON file with a block-id list")

    p = add("extend", _cmd_extend, "build the covering extension of a cocycle")
    p.add_argument("inputs", nargs="+", metavar="TABLE|COCYCLE",
                   help="either TABLE COCYCLE, or one cocycle file with an inline base")

    p = add("check-identity", _cmd_check_identity, "test an identity on a table or cover")
    p.add_argument("table")
    p.add_argument("identity", help="'lhs = rhs' or a builtin name like medial, symmetric(2)")
    p.add_argument("--cocycle", help="decide satisfaction in the extension by this cocycle")

    p = add("congruences", _cmd_congruences, "enumerate the congruence lattice")
    p.add_argument("table")

    p = add("simply-connected", _cmd_simply_connected, "adjoint-group verdict")
    p.add_argument("table")
    p.add_argument("--cap", type=int, default=adjoint.COSET_CAP,
                   help="live-coset cap for the enumeration")

    p = add("cohomologous", _cmd_cohomologous, "compare two cocycle files")
    p.add_argument("first")
    p.add_argument("second")

    p = add("search-cover", _cmd_search_cover, "scan abelian cocycles for a matching cover")
    p.add_argument("table")
    p.add_argument("--fiber", required=True, help="abelian fiber, e.g. z2, 3, 2x2")
    p.add_argument("--connected", action="store_true",
                   help="keep only cocycles whose extension is connected")
    p.add_argument("--fails", help="keep only extensions failing this identity")

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"indeterminate: {exc}", file=sys.stderr)
        return 3
    except RackError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
