"""Command-line front end.

Every subcommand prints a JSON envelope ``{command, result, citations,
version}`` (``fgl print`` defaults to plain text).  Exit status: 0 on
success, 1 when the computation is undefined for the inputs, 2 on usage
errors.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .charnum import milnor_number, nu_check
from .errors import MoravakError
from .fgl import (
    additive,
    bp,
    height_mod_p,
    morava,
    multiplicative,
    reduce_mod_J,
)
from .motives import rost_kn_groups
from .operations import symm_division_check
from .quadrics import classify, torsion_bound, torsion_free_range, verify_bound
from .splitting import (
    K0,
    GroupDescriptor,
    QuadFormDescriptor,
    group_kn_split,
    quadric_kn_split,
)

DEFAULT_GRID = ((2, 14), (2, 16), (2, 20), (2, 21), (3, 30), (1, 8), (2, 22), (3, 46))


class UsageError(Exception):
    pass


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, int(p ** 0.5) + 1))


def _prime(text: str) -> int:
    p = int(text)
    if not _is_prime(p):
        raise argparse.ArgumentTypeError(f"{p} is not prime")
    return p


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _height(text: str):
    if text == K0:
        return K0
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("height must be nonnegative or K0")
    return v


def _grid_entry(text: str) -> tuple:
    try:
        n, D = text.split(":")
        return int(n), int(D)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid entries look like N:DIM, got {text!r}") from None


# -- handlers ---------------------------------------------------------------


def _build_law(args):
    T = args.trunc
    theory = args.theory
    if theory == "additive":
        return additive(args.p, T)
    if theory == "multiplicative":
        return multiplicative(args.p, T)
    if theory == "bp":
        return bp(args.p, args.k, T)
    if args.n is None:
        raise UsageError("--theory morava needs -n")
    return morava(args.p, args.n, T)


def cmd_fgl_print(args):
    law = _build_law(args)
    series = law.law
    if args.mod_j:
        if args.theory != "morava":
            raise UsageError("--mod-j applies to --theory morava")
        series = reduce_mod_J(series, args.p, args.n)
    text = series.render()
    return {"theory": law.label, "truncation": law.truncation, "law": text}, ["formal group law from logarithm"], text


def cmd_fgl_height(args):
    law = _build_law(args)
    h = height_mod_p(law)
    value = "infinity" if h == float("inf") else h
    return {"theory": law.label, "height": value}, ["height of the p-series mod p"], None


def cmd_char_milnor(args):
    try:
        value = milnor_number(args.degree, args.dim, args.p)
        divisible = True
        milnor = str(value.value)
    except MoravakError:
        divisible = False
        milnor = None
    n = 0
    while args.p ** n - 1 < args.dim:
        n += 1
    nu = divisible and args.p ** n - 1 == args.dim and nu_check(args.degree, args.dim, args.p, n)
    return ({"milnor": milnor, "divisible": divisible, "nu": nu},
            ["Milnor number of a hypersurface"], None)


def cmd_char_nu(args):
    value = nu_check(args.degree, args.dim, args.p, args.n)
    return {"nu": value, "dim": args.dim, "p": args.p, "n": args.n}, ["nu_n-variety test"], None


def cmd_symm(args):
    res = symm_division_check(args.p, args.n, args.k)
    expected = "1" if args.k == 1 else ("v" if args.k == 2 else f"v^{args.k - 1}")
    return ({"slice": res.slice.render(), "expected": expected, "exponent": res.exponent,
             "unit_multiple": res.is_unit_multiple, "exact": res.is_exact,
             "pass": res.is_unit_multiple},
            ["symmetric operation divided by the p-series"], None)


_ROST_CASES = {"split": "n<m-1", "tate_plus_L": "n=m-1", "indecomposable": "n>m-1"}


def cmd_rost(args):
    res = rost_kn_groups(args.p, args.m, args.n)
    out = res.as_dict()
    out["decomposition"] = out["case"]
    out["case"] = _ROST_CASES[res.case]
    if "torsion" in out:
        out["torsion"] = [str(t) for t in out["torsion"]]
    return out, ["Rost motive over Morava K-theory"], None


def cmd_quadric_bound(args):
    bound = torsion_bound(args.n, args.dim)
    return bound.as_dict(), ["torsion bound at codimension 2^n"], None


def cmd_quadric_verify(args):
    return verify_bound(args.n, args.dim, args.trials, args.seed), \
        ["gamma-filtration engine with random tails"], None


def cmd_split_group(args):
    u = None
    if args.u_zero:
        u = True
    elif args.u_nonzero:
        u = False
    rost = None
    if args.rost_trivial:
        rost = True
    elif args.rost_nontrivial:
        rost = False
    desc = GroupDescriptor(args.type, args.p, not args.outer, args.tits_split, rost, u)
    decision = group_kn_split(desc, args.n)
    return decision.as_dict(), list(decision.rules) or ["no rule applies"], None


def cmd_split_quadform(args):
    if args.excellent_dim is not None:
        desc = QuadFormDescriptor(args.excellent_dim, excellent=True)
    elif args.dim is not None:
        desc = QuadFormDescriptor(args.dim, args.im, args.maximal, args.odd_part)
    else:
        raise UsageError("give --excellent-dim or --dim")
    decision = quadric_kn_split(desc, args.n)
    return decision.as_dict(), list(decision.rules) or ["no rule applies"], None


def annotate(n: int, D: int, bound) -> list:
    notes = []
    params = bound.params
    if params.j != 0:
        notes.append(f"torsion-free at codim {2 ** n}")
    if D == 2 ** (n + 2) - 2 and bound.order == 2:
        notes.append("matches Rost: Z/2")
    if n == 1 and D > 6:
        notes.append("Karpenko: Tors CH^2 = 0 for D > 6")
    if D + 2 == 6 * 2 ** n:
        notes.append(f"generalized Albert form: Tors CH^j = 0 for j < {2 ** n + 1}; "
                     f"Vishik: Tors CH^{2 ** n + 1} != 0")
    return notes


def table_rows(grid) -> list:
    rows = []
    for n, D in grid:
        bound = torsion_bound(n, D)
        rows.append({"n": n, "dim": D, "d": bound.params.d, "j": bound.params.j,
                     "r": bound.params.r, "torsion_free_upto": torsion_free_range(2, n),
                     "codim": 2 ** n, "torsion_order": bound.order,
                     "annotations": annotate(n, D, bound)})
    return rows


def cmd_table(args):
    grid = args.grid or DEFAULT_GRID
    rows = table_rows(grid)
    lines = [f"{'n':>2} {'dim':>4} {'d':>3} {'j':>2} {'r':>3} {'free<=':>6} {'codim':>5} {'bound':>6}  notes"]
    for r in rows:
        bound = "0" if r["torsion_order"] == 1 else f"Z/{r['torsion_order']}"
        lines.append(f"{r['n']:>2} {r['dim']:>4} {r['d']:>3} {r['j']:>2} {str(r['r'] or '-'):>3} "
                     f"{r['torsion_free_upto']:>6} {r['codim']:>5} {bound:>6}  "
                     + "; ".join(r["annotations"]))
    return {"rows": rows}, ["torsion bound at codimension 2^n"], "\n".join(lines)


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="moravak", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="group", required=True)

    def fmt(p, default="json"):
        p.add_argument("--format", choices=("json", "text"), default=default)

    fgl = sub.add_parser("fgl", help="formal group laws").add_subparsers(dest="action", required=True)
    for name, handler in (("print", cmd_fgl_print), ("height", cmd_fgl_height)):
        p = fgl.add_parser(name)
        p.add_argument("--theory", choices=("additive", "multiplicative", "bp", "morava"),
                       required=True)
        p.add_argument("-p", type=_prime, required=True)
        p.add_argument("-n", type=_positive)
        p.add_argument("-k", type=_positive, default=1, help="number of v variables for bp")
        p.add_argument("--trunc", type=_positive, default=None)
        if name == "print":
            p.add_argument("--mod-j", action="store_true")
            fmt(p, "text")
        else:
            fmt(p)
        p.set_defaults(handler=handler)

    char = sub.add_parser("char", help="characteristic numbers").add_subparsers(dest="action", required=True)
    p = char.add_parser("milnor")
    p.add_argument("--degree", type=_positive, required=True)
    p.add_argument("--dim", type=_positive, required=True)
    p.add_argument("-p", type=_prime, required=True)
    fmt(p)
    p.set_defaults(handler=cmd_char_milnor)
    p = char.add_parser("nu-check")
    p.add_argument("-p", type=_prime, required=True)
    p.add_argument("-n", type=_positive, required=True)
    p.add_argument("--dim", type=_positive, required=True)
    p.add_argument("--degree", type=_positive, required=True)
    fmt(p)
    p.set_defaults(handler=cmd_char_nu)

    symm = sub.add_parser("symm", help="symmetric operation").add_subparsers(dest="action", required=True)
    p = symm.add_parser("verify")
    p.add_argument("-p", type=_prime, required=True)
    p.add_argument("-n", type=_positive, required=True)
    p.add_argument("-k", type=_positive, required=True)
    fmt(p)
    p.set_defaults(handler=cmd_symm)

    p = sub.add_parser("rost", help="Morava K-groups of Rost motives")
    p.add_argument("-p", type=_prime, required=True)
    p.add_argument("-m", type=_positive, required=True)
    p.add_argument("-n", type=_positive, required=True)
    fmt(p)
    p.set_defaults(handler=cmd_rost)

    quad = sub.add_parser("quadric", help="quadric torsion bounds").add_subparsers(dest="action", required=True)
    p = quad.add_parser("bound")
    p.add_argument("-n", type=_positive, required=True)
    p.add_argument("--dim", type=_positive, required=True)
    fmt(p)
    p.set_defaults(handler=cmd_quadric_bound)
    p = quad.add_parser("verify")
    p.add_argument("-n", type=_positive, required=True)
    p.add_argument("--dim", type=_positive, required=True)
    p.add_argument("--trials", type=_positive, default=100)
    p.add_argument("--seed", type=int, default=0)
    fmt(p)
    p.set_defaults(handler=cmd_quadric_verify)

    split = sub.add_parser("split", help="splitting verdicts").add_subparsers(dest="action", required=True)
    p = split.add_parser("group")
    p.add_argument("--type", required=True, choices=("A", "B", "C", "D", "E6", "E7", "E8", "F4", "G2"))
    p.add_argument("-p", type=_prime, required=True)
    p.add_argument("-n", type=_height, required=True, help="height, or K0 for integral K^0")
    p.add_argument("--outer", action="store_true", help="group of outer type")
    p.add_argument("--tits-split", action="store_true")
    rost = p.add_mutually_exclusive_group()
    rost.add_argument("--rost-trivial", action="store_true")
    rost.add_argument("--rost-nontrivial", action="store_true")
    u = p.add_mutually_exclusive_group()
    u.add_argument("--u-zero", action="store_true")
    u.add_argument("--u-nonzero", action="store_true")
    fmt(p)
    p.set_defaults(handler=cmd_split_group)
    p = split.add_parser("quadform")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--excellent-dim", type=_positive)
    p.add_argument("--dim", type=_positive)
    p.add_argument("--im", type=_positive, help="declared I^m membership")
    p.add_argument("--maximal", action="store_true", help="the declared m is maximal")
    p.add_argument("--odd-part", action="store_true", help="form is q + <c> with q in I^m")
    fmt(p)
    p.set_defaults(handler=cmd_split_quadform)

    p = sub.add_parser("table", help="torsion bounds with known-result annotations")
    p.add_argument("--grid", type=_grid_entry, nargs="*", help="entries N:DIM")
    fmt(p)
    p.set_defaults(handler=cmd_table)
    return parser


_DEFAULT_TRUNC = {"height": lambda a: (a.p ** a.n + 1) if a.n else a.p + 1,
                  "print": lambda a: 2 * a.p ** a.n if a.n else 2 * a.p}


def _command_echo(argv) -> str:
    return " ".join(argv)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on usage errors
    if getattr(args, "trunc", "absent") is None:
        args.trunc = _DEFAULT_TRUNC[args.action](args)
    try:
        result, citations, text = args.handler(args)
    except UsageError as exc:
        parser.error(str(exc))
    except MoravakError as exc:
        err = {"command": _command_echo(argv), "error": str(exc), "kind": type(exc).__name__,
               "version": __version__}
        print(json.dumps(err, sort_keys=True), file=sys.stderr)
        return 1
    if args.format == "text" and text is not None:
        print(text)
    else:
        envelope = {"command": _command_echo(argv), "result": result,
                    "citations": citations, "version": __version__}
        print(json.dumps(envelope, sort_keys=True, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
