"""Batch command-line interface.

Subcommands: group-info, check, xi, lefschetz, burnside, catalog
{list,build,verify}, frobenius.  Every report is a plain dict rendered
either as indented JSON (--json) or as simple text; identical inputs give
byte-identical output.  Exit codes: 0 on success, 2 on validation errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .burnside import burnside_units, idempotent, mark_table, marks
from .complexes import BoundedComplex, endotrivial_report, xi
from .constructions import a4_frobenius_example, build_entries, catalog_names
from .errors import ParseError, PermchainError
from .ffield import GF, field_from_q
from .groups import class_name, group_from_spec, mobius_of_poset, perm_to_cycles
from .invariants import (
    beta_direct,
    beta_from_xi,
    is_frobenius_stable,
    is_orthogonal_unit_pgroup,
    lefschetz,
)
from .literals import complex_to_obj, format_element, load_complex, load_element


def _emit(report: dict, args) -> None:
    if getattr(args, "json", False) or getattr(args, "out", None):
        text = json.dumps(report, indent=2)
    else:
        text = _render_text(report)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _render_text(obj, indent=0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_render_text_scalar(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(
            _render_text(v, indent) if isinstance(v, (dict, list)) else f"{pad}- {_render_text_scalar(v)}"
            for v in obj
        )
    return f"{pad}{_render_text_scalar(obj)}"


def _render_text_scalar(v):
    return v if isinstance(v, str) else json.dumps(v)


def _character_json(char) -> dict:
    Q = char.group
    return {
        Q.gen_names[i]: char.field.format(v) for i, v in enumerate(char.values)
    }


def _xi_json(inv) -> dict:
    lat = inv.group.lattice()
    out = {}
    for cid in sorted(inv.entries):
        e = inv.entries[cid]
        out[class_name(lat, e.subgroup)] = {
            "h": e.h,
            "character": _character_json(e.character),
        }
    return out


def _beta_json(b) -> list:
    lat = b.group.lattice()
    out = []
    for cid in sorted(b.entries):
        e = b.entries[cid]
        out.append(
            {
                "subgroup_class": class_name(lat, e.subgroup),
                "epsilon": e.epsilon,
                "character": _character_json(e.character),
            }
        )
    return out


# -- subcommands ----------------------------------------------------------------


def cmd_group_info(args) -> dict:
    G = group_from_spec(args.group)
    L = G.lattice()
    p = args.p or 2
    classes = []
    for cid, members in enumerate(L.classes):
        rep = L.class_reps[cid]
        classes.append(
            {
                "name": class_name(L, rep),
                "order": rep.order,
                "class_size": len(members),
                "normal": rep.is_normal,
            }
        )
    psub = [class_name(L, P) for P in L.p_class_reps(p)]
    normalizers = {
        class_name(L, P): {
            "normalizer_order": L.normalizer(P).order,
            "quotient_order": L.normalizer(P).order // P.order,
        }
        for P in L.p_class_reps(p)
    }
    poset = L.normal_p_subgroups(p)
    mob = []
    for A in poset:
        for B in poset:
            if B.contains(A):
                mob.append(
                    {
                        "from": class_name(L, A),
                        "to": class_name(L, B),
                        "mu": mobius_of_poset(poset, A, B),
                    }
                )
    return {
        "group": G.describe(),
        "order": G.order,
        "generators": {
            G.gen_names[i]: perm_to_cycles(g) for i, g in enumerate(G.generators)
        },
        "subgroup_classes": classes,
        "p": p,
        "p_subgroup_classes": psub,
        "p_normalizers": normalizers,
        "normal_p_poset_mobius": mob,
    }


def cmd_check(args) -> dict:
    C = load_complex(args.file)
    lat = C.group.lattice()
    rep = endotrivial_report(C)
    out = {
        "group": C.group.describe(),
        "field": {"p": C.field.p, "n": C.field.n, "q": C.field.q},
        "dims": {str(i): C.module_at(i).dim for i in C.degrees()},
        "endotrivial": rep.ok,
    }
    if not rep.ok:
        out["violations"] = {
            class_name(lat, lat.class_reps[cid]): [
                {"degree": d, "dim": dim} for d, dim in degs
            ]
            for cid, degs in sorted(rep.violations.items())
        }
        return out
    inv = xi(C)
    out["xi"] = _xi_json(inv)
    out["beta"] = _beta_json(beta_from_xi(inv))
    return out


def cmd_xi(args) -> dict:
    C = load_complex(args.file)
    inv = xi(C)
    return {
        "group": C.group.describe(),
        "field": {"p": C.field.p, "n": C.field.n, "q": C.field.q},
        "xi": _xi_json(inv),
    }


def cmd_lefschetz(args) -> dict:
    C = load_complex(args.file)
    t = lefschetz(C)
    out = {
        "group": C.group.describe(),
        "element": format_element(t),
    }
    if C.group.is_p_group(C.field.p):
        b = t.to_burnside()
        out["marks"] = [int(v) for v in marks(b)]
        out["orthogonal_unit"] = is_orthogonal_unit_pgroup(t)
    return out


def cmd_burnside(args) -> dict:
    G = group_from_spec(args.group)
    L = G.lattice()
    names = [class_name(L, H) for H in L.class_reps]
    tbl = mark_table(G)
    denoms = {}
    for H in L.class_reps:
        e = idempotent(G, H)
        d = 1
        for c in e.coeffs:
            d = d * Fraction(c).denominator // _gcd(d, Fraction(c).denominator)
        denoms[class_name(L, H)] = d
    units = burnside_units(G)
    return {
        "group": G.describe(),
        "classes": names,
        "mark_table": [[int(v) for v in row] for row in tbl],
        "idempotent_denominators": denoms,
        "unit_count": len(units),
        "units": [list(u.coeffs) for u in units],
    }


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def cmd_catalog(args) -> dict:
    if args.action == "list":
        items = []
        for name in catalog_names():
            for e in build_entries(name):
                items.append(
                    {
                        "name": e.name,
                        "registry": name,
                        "group": e.group.describe(),
                        "field": f"F{e.field.q}",
                        "dims": {str(i): e.complex.module_at(i).dim for i in e.complex.degrees()},
                    }
                )
        return {"entries": items}
    entries = build_entries(args.name)
    if args.action == "build":
        objs = [complex_to_obj(e.complex) for e in entries]
        return objs[0] if len(objs) == 1 else {"complexes": objs}
    # verify
    reports = []
    for e in entries:
        rep = e.verify()
        if rep["endotrivial"]:
            inv = xi(e.complex)
            rep["xi"] = _xi_json(inv)
            b = beta_from_xi(inv)
            rep["beta"] = _beta_json(b)
            rep["frobenius_stable"] = is_frobenius_stable(b)
            t = lefschetz(e.complex)
            rep["lefschetz"] = format_element(t)
            if e.group.is_p_group(e.field.p):
                rep["marks"] = [int(v) for v in marks(t.to_burnside())]
                rep["orthogonal_unit"] = is_orthogonal_unit_pgroup(t)
        reports.append(rep)
    return reports[0] if len(reports) == 1 else {"entries": reports}


def cmd_frobenius(args) -> dict:
    if args.file == "a4-example":
        q = args.q or 4
        u, beta, stable = a4_frobenius_example(field_from_q(q))
    else:
        u = load_element(args.file)
        if args.q and args.q != u.field.q:
            raise ParseError(f"element file field F{u.field.q} does not match -q {args.q}")
        beta = beta_direct(u)
        stable = is_frobenius_stable(beta)
    return {
        "group": u.group.describe(),
        "field": f"F{u.field.q}",
        "element": format_element(u),
        "beta": _beta_json(beta),
        "frobenius_stable": stable,
    }


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="permchain",
        description="exact computations with complexes of p-permutation modules",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="emit JSON")
        p.add_argument("--out", help="write the report to a file (JSON)")

    p = sub.add_parser("group-info", help="subgroup lattice and p-local data")
    p.add_argument("group", help="catalog name or ';'-separated cycle generators")
    p.add_argument("-p", type=int, default=None, help="prime (default 2)")
    common(p)
    p.set_defaults(func=cmd_group_info)

    p = sub.add_parser("check", help="endotriviality report for a complex file")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("xi", help="h-marks and local characters of a complex file")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=cmd_xi)

    p = sub.add_parser("lefschetz", help="alternating sum of a labeled complex")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=cmd_lefschetz)

    p = sub.add_parser("burnside", help="mark table, idempotents and units")
    p.add_argument("group")
    common(p)
    p.set_defaults(func=cmd_burnside)

    p = sub.add_parser("catalog", help="built-in complex constructions")
    p.add_argument("action", choices=["list", "build", "verify"])
    p.add_argument("name", nargs="?", help="registry name for build/verify")
    common(p)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("frobenius", help="local characters and stability of an element")
    p.add_argument("file", help="element file or 'a4-example'")
    p.add_argument("-q", type=int, default=None, help="field size for the example")
    common(p)
    p.set_defaults(func=cmd_frobenius)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "catalog" and args.action in ("build", "verify") and not args.name:
        print("error: catalog build/verify needs a name", file=sys.stderr)
        return 2
    try:
        report = args.func(args)
    except (ParseError, PermchainError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    _emit(report, args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
