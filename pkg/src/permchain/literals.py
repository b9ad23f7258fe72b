"""Text and JSON formats for modules, virtual elements, and complexes.

Module literals are sums of twisted transitive terms:

    (w,1)*[G/<a>]^2 + [G/G]

with the parenthesized character giving one scalar per group generator,
the subgroup written through generator words (or '1' / 'G'), and '^' an
optional multiplicity.  Element literals use the same terms with signed
integer coefficients ('2*[G/1] - [G/G]').

A complex file is a JSON object with the group, the field, the module
literal per degree and each differential as a row-major list of scalar
strings.  Parsing validates eagerly and reports the offending location.
"""

from __future__ import annotations

import json
import re

import numpy as np

from .complexes import BoundedComplex
from .errors import ParseError, PermchainError
from .ffield import GF, FqField
from .groups import (
    FiniteGroup,
    Subgroup,
    group_from_spec,
    minimal_generators,
    perm_to_cycles,
)
from .invariants import TrivialSourceElement
from .linalg import FqMatrix
from .modules import (
    Character,
    KgModule,
    Summand,
    coset_list,
    direct_sum,
    perm_module,
    trivial_character,
    twist,
)


# -- term level ---------------------------------------------------------------


def format_subgroup(H: Subgroup) -> str:
    G = H.parent
    if H.order == 1:
        return "1"
    if H.order == G.order:
        return "G"
    gens = minimal_generators(G, H.elems)
    return "<" + ",".join(G.word_str(g) for g in gens) + ">"


def parse_subgroup(G: FiniteGroup, text: str, where: str = "") -> Subgroup:
    lat = G.lattice()
    s = text.strip()
    if s == "1":
        return lat.trivial
    if s == "G":
        return lat.full
    if not (s.startswith("<") and s.endswith(">")):
        raise ParseError(f"bad subgroup expression {text!r}", where)
    try:
        gens = [G.element_by_word(w) for w in s[1:-1].split(",") if w.strip()]
    except PermchainError as e:
        raise ParseError(str(e), where)
    return lat.generated_by(gens)


def format_character(char: Character) -> str:
    return "(" + ",".join(char.field.format(v) for v in char.values) + ")"


def parse_character(G: FiniteGroup, fld: FqField, text: str, where: str = "") -> Character:
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise ParseError(f"bad character literal {text!r}", where)
    parts = s[1:-1].split(",")
    if len(parts) != len(G.generators):
        raise ParseError(
            f"character needs {len(G.generators)} generator values", where
        )
    try:
        values = [fld.parse(p) for p in parts]
        return Character(G, fld, values)
    except PermchainError as e:
        raise ParseError(str(e), where)


_TERM_RE = re.compile(
    r"^\s*(?:(?P<coeff>-?\d+)\s*\*\s*)?(?:(?P<char>\([^()]*\))\s*\*\s*)?"
    r"\[G/(?P<sub>[^\]]+)\]\s*(?:\^\s*(?P<mult>\d+))?\s*$"
)


def _split_terms(text: str):
    """Split on top-level +/- (outside parentheses); yields (sign, term)."""
    terms = []
    depth = 0
    cur = ""
    sign = 1
    for ch in text:
        if ch in "()<>":
            depth += 1 if ch in "(<" else -1
        if ch in "+-" and depth == 0 and cur.strip():
            terms.append((sign, cur))
            sign = 1 if ch == "+" else -1
            cur = ""
        elif ch in "+-" and depth == 0 and not cur.strip():
            sign = sign * (1 if ch == "+" else -1)
        else:
            cur += ch
    if cur.strip():
        terms.append((sign, cur))
    return terms


def parse_module_literal(G: FiniteGroup, fld: FqField, text: str, where: str = "") -> KgModule:
    """A direct sum of twisted transitive permutation modules."""
    parts = []
    for sign, term in _split_terms(text):
        if sign < 0:
            raise ParseError("module literals cannot have negative terms", where)
        m = _TERM_RE.match(term)
        if not m:
            raise ParseError(f"bad module term {term.strip()!r}", where)
        if m.group("coeff"):
            raise ParseError("module terms use '^' for multiplicity", where)
        char = (
            parse_character(G, fld, m.group("char"), where)
            if m.group("char")
            else trivial_character(G, fld)
        )
        sub = parse_subgroup(G, m.group("sub"), where)
        mult = int(m.group("mult") or 1)
        for _ in range(mult):
            parts.append(twist(perm_module(G, sub, fld), char))
    if not parts:
        raise ParseError("empty module literal", where)
    return direct_sum(parts)


def format_module(M: KgModule) -> str:
    """Canonical literal for a labeled module (summands grouped)."""
    if M.labels is None:
        raise PermchainError("cannot print an unlabeled module")
    groups = {}
    order = []
    for s in M.labels:
        key = (s.character._elem_values, s.subgroup.elems)
        if key not in groups:
            groups[key] = [s, 0]
            order.append(key)
        groups[key][1] += 1
    terms = []
    for key in order:
        s, mult = groups[key]
        t = ""
        if not s.character.is_trivial():
            t += format_character(s.character) + "*"
        t += f"[G/{format_subgroup(s.subgroup)}]"
        if mult > 1:
            t += f"^{mult}"
        terms.append(t)
    return " + ".join(terms)


def parse_element_literal(
    G: FiniteGroup, fld: FqField, text: str, where: str = ""
) -> TrivialSourceElement:
    out = TrivialSourceElement(G, fld)
    for sign, term in _split_terms(text):
        m = _TERM_RE.match(term)
        if not m:
            raise ParseError(f"bad element term {term.strip()!r}", where)
        coeff = sign * int(m.group("coeff") or 1)
        if m.group("mult"):
            coeff *= int(m.group("mult"))
        char = (
            parse_character(G, fld, m.group("char"), where)
            if m.group("char")
            else trivial_character(G, fld)
        )
        sub = parse_subgroup(G, m.group("sub"), where)
        out.add_term(char, sub, coeff)
    return out


def format_element(t: TrivialSourceElement) -> str:
    parts = []
    for char, sub, c in t.items():
        body = ""
        if not char.is_trivial():
            body += format_character(char) + "*"
        body += f"[G/{format_subgroup(sub)}]"
        if c == 1:
            term = body
        elif c == -1:
            term = "-" + body
        else:
            term = f"{c}*{body}"
        if parts and not term.startswith("-"):
            parts.append("+ " + term)
        elif parts:
            parts.append("- " + term[1:])
        else:
            parts.append(term)
    return " ".join(parts) if parts else "0"


# -- labeled basis alignment ---------------------------------------------------


def _label_basis_order(M: KgModule) -> list:
    """For each summand in label order, the actual basis index of each coset
    in the canonical coset order, chosen equivariantly from a base point
    whose stabilizer is exactly the labeled subgroup."""
    from .modules import _element_perms, _summand_perm_action

    G = M.group
    out = []
    for s in M.labels:
        perms = _summand_perm_action(M, s)
        eperms = _element_perms(G, perms)
        base = None
        for k in range(len(s.indices)):
            stab = frozenset(e for e in range(G.order) if eperms[e][k] == k)
            if stab == s.subgroup.elemset:
                base = k
                break
        if base is None:
            raise PermchainError("no base point matches the labeled stabilizer")
        for coset in coset_list(G, s.subgroup):
            out.append(s.indices[eperms[coset[0]][base]])
    return out


def complex_to_obj(C: BoundedComplex) -> dict:
    """JSON-ready form of a labeled complex, in the canonical label basis."""
    fld = C.field
    group_spec = C.group.catalog_name
    if group_spec is None:
        group_spec = ";".join(perm_to_cycles(g) for g in C.group.generators)
    orders = {}
    modules = {}
    for i in C.degrees():
        M = C.module_at(i)
        if M.dim == 0:
            continue
        orders[i] = _label_basis_order(M)
        modules[str(i)] = format_module(M)
    diffs = {}
    for i in range(C.lo + 1, C.hi + 1):
        if i not in orders or (i - 1) not in orders:
            continue
        D = C.diff_at(i).matrix
        re_rows = np.array(orders[i - 1], dtype=int)
        re_cols = np.array(orders[i], dtype=int)
        perm = D.a[np.ix_(re_rows, re_cols)]
        diffs[str(i)] = [fld.format(int(v)) for v in perm.reshape(-1)]
    return {
        "group": group_spec,
        "field": {"p": fld.p, "n": fld.n},
        "lo": C.lo,
        "modules": modules,
        "differentials": diffs,
    }


def complex_from_obj(obj: dict) -> BoundedComplex:
    for key in ("group", "field", "modules"):
        if key not in obj:
            raise ParseError(f"missing key {key!r}", "complex")
    try:
        G = group_from_spec(str(obj["group"]))
    except PermchainError as e:
        raise ParseError(str(e), "complex.group")
    fspec = obj["field"]
    try:
        fld = GF(int(fspec["p"]), int(fspec.get("n", 1)))
    except Exception as e:
        raise ParseError(str(e), "complex.field")
    mods_raw = obj["modules"]
    degrees = sorted(int(d) for d in mods_raw)
    if not degrees:
        raise ParseError("no modules given", "complex.modules")
    lo = int(obj.get("lo", degrees[0]))
    if degrees != list(range(degrees[0], degrees[-1] + 1)) or degrees[0] != lo:
        raise ParseError("module degrees must be consecutive from lo", "complex.modules")
    mods = [
        parse_module_literal(G, fld, mods_raw[str(d)], f"complex.modules.{d}")
        for d in degrees
    ]
    diffs = {}
    for key, flat in obj.get("differentials", {}).items():
        i = int(key)
        if not (lo + 1 <= i <= degrees[-1]):
            raise ParseError(f"differential degree {i} out of range", "complex.differentials")
        rows = mods[i - 1 - lo].dim
        cols = mods[i - lo].dim
        if len(flat) != rows * cols:
            raise ParseError(
                f"expected {rows * cols} entries, got {len(flat)}",
                f"complex.differentials.{i}",
            )
        try:
            codes = [fld.parse(str(v)) for v in flat]
        except PermchainError as e:
            raise ParseError(str(e), f"complex.differentials.{i}")
        a = np.array(codes, dtype=np.int16).reshape(rows, cols)
        diffs[i] = FqMatrix(fld, a)
    try:
        return BoundedComplex(G, fld, lo, mods, diffs)
    except PermchainError as e:
        raise ParseError(str(e), "complex")


def load_complex(path: str) -> BoundedComplex:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e}", path)
    except OSError as e:
        raise ParseError(str(e), path)
    return complex_from_obj(obj)


def element_from_obj(obj: dict) -> TrivialSourceElement:
    for key in ("group", "field", "element"):
        if key not in obj:
            raise ParseError(f"missing key {key!r}", "element")
    G = group_from_spec(str(obj["group"]))
    fspec = obj["field"]
    fld = GF(int(fspec["p"]), int(fspec.get("n", 1)))
    return parse_element_literal(G, fld, str(obj["element"]), "element")


def load_element(path: str) -> TrivialSourceElement:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e}", path)
    except OSError as e:
        raise ParseError(str(e), path)
    return element_from_obj(obj)
