"""Bounded chain complexes of kG-modules.

Differentials go down in degree (d_i: C_i -> C_{i-1}) and d o d = 0 is
checked eagerly at construction, as are the chain-map conditions - silent
nonsense is worse than a loud failure in exact arithmetic.

Homology carries explicit subquotient witnesses so that group actions on
homology (and in particular the degree-one characters of one-dimensional
homology) are computed exactly, never up to isomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional

from .errors import (
    IncompatibleHandles,
    NotChainMap,
    NotEndotrivial,
    PermchainError,
)
from .ffield import FqField
from .groups import FiniteGroup, Subgroup
from .linalg import (
    FqMatrix,
    hstack,
    image_basis,
    kernel_basis,
    quotient_space,
    solve_matrix,
    vstack,
)
from .modules import (
    BrauerData,
    Character,
    KgModule,
    ModuleMap,
    Summand,
    brauer_quotient,
    brauer_quotient_map,
    character_warning,
    direct_sum,
    dual,
    one_dim_module,
    tensor,
    trivial_character,
    twist,
    zero_module,
)


class BoundedComplex:
    """Degree-indexed modules with differentials d_i: C_i -> C_{i-1}."""

    def __init__(self, group: FiniteGroup, field: FqField, lo: int, modules, diffs):
        self.group = group
        self.field = field
        self.lo = lo
        self.mods = list(modules)
        if not self.mods:
            self.mods = [zero_module(group, field)]
        for m in self.mods:
            if m.group is not group or m.field != field:
                raise IncompatibleHandles("component over the wrong group or field")
        self.hi = lo + len(self.mods) - 1
        self.diffs: Dict[int, ModuleMap] = {}
        for i, d in dict(diffs).items():
            if not (self.lo + 1 <= i <= self.hi):
                raise PermchainError(f"differential at degree {i} out of range")
            if isinstance(d, ModuleMap):
                self.diffs[i] = d
            else:
                self.diffs[i] = ModuleMap(self.module_at(i), self.module_at(i - 1), d)
        for i in range(self.lo + 1, self.hi + 1):
            if i not in self.diffs:
                src, dst = self.module_at(i), self.module_at(i - 1)
                self.diffs[i] = ModuleMap(src, dst, FqMatrix.zeros(field, dst.dim, src.dim))
        for i in range(self.lo + 2, self.hi + 1):
            comp = self.diffs[i - 1].matrix @ self.diffs[i].matrix
            if not comp.is_zero():
                raise PermchainError(f"d^2 != 0 between degrees {i} and {i - 2}")

    def module_at(self, i: int) -> KgModule:
        if self.lo <= i <= self.hi:
            return self.mods[i - self.lo]
        return zero_module(self.group, self.field)

    def diff_at(self, i: int) -> ModuleMap:
        d = self.diffs.get(i)
        if d is not None:
            return d
        src, dst = self.module_at(i), self.module_at(i - 1)
        return ModuleMap(src, dst, FqMatrix.zeros(self.field, dst.dim, src.dim))

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def dims(self) -> dict:
        return {i: self.module_at(i).dim for i in self.degrees()}

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * self.module_at(i).dim for i in self.degrees())

    def length(self) -> int:
        degs = [i for i in self.degrees() if self.module_at(i).dim > 0]
        return (max(degs) - min(degs) + 1) if degs else 0

    def has_labels(self) -> bool:
        return all(
            self.module_at(i).labels is not None
            for i in self.degrees()
            if self.module_at(i).dim > 0
        )

    def __repr__(self):
        dims = " ".join(f"{i}:{self.module_at(i).dim}" for i in self.degrees())
        return f"BoundedComplex({self.group.describe()}, F{self.field.q}, {dims})"


def module_complex(M: KgModule, degree: int = 0) -> BoundedComplex:
    return BoundedComplex(M.group, M.field, degree, [M], {})


def trivial_complex(G: FiniteGroup, field: FqField, degree: int = 0) -> BoundedComplex:
    from .modules import trivial_module

    return module_complex(trivial_module(G, field), degree)


# -- algebra on complexes -----------------------------------------------------


def tensor_complex(C: BoundedComplex, D: BoundedComplex) -> BoundedComplex:
    """Tensor product with the usual sign: d(x (x) y) uses c on the left
    factor and (-1)^i id (x) d on the right."""
    if C.group is not D.group or C.field != D.field:
        raise IncompatibleHandles("tensor of complexes over different handles")
    G, f = C.group, C.field
    lo, hi = C.lo + D.lo, C.hi + D.hi

    def blocks(n):
        return [
            (i, n - i)
            for i in range(C.lo, C.hi + 1)
            if D.lo <= n - i <= D.hi
            and C.module_at(i).dim > 0
            and D.module_at(n - i).dim > 0
        ]

    mods = {}
    for n in range(lo, hi + 1):
        bl = blocks(n)
        mods[n] = (
            direct_sum([tensor(C.module_at(i), D.module_at(j)) for i, j in bl])
            if bl
            else zero_module(G, f)
        )

    diffs = {}
    for n in range(lo + 1, hi + 1):
        src_bl, dst_bl = blocks(n), blocks(n - 1)
        if not src_bl or not dst_bl:
            continue
        src_off = {}
        acc = 0
        for i, j in src_bl:
            src_off[(i, j)] = acc
            acc += C.module_at(i).dim * D.module_at(j).dim
        dst_off = {}
        acc = 0
        for i, j in dst_bl:
            dst_off[(i, j)] = acc
            acc += C.module_at(i).dim * D.module_at(j).dim
        mat = FqMatrix.zeros(f, mods[n - 1].dim, mods[n].dim)
        for i, j in src_bl:
            ci, dj = C.module_at(i), D.module_at(j)
            if (i - 1, j) in dst_off:
                block = C.diff_at(i).matrix.kron(FqMatrix.identity(f, dj.dim))
                r, c = dst_off[(i - 1, j)], src_off[(i, j)]
                mat.a[r : r + block.rows, c : c + block.cols] = block.a
            if (i, j - 1) in dst_off:
                block = FqMatrix.identity(f, ci.dim).kron(D.diff_at(j).matrix)
                if i % 2:
                    block = -block
                r, c = dst_off[(i, j - 1)], src_off[(i, j)]
                mat.a[r : r + block.rows, c : c + block.cols] = block.a
        diffs[n] = mat
    return BoundedComplex(G, f, lo, [mods[n] for n in range(lo, hi + 1)], diffs)


def dual_complex(C: BoundedComplex) -> BoundedComplex:
    """Degree -i carries the dual of C_i; the differential picks up the sign
    (-1)^(n+1) when mapping out of degree n."""
    G, f = C.group, C.field
    lo, hi = -C.hi, -C.lo
    mods = [dual(C.module_at(-n)) for n in range(lo, hi + 1)]
    diffs = {}
    for n in range(lo + 1, hi + 1):
        d = C.diff_at(-n + 1)  # C_{-n+1} -> C_{-n}
        mat = d.matrix.T
        if (n + 1) % 2:
            mat = -mat
        diffs[n] = mat
    return BoundedComplex(G, f, lo, mods, diffs)


def shift(C: BoundedComplex, k: int) -> BoundedComplex:
    """Degree shift by k; differentials are scaled by (-1)^k so that the
    result agrees with tensoring by the one-term complex k[k]."""
    mods = [C.module_at(i) for i in C.degrees()]
    diffs = {}
    for i in range(C.lo + 1, C.hi + 1):
        m = C.diff_at(i).matrix
        diffs[i + k] = -m if k % 2 else m
    return BoundedComplex(C.group, C.field, C.lo + k, mods, diffs)


def twist_complex(C: BoundedComplex, char: Character) -> BoundedComplex:
    mods = [twist(C.module_at(i), char) for i in C.degrees()]
    diffs = {i: C.diff_at(i).matrix for i in range(C.lo + 1, C.hi + 1)}
    return BoundedComplex(C.group, C.field, C.lo, mods, diffs)


@dataclass
class ChainMap:
    source: BoundedComplex
    target: BoundedComplex
    components: Dict[int, ModuleMap]

    def __post_init__(self):
        if (
            self.source.group is not self.target.group
            or self.source.field != self.target.field
        ):
            raise IncompatibleHandles("chain map between incompatible complexes")
        lo = min(self.source.lo, self.target.lo)
        hi = max(self.source.hi, self.target.hi)
        for i in range(lo, hi + 1):
            fi = self.component(i)
            fprev = self.component(i - 1)
            lhs = self.target.diff_at(i).matrix @ fi.matrix
            rhs = fprev.matrix @ self.source.diff_at(i).matrix
            if lhs != rhs:
                raise NotChainMap(f"square at degree {i} does not commute")

    def component(self, i: int) -> ModuleMap:
        c = self.components.get(i)
        if c is not None:
            return c
        s, t = self.source.module_at(i), self.target.module_at(i)
        return ModuleMap(s, t, FqMatrix.zeros(self.source.field, t.dim, s.dim))


def mapping_cone(f: ChainMap) -> BoundedComplex:
    """cone(f)_n = source_{n-1} (+) target_n with d(c, d) = (-dc, dd - fc)."""
    C, D = f.source, f.target
    G, fld = C.group, C.field
    lo = min(C.lo + 1, D.lo)
    hi = max(C.hi + 1, D.hi)
    mods = {}
    for n in range(lo, hi + 1):
        parts = []
        if C.module_at(n - 1).dim > 0:
            parts.append(C.module_at(n - 1))
        if D.module_at(n).dim > 0:
            parts.append(D.module_at(n))
        mods[n] = direct_sum(parts) if parts else zero_module(G, fld)
    diffs = {}
    for n in range(lo + 1, hi + 1):
        csrc, dsrc = C.module_at(n - 1).dim, D.module_at(n).dim
        cdst, ddst = C.module_at(n - 2).dim, D.module_at(n - 1).dim
        if csrc + dsrc == 0 or cdst + ddst == 0:
            continue
        mat = FqMatrix.zeros(fld, cdst + ddst, csrc + dsrc)
        if cdst and csrc:
            mat.a[:cdst, :csrc] = (-C.diff_at(n - 1).matrix).a
        if ddst and csrc:
            mat.a[cdst:, :csrc] = (-f.component(n - 1).matrix).a
        if ddst and dsrc:
            mat.a[cdst:, csrc:] = D.diff_at(n).matrix.a
        diffs[n] = mat
    return BoundedComplex(G, fld, lo, [mods[n] for n in range(lo, hi + 1)], diffs)


# -- homology -----------------------------------------------------------------


@dataclass
class HomologyData:
    """H_i = ker d_i / im d_{i+1} with an explicit ambient witness basis."""

    module: KgModule
    witness: FqMatrix  # C_i-coordinates of homology basis representatives
    cycles: FqMatrix
    projection: FqMatrix  # cycle coordinates -> homology coordinates

    @property
    def dim(self) -> int:
        return self.module.dim


def homology_at(C: BoundedComplex, i: int) -> HomologyData:
    G, f = C.group, C.field
    Mi = C.module_at(i)
    if Mi.dim == 0:
        z = zero_module(G, f)
        e = FqMatrix.zeros(f, 0, 0)
        return HomologyData(z, e, e, e)
    Z = kernel_basis(C.diff_at(i).matrix)
    B = C.diff_at(i + 1).matrix
    Bb = image_basis(B) if B.cols else FqMatrix.zeros(f, Mi.dim, 0)
    W = solve_matrix(Z, Bb)
    if W is None:
        raise PermchainError("boundaries are not cycles")
    section, proj = quotient_space(FqMatrix.identity(f, Z.cols), W)
    hdim = proj.rows
    mats = []
    for gi in range(len(G.generators)):
        acted = Mi.gen_mats[gi] @ (Z @ section)
        coords = solve_matrix(Z, acted)
        if coords is None:
            raise PermchainError("action does not preserve cycles")
        mats.append(proj @ coords)
    mod = KgModule(G, f, mats, labels=None, check=False)
    return HomologyData(mod, Z @ section, Z, proj)


def homology(C: BoundedComplex) -> Dict[int, HomologyData]:
    return {i: homology_at(C, i) for i in C.degrees()}


def homology_dims(C: BoundedComplex) -> dict:
    return {i: h.dim for i, h in homology(C).items() if h.dim}


# -- Brauer construction on complexes -----------------------------------------


class BrauerComplex:
    """Degreewise Brauer quotient of a complex, over N_G(P)/P."""

    def __init__(self, C: BoundedComplex, P: Subgroup):
        datas = {i: brauer_quotient(C.module_at(i), P) for i in C.degrees()}
        mods = [datas[i].module for i in C.degrees()]
        ctx = datas[C.lo].ctx
        diffs = {}
        for i in range(C.lo + 1, C.hi + 1):
            g = brauer_quotient_map(C.diff_at(i), P, src=datas[i], dst=datas[i - 1])
            diffs[i] = g
        self.complex = BoundedComplex(ctx.quotient_group, C.field, C.lo, mods, diffs)
        self.datas = datas
        self.ctx = ctx


def brauer_complex(C: BoundedComplex, P: Subgroup) -> BoundedComplex:
    return BrauerComplex(C, P).complex


# -- endotriviality and the invariant -----------------------------------------


@dataclass
class XiEntry:
    subgroup: Subgroup
    h: int
    character: Character  # on N_G(P)/P
    ctx: object

    def char_values(self):
        return self.character.values


class XiInvariant:
    """Per conjugacy class of p-subgroups: the degree of the unique nonzero
    local homology and the degree-one character the normalizer quotient
    induces on it.  A complete homotopy invariant on endotrivial complexes."""

    def __init__(self, group: FiniteGroup, field: FqField, entries):
        self.group = group
        self.field = field
        self.lattice = group.lattice()
        self.entries = dict(entries)  # class_id -> XiEntry

    def class_reps(self):
        return [self.entries[c].subgroup for c in sorted(self.entries)]

    def h_mark(self, P: Subgroup) -> int:
        return self.entries[P.class_id].h

    def character(self, P: Subgroup) -> Character:
        return self.entries[P.class_id].character

    def value_at(self, X: Subgroup, g: int):
        """(h, character code) at an arbitrary p-subgroup X and g in N_G(X),
        transported from the class representative by conjugation."""
        e = self.entries[X.class_id]
        G = self.group
        c = X.conj_to_rep  # X = c . rep . c^{-1}
        moved = G.mul(G.inv(c), G.mul(g, c))
        q = e.ctx.project_from_g(moved)
        return e.h, e.character.value_code(q)

    def __add__(self, other: "XiInvariant") -> "XiInvariant":
        if self.group is not other.group or self.field != other.field:
            raise IncompatibleHandles("invariants over different handles")
        out = {}
        for cid, e in self.entries.items():
            o = other.entries[cid]
            out[cid] = XiEntry(e.subgroup, e.h + o.h, e.character * o.character, e.ctx)
        return XiInvariant(self.group, self.field, out)

    def __neg__(self) -> "XiInvariant":
        out = {
            cid: XiEntry(e.subgroup, -e.h, e.character.inverse(), e.ctx)
            for cid, e in self.entries.items()
        }
        return XiInvariant(self.group, self.field, out)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, XiInvariant):
            return NotImplemented
        if self.group is not other.group or set(self.entries) != set(other.entries):
            return False
        for cid, e in self.entries.items():
            o = other.entries[cid]
            if e.h != o.h or e.character != o.character:
                return False
        return True

    def is_trivial(self) -> bool:
        return all(e.h == 0 and e.character.is_trivial() for e in self.entries.values())

    def h_table(self) -> dict:
        return {cid: e.h for cid, e in self.entries.items()}

    def __repr__(self):
        parts = ", ".join(
            f"[{e.subgroup.order}]:{e.h}" for _, e in sorted(self.entries.items())
        )
        return f"XiInvariant({parts})"


@dataclass
class EndotrivialReport:
    ok: bool
    violations: dict  # class_id -> list of (degree, dim) of nonzero homology

    def __bool__(self):
        return self.ok


def endotrivial_report(C: BoundedComplex) -> EndotrivialReport:
    """Local homology must be one-dimensional and concentrated in a single
    degree at every conjugacy class of p-subgroups."""
    lat = C.group.lattice()
    violations = {}
    for P in lat.p_class_reps(C.field.p):
        local = brauer_complex(C, P)
        degs = [(i, h.dim) for i, h in homology(local).items() if h.dim]
        if len(degs) != 1 or degs[0][1] != 1:
            violations[P.class_id] = degs
    return EndotrivialReport(not violations, violations)


def is_endotrivial(C: BoundedComplex) -> bool:
    return endotrivial_report(C).ok


def xi(C: BoundedComplex) -> XiInvariant:
    """h-marks and local homology characters across [s_p(G)]."""
    character_warning(C.group, C.field)
    lat = C.group.lattice()
    entries = {}
    violations = {}
    for P in lat.p_class_reps(C.field.p):
        bc = BrauerComplex(C, P)
        local = bc.complex
        hom = homology(local)
        degs = [(i, h.dim) for i, h in hom.items() if h.dim]
        if len(degs) != 1 or degs[0][1] != 1:
            violations[P.class_id] = degs
            continue
        hdeg = degs[0][0]
        hd = hom[hdeg]
        Q = local.group
        values = []
        for gi in range(len(Q.generators)):
            m = hd.module.gen_mats[gi]
            values.append(int(m.a[0, 0]))
        if any(v == 0 for v in values):
            raise PermchainError("homology action is not invertible")
        entries[P.class_id] = XiEntry(P, hdeg, Character(Q, C.field, values), bc.ctx)
    if violations:
        raise NotEndotrivial("complex is not endotrivial", report=violations)
    return XiInvariant(C.group, C.field, entries)


def homotopy_equivalent_endotrivial(C: BoundedComplex, D: BoundedComplex) -> bool:
    """Equality of the complete invariant decides homotopy equivalence for
    endotrivial complexes."""
    return xi(C) == xi(D)


# -- restriction / inflation on complexes -------------------------------------


def restrict_complex(C: BoundedComplex, H: Subgroup) -> BoundedComplex:
    from .modules import restrict

    mods = [restrict(C.module_at(i), H) for i in C.degrees()]
    diffs = {i: C.diff_at(i).matrix for i in range(C.lo + 1, C.hi + 1)}
    return BoundedComplex(mods[0].group, C.field, C.lo, mods, diffs)


def inflate_complex(C: BoundedComplex, quot) -> BoundedComplex:
    from .modules import inflate

    mods = [inflate(C.module_at(i), quot) for i in C.degrees()]
    diffs = {i: C.diff_at(i).matrix for i in range(C.lo + 1, C.hi + 1)}
    return BoundedComplex(quot.source, C.field, C.lo, mods, diffs)
