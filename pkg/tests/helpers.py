"""Shared test utilities: independent oracles and random generators.

The oracles here deliberately avoid the library code paths they are used to
check: subgroup enumeration by pairwise closure, fixed-point dimensions by
orbit counting, split detection by solving the splitting equation, naive
matrix products by schoolbook scalar arithmetic.
"""

from __future__ import annotations

import numpy as np

from permchain.ffield import FqField, FqScalar
from permchain.groups import FiniteGroup, Subgroup, pmul
from permchain.linalg import FqMatrix, hstack, kernel_basis, rank, solve_matrix, vstack
from permchain.modules import (
    Character,
    KgModule,
    ModuleMap,
    all_characters,
    direct_sum,
    hom_space_basis,
    perm_module,
    twist,
)
from permchain.complexes import BoundedComplex


# -- independent group-theory oracles ----------------------------------------


def oracle_subgroup_sets(G: FiniteGroup):
    """All subgroups generated by at most two elements, by raw closure on
    permutations.  Complete for every group of order < 16 here (and for the
    specific groups it is used on)."""
    elems = list(G.elements)
    ident = tuple(range(G.degree))
    found = set()

    def close(gens):
        got = {ident}
        frontier = [ident]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = pmul(g, x)
                if y not in got:
                    got.add(y)
                    frontier.append(y)
        return frozenset(got)

    for a in elems:
        found.add(close([a]))
        for b in elems:
            found.add(close([a, b]))
    return found


def oracle_mobius(poset_sets, A, B):
    """Recursive Mobius value on a poset of frozensets under inclusion."""
    if A == B:
        return 1
    total = 0
    for C in poset_sets:
        if A <= C < B:
            total += oracle_mobius(poset_sets, A, C)
    return -total


def oracle_orbit_count(G: FiniteGroup, P: Subgroup, cosets) -> int:
    """Number of P-orbits on a list of cosets (each a tuple of elements)."""
    index_of = {}
    for i, c in enumerate(cosets):
        for x in c:
            index_of[x] = i
    seen = set()
    orbits = 0
    for i, c in enumerate(cosets):
        if i in seen:
            continue
        orbits += 1
        stack = [i]
        seen.add(i)
        while stack:
            j = stack.pop()
            rep = cosets[j][0]
            for p in P.elems:
                k = index_of[G.mul(p, rep)]
                if k not in seen:
                    seen.add(k)
                    stack.append(k)
    return orbits


# -- independent linear algebra oracles ---------------------------------------


def oracle_matmul(A: FqMatrix, B: FqMatrix) -> FqMatrix:
    """Schoolbook product using scalar arithmetic only."""
    f = A.field
    out = FqMatrix.zeros(f, A.rows, B.cols)
    for i in range(A.rows):
        for j in range(B.cols):
            acc = FqScalar(f, 0)
            for k in range(A.cols):
                acc = acc + A.entry(i, k) * B.entry(k, j)
            out.a[i, j] = acc.code
    return out


def oracle_kernel_count(M: FqMatrix) -> int:
    """Exhaustive count of kernel vectors (tiny matrices only)."""
    f = M.field
    n = M.cols
    count = 0
    for code in range(f.q ** n):
        vec = [(code // f.q ** i) % f.q for i in range(n)]
        v = FqMatrix(f, np.array(vec, dtype=np.int16).reshape(n, 1))
        if (M @ v).is_zero():
            count += 1
    return count


# -- split detection oracle -----------------------------------------------------


def oracle_split_injective(fmap: ModuleMap) -> bool:
    """Injective plus a solution of f = f s f, found by linear algebra."""
    if rank(fmap.matrix) != fmap.source.dim:
        return False
    return _splitting_exists(fmap)


def oracle_split_surjective(fmap: ModuleMap) -> bool:
    if rank(fmap.matrix) != fmap.target.dim:
        return False
    return _splitting_exists(fmap)


def _splitting_exists(fmap: ModuleMap) -> bool:
    """Solvability of the equivariant equation f s f = f for s: N -> M."""
    M, N = fmap.source, fmap.target
    f = fmap.matrix
    fld = f.field
    m, n = M.dim, N.dim
    eyem = FqMatrix.identity(fld, m)
    eyen = FqMatrix.identity(fld, n)
    rows = []
    rhs = []
    for gi in range(len(M.gen_mats)):
        # s A^N_g - A^M_g s = 0, vectorized row-major
        rows.append(eyem.kron(N.gen_mats[gi].T) - M.gen_mats[gi].kron(eyen))
        rhs.append(FqMatrix.zeros(fld, m * n, 1))
    rows.append(f.kron(f.T))
    rhs.append(FqMatrix(fld, f.a.reshape(-1, 1).copy()))
    return solve_matrix(vstack(rows), vstack(rhs)) is not None


# -- random generators ------------------------------------------------------------


def random_matrix(rng, fld: FqField, rows: int, cols: int) -> FqMatrix:
    return FqMatrix(fld, rng.integers(0, fld.q, size=(rows, cols), dtype=np.int16))


def random_labeled_module(rng, G: FiniteGroup, fld: FqField, max_summands=3, twists=False):
    lat = G.lattice()
    reps = lat.class_reps
    chars = all_characters(G, fld) if twists else None
    count = int(rng.integers(1, max_summands + 1))
    parts = []
    for _ in range(count):
        H = reps[int(rng.integers(0, len(reps)))]
        m = perm_module(G, H, fld)
        if chars:
            m = twist(m, chars[int(rng.integers(0, len(chars)))])
        parts.append(m)
    return direct_sum(parts)


def random_hom(rng, M: KgModule, N: KgModule):
    basis = hom_space_basis(M, N)
    if not basis:
        return ModuleMap(M, N, FqMatrix.zeros(M.field, N.dim, M.dim))
    fld = M.field
    total = FqMatrix.zeros(fld, N.dim, M.dim)
    for b in basis:
        c = int(rng.integers(0, fld.q))
        total = total + b.scale(c)
    return ModuleMap(M, N, total)


def random_complex(rng, G: FiniteGroup, fld: FqField, max_len=4, max_dim=6):
    """A bounded complex of permutation-type modules with random equivariant
    differentials sampled from the solution space of d o d = 0."""
    length = int(rng.integers(1, max_len + 1))
    mods = []
    for _ in range(length):
        m = random_labeled_module(rng, G, fld, max_summands=2)
        while m.dim > max_dim:
            m = random_labeled_module(rng, G, fld, max_summands=1)
        mods.append(m)
    diffs = {}
    prev = None  # previous differential d_i while choosing d_{i+1}
    for i in range(1, length):
        src, dst = mods[i], mods[i - 1]
        basis = hom_space_basis(src, dst)
        if not basis:
            prev = FqMatrix.zeros(fld, dst.dim, src.dim)
            diffs[i] = prev
            continue
        if prev is None or prev.is_zero():
            pick = basis
        else:
            # keep only combinations with prev @ d = 0
            flat = hstack([FqMatrix(fld, (prev @ b).a.reshape(-1, 1)) for b in basis])
            K = kernel_basis(flat)
            pick = []
            for j in range(K.cols):
                combo = FqMatrix.zeros(fld, dst.dim, src.dim)
                for bi, b in enumerate(basis):
                    combo = combo + b.scale(int(K.a[bi, j]))
                pick.append(combo)
        if not pick:
            prev = FqMatrix.zeros(fld, dst.dim, src.dim)
            diffs[i] = prev
            continue
        total = FqMatrix.zeros(fld, dst.dim, src.dim)
        for b in pick:
            total = total + b.scale(int(rng.integers(0, fld.q)))
        prev = total
        diffs[i] = total
    return BoundedComplex(G, fld, 0, mods, diffs)
