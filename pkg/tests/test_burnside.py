from fractions import Fraction

import numpy as np
import pytest

from permchain.burnside import (
    BurnsideElement,
    basis_element,
    burnside_units,
    idempotent,
    inverse_marks,
    mark_table,
    marks,
)
from permchain.errors import TooManyClasses
from permchain.groups import FiniteGroup, catalog, perm_from_cycles


def test_marks_c2():
    C2 = catalog("C2")
    L = C2.lattice()
    free = basis_element(C2, L.trivial)
    assert marks(free) == (2, 0)
    point = basis_element(C2, L.full)
    assert marks(point) == (1, 1)


def test_marks_all_ones_for_point():
    for name in ("D8", "A4"):
        G = catalog(name)
        pt = basis_element(G, G.lattice().full)
        assert all(v == 1 for v in marks(pt))


def test_marks_d8_reflection_coset():
    G = catalog("D8")
    L = G.lattice()
    Hb = L.generated_by([G.element_by_word("b")])
    x = basis_element(G, Hb)
    v = marks(x)
    assert v[Hb.class_id] == 2


def test_mark_table_triangular_structure():
    # the class of the full group fixes exactly the point orbit
    G = catalog("Q8")
    tbl = mark_table(G)
    L = G.lattice()
    gid = L.full.class_id
    assert tbl[gid, gid] == 1
    assert tbl[0, 0] == G.order  # free orbit at the trivial class


def test_idempotent_c2():
    C2 = catalog("C2")
    L = C2.lattice()
    e = idempotent(C2, L.full)
    assert e.coeffs[L.full.class_id] == 1
    assert e.coeffs[L.trivial.class_id] == Fraction(-1, 2)
    assert marks(e) == (0, 1)
    e1 = idempotent(C2, L.trivial)
    assert marks(e1) == (1, 0)


def test_inverse_marks_roundtrip_random():
    rng = np.random.default_rng(101)
    for name in ("C2", "V4", "D8"):
        G = catalog(name)
        c = len(G.lattice().class_reps)
        for _ in range(20):
            coeffs = tuple(int(v) for v in rng.integers(-5, 6, size=c))
            x = BurnsideElement(G, coeffs)
            back = inverse_marks(G, marks(x))
            assert back.coeffs == coeffs


def test_inverse_marks_all_ones():
    for name in ("C4", "A4"):
        G = catalog(name)
        L = G.lattice()
        e = inverse_marks(G, tuple([1] * len(L.class_reps)))
        want = [0] * len(L.class_reps)
        want[L.full.class_id] = 1
        assert list(e.coeffs) == want


def test_product_via_marks_is_integral():
    rng = np.random.default_rng(103)
    G = catalog("D8")
    L = G.lattice()
    reps = L.class_reps
    for _ in range(10):
        a = basis_element(G, reps[int(rng.integers(0, len(reps)))])
        b = basis_element(G, reps[int(rng.integers(0, len(reps)))])
        prod = a * b
        assert prod.is_integral()
        assert marks(prod) == tuple(
            x * y for x, y in zip(marks(a), marks(b))
        )


def test_units_c2():
    C2 = catalog("C2")
    units = burnside_units(C2)
    assert len(units) == 4
    L = C2.lattice()
    target = [0] * 2
    target[L.full.class_id] = 1
    target[L.trivial.class_id] = -1
    assert any(list(u.coeffs) == target for u in units)


def test_units_c3():
    units = burnside_units(catalog("C3"))
    assert len(units) == 2
    vals = {tuple(marks(u)) for u in units}
    assert vals == {(1, 1), (-1, -1)}


def test_units_group_closure():
    for name in ("C2", "V4", "Q8"):
        G = catalog(name)
        units = burnside_units(G)
        mark_set = {marks(u) for u in units}
        for u in units:
            mu = marks(u)
            # self-inverse: the square has all marks one
            assert tuple(a * a for a in mu) == tuple([1] * len(mu))
            for v in units:
                prod = tuple(a * b for a, b in zip(mu, marks(v)))
                assert prod in mark_set


def test_units_too_many_classes():
    # (C2)^5 has far more than 20 subgroup classes
    gens = []
    for i in range(5):
        gens.append(perm_from_cycles(f"({2 * i} {2 * i + 1})", 10))
    G = FiniteGroup(gens)
    assert G.order == 32
    with pytest.raises(TooManyClasses):
        burnside_units(G)
