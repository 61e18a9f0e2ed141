import itertools
from collections import Counter
from math import gcd

import numpy as np
import pytest

from acgraphs import catalog
from acgraphs.abelian import (
    NotAbelianError,
    abelian_component_id,
    coordinates,
    dg_component_count,
    dg_representative,
    invariant_factors,
    unit_orbit_count,
)
from acgraphs.acgraph import MoveAlphabet, components, decode
from acgraphs.group import abelianization, build_abelian, subgroup_closure


def _order_census(G):
    return Counter(G.element_orders.tolist())


def test_invariant_factor_examples():
    assert invariant_factors(build_abelian([2, 4])).factors == [2, 4]
    assert invariant_factors(build_abelian([2, 3])).factors == [6]
    assert invariant_factors(abelianization(catalog.get("S3"))[0]).factors == [2]
    assert invariant_factors(build_abelian([1])).factors == []
    with pytest.raises(NotAbelianError):
        invariant_factors(catalog.get("S3"))


@pytest.mark.parametrize("factors", [[2], [6], [2, 2], [2, 3], [4, 6], [2, 2, 4], [3, 9], [2, 6, 10], [12, 18],
                                     [5, 5], [3, 3, 3], [8, 4, 2]])
def test_invariant_factors_structure(factors):
    A = build_abelian(factors)
    inv = invariant_factors(A)
    assert int(np.prod(inv.factors)) == A.order
    assert all(b % a == 0 for a, b in zip(inv.factors, inv.factors[1:]))
    assert all(m >= 2 for m in inv.factors)
    assert subgroup_closure(A, inv.gens) == set(range(A.order))
    cyclic = [subgroup_closure(A, [g]) for g in inv.gens]
    assert [len(c) for c in cyclic] == inv.factors
    for i, c in enumerate(cyclic):
        others = subgroup_closure(A, [g for j, g in enumerate(inv.gens) if j != i])
        assert c & others == {0}
    # element-order census identifies a finite abelian group up to isomorphism
    assert _order_census(A) == _order_census(build_abelian(inv.factors))


def test_coordinates_roundtrip():
    A = build_abelian([2, 6, 12])
    inv = invariant_factors(A)
    C = coordinates(inv)
    for x in range(A.order):
        y = 0
        for g, e in zip(inv.gens, C[x]):
            y = A.multiply(y, A.power(g, int(e)))
        assert y == x


def test_component_count_formula():
    assert dg_component_count(invariant_factors(build_abelian([5, 5])), 2) == 2
    assert dg_component_count(invariant_factors(build_abelian([3, 3, 3])), 4) == 1
    assert dg_component_count(invariant_factors(build_abelian([2, 2])), 2) == 1
    with pytest.raises(ValueError):
        dg_component_count(invariant_factors(build_abelian([5, 5])), 1)
    with pytest.raises(ValueError):
        dg_component_count(invariant_factors(build_abelian([3, 3, 3])), 2)
    assert [unit_orbit_count(m) for m in (1, 2, 3, 4, 5, 7, 8, 12)] == [1, 1, 1, 1, 2, 3, 2, 2]


def test_representatives_and_ids():
    inv = invariant_factors(build_abelian([5, 5]))
    r1, r2, r4 = (dg_representative(inv, lam) for lam in (1, 2, 4))
    assert r1 == tuple(inv.gens)
    assert abelian_component_id(inv, r1) != abelian_component_id(inv, r2)
    assert abelian_component_id(inv, r1) == abelian_component_id(inv, r4)
    with pytest.raises(ValueError):
        dg_representative(inv, 5)
    with pytest.raises(ValueError):
        abelian_component_id(inv, (0, inv.gens[1]))
    z2 = invariant_factors(build_abelian([2]))
    assert len({abelian_component_id(z2, t) for t in [(1, 0), (0, 1), (1, 1)]}) == 1


MATRIX_ABELIAN = [[2], [3], [4], [6], [2, 2], [5, 5], [2, 4], [3, 3], [4, 4], [2, 2, 2], [3, 3, 3], [2, 6],
                  [7, 7], [3, 6], [9, 9], [10, 10]]


@pytest.mark.parametrize("factors", MATRIX_ABELIAN)
def test_id_count_matches_formula(factors):
    A = build_abelian(factors)
    inv = invariant_factors(A)
    for k in (2, 3):
        if k < inv.d or A.order**k > 2_000_000:
            continue
        T = inv.table(k)
        assert T.component_count == dg_component_count(inv, k)
        if k == inv.d:
            m = inv.factors[0]
            transversal = sorted({min(u, m - u) for u in range(1, m) if gcd(u, m) == 1})
            hit = [abelian_component_id(inv, dg_representative(inv, lam)) for lam in transversal]
            assert sorted(hit) == list(range(T.component_count))


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6, 7, 8, 9, 10, 12])
def test_determinant_oracle_on_homocyclic_pairs(m):
    # +-det of the exponent matrix is constant on components and separates them
    A = build_abelian([m, m])
    T = components(A, 2, MoveAlphabet.for_group(A, "none"))
    E = np.array([decode(int(c), A.order, 2) for c in T.codes])
    coords = np.array(A.elements)            # raw (a, b) exponent pairs
    a, b = coords[E[:, 0]], coords[E[:, 1]]
    det = (a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]) % m
    key = np.minimum(det, (m - det) % m)
    pairs = set(zip(T.ids.tolist(), key.tolist()))
    assert len(pairs) == T.component_count == len(set(key.tolist()))
    units = [u for u in range(1, m) if gcd(u, m) == 1]
    assert T.component_count == len({min(u, m - u) for u in units})


def test_cyclic_single_entry_tuples():
    # k = d = 1 is only explored exhaustively: generators of Z/m split into {g, g^-1} classes
    for m in (2, 5, 7, 9):
        A = build_abelian([m])
        T = components(A, 1, MoveAlphabet.for_group(A, "none"))
        gens = [u for u in range(1, m) if gcd(u, m) == 1]
        assert T.vertex_count == len(gens)
        assert T.component_count == len({min(u, m - u) for u in gens})


def test_table_is_reused():
    inv = invariant_factors(build_abelian([3, 3]))
    assert inv.table(2) is inv.table(2)
    assert all(abelian_component_id(inv, decode(int(c), 9, 2)) == i
               for c, i in itertools.islice(zip(inv.table(2).codes, inv.table(2).ids), 30))
