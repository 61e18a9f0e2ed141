import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from acgraphs import catalog
from acgraphs.config import BudgetExceeded
from acgraphs.group import (
    Automorphism,
    FiniteGroup,
    GroupValidationError,
    NotNormalError,
    OperatorSet,
    abelianization,
    build_abelian,
    build_from_permutations,
    build_from_table,
    center,
    commutator_subgroup,
    d_normal,
    direct_product,
    is_normal_subgroup,
    normal_closure,
    quotient,
    subgroup_closure,
    validate_group,
)
from conftest import SMALL, el


def test_permutation_builder_orders():
    assert build_from_permutations(3, [[1, 2, 0], [1, 0, 2]]).order == 6
    assert build_from_permutations(1, []).order == 1
    A5 = build_from_permutations(5, [[1, 2, 3, 4, 0], [1, 2, 0, 3, 4]])
    assert A5.order == 60
    assert A5.elements[0] == (0, 1, 2, 3, 4)


def test_permutation_builder_rejects_bad_input():
    with pytest.raises(ValueError):
        build_from_permutations(3, [[0, 0, 1]])
    with pytest.raises(BudgetExceeded):
        build_from_permutations(5, [[1, 2, 3, 4, 0], [1, 0, 2, 3, 4]], max_order=100)


def test_abelian_builder():
    assert build_abelian([2]).order == 2
    G = build_abelian([5, 5])
    assert G.order == 25 and len(G.generators) == 2
    assert build_abelian([2, 4]).order == 8


def test_arithmetic_examples(S3):
    t01, c012 = el(S3, "(0 1)"), el(S3, "(0 1 2)")
    assert S3.conjugate(t01, 0) == t01
    assert S3.conjugate(t01, c012) == el(S3, "(1 2)")
    assert build_abelian([5]).invert(2) == 3


def test_conjugate_against_raw_permutations():
    # w^-1 a w under the right action (a*b)[p] = b[a[p]]
    G = catalog.get("S4")
    for a, w in itertools.product(range(G.order), repeat=2):
        pa, pw = G.elements[a], G.elements[w]
        winv = [0] * 4
        for p, q in enumerate(pw):
            winv[q] = p
        expected = tuple(pw[pa[winv[p]]] for p in range(4))
        assert G.elements[G.conjugate(a, w)] == expected


def test_subgroup_closure_examples(S3, A5):
    assert subgroup_closure(S3, [el(S3, "(0 1 2)")]) == {0, el(S3, "(0 1 2)"), el(S3, "(0 2 1)")}
    assert subgroup_closure(S3, []) == {0}
    assert len(subgroup_closure(A5, A5.generators)) == 60


def test_normal_closure_examples(S3):
    assert len(normal_closure(S3, None, [el(S3, "(0 1)")])) == 6
    assert normal_closure(S3, None, [el(S3, "(0 1 2)")]) == {0, el(S3, "(0 1 2)"), el(S3, "(0 2 1)")}
    assert normal_closure(S3, None, [0]) == {0}


def test_commutator_subgroup_examples(S3, A5):
    assert commutator_subgroup(S3) == {0, el(S3, "(0 1 2)"), el(S3, "(0 2 1)")}
    assert commutator_subgroup(catalog.get("Z2xZ4")) == {0}
    assert len(commutator_subgroup(A5)) == 60


def test_quotient_examples(S3):
    Q, phi = quotient(S3, commutator_subgroup(S3))
    assert Q.order == 2
    G = catalog.get("D4")
    Q, phi = quotient(G, [0])
    assert Q.order == G.order and np.array_equal(phi.map, np.arange(G.order))
    Q8 = catalog.get("Q8")
    Z = center(Q8)
    assert len(Z) == 2
    K, _ = quotient(Q8, Z)
    assert K.order == 4 and all(K.element_order(x) == 2 for x in range(1, 4))


def test_quotient_rejects_non_normal(S3):
    with pytest.raises(NotNormalError):
        quotient(S3, [0, el(S3, "(0 1)")])
    with pytest.raises(NotNormalError):
        quotient(S3, [0, el(S3, "(0 1 2)")])


def test_abelianization_examples(S3, A5):
    assert abelianization(S3)[0].order == 2
    assert abelianization(A5)[0].order == 1
    Z6 = catalog.get("Z6")
    A, phi = abelianization(Z6)
    assert A.order == 6 and np.array_equal(phi.map, np.arange(6))


def _brute_d_normal(G, omega=None):
    # no orbit pruning: every tuple of every size
    for t in range(0, len(G.generators) + 1):
        for tup in itertools.product(range(G.order), repeat=t):
            if len(normal_closure(G, omega, tup)) == G.order:
                return t
    raise AssertionError("generators do not normally generate")


def test_d_normal_examples(A5):
    assert d_normal(A5) == 1
    assert d_normal(catalog.get("V4")) == 2
    assert d_normal(build_abelian([1])) == 0


@pytest.mark.parametrize("name", SMALL)
def test_d_normal_matches_unpruned_search(name):
    G = catalog.get(name)
    assert d_normal(G) == _brute_d_normal(G)
    assert d_normal(G) <= len(G.generators)


def test_d_normal_with_operators():
    A = build_abelian([5, 5])
    swap = catalog.swap_automorphism(A)
    # swapping coordinates: (1,0) and its image generate
    assert d_normal(A, OperatorSet(A, (swap,))) == 1
    assert _brute_d_normal(A, OperatorSet(A, (swap,))) == 1


@pytest.mark.parametrize("name", catalog.MATRIX + ("A5xA5", "Z3xZ3xZ3"))
def test_catalog_groups_validate(name):
    G = catalog.get(name)
    validate_group(G)
    assert G.identity == 0 and G.order == len(G.inv)


def test_known_orders():
    orders = {"S3": 6, "D4": 8, "Q8": 8, "A4": 12, "SL(2,3)": 24, "S4": 24, "A5": 60, "SL(2,5)": 120,
              "A5xZ2": 120, "A5xA5": 3600}
    for name, n in orders.items():
        assert catalog.get(name).order == n


def test_validate_detects_non_associative_loop():
    # the smallest non-associative loop: a latin square with identity and x*x = e
    loop = [[0, 1, 2, 3, 4],
            [1, 0, 3, 4, 2],
            [2, 4, 0, 1, 3],
            [3, 2, 4, 0, 1],
            [4, 3, 1, 2, 0]]
    G = build_from_table(loop, generators=[1, 2])
    with pytest.raises(GroupValidationError) as err:
        validate_group(G)
    a, b, c = err.value.triple
    m = np.array(loop)
    assert m[m[a, b], c] != m[a, m[b, c]]
    assert f"({a}, {b}, {c})" in str(err.value)


def test_sampled_associativity_above_bound():
    loop = [[0, 1, 2, 3, 4],
            [1, 0, 3, 4, 2],
            [2, 4, 0, 1, 3],
            [3, 2, 4, 0, 1],
            [4, 3, 1, 2, 0]]
    G = build_from_table(loop, generators=[1, 2])
    with pytest.raises(GroupValidationError):
        validate_group(G, exhaustive_bound=1)


def test_table_builder_relabels_identity():
    # Z3 with identity written as element 2
    table = [[1, 2, 0], [2, 0, 1], [0, 1, 2]]
    G = build_from_table(table)
    validate_group(G)
    assert G.order == 3 and G.is_abelian


def test_direct_product():
    G = direct_product(catalog.get("S3"), catalog.get("Z2"))
    validate_group(G)
    assert G.order == 12
    assert len(center(G)) == 2


def test_automorphism_validation():
    G = catalog.get("Z5xZ5")
    with pytest.raises(ValueError):
        Automorphism(G, np.roll(np.arange(G.order), 1))
    a = catalog.swap_automorphism(G)
    assert np.array_equal(a.perm[a.inverse().perm], np.arange(G.order))


def test_homomorphism_invariants(S3):
    _, phi = abelianization(S3)
    phi.validate()
    assert phi.kernel() == commutator_subgroup(S3)
    assert phi.image() == {0, 1}


def test_table_hash_is_stable():
    a = catalog.get("A4")
    b = build_from_permutations(4, [list(x) for x in (a.elements[g] for g in a.generators)])
    assert a.table_hash == b.table_hash
    assert a.table_hash != catalog.get("SL(2,3)").table_hash


group_names = st.sampled_from(SMALL + ("S4", "A5", "SL(2,3)"))


@given(group_names, st.data())
def test_normal_closure_is_stable(name, data):
    G = catalog.get(name)
    seed = data.draw(st.lists(st.integers(0, G.order - 1), max_size=3))
    N = normal_closure(G, None, seed)
    assert set(seed) <= N
    assert subgroup_closure(G, N) == N
    for h in N:
        for g in G.generators:
            assert G.conjugate(h, g) in N


@given(st.sampled_from([[3, 3], [5, 5], [2, 2], [4, 4]]), st.data())
def test_normal_closure_is_operator_stable(factors, data):
    A = build_abelian(factors)
    omega = OperatorSet(A, (catalog.swap_automorphism(A),))
    seed = data.draw(st.lists(st.integers(0, A.order - 1), max_size=2))
    N = normal_closure(A, omega, seed)
    assert all(int(omega.auto_gens[0].perm[h]) in N for h in N)


@given(group_names, st.data())
def test_quotient_projection(name, data):
    G = catalog.get(name)
    g = data.draw(st.integers(0, G.order - 1))
    N = normal_closure(G, None, [g])
    assert is_normal_subgroup(G, N)
    Q, phi = quotient(G, N)
    phi.validate()
    assert phi.image() == set(range(Q.order))
    assert phi.kernel() == N
    assert Q.order * len(N) == G.order


@pytest.mark.parametrize("name", catalog.MATRIX)
def test_abelianization_commutes(name):
    A, phi = abelianization(catalog.get(name))
    assert A.is_abelian
    assert np.array_equal(A.mul, A.mul.T)


def test_group_is_immutable(S3):
    with pytest.raises(Exception):
        S3.name = "other"
    assert isinstance(S3, FiniteGroup)
