import itertools
from collections import deque

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from acgraphs import catalog
from acgraphs._pykernels import moved_entries
from acgraphs.abelian import invariant_factors
from acgraphs.acgraph import (
    Certificate,
    CertificateError,
    ComponentTable,
    MoveAlphabet,
    MoveSpec,
    NotInNk,
    SearchInconclusive,
    apply_move,
    components,
    decode,
    encode,
    enumerate_nk,
    equivalent,
    is_n_generating,
    lift_equivalence_check,
    neighbors,
    nk_codes,
    project_tuple,
)
from acgraphs.config import BudgetExceeded
from acgraphs.group import (
    Automorphism,
    Homomorphism,
    OperatorSet,
    abelianization,
    build_abelian,
    normal_closure,
    quotient,
)
from conftest import SMALL, el

MATRIX = catalog.MATRIX


def random_tuple_in_nk(G, k, rng, omega=None):
    while True:
        t = tuple(int(x) for x in rng.integers(0, G.order, size=k))
        if is_n_generating(t, G, omega):
            return t


def random_certificate(alphabet, U, length, rng):
    specs = alphabet.move_specs(len(U))
    moves = [specs[int(i)] for i in rng.integers(0, len(specs), size=length)]
    t = tuple(U)
    for m in moves:
        t = apply_move(t, m, alphabet)
    return Certificate(tuple(U), t, moves)


def bfs_partition(G, k, alphabet):
    """Component labels by plain BFS over apply_move, independent of the kernels."""
    label = {}
    for t in enumerate_nk(G, k, alphabet.operator):
        if t in label:
            continue
        cid = len(set(label.values()))
        label[t] = cid
        queue = deque([t])
        while queue:
            x = queue.popleft()
            for y in neighbors(x, alphabet):
                if y not in label:
                    label[y] = cid
                    queue.append(y)
    return label


# ---------------------------------------------------------------- moves

def test_apply_move_examples(S3):
    Z6 = catalog.get("Z6")
    al6 = MoveAlphabet.for_group(Z6)
    assert apply_move((2, 3), MoveSpec("RightMult", 0, 1, 1), al6) == (5, 3)
    al = MoveAlphabet.for_group(S3)
    t = (el(S3, "(0 1)"), 0)
    once = apply_move(t, MoveSpec("Invert", 0), al)
    assert apply_move(once, MoveSpec("Invert", 0), al) == t
    c = el(S3, "(0 1 2)")
    assert apply_move(t, MoveSpec("Conjugate", 0, w=c), al) == (el(S3, "(1 2)"), 0)


def test_move_kinds_against_group_arithmetic(A5, rng):
    al = MoveAlphabet.for_group(A5, "all")
    for _ in range(200):
        a, b = (int(x) for x in rng.integers(0, 60, size=2))
        w = int(rng.integers(0, 60))
        assert apply_move((a, b), MoveSpec("RightMult", 0, 1, -1), al)[0] == A5.multiply(a, A5.invert(b))
        assert apply_move((a, b), MoveSpec("LeftMult", 1, 0, 1), al)[1] == A5.multiply(a, b)
        assert apply_move((a, b), MoveSpec("Conjugate", 1, w=w), al)[1] == A5.conjugate(b, w)


def test_malformed_moves(S3):
    al = MoveAlphabet.for_group(S3)
    with pytest.raises(ValueError):
        MoveSpec("RightMult", 0, 0)
    with pytest.raises(ValueError):
        MoveSpec("Shuffle", 0)
    with pytest.raises(ValueError):
        MoveSpec("Conjugate", 0)
    with pytest.raises(ValueError):
        apply_move((1, 2), MoveSpec("RightMult", 0, 2), al)
    with pytest.raises(ValueError):
        apply_move((1, 2), MoveSpec("Conjugate", 0, w=el(S3, "(1 2)")), al)   # not in S u S^-1


def test_move_serialisation():
    m = MoveSpec("RightMult", 0, 1, -1)
    assert m.to_dict() == {"kind": "RightMult", "i": 0, "j": 1, "sign": -1}
    for m in (m, MoveSpec("Invert", 2), MoveSpec("Conjugate", 1, w=4), MoveSpec("Conjugate", 0, sign=-1, auto=0)):
        assert MoveSpec.from_dict(m.to_dict()) == m


def test_alphabet_closes_under_inverses(A5):
    al = MoveAlphabet.for_group(A5)
    S = set(al.conjugator_elements)
    assert set(A5.generators) <= S and {A5.invert(s) for s in S} == S
    om = catalog.a5_with_outer()
    al2 = MoveAlphabet.for_group(A5, "gens", om)
    assert len(al2.conjugator_moves) == len(S) + 2


def test_neighbors_examples():
    Z2 = catalog.get("Z2")
    al = MoveAlphabet.for_group(Z2)
    assert (1, 1) in neighbors((1, 0), al)
    triv = build_abelian([1])
    assert set(neighbors((0, 0), MoveAlphabet.for_group(triv))) == {(0, 0)}


@pytest.mark.parametrize("name", ["S3", "A4", "Q8"])
def test_neighbor_counts(name):
    G = catalog.get(name)
    al = MoveAlphabet.for_group(G)
    for k in (1, 2, 3):
        t = tuple(range(1, k + 1))
        specs = al.move_specs(k)
        assert sum(m.kind == "Invert" for m in specs) == k
        bound = 4 * k * (k - 1) + k + 2 * k * (len(al.conjugator_elements) + len(al.operator.auto_gens))
        assert len(neighbors(t, al)) <= bound


# ---------------------------------------------------------------- N_k

def test_is_n_generating_examples(S3):
    assert is_n_generating((el(S3, "(0 1)"), 0), S3)
    assert not is_n_generating((el(S3, "(0 1 2)"), el(S3, "(0 2 1)")), S3)
    for name in ("S3", "A5", "Z5xZ5"):
        assert not is_n_generating((0, 0), catalog.get(name))


def test_enumerate_nk_examples(S3, A5):
    assert len(list(enumerate_nk(A5, 2))) == 3599
    assert len(list(enumerate_nk(catalog.get("Z2"), 2))) == 3
    assert sorted(enumerate_nk(S3, 1)) == sorted((el(S3, n),) for n in ("(0 1)", "(1 2)", "(0 2)"))
    codes = nk_codes(catalog.get("A4"), 2)
    assert np.all(np.diff(codes) > 0)


@pytest.mark.parametrize("name", SMALL)
def test_nk_matches_normal_closure_census(name):
    G = catalog.get(name)
    for k in (1, 2):
        brute = [encode(t, G.order) for t in itertools.product(range(G.order), repeat=k)
                 if len(normal_closure(G, None, t)) == G.order]
        assert nk_codes(G, k).tolist() == sorted(brute)


def test_nk_with_operators():
    A = build_abelian([5, 5])
    om = OperatorSet(A, (catalog.swap_automorphism(A),))
    brute = [encode((x,), 25) for x in range(25) if len(normal_closure(A, om, [x])) == 25]
    assert nk_codes(A, 1, om).tolist() == brute
    assert len(brute) > 0


def test_budget():
    with pytest.raises(BudgetExceeded):
        nk_codes(catalog.get("A5"), 3, budget=1000)
    with pytest.raises(BudgetExceeded):
        nk_codes(catalog.get("SL(2,5)"), 10)


# ---------------------------------------------------------------- components

def test_components_examples(A5):
    assert components(A5, 2, MoveAlphabet.for_group(A5, "all")).component_count == 1
    Z55 = catalog.get("Z5xZ5")
    T = components(Z55, 2, MoveAlphabet.for_group(Z55, "all"))
    assert (T.vertex_count, T.component_count) == (480, 2)
    assert components(catalog.get("Z2"), 2).component_count == 1


@pytest.mark.parametrize("name", ["S3", "D4", "Q8", "A4", "Z5xZ5", "Z2xZ4", "V4"])
def test_components_match_bfs_oracle(name):
    G = catalog.get(name)
    al = MoveAlphabet.for_group(G)
    T = components(G, 2, al)
    label = bfs_partition(G, 2, al)
    assert len(label) == T.vertex_count
    pairs = {(T.label_of(t), cid) for t, cid in label.items()}
    assert len(pairs) == T.component_count == len(set(label.values()))


def test_components_with_operator_match_bfs_oracle():
    A = build_abelian([5, 5])
    scalar = OperatorSet(A, (Automorphism(A, np.array([A.power(x, 2) for x in range(25)])),))
    al = MoveAlphabet.for_group(A, "gens", scalar)
    T = components(A, 2, al)
    label = bfs_partition(A, 2, al)
    assert len({(T.label_of(t), c) for t, c in label.items()}) == T.component_count


def test_table_invariants():
    G = catalog.get("Z5xZ5")
    T = components(G, 2)
    assert np.all(np.diff(T.codes) > 0)
    for cid, rep in enumerate(T.reps.tolist()):
        assert rep == T.members(cid).min()
    assert np.all(np.diff(T.reps) > 0)
    assert T.as_dict()[int(T.reps[1])] == 1
    assert 0 not in T and int(T.codes[0]) in T
    with pytest.raises(KeyError):
        T.label(0)


def test_components_deterministic():
    G = catalog.get("S4")
    assert components(G, 2) == components(G, 2)


def test_trivial_group_single_vertex():
    triv = build_abelian([1])
    T = components(triv, 3)
    assert (T.vertex_count, T.component_count) == (1, 1)


# ---------------------------------------------------------------- equivalence

def test_equivalent_examples(S3):
    al = MoveAlphabet.for_group(S3)
    t = (el(S3, "(0 1)"), 0)
    assert len(equivalent(t, t, al)) == 0
    cert = equivalent(t, (el(S3, "(0 2)"), 0), al)
    assert cert is not None and cert.replay(al) == (el(S3, "(0 2)"), 0)
    A = catalog.get("Z5xZ5")
    inv = invariant_factors(A)
    z1, z2 = inv.gens
    assert equivalent((z1, z2), (A.power(z1, 2), z2), MoveAlphabet.for_group(A)) is None
    with pytest.raises(NotInNk):
        equivalent((0, 0), t, al)


def test_search_cap_is_inconclusive_not_negative():
    A = catalog.get("A5")
    al = MoveAlphabet.for_group(A)
    T = components(A, 2, al)
    U = (A.generators[0], A.generators[1])
    rng = np.random.default_rng(3)
    far = random_certificate(al, U, 60, rng).end
    if far == U:
        pytest.skip("walk returned to the start")
    with pytest.raises(SearchInconclusive):
        equivalent(U, far, al, T, max_plies=0)
    assert equivalent(U, far, al, T).replay(al) == far


def test_certificate_check_detects_tampering(S3):
    al = MoveAlphabet.for_group(S3)
    U, V = (el(S3, "(0 1)"), 0), (el(S3, "(0 2)"), 0)
    cert = equivalent(U, V, al)
    bad = Certificate(U, (el(S3, "(1 2)"), 0), cert.moves)
    with pytest.raises(CertificateError):
        bad.check(al)


@pytest.mark.parametrize("name", ["S3", "A4", "Q8", "SL(2,3)", "A5"])
def test_certificates_replay(name, rng):
    G = catalog.get(name)
    al = MoveAlphabet.for_group(G)
    T = components(G, 2, al)
    for _ in range(25):
        U = random_tuple_in_nk(G, 2, rng)
        V = random_tuple_in_nk(G, 2, rng)
        cert = equivalent(U, V, al, T)
        if T.label_of(U) == T.label_of(V):
            assert cert is not None and cert.replay(al) == V and len(cert) <= 64
        else:
            assert cert is None


# ---------------------------------------------------------------- projection

def test_project_tuple_examples(S3):
    G = catalog.get("D4")
    ident = Homomorphism(G, G, np.arange(G.order))
    assert project_tuple(ident, (3, 5)) == (3, 5)
    _, phi = abelianization(S3)
    assert project_tuple(phi, (el(S3, "(0 1)"), el(S3, "(0 1 2)"))) == (1, 0)
    assert project_tuple(phi, (0, 0, 0)) == (0, 0, 0)


def test_lift_check_examples(S3, A5):
    _, phi = abelianization(S3)
    al = MoveAlphabet.for_group(S3)
    U = (el(S3, "(0 1)"), 0)
    assert lift_equivalence_check(phi, U, U, Certificate(U, U, []), al)
    T = components(S3, 2, al)
    for V in enumerate_nk(S3, 2):
        cert = equivalent(U, V, al, T)
        assert lift_equivalence_check(phi, U, V, cert, al)
    _, psi = abelianization(A5)
    al5 = MoveAlphabet.for_group(A5)
    cert = random_certificate(al5, (A5.generators[0], 0), 30, np.random.default_rng(0))
    assert lift_equivalence_check(psi, cert.start, cert.end, cert, al5)


def test_lift_check_rejects_wrong_endpoints(S3):
    _, phi = abelianization(S3)
    al = MoveAlphabet.for_group(S3)
    U = (el(S3, "(0 1)"), 0)
    with pytest.raises(CertificateError):
        lift_equivalence_check(phi, U, (0, el(S3, "(0 1)")), Certificate(U, U, []), al)


# ---------------------------------------------------------------- properties

small_groups = st.sampled_from(SMALL + ("S4", "SL(2,3)", "A5"))


@given(small_groups, st.integers(1, 3), st.data())
def test_every_move_has_an_inverse(name, k, data):
    G = catalog.get(name)
    al = MoveAlphabet.for_group(G)
    t = tuple(data.draw(st.lists(st.integers(0, G.order - 1), min_size=k, max_size=k)))
    for m in al.move_specs(k):
        assert apply_move(apply_move(t, m, al), m.inverse(G), al) == t


@given(st.data())
def test_operator_moves_invert(data):
    om = catalog.a5_with_outer()
    G = om.group
    al = MoveAlphabet.for_group(G, "gens", om)
    t = tuple(data.draw(st.lists(st.integers(0, 59), min_size=2, max_size=2)))
    for m in al.move_specs(2):
        assert apply_move(apply_move(t, m, al), m.inverse(G), al) == t


@pytest.mark.parametrize("name", MATRIX)
def test_moves_preserve_nk(name):
    G = catalog.get(name)
    al = MoveAlphabet.for_group(G)
    k = 2
    codes = nk_codes(G, k)
    E = np.stack([codes // G.order**i % G.order for i in range(k)], axis=1)
    weights = G.order ** np.arange(k)
    for kind, i, j, aux in zip(*al.kernel_moves(k)):
        moved = moved_entries(E, G.order, G.mul, G.inv, al.perms, kind, i, j, aux)
        new = E.copy()
        new[:, i] = moved
        assert np.isin(new @ weights, codes).all()


@pytest.mark.parametrize("name", MATRIX)
def test_partition_independent_of_conjugator_set(name):
    G = catalog.get(name)
    for k in (2, 3):
        if G.order**k > 500_000:
            continue
        assert components(G, k, MoveAlphabet.for_group(G, "gens")) == \
            components(G, k, MoveAlphabet.for_group(G, "all"))


def _normal_closure_move_check(G, omega, T, t, i, g):
    others = [x for j, x in enumerate(t) if j != i]
    assert g in normal_closure(G, omega, others)
    s = list(t)
    s[i] = G.multiply(t[i], g)
    return T.label_of(tuple(s)) == T.label_of(t)


@pytest.mark.parametrize("name", ["S3", "D4", "Q8", "A4", "SL(2,3)", "Z5xZ5", "A5"])
def test_multiplying_by_closure_of_other_entries_keeps_component(name, rng):
    G = catalog.get(name)
    al = MoveAlphabet.for_group(G)
    T = components(G, 2, al)
    for _ in range(100):
        t = random_tuple_in_nk(G, 2, rng)
        i = int(rng.integers(0, 2))
        N = sorted(normal_closure(G, None, [t[1 - i]]))
        g = N[int(rng.integers(0, len(N)))]
        assert _normal_closure_move_check(G, None, T, t, i, g)


def test_relativised_closure_keeps_component(rng):
    om = catalog.a5_with_outer()
    G = om.group
    T = components(G, 2, MoveAlphabet.for_group(G, "gens", om))
    for _ in range(100):
        t = random_tuple_in_nk(G, 2, rng, om)
        N = sorted(normal_closure(G, om, [t[1]]))
        assert _normal_closure_move_check(G, om, T, t, 0, N[int(rng.integers(0, len(N)))])


def test_quotient_by_central_subgroup_projects_certificates(rng):
    G = catalog.get("SL(2,5)")
    Z = [0] + [x for x in range(G.order) if G.element_order(x) == 2]
    Q, phi = quotient(G, Z)
    assert Q.order == 60
    al = MoveAlphabet.for_group(G)
    for _ in range(50):
        U = random_tuple_in_nk(G, 2, rng)
        cert = random_certificate(al, U, int(rng.integers(1, 20)), rng)
        assert lift_equivalence_check(phi, U, cert.end, cert, al)


def test_component_table_equality_semantics():
    G = catalog.get("S3")
    T = components(G, 2)
    other = ComponentTable(T.n, T.k, T.codes, T.ids, T.reps)
    assert T == other
    assert T != components(G, 1)
    assert decode(encode((1, 2, 3), 6), 6, 3) == (1, 2, 3)
