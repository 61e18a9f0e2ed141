"""Named small groups used by the verification matrix."""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from .group import (
    Automorphism,
    FiniteGroup,
    OperatorSet,
    build_abelian,
    build_from_matrices,
    build_from_permutations,
    direct_product,
)


def _perm_from_cycles(degree, *cycles):
    p = list(range(degree))
    for c in cycles:
        for a, b in zip(c, c[1:] + c[:1]):
            p[a] = b
    return p


def cyclic(m: int) -> FiniteGroup:
    return build_abelian([m], name=f"Z{m}")


def symmetric(degree: int) -> FiniteGroup:
    if degree == 1:
        return build_from_permutations(1, [], name="S1")
    gens = [_perm_from_cycles(degree, tuple(range(degree))), _perm_from_cycles(degree, (0, 1))]
    return build_from_permutations(degree, gens, name=f"S{degree}")


def alternating(degree: int) -> FiniteGroup:
    if degree < 3:
        return build_from_permutations(max(degree, 1), [], name=f"A{degree}")
    gens = [_perm_from_cycles(degree, tuple(range(3)))]
    if degree > 3:
        odd = tuple(range(degree)) if degree % 2 else tuple(range(1, degree))
        gens.insert(0, _perm_from_cycles(degree, odd))
    return build_from_permutations(degree, gens, name=f"A{degree}")


def dihedral_square() -> FiniteGroup:
    return build_from_permutations(4, [_perm_from_cycles(4, (0, 1, 2, 3)), _perm_from_cycles(4, (1, 3))], name="D4")


def quaternion() -> FiniteGroup:
    # i, j in SL(2,3)
    return build_from_matrices(3, [[[0, -1], [1, 0]], [[1, 1], [1, -1]]], name="Q8")


def special_linear_2(p: int) -> FiniteGroup:
    return build_from_matrices(p, [[[1, 1], [0, 1]], [[1, 0], [1, 1]]], name=f"SL(2,{p})")


def outer_automorphism_a5(G: FiniteGroup) -> Automorphism:
    """Conjugation of A5 by the transposition (0 1) of S5."""
    t = _perm_from_cycles(5, (0, 1))
    index = {e: i for i, e in enumerate(G.elements)}
    perm = [index[tuple(t[p[t[x]]] for x in range(5))] for p in G.elements]
    return Automorphism(G, np.array(perm))


def swap_automorphism(G: FiniteGroup) -> Automorphism:
    """Coordinate swap on a homocyclic abelian group built by ``build_abelian``."""
    index = {e: i for i, e in enumerate(G.elements)}
    return Automorphism(G, np.array([index[tuple(reversed(e))] for e in G.elements]))


def cyclic_shift_automorphism(G: FiniteGroup) -> Automorphism:
    index = {e: i for i, e in enumerate(G.elements)}
    return Automorphism(G, np.array([index[e[1:] + e[:1]] for e in G.elements]))


_BUILDERS = {
    "Z2": lambda: cyclic(2),
    "Z3": lambda: cyclic(3),
    "Z4": lambda: cyclic(4),
    "Z6": lambda: cyclic(6),
    "V4": lambda: build_abelian([2, 2], name="V4"),
    "Z5xZ5": lambda: build_abelian([5, 5], name="Z5xZ5"),
    "Z2xZ4": lambda: build_abelian([2, 4], name="Z2xZ4"),
    "S3": lambda: symmetric(3),
    "D4": dihedral_square,
    "Q8": quaternion,
    "A4": lambda: alternating(4),
    "SL(2,3)": lambda: special_linear_2(3),
    "S4": lambda: symmetric(4),
    "A5": lambda: alternating(5),
    "SL(2,5)": lambda: special_linear_2(5),
    "A5xZ2": lambda: direct_product(alternating(5), cyclic(2), name="A5xZ2"),
    "A5xA5": lambda: direct_product(alternating(5), alternating(5), max_order=4096, name="A5xA5"),
    "Z3xZ3xZ3": lambda: build_abelian([3, 3, 3], name="Z3xZ3xZ3"),
    "S3xZ5xZ5": lambda: direct_product(symmetric(3), build_abelian([5, 5]), name="S3xZ5xZ5"),
    "A4xZ7xZ7": lambda: direct_product(alternating(4), build_abelian([7, 7]), name="A4xZ7xZ7"),
}

MATRIX = ("Z2", "Z3", "Z4", "Z6", "V4", "Z5xZ5", "Z2xZ4", "S3", "D4", "Q8", "A4",
          "SL(2,3)", "S4", "A5", "SL(2,5)", "A5xZ2")
# non-abelian groups whose abelianisation has several AC components at k = 2
MULTI_COMPONENT = ("S3xZ5xZ5", "A4xZ7xZ7")


@lru_cache(maxsize=None)
def get(name: str) -> FiniteGroup:
    try:
        return _BUILDERS[name]()
    except KeyError:
        raise KeyError(f"unknown group {name!r}; known: {sorted(_BUILDERS)}") from None


def names() -> list[str]:
    return list(_BUILDERS)


def a5_with_outer() -> OperatorSet:
    G = get("A5")
    return OperatorSet(G, (outer_automorphism_a5(G),))
