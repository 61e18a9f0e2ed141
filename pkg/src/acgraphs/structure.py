"""N-Frattini subgroup, semisimple decomposition of G/W(G), supports, normal rank formula."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import abelian
from .config import DEFAULT_STRUCTURE_CAP, BudgetExceeded
from .group import (
    Automorphism,
    FiniteGroup,
    Homomorphism,
    OperatorSet,
    _closure_mask,
    _operator,
    _orbit_mask,
    center,
    commutator_subgroup,
    d_normal,
    induced_operator,
    quotient,
    subgroup_as_group,
)


class HypothesisError(ValueError):
    """Inputs do not satisfy the precondition of a structural formula."""


@dataclass
class NormalSubgroupLattice:
    group: FiniteGroup
    operator: OperatorSet
    normals: list[frozenset[int]]
    maximal_proper: list[int]


@dataclass
class SemisimpleDecomposition:
    group: FiniteGroup
    operator: OperatorSet
    W: frozenset[int]
    quotient: FiniteGroup
    projection: Homomorphism
    factors: list[frozenset[int]]
    components: np.ndarray   # quotient element -> tuple of factor elements, shape (|Q|, s)

    @property
    def index_set(self) -> list[int]:
        return list(range(len(self.factors)))

    def project(self, i: int, q: int) -> int:
        """pi_i of a quotient element."""
        return int(self.components[q, i])


def _cap(G: FiniteGroup, cap: int) -> None:
    if G.order > cap:
        raise BudgetExceeded(f"group order {G.order} exceeds structure cap {cap}")


def normal_subgroups(G: FiniteGroup, omega: OperatorSet | None = None,
                     cap: int = DEFAULT_STRUCTURE_CAP) -> NormalSubgroupLattice:
    _cap(G, cap)
    omega = _operator(G, omega)
    lat = omega.lattice
    normals = [lat.subgroup(i) for i in range(len(lat))]
    proper = [i for i in range(len(lat)) if i != lat.full_id]
    maximal = [i for i in proper
               if not any(j != i and lat.contains(j, i) for j in proper)]
    return NormalSubgroupLattice(G, omega, normals, maximal)


def n_frattini(G: FiniteGroup, omega: OperatorSet | None = None, cap: int = DEFAULT_STRUCTURE_CAP) -> frozenset[int]:
    lat = normal_subgroups(G, omega, cap)
    if not lat.maximal_proper:
        return frozenset(range(G.order))
    out = set(range(G.order))
    for i in lat.maximal_proper:
        out &= lat.normals[i]
    return frozenset(out)


def non_n_generating_test(G: FiniteGroup, omega: OperatorSet | None, g: int,
                          cap: int = DEFAULT_STRUCTURE_CAP) -> bool:
    """Whether adding ``g`` never turns a non-normally-generating set into one.

    The normal closure of ``Y u {g}`` depends on Y only through the normal
    closure of Y, so Y ranges over the normal subgroups.
    """
    _cap(G, cap)
    omega = _operator(G, omega)
    lat = omega.lattice
    sg = int(lat.element_sub[g])
    for y in range(len(lat)):
        if y != lat.full_id and lat.join[y, sg] == lat.full_id:
            return False
    return True


def _minimal_normals(omega: OperatorSet) -> list[int]:
    lat = omega.lattice
    nontrivial = [i for i in range(len(lat)) if i != lat.trivial_id]
    return [i for i in nontrivial if not any(j != i and lat.contains(i, j) for j in nontrivial)]


def is_omega_simple(G: FiniteGroup, omega: OperatorSet, F: frozenset[int]) -> bool:
    """No proper nontrivial subgroup of F is stable under conjugation by F and the operators."""
    elems = np.array(sorted(F))
    perms = [G.conjugation_perm(int(x)) for x in elems]
    perms += [a.perm for a in omega.auto_gens]
    P = np.stack(perms)
    for h in elems:
        if h == 0:
            continue
        orbit = _orbit_mask(P, [int(h)], G.order)
        closure = _closure_mask(G, np.flatnonzero(orbit))
        if closure.sum() != len(F):
            return False
    return True


def semisimple_decompose(G: FiniteGroup, omega: OperatorSet | None = None, cap: int = DEFAULT_STRUCTURE_CAP,
                         seed: int | None = None) -> SemisimpleDecomposition:
    """Write G/W(G) as a direct product of operator-simple factors.

    Minimal normal subgroups of the quotient are added while they meet the
    running product trivially. The default order is by smallest non-identity
    element; ``seed`` shuffles it.
    """
    omega = _operator(G, omega)
    W = n_frattini(G, omega, cap)
    Q, phi = quotient(G, W)
    qomega = induced_operator(omega, phi)
    lat = qomega.lattice
    mins = _minimal_normals(qomega)
    mins.sort(key=lambda i: int(np.flatnonzero(lat.masks[i])[1]))
    if seed is not None:
        random.Random(seed).shuffle(mins)
    chosen: list[int] = []
    prod = lat.trivial_id
    for i in mins:
        if lat.join[prod, i] != prod and lat.sizes[lat.join[prod, i]] == lat.sizes[prod] * lat.sizes[i]:
            chosen.append(i)
            prod = int(lat.join[prod, i])
    if prod != lat.full_id:
        raise RuntimeError("minimal normal subgroups do not generate G/W(G)")
    factors = [lat.subgroup(i) for i in chosen]
    factors.sort(key=lambda F: sorted(F)[1] if len(F) > 1 else 0)
    # unique factorisation q = f_1 ... f_s
    comps = {0: ()}
    for F in factors:
        nxt = {}
        for q, c in comps.items():
            for f in sorted(F):
                nxt[int(Q.mul[q, f])] = c + (f,)
        comps = nxt
    if len(comps) != Q.order:
        raise RuntimeError("factors do not form a direct product")
    components = np.zeros((Q.order, len(factors)), dtype=np.int64)
    for q, c in comps.items():
        components[q] = c
    return SemisimpleDecomposition(G, omega, W, Q, phi, factors, components)


def support(decomp: SemisimpleDecomposition, g: int) -> frozenset[int]:
    """Indices (0-based) of the factors where the image of ``g`` in G/W(G) is nontrivial."""
    q = decomp.projection(g)
    return frozenset(i for i in decomp.index_set if decomp.components[q, i] != 0)


def perfect_generation_criterion(decomp: SemisimpleDecomposition, entries: Sequence[int]) -> bool:
    G = decomp.group
    if len(commutator_subgroup(G)) != G.order:
        raise HypothesisError("group is not perfect")
    covered = set()
    for g in entries:
        covered |= support(decomp, g)
    return covered == set(decomp.index_set)


def _abelian_normal_rank(A: FiniteGroup, omega: OperatorSet) -> int:
    if A.order == 1:
        return 0
    if omega.is_trivial:
        return abelian.invariant_factors(A).d
    return d_normal(A, omega)


def d_normal_formula(G: FiniteGroup, omega: OperatorSet | None = None,
                     cap: int = DEFAULT_STRUCTURE_CAP) -> int:
    """``max(d(A), 1)`` for ``G = G_1 x ... x G_s x A`` with nonabelian operator-simple G_i.

    The split is recognised as ``[G,G] x Z(G)`` with ``[G,G]`` a direct product
    of nonabelian minimal normal subgroups; anything else raises HypothesisError.
    """
    _cap(G, cap)
    omega = _operator(G, omega)
    if G.order == 1:
        return 0
    D = commutator_subgroup(G)
    Z = center(G)
    if len(D & Z) != 1 or len(D) * len(Z) != G.order:
        raise HypothesisError("G is not [G,G] x Z(G)")
    lat = omega.lattice
    prod = lat.trivial_id
    for i in _minimal_normals(omega):
        F = lat.subgroup(i)
        if not F <= D:
            continue
        Fg = subgroup_as_group(G, F)[0]
        if Fg.is_abelian:
            raise HypothesisError("an abelian minimal normal subgroup lies in [G,G]")
        prod = int(lat.join[prod, i])
    if lat.subgroup(prod) != D:
        raise HypothesisError("[G,G] is not a product of nonabelian minimal normal subgroups")
    A, emb = subgroup_as_group(G, Z)
    pos = {int(x): i for i, x in enumerate(emb.map)}
    autos = []
    for a in omega.auto_gens:
        autos.append(Automorphism(A, np.array([pos[int(a.perm[x])] for x in emb.map])))
    return max(_abelian_normal_rank(A, OperatorSet(A, tuple(autos))), 1)
