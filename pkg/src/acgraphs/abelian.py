"""Invariant factors of finite abelian groups and their AC-graph components."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

import numpy as np

from .acgraph import ComponentTable, MoveAlphabet, components, encode, is_n_generating
from .group import FiniteGroup, _closure_mask


class NotAbelianError(ValueError):
    pass


@dataclass(eq=False)
class AbelianInvariants:
    group: FiniteGroup
    factors: list[int]
    gens: list[int]
    _tables: dict = field(default_factory=dict, repr=False)

    @property
    def d(self) -> int:
        return len(self.factors)

    def table(self, k: int) -> ComponentTable:
        if k not in self._tables:
            self._tables[k] = components(self.group, k, MoveAlphabet.for_group(self.group, "none"))
        return self._tables[k]


def _order_mod(G: FiniteGroup, x: int, H: np.ndarray) -> int:
    y, r = x, 1
    while not H[y]:
        y = int(G.mul[y, x])
        r += 1
    return r


def invariant_factors(A: FiniteGroup) -> AbelianInvariants:
    """Decompose by repeatedly splitting off a cyclic factor of maximal order.

    At each stage take the largest order ``r`` of an element modulo the part
    already split off, then the smallest-index element of exact order ``r``
    whose order modulo that part is also ``r``; its cyclic group meets the
    split-off part trivially.
    """
    if not A.is_abelian:
        raise NotAbelianError("group is not abelian")
    orders = A.element_orders
    H = np.zeros(A.order, dtype=bool)
    H[0] = True
    factors, gens = [], []
    while not H.all():
        mod = np.array([_order_mod(A, x, H) for x in range(A.order)])
        r = int(mod.max())
        cands = np.flatnonzero((mod == r) & (orders == r))
        g = int(cands[0])
        factors.append(r)
        gens.append(g)
        H = _closure_mask(A, gens)
    factors.reverse()
    gens.reverse()
    return AbelianInvariants(A, factors, gens)


def _units(m: int) -> list[int]:
    return [u for u in range(1, max(m, 2)) if gcd(u, m) == 1] if m > 1 else [0]


def unit_orbit_count(m: int) -> int:
    """Orbits of negation on the units mod m (phi(m)/2 once m > 2)."""
    if m <= 2:
        return 1
    return len(_units(m)) // 2


def dg_component_count(inv: AbelianInvariants, k: int) -> int:
    d = inv.d
    if k < 2:
        raise ValueError("the component formula needs k >= 2")
    if k < d:
        raise ValueError(f"no generating {k}-tuples: the group needs {d} generators")
    if k > d:
        return 1
    return unit_orbit_count(inv.factors[0])


def dg_representative(inv: AbelianInvariants, lam: int) -> tuple[int, ...]:
    """``(z1^lam, z2, ..., zd)``."""
    if inv.d == 0:
        raise ValueError("trivial group has no cyclic factors")
    m = inv.factors[0]
    if gcd(lam, m) != 1:
        raise ValueError(f"{lam} is not a unit mod {m}")
    A = inv.group
    return (A.power(inv.gens[0], lam),) + tuple(inv.gens[1:])


def abelian_component_id(inv: AbelianInvariants, t: Sequence[int]) -> int:
    A = inv.group
    t = tuple(int(x) for x in t)
    if not is_n_generating(t, A):
        raise ValueError(f"{t} does not generate the group")
    return inv.table(len(t)).label(encode(t, A.order))


def coordinates(inv: AbelianInvariants) -> np.ndarray:
    """Exponent vector of every element over the cyclic generators."""
    A = inv.group
    coords = np.zeros((A.order, inv.d), dtype=np.int64)
    seen = np.zeros(A.order, dtype=bool)
    seen[0] = True
    elems, vecs = [0], [np.zeros(inv.d, dtype=np.int64)]
    for i, g in enumerate(inv.gens):
        new_e, new_v = [], []
        for e, v in zip(elems, vecs):
            x = e
            for p in range(inv.factors[i]):
                w = v.copy()
                w[i] = p
                new_e.append(x)
                new_v.append(w)
                x = int(A.mul[x, g])
        elems, vecs = new_e, new_v
    for e, v in zip(elems, vecs):
        coords[e] = v
    return coords
