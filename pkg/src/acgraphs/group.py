"""Finite groups as dense Cayley tables.

Elements are integer indices ``0..n-1`` with the identity fixed at 0. Products
follow the right-action convention used for permutations: ``x^(ab) = (x^a)^b``,
so ``conjugate(a, w) = w^-1 a w``.
"""
from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .config import (
    DEFAULT_EXHAUSTIVE_CHECK_BOUND,
    DEFAULT_MAX_ORDER,
    BudgetExceeded,
)

_ASSOC_SAMPLES = 20000


class GroupValidationError(ValueError):
    """A multiplication table failed one of the group axioms."""

    def __init__(self, message, triple=None):
        super().__init__(message)
        self.triple = triple


class NotNormalError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    mul: np.ndarray
    inv: np.ndarray
    generators: tuple[int, ...]
    element_names: tuple[str, ...] | None = None
    elements: tuple | None = field(default=None, repr=False)
    name: str = ""

    identity = 0

    @property
    def order(self) -> int:
        return int(self.mul.shape[0])

    def __len__(self):
        return self.order

    def __repr__(self):
        label = self.name or "group"
        return f"<FiniteGroup {label} order={self.order} gens={list(self.generators)}>"

    def multiply(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def invert(self, a: int) -> int:
        return int(self.inv[a])

    def conjugate(self, a: int, w: int) -> int:
        """Return ``w^-1 a w``."""
        return int(self.mul[self.mul[self.inv[w], a], w])

    def power(self, a: int, e: int) -> int:
        if e < 0:
            a, e = int(self.inv[a]), -e
        result, base = 0, a
        while e:
            if e & 1:
                result = int(self.mul[result, base])
            base = int(self.mul[base, base])
            e >>= 1
        return result

    def element_order(self, a: int) -> int:
        x, r = a, 1
        while x != 0:
            x = int(self.mul[x, a])
            r += 1
        return r

    def name_of(self, a: int) -> str:
        if self.element_names is not None:
            return self.element_names[a]
        return str(a)

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        x = np.arange(n)
        current = x.copy()
        r = 1
        pending = np.ones(n, dtype=bool)
        while pending.any():
            done = pending & (current == 0)
            orders[done] = r
            pending &= ~done
            current = self.mul[current, x]
            r += 1
        return orders

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    @cached_property
    def table_hash(self) -> str:
        """SHA-256 of the canonical multiplication table bytes."""
        data = np.ascontiguousarray(self.mul, dtype="<i4").tobytes()
        return hashlib.sha256(data).hexdigest()

    def conjugation_perm(self, w: int) -> np.ndarray:
        """Permutation ``x -> w^-1 x w`` of the element indices."""
        return self.mul[self.mul[self.inv[w]], w]

    @cached_property
    def trivial_operator(self) -> "OperatorSet":
        return OperatorSet(self, ())


@dataclass(frozen=True, eq=False)
class Homomorphism:
    source: FiniteGroup
    target: FiniteGroup
    map: np.ndarray

    def __call__(self, a: int) -> int:
        return int(self.map[a])

    def validate(self) -> None:
        src, tgt, f = self.source, self.target, self.map
        if f.shape != (src.order,):
            raise ValueError("map length does not match source order")
        if f[0] != 0:
            raise ValueError("identity must map to identity")
        lhs = f[src.mul]
        rhs = tgt.mul[f[:, None], f[None, :]]
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            a, b = bad[0]
            raise ValueError(f"map is not multiplicative at ({a}, {b})")

    def kernel(self) -> frozenset[int]:
        return frozenset(np.flatnonzero(self.map == 0).tolist())

    def image(self) -> frozenset[int]:
        return frozenset(np.unique(self.map).tolist())


@dataclass(frozen=True, eq=False)
class Automorphism:
    group: FiniteGroup
    perm: np.ndarray

    def __post_init__(self):
        perm = np.asarray(self.perm, dtype=np.int32)
        object.__setattr__(self, "perm", perm)
        n = self.group.order
        if perm.shape != (n,) or not np.array_equal(np.sort(perm), np.arange(n)):
            raise ValueError("automorphism must be a bijection of the element indices")
        Homomorphism(self.group, self.group, perm).validate()

    def __call__(self, a: int) -> int:
        return int(self.perm[a])

    def inverse(self) -> "Automorphism":
        inv = np.empty_like(self.perm)
        inv[self.perm] = np.arange(self.perm.size, dtype=self.perm.dtype)
        return Automorphism(self.group, inv)


@dataclass(frozen=True, eq=False)
class OperatorSet:
    """Generators of an operator group acting on ``group`` beyond inner automorphisms."""

    group: FiniteGroup
    auto_gens: tuple[Automorphism, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "auto_gens", tuple(self.auto_gens))
        for a in self.auto_gens:
            if a.group is not self.group:
                raise ValueError("automorphism belongs to a different group")

    @property
    def is_trivial(self) -> bool:
        return not self.auto_gens

    @cached_property
    def action_perms(self) -> np.ndarray:
        """Element permutations generating the action of ``G.Omega`` on G."""
        G = self.group
        perms = [G.conjugation_perm(g) for g in G.generators]
        perms += [a.perm for a in self.auto_gens]
        if not perms:
            return np.arange(G.order, dtype=np.int32)[None, :]
        return np.stack(perms).astype(np.int32)

    @cached_property
    def orbits(self) -> np.ndarray:
        """Orbit id per element; orbit ids increase with their smallest element."""
        n = self.group.order
        ids = np.full(n, -1, dtype=np.int64)
        perms = self.action_perms
        count = 0
        for x in range(n):
            if ids[x] >= 0:
                continue
            mask = _orbit_mask(perms, [x], n)
            ids[mask] = count
            count += 1
        return ids

    @cached_property
    def orbit_reps(self) -> list[int]:
        ids = self.orbits
        _, first = np.unique(ids, return_index=True)
        return sorted(first.tolist())

    @cached_property
    def lattice(self) -> "NormalLattice":
        return NormalLattice(self)

    def descriptor(self) -> list[str]:
        return [hashlib.sha256(a.perm.astype("<i4").tobytes()).hexdigest()[:16] for a in self.auto_gens]


def _operator(G: FiniteGroup, omega: OperatorSet | None) -> OperatorSet:
    if omega is None:
        return G.trivial_operator
    if omega.group is not G:
        raise ValueError("operator set acts on a different group")
    return omega


# ---------------------------------------------------------------- validation

def validate_group(G: FiniteGroup, exhaustive_bound: int = DEFAULT_EXHAUSTIVE_CHECK_BOUND, seed: int = 0) -> None:
    """Check the group axioms on the table; raise GroupValidationError naming the failure."""
    mul, inv = G.mul, G.inv
    n = mul.shape[0] if mul.ndim == 2 else -1
    if mul.ndim != 2 or mul.shape != (n, n) or n < 1:
        raise GroupValidationError("multiplication table must be a non-empty square array")
    if mul.min() < 0 or mul.max() >= n:
        raise GroupValidationError("table entry out of range")
    ar = np.arange(n)
    if not np.array_equal(mul[0], ar) or not np.array_equal(mul[:, 0], ar):
        raise GroupValidationError("element 0 is not a two-sided identity")
    srt = np.sort(mul, axis=1)
    bad_rows = np.flatnonzero((srt != ar).any(axis=1))
    if bad_rows.size:
        raise GroupValidationError(f"row {int(bad_rows[0])} is not a permutation")
    srt = np.sort(mul, axis=0)
    bad_cols = np.flatnonzero((srt != ar[:, None]).any(axis=0))
    if bad_cols.size:
        raise GroupValidationError(f"column {int(bad_cols[0])} is not a permutation")
    if inv.shape != (n,) or (mul[ar, inv] != 0).any():
        raise GroupValidationError("inverse table is wrong")
    if n <= exhaustive_bound:
        for a in range(n):
            lhs = mul[mul[a]]          # [b, c] -> (ab)c
            rhs = mul[a][mul]          # [b, c] -> a(bc)
            bad = np.argwhere(lhs != rhs)
            if bad.size:
                b, c = bad[0]
                raise GroupValidationError(f"associativity fails on triple ({a}, {b}, {c})", (a, int(b), int(c)))
    else:
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, n, size=(3, _ASSOC_SAMPLES))
        bad = np.flatnonzero(mul[mul[a, b], c] != mul[a, mul[b, c]])
        if bad.size:
            t = (int(a[bad[0]]), int(b[bad[0]]), int(c[bad[0]]))
            raise GroupValidationError(f"associativity fails on triple {t}", t)
    if any(not 0 <= g < n for g in G.generators):
        raise GroupValidationError("generator index out of range")
    if _closure_mask(G, G.generators).sum() != n:
        raise GroupValidationError("generators do not generate the group")


# ---------------------------------------------------------------- construction

def _check_cap(n: int, max_order: int) -> None:
    if n > max_order:
        raise BudgetExceeded(f"group order {n} exceeds cap {max_order}")


def _inverse_table(mul: np.ndarray) -> np.ndarray:
    rows, cols = np.nonzero(mul == 0)
    inv = np.empty(mul.shape[0], dtype=np.int32)
    inv[rows] = cols
    return inv


def cycle_string(perm: Sequence[int]) -> str:
    seen, out = set(), []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            continue
        cycle, j = [i], perm[i]
        seen.add(i)
        while j != i:
            seen.add(j)
            cycle.append(j)
            j = perm[j]
        out.append("(" + " ".join(map(str, cycle)) + ")")
    return "".join(out) or "()"


def _lookup_rows(rows: np.ndarray, table: np.ndarray, base: int) -> np.ndarray:
    """Index of each row of ``rows`` inside ``table`` (rows of non-negative ints < base)."""
    width = table.shape[1]
    if width == 0:
        return np.zeros(rows.shape[0], dtype=np.int32)
    if base**width < 2**62:
        radix = base ** np.arange(width, dtype=np.int64)
        keys = table.astype(np.int64) @ radix
        order = np.argsort(keys)
        sk = keys[order]
        q = rows.astype(np.int64) @ radix
        pos = np.searchsorted(sk, q)
        if (pos >= sk.size).any() or (sk[np.minimum(pos, sk.size - 1)] != q).any():
            raise GroupValidationError("product left the element set")
        return order[pos].astype(np.int32)
    index = {r.tobytes(): i for i, r in enumerate(table)}
    return np.array([index[r.tobytes()] for r in rows], dtype=np.int32)


def _closure_by_right_multiplication(identity, gens, mult, max_order):
    elements = [identity]
    index = {identity: 0}
    i = 0
    while i < len(elements):
        x = elements[i]
        for g in gens:
            y = mult(x, g)
            if y not in index:
                index[y] = len(elements)
                elements.append(y)
                _check_cap(len(elements), max_order)
        i += 1
    return elements, index


def build_from_permutations(
    degree: int,
    perm_gens: Iterable[Sequence[int]],
    max_order: int = DEFAULT_MAX_ORDER,
    name: str = "",
) -> FiniteGroup:
    """Group generated by permutations of ``range(degree)``, enumerated breadth first from the identity."""
    if degree < 1:
        raise ValueError("degree must be positive")
    gens = []
    for p in perm_gens:
        p = tuple(int(x) for x in p)
        if len(p) != degree or sorted(p) != list(range(degree)):
            raise ValueError(f"not a permutation of {degree} points: {p}")
        gens.append(p)
    identity = tuple(range(degree))
    elements, index = _closure_by_right_multiplication(
        identity, gens, lambda x, g: tuple(g[v] for v in x), max_order
    )
    P = np.array(elements, dtype=np.int64).reshape(len(elements), degree)
    n = len(elements)
    mul = np.empty((n, n), dtype=np.int32)
    for a in range(n):
        # (a*b)[p] = b[a[p]]
        mul[a] = _lookup_rows(P[:, P[a]], P, degree)
    gen_idx = tuple(dict.fromkeys(index[g] for g in gens if index[g] != 0))
    return FiniteGroup(
        mul=mul,
        inv=_inverse_table(mul),
        generators=gen_idx,
        element_names=tuple(cycle_string(e) for e in elements),
        elements=tuple(elements),
        name=name,
    )


def build_from_matrices(p: int, mat_gens, max_order: int = DEFAULT_MAX_ORDER, name: str = "") -> FiniteGroup:
    """Matrix group over GF(p) generated by square integer matrices."""
    gens = [np.asarray(m, dtype=np.int64) % p for m in mat_gens]
    dim = gens[0].shape[0]
    key = lambda m: tuple(int(v) for v in m.ravel())
    gkeys = [key(g) for g in gens]
    identity = key(np.eye(dim, dtype=np.int64))

    def mult(x, g):
        return key((np.array(x).reshape(dim, dim) @ np.array(g).reshape(dim, dim)) % p)

    elements, index = _closure_by_right_multiplication(identity, gkeys, mult, max_order)
    M = np.array(elements, dtype=np.int64).reshape(-1, dim, dim)
    n = len(elements)
    flat = M.reshape(n, dim * dim)
    mul = np.empty((n, n), dtype=np.int32)
    for a in range(n):
        prods = np.einsum("ij,bjk->bik", M[a], M) % p
        mul[a] = _lookup_rows(prods.reshape(n, dim * dim), flat, p)
    gen_idx = tuple(dict.fromkeys(index[g] for g in gkeys if index[g] != 0))
    names = tuple("[" + ";".join(" ".join(map(str, row)) for row in m.tolist()) + "]" for m in M)
    return FiniteGroup(mul, _inverse_table(mul), gen_idx, names, tuple(elements), name)


def build_abelian(factors: Sequence[int], max_order: int = DEFAULT_MAX_ORDER, name: str = "") -> FiniteGroup:
    """Direct product of cyclic groups; element index is the mixed-radix vector, last coordinate fastest."""
    factors = [int(f) for f in factors]
    if any(f < 1 for f in factors):
        raise ValueError("cyclic factors must be >= 1")
    n = int(np.prod(factors, dtype=np.int64)) if factors else 1
    _check_cap(n, max_order)
    coords = np.array(list(itertools.product(*[range(f) for f in factors])), dtype=np.int64).reshape(n, len(factors))
    strides = np.array([int(np.prod(factors[i + 1:], dtype=np.int64)) for i in range(len(factors))], dtype=np.int64)
    mods = np.array(factors, dtype=np.int64)
    mul = np.empty((n, n), dtype=np.int32)
    for a in range(n):
        mul[a] = ((coords[a] + coords) % mods) @ strides if factors else 0
    gens = tuple(int(strides[i]) for i, f in enumerate(factors) if f > 1)
    names = tuple("(" + ",".join(map(str, c)) + ")" for c in coords.tolist())
    return FiniteGroup(mul, _inverse_table(mul), gens, names, tuple(map(tuple, coords.tolist())),
                       name or "x".join(f"Z{f}" for f in factors) or "1")


def build_from_table(table, generators: Sequence[int] | None = None, max_order: int = DEFAULT_MAX_ORDER,
                     name: str = "") -> FiniteGroup:
    """Group from an explicit table; the identity is relabelled to index 0 if needed."""
    mul = np.asarray(table, dtype=np.int64)
    if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
        raise GroupValidationError("table must be a non-empty square array")
    n = mul.shape[0]
    _check_cap(n, max_order)
    if mul.min() < 0 or mul.max() >= n:
        raise GroupValidationError("table entry out of range")
    ar = np.arange(n)
    ids = [e for e in range(n) if np.array_equal(mul[e], ar) and np.array_equal(mul[:, e], ar)]
    if not ids:
        raise GroupValidationError("table has no two-sided identity")
    e = ids[0]
    relabel = ar.copy()
    relabel[[0, e]] = relabel[[e, 0]]
    # swap labels 0 and e
    mul = relabel[mul[np.ix_(relabel, relabel)]].astype(np.int32)
    rows, cols = np.nonzero(mul == 0)
    if rows.size != n or np.unique(rows).size != n:
        raise GroupValidationError("some element has no unique inverse")
    inv = np.empty(n, dtype=np.int32)
    inv[rows] = cols
    if generators is None:
        gens: list[int] = []
        mask = np.zeros(n, dtype=bool)
        mask[0] = True
        G0 = FiniteGroup(mul, inv, ())
        for x in range(n):
            if not mask[x]:
                gens.append(x)
                mask = _closure_mask(G0, gens)
    else:
        gens = [int(relabel[g]) for g in generators]
    return FiniteGroup(mul, inv, tuple(gens), name=name)


def direct_product(G: FiniteGroup, H: FiniteGroup, max_order: int = DEFAULT_MAX_ORDER, name: str = "") -> FiniteGroup:
    """``G x H`` with element ``(a, b)`` at index ``a*|H| + b``."""
    m = H.order
    n = G.order * m
    _check_cap(n, max_order)
    a = np.arange(n) // m
    b = np.arange(n) % m
    mul = (G.mul[a[:, None], a[None, :]] * m + H.mul[b[:, None], b[None, :]]).astype(np.int32)
    inv = (G.inv[a] * m + H.inv[b]).astype(np.int32)
    gens = tuple(g * m for g in G.generators) + tuple(h for h in H.generators)
    names = None
    if G.element_names is not None or H.element_names is not None:
        names = tuple(f"({G.name_of(int(x))},{H.name_of(int(y))})" for x, y in zip(a, b))
    return FiniteGroup(mul, inv, gens, names, None, name or f"{G.name}x{H.name}")


def subgroup_as_group(G: FiniteGroup, elements: Iterable[int]) -> tuple[FiniteGroup, Homomorphism]:
    """The subgroup on ``elements`` as a standalone group, with its inclusion into G."""
    elems = sorted(set(int(x) for x in elements) | {0})
    pos = {g: i for i, g in enumerate(elems)}
    arr = np.array(elems)
    sub = G.mul[np.ix_(arr, arr)]
    try:
        mul = np.vectorize(pos.__getitem__, otypes=[np.int32])(sub)
    except KeyError:
        raise ValueError("element set is not closed under multiplication") from None
    names = tuple(G.name_of(g) for g in elems) if G.element_names is not None else None
    H0 = FiniteGroup(mul, _inverse_table(mul), ())
    gens: list[int] = []
    mask = np.zeros(len(elems), dtype=bool)
    mask[0] = True
    for x in range(len(elems)):
        if not mask[x]:
            gens.append(x)
            mask = _closure_mask(H0, gens)
    H = FiniteGroup(mul, H0.inv, tuple(gens), names, None, f"sub({G.name})")
    return H, Homomorphism(H, G, arr.astype(np.int32))


# ---------------------------------------------------------------- closures

def _closure_mask(G: FiniteGroup, seed: Iterable[int]) -> np.ndarray:
    n = G.order
    mask = np.zeros(n, dtype=bool)
    mask[0] = True
    gens = np.unique(np.fromiter((int(s) for s in seed), dtype=np.int64))
    gens = gens[gens != 0]
    if gens.size == 0:
        return mask
    frontier = np.array([0])
    while frontier.size:
        prods = G.mul[np.ix_(frontier, gens)].ravel()
        new = np.unique(prods[~mask[prods]])
        mask[new] = True
        frontier = new
    return mask


def _orbit_mask(perms: np.ndarray, seed: Iterable[int], n: int) -> np.ndarray:
    mask = np.zeros(n, dtype=bool)
    frontier = np.unique(np.fromiter((int(s) for s in seed), dtype=np.int64))
    mask[frontier] = True
    while frontier.size:
        imgs = perms[:, frontier].ravel()
        new = np.unique(imgs[~mask[imgs]])
        mask[new] = True
        frontier = new
    return mask


def subgroup_closure(G: FiniteGroup, seed: Iterable[int]) -> frozenset[int]:
    return frozenset(np.flatnonzero(_closure_mask(G, seed)).tolist())


def _normal_closure_mask(G: FiniteGroup, omega: OperatorSet, seed: Iterable[int]) -> np.ndarray:
    seed = [int(s) for s in seed if int(s) != 0]
    if not seed:
        mask = np.zeros(G.order, dtype=bool)
        mask[0] = True
        return mask
    conj = _orbit_mask(omega.action_perms, seed, G.order)
    return _closure_mask(G, np.flatnonzero(conj))


def normal_closure(G: FiniteGroup, omega: OperatorSet | None, seed: Iterable[int]) -> frozenset[int]:
    """Smallest subgroup containing ``seed`` stable under conjugation and the operators."""
    omega = _operator(G, omega)
    return frozenset(np.flatnonzero(_normal_closure_mask(G, omega, seed)).tolist())


def commutator_subgroup(G: FiniteGroup) -> frozenset[int]:
    comms = np.zeros(G.order, dtype=bool)
    ar = np.arange(G.order)
    for a in range(G.order):
        # a^-1 b^-1 a b for all b
        comms[G.mul[G.mul[G.inv[a], G.inv[ar]], G.mul[a, ar]]] = True
    return subgroup_closure(G, np.flatnonzero(comms))


def center(G: FiniteGroup) -> frozenset[int]:
    commutes = (G.mul == G.mul.T).all(axis=1)
    return frozenset(np.flatnonzero(commutes).tolist())


def is_normal_subgroup(G: FiniteGroup, N: Iterable[int], omega: OperatorSet | None = None) -> bool:
    mask = np.zeros(G.order, dtype=bool)
    idx = np.array(sorted(set(int(x) for x in N)), dtype=np.int64)
    if idx.size == 0:
        return False
    mask[idx] = True
    if not mask[0] or not mask[G.mul[np.ix_(idx, idx)]].all() or not mask[G.inv[idx]].all():
        return False
    for g in range(G.order):
        if not mask[G.conjugation_perm(g)[idx]].all():
            return False
    if omega is not None:
        for a in omega.auto_gens:
            if not mask[a.perm[idx]].all():
                return False
    return True


def quotient(G: FiniteGroup, N: Iterable[int]) -> tuple[FiniteGroup, Homomorphism]:
    """Coset group ``G/N`` (identity coset first, cosets numbered by first element) and the projection."""
    N = sorted(set(int(x) for x in N))
    if not is_normal_subgroup(G, N):
        raise NotNormalError("N is not a normal subgroup")
    Narr = np.array(N)
    n = G.order
    coset = np.full(n, -1, dtype=np.int32)
    reps = []
    for g in range(n):
        if coset[g] < 0:
            coset[G.mul[g, Narr]] = len(reps)
            reps.append(g)
    reps = np.array(reps)
    qmul = coset[G.mul[np.ix_(reps, reps)]].astype(np.int32)
    gens = tuple(dict.fromkeys(int(coset[g]) for g in G.generators if coset[g] != 0))
    names = tuple(G.name_of(int(r)) + "N" for r in reps) if G.element_names is not None else None
    Q = FiniteGroup(qmul, _inverse_table(qmul), gens, names, None, f"{G.name}/N")
    return Q, Homomorphism(G, Q, coset)


def abelianization(G: FiniteGroup) -> tuple[FiniteGroup, Homomorphism]:
    Q, phi = quotient(G, commutator_subgroup(G))
    object.__setattr__(Q, "name", f"Ab({G.name})")
    return Q, phi


def induced_operator(omega: OperatorSet, phi: Homomorphism) -> OperatorSet:
    """Push operator generators through a surjection whose kernel is operator-stable."""
    Q = phi.target
    autos = []
    for a in omega.auto_gens:
        perm = np.full(Q.order, -1, dtype=np.int64)
        img = phi.map[a.perm]
        perm[phi.map] = img
        if (perm[phi.map] != img).any() or (perm < 0).any():
            raise ValueError("kernel is not stable under the operators")
        autos.append(Automorphism(Q, perm))
    return OperatorSet(Q, tuple(autos))


# ---------------------------------------------------------------- normal lattice

class NormalLattice:
    """All normal operator-subgroups, as joins of single-element normal closures.

    Every normal subgroup is the join of the closures of its elements, so
    closing the element closures under pairwise joins yields the whole lattice.
    """

    def __init__(self, omega: OperatorSet):
        G = omega.group
        self.group = G
        self.omega = omega
        n = G.order
        index: dict[bytes, int] = {}
        masks: list[np.ndarray] = []

        def intern(mask):
            key = np.packbits(mask).tobytes()
            if key not in index:
                index[key] = len(masks)
                masks.append(mask)
            return index[key]

        trivial = np.zeros(n, dtype=bool)
        trivial[0] = True
        intern(trivial)
        orbit_ids = omega.orbits
        reps = omega.orbit_reps
        rep_sub = {}
        for r in reps:
            rep_sub[r] = intern(_normal_closure_mask(G, omega, [r]))
        known = 0
        pairs: dict[tuple[int, int], int] = {}
        while known < len(masks):
            # join every new subgroup with everything seen so far
            upto = len(masks)
            for a in range(upto):
                for b in range(max(a, known), upto):
                    if (a, b) in pairs:
                        continue
                    m = masks[a] | masks[b]
                    joined = m if (m == masks[a]).all() or (m == masks[b]).all() else _closure_mask(G, np.flatnonzero(m))
                    pairs[(a, b)] = intern(joined)
            known = upto
        # canonical order: by size, then by sorted elements
        order = sorted(range(len(masks)), key=lambda i: (int(masks[i].sum()), np.flatnonzero(masks[i]).tolist()))
        remap = np.empty(len(masks), dtype=np.int64)
        remap[order] = np.arange(len(masks))
        self.masks = [masks[i] for i in order]
        s = len(masks)
        join = np.empty((s, s), dtype=np.int32)
        for (a, b), c in pairs.items():
            join[remap[a], remap[b]] = join[remap[b], remap[a]] = remap[c]
        self.join = join
        self.element_sub = np.array([remap[rep_sub[reps[orbit_ids[x]]]] for x in range(n)], dtype=np.int32)
        self.trivial_id = 0
        self.full_id = s - 1
        self.sizes = np.array([int(m.sum()) for m in self.masks])

    def __len__(self):
        return len(self.masks)

    def subgroup(self, i: int) -> frozenset[int]:
        return frozenset(np.flatnonzero(self.masks[i]).tolist())

    def closure_id(self, elements: Iterable[int]) -> int:
        s = self.trivial_id
        for e in elements:
            s = int(self.join[s, self.element_sub[e]])
        return s

    def contains(self, big: int, small: int) -> bool:
        return bool(self.join[big, small] == big)


def d_normal(G: FiniteGroup, omega: OperatorSet | None = None) -> int:
    """Minimal number of normal operator-generators, by search over increasing tuple length.

    Normal closures depend only on the operator orbits of the entries and not on
    their order, so tuples are drawn as multisets of orbit representatives; this
    subsumes pruning the first coordinate to one representative per orbit.
    """
    omega = _operator(G, omega)
    if G.order == 1:
        return 0
    lat = omega.lattice
    reps = [r for r in omega.orbit_reps if r != 0]
    subs = sorted(set(int(lat.element_sub[r]) for r in reps))
    bound = max(len(G.generators), 1)
    for t in range(1, bound + 1):
        for combo in itertools.combinations_with_replacement(subs, t):
            s = lat.trivial_id
            for c in combo:
                s = int(lat.join[s, c])
            if s == lat.full_id:
                return t
    return bound
