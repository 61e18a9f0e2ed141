"""Andrews-Curtis graphs: moves, n-generating tuples, components and certificates.

A k-tuple is a plain tuple of element indices; its code is
``sum(entries[i] * n**i)``. Vertices of an AC-graph are the tuples whose
entries normally generate the group (relative to an operator set).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from . import kernels
from .config import DEFAULT_MAX_PLIES, DEFAULT_STATE_BUDGET, BudgetExceeded
from .group import (
    FiniteGroup,
    Homomorphism,
    OperatorSet,
    _normal_closure_mask,
    _operator,
    induced_operator,
)

KINDS = ("RightMult", "LeftMult", "Invert", "Conjugate")
_KIND_CODE = {"RightMult": 0, "LeftMult": 1, "Invert": 2, "Conjugate": 3}
_CHUNK = 1 << 22


class NotInNk(ValueError):
    """A tuple that was required to normally generate the group does not."""


class SearchInconclusive(RuntimeError):
    """Bidirectional search hit its ply cap before meeting."""


class CertificateError(RuntimeError):
    """A move sequence did not replay to its claimed endpoint."""


def encode(entries: Sequence[int], n: int) -> int:
    code = 0
    for e in reversed(entries):
        code = code * n + int(e)
    return code


def decode(code: int, n: int, k: int) -> tuple[int, ...]:
    out = []
    for _ in range(k):
        code, r = divmod(code, n)
        out.append(r)
    return tuple(out)


@dataclass(frozen=True)
class MoveSpec:
    kind: str
    i: int
    j: int | None = None
    sign: int = 1
    w: int | None = None
    auto: int | None = None

    def __post_init__(self):
        if self.kind not in _KIND_CODE:
            raise ValueError(f"unknown move kind {self.kind!r}")
        if self.kind in ("RightMult", "LeftMult"):
            if self.j is None or self.j == self.i:
                raise ValueError("multiplication moves need j != i")
            if self.sign not in (1, -1):
                raise ValueError("sign must be +1 or -1")
        if self.kind == "Conjugate" and (self.w is None) == (self.auto is None):
            raise ValueError("a conjugation names exactly one of an element w or an automorphism")

    def inverse(self, G: FiniteGroup) -> "MoveSpec":
        if self.kind in ("RightMult", "LeftMult"):
            return MoveSpec(self.kind, self.i, self.j, -self.sign)
        if self.kind == "Invert":
            return self
        if self.w is not None:
            return MoveSpec("Conjugate", self.i, w=int(G.inv[self.w]))
        return MoveSpec("Conjugate", self.i, sign=-self.sign, auto=self.auto)

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "i": self.i}
        if self.kind in ("RightMult", "LeftMult"):
            d.update(j=self.j, sign=self.sign)
        elif self.kind == "Conjugate":
            if self.w is not None:
                d["w"] = self.w
            else:
                d.update(auto=self.auto, sign=self.sign)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "MoveSpec":
        return cls(d["kind"], int(d["i"]), d.get("j"), int(d.get("sign", 1)), d.get("w"), d.get("auto"))


@dataclass(frozen=True, eq=False)
class MoveAlphabet:
    """Conjugators ``S u S^-1`` plus operator generators and their inverses."""

    group: FiniteGroup
    conjugator_elements: tuple[int, ...]
    operator: OperatorSet

    def __post_init__(self):
        G = self.group
        S = set(int(s) for s in self.conjugator_elements)
        S |= {int(G.inv[s]) for s in S}
        object.__setattr__(self, "conjugator_elements", tuple(sorted(S)))
        if self.operator.group is not G:
            raise ValueError("operator set acts on a different group")
        object.__setattr__(self, "_by_k", {})

    @classmethod
    def for_group(cls, G: FiniteGroup, policy: str = "gens", operator: OperatorSet | None = None) -> "MoveAlphabet":
        if policy == "gens":
            S = G.generators
        elif policy == "all":
            S = tuple(range(G.order))
        elif policy == "none":
            S = ()
        else:
            raise ValueError(f"unknown conjugator policy {policy!r}")
        return cls(G, tuple(S), _operator(G, operator))

    def descriptor(self) -> dict:
        return {"conjugators": list(self.conjugator_elements), "autos": self.operator.descriptor()}

    @cached_property
    def conjugator_moves(self) -> list[tuple[int | None, int | None, int]]:
        """``(w, auto, sign)`` triples in a fixed order."""
        out = [(w, None, 1) for w in self.conjugator_elements]
        for a in range(len(self.operator.auto_gens)):
            out += [(None, a, 1), (None, a, -1)]
        return out

    @cached_property
    def perms(self) -> np.ndarray:
        G = self.group
        rows = [G.conjugation_perm(w) for w in self.conjugator_elements]
        for a in self.operator.auto_gens:
            rows += [a.perm, a.inverse().perm]
        if not rows:
            return np.zeros((1, G.order), dtype=np.int32)
        return np.ascontiguousarray(np.stack(rows), dtype=np.int32)

    @cached_property
    def _conj_row(self) -> dict[int, int]:
        return {w: r for r, w in enumerate(self.conjugator_elements)}

    def perm_row(self, m: MoveSpec) -> int:
        if m.w is not None:
            try:
                return self._conj_row[m.w]
            except KeyError:
                raise ValueError(f"conjugator {m.w} not in the alphabet") from None
        if m.auto is None or not 0 <= m.auto < len(self.operator.auto_gens):
            raise ValueError("automorphism index outside the alphabet")
        return len(self.conjugator_elements) + 2 * m.auto + (0 if m.sign == 1 else 1)

    def move_specs(self, k: int) -> list[MoveSpec]:
        key = ("specs", k)
        if key not in self._by_k:
            self._by_k[key] = self._build_specs(k)
        return self._by_k[key]

    def _build_specs(self, k: int) -> list[MoveSpec]:
        specs = []
        for kind in ("RightMult", "LeftMult"):
            for i in range(k):
                for j in range(k):
                    if i != j:
                        specs += [MoveSpec(kind, i, j, 1), MoveSpec(kind, i, j, -1)]
        specs += [MoveSpec("Invert", i) for i in range(k)]
        for i in range(k):
            for w, a, s in self.conjugator_moves:
                specs.append(MoveSpec("Conjugate", i, sign=s, w=w, auto=a))
        return specs

    def kernel_moves(self, k: int) -> tuple[np.ndarray, ...]:
        key = ("kernel", k)
        if key not in self._by_k:
            self._by_k[key] = self._build_kernel_moves(k)
        return self._by_k[key]

    def _build_kernel_moves(self, k: int) -> tuple[np.ndarray, ...]:
        specs = self.move_specs(k)
        kind = np.array([_KIND_CODE[m.kind] for m in specs], dtype=np.int8)
        pos_i = np.array([m.i for m in specs], dtype=np.int32)
        pos_j = np.array([m.j if m.j is not None else 0 for m in specs], dtype=np.int32)
        aux = np.array([self.perm_row(m) if m.kind == "Conjugate" else (0 if m.sign == 1 else 1) for m in specs],
                       dtype=np.int32)
        return kind, pos_i, pos_j, aux

    def pushforward(self, phi: Homomorphism) -> "MoveAlphabet":
        """Alphabet on ``phi.target`` with element conjugators mapped through ``phi``."""
        return MoveAlphabet(
            phi.target,
            tuple(int(phi.map[w]) for w in self.conjugator_elements),
            induced_operator(self.operator, phi),
        )


def apply_move(t: Sequence[int], m: MoveSpec, alphabet: MoveAlphabet) -> tuple[int, ...]:
    G = alphabet.group
    k = len(t)
    if not 0 <= m.i < k or (m.j is not None and m.kind != "Conjugate" and not 0 <= m.j < k):
        raise ValueError(f"move {m} does not fit a {k}-tuple")
    out = list(t)
    x = t[m.i]
    if m.kind == "RightMult":
        y = t[m.j] if m.sign == 1 else G.inv[t[m.j]]
        out[m.i] = G.mul[x, y]
    elif m.kind == "LeftMult":
        y = t[m.j] if m.sign == 1 else G.inv[t[m.j]]
        out[m.i] = G.mul[y, x]
    elif m.kind == "Invert":
        out[m.i] = G.inv[x]
    else:
        out[m.i] = alphabet.perms[alphabet.perm_row(m), x]
    return tuple(int(v) for v in out)


def neighbors(t: Sequence[int], alphabet: MoveAlphabet) -> list[tuple[int, ...]]:
    """Images of ``t`` under every move in the alphabet; duplicates and self-loops kept."""
    return [apply_move(t, m, alphabet) for m in alphabet.move_specs(len(t))]


def is_n_generating(t: Sequence[int], G: FiniteGroup, omega: OperatorSet | None = None) -> bool:
    omega = _operator(G, omega)
    return bool(_normal_closure_mask(G, omega, t).all())


def _check_budget(n: int, k: int, budget: int) -> int:
    size = n**k
    if size >= 2**63:
        raise BudgetExceeded(f"{n}^{k} codes do not fit a 64-bit code")
    if size > budget:
        raise BudgetExceeded(f"{n}^{k} = {size} codes exceed the state budget {budget}")
    return size


def nk_codes(G: FiniteGroup, k: int, omega: OperatorSet | None = None,
             budget: int = DEFAULT_STATE_BUDGET) -> np.ndarray:
    """Sorted codes of all n-generating k-tuples."""
    omega = _operator(G, omega)
    n = G.order
    size = _check_budget(n, k, budget)
    lat = omega.lattice
    sub = lat.element_sub.astype(np.int64)
    join = lat.join
    parts = []
    for start in range(0, size, _CHUNK):
        c = np.arange(start, min(size, start + _CHUNK), dtype=np.int64)
        s = np.full(c.size, lat.trivial_id, dtype=np.int64)
        rem = c.copy()
        for _ in range(k):
            s = join[s, sub[rem % n]]
            rem //= n
        parts.append(c[s == lat.full_id])
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)


def enumerate_nk(G: FiniteGroup, k: int, omega: OperatorSet | None = None,
                 budget: int = DEFAULT_STATE_BUDGET) -> Iterator[tuple[int, ...]]:
    n = G.order
    for c in nk_codes(G, k, omega, budget).tolist():
        yield decode(c, n, k)


@dataclass(eq=False)
class ComponentTable:
    """Partition of N_k into components; ``codes`` sorted, ``ids`` parallel to it."""

    n: int
    k: int
    codes: np.ndarray
    ids: np.ndarray
    reps: np.ndarray
    group_hash: str = ""
    alphabet: dict = field(default_factory=dict)

    @property
    def component_count(self) -> int:
        return int(self.reps.size)

    @property
    def vertex_count(self) -> int:
        return int(self.codes.size)

    def __contains__(self, code) -> bool:
        i = np.searchsorted(self.codes, code)
        return bool(i < self.codes.size and self.codes[i] == code)

    def label(self, code: int) -> int:
        i = int(np.searchsorted(self.codes, code))
        if i >= self.codes.size or self.codes[i] != code:
            raise KeyError(f"code {code} is not a vertex")
        return int(self.ids[i])

    def label_of(self, entries: Sequence[int]) -> int:
        return self.label(encode(entries, self.n))

    def labels_of_codes(self, codes: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self.codes, codes)
        idx = np.minimum(idx, max(self.codes.size - 1, 0))
        if self.codes.size == 0 or (self.codes[idx] != codes).any():
            raise KeyError("some codes are not vertices")
        return self.ids[idx]

    def as_dict(self) -> dict[int, int]:
        return dict(zip(self.codes.tolist(), self.ids.tolist()))

    def members(self, cid: int) -> np.ndarray:
        return self.codes[self.ids == cid]

    def __eq__(self, other):
        if not isinstance(other, ComponentTable):
            return NotImplemented
        return (self.n, self.k) == (other.n, other.k) and np.array_equal(self.codes, other.codes) \
            and np.array_equal(self.ids, other.ids) and np.array_equal(self.reps, other.reps)


def _dense_index(codes: np.ndarray, space: int):
    # flat code -> vertex array when N_k is dense enough, else binary search
    if codes.size * 16 < space:
        return None
    idx = np.full(space, -1, dtype=np.int64)
    idx[codes] = np.arange(codes.size, dtype=np.int64)
    return idx


def components(G: FiniteGroup, k: int, alphabet: MoveAlphabet | None = None,
               budget: int = DEFAULT_STATE_BUDGET, backend: str | None = None) -> ComponentTable:
    """Exhaustive component labelling of the AC-graph on N_k.

    Component ids are numbered so that their smallest codes increase.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    alphabet = alphabet or MoveAlphabet.for_group(G)
    if alphabet.group is not G:
        raise ValueError("alphabet belongs to a different group")
    codes = nk_codes(G, k, alphabet.operator, budget)
    impl = kernels.get_backend(backend)
    roots = impl.label_components(codes, G.order, k, G.mul, G.inv, alphabet.perms,
                                  *alphabet.kernel_moves(k), dense_index=_dense_index(codes, G.order**k))
    uniq, ids = np.unique(roots, return_inverse=True)
    return ComponentTable(G.order, k, codes, ids.astype(np.int32).reshape(-1), codes[uniq],
                          G.table_hash, alphabet.descriptor())


# ---------------------------------------------------------------- certificates

@dataclass
class Certificate:
    start: tuple[int, ...]
    end: tuple[int, ...]
    moves: list[MoveSpec]

    def __len__(self):
        return len(self.moves)

    def replay(self, alphabet: MoveAlphabet, start: Sequence[int] | None = None) -> tuple[int, ...]:
        t = tuple(self.start if start is None else start)
        for m in self.moves:
            t = apply_move(t, m, alphabet)
        return t

    def check(self, alphabet: MoveAlphabet) -> None:
        got = self.replay(alphabet)
        if got != tuple(self.end):
            raise CertificateError(f"replay ended at {got}, expected {tuple(self.end)}")

    def to_list(self) -> list[dict]:
        return [m.to_dict() for m in self.moves]


def _bidirectional_path(U, V, alphabet, max_plies):
    G = alphabet.group
    n = G.order
    k = len(U)
    specs = alphabet.move_specs(k)
    cu, cv = encode(U, n), encode(V, n)
    fwd = {cu: None}   # code -> (parent code, move parent->code)
    bwd = {cv: None}   # code -> (next code toward V, move code->next)
    tuples = {cu: tuple(U), cv: tuple(V)}
    f_front, b_front = [cu], [cv]
    plies = 0
    meet = cu if cu == cv else None
    while meet is None:
        if plies >= max_plies:
            raise SearchInconclusive(f"no path within {max_plies} plies")
        if not f_front or not b_front:
            return None
        forward = len(f_front) <= len(b_front)
        front, seen, other = (f_front, fwd, bwd) if forward else (b_front, bwd, fwd)
        nxt = []
        for c in front:
            t = tuples[c]
            for m in specs:
                s = apply_move(t, m, alphabet)
                cs = encode(s, n)
                if cs in seen:
                    continue
                seen[cs] = (c, m) if forward else (c, m.inverse(G))
                tuples[cs] = s
                nxt.append(cs)
                if cs in other:
                    meet = cs
                    break
            if meet is not None:
                break
        plies += 1
        if forward:
            f_front = nxt
        else:
            b_front = nxt
    moves: list[MoveSpec] = []
    c = meet
    while fwd[c] is not None:
        p, m = fwd[c]
        moves.append(m)
        c = p
    moves.reverse()
    c = meet
    while bwd[c] is not None:
        nx, m = bwd[c]
        moves.append(m)
        c = nx
    return moves


def equivalent(U: Sequence[int], V: Sequence[int], alphabet: MoveAlphabet, table: ComponentTable | None = None,
               max_plies: int = DEFAULT_MAX_PLIES, budget: int = DEFAULT_STATE_BUDGET) -> Certificate | None:
    """Certificate carrying U to V, or None when they lie in different components.

    "Different" is decided only from the component table; a search that runs
    out of plies raises SearchInconclusive instead.
    """
    G = alphabet.group
    U, V = tuple(int(x) for x in U), tuple(int(x) for x in V)
    if len(U) != len(V):
        raise ValueError("tuples differ in length")
    for t in (U, V):
        if not is_n_generating(t, G, alphabet.operator):
            raise NotInNk(f"{t} does not normally generate the group")
    if U == V:
        return Certificate(U, V, [])
    if table is None:
        table = components(G, len(U), alphabet, budget)
    if table.label_of(U) != table.label_of(V):
        return None
    moves = _bidirectional_path(U, V, alphabet, max_plies)
    if moves is None:
        raise CertificateError("search exhausted a component that the table says is shared")
    cert = Certificate(U, V, moves)
    cert.check(alphabet)
    return cert


def project_tuple(phi: Homomorphism, t: Sequence[int]) -> tuple[int, ...]:
    return tuple(int(phi.map[x]) for x in t)


def lift_equivalence_check(phi: Homomorphism, U: Sequence[int], V: Sequence[int], cert: Certificate,
                           alphabet: MoveAlphabet) -> bool:
    """Replay a source certificate in the quotient and confirm it carries phi(U) to phi(V).

    Element conjugators are mapped through ``phi``; operator moves act through
    the induced operators.
    """
    if tuple(cert.start) != tuple(U) or tuple(cert.end) != tuple(V):
        raise CertificateError("certificate endpoints do not match U and V")
    cert.check(alphabet)
    target = alphabet.pushforward(phi)
    t = project_tuple(phi, U)
    for m in cert.moves:
        if m.kind == "Conjugate" and m.w is not None:
            m = MoveSpec("Conjugate", m.i, w=int(phi.map[m.w]))
        t = apply_move(t, m, target)
    return t == project_tuple(phi, V)
