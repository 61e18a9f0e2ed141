"""Freely reduced words in a free group of finite rank."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .group import FiniteGroup

Letter = tuple[int, int]

_ALIASES = {"x": 0, "y": 1, "z": 2}
_TOKEN = re.compile(r"\s*(?:(x(\d+))|([xyz]))(?:\^(-?\d+))?\s*")


def _free_reduce(letters: Sequence[Letter]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for g, e in letters:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


@dataclass(frozen=True)
class FreeWord:
    letters: tuple[Letter, ...]
    rank: int

    def __post_init__(self):
        letters = tuple((int(g), int(e)) for g, e in self.letters)
        for g, e in letters:
            if not 0 <= g < self.rank:
                raise ValueError(f"generator {g} outside rank {self.rank}")
            if e not in (1, -1):
                raise ValueError("exponents must be +1 or -1; expand powers first")
        object.__setattr__(self, "letters", _free_reduce(letters))

    @classmethod
    def generator(cls, g: int, rank: int, power: int = 1) -> "FreeWord":
        sign = 1 if power >= 0 else -1
        return cls(((g, sign),) * abs(power), rank)

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        if self.rank != other.rank:
            raise ValueError("rank mismatch")
        return FreeWord(self.letters + other.letters, self.rank)

    def inverse(self) -> "FreeWord":
        return FreeWord(tuple((g, -e) for g, e in reversed(self.letters)), self.rank)

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        if not self.letters:
            return "1"
        names = "xy" if self.rank == 2 else None
        parts = []
        for g, e in self.letters:
            sym = names[g] if names else f"x{g + 1}"
            parts.append(sym if e == 1 else sym + "^-1")
        return "*".join(parts)


def reduce(w: FreeWord) -> FreeWord:
    """Freely reduced form; words are kept reduced on construction, so this is idempotent."""
    return FreeWord(_free_reduce(w.letters), w.rank)


def parse_word(text: str, rank: int) -> FreeWord:
    """Parse ``x*y*x^-1`` / ``x1 x2^-1`` / ``x^3`` style words; ``1`` or empty is the identity."""
    text = text.strip()
    if text in ("", "1", "e"):
        return FreeWord((), rank)
    letters: list[Letter] = []
    for part in text.replace("*", " ").split():
        pos = 0
        while pos < len(part):
            m = _TOKEN.match(part, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse word near {part[pos:]!r}")
            g = int(m.group(2)) - 1 if m.group(2) else _ALIASES[m.group(3)]
            if not 0 <= g < rank:
                raise ValueError(f"generator {m.group(0).strip()} outside rank {rank}")
            power = int(m.group(4)) if m.group(4) else 1
            letters.extend([(g, 1 if power > 0 else -1)] * abs(power))
            pos = m.end()
    return FreeWord(tuple(letters), rank)


def akbulut_kirby(n: int) -> tuple[FreeWord, FreeWord]:
    """The pair ``(x y x y^-1 x^-1 y^-1, x^n y^-(n+1))`` in F_2."""
    if n < 2:
        raise ValueError("n must be >= 2")
    u = FreeWord(((0, 1), (1, 1), (0, 1), (1, -1), (0, -1), (1, -1)), 2)
    v = FreeWord(((0, 1),) * n + ((1, -1),) * (n + 1), 2)
    return u, v


def evaluate(w: FreeWord, images: Sequence[int], G: FiniteGroup) -> int:
    if len(images) != w.rank:
        raise ValueError(f"expected {w.rank} images, got {len(images)}")
    result = 0
    for g, e in w.letters:
        x = images[g] if e == 1 else int(G.inv[images[g]])
        result = int(G.mul[result, x])
    return result


def abelianized_vector(w: FreeWord) -> np.ndarray:
    vec = np.zeros(w.rank, dtype=np.int64)
    for g, e in w.letters:
        vec[g] += e
    return vec
