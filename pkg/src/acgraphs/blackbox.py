"""Product replacement walk on a relativised AC-graph, emitting random tuple entries."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from . import kernels
from .acgraph import MoveAlphabet, NotInNk, is_n_generating
from .config import DEFAULT_BURN_IN, DEFAULT_STRIDE
from .group import FiniteGroup

MOVE_DISTRIBUTION = "uniform over (kind, i, j, sign, conjugator) move specs"


@dataclass(eq=False)
class WalkState:
    tuple: np.ndarray
    alphabet: MoveAlphabet
    seed: int
    rng: np.random.Generator = field(repr=False, default=None)
    steps_taken: int = 0
    backend: str | None = None

    @classmethod
    def start(cls, entries, alphabet: MoveAlphabet, seed: int, backend: str | None = None) -> "WalkState":
        G = alphabet.group
        t = np.array([int(x) for x in entries], dtype=np.int32)
        if not is_n_generating(t.tolist(), G, alphabet.operator):
            raise NotInNk("the walk must start inside N_k")
        return cls(t, alphabet, seed, np.random.default_rng(seed), 0, backend)

    @property
    def k(self) -> int:
        return int(self.tuple.size)

    @property
    def entries(self) -> tuple[int, ...]:
        return tuple(int(x) for x in self.tuple)

    def _tables(self):
        G = self.alphabet.group
        return (G.mul, G.inv, self.alphabet.perms, *self.alphabet.kernel_moves(self.k))

    @property
    def move_count(self) -> int:
        return len(self.alphabet.move_specs(self.k))


def walk_step(s: WalkState, steps: int = 1) -> WalkState:
    """Apply uniformly drawn moves in place; returns the same state."""
    choices = s.rng.integers(0, s.move_count, size=steps)
    kernels.get_backend(s.backend).apply_moves(s.tuple, *s._tables(), choices)
    s.steps_taken += steps
    return s


def sample_elements(s: WalkState, burn_in: int = DEFAULT_BURN_IN, count: int = 1,
                    stride: int = DEFAULT_STRIDE) -> np.ndarray:
    """Burn in, then every ``stride`` moves emit the entry at a uniformly random position."""
    if burn_in < 0 or stride < 0:
        raise ValueError("burn_in and stride must be non-negative")
    if count < 1:
        raise ValueError("count must be at least 1")
    total = burn_in + count * stride
    choices = s.rng.integers(0, s.move_count, size=total)
    coords = s.rng.integers(0, s.k, size=count)
    out = kernels.get_backend(s.backend).run_sampler(s.tuple, *s._tables(), choices, burn_in, stride, coords)
    s.steps_taken += total
    return out


@dataclass
class UniformityReport:
    counts: list[int]
    samples: int
    chi_square: float
    dof: int
    p_value: float
    low_power: bool
    move_distribution: str = MOVE_DISTRIBUTION

    def to_dict(self) -> dict:
        return {
            "move_distribution": self.move_distribution,
            "samples": self.samples,
            "chi_square": self.chi_square,
            "dof": self.dof,
            "p_value": self.p_value,
            "low_power": self.low_power,
            "counts": self.counts,
        }


def uniformity_report(samples, G: FiniteGroup) -> UniformityReport:
    samples = np.asarray(samples, dtype=np.int64)
    n = G.order
    counts = np.bincount(samples, minlength=n)
    if counts.size > n:
        raise ValueError("sample outside the group")
    if n == 1:
        return UniformityReport(counts.tolist(), int(samples.size), 0.0, 0, 1.0, samples.size < 30)
    res = stats.chisquare(counts)
    return UniformityReport(
        counts=counts.tolist(),
        samples=int(samples.size),
        chi_square=float(res.statistic),
        dof=n - 1,
        p_value=float(res.pvalue),
        low_power=bool(samples.size < 30 * n),
    )
