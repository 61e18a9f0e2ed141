"""Run-wide limits and defaults."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

DEFAULT_MAX_ORDER = 2048
DEFAULT_STRUCTURE_CAP = 512
DEFAULT_EXHAUSTIVE_CHECK_BOUND = 256
DEFAULT_STATE_BUDGET = 2**28
DEFAULT_SEED = 20030612
DEFAULT_MAX_PLIES = 64
DEFAULT_BURN_IN = 1000
DEFAULT_STRIDE = 10
DOT_VERTEX_LIMIT = 5000


class BudgetExceeded(RuntimeError):
    """Raised when a state space or group order exceeds its configured cap."""


@dataclass
class RunConfig:
    state_budget: int = DEFAULT_STATE_BUDGET
    max_order: int = DEFAULT_MAX_ORDER
    structure_cap: int = DEFAULT_STRUCTURE_CAP
    exhaustive_check_bound: int = DEFAULT_EXHAUSTIVE_CHECK_BOUND
    seed: int = DEFAULT_SEED
    conjugators: str = "gens"
    threads: int = 1
    cache_dir: Path | None = None
    outputs: dict[str, Path] = field(default_factory=dict)

    def __post_init__(self):
        for name in ("state_budget", "max_order", "structure_cap", "exhaustive_check_bound", "threads"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.conjugators not in ("gens", "all"):
            raise ValueError("conjugators must be 'gens' or 'all'")
