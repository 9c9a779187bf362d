"""Pipeline parameters and the derived thresholds.

In ``strict`` mode every threshold takes its literal value.  In ``scaled``
mode the large absolute constants (short-path cap, segment lengths, closure
and phase budgets) are multiplied by ``scale`` so the pipeline can run at
desk-scale ``n``; each scaled inequality is still evaluated and logged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

MAX_SCALED_K = 3


def _log2(x):
    return math.log2(x) if x > 1 else 0.0


@dataclass(frozen=True)
class Parameters:
    k: int
    l: int
    n1: int
    n2: int
    mode: str = "scaled"
    scale: float = 0.01
    c: int | None = None
    heuristic: bool = False
    jobs: int = 1
    short_budget: int = 200_000
    fan_budget: int = 200_000
    fan_size: int | None = None
    reserved_per_index: int | None = None
    long_gate_k: int | None = None

    def __post_init__(self):
        if self.k < 1 or self.l < 1:
            raise ValueError("k and l must be positive")
        if self.mode not in ("strict", "scaled"):
            raise ValueError("mode must be 'strict' or 'scaled'")
        if self.scale <= 0:
            raise ValueError("scale must be positive")
        if self.n1 < 0 or self.n2 < 0:
            raise ValueError("target part sizes must be non-negative")
        if self.mode == "scaled" and self.k > MAX_SCALED_K:
            raise ValueError(f"scaled mode supports k <= {MAX_SCALED_K}; got k={self.k}")
        if self.fan_size is not None and self.fan_size < self.long_family:
            raise ValueError(f"fan_size {self.fan_size} is below the kept family size {self.long_family}")

    # -- basic derived quantities ------------------------------------
    @property
    def strict(self) -> bool:
        return self.mode == "strict"

    @property
    def log_term(self) -> float:
        """``log2(2kl)``, the logarithm appearing in every threshold."""
        return _log2(2 * self.k * self.l)

    @property
    def f(self) -> float:
        return self.k * (self.k + self.l) * self.log_term

    @property
    def spine_cap(self) -> int:
        if self.c is not None:
            return self.c
        if self.strict:
            return self.strict_spine_cap()
        return 3

    @property
    def connectivity_threshold(self) -> float:
        return 1e7 * self.k * (self.k + self.l) ** 2 * self.log_term

    def strict_spine_cap(self) -> int:
        return math.ceil(math.log2(18000 * self.k ** 2)) + 2

    def adapted_spine_cap(self, min_degree: int) -> int:
        """Scaled-mode default: the largest cap whose degree hypothesis
        ``2^(c-1) l <= degree / 2`` holds, clamped to ``[3, strict cap]``."""
        if min_degree <= 0:
            return 3
        c = int(math.floor(math.log2(min_degree / self.l)))
        return max(3, min(c, self.strict_spine_cap()))

    def scaled(self, value: float) -> float:
        return value if self.strict else value * self.scale

    # -- lengths -----------------------------------------------------
    @property
    def window(self) -> int:
        """Size of a balanced window: ``2(k + l + 2)``."""
        return 2 * (self.k + self.l + 2)

    @property
    def short_cap(self) -> int:
        base = 1200 * (self.k + self.l) * self.log_term
        return math.ceil(self.scaled(base)) + 3 * self.l

    @property
    def segment_length(self) -> int:
        base = math.ceil(self.scaled(600 * (self.k + self.l) * self.log_term))
        # the two windows plus a middle part of at least 4(k+l+1) vertices
        return max(base, 2 * self.window + 4 * (self.k + self.l + 1))

    @property
    def incorrect_cap(self) -> int:
        return 2 * self.l + 2

    @property
    def num_indices(self) -> int:
        return 6 * self.k

    @property
    def reserved(self) -> int:
        return self.reserved_per_index or 5 * self.l

    @property
    def long_family(self) -> int:
        """Number of long paths kept per leftover index."""
        return max(math.ceil(self.scaled(800 * self.f)), self.reserved + 1)

    @property
    def long_fan(self) -> int:
        if self.fan_size is not None:
            return self.fan_size
        return max(math.ceil(self.scaled(32000 * self.f)), self.long_family)

    def index_class(self, i: int) -> int:
        """Class 0..5 of family index ``i`` (0-based); each class has k indices."""
        return i // self.k

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "l": self.l,
            "n1": self.n1,
            "n2": self.n2,
            "mode": self.mode,
            "scale": self.scale if not self.strict else 1,
            "c": self.spine_cap,
        }
