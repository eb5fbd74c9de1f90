"""Power-law gap lengths for the Denjoy blow-up."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.special import zeta


@dataclass(frozen=True)
class GapSchedule:
    """Gap lengths l_n = c * (|n| + 1)**(-s) for n in Z.

    ``c = 0`` is the degenerate schedule with no gaps (the map is then the
    rigid rotation); it exists for oracle comparisons.
    """

    c: float = 0.1
    s: float = 2.0

    def __post_init__(self):
        if not (self.c >= 0 and math.isfinite(self.c)):
            raise ValueError(f"gap amplitude must be finite and >= 0, got {self.c}")
        if not self.s > 1:
            raise ValueError(f"gap exponent must exceed 1 for a convergent schedule, got {self.s}")

    @property
    def degenerate(self) -> bool:
        return self.c == 0

    @cached_property
    def total_mass(self) -> float:
        """G = sum over n in Z of l_n = c * (2 zeta(s) - 1)."""
        return float(self.c * (2.0 * zeta(self.s) - 1.0))

    def length(self, n) -> np.ndarray:
        n = np.abs(np.asarray(n, dtype=np.float64))
        return self.c * (n + 1.0) ** (-self.s)

    def one_sided_tail(self, N: int) -> float:
        """Exact sum of l_n over n > N (one side), via the Hurwitz zeta function."""
        if self.degenerate:
            return 0.0
        return float(self.c * zeta(self.s, N + 2))

    def tail_bound(self, N: int) -> float:
        """Upper bound on sum over |n| > N of l_n: 2c (N+1)**(1-s) / (s-1)."""
        return 2.0 * self.c * (N + 1.0) ** (1.0 - self.s) / (self.s - 1.0)

    def to_dict(self) -> dict:
        return {"c": self.c, "s": self.s}
