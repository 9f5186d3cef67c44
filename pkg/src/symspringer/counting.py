"""Point counts over a tower of finite fields and their growth degree."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import InvalidInput, Undetermined

# ratio-logs further apart than this mean the counts are not c * q^(s d)
AGREEMENT = 0.5


@dataclass(frozen=True)
class PointCountTable:
    q: int
    counts: tuple[tuple[int, int], ...]
    fitted_degree: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple((int(s), int(c)) for s, c in self.counts))
        ss = [s for s, _ in self.counts]
        if any(b <= a for a, b in zip(ss, ss[1:])):
            raise InvalidInput("tower levels must be strictly increasing")
        if any(c <= 0 for _, c in self.counts):
            raise InvalidInput("point counts must be positive")

    def values(self) -> list[int]:
        return [c for _, c in self.counts]


def ratio_logs(table: PointCountTable) -> list[float]:
    """log_q(N_{s'} / N_s) / (s' - s) over consecutive tower levels."""
    lq = math.log(table.q)
    out = []
    for (s0, n0), (s1, n1) in zip(table.counts, table.counts[1:]):
        out.append(math.log(n1 / n0) / (lq * (s1 - s0)))
    return out


def estimate_dimension(table: PointCountTable) -> int:
    """Growth degree d with N(q^s) ~ c q^(s d).

    Later levels get more weight since the lower order terms fade there.
    """
    if len(table.counts) < 2:
        raise Undetermined("need at least two point counts")
    r = ratio_logs(table)
    if max(r) - min(r) >= AGREEMENT:
        raise Undetermined(f"ratio-logs {', '.join(f'{v:.3f}' for v in r)} disagree")
    weights = range(1, len(r) + 1)
    mean = sum(w * v for w, v in zip(weights, r)) / sum(weights)
    return int(math.floor(mean + 0.5))


def fit_table(q: int, counts: Sequence[tuple[int, int]]) -> PointCountTable:
    """Build a table and attach the fitted degree when one is determined."""
    table = PointCountTable(q, tuple(counts))
    try:
        d = estimate_dimension(table)
    except Undetermined:
        return table
    return PointCountTable(q, table.counts, d)
