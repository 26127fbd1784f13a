"""Per-UE and per-cell outcome statistics: frame loss ratio, satisfied-UE
ratio, resource usage, and capacity extraction from a UE-count sweep."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy import stats as _sstats


@dataclass
class UeStats:
    ue_id: int
    frames_generated: int
    frames_on_time: int
    frames_lost: int
    flr: float | None = field(init=False)

    def __post_init__(self):
        self.flr = flr(self)


def flr(stats: UeStats) -> float | None:
    """Fraction of frames not delivered in time; None when nothing counted.

    Computed as a single integer-over-integer division so that a loss count
    hitting the target exactly (e.g. 1 in 100 against 0.01) compares equal.
    """
    if stats.frames_generated <= 0:
        return None
    return (stats.frames_generated - stats.frames_on_time) / stats.frames_generated


def satisfied(stats: UeStats, flr_qos: float) -> bool:
    return stats.flr is not None and stats.flr <= flr_qos


@dataclass
class RunResult:
    scenario: str
    policy: str
    point: float  # distance in m, or UE count
    seed: int
    ue_stats: list[UeStats]
    fr1_usage: float
    fr2_usage: float

    def satisfied_ratio(self, flr_qos: float) -> float:
        if not self.ue_stats:
            raise ValueError("run has no UEs")
        good = sum(1 for s in self.ue_stats if satisfied(s, flr_qos))
        return good / len(self.ue_stats)

    def overall_flr(self) -> float | None:
        gen = sum(s.frames_generated for s in self.ue_stats)
        if gen <= 0:
            return None
        on_time = sum(s.frames_on_time for s in self.ue_stats)
        return (gen - on_time) / gen


def satisfied_ratio(run: RunResult, flr_qos: float) -> float:
    return run.satisfied_ratio(flr_qos)


def capacity_from_sweep(points: list[tuple[int, float]]) -> int:
    """Largest UE count whose mean satisfied ratio exceeds 0.9; 0 if none.

    Expects (n_ue, mean_ratio) sorted by n_ue starting at 1.  Taken
    literally, so a non-monotone curve yields the largest passing count.
    """
    expected = 1
    for n, _ in points:
        if n != expected:
            raise ValueError("UE counts must be contiguous from 1")
        expected += 1
    best = 0
    for n, ratio in points:
        if ratio > 0.9:
            best = n
    return best


def is_monotone_nonincreasing(ratios: list[float], tol: float = 1e-12) -> bool:
    return all(b <= a + tol for a, b in zip(ratios, ratios[1:]))


def mean_ci(values: list[float], confidence: float = 0.95) -> tuple[float, float]:
    """Sample mean and Student-t confidence half-width across seeded runs."""
    n = len(values)
    if n == 0:
        raise ValueError("no values")
    mean = sum(values) / n
    if n == 1:
        return mean, float("nan")
    var = sum((v - mean) ** 2 for v in values) / (n - 1)
    t = _sstats.t.ppf(0.5 + confidence / 2.0, n - 1)
    return mean, t * math.sqrt(var / n)
