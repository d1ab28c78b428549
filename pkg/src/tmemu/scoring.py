"""Reprogrammability scoring: the emulation-count confidence curve
delta(x) = a*x / (a*x + 1) and two-group comparison statistics.

The score maps a count x of distinct non-trivial emulations to a confidence
in (0, 1): zero only at x = 0, strictly increasing, concave, and converging
to 1 as evidence accumulates. The belief parameter a in (0, 1] sets the
convergence rate and is held fixed per experiment.
"""

from __future__ import annotations

from dataclasses import dataclass


def delta(x: float, a: float = 1.0) -> float:
    """Confidence a*x / (a*x + 1) for emulation count x under belief a.

    x is typically an integer count but fractional values (e.g. group
    means) are accepted.
    """
    if x < 0:
        raise ValueError("count x must be >= 0")
    if not 0 < a <= 1:
        raise ValueError("belief a must be in (0, 1]")
    ax = a * x
    return ax / (ax + 1)


def _median(sorted_values: list[float]) -> float:
    n = len(sorted_values)
    mid = n // 2
    if n % 2:
        return float(sorted_values[mid])
    return (sorted_values[mid - 1] + sorted_values[mid]) / 2


def quartiles(values: list[int] | list[float]) -> tuple[float, float, float, float, float]:
    """(min, q1, median, q3, max) by the median-of-halves convention:
    the halves exclude the middle element when the count is odd; a
    single-element list has q1 = median = q3.
    """
    if not values:
        raise ValueError("quartiles of an empty list")
    s = sorted(values)
    med = _median(s)
    half = len(s) // 2
    if half == 0:
        q1 = q3 = med
    else:
        q1 = _median(s[:half])
        q3 = _median(s[-half:])
    return (float(s[0]), q1, med, q3, float(s[-1]))


@dataclass(frozen=True)
class ComparisonSummary:
    label: str
    counts: tuple[int, ...]
    minimum: float
    q1: float
    median: float
    q3: float
    maximum: float
    mean: float

    def to_json_dict(self) -> dict:
        return {
            "label": self.label,
            "counts": list(self.counts),
            "min": self.minimum,
            "q1": self.q1,
            "median": self.median,
            "q3": self.q3,
            "max": self.maximum,
            "mean": self.mean,
        }


def summarize(label: str, counts: list[int]) -> ComparisonSummary:
    if not counts:
        raise ValueError(f"group {label!r} is empty")
    mn, q1, med, q3, mx = quartiles(counts)
    return ComparisonSummary(
        label=label,
        counts=tuple(counts),
        minimum=mn,
        q1=q1,
        median=med,
        q3=q3,
        maximum=mx,
        mean=sum(counts) / len(counts),
    )


@dataclass(frozen=True)
class GroupComparison:
    """Busy-Beaver group vs control group with the strict ordering verdict.

    ``verdict`` is True iff both the mean and the median of the first group
    strictly exceed the second's. The delta of each group mean is reported
    alongside; it never feeds the verdict.
    """

    first: ComparisonSummary
    second: ComparisonSummary
    verdict: bool
    delta_first: float
    delta_second: float
    belief: float

    def to_json_dict(self) -> dict:
        return {
            "groups": [self.first.to_json_dict(), self.second.to_json_dict()],
            "verdict": self.verdict,
            "delta_means": {
                self.first.label: self.delta_first,
                self.second.label: self.delta_second,
            },
            "belief": self.belief,
        }


def compare_groups(
    bb_counts: list[int],
    rnd_counts: list[int],
    a: float = 1.0,
    labels: tuple[str, str] = ("busy-beaver", "random"),
) -> GroupComparison:
    """Summaries of both groups plus the strict mean-and-median verdict."""
    first = summarize(labels[0], bb_counts)
    second = summarize(labels[1], rnd_counts)
    return GroupComparison(
        first=first,
        second=second,
        verdict=first.mean > second.mean and first.median > second.median,
        delta_first=delta(first.mean, a),
        delta_second=delta(second.mean, a),
        belief=a,
    )
