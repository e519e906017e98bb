"""Two-stage sampling and empirical risk minimization over sampled domains.

Training data is n i.i.d. domain draws from a meta-distribution, each carrying
m labeled points. The min-max learner picks the hypothesis whose worst error
across the sampled domains is smallest; the pooled baseline minimizes a
weighted average instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import (
    ZERO,
    Hypothesis,
    HypothesisClass,
    LabeledDistribution,
    LabeledSample,
    MetaDistribution,
    domain_error,
    empirical_error,
)
from .seeding import derive_seed, rng_for


@dataclass(frozen=True)
class TrainingSet:
    """Sampled domain indices (order preserved) with one sample per draw."""

    domain_indices: tuple[int, ...]
    samples: tuple[LabeledSample, ...]
    master_seed: int
    draw_seeds: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.domain_indices) != len(self.samples):
            raise ValueError("one sample per sampled domain required")
        if len(self.draw_seeds) != len(self.domain_indices):
            raise ValueError("one draw seed per sampled domain required")
        sizes = {len(s) for s in self.samples}
        if len(sizes) > 1:
            raise ValueError("all samples must have the same number of points")

    def __len__(self) -> int:
        return len(self.domain_indices)


@dataclass(frozen=True)
class ErrorTable:
    """Rows = hypotheses, columns = sampled domains; entries exact rationals."""

    entries: tuple[tuple[Fraction, ...], ...]
    mode: str

    def __post_init__(self) -> None:
        if self.mode not in ("empirical", "exact"):
            raise ValueError(f"table mode must be 'empirical' or 'exact', got {self.mode!r}")
        entries = tuple(tuple(Fraction(v) for v in row) for row in self.entries)
        if not entries or not entries[0]:
            raise ValueError("error table must have at least one row and one column")
        width = len(entries[0])
        if any(len(row) != width for row in entries):
            raise ValueError("error table rows must have equal length")
        for row in entries:
            for v in row:
                if not (0 <= v <= 1):
                    raise ValueError(f"error value {v} outside [0, 1]")
        object.__setattr__(self, "entries", entries)

    @property
    def columns(self) -> int:
        return len(self.entries[0])


def _inverse_cdf(cumulative: Sequence[Fraction], u: Fraction) -> int:
    # first index whose cumulative mass strictly exceeds u; zero-mass buckets
    # contribute no interval and are never selected
    for i, c in enumerate(cumulative):
        if u < c:
            return i
    return len(cumulative) - 1


def _cumulative(weights: Sequence[Fraction]) -> list[Fraction]:
    total = ZERO
    out = []
    for w in weights:
        total += w
        out.append(total)
    return out


def draw_domain_indices(
    p: MetaDistribution, n: int, master_seed: int
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """n i.i.d. domain indices by inverse CDF, with the per-draw seeds used."""
    if n < 1:
        raise ValueError("need at least one domain draw")
    cum = _cumulative(p.weights)
    indices = []
    seeds = []
    for i in range(n):
        seed = derive_seed(master_seed, "domain", i)
        u = Fraction(rng_for(master_seed, "domain", i).random())
        indices.append(_inverse_cdf(cum, u))
        seeds.append(seed)
    return tuple(indices), tuple(seeds)


def _sample_points(d: LabeledDistribution, m: int, master_seed: int, draw: int) -> LabeledSample:
    cum = _cumulative([a.mass for a in d.atoms])
    rng = rng_for(master_seed, "points", draw)
    points = []
    for _ in range(m):
        a = d.atoms[_inverse_cdf(cum, Fraction(rng.random()))]
        points.append((a.x, a.y))
    return LabeledSample(tuple(points))


def sample_training_set(p: MetaDistribution, n: int, m: int, seed: int) -> TrainingSet:
    """Draw n domains from p, then m labeled points from each drawn domain.

    Fully determined by (p, n, m, seed); per-draw seeds are derived by stable
    hashing so parallel replay cannot reorder randomness.
    """
    if m < 1:
        raise ValueError("need at least one point per sampled domain")
    indices, seeds = draw_domain_indices(p, n, seed)
    samples = tuple(
        _sample_points(p.family.domains[j], m, seed, i) for i, j in enumerate(indices)
    )
    return TrainingSet(indices, samples, seed, seeds)


def estimate_errors(hc: HypothesisClass, t: TrainingSet) -> ErrorTable:
    """Empirical error of every hypothesis on every sample of the training set."""
    rows = tuple(
        tuple(empirical_error(h, s) for s in t.samples) for h in hc.members
    )
    return ErrorTable(rows, "empirical")


def exact_error_table(
    hc: HypothesisClass, domains: Sequence[LabeledDistribution]
) -> ErrorTable:
    """True error of every hypothesis on each listed domain (mode 'exact')."""
    rows = tuple(tuple(domain_error(h, d) for d in domains) for h in hc.members)
    return ErrorTable(rows, "exact")


def minmax_erm(table: ErrorTable) -> int:
    """Index minimizing the worst column error; ties break to the lowest index."""
    best: Fraction | None = None
    best_idx = -1
    for i, row in enumerate(table.entries):
        worst = max(row)
        if best is None or worst < best:
            best = worst
            best_idx = i
    return best_idx


def pooled_erm(table: ErrorTable, weights: Sequence[Fraction]) -> int:
    """Index minimizing the weighted average column error; lowest index on ties."""
    weights = [Fraction(w) for w in weights]
    if len(weights) != table.columns:
        raise ValueError(f"{len(weights)} weights for {table.columns} columns")
    if any(w < 0 for w in weights):
        raise ValueError("column weights must be non-negative")
    if sum(weights, start=ZERO) != 1:
        raise ValueError("column weights must sum to 1")
    best: Fraction | None = None
    best_idx = -1
    for i, row in enumerate(table.entries):
        avg = sum((w * v for w, v in zip(weights, row)), start=ZERO)
        if best is None or avg < best:
            best = avg
            best_idx = i
    return best_idx


def uniform_weights(n: int) -> tuple[Fraction, ...]:
    if n < 1:
        raise ValueError("need at least one column")
    return tuple(Fraction(1, n) for _ in range(n))


def sample_size_for(epsilon: Fraction, delta: Fraction, n: int, class_size: int) -> int:
    """Per-domain sample size making every table entry epsilon-accurate with
    probability at least 1-delta (Hoeffding plus a union bound over all
    class_size * n table entries)."""
    epsilon = Fraction(epsilon)
    delta = Fraction(delta)
    if not (0 < epsilon < 1):
        raise ValueError("epsilon must lie in (0, 1)")
    if not (0 < delta < 1):
        raise ValueError("delta must lie in (0, 1)")
    if n < 1 or class_size < 1:
        raise ValueError("need at least one domain and one hypothesis")
    bound = math.log(2.0 * class_size * n / float(delta))
    return math.ceil(bound / (2.0 * float(epsilon) ** 2))
