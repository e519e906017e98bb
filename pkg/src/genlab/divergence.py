"""Error-gap divergence between domains, greedy covers, and smooth families.

The divergence between two domains is the largest gap between their error
rates over the class; the thresholded variant restricts the sup to hypotheses
that are reasonable (error at most tau) on at least one side. A small cover
under the thresholded divergence caps the family's shattering dimension.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import (
    Atom,
    ConstructionError,
    DomainFamily,
    HypothesisClass,
    LabeledDistribution,
    SpaceMismatchError,
    ZERO,
    domain_error,
)
from .dimensions import DimensionQuery, gdim
from .seeding import rng_for


class EmptyQualifyingSetWarning(UserWarning):
    """No hypothesis has error <= tau on either domain; divergence defined as 0."""


@dataclass(frozen=True)
class DivergenceQuery:
    """tau=None compares over the whole class; otherwise only hypotheses with
    min(error on d1, error on d2) <= tau enter the sup."""

    tau: Fraction | None = None

    def __post_init__(self) -> None:
        if self.tau is not None:
            tau = Fraction(self.tau)
            if not (0 <= tau <= 1):
                raise ValueError(f"tau must lie in [0, 1], got {tau}")
            object.__setattr__(self, "tau", tau)


@dataclass(frozen=True)
class Cover:
    """Center indices into a family; every member sits within `radius` of one."""

    center_indices: tuple[int, ...]
    radius: Fraction
    query: DivergenceQuery


def h_divergence(
    hc: HypothesisClass,
    d1: LabeledDistribution,
    d2: LabeledDistribution,
    q: DivergenceQuery = DivergenceQuery(),
) -> Fraction:
    """Largest error gap |err_d1(h) - err_d2(h)| over the (qualifying) class."""
    if hc.space != d1.space or hc.space != d2.space:
        raise SpaceMismatchError("class and both domains must share a space")
    best: Fraction | None = None
    for h in hc.members:
        e1 = domain_error(h, d1)
        e2 = domain_error(h, d2)
        if q.tau is not None and min(e1, e2) > q.tau:
            continue
        gap = abs(e1 - e2)
        if best is None or gap > best:
            best = gap
    if best is None:
        warnings.warn(
            f"no hypothesis qualifies at tau={q.tau}; divergence defined as 0",
            EmptyQualifyingSetWarning,
            stacklevel=2,
        )
        return ZERO
    return best


def greedy_cover(
    g: DomainFamily,
    hc: HypothesisClass,
    radius: Fraction,
    q: DivergenceQuery = DivergenceQuery(),
) -> Cover:
    """Repeatedly open the lowest-index uncovered domain as a center and mark
    everything within `radius` of it covered."""
    radius = Fraction(radius)
    if radius < 0:
        raise ValueError("cover radius must be non-negative")
    if hc.space != g.space:
        raise SpaceMismatchError(f"class space {hc.space} != family space {g.space}")
    uncovered = set(range(len(g)))
    centers = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EmptyQualifyingSetWarning)
        while uncovered:
            c = min(uncovered)
            centers.append(c)
            for j in sorted(uncovered):
                if h_divergence(hc, g.domains[j], g.domains[c], q) <= radius:
                    uncovered.discard(j)
    return Cover(tuple(centers), radius, q)


def cover_is_valid(cover: Cover, g: DomainFamily, hc: HypothesisClass) -> bool:
    """Re-check that every domain lies within the radius of some center."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EmptyQualifyingSetWarning)
        for j in range(len(g)):
            if not any(
                h_divergence(hc, g.domains[j], g.domains[c], cover.query) <= cover.radius
                for c in cover.center_indices
            ):
                return False
    return True


def cover_bound_check(
    g: DomainFamily, hc: HypothesisClass, tau: Fraction, alpha: Fraction
) -> tuple[int, int, bool]:
    """Shattering dimension vs. the size of a greedy alpha/2-cover under the
    tau-restricted divergence. Returns (dimension, cover size, dimension <= size)."""
    q = DimensionQuery(Fraction(tau), Fraction(alpha))
    dim = gdim(hc, g, q).dimension
    cover = greedy_cover(g, hc, q.alpha / 2, DivergenceQuery(q.tau))
    size = len(cover.center_indices)
    return dim, size, dim <= size


def _sqrt_upper(value: Fraction, scale: int = 10**4) -> Fraction:
    """Smallest a/scale with (a/scale)^2 >= value."""
    target = value.numerator * scale * scale
    a = math.isqrt((target + value.denominator - 1) // value.denominator)
    while a * a * value.denominator < target:
        a += 1
    return Fraction(a, scale)


def smooth_family(
    mu0: Sequence[Fraction],
    pstar: Sequence[int],
    gamma: Fraction,
    count: int,
    seed: int,
) -> DomainFamily:
    """Domains sharing the labeling pstar whose marginals stay multiplicatively
    within [gamma, 1/gamma] of the reference marginal mu0.

    Factors are drawn from a rational band [r, 1/r] with r >= sqrt(gamma), so
    the renormalized ratios always satisfy the band; draws that would exit it
    are rejected and retried as a guard.
    """
    gamma = Fraction(gamma)
    if not (0 < gamma <= 1):
        raise ValueError(f"gamma must lie in (0, 1], got {gamma}")
    if count < 1:
        raise ValueError("need at least one domain")
    mu0 = [Fraction(w) for w in mu0]
    space = len(mu0)
    if space < 1:
        raise ValueError("reference marginal must be non-empty")
    if any(w < 0 for w in mu0):
        raise ValueError("reference masses must be non-negative")
    if sum(mu0, start=ZERO) != 1:
        raise ValueError("reference masses must sum to 1")
    labels = [int(v) for v in pstar]
    if len(labels) != space or any(v not in (0, 1) for v in labels):
        raise ValueError("labeling must assign 0/1 to every instance")
    support = [x for x in range(space) if mu0[x] > 0]
    r = _sqrt_upper(gamma)
    band_width = Fraction(1) / r - r
    inv_gamma = Fraction(1) / gamma
    domains = []
    for i in range(count):
        rng = rng_for(seed, "smooth", i)
        for _ in range(1000):
            factors = {
                x: r + band_width * Fraction(rng.randrange(10**6 + 1), 10**6)
                for x in support
            }
            z = sum((factors[x] * mu0[x] for x in support), start=ZERO)
            masses = {x: factors[x] * mu0[x] / z for x in support}
            if all(gamma <= masses[x] / mu0[x] <= inv_gamma for x in support):
                break
        else:
            raise ConstructionError(
                f"could not satisfy the ratio band for gamma={gamma}"
            )
        atoms = tuple(Atom(x, labels[x], masses[x]) for x in support)
        domains.append(LabeledDistribution(space, atoms))
    return DomainFamily(space, tuple(domains))
