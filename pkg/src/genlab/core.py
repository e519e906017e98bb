"""Exact primitives: finite labeled distributions, hypothesis classes, error rates.

Every probability mass and error value in this package is a `fractions.Fraction`,
so all comparisons (strict or not) are exact. Instance spaces are finite and are
represented by their size; points are the integers 0..space-1, labels are 0/1.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class GenlabError(Exception):
    """Base class for structural errors raised by genlab."""


class SpaceMismatchError(GenlabError):
    """Operands live on different instance spaces."""


class CertificateError(GenlabError):
    """A certificate is malformed: bad indices, sparse witness map, wrong arity."""


class ConstructionError(GenlabError):
    """A generator cannot produce an object satisfying its contract."""


class ConfigError(GenlabError):
    """An experiment configuration violates a runtime precondition."""


def _check_space(size: int) -> None:
    if not isinstance(size, int) or size < 1:
        raise ValueError(f"instance space size must be a positive integer, got {size!r}")


@dataclass(frozen=True)
class Hypothesis:
    """A total binary labeling of the instance space."""

    labels: tuple[int, ...]

    def __post_init__(self) -> None:
        labels = tuple(self.labels)
        if len(labels) < 1:
            raise ValueError("hypothesis needs at least one instance")
        if any(v not in (0, 1) for v in labels):
            raise ValueError("hypothesis labels must be 0 or 1")
        object.__setattr__(self, "labels", labels)

    @property
    def space(self) -> int:
        return len(self.labels)

    def __call__(self, x: int) -> int:
        return self.labels[x]


@dataclass(frozen=True)
class HypothesisClass:
    """An ordered, duplicate-free collection of hypotheses on one space."""

    space: int
    members: tuple[Hypothesis, ...]

    def __post_init__(self) -> None:
        _check_space(self.space)
        members = tuple(self.members)
        if not members:
            raise ValueError("hypothesis class must be non-empty")
        for i, h in enumerate(members):
            if h.space != self.space:
                raise SpaceMismatchError(
                    f"member {i} labels {h.space} instances, class space is {self.space}"
                )
        if len({h.labels for h in members}) != len(members):
            raise ValueError("hypothesis class members must be pairwise distinct labelings")
        object.__setattr__(self, "members", members)

    def __len__(self) -> int:
        return len(self.members)


class Atom(NamedTuple):
    """Point mass: instance x carries label y with probability `mass`."""

    x: int
    y: int
    mass: Fraction


@dataclass(frozen=True)
class LabeledDistribution:
    """A finite distribution over labeled instances (a "domain").

    Atoms are canonicalized: sorted by (x, y), strictly positive masses, masses
    sum to exactly 1. Equality is therefore canonical equality.
    """

    space: int
    atoms: tuple[Atom, ...]

    def __post_init__(self) -> None:
        _check_space(self.space)
        atoms = tuple(sorted(Atom(x, y, Fraction(m)) for (x, y, m) in self.atoms))
        if not atoms:
            raise ValueError("distribution needs at least one atom")
        seen: set[tuple[int, int]] = set()
        total = ZERO
        for a in atoms:
            if not (0 <= a.x < self.space):
                raise ValueError(f"atom instance {a.x} outside space of size {self.space}")
            if a.y not in (0, 1):
                raise ValueError(f"atom label must be 0 or 1, got {a.y}")
            if a.mass <= 0:
                raise ValueError(f"atom mass must be positive, got {a.mass}")
            if (a.x, a.y) in seen:
                raise ValueError(f"duplicate atom for (x={a.x}, y={a.y})")
            seen.add((a.x, a.y))
            total += a.mass
        if total != 1:
            raise ValueError(f"atom masses must sum to 1, got {total}")
        object.__setattr__(self, "atoms", atoms)

    def support(self) -> tuple[int, ...]:
        """Distinct instances carrying mass, ascending."""
        return tuple(sorted({a.x for a in self.atoms}))


@dataclass(frozen=True)
class DomainFamily:
    """An ordered list of domains sharing one instance space. May be empty."""

    space: int
    domains: tuple[LabeledDistribution, ...]

    def __post_init__(self) -> None:
        _check_space(self.space)
        domains = tuple(self.domains)
        for i, d in enumerate(domains):
            if d.space != self.space:
                raise SpaceMismatchError(
                    f"domain {i} has space {d.space}, family space is {self.space}"
                )
        object.__setattr__(self, "domains", domains)

    def __len__(self) -> int:
        return len(self.domains)


@dataclass(frozen=True)
class MetaDistribution:
    """A distribution over a domain family: weight i is the mass of domain i."""

    family: DomainFamily
    weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        weights = tuple(Fraction(w) for w in self.weights)
        if len(weights) != len(self.family):
            raise ValueError(
                f"{len(weights)} weights for {len(self.family)} domains"
            )
        if any(w < 0 for w in weights):
            raise ValueError("weights must be non-negative")
        if sum(weights, start=ZERO) != 1:
            raise ValueError("weights must sum to exactly 1")
        object.__setattr__(self, "weights", weights)

    def support(self) -> tuple[int, ...]:
        """Indices of domains with positive weight."""
        return tuple(i for i, w in enumerate(self.weights) if w > 0)


@dataclass(frozen=True)
class LabeledSample:
    """A finite sequence of labeled points drawn from some domain."""

    points: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        points = tuple((int(x), int(y)) for (x, y) in self.points)
        for x, y in points:
            if x < 0:
                raise ValueError("sample instances must be non-negative")
            if y not in (0, 1):
                raise ValueError("sample labels must be 0 or 1")
        object.__setattr__(self, "points", points)

    def __len__(self) -> int:
        return len(self.points)


def domain_error(h: Hypothesis, d: LabeledDistribution) -> Fraction:
    """Exact misclassification mass of h under d."""
    if h.space != d.space:
        raise SpaceMismatchError(f"hypothesis space {h.space} != domain space {d.space}")
    return sum((a.mass for a in d.atoms if h.labels[a.x] != a.y), start=ZERO)


def empirical_error(h: Hypothesis, s: LabeledSample) -> Fraction:
    """Fraction of sample points h mislabels, as an exact rational."""
    if len(s) == 0:
        raise ValueError("empirical error over an empty sample is undefined")
    mistakes = sum(1 for (x, y) in s.points if h.labels[x] != y)
    return Fraction(mistakes, len(s))


def flip_labels(d: LabeledDistribution) -> LabeledDistribution:
    """The domain with every label complemented; masses untouched."""
    return LabeledDistribution(d.space, tuple(Atom(a.x, 1 - a.y, a.mass) for a in d.atoms))


def mix(d0: LabeledDistribution, d1: LabeledDistribution, lam: Fraction) -> LabeledDistribution:
    """Convex combination (1-lam)*d0 + lam*d1 with atom merging."""
    if d0.space != d1.space:
        raise SpaceMismatchError(f"cannot mix spaces {d0.space} and {d1.space}")
    lam = Fraction(lam)
    if not (0 <= lam <= 1):
        raise ValueError(f"mixture weight must lie in [0, 1], got {lam}")
    acc: dict[tuple[int, int], Fraction] = {}
    for scale, d in ((ONE - lam, d0), (lam, d1)):
        if scale == 0:
            continue
        for a in d.atoms:
            key = (a.x, a.y)
            acc[key] = acc.get(key, ZERO) + scale * a.mass
    atoms = tuple(Atom(x, y, m) for (x, y), m in acc.items() if m > 0)
    return LabeledDistribution(d0.space, atoms)


def domain_risk(p: MetaDistribution, tau: Fraction, h: Hypothesis) -> Fraction:
    """Mass of domains on which h's error strictly exceeds tau."""
    if h.space != p.family.space:
        raise SpaceMismatchError(
            f"hypothesis space {h.space} != family space {p.family.space}"
        )
    tau = Fraction(tau)
    total = ZERO
    for w, d in zip(p.weights, p.family.domains):
        if w > 0 and domain_error(h, d) > tau:
            total += w
    return total


def optimal_tau(p: MetaDistribution, hc: HypothesisClass) -> tuple[Fraction, int]:
    """Smallest threshold with zero domain risk, with its achieving hypothesis.

    Returns (min over h of max error over p's support, index of the first
    hypothesis achieving it). Ties break to the lowest index.
    """
    if hc.space != p.family.space:
        raise SpaceMismatchError(
            f"class space {hc.space} != family space {p.family.space}"
        )
    support = p.support()
    if not support:
        raise ValueError("meta-distribution has empty support")
    best: Fraction | None = None
    best_idx = -1
    for i, h in enumerate(hc.members):
        worst = max(domain_error(h, p.family.domains[j]) for j in support)
        if best is None or worst < best:
            best = worst
            best_idx = i
    assert best is not None
    return best, best_idx
