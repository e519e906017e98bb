"""Seeded experiment harnesses with exact risk bookkeeping.

Three suites: `scaling` tracks how the min-max learner's domain risk falls as
the number of sampled domains grows; `uniform-convergence` measures how often
some concept hides positive mass behind an all-zero sample; `lower-bound` hides
a random bit vector behind flipped domains and counts how often the learner is
wrong where it has not looked.

Every trial is reproducible from (config, master seed) alone: trial seeds are
derived by stable hashing, error accounting is exact, and worker threads only
change wall-clock time, never a single output byte.
"""
from __future__ import annotations

import csv
import io
import json
import math
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

from .constructions import (
    BASE_RATE,
    adversarial_meta,
    large_k_family,
    lower_bound_family,
    unanimous_point_mass,
)
from .core import (
    ConfigError,
    DomainFamily,
    HypothesisClass,
    MetaDistribution,
    ZERO,
    domain_error,
    domain_risk,
)
from .dimensions import DimensionQuery, induce_partial_class, partial_vc_dim
from .learner import (
    ErrorTable,
    draw_domain_indices,
    estimate_errors,
    minmax_erm,
    sample_size_for,
    sample_training_set,
)
from .seeding import derive_seed, rng_for
from .serialize import rational_from_str, rational_to_str

SCALING_GENERATORS = ("adversarial-meta", "uniform-shattered", "point-mass")


def _rational_or_none(value: Any) -> Fraction | None:
    if value is None:
        return None
    return rational_from_str(value) if isinstance(value, str) else Fraction(value)


def _check_grid(grid: Sequence[int]) -> tuple[int, ...]:
    grid = tuple(int(n) for n in grid)
    if not grid or any(n < 1 for n in grid):
        raise ValueError("n grid must list positive integers")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("n grid must be strictly increasing")
    return grid


@dataclass(frozen=True)
class ScalingConfig:
    """Risk-vs-n suite. tau=None picks the generator's natural threshold."""

    generator: str
    family_alpha: Fraction
    n_grid: tuple[int, ...]
    trials: int
    seed: int
    tau: Fraction | None = None
    alpha: Fraction | None = None
    gamma: Fraction | None = None
    gamma_coefficient: Fraction | None = None
    epsilon: Fraction | None = None
    delta: Fraction = Fraction(1, 10)
    tau_margin: Fraction = Fraction(1, 1000)

    def __post_init__(self) -> None:
        if self.generator not in SCALING_GENERATORS:
            raise ValueError(f"unknown generator {self.generator!r}")
        object.__setattr__(self, "n_grid", _check_grid(self.n_grid))
        if self.trials < 1:
            raise ValueError("need at least one trial")

    @classmethod
    def from_dict(cls, obj: dict[str, Any]) -> "ScalingConfig":
        allowed = {
            "experiment", "generator", "family_alpha", "n_grid", "trials", "seed",
            "tau", "alpha", "gamma", "gamma_coefficient", "epsilon", "delta",
            "tau_margin",
        }
        _reject_unknown(obj, allowed, "scaling")
        return cls(
            generator=obj["generator"],
            family_alpha=rational_from_str(obj["family_alpha"]),
            n_grid=tuple(obj["n_grid"]),
            trials=int(obj["trials"]),
            seed=int(obj["seed"]),
            tau=_rational_or_none(obj.get("tau")),
            alpha=_rational_or_none(obj.get("alpha")),
            gamma=_rational_or_none(obj.get("gamma")),
            gamma_coefficient=_rational_or_none(obj.get("gamma_coefficient")),
            epsilon=_rational_or_none(obj.get("epsilon")),
            delta=_rational_or_none(obj.get("delta")) or Fraction(1, 10),
            tau_margin=_rational_or_none(obj.get("tau_margin")) or Fraction(1, 1000),
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "experiment": "scaling",
            "generator": self.generator,
            "family_alpha": rational_to_str(self.family_alpha),
            "n_grid": list(self.n_grid),
            "trials": self.trials,
            "seed": self.seed,
            "tau": None if self.tau is None else rational_to_str(self.tau),
            "alpha": None if self.alpha is None else rational_to_str(self.alpha),
            "gamma": None if self.gamma is None else rational_to_str(self.gamma),
            "gamma_coefficient": (
                None if self.gamma_coefficient is None
                else rational_to_str(self.gamma_coefficient)
            ),
            "epsilon": None if self.epsilon is None else rational_to_str(self.epsilon),
            "delta": rational_to_str(self.delta),
            "tau_margin": rational_to_str(self.tau_margin),
        }


@dataclass(frozen=True)
class UniformConvergenceConfig:
    """Tail-frequency suite over the induced partial class of a built family."""

    family_alpha: Fraction
    n_grid: tuple[int, ...]
    trials: int
    seed: int
    tau: Fraction = BASE_RATE
    delta: Fraction = Fraction(1, 10)
    c_grid: tuple[int, ...] = (1, 2, 4, 8)

    def __post_init__(self) -> None:
        object.__setattr__(self, "n_grid", _check_grid(self.n_grid))
        if self.trials < 1:
            raise ValueError("need at least one trial")
        c_grid = tuple(int(c) for c in self.c_grid)
        if not c_grid or any(c < 1 for c in c_grid) or list(c_grid) != sorted(set(c_grid)):
            raise ValueError("c grid must be strictly increasing positive integers")
        object.__setattr__(self, "c_grid", c_grid)

    @classmethod
    def from_dict(cls, obj: dict[str, Any]) -> "UniformConvergenceConfig":
        allowed = {
            "experiment", "family_alpha", "n_grid", "trials", "seed", "tau",
            "delta", "c_grid",
        }
        _reject_unknown(obj, allowed, "uniform-convergence")
        return cls(
            family_alpha=rational_from_str(obj["family_alpha"]),
            n_grid=tuple(obj["n_grid"]),
            trials=int(obj["trials"]),
            seed=int(obj["seed"]),
            tau=_rational_or_none(obj.get("tau")) or BASE_RATE,
            delta=_rational_or_none(obj.get("delta")) or Fraction(1, 10),
            c_grid=tuple(obj.get("c_grid", (1, 2, 4, 8))),
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "experiment": "uniform-convergence",
            "family_alpha": rational_to_str(self.family_alpha),
            "n_grid": list(self.n_grid),
            "trials": self.trials,
            "seed": self.seed,
            "tau": rational_to_str(self.tau),
            "delta": rational_to_str(self.delta),
            "c_grid": list(self.c_grid),
        }


@dataclass(frozen=True)
class LowerBoundConfig:
    """Hidden-bit-vector suite at fixed n over a flipped family extension."""

    family_alpha: Fraction
    gamma: Fraction
    n: int
    trials: int
    seed: int
    tau: Fraction = BASE_RATE
    tau_margin: Fraction = Fraction(1, 1000)

    def __post_init__(self) -> None:
        if self.n < 1 or self.trials < 1:
            raise ValueError("need n >= 1 and at least one trial")
        if not (0 < self.gamma < Fraction(1, 8)):
            raise ValueError(f"gamma must lie in (0, 1/8), got {self.gamma}")

    @classmethod
    def from_dict(cls, obj: dict[str, Any]) -> "LowerBoundConfig":
        allowed = {
            "experiment", "family_alpha", "gamma", "n", "trials", "seed", "tau",
            "tau_margin",
        }
        _reject_unknown(obj, allowed, "lower-bound")
        return cls(
            family_alpha=rational_from_str(obj["family_alpha"]),
            gamma=rational_from_str(obj["gamma"]),
            n=int(obj["n"]),
            trials=int(obj["trials"]),
            seed=int(obj["seed"]),
            tau=_rational_or_none(obj.get("tau")) or BASE_RATE,
            tau_margin=_rational_or_none(obj.get("tau_margin")) or Fraction(1, 1000),
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "experiment": "lower-bound",
            "family_alpha": rational_to_str(self.family_alpha),
            "gamma": rational_to_str(self.gamma),
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "tau": rational_to_str(self.tau),
            "tau_margin": rational_to_str(self.tau_margin),
        }


def _reject_unknown(obj: dict[str, Any], allowed: set[str], name: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ValueError(f"unknown {name} config keys: {sorted(unknown)}")


@dataclass(frozen=True)
class TrialRow:
    experiment: str
    n: int
    trial: int
    seed: int
    hypothesis_index: int
    er_exact: Fraction
    max_train_err: Fraction | None
    extra: dict[str, Any]


@dataclass(frozen=True)
class ExperimentReport:
    experiment: str
    config: dict[str, Any]
    rows: tuple[TrialRow, ...]
    aggregates: dict[str, Any]

    def to_csv_text(self, float_digits: int = 12) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ["experiment", "n", "trial", "seed", "hypothesis_index", "er_exact",
             "er_float", "max_train_err", "extra"]
        )
        for r in self.rows:
            writer.writerow([
                r.experiment,
                r.n,
                r.trial,
                r.seed,
                r.hypothesis_index,
                rational_to_str(r.er_exact),
                format(float(r.er_exact), f".{float_digits}g"),
                "" if r.max_train_err is None else rational_to_str(r.max_train_err),
                json.dumps(r.extra, sort_keys=True, separators=(",", ":")),
            ])
        return buf.getvalue()

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "experiment": self.experiment,
            "config": self.config,
            "aggregates": self.aggregates,
            "rows": [
                {
                    "experiment": r.experiment,
                    "n": r.n,
                    "trial": r.trial,
                    "seed": r.seed,
                    "hypothesis_index": r.hypothesis_index,
                    "er_exact": rational_to_str(r.er_exact),
                    "er_float": float(r.er_exact),
                    "max_train_err": (
                        None if r.max_train_err is None
                        else rational_to_str(r.max_train_err)
                    ),
                    "extra": r.extra,
                }
                for r in self.rows
            ],
        }

    def series(self) -> list[dict[str, float]]:
        """Plot-ready (x, y) pairs; semantics depend on the experiment."""
        if self.experiment == "scaling":
            return [
                {"x": entry["n"], "y": entry["median_er_float"]}
                for entry in self.aggregates["per_n"]
            ]
        if self.experiment == "uniform-convergence":
            c = self.aggregates.get("calibrated_c") or self.aggregates["frequencies"][0]["C"]
            for block in self.aggregates["frequencies"]:
                if block["C"] == c:
                    return [{"x": e["n"], "y": e["freq"]} for e in block["per_n"]]
            return []
        return [{"x": r.trial, "y": float(r.er_exact)} for r in self.rows]


def _map_trials(items: Iterable[Any], fn: Callable[[Any], TrialRow], threads: int) -> list[TrialRow]:
    items = list(items)
    if threads <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


class _FamilyContext:
    """Precomputed exact errors for every (hypothesis, pool domain) pair."""

    def __init__(self, hc: HypothesisClass, pool: Sequence[Any]) -> None:
        self.hc = hc
        self.pool = tuple(pool)
        self.columns = tuple(
            tuple(domain_error(h, d) for h in hc.members) for d in self.pool
        )

    def table(self, pool_indices: Sequence[int]) -> ErrorTable:
        cols = [self.columns[i] for i in pool_indices]
        return ErrorTable(tuple(zip(*cols)), "exact")

    def minmax_over(self, pool_indices: Sequence[int]) -> tuple[int, Fraction]:
        table = self.table(pool_indices)
        idx = minmax_erm(table)
        return idx, max(table.entries[idx])


class _AdversarialContext:
    """Flipped extension of a built family plus the error pool for its support."""

    def __init__(self, family_alpha: Fraction, tau: Fraction) -> None:
        self.base = large_k_family(family_alpha)
        hc = self.base.slice.hypothesis_class
        clean = unanimous_point_mass(hc)
        self.lbf = lower_bound_family(
            hc, self.base.family, clean, self.base.certificate(), tau, family_alpha
        )
        pool = (clean,) + tuple(
            self.base.family.domains[j] for j in self.lbf.shattered_indices
        ) + self.lbf.flipped
        self.ctx = _FamilyContext(hc, pool)
        self._tau_star: dict[tuple[int, ...], Fraction] = {}

    @property
    def d(self) -> int:
        return self.lbf.d

    def pool_index(self, t: int, bit: int) -> int:
        return 1 + t + (self.d if bit else 0)

    def support_indices(self, bits: tuple[int, ...]) -> list[int]:
        return [0] + [self.pool_index(t, bit) for t, bit in enumerate(bits)]

    def tau_star(self, bits: tuple[int, ...]) -> Fraction:
        if bits not in self._tau_star:
            _, value = self.ctx.minmax_over(self.support_indices(bits))
            self._tau_star[bits] = value
        return self._tau_star[bits]


def _median_fraction(values: list[Fraction]) -> Fraction:
    return Fraction(statistics.median(values))


def _scaling_aggregates(
    cfg: ScalingConfig, rows: list[TrialRow], tau: Fraction, alpha: Fraction,
    extra: dict[str, Any],
) -> dict[str, Any]:
    floor = Fraction(1, 10 * max(cfg.n_grid))
    per_n = []
    medians = []
    for n in cfg.n_grid:
        ers = [r.er_exact for r in rows if r.n == n]
        med = _median_fraction(ers)
        mean = sum(ers, start=ZERO) / len(ers)
        medians.append(med)
        per_n.append({
            "n": n,
            "median_er": rational_to_str(med),
            "median_er_float": float(med),
            "mean_er": rational_to_str(mean),
            "mean_er_float": float(mean),
        })
    xs = [math.log(n) for n, med in zip(cfg.n_grid, medians) if med > 0]
    ys = [math.log(float(med + floor)) for med in medians if med > 0]
    slope = None
    if len(xs) >= 2:
        slope = statistics.linear_regression(xs, ys).slope
    inversions = sum(1 for a, b in zip(medians, medians[1:]) if b > a)
    agg = {
        "generator": cfg.generator,
        "tau": rational_to_str(tau),
        "alpha": rational_to_str(alpha),
        "floor": rational_to_str(floor),
        "per_n": per_n,
        "slope": slope,
        "fit_points": len(xs),
        "inversions": inversions,
    }
    agg.update(extra)
    return agg


def run_scaling(cfg: ScalingConfig, threads: int = 1) -> ExperimentReport:
    """Risk of the min-max learner as a function of the number of domain draws."""
    if cfg.generator == "adversarial-meta":
        return _run_scaling_adversarial(cfg, threads)
    return _run_scaling_fixed(cfg, threads)


def _resolve_alpha(cfg: ScalingConfig) -> Fraction:
    return cfg.alpha if cfg.alpha is not None else cfg.family_alpha / 2


def _scaling_gamma(cfg: ScalingConfig, n: int) -> Fraction:
    if cfg.gamma is not None:
        gamma = cfg.gamma
    else:
        coeff = cfg.gamma_coefficient
        if coeff is None:
            coeff = Fraction(1, 2)
        gamma = coeff / n
    if not (0 < gamma < Fraction(1, 8)):
        raise ConfigError(f"gamma at n={n} is {gamma}, must lie in (0, 1/8)")
    return gamma


def _check_margin(
    tau_star: Fraction, tau: Fraction, alpha: Fraction, epsilon: Fraction
) -> None:
    if tau_star > tau - alpha - 2 * epsilon:
        raise ConfigError(
            f"optimal threshold {tau_star} exceeds tau - alpha - 2*epsilon = "
            f"{tau - alpha - 2 * epsilon}; the margin precondition fails"
        )


def _run_scaling_adversarial(cfg: ScalingConfig, threads: int) -> ExperimentReport:
    adv = _AdversarialContext(cfg.family_alpha, BASE_RATE)
    tau = cfg.tau if cfg.tau is not None else adv.lbf.threshold_floor() - cfg.tau_margin
    alpha = _resolve_alpha(cfg)
    epsilon = cfg.epsilon if cfg.epsilon is not None else ZERO
    hc = adv.ctx.hc

    def one(item: tuple[int, int]) -> TrialRow:
        n, trial = item
        seed = derive_seed(cfg.seed, "scaling", n, trial)
        gamma = _scaling_gamma(cfg, n)
        rng = rng_for(cfg.seed, "scaling", n, trial, "b")
        bits = tuple(rng.randrange(2) for _ in range(adv.d))
        _check_margin(adv.tau_star(bits), tau, alpha, epsilon)
        meta = adversarial_meta(adv.lbf, bits, gamma)
        train_seed = derive_seed(cfg.seed, "scaling", n, trial, "train")
        if cfg.epsilon is None:
            indices, _ = draw_domain_indices(meta, n, train_seed)
            table = adv.ctx.table([_meta_to_pool(adv, bits, i) for i in indices])
        else:
            m = sample_size_for(cfg.epsilon, cfg.delta, n, len(hc))
            ts = sample_training_set(meta, n, m, train_seed)
            indices = ts.domain_indices
            table = estimate_errors(hc, ts)
        hat = minmax_erm(table)
        pool_cols = {_meta_to_pool(adv, bits, i) for i in indices}
        max_train = max(adv.ctx.columns[c][hat] for c in pool_cols)
        er = domain_risk(meta, tau, hc.members[hat])
        return TrialRow(
            "scaling", n, trial, seed, hat, er, max_train,
            {"b": "".join(map(str, bits)), "gamma": rational_to_str(gamma)},
        )

    items = [(n, t) for n in cfg.n_grid for t in range(cfg.trials)]
    rows = _map_trials(items, one, threads)
    extra = {
        "lambda": rational_to_str(adv.lbf.mix_weight),
        "threshold_floor": rational_to_str(adv.lbf.threshold_floor()),
        "d": adv.d,
    }
    agg = _scaling_aggregates(cfg, rows, tau, alpha, extra)
    return ExperimentReport("scaling", cfg.to_dict(), tuple(rows), agg)


def _meta_to_pool(adv: _AdversarialContext, bits: tuple[int, ...], meta_index: int) -> int:
    # meta families list the clean domain first, then the d chosen domains
    if meta_index == 0:
        return 0
    t = meta_index - 1
    return adv.pool_index(t, bits[t])


def _run_scaling_fixed(cfg: ScalingConfig, threads: int) -> ExperimentReport:
    base = large_k_family(cfg.family_alpha)
    hc = base.slice.hypothesis_class
    tau = cfg.tau if cfg.tau is not None else BASE_RATE
    alpha = _resolve_alpha(cfg)
    epsilon = cfg.epsilon if cfg.epsilon is not None else ZERO
    if cfg.generator == "uniform-shattered":
        family = base.family
        weights = tuple(Fraction(1, len(family)) for _ in range(len(family)))
    else:  # point-mass
        family = DomainFamily(base.slice.space, (unanimous_point_mass(hc),))
        weights = (Fraction(1),)
    meta = MetaDistribution(family, weights)
    ctx = _FamilyContext(hc, family.domains)
    _, tau_star = ctx.minmax_over(list(meta.support()))
    _check_margin(tau_star, tau, alpha, epsilon)

    def one(item: tuple[int, int]) -> TrialRow:
        n, trial = item
        seed = derive_seed(cfg.seed, "scaling", n, trial)
        train_seed = derive_seed(cfg.seed, "scaling", n, trial, "train")
        if cfg.epsilon is None:
            indices, _ = draw_domain_indices(meta, n, train_seed)
            table = ctx.table(list(indices))
        else:
            m = sample_size_for(cfg.epsilon, cfg.delta, n, len(hc))
            ts = sample_training_set(meta, n, m, train_seed)
            indices = ts.domain_indices
            table = estimate_errors(hc, ts)
        hat = minmax_erm(table)
        max_train = max(ctx.columns[i][hat] for i in set(indices))
        er = domain_risk(meta, tau, hc.members[hat])
        return TrialRow("scaling", n, trial, seed, hat, er, max_train, {})

    items = [(n, t) for n in cfg.n_grid for t in range(cfg.trials)]
    rows = _map_trials(items, one, threads)
    agg = _scaling_aggregates(
        cfg, rows, tau, alpha, {"tau_star": rational_to_str(tau_star)}
    )
    return ExperimentReport("scaling", cfg.to_dict(), tuple(rows), agg)


def exposure_trial(
    pcc: PartialConceptClass,
    weights: Sequence[Fraction],
    n: int,
    rng: Any,
) -> tuple[Fraction, int, tuple[int, ...]]:
    """Draw n universe points and find the largest exact 1-mass among concepts
    evaluating to 0 on every drawn point. Returns (mass, concept index or -1,
    drawn points); a violation at rate gamma means mass > gamma."""
    cum = []
    total = ZERO
    for w in weights:
        total += w
        cum.append(total)
    points = []
    for _ in range(n):
        u = Fraction(rng.random())
        points.append(next(i for i, c in enumerate(cum) if u < c))
    exposed = ZERO
    exposed_idx = -1
    for ci, concept in enumerate(pcc.concepts):
        if all(concept[p] == 0 for p in points):
            mass = sum(
                (weights[u] for u in range(pcc.universe_size) if concept[u] == 1),
                start=ZERO,
            )
            if mass > exposed:
                exposed = mass
                exposed_idx = ci
    return exposed, exposed_idx, tuple(points)


def run_uniform_convergence(
    cfg: UniformConvergenceConfig, threads: int = 1
) -> ExperimentReport:
    """How often a concept with large exact 1-mass looks all-zero on a sample.

    The universe is the built family's domain list under the uniform
    distribution; concepts are the induced error-threshold concepts. A trial's
    exposed mass is the largest 1-mass among concepts evaluating to 0 on every
    sampled point; a violation at rate gamma means exposed mass > gamma.
    """
    base = large_k_family(cfg.family_alpha)
    query = DimensionQuery(cfg.tau, cfg.family_alpha)
    pcc = induce_partial_class(base.slice.hypothesis_class, base.family, query)
    dimension = partial_vc_dim(pcc).dimension
    universe = pcc.universe_size
    weights = tuple(Fraction(1, universe) for _ in range(universe))

    def one(item: tuple[int, int]) -> TrialRow:
        n, trial = item
        seed = derive_seed(cfg.seed, "uc", n, trial)
        rng = rng_for(cfg.seed, "uc", n, trial)
        exposed, exposed_idx, points = exposure_trial(pcc, weights, n, rng)
        return TrialRow(
            "uniform-convergence", n, trial, seed, exposed_idx, exposed, None,
            {"distinct_points": len(set(points))},
        )

    items = [(n, t) for n in cfg.n_grid for t in range(cfg.trials)]
    rows = _map_trials(items, one, threads)
    log_inv_delta = math.log(1.0 / float(cfg.delta))
    frequencies = []
    calibrated = None
    for c in cfg.c_grid:
        per_n = []
        ok = True
        prev = None
        for n in cfg.n_grid:
            gamma = c * (dimension * math.log(n) ** 2 + log_inv_delta) / n
            count = sum(1 for r in rows if r.n == n and r.er_exact > gamma)
            freq = Fraction(count, cfg.trials)
            per_n.append({
                "n": n, "gamma": gamma, "count": count, "freq": float(freq),
            })
            if freq > cfg.delta:
                ok = False
            if prev is not None and freq > prev:
                ok = False
            prev = freq
        frequencies.append({"C": c, "per_n": per_n, "passes": ok})
        if ok and calibrated is None:
            calibrated = c
    agg = {
        "dimension": dimension,
        "delta": rational_to_str(cfg.delta),
        "frequencies": frequencies,
        "calibrated_c": calibrated,
    }
    return ExperimentReport("uniform-convergence", cfg.to_dict(), tuple(rows), agg)


def run_lower_bound(cfg: LowerBoundConfig, threads: int = 1) -> ExperimentReport:
    """Hide a uniform bit vector behind flipped domains and measure how often
    the learner's risk at tau' = lam/(1+lam) - margin exceeds gamma, plus the
    failure rate on unseen flipped-family indices."""
    adv = _AdversarialContext(cfg.family_alpha, cfg.tau)
    tau_prime = adv.lbf.threshold_floor() - cfg.tau_margin
    hc = adv.ctx.hc
    lam = adv.lbf.mix_weight

    def one(trial: int) -> TrialRow:
        seed = derive_seed(cfg.seed, "lb", cfg.n, trial)
        rng = rng_for(cfg.seed, "lb", cfg.n, trial, "b")
        bits = tuple(rng.randrange(2) for _ in range(adv.d))
        tau_star = adv.tau_star(bits)
        _check_margin(tau_star, cfg.tau, adv.lbf.alpha, ZERO)
        meta = adversarial_meta(adv.lbf, bits, cfg.gamma)
        train_seed = derive_seed(cfg.seed, "lb", cfg.n, trial, "train")
        indices, _ = draw_domain_indices(meta, cfg.n, train_seed)
        pool_indices = [_meta_to_pool(adv, bits, i) for i in indices]
        table = adv.ctx.table(pool_indices)
        hat = minmax_erm(table)
        max_train = max(adv.ctx.columns[c][hat] for c in set(pool_indices))
        er = domain_risk(meta, tau_prime, hc.members[hat])
        seen = {i - 1 for i in indices if i >= 1}
        unseen = [t for t in range(adv.d) if t not in seen]
        failed = [
            t for t in unseen
            if adv.ctx.columns[adv.pool_index(t, bits[t])][hat] > tau_prime
        ]
        return TrialRow(
            "lower-bound", cfg.n, trial, seed, hat, er, max_train,
            {
                "b": "".join(map(str, bits)),
                "unseen": unseen,
                "failed_unseen": failed,
                "exceeds_gamma": bool(er > cfg.gamma),
                "tau_star": rational_to_str(tau_star),
            },
        )

    rows = _map_trials(range(cfg.trials), one, threads)
    exceed = sum(1 for r in rows if r.extra["exceeds_gamma"])
    unseen_total = sum(len(r.extra["unseen"]) for r in rows)
    unseen_failed = sum(len(r.extra["failed_unseen"]) for r in rows)
    agg = {
        "d": adv.d,
        "gamma": rational_to_str(cfg.gamma),
        "lambda": rational_to_str(lam),
        "tau_prime": rational_to_str(tau_prime),
        "exceed_count": exceed,
        "exceed_freq": exceed / cfg.trials,
        "unseen_total": unseen_total,
        "unseen_failed": unseen_failed,
        "per_unseen_failure_rate": (
            unseen_failed / unseen_total if unseen_total else None
        ),
    }
    return ExperimentReport("lower-bound", cfg.to_dict(), tuple(rows), agg)
