"""Mixtures of scenario outcomes: exact averages, phase sweeps, and Monte Carlo.

The second-order coherence reported everywhere is::

    g2(0) = <I1 * I2> / (<I1> * <I2>)

and is NaN when either mean intensity vanishes.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .errors import BadGrid, EmptyMixture, ThetaNotApplicable, WeightSumInvalid
from .scenarios import ScenarioSpec, intensities_over_theta, run

WEIGHT_TOL = 1e-9
WASHOUT_POINTS = 4096
RNG_NAME = "numpy.PCG64"


@dataclass(frozen=True)
class MixComponent:
    spec: ScenarioSpec
    weight: float

    def __post_init__(self):
        w = float(self.weight)
        if not math.isfinite(w) or w < 0:
            raise WeightSumInvalid(f"weight must be a nonnegative finite number, got {self.weight!r}")
        object.__setattr__(self, "weight", w)


@dataclass(frozen=True)
class EnsembleStats:
    mean_i_first: float
    mean_i_second: float
    mean_r: float
    g2_zero: float
    n_samples: int = 0
    rng: Optional[str] = None

    @classmethod
    def from_means(cls, m1, m2, mr, n_samples=0, rng=None) -> "EnsembleStats":
        return cls(float(m1), float(m2), float(mr), g2_zero(m1, m2, mr), int(n_samples), rng)


@dataclass(frozen=True)
class SweepRow:
    theta: float
    i_first: float
    i_second: float
    r_cd: float


@dataclass(frozen=True)
class UniformTheta:
    """Relative input phase drawn uniformly on [0, 2*pi) for a theta-free template."""

    template: ScenarioSpec

    def __post_init__(self):
        _require_theta(self.template)


def g2_zero(mean_i_first: float, mean_i_second: float, mean_r: float) -> float:
    denom = mean_i_first * mean_i_second
    if denom == 0:
        return math.nan
    return float(mean_r / denom)


def _require_theta(spec: ScenarioSpec) -> None:
    if not spec.uses_theta:
        raise ThetaNotApplicable(f"scenario {spec.name} has no theta parameter")


def _validated(components: Sequence[MixComponent]) -> tuple[list[MixComponent], np.ndarray]:
    components = list(components)
    if not components:
        raise EmptyMixture("mixture has no components")
    weights = np.array([c.weight for c in components], dtype=float)
    total = math.fsum(weights)
    if abs(total - 1.0) > WEIGHT_TOL:
        raise WeightSumInvalid(f"mixture weights sum to {total!r}, expected 1")
    return components, weights


def _outcome_table(components) -> np.ndarray:
    """Rows of (i_first, i_second, r_cd), one per component."""
    rows = []
    for c in components:
        res = run(c.spec)
        rows.append((res.i_first, res.i_second, res.r_cd))
    return np.array(rows, dtype=float)


def exact_mixture(components: Sequence[MixComponent]) -> EnsembleStats:
    """Weighted means over deterministic scenario outcomes."""
    components, weights = _validated(components)
    table = _outcome_table(components)
    m1, m2, mr = (math.fsum(weights * table[:, k]) for k in range(3))
    return EnsembleStats.from_means(m1, m2, mr)


def equal_mixture(specs: Sequence[ScenarioSpec]) -> list[MixComponent]:
    """Equal-probability mixture over ``specs``."""
    if not specs:
        raise EmptyMixture("mixture has no components")
    return [MixComponent(s, 1.0 / len(specs)) for s in specs]


def theta_sweep(template: ScenarioSpec, theta_min: float, theta_max: float, steps: int) -> list[SweepRow]:
    """Evaluate a theta-dependent scenario on a uniform grid, endpoints included."""
    _require_theta(template)
    if int(steps) != steps or steps < 2:
        raise BadGrid(f"steps must be an integer >= 2, got {steps!r}")
    if not (math.isfinite(theta_min) and math.isfinite(theta_max)) or not theta_min < theta_max:
        raise BadGrid(f"need finite theta_min < theta_max, got [{theta_min!r}, {theta_max!r}]")
    rows = []
    for theta in np.linspace(theta_min, theta_max, int(steps)):
        res = run(template.with_theta(float(theta)))
        rows.append(SweepRow(float(theta), res.i_first, res.i_second, res.r_cd))
    return rows


def washout_average(template: ScenarioSpec, points: int = WASHOUT_POINTS) -> EnsembleStats:
    """Average over theta uniform on [0, 2*pi) by the midpoint rule.

    The integrands are trigonometric polynomials of degree <= 2, for which the
    periodic midpoint rule is exact once ``points`` exceeds 2.
    """
    _require_theta(template)
    if points < 1024:
        raise BadGrid(f"washout quadrature needs at least 1024 points, got {points}")
    thetas = (np.arange(points) + 0.5) * (2 * math.pi / points)
    i1, i2 = intensities_over_theta(template, thetas)
    return EnsembleStats.from_means(math.fsum(i1) / points, math.fsum(i2) / points, math.fsum(i1 * i2) / points)


def _sample_shard(source, n: int, rng: np.random.Generator) -> tuple[float, float, float]:
    if isinstance(source, UniformTheta):
        thetas = rng.uniform(0.0, 2 * math.pi, size=n)
        i1, i2 = intensities_over_theta(source.template, thetas)
    else:
        table, weights = source
        idx = rng.choice(len(weights), size=n, p=weights)
        i1, i2 = table[idx, 0], table[idx, 1]
    return float(np.sum(i1)), float(np.sum(i2)), float(np.sum(i1 * i2))


def monte_carlo(
    source: Union[Sequence[MixComponent], UniformTheta, ScenarioSpec],
    n_samples: int,
    seed: int,
    shards: int = 1,
    n_jobs: Optional[int] = None,
) -> EnsembleStats:
    """Sample-mean estimate of :func:`exact_mixture` or :func:`washout_average`.

    ``source`` is a list of mixture components, or a theta-free template
    (bare or wrapped in :class:`UniformTheta`) whose phase is drawn uniformly.

    The samples are split over ``shards`` streams spawned from ``seed``; the
    result depends on (seed, n_samples, shards) only, never on ``n_jobs``.
    """
    if seed is None:
        raise ValueError("monte_carlo requires an explicit seed")
    if int(n_samples) != n_samples or n_samples < 1:
        raise ValueError(f"n_samples must be a positive integer, got {n_samples!r}")
    if shards < 1 or shards > n_samples:
        raise ValueError(f"shards must be in [1, n_samples], got {shards!r}")
    n_samples = int(n_samples)

    if isinstance(source, ScenarioSpec):
        source = UniformTheta(source)
    if isinstance(source, UniformTheta):
        prepared = source
    else:
        components, weights = _validated(source)
        # renormalize within float noise so Generator.choice accepts the vector
        prepared = (_outcome_table(components), weights / weights.sum())

    base, extra = divmod(n_samples, shards)
    sizes = [base + (1 if k < extra else 0) for k in range(shards)]
    streams = [np.random.Generator(np.random.PCG64(s)) for s in np.random.SeedSequence(seed).spawn(shards)]

    def work(k):
        return _sample_shard(prepared, sizes[k], streams[k])

    if n_jobs is not None and n_jobs > 1 and shards > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            partial = list(pool.map(work, range(shards)))
    else:
        partial = [work(k) for k in range(shards)]

    # fixed reduction order: shard index
    s1 = math.fsum(p[0] for p in partial)
    s2 = math.fsum(p[1] for p in partial)
    sr = math.fsum(p[2] for p in partial)
    return EnsembleStats.from_means(s1 / n_samples, s2 / n_samples, sr / n_samples, n_samples, RNG_NAME)
