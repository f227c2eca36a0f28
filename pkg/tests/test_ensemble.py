import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from homsim.ensemble import (
    MixComponent,
    UniformTheta,
    equal_mixture,
    exact_mixture,
    g2_zero,
    monte_carlo,
    theta_sweep,
    washout_average,
)
from homsim.errors import BadGrid, EmptyMixture, ThetaNotApplicable, WeightSumInvalid
from homsim.scenarios import ScenarioSpec, run

TOL = 1e-12

A1P, A1M = ScenarioSpec("A1", sign=1), ScenarioSpec("A1", sign=-1)
A2S, A2A = ScenarioSpec("A2", branch="sym"), ScenarioSpec("A2", branch="anti")
FOUR_WAY = equal_mixture([A1P, A1M, A2S, A2A])


def stats_tuple(s):
    return s.mean_i_first, s.mean_i_second, s.mean_r, s.g2_zero


def test_four_way_mixture_exact():
    s = exact_mixture(FOUR_WAY)
    assert stats_tuple(s) == (1.0, 1.0, 0.5, 0.5)
    assert s.n_samples == 0


def test_a2_mixture():
    s = exact_mixture(equal_mixture([A2S, A2A]))
    assert (s.mean_i_first, s.mean_i_second, s.mean_r) == pytest.approx((1, 1, 0), abs=TOL)
    assert s.mean_r == 0.0
    assert s.g2_zero == 0.0


def test_single_b2():
    s = exact_mixture([MixComponent(ScenarioSpec("B2", branch="sym", theta=0.3), 1.0)])
    assert stats_tuple(s) == pytest.approx((1, 1, 1, 1), abs=TOL)


def test_mixture_errors():
    with pytest.raises(EmptyMixture):
        exact_mixture([])
    with pytest.raises(WeightSumInvalid):
        exact_mixture([MixComponent(A1P, 0.5), MixComponent(A1M, 0.4)])
    with pytest.raises(WeightSumInvalid):
        MixComponent(A1P, -0.1)


def test_weight_tolerance_is_1e9():
    exact_mixture([MixComponent(A1P, 0.5), MixComponent(A1M, 0.5 + 5e-10)])
    with pytest.raises(WeightSumInvalid):
        exact_mixture([MixComponent(A1P, 0.5), MixComponent(A1M, 0.5 + 5e-9)])


def test_g2_definition():
    assert g2_zero(1.0, 1.0, 0.5) == 0.5
    assert math.isnan(g2_zero(0.0, 2.0, 0.0))


@given(weights=st.lists(st.floats(min_value=0.01, max_value=1.0), min_size=1, max_size=6),
       data=st.data())
def test_g2_invariant(weights, data):
    specs = data.draw(st.lists(st.sampled_from([A1P, A1M, A2S, A2A, ScenarioSpec("C1", sign=1)]),
                               min_size=len(weights), max_size=len(weights)))
    total = math.fsum(weights)
    s = exact_mixture([MixComponent(sp, w / total) for sp, w in zip(specs, weights)])
    assert s.mean_i_first >= 0 and s.mean_i_second >= 0
    if s.mean_i_first * s.mean_i_second != 0:
        assert s.g2_zero == pytest.approx(s.mean_r / (s.mean_i_first * s.mean_i_second))


@pytest.mark.parametrize(
    "pair",
    [
        [A1P, A1M],
        [A2S, A2A],
        [ScenarioSpec("B1", sign=1, theta=math.pi / 2), ScenarioSpec("B1", sign=-1, theta=math.pi / 2)],
        [ScenarioSpec("B1", sign=1, theta=math.pi / 2), ScenarioSpec("B1", sign=1, theta=-math.pi / 2)],
        [ScenarioSpec("B2", branch="sym", theta=0.4), ScenarioSpec("B2", branch="anti", theta=0.4)],
        [ScenarioSpec("C2", branch="sym", theta=2.0), ScenarioSpec("C2", branch="anti", theta=2.0)],
        [A1P, A1M, A2S, A2A],
    ],
)
def test_uniform_marginals(pair):
    s = exact_mixture(equal_mixture(pair))
    assert s.mean_i_first == pytest.approx(1, abs=TOL)
    assert s.mean_i_second == pytest.approx(1, abs=TOL)


def test_bunching_dichotomy():
    hom = equal_mixture([ScenarioSpec("B1", sign=1, theta=math.pi / 2), ScenarioSpec("B1", sign=1, theta=-math.pi / 2)])
    assert exact_mixture(hom).mean_r == pytest.approx(0, abs=TOL)
    opposite = equal_mixture([ScenarioSpec("B2", branch="sym", theta=0.1), ScenarioSpec("C2", branch="anti", theta=-2.5)])
    assert exact_mixture(opposite).mean_r == pytest.approx(1, abs=TOL)


def test_sweep_dip():
    rows = theta_sweep(ScenarioSpec("B1", sign=1), 0, 2 * math.pi, 5)
    assert [r.theta for r in rows] == pytest.approx([0, math.pi / 2, math.pi, 3 * math.pi / 2, 2 * math.pi])
    assert [r.r_cd for r in rows] == pytest.approx([1, 0, 1, 0, 1], abs=TOL)


def test_sweep_rows_match_run():
    template = ScenarioSpec("B1", sign=-1)
    for row in theta_sweep(template, -1.0, 2.5, 17):
        res = run(template.with_theta(row.theta))
        assert (row.i_first, row.i_second, row.r_cd) == (res.i_first, res.i_second, res.r_cd)


@pytest.mark.parametrize("steps", [2, 7, 100])
def test_sweep_b2_flat(steps):
    rows = theta_sweep(ScenarioSpec("B2", branch="sym"), 0, 2 * math.pi, steps)
    assert len(rows) == steps
    assert all(r.r_cd == pytest.approx(1, abs=TOL) for r in rows)


@pytest.mark.parametrize(
    "lo, hi, steps",
    [(math.pi / 2, math.pi / 2, 5), (1.0, 0.0, 5), (0.0, 1.0, 1), (0.0, math.inf, 3), (0.0, 1.0, 2.5)],
)
def test_sweep_bad_grid(lo, hi, steps):
    with pytest.raises(BadGrid):
        theta_sweep(ScenarioSpec("B1", sign=1), lo, hi, steps)


def test_sweep_needs_theta_scenario():
    with pytest.raises(ThetaNotApplicable):
        theta_sweep(A1P, 0, 1, 3)


def _quad_mean(f):
    val, _ = integrate.quad(f, 0, 2 * math.pi, limit=200)
    return val / (2 * math.pi)


def test_washout_b1_vs_quadrature():
    # independent oracle: adaptive quadrature on the closed-form intensities
    for sign in (1, -1):
        s = washout_average(ScenarioSpec("B1", sign=sign))
        assert s.mean_i_first == pytest.approx(_quad_mean(lambda t: 1 - sign * math.sin(t)), abs=1e-9)
        assert s.mean_i_second == pytest.approx(_quad_mean(lambda t: 1 + sign * math.sin(t)), abs=1e-9)
        assert s.mean_r == pytest.approx(_quad_mean(lambda t: math.cos(t) ** 2), abs=1e-9)
        assert (s.mean_i_first, s.mean_i_second, s.mean_r, s.g2_zero) == pytest.approx((1, 1, 0.5, 0.5), abs=1e-12)


@pytest.mark.parametrize("template", [ScenarioSpec("B2", branch="sym"), ScenarioSpec("C2", branch="anti")])
def test_washout_flat(template):
    s = washout_average(template)
    assert (s.mean_i_first, s.mean_i_second, s.mean_r) == pytest.approx((1, 1, 1), abs=TOL)


@pytest.mark.parametrize("spec", [A1P, A2S, ScenarioSpec("C1", sign=1)])
def test_washout_rejects_fixed_scenarios(spec):
    with pytest.raises(ThetaNotApplicable):
        washout_average(spec)


def test_washout_minimum_points():
    with pytest.raises(BadGrid):
        washout_average(ScenarioSpec("B1", sign=1), points=100)


def _exact_moments(components):
    """Per-sample mean and variance of (i1, i2, r) under the exact mixture."""
    w = np.array([c.weight for c in components])
    rows = np.array([[run(c.spec).i_first, run(c.spec).i_second, run(c.spec).r_cd] for c in components])
    mean = w @ rows
    var = w @ rows ** 2 - mean ** 2
    return mean, var


def _within_5se(stats, mean, var, n):
    se = np.sqrt(np.maximum(var, 0) / n)
    est = np.array([stats.mean_i_first, stats.mean_i_second, stats.mean_r])
    return np.all(np.abs(est - mean) <= 5 * se + 1e-15)


MIXES = [
    FOUR_WAY,
    equal_mixture([A2S, A2A]),
    [MixComponent(A1P, 0.7), MixComponent(A2S, 0.2), MixComponent(A2A, 0.1)],
    equal_mixture([ScenarioSpec("B1", sign=1, theta=0.3), ScenarioSpec("B1", sign=-1, theta=1.1),
                   ScenarioSpec("C1", sign=1)]),
]


@pytest.mark.parametrize("mix", MIXES)
def test_monte_carlo_consistency(mix):
    n = 100_000
    stats = monte_carlo(mix, n, seed=2024)
    mean, var = _exact_moments(mix)
    assert _within_5se(stats, mean, var, n)
    exact = exact_mixture(mix)
    if not math.isnan(exact.g2_zero):
        # delta-method error is bounded by a few percent here
        assert stats.g2_zero == pytest.approx(exact.g2_zero, abs=0.02)


def test_monte_carlo_four_way_g2():
    stats = monte_carlo(FOUR_WAY, 100_000, seed=42)
    assert abs(stats.g2_zero - 0.5) <= 0.01
    assert stats.n_samples == 100_000
    assert stats.rng == "numpy.PCG64"


def test_monte_carlo_deterministic_component():
    for n in (1, 17, 1000):
        s = monte_carlo([MixComponent(A1P, 1.0)], n, seed=3)
        assert (s.mean_i_first, s.mean_i_second, s.mean_r) == pytest.approx((1, 1, 1), abs=TOL)


def test_monte_carlo_theta_uniform():
    template = ScenarioSpec("B1", sign=1)
    s = monte_carlo(UniformTheta(template), 100_000, seed=7)
    assert abs(s.mean_r - 0.5) <= 0.01
    # per-sample variance of cos^2 under uniform theta is 1/8
    assert abs(s.mean_r - washout_average(template).mean_r) <= 5 * math.sqrt(0.125 / 100_000)
    # bare template is accepted too
    assert monte_carlo(template, 1000, seed=7) == monte_carlo(UniformTheta(template), 1000, seed=7)


def test_monte_carlo_reproducible():
    a = monte_carlo(FOUR_WAY, 5000, seed=11)
    b = monte_carlo(FOUR_WAY, 5000, seed=11)
    c = monte_carlo(FOUR_WAY, 5000, seed=12)
    assert a == b
    assert a != c


def test_monte_carlo_sharding_independent_of_workers():
    seq = monte_carlo(FOUR_WAY, 40_001, seed=5, shards=4, n_jobs=1)
    par = monte_carlo(FOUR_WAY, 40_001, seed=5, shards=4, n_jobs=4)
    assert seq == par
    assert seq.n_samples == 40_001


def test_monte_carlo_errors():
    with pytest.raises(EmptyMixture):
        monte_carlo([], 10, seed=1)
    with pytest.raises(ValueError):
        monte_carlo(FOUR_WAY, 0, seed=1)
    with pytest.raises(ValueError):
        monte_carlo(FOUR_WAY, 10, seed=None)
    with pytest.raises(ThetaNotApplicable):
        monte_carlo(A1P, 10, seed=1)
