import math

import numpy as np
import pytest

from cantorlab.geometry import BallDomain, BoxDomain, build_scaffold, make_schedule
from cantorlab.lusin import build_lusin, heisenberg_datum, minimal_eta
from cantorlab.seminorms import (
    FieldSampler,
    affine_graph,
    box_dimension_estimate,
    cantor_oracle,
    fractional_seminorm,
    graph_seminorm_compare,
    half_interval_seminorm,
    half_space_cap,
    holder_estimate,
    lusin_gradient_sampler,
    one_star,
    poincare_ratio,
    slicing_ratio,
    superdensity_profile,
)
from oracles import half_interval_seminorm_numeric, spherical_cap_area

UNIT = BoxDomain((0.0,), (1.0,))
SQUARE = BoxDomain.cube(2)


def half_indicator(kind="indicator"):
    return FieldSampler(lambda x: (x[:, 0] < 0.5).astype(float), UNIT, kind)


# ------------------------------------------------------ fractional seminorm


@pytest.mark.parametrize("s", [0.1, 0.25, 0.5, 0.75, 0.9])
def test_half_interval_closed_form(s):
    assert half_interval_seminorm(s) == pytest.approx(half_interval_seminorm_numeric(s), rel=1e-10)


def test_half_interval_value_at_half():
    assert half_interval_seminorm(0.5) == pytest.approx(8 * (math.sqrt(2) - 1), rel=1e-14)


def test_constant_function_zero():
    est = fractional_seminorm(FieldSampler(lambda x: np.full(len(x), 2.5), SQUARE), 0.4, 1.0, 50_000, 0)
    assert est.value == 0.0 and est.stderr == 0.0


@pytest.mark.parametrize("s", [0.25, 0.5])
def test_half_interval_estimate(s):
    est = fractional_seminorm(half_indicator(), s, 1.0, 2_000_000, 1)
    assert abs(est.value - half_interval_seminorm(s)) <= 3 * est.stderr
    assert est.stderr > 0 and len(est.shell_counts) == 30


def test_symmetry_and_scaling():
    f = lambda x: np.sin(3 * x[:, 0]) + x[:, 1] ** 2
    base = fractional_seminorm(FieldSampler(f, SQUARE), 0.3, 2.0, 200_000, 5)
    neg = fractional_seminorm(FieldSampler(lambda x: -f(x), SQUARE), 0.3, 2.0, 200_000, 5)
    shift = fractional_seminorm(FieldSampler(lambda x: f(x) + 7.0, SQUARE), 0.3, 2.0, 200_000, 5)
    tripled = fractional_seminorm(FieldSampler(lambda x: 3.0 * f(x), SQUARE), 0.3, 2.0, 200_000, 5)
    assert neg.value == base.value
    assert shift.value == pytest.approx(base.value, rel=1e-12)
    assert tripled.value == pytest.approx(3.0 * base.value, rel=1e-12)


def test_standard_error_halves_with_four_times_budget():
    small = fractional_seminorm(half_indicator(), 0.5, 1.0, 1_000_000, 2)
    big = fractional_seminorm(half_indicator(), 0.5, 1.0, 4_000_000, 2)
    assert 1.7 <= small.stderr / big.stderr <= 2.3


def test_adding_far_cube_increases_seminorm():
    dom = BoxDomain.cube(2)
    inner = lambda x: np.all(np.abs(x - 0.3) <= 0.1, axis=1)
    far = lambda x: np.all(np.abs(x - 0.8) <= 0.05, axis=1)
    e1 = fractional_seminorm(FieldSampler(lambda x: inner(x).astype(float), dom, "indicator"), 0.3, 1.0, 400_000, 4)
    e2 = fractional_seminorm(FieldSampler(lambda x: (inner(x) | far(x)).astype(float), dom, "indicator"), 0.3, 1.0, 400_000, 4)
    assert e2.value - e1.value > 3 * math.hypot(e1.stderr, e2.stderr)


def test_argument_checks():
    f = half_indicator()
    for s, p, n in ((0.0, 1.0, 1000), (1.0, 1.0, 1000), (0.5, 0.5, 1000), (0.5, 1.0, 0)):
        with pytest.raises(ValueError):
            fractional_seminorm(f, s, p, n, 0)
    bad = FieldSampler(lambda x: x[:, 0], UNIT, "indicator")
    with pytest.raises(ValueError):
        bad(np.array([[0.3]]))


def test_cantor_indicator_below_bound():
    from cantorlab.geometry import indicator_seminorm_bound

    sched = make_schedule("sobolev", 2, 10, 0.01, 0.25)
    dom = BoxDomain((-0.0051, -0.0051), (0.0051, 0.0051))
    sc = build_scaffold(dom, sched, 3)
    f = FieldSampler(lambda x: (sc.depth_of(x) >= 3).astype(float), dom, "indicator")
    est = fractional_seminorm(f, 0.2, 1.0, 400_000, 0)
    assert est.value <= 2 * indicator_seminorm_bound(sched, 0.2, 3, dom).value


# ------------------------------------------------------------ graph compare


def test_graph_flat_ratio_is_one():
    f = half_indicator("function")
    res = graph_seminorm_compare(affine_graph([[0.0]]), f, 0.5, 1.0, 200_000, 0)
    assert res.ratio == pytest.approx(1.0, rel=1e-12)
    assert res.in_window


def test_graph_tilted_line():
    # distances grow by sqrt 2 and each area factor is sqrt 2:
    # ratio = sqrt2^{-(sp+k)} * 2 = 2^{1/4} at s = 1/2, p = 1, k = 1
    f = half_indicator("function")
    res = graph_seminorm_compare(affine_graph([[1.0]]), f, 0.5, 1.0, 200_000, 0)
    assert res.ratio == pytest.approx(2.0**0.25, rel=1e-12)
    assert res.lipschitz == pytest.approx(1.0)
    assert res.in_window


def test_graph_curved_window():
    f = FieldSampler(lambda x: np.cos(4 * x[:, 0]) * x[:, 1], SQUARE)
    g = lambda x: np.stack([0.5 * x[:, 0] ** 2 - x[:, 1] * x[:, 0]], axis=1)
    jac = lambda x: np.stack([x[:, 0] - x[:, 1], -x[:, 0]], axis=1)[:, None, :]
    from cantorlab.seminorms import GraphMap

    res = graph_seminorm_compare(GraphMap(g, jac), f, 0.4, 1.5, 300_000, 1)
    assert res.in_window
    assert res.ratio != 1.0


# --------------------------------------------------------------------- Hoelder


def test_holder_linear():
    g = FieldSampler(lambda x: 2.0 * x[:, 0] - 1.0 * x[:, 1], SQUARE)
    scales = [2.0**-j for j in range(3, 10)]
    res = holder_estimate(g, 1.0, scales, 2000, 0)
    assert np.all(res.sups <= math.sqrt(5) * (1 + 1e-12))
    assert np.all(res.sups >= 0.98 * math.sqrt(5))
    assert abs(res.slope) <= 0.01


def test_holder_power_function():
    beta = 0.5
    dom = BoxDomain((-1.0,), (1.0,))
    g = FieldSampler(lambda x: np.abs(x[:, 0]) ** beta, dom)
    scales = [2.0**-j for j in range(2, 12)]
    res = holder_estimate(g, beta, scales, 20_000, 0)
    assert np.all(res.sups <= 2.0**(1 - beta) + 1e-12)
    assert abs(res.slope) <= 0.1
    rough = holder_estimate(g, 0.9, scales, 20_000, 0)
    assert rough.growth >= 0.3


def test_holder_argument_checks():
    g = FieldSampler(lambda x: x[:, 0], UNIT)
    with pytest.raises(ValueError):
        holder_estimate(g, 0.0, [0.1], 10, 0)
    with pytest.raises(ValueError):
        holder_estimate(g, 0.5, [], 10, 0)


def test_lipschitz_regime_gradient():
    sched = make_schedule("dimension", 2, 1, 0.1, 1.0)
    dom = BoxDomain.cube(2)
    sc = build_scaffold(dom, sched, 6)
    F = heisenberg_datum(dom)
    u = build_lusin(F, sc, 6, minimal_eta(F, sc.delta))
    g = lusin_gradient_sampler(u)
    res = holder_estimate(g, 1.0, list(sc.r[6:0:-1]), 5000, 0)
    assert res.growth >= -0.05
    # bounded quotient: the sup saturates at the fine scales and stays put below them
    fine = holder_estimate(g, 1.0, [t / 8 for t in sc.r[6:2:-1]], 5000, 1)
    top = max(res.sups.max(), fine.sups.max())
    assert np.all(res.sups[:4] >= top / 1.5)
    assert np.all(fine.sups >= top / 1.5)


# ----------------------------------------------------------------- dimension


@pytest.mark.parametrize("k,B,d", [(2, 1, 1.0), (2, 2, 1.5), (1, 1, 0.5)])
def test_box_dimension(k, B, d):
    sc = build_scaffold(BoxDomain.cube(k), make_schedule("dimension", k, B, 0.1, d), 8)
    assert box_dimension_estimate(sc, range(2, 9)).slope == pytest.approx(d, abs=0.05)
    assert box_dimension_estimate(sc, range(4, 9)).slope == pytest.approx(d, abs=0.05)


def test_box_dimension_gap_free():
    sc = build_scaffold(BoxDomain.cube(2), make_schedule("custom", 2, 1, 0.1, values=[]), 8)
    assert box_dimension_estimate(sc, range(2, 9)).slope == pytest.approx(2.0, abs=1e-12)
    with pytest.raises(ValueError):
        box_dimension_estimate(sc, [2, 3])


# -------------------------------------------------------------- superdensity


def test_superdensity_full_set():
    prof = superdensity_profile(lambda p: np.ones(len(p), bool), np.zeros(2), [0.1, 0.01], 0.1, 0.3, 10_000, 0)
    assert np.all(prof.ratios == 0)
    assert prof.exponent == pytest.approx(2 + 0.1 * one_star(2, 0.3))


def test_superdensity_half_space():
    h = 0.05
    oracle = lambda p: p[:, 0] < h
    radii = [0.01, 0.04, 0.1, 0.2, 0.4]
    prof = superdensity_profile(oracle, np.zeros(2), radii, 0.1, 0.3, 100_000, 3)
    for r, q, e in zip(radii, prof.ratios, prof.stderr):
        exact = half_space_cap(r, h) / r**prof.exponent
        assert exact == pytest.approx(spherical_cap_area(r, h) / r**prof.exponent)
        if r < h:
            assert q == 0
        else:
            assert abs(q - exact) <= 3 * e + 1e-12


def test_superdensity_cantor_decay(sobolev_scaffold):
    sc = sobolev_scaffold
    path = sc.random_path(6, np.random.default_rng(0))
    b, s = 0.2, 0.25
    prof = superdensity_profile(cantor_oracle(sc, path), np.zeros(2), sc.r[1:7], b, s, 100_000, 0, relative=True)
    assert prof.slope is not None
    # heuristic threshold on the decay rate
    assert prof.slope >= 0.5 * b * one_star(2, s)


def test_superdensity_checks():
    with pytest.raises(ValueError):
        superdensity_profile(lambda p: p[:, 0] < 0, np.zeros(2), [0.1], 0.3, 0.2)
    with pytest.raises(ValueError):
        superdensity_profile(lambda p: p[:, 0] < 0, np.zeros(2), [0.0], 0.1, 0.2)


# ------------------------------------------------------------------- slicing


def _bump(c, w):
    c = np.asarray(c)
    return lambda x: np.exp(-np.sum((x - c) ** 2, axis=1) / w**2)


def test_slicing_constant_is_universal():
    fs = [FieldSampler(_bump([0.5, 0.5], 0.2), SQUARE), FieldSampler(_bump([0.4, 0.6], 0.12), SQUARE)]
    rows = slicing_ratio(fs, 0.5, 1.0, 8, 400_000, 0, names=["wide", "narrow"])
    a, b = rows
    assert abs(a.ratio - b.ratio) <= 3 * math.hypot(a.ratio_se, b.ratio_se)
    # uniform directions on half the circle: the constant is pi
    for row in rows:
        assert abs(row.ratio - math.pi) <= 3 * row.ratio_se


def test_slicing_rotation_invariant():
    f = lambda x: np.exp(-((x[:, 0] - 0.5) ** 2) / 0.02 - ((x[:, 1] - 0.5) ** 2) / 0.08)
    g = lambda x: f(np.stack([1.0 - x[:, 1], x[:, 0]], axis=1))  # quarter turn about the centre
    r1, r2 = slicing_ratio([FieldSampler(f, SQUARE), FieldSampler(g, SQUARE)], 0.5, 1.0, 8, 400_000, 1)
    assert abs(r1.ratio - r2.ratio) <= 3 * math.hypot(r1.ratio_se, r2.ratio_se)


def test_slicing_guards():
    assert slicing_ratio(FieldSampler(lambda x: np.ones(len(x)), SQUARE), 0.5, 1.0, 4, 10_000, 0) == [None]
    with pytest.raises(ValueError):
        slicing_ratio(half_indicator(), 0.5, 1.0, 4, 10_000, 0)


# ------------------------------------------------------------------ Poincare


def test_poincare_ratio_stable():
    f = lambda x: 1.0 - np.sum(x**2, axis=1)
    a = poincare_ratio(f, 1.0, 0.8, 3.0, budget=400_000, seed=0)
    b = poincare_ratio(f, 1.0, 0.8, 3.0, budget=800_000, seed=1)
    assert math.isfinite(a.ratio) and a.ratio > 0
    assert abs(a.ratio / b.ratio - 1) <= 0.1
    c = poincare_ratio(lambda x: 2.0 * f(x), 1.0, 0.8, 3.0, budget=400_000, seed=0)
    assert c.ratio == pytest.approx(a.ratio, rel=1e-12)


def test_poincare_guards():
    assert poincare_ratio(lambda x: np.zeros(len(x)), 1.0, 0.8, 3.0, budget=10_000) is None
    with pytest.raises(ValueError):
        poincare_ratio(lambda x: 1.0 - np.sum(x**2, axis=1), 1.0, 0.3, 3.0)
    with pytest.raises(ValueError):
        poincare_ratio(lambda x: np.ones(len(x)), 1.0, 0.8, 3.0)


def test_ball_domain_sampling():
    ball = BallDomain((0.0, 0.0), 2.0)
    x = ball.sample(np.random.default_rng(0), 10_000)
    assert np.all(np.linalg.norm(x, axis=1) <= 2.0)
    assert ball.volume == pytest.approx(4 * math.pi)
