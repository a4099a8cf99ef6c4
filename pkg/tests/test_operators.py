import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from mellinlat.kernels import (
    GaussWeierstrassKernel,
    MomentKernel,
    PoissonCauchyKernel,
    window_integral,
)
from mellinlat.lattice import LatticeValue
from mellinlat.operators import (
    SGrid,
    Signal,
    abs_signal,
    apply_operator,
    combine_signals,
    hat_signal,
    indicator_signal,
    operator_curve,
    parse_signal,
    signal_eval,
    uniform_error,
)
from mellinlat.pointwise import identity_map, saturating_map
from mellinlat.quadrature import DEFAULT_CONFIG

MOMENT = MomentKernel()
MGW = GaussWeierstrassKernel()
MPC2 = PoissonCauchyKernel(p=2)

KERNELS = (MOMENT, MGW, MPC2)
MAPS = (identity_map(), saturating_map())


# -- signals -------------------------------------------------------------------


def test_signal_validation():
    with pytest.raises(ValueError):
        Signal(breakpoints=((1.0, 0.0),))
    with pytest.raises(ValueError):
        Signal(breakpoints=((0.0, 0.0), (1.0, 1.0)))
    with pytest.raises(ValueError):
        Signal(breakpoints=((2.0, 0.0), (1.0, 1.0)))
    with pytest.raises(ValueError):
        Signal(breakpoints=((1.0, 0.0), (2.0, math.nan)))


def test_hat_signal_shape():
    f = hat_signal()
    assert f.support == (1.0, 3.0)
    assert f.max_abs == 1.0
    assert f.is_continuous
    assert f.is_scalar
    assert_allclose(f.profile([0.5, 1.5, 2.0, 2.5, 3.5]), [0.0, 0.5, 1.0, 0.5, 0.0])


def test_indicator_signal():
    f = indicator_signal(1.0, 4.0)
    assert not f.is_continuous
    assert f.profile(2.0) == 1.0
    assert f.profile(5.0) == 0.0


def test_parse_signal_round_trip():
    f = parse_signal("1:0,2:1,3:0")
    assert f.breakpoints == hat_signal().breakpoints
    with pytest.raises(ValueError):
        parse_signal("1:0,zap")
    with pytest.raises(ValueError):
        parse_signal("")


def test_combine_signals_is_pointwise(rng):
    f = hat_signal()
    h = Signal(breakpoints=((1.5, 0.0), (2.5, -2.0), (4.0, 0.0)))
    g = combine_signals(2.0, f, 0.5, h)
    ts = rng.uniform(0.5, 5.0, 200)
    assert_allclose(g.profile(ts), 2.0 * f.profile(ts) + 0.5 * h.profile(ts), atol=1e-15)
    with pytest.raises(ValueError):
        combine_signals(1.0, f, 1.0, indicator_signal(1.0, 2.0))


def test_abs_signal_inserts_crossings(rng):
    f = Signal(breakpoints=((1.0, 0.0), (2.0, 1.0), (3.0, -1.0), (4.0, 0.0)))
    g = abs_signal(f)
    assert (2.5, 0.0) in g.breakpoints
    ts = rng.uniform(0.9, 4.1, 200)
    assert_allclose(g.profile(ts), np.abs(f.profile(ts)), atol=1e-15)


def test_signal_eval_with_direction():
    d = LatticeValue.grid(np.array([1.0, -2.0, 3.0]))
    f = Signal(breakpoints=((1.0, 0.0), (2.0, 1.0), (3.0, 0.0)), direction=d)
    v = signal_eval(f, 2.0)
    assert_allclose(v.data, [1.0, -2.0, 3.0])
    assert signal_eval(f, 10.0).data == pytest.approx([0.0, 0.0, 0.0])


def test_sgrid_validation():
    with pytest.raises(ValueError):
        SGrid(points=np.array([1.0, -1.0]))
    with pytest.raises(ValueError):
        SGrid.log_spaced(2.0, 1.0)
    g = SGrid.log_spaced(0.5, 4.0, 11)
    assert g.points[0] == 0.5 and g.points[-1] == 4.0


# -- operator values -----------------------------------------------------------


def test_indicator_reduces_to_window_integral():
    # with the identity map, T_n 1_[a,b] is exactly the window response
    f = indicator_signal(1.0, 5.0)
    for k in KERNELS:
        for s in (0.5, 2.0, math.sqrt(5.0), 6.0):
            got = apply_operator(k, identity_map(), 3, f, s).data
            want = window_integral(k, 3, 1.0, 5.0, s)
            assert math.isclose(got, want, abs_tol=1e-12), (k.kind, s)


def test_operator_vanishes_off_support():
    f = hat_signal()
    # moment kernel only looks left of s: evaluation below supp f gives zero
    assert apply_operator(MOMENT, identity_map(), 4, f, 0.5).data == 0.0


def test_operator_linear_in_signal_for_identity(rng):
    f = hat_signal()
    h = Signal(breakpoints=((1.5, 0.0), (2.5, 1.0), (3.5, 0.0)))
    g = combine_signals(1.5, f, -0.5, h)
    for k in KERNELS:
        for s in (1.2, 2.0, 3.1):
            lhs = apply_operator(k, identity_map(), 6, g, s).data
            rhs = (
                1.5 * apply_operator(k, identity_map(), 6, f, s).data
                - 0.5 * apply_operator(k, identity_map(), 6, h, s).data
            )
            assert math.isclose(lhs, rhs, abs_tol=1e-12), (k.kind, s)


def test_operator_monotone_in_signal():
    small = hat_signal()
    big = Signal(breakpoints=((1.0, 0.0), (2.0, 2.0), (3.0, 0.0)))
    for k in KERNELS:
        for m in MAPS:
            a = apply_operator(k, m, 5, small, 2.0).data
            b = apply_operator(k, m, 5, big, 2.0).data
            assert b >= a, (k.kind, m.kind)


def test_operator_rejects_bad_arguments():
    with pytest.raises(ValueError):
        apply_operator(MOMENT, identity_map(), 0, hat_signal(), 1.0)
    with pytest.raises(ValueError):
        apply_operator(MOMENT, identity_map(), 3, hat_signal(), 0.0)


def test_direction_path_matches_scalar_path(rng):
    # identity map commutes with the tensor structure, so each coordinate of
    # the lattice-valued result is the scalar result times the coordinate
    prof = ((1.0, 0.0), (2.0, 1.0), (3.0, 0.0))
    d = LatticeValue.grid(rng.uniform(-2.0, 2.0, 8))
    f = Signal(breakpoints=prof, direction=d)
    g = Signal(breakpoints=prof)
    for s in (1.3, 2.0, 2.8):
        vec = apply_operator(MGW, identity_map(), 7, f, s)
        base = apply_operator(MGW, identity_map(), 7, g, s).data
        assert_allclose(vec.data, base * d.data, atol=1e-12)


def test_direction_scalar_direction_stays_scalar():
    d = LatticeValue.scalar(2.0)
    f = Signal(breakpoints=((1.0, 0.0), (2.0, 1.0), (3.0, 0.0)), direction=d)
    out = apply_operator(MGW, identity_map(), 7, f, 2.0)
    assert out.is_scalar


def test_saturating_map_is_inside_integral(rng):
    # T_n with the saturating map is NOT the saturation of the identity-map
    # value: the map acts on f(t) before averaging
    big = Signal(breakpoints=((1.0, 0.0), (2.0, 40.0), (3.0, 0.0)))
    n = 2
    inside = apply_operator(MGW, saturating_map(), n, big, 2.0).data
    outside_raw = apply_operator(MGW, identity_map(), n, big, 2.0).data
    m = saturating_map()
    outside = float(m.apply_array(n, np.asarray(outside_raw)))
    assert abs(inside - outside) > 1e-3


def test_curve_matches_pointwise_values(rng):
    grid = SGrid(points=np.geomspace(0.5, 4.0, 17))
    f = hat_signal()
    for k in KERNELS:
        for m in MAPS:
            curve = operator_curve(k, m, 9, f, grid)
            for s, v in zip(grid.points, curve):
                direct = apply_operator(k, m, 9, f, float(s))
                assert math.isclose(v.data, direct.data, abs_tol=1e-12), (k.kind, m.kind, s)


def test_curve_agrees_with_doubled_resolution():
    grid = SGrid(points=np.geomspace(0.5, 4.0, 33))
    f = hat_signal()
    for k in KERNELS:
        coarse = np.asarray([v.data for v in operator_curve(k, identity_map(), 10, f, grid)])
        fine = np.asarray(
            [v.data for v in operator_curve(k, identity_map(), 10, f, grid, DEFAULT_CONFIG.doubled())]
        )
        assert np.max(np.abs(coarse - fine)) < 1e-10, k.kind


def test_uniform_error_decreases(rng):
    grid = SGrid.log_spaced(0.5, 4.0, 101)
    f = hat_signal()
    for k in KERNELS:
        errs = [uniform_error(k, saturating_map(), n, f, grid) for n in (5, 20, 80)]
        assert errs[2] < errs[1] < errs[0], k.kind


def test_uniform_error_direction_matches_scalar(rng):
    grid = SGrid.log_spaced(0.8, 3.5, 21)
    prof = ((1.0, 0.0), (2.0, 1.0), (3.0, 0.0))
    scalar_err = uniform_error(MGW, identity_map(), 8, Signal(breakpoints=prof), grid)
    d = LatticeValue.grid(np.array([1.0, -1.0, 0.5, 0.25]))
    vec_err = uniform_error(
        MGW, identity_map(), 8, Signal(breakpoints=prof, direction=d), grid
    )
    # sup-norm of the direction is 1, so the lattice error equals the scalar one
    assert math.isclose(vec_err, scalar_err, abs_tol=1e-12)


def test_interpolation_error_at_midpoint():
    # |T_15 f(2) - f(2)| < |T_10 f(2) - f(2)| for the hat at its peak
    f = hat_signal()
    for k in KERNELS:
        e10 = abs(apply_operator(k, identity_map(), 10, f, 2.0).data - 1.0)
        e15 = abs(apply_operator(k, identity_map(), 15, f, 2.0).data - 1.0)
        assert e15 < e10, k.kind
