import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from mellinlat.kernels import (
    GaussWeierstrassKernel,
    LogUniformKernel,
    MomentKernel,
    PoissonCauchyKernel,
    ScaledKernel,
    double_factorial,
    erf,
    make_kernel,
    mpc_tail_limit_check,
    normalization,
    tail_mass,
    tail_mass_numeric,
    window_integral,
    window_integral_many,
    window_lq_diagnostic,
)
from mellinlat.quadrature import DEFAULT_CONFIG, LogInterval, integrate_haar

MOMENT = MomentKernel()
MGW = GaussWeierstrassKernel()
MPC2 = PoissonCauchyKernel(p=2)
MPC3 = PoissonCauchyKernel(p=3)
MPC4 = PoissonCauchyKernel(p=4)

FAMILIES = (MOMENT, MGW, MPC2, MPC3, MPC4)


# -- special functions -------------------------------------------------------


def _erf_oracle(x: float) -> float:
    # independent evaluation of (2/sqrt(pi)) * integral exp(-w^2), w in [0, x],
    # with a single high-order Gauss-Legendre rule
    nodes, weights = np.polynomial.legendre.leggauss(64)
    w = 0.5 * x * (nodes + 1.0)
    return float(2.0 / math.sqrt(math.pi) * 0.5 * x * np.dot(weights, np.exp(-(w**2))))


def test_erf_zero_and_symmetry(rng):
    assert erf(0.0) == 0.0
    for x in rng.uniform(0.0, 3.0, 20):
        assert erf(-x) == -erf(x)


def test_erf_against_quadrature_oracle():
    for x in (0.25, 0.5, 1.0, 2.0, 3.0):
        assert math.isclose(erf(x), _erf_oracle(x), abs_tol=1e-14)


def test_erf_pinned_value_and_limits():
    assert math.isclose(erf(1.0), 0.8427007929497149, abs_tol=1e-14)
    assert math.isclose(erf(6.0), 1.0, abs_tol=1e-14)
    assert math.isclose(erf(-6.0), -1.0, abs_tol=1e-14)


def test_double_factorial():
    assert double_factorial(-1) == 1
    assert double_factorial(1) == 1
    assert double_factorial(3) == 3
    assert double_factorial(5) == 15
    assert double_factorial(7) == 105
    with pytest.raises(ValueError):
        double_factorial(4)
    with pytest.raises(ValueError):
        double_factorial(-3)


# -- kernel evaluation -------------------------------------------------------


def test_moment_eval_values():
    assert math.isclose(MOMENT.eval(3, 0.5), 3.0 * 0.5**3, abs_tol=1e-15)
    assert MOMENT.eval(3, 1.0) == 0.0
    assert MOMENT.eval(3, 2.0) == 0.0


def test_mgw_eval_peak():
    assert math.isclose(MGW.eval(2, 1.0), 1.0 / math.sqrt(math.pi), abs_tol=1e-15)


def test_mpc_eval_peak_and_constant():
    assert math.isclose(MPC2.eval(1, 1.0), 2.0 / math.pi, abs_tol=1e-15)
    assert math.isclose(MPC2.constant, 2.0 / math.pi, abs_tol=1e-15)
    assert math.isclose(MPC3.constant, 8.0 / (3.0 * math.pi), abs_tol=1e-15)
    assert math.isclose(MPC4.constant, 48.0 / (15.0 * math.pi), abs_tol=1e-15)


def test_eval_rejects_bad_arguments():
    with pytest.raises(ValueError):
        MOMENT.eval(0, 0.5)
    with pytest.raises(ValueError):
        MGW.eval(2, -1.0)
    with pytest.raises(ValueError):
        PoissonCauchyKernel(p=1)
    with pytest.raises(ValueError):
        make_kernel("unknown")


@pytest.mark.parametrize("kernel", FAMILIES, ids=lambda k: k.kind + str(k.p or ""))
@pytest.mark.parametrize("n", [1, 4, 17])
def test_sup_bound_holds_on_dense_grid(kernel, n):
    ts = np.geomspace(math.exp(-8.0), math.exp(8.0), 4001)
    vals = kernel.eval(n, ts)
    assert np.all(vals >= 0.0)
    assert np.max(vals) <= kernel.sup_bound(n) * (1.0 + 1e-12)


@pytest.mark.parametrize("kernel", (MOMENT, MGW, MPC2, MPC3), ids=lambda k: k.kind + str(k.p or ""))
def test_sup_bounded_by_n_for_small_p(kernel):
    for n in (1, 5, 40):
        assert kernel.sup_bound(n) <= n


def test_mpc_p4_peak_exceeds_n():
    # C_4 = 48/(15 pi) > 1, so the p = 4 peak value C_4 * n sits slightly
    # above n; the family stays bounded (which is what matters), just not by n
    assert MPC4.constant > 1.0
    assert MPC4.eval(3, 1.0) > 3.0


# -- masses and normalization ------------------------------------------------


@pytest.mark.parametrize("kernel", FAMILIES, ids=lambda k: k.kind + str(k.p or ""))
@pytest.mark.parametrize("n", [1, 7, 33])
def test_normalization_is_one(kernel, n):
    assert math.isclose(normalization(kernel, n), 1.0, abs_tol=1e-10)


def test_scaled_kernel_mass():
    doubled = ScaledKernel(base=MOMENT, factor=2.0)
    assert math.isclose(normalization(doubled, 5), 2.0, abs_tol=1e-10)
    assert not doubled.has_exact_normalization


def test_log_uniform_mass_and_shape():
    uni = LogUniformKernel()
    assert math.isclose(normalization(uni, 1), 1.0, abs_tol=1e-12)
    assert uni.eval(3, 1.0) == 0.25
    assert uni.eval(3, math.exp(2.5)) == 0.0


@pytest.mark.parametrize("kernel", FAMILIES, ids=lambda k: k.kind + str(k.p or ""))
def test_one_sided_masses_are_complementary(kernel):
    for n in (2, 11):
        for c in (0.05, 0.8, 1.0, 1.7, 20.0):
            below = kernel.mass_below(n, c)
            above = kernel.mass_above(n, c)
            assert 0.0 <= below <= kernel.total_mass + 1e-15
            assert math.isclose(below + above, kernel.total_mass, abs_tol=1e-14)


@pytest.mark.parametrize("kernel", (MGW, MPC2, MPC4), ids=lambda k: k.kind + str(k.p or ""))
def test_mass_below_matches_quadrature(kernel):
    # closed-form one-sided masses against direct quadrature of the kernel
    for n, c in ((3, 0.7), (3, 1.9), (12, 1.1)):
        lo = math.exp(-40.0)
        quad = integrate_haar(
            lambda t: kernel.eval(n, t),
            LogInterval(lo, c),
            DEFAULT_CONFIG.with_min_panels(n),
        )
        closed = kernel.mass_below(n, c) - kernel.mass_below(n, lo)
        assert math.isclose(quad, closed, abs_tol=1e-12), (kernel.kind, n, c)


# -- tails --------------------------------------------------------------------


def test_moment_tail_exact():
    est = tail_mass(MOMENT, 3, 2.0)
    assert est.tag == "exact"
    assert est.value == 0.125
    assert math.isclose(tail_mass_numeric(MOMENT, 3, 2.0), 0.125, abs_tol=1e-12)


def test_mpc_tail_bound_dominates():
    est = tail_mass(MPC2, 10, math.e)
    assert est.tag == "bound"
    assert math.isclose(est.value, (2.0 / math.pi) * (math.pi - 2.0 * math.atan(10.0)), abs_tol=1e-15)
    assert tail_mass_numeric(MPC2, 10, math.e) <= est.value * (1.0 + 1e-8)


def test_mgw_tail_bound_in_regime():
    delta = 2.0
    n0 = MGW.tail_bound_threshold(delta)
    assert n0 == math.ceil(4.0 / math.log(2.0))
    for n in (n0, 25, 50):
        bound = (2.0 / math.sqrt(math.pi)) * math.exp(-0.5 * n * math.log(delta))
        est = tail_mass(MGW, n, delta)
        assert est.tag == "bound"
        assert math.isclose(est.value, bound, abs_tol=1e-15)
        assert tail_mass_numeric(MGW, n, delta) <= bound * (1.0 + 1e-8)


def test_log_uniform_tail_is_constant():
    uni = LogUniformKernel()
    vals = [tail_mass_numeric(uni, n, 2.0) for n in (1, 5, 50)]
    expected = 1.0 - math.log(2.0) / 2.0
    assert_allclose(vals, expected, atol=1e-12)
    assert math.isclose(tail_mass(uni, 7, 2.0).value, expected, abs_tol=1e-15)


def test_tail_rejects_delta_below_one():
    with pytest.raises(ValueError):
        tail_mass(MOMENT, 3, 1.0)
    with pytest.raises(ValueError):
        tail_mass_numeric(MGW, 3, 0.5)


# -- window integrals ---------------------------------------------------------


def test_moment_window_piecewise_values():
    # the three branches of the closed form
    assert math.isclose(window_integral(MOMENT, 2, 1.0, 5.0, 6.0), 2.0 / 3.0, abs_tol=1e-15)
    assert window_integral(MOMENT, 2, 1.0, 5.0, 0.5) == 0.0
    s = 3.0
    assert math.isclose(
        window_integral(MOMENT, 2, 1.0, 5.0, s), (s**2 - 1.0) / s**2, abs_tol=1e-15
    )


def test_mgw_window_symmetric_point():
    s = math.sqrt(5.0)
    val = window_integral(MGW, 2, 1.0, 5.0, s)
    assert math.isclose(val, math.erf(math.log(s)), abs_tol=1e-14)


def test_window_scale_invariance():
    for kernel in (MOMENT, MGW, MPC3):
        for s in (0.4, 2.0, 9.0):
            direct = window_integral(kernel, 3, 1.0, 5.0, s)
            rescaled = window_integral(kernel, 3, 1.0 / s, 5.0 / s, 1.0)
            assert math.isclose(direct, rescaled, abs_tol=1e-10), (kernel.kind, s)


def test_window_rejects_bad_window():
    with pytest.raises(ValueError):
        window_integral(MOMENT, 2, 5.0, 1.0, 2.0)
    with pytest.raises(ValueError):
        window_integral(MOMENT, 2, 1.0, 5.0, -1.0)


@pytest.mark.parametrize("kernel", (MOMENT, MGW, MPC3), ids=lambda k: k.kind + str(k.p or ""))
def test_window_many_matches_scalar(kernel):
    s = np.geomspace(0.3, 30.0, 23)
    batch = window_integral_many(kernel, 4, 1.0, 5.0, s)
    single = np.asarray([window_integral(kernel, 4, 1.0, 5.0, float(v)) for v in s])
    assert_allclose(batch, single, atol=1e-12)


def test_mpc_window_against_one_sided_masses():
    # quadrature path cross-checked with the exact reduction-formula masses
    for s in (0.7, 2.0, 11.0):
        quad = window_integral(MPC3, 5, 1.0, 5.0, s)
        exact = MPC3.mass_above(5, 1.0 / s) - MPC3.mass_above(5, 5.0 / s)
        assert math.isclose(quad, exact, abs_tol=1e-12), s


# -- truncated-norm diagnostic -------------------------------------------------


def test_window_lq_moment_stabilizes():
    result = window_lq_diagnostic(MOMENT, 4, 1.0, 5.0, 1.0)
    assert len(result.norms) == 9
    assert all(b >= a for a, b in zip(result.norms[:-1], result.norms[1:]))
    assert result.cauchy_gap < 1e-6


def test_window_lq_mgw_stabilizes():
    result = window_lq_diagnostic(MGW, 6, 1.0, 5.0, 2.0)
    assert result.cauchy_gap < 1e-6


def test_window_lq_mpc_early_increments_shrink():
    # the log-polynomial tail keeps the first increments shrinking; under the
    # Lebesgue volume they eventually turn around, but stay below threshold
    # through J = 8
    result = window_lq_diagnostic(MPC3, 8, 1.0, 5.0, 1.0)
    gaps = [b - a for a, b in zip(result.norms[:-1], result.norms[1:])]
    assert all(y < x for x, y in zip(gaps[:4], gaps[1:5]))
    assert result.cauchy_gap < 1e-6


def test_window_lq_validation():
    with pytest.raises(ValueError):
        window_lq_diagnostic(MOMENT, 4, 1.0, 5.0, 0.5)
    with pytest.raises(ValueError):
        window_lq_diagnostic(MOMENT, 4, 5.0, 1.0, 1.0)


# -- tail limit sequence --------------------------------------------------------


def test_mpc_tail_limit_values():
    seq = mpc_tail_limit_check(2, math.e, [1000])
    assert math.isclose(seq[0], 2.0, abs_tol=1e-5)
    seq = mpc_tail_limit_check(3, math.e**2, [1000])
    assert math.isclose(seq[0], 1.0, abs_tol=1e-5)


def test_mpc_tail_limit_monotone_from_below():
    ns = list(range(1, 51))
    seq = mpc_tail_limit_check(2, 2.0, ns)
    limit = 2.0 / math.log(2.0)
    assert all(a < b for a, b in zip(seq[:-1], seq[1:]))
    assert all(v < limit for v in seq)


def test_mpc_tail_limit_validation():
    with pytest.raises(ValueError):
        mpc_tail_limit_check(1, 2.0, [1])
    with pytest.raises(ValueError):
        mpc_tail_limit_check(2, 1.0, [1])
