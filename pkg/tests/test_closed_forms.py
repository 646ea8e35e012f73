import cmath
import math
import warnings

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wskernels import closed_forms as cf
from wskernels.closed_forms import AppendixMode, TargetPoint
from wskernels.errors import ParityError, RangeError, SingularityError
from wskernels.kernels import OrderPair

mp.mp.dps = 30


def rel(a, b):
    return abs(complex(a) - complex(b)) / abs(complex(b))


def test_coeff_C_limiting_value():
    # rho = 0 collapses the gamma product to 1 / (1 - mu^2)
    assert abs(cf.coeff_C(0, OrderPair.of(0.2, 1)) - 1 / (1 - 0.04)) < 1e-13


@settings(max_examples=40, deadline=None)
@given(
    st.floats(0.05, 0.9), st.floats(-math.pi, math.pi),
    st.sampled_from([(0.3, 0.1), (0.1, 0.2j), (0.45, 0.15 + 0.1j), (0.25, 0.3)]),
    st.sampled_from([0, 1, 2]),
)
def test_prop32_inner_disc(r, ang, rm, d):
    rho, mu = rm
    u = r * cmath.exp(1j * ang)
    if abs(u.imag) < 1e-6 and u.real > 0:
        return
    pair = OrderPair.of(mu, d)
    assert rel(cf.prop32_lhs(rho, pair, u), cf.rhs_prop32(rho, pair, u)) < 1e-8


@settings(max_examples=25, deadline=None)
@given(st.floats(1.1, 3.0), st.floats(0.05, 2 * math.pi - 0.05))
def test_prop32_outer_annulus(r, ang):
    pair = OrderPair.of(0.2j, 1)
    u = r * cmath.exp(1j * ang)
    assert rel(cf.prop32_lhs(0.3, pair, u), cf.rhs_prop32(0.3, pair, u)) < 1e-8


def test_prop32_positive_axis_warns():
    with pytest.warns(cf.BranchCutWarning):
        cf.prop32_lhs(0.3, OrderPair.of(0.1, 0), 0.4)


def test_general_form_is_continuous_at_y_two():
    # the y < 2 and y >= 2 expansions meet at the circle |u| = 1
    pair = OrderPair.of(0.15, 1)
    for theta in (0.3, 1.2, 2.5):
        lo = cf.rhs_general_WS(0.3, pair, TargetPoint(2 - 1e-7, theta))
        hi = cf.rhs_general_WS(0.3, pair, TargetPoint(2 + 1e-7, theta))
        assert rel(lo, hi) < 1e-5


# the approach to y = 2 is only like |y - 2|^(1 - 2 rho), so rho is kept small
@pytest.mark.parametrize("rho,mu,d", [(0.15, 0.05, 0), (0.15, 0.1j, 1), (0.1, 0.05, 2),
                                      (0.15, 0.05, 0.5)])
def test_cor13_is_y_two_limit(rho, mu, d):
    pair = OrderPair.of(mu, d)
    near = cf.rhs_general_WS(rho, pair, TargetPoint(2 + 1e-5, 0.0))
    assert rel(near, cf.rhs_cor13(rho, pair)) < 1e-3


def test_u_equal_one_is_singular():
    with pytest.raises(SingularityError):
        cf.rhs_general_WS(0.3, OrderPair.of(0.1, 0), TargetPoint(2 + 1e-8, 0.0))


def test_strip_violation():
    with pytest.raises(RangeError):
        cf.rhs_general_WS(0.6, OrderPair.of(0.1, 0), TargetPoint(1.0, 0.0))
    with pytest.raises(RangeError):
        cf.rhs_general_WS(0.05, OrderPair.of(0.3, 0), TargetPoint(3.0, 0.0))


def test_strip_lower_with_twist():
    assert cf.strip_lower(0.3, 0) == pytest.approx(0.3)
    assert cf.strip_lower(0.3, 2, 1) == pytest.approx(max(-0.3 - 1.5, 0.3 - 0.5))
    assert cf.strip_lower(0.3, 2, -1) == pytest.approx(max(-0.3 - 0.5, 0.3 - 1.5))


def mp_lemma(nu, m, y, theta):
    a = abs(m)
    radial = (mp.mpf(2) ** (2 * nu - 1) * (4 * mp.pi * y) ** (-2 * nu)
              * mp.gamma(a / 2 + nu) / mp.gamma(a / 2 - nu + 1))
    return 2 * mp.pi * (-1j) ** a * mp.expj(-m * theta) * radial


@pytest.mark.parametrize("nu", [0.25, 0.3 + 0.1j, -0.2, 0.6j])
@pytest.mark.parametrize("m", [0, 1, 2, -3])
def test_lemma_against_weber_integral(nu, m):
    if not -abs(m) / 2 < complex(nu).real < 0.75:
        with pytest.raises(RangeError):
            cf.rhs_lemma43(nu, m, TargetPoint(1.3, 0.4))
        return
    val = cf.rhs_lemma43(nu, m, TargetPoint(1.3, 0.4))
    assert rel(val, mp_lemma(nu, m, 1.3, 0.4)) < 1e-12


@pytest.mark.parametrize("t", [0.3, 0.7, 1.5])
def test_special_value_at_y_two(t):
    val = cf.rhs_special_WS(OrderPair(1j * t, 0), TargetPoint(2.0, 0.0))
    assert rel(val, 4 * math.sin(t * math.log(2)) ** 2 / t**2) < 1e-12


def test_special_mu_zero_limit():
    target = TargetPoint(1.3, 0.2)
    v0 = cf.rhs_special_WS(OrderPair(0, 0), target)
    v1 = cf.rhs_special_WS(OrderPair(1e-3, 0), target)
    assert abs(v0 - v1) < 1e-5 * abs(v0)


@pytest.mark.parametrize("m", [0, 1, 2, 3])
@pytest.mark.parametrize("d", [0, 0.5, 1])
def test_appendix_parity_zeros(m, d):
    pair = OrderPair.of(0.1, d)
    target = TargetPoint(1.4, 0.6)
    for trig in ("cos", "sin"):
        mode = AppendixMode(m, trig)
        if mode.allowed(pair):
            continue
        assert cf.rhs_appendix(0.2, pair, mode, target) == 0
        with pytest.raises(ParityError):
            cf.rhs_appendix(0.2, pair, mode, target, strict=True)


def test_appendix_m_zero_recombines_to_general_form():
    # F + i G over the two trig halves gives the full plane-wave integral
    target = TargetPoint(2.7, 0.9)
    for d in (0, 1, 0.5):
        pair = OrderPair.of(0.15, d)
        c = cf.rhs_appendix(0.3, pair, AppendixMode(0, "cos"), target)
        s = cf.rhs_appendix(0.3, pair, AppendixMode(0, "sin"), target)
        full = cf.rhs_general_WS(0.3, pair, target)
        assert abs((c - 1j * s) - full) < 1e-10 * abs(full)


@pytest.mark.parametrize("rho,m,trig", [(-0.2, 0, "sin"), (-0.05, -1, "cos"), (-0.55, -2, "sin"),
                                         (0.1, 0, "sin")])
def test_appendix_corollary_is_y_two_limit(rho, m, trig):
    pair = OrderPair.of(0.1, 0.5)
    mode = AppendixMode(m, trig)
    near = cf.rhs_appendix(rho, pair, mode, TargetPoint(2 + 1e-5, 0.0))
    assert rel(near, cf.appendix_corollary(rho, pair, mode)) < 1e-4
    assert cf.rhs_appendix(rho, pair, mode, TargetPoint(2.0, 0.0)) == \
        cf.appendix_corollary(rho, pair, mode)


U_GRID = [0.3 * cmath.exp(1j * a) for a in np.linspace(0.4, 5.9, 10)] + \
         [2.2 * cmath.exp(1j * a) for a in np.linspace(0.4, 5.9, 10)]


@pytest.mark.parametrize("u", U_GRID)
def test_ode_residuals(u):
    for pair in (OrderPair.of(0.1, 0), OrderPair.of(0.2j, 1)):
        assert cf.ode_residual(0.3, pair, u) < 1e-6


def test_ode_residual_rejects_half_integer_and_seam():
    with pytest.raises(ParityError):
        cf.ode_residual(0.3, OrderPair.of(0.1, 0.5), 0.3j)
    with pytest.raises(SingularityError):
        cf.ode_residual(0.3, OrderPair.of(0.1, 0), cmath.exp(1j))


def test_ode_residual_detects_wrong_function():
    # perturbing rho in the closed form breaks the equation
    f = cf._two_variable(0.3, OrderPair.of(0.1, 0), 0.3j)
    g = cf._two_variable(0.31, OrderPair.of(0.1, 0), 0.3j)
    assert abs(f(0.3j, -0.3j) - g(0.3j, -0.3j)) > 1e-4


@pytest.mark.parametrize("nu", [0.4, 1.3, 0.5 + 0.5j])
def test_real_line_WS_J_branches(nu):
    # int J_nu(t) dt / t = 1 / nu, and the two branches meet at y = 2
    assert rel(cf.rhs_real_line("WS_J", nu, 0.0), 1 / nu) < 1e-14
    lo = cf.rhs_real_line("WS_J", nu, 2 - 1e-10)
    hi = cf.rhs_real_line("WS_J", nu, 2 + 1e-10)
    assert rel(lo, hi) < 1e-4
    assert rel(cf.rhs_real_line("WS_J", nu, 1.2, sign=-1),
               cf.rhs_real_line("WS_J", complex(nu).conjugate(), 1.2).conjugate()) < 1e-14


def test_real_line_domain_checks():
    with pytest.raises(RangeError):
        cf.rhs_real_line("WS_J", -0.2, 1.0)
    with pytest.raises(RangeError):
        cf.rhs_real_line("reg_M", 1.2, 1.0)
    with pytest.raises(ValueError):
        cf.rhs_real_line("nope", 0.2, 1.0)


def test_target_point_validation():
    with pytest.raises(ValueError):
        TargetPoint(-1.0)
    with pytest.raises(ValueError):
        TargetPoint(1.0, 7.0)
    t = TargetPoint.from_z(-1j)
    assert t.theta == pytest.approx(1.5 * math.pi)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert abs(t.u + 0.25) < 1e-15
