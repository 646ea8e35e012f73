import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wskernels import closed_forms as cf
from wskernels import quadrature as qd
from wskernels.closed_forms import AppendixMode, TargetPoint
from wskernels.errors import AliasingError, ConfigError, RangeError, TailDivergence
from wskernels.kernels import OrderPair, kernel_boldJ

mp.mp.dps = 25


def rel(a, b):
    return abs(complex(a) - complex(b)) / abs(complex(b))


def mp_tail(j, kappa, p, x0):
    full = (mp.mpf(2) ** p * mp.mpf(kappa) ** (-p - 1)
            * mp.gamma((j + p + 1) / 2) / mp.gamma((j - p + 1) / 2))
    head = mp.quad(lambda x: mp.besselj(j, kappa * x) * x ** p, mp.linspace(0, x0, 8))
    return complex(full - head)


@pytest.mark.parametrize("j", [0, 1, 3])
@pytest.mark.parametrize("p", [-0.6, -0.2 + 0.3j, 0.3])
@pytest.mark.parametrize("a", [0.4, 5.0, 30.0])
def test_bessel_power_tail(j, p, a):
    kappa = 2.0
    x0 = a / kappa
    if (j + p + 1).real <= 0:
        return
    assert abs(qd.bessel_power_tail(j, kappa, p, x0) - mp_tail(j, kappa, p, x0)) < 1e-10


def test_bessel_power_tail_diverges():
    with pytest.raises(TailDivergence):
        qd.bessel_power_tail(0, 1.0, 0.5, 2.0)


@pytest.mark.parametrize("m", [0, 1, 2])
@pytest.mark.parametrize("tail", ["auto", "ibp"])
def test_radial_power_law(m, tail):
    rho, s, y = 0.2 + 0.1j, -0.3, 0.9
    c = qd.PowerLaw(1.5, s)
    r = qd.radial_bessel_integral(c, m, y, rho, qd.QuadConfig(tail=tail))
    sig = s + 2 * rho
    exact = 1.5 * complex(mp.mpf(2) ** (sig - 1) * (4 * mp.pi * y) ** (-sig)
                          * mp.gamma((m + sig) / 2) / mp.gamma((m - sig) / 2 + 1))
    assert abs(r.value - exact) < 1e-9 * abs(exact)
    assert r.err_estimate < 1e-7
    assert r.tail_method == ("ibp" if tail == "ibp" else "asymptotic_subtraction")


def test_radial_generic_callable():
    # int e^{-x} J_0(k x) dx = 1 / sqrt(1 + k^2)
    y = 0.3
    r = qd.radial_bessel_integral(lambda x: np.exp(-x), 0, y, 0.5)
    assert abs(r.value - 1 / math.sqrt(1 + (4 * math.pi * y) ** 2)) < 1e-9
    assert r.tail_method == "absolute"


def test_angular_coeffs_match_direct_quadrature():
    pair = OrderPair.of(0.2j, 1)
    x = 0.6
    c = qd.angular_coeffs("J", pair, x, 128)
    phi = np.linspace(0, 2 * np.pi, 4096, endpoint=False)
    vals = kernel_boldJ(pair, x * np.exp(1j * phi))
    for n in (0, 2, -2, 6):
        direct = np.mean(vals * np.exp(-1j * n * phi))
        assert abs(c[n] - direct) < 1e-12 * max(1, abs(c[0]))
    # only modes n = 2d + 2j - 2k survive, so odd modes vanish for d = 1
    assert np.max(np.abs(c[1::2])) < 1e-13 * abs(c[0])


def test_angular_coeffs_aliasing_detected():
    with pytest.raises(AliasingError):
        qd.angular_coeffs("J", OrderPair.of(0.1, 0), 3.0, 8)


@pytest.mark.parametrize("mu,d,rho,y,theta", [
    (0.1, 0, 0.25, 0.8, 0.3), (0.2j, 1, 0.3, 3.0, 1.1), (0.15 + 0.1j, 2, 0.45, 1.5, 2.0),
    (0.1, 0.5, 0.3, 6.0, 0.7),
])
def test_double_integral_general_form(mu, d, rho, y, theta):
    pair = OrderPair.of(mu, d)
    t = TargetPoint(y, theta)
    r = qd.lhs_double_integral("J", rho, pair, t)
    rhs = cf.rhs_general_WS(rho, pair, t)
    assert rel(r.value, rhs) < 1e-6
    assert abs(r.value - rhs) <= 10 * r.err_estimate + 1e-12


def test_double_integral_regularized_kernel():
    pair = OrderPair(0.15j, 0)
    t = TargetPoint(1.2, 0.4)
    r = qd.lhs_double_integral("M", 0.0, pair, t)
    assert rel(r.value, cf.rhs_special_WS(pair, t)) < 1e-8


@pytest.mark.parametrize("m", [0, 1, 2])
@pytest.mark.parametrize("nu", [0.25, 0.3 + 0.1j])
def test_unit_kernel_twist(m, nu):
    t = TargetPoint(1.0, 0.5)
    r = qd.lhs_double_integral("unit", nu, OrderPair(0, 0), t, twist=m)
    assert rel(r.value, cf.rhs_lemma43(nu, m, t)) < 1e-8


def test_leading_power_tail_methods_agree():
    pair = OrderPair.of(0.1, 0)
    t = TargetPoint(1.7, 0.2)
    a = qd.lhs_double_integral("R", 0.2, pair, t)
    b = qd.lhs_double_integral("R", 0.2, pair, t, cfg=qd.QuadConfig(tail="ibp"))
    assert a.tail_method == "asymptotic_subtraction" and b.tail_method == "ibp"
    assert abs(a.value - b.value) < 1e-8 * abs(a.value)


@pytest.mark.parametrize("m,trig", [(1, "cos"), (1, "sin"), (2, "cos"), (2, "sin")])
def test_appendix_modes(m, trig):
    pair = OrderPair.of(0.1, 0)
    mode = AppendixMode(m, trig)
    t = TargetPoint(2.6, 0.5)
    r = qd.lhs_double_integral("J", 0.3, pair, t, mode=mode, check_tol=False)
    rhs = cf.rhs_appendix(0.3, pair, mode, t)
    if rhs == 0:
        assert abs(r.value) <= max(r.err_estimate, 1e-12)
    else:
        assert rel(r.value, rhs) < 1e-6


def test_mixture_is_linear():
    t = TargetPoint(1.3, 0.2)
    p1, p2 = OrderPair(0.1j, 0), OrderPair(0.3j, 0)
    mix = qd.lhs_mixture_integral("M", 0.0, [(2.0, p1), (-0.5j, p2)], t)
    a = qd.lhs_double_integral("M", 0.0, p1, t).value
    b = qd.lhs_double_integral("M", 0.0, p2, t).value
    assert abs(mix.value - (2 * a - 0.5j * b)) < 1e-10


def test_strip_and_config_errors():
    pair = OrderPair.of(0.1, 0)
    with pytest.raises(RangeError):
        qd.lhs_double_integral("J", 0.6, pair, TargetPoint(1.0))
    with pytest.raises(RangeError):
        qd.lhs_double_integral("R", 0.6, pair, TargetPoint(1.0))
    with pytest.raises(ConfigError):
        qd.QuadConfig(angular_modes=48)
    with pytest.raises(ConfigError):
        qd.QuadConfig(tail="simpson")
    with pytest.raises(ConfigError):
        qd.lhs_double_integral("J", 0.3, pair, TargetPoint(1.0), cfg=qd.QuadConfig(tail="ibp"))


@settings(max_examples=8, deadline=None)
@given(st.floats(0.3, 4.0), st.floats(0, 2 * math.pi - 1e-6))
def test_theta_dependence_is_a_phase_for_unit_kernel(y, theta):
    # rotating the target only multiplies by e^{-i m theta}
    m = 1
    base = qd.lhs_double_integral("unit", 0.3, OrderPair(0, 0), TargetPoint(y, 0.0), twist=m)
    rot = qd.lhs_double_integral("unit", 0.3, OrderPair(0, 0), TargetPoint(y, theta), twist=m)
    assert abs(rot.value - base.value * np.exp(-1j * m * theta)) < 1e-9 * abs(base.value)


@pytest.mark.slow
def test_brute_oracle_agrees_with_angular_integrator():
    pair = OrderPair.of(0.1, 1)
    t = TargetPoint(1.5, 0.4)
    brute = qd.brute_2d_oracle("J", 0.3, pair, t)
    fast = qd.lhs_double_integral("J", 0.3, pair, t)
    assert abs(brute.value - fast.value) <= 10 * brute.err_estimate + 1e-8
    assert rel(brute.value, fast.value) < 1e-5


@pytest.mark.slow
def test_brute_oracle_unit_kernel():
    t = TargetPoint(1.0, 0.0)
    brute = qd.brute_2d_oracle("unit", 0.25, OrderPair(0, 0), t)
    assert rel(brute.value, cf.rhs_lemma43(0.25, 0, t)) < 1e-4
