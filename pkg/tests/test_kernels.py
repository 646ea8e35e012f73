import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wskernels.errors import ConvergenceError, DomainError, ParityError, PoleError
from wskernels.kernels import (
    LimitPolicy, OrderPair, PolarPoint, kernel_boldJ, kernel_J, kernel_M, kernel_P, kernel_R,
    kernel_values, phase_factor, richardson_limit, y_factor,
)

mp.mp.dps = 30


def mp_product(mu, d, w):
    return mp.besselj(mu + d, w) * mp.besselj(mu - d, mp.conj(w))


def mp_boldJ(mu, d, z):
    w = 4 * mp.pi * z
    mu = mp.mpc(mu)
    if (2 * d) % 2 == 1:
        return 1j * (mp_product(mu, d, w) + mp_product(-mu, -d, w)) / mp.cos(mp.pi * mu)
    return (mp_product(-mu, -d, w) - mp_product(mu, d, w)) / mp.sin(mp.pi * mu)


def mp_P(mu, d, w):
    return ((abs(w) / 2) ** (2 * mu) * mp.expj(2 * d * mp.arg(w))
            * mp.rgamma(1 + mu + d) * mp.rgamma(1 + mu - d))


def mp_R(mu, d, z):
    w = 4 * mp.pi * mp.mpc(z)
    mu = mp.mpc(mu)
    if (2 * d) % 2 == 1:
        return 1j * (mp_P(mu, d, w) + mp_P(-mu, -d, w)) / mp.cos(mp.pi * mu)
    return (mp_P(-mu, -d, w) - mp_P(mu, d, w)) / mp.sin(mp.pi * mu)


def close(a, b, tol):
    a, b = complex(a), complex(b)
    return abs(a - b) <= tol * max(abs(b), 1.0)


PAIRS = [(0.3, 0), (0.2j, 1), (0.15 + 0.1j, 2), (0.1, 0.5), (0.25j, 1.5)]
POINTS = [0.03 + 0.02j, 0.2 - 0.1j, -0.4 + 0.3j, 1.1j, -2.0 - 0.5j, 3.5 + 2.0j]


@pytest.mark.parametrize("mu,d", PAIRS)
@pytest.mark.parametrize("z", POINTS)
def test_boldJ_against_mpmath(mu, d, z):
    pair = OrderPair.of(mu, d)
    assert close(kernel_boldJ(pair, z), mp_boldJ(mu, d, z), 1e-9)


@pytest.mark.parametrize("mu,d", PAIRS)
@pytest.mark.parametrize("z", POINTS)
def test_R_and_M(mu, d, z):
    pair = OrderPair.of(mu, d)
    r = complex(mp_R(mu, d, z))
    assert close(kernel_R(pair, z), r, 1e-11)
    assert close(kernel_M(pair, z), complex(mp_boldJ(mu, d, z)) - r, 1e-9)


def test_kernel_J_product():
    pair = OrderPair.of(0.2 + 0.1j, 1)
    z = 0.7 - 0.4j
    assert close(kernel_J(pair, z), mp_product(pair.mu, 1, z), 1e-12)
    with pytest.raises(ParityError):
        kernel_J(OrderPair.of(0.2, 0.5), z)


def test_kernel_J_at_d_zero_is_modulus_squared():
    z = 1.3 + 0.8j
    v = kernel_J(OrderPair(0.4, 0), z)
    assert abs(v.imag) < 1e-15
    assert close(v, abs(complex(mp.besselj(0.4, z))) ** 2, 1e-13)


def test_P_is_leading_power():
    pair = OrderPair.of(0.3, 1)
    z = 0.4 + 0.2j
    assert close(kernel_P(pair, z), mp_P(0.3, 1, mp.mpc(z)), 1e-13)
    assert close(kernel_values("P", pair, z), mp_P(0.3, 1, 4 * mp.pi * z), 1e-13)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.01, 4.0), st.floats(0, 2 * math.pi - 1e-9))
def test_boldJ_even_under_negation(x, phi):
    # bJ(-z) = bJ(z) for integer d, -bJ(z) for half-integer d
    z = PolarPoint(x, phi).z
    for pair, sign in ((OrderPair.of(0.3j, 1), 1), (OrderPair.of(0.2, 0.5), -1)):
        a, b = kernel_boldJ(pair, z), kernel_boldJ(pair, -z)
        assert abs(a - sign * b) <= 1e-10 * max(abs(a), 1)


@settings(max_examples=25, deadline=None)
@given(st.floats(-0.45, 0.45), st.floats(-0.5, 0.5), st.floats(0.05, 3.0))
def test_boldJ_symmetric_in_mu(a, b, x):
    # (mu, d) -> (-mu, -d) leaves bJ unchanged
    mu = complex(a, b)
    if abs(cmath.sin(math.pi * mu)) < 0.05:
        return
    z = x * cmath.exp(0.7j)
    v1 = kernel_boldJ(OrderPair.of(mu, 1), z)
    v2 = kernel_boldJ(OrderPair.of(-mu, -1), z)
    assert abs(v1 - v2) <= 1e-10 * max(abs(v1), 1)


def test_regimes_agree_across_switch():
    pair = OrderPair.of(0.2 + 0.3j, 1)
    for r in (3.99 / (4 * math.pi), 4.01 / (4 * math.pi), 19.9 / (4 * math.pi),
              20.1 / (4 * math.pi)):
        z = r * cmath.exp(0.9j)
        assert close(kernel_boldJ(pair, z), mp_boldJ(pair.mu, 1, z), 1e-10)


def test_integer_mu_limit():
    # mu = 0, d = 0: derivative form of the quotient
    z = 0.5 + 0.3j
    v = kernel_M(OrderPair(0, 0), z)
    eps = mp.mpf("1e-12")
    ref = (mp_boldJ(eps, 0, z) - mp_R(eps, 0, z) + mp_boldJ(-eps, 0, z) - mp_R(-eps, 0, z)) / 2
    assert close(v, ref, 1e-8)
    mp.mp.dps = 40
    assert close(kernel_boldJ(OrderPair(1, 0), z), mp_boldJ(1 + eps, 0, z), 1e-8)
    mp.mp.dps = 30


def test_R_pole_detected():
    # for half-integer d at mu = 1/2 the numerator of R does not vanish
    with pytest.raises(PoleError):
        kernel_R(OrderPair.of(0.5, 0.5), 0.3 + 0.1j)


def test_origin_rejected():
    with pytest.raises(DomainError):
        kernel_boldJ(OrderPair(0.2, 0), 0.0)


def test_kernel_values_dispatch():
    pair = OrderPair.of(0.1, 1)
    z = np.array([0.3 + 0.1j, -1.0j])
    assert np.allclose(kernel_values("J", pair, z), kernel_boldJ(pair, z))
    assert np.allclose(kernel_values("unit", pair, z), 1)
    with pytest.raises(ValueError):
        kernel_values("nope", pair, z)


def test_richardson_limit_recovers_removable_value():
    val, err = richardson_limit(lambda m: np.sin(m) / m if m != 0 else 1.0, 0j, LimitPolicy())
    assert abs(val - 1) < 1e-12 and err < 1e-10
    with pytest.raises(ConvergenceError):
        richardson_limit(lambda m: 1 / m.real ** 3 if m.real > 0 else 0.0, 0j, LimitPolicy())


def test_order_pair_validation():
    assert OrderPair.of(0.1, 0.5).twice_d == 1
    with pytest.raises(ValueError):
        OrderPair.of(0.1, 0.3)
    with pytest.raises(ValueError):
        PolarPoint(0.0, 1.0)
    with pytest.raises(ValueError):
        LimitPolicy(epsilon=1e-2)


def test_y_and_phase_factor():
    assert y_factor(2.0) == 1.0
    assert y_factor(0.0) == 1.0
    z = 3.0
    assert abs(y_factor(z) - (3 + math.sqrt(5)) / 2) < 1e-14
    assert abs(phase_factor(z) - 1) < 1e-15
    # the larger root is chosen, so Y >= 1 everywhere
    zs = np.array([0.5 + 0.5j, -1.2 + 0.1j, 1e-3, 4j])
    assert np.all(y_factor(zs) >= 1 - 1e-15)
    assert np.allclose(np.abs(phase_factor(zs)), 1)
