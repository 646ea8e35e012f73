"""Two-variable Bessel kernels on C minus the origin.

``J_{mu,d}(z) = J_{mu+d}(z) J_{mu-d}(conj z)`` and its combinations

* even family (integer d):  bJ = (J_{-mu,-d}(4 pi z) - J_{mu,d}(4 pi z)) / sin(pi mu)
* odd family (half-integer d): bJ = i (J_{mu,d}(4 pi z) + J_{-mu,-d}(4 pi z)) / cos(pi mu)

together with the leading-power part R and the regularized kernel M = bJ - R.

Evaluation regimes, by |w| with w = 4 pi z:

* ``|w| <= 4``: power series, with a symmetric epsilon-offset Richardson
  limit when mu sits on (or very near) a zero of the denominator;
* moderate ``|w|``: the exact Hankel-product form, each Hankel function from
  its Laplace integral;
* large ``|w|``: the same product form from the Hankel asymptotic series.

The Hankel-product form has no mu-singularity and no exponential
cancellation, which is why it replaces the series away from the origin.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sp

from .errors import ConvergenceError, DomainError, ParityError, PoleError
from .special import DEFAULT_POLICY, _hankel_terms, _j_reduced_series

FOUR_PI = 4 * math.pi
SERIES_RADIUS = 4.0
ASYMPTOTIC_RADIUS = 20.0
_ASYM_TERMS = 40
_ASYM_TOL = 1e-15


@dataclass(frozen=True)
class OrderPair:
    """Kernel index (mu, d) with d = twice_d / 2."""

    mu: complex
    twice_d: int

    def __post_init__(self):
        object.__setattr__(self, "mu", complex(self.mu))
        td = self.twice_d
        if int(td) != td:
            raise ValueError("twice_d must be an integer")
        object.__setattr__(self, "twice_d", int(td))
        if not math.isfinite(abs(self.mu)):
            raise ValueError("mu must be finite")

    @classmethod
    def of(cls, mu, d) -> "OrderPair":
        td = 2 * d
        if abs(td - round(td)) > 1e-12:
            raise ValueError("d must be a multiple of 1/2")
        return cls(mu, int(round(td)))

    @property
    def d(self) -> float:
        return self.twice_d / 2

    @property
    def odd(self) -> bool:
        return self.twice_d % 2 == 1

    def negated(self) -> "OrderPair":
        return OrderPair(-self.mu, -self.twice_d)

    def with_mu(self, mu) -> "OrderPair":
        return OrderPair(mu, self.twice_d)

    def singular_distance(self) -> float:
        """Distance from mu to the zero set of the kernel's denominator."""
        shift = 0.5 if self.odd else 0.0
        m = self.mu - shift
        return abs(m - round(m.real))


@dataclass(frozen=True)
class PolarPoint:
    x: float
    phi: float

    def __post_init__(self):
        if not self.x > 0:
            raise ValueError("x must be positive")
        if not 0 <= self.phi < 2 * math.pi:
            raise ValueError("phi must lie in [0, 2 pi)")

    @property
    def z(self) -> complex:
        return self.x * complex(math.cos(self.phi), math.sin(self.phi))


@dataclass(frozen=True)
class LimitPolicy:
    """How removable singularities in mu are resolved.

    Within ``radius`` of a singular mu the value is the Richardson
    extrapolation of symmetric averages at offsets epsilon / 2**k.
    """

    epsilon: float = 1e-4
    richardson_levels: int = 3
    tol: float = 1e-6
    radius: float = 1e-6

    def __post_init__(self):
        if not 1e-6 <= self.epsilon <= 1e-3:
            raise ValueError("epsilon must lie in [1e-6, 1e-3]")
        if int(self.richardson_levels) != self.richardson_levels or self.richardson_levels < 2:
            raise ValueError("richardson_levels must be an integer >= 2")


DEFAULT_LIMIT = LimitPolicy()


def richardson_limit(f, mu, lim: LimitPolicy):
    """Limit of f at mu from symmetric offsets, extrapolated in epsilon**2.

    ``f`` maps a complex mu to an array. Returns (value, error estimate).
    """
    rows = []
    for k in range(lim.richardson_levels):
        e = lim.epsilon / 2**k
        v = 0.5 * (np.asarray(f(mu + e)) + np.asarray(f(mu - e)))
        row = [v]
        for j in range(1, k + 1):
            row.append(row[j - 1] + (row[j - 1] - rows[k - 1][j - 1]) / (4**j - 1))
        rows.append(row)
    best = rows[-1][-1]
    err = np.abs(best - rows[-1][-2])
    # near zeros of f the relative test is meaningless; 1e-10 of the largest
    # entry is well below any quadrature tolerance
    floor = 1e-10 * float(np.max(np.abs(best))) + 1e-300
    if np.any(err > lim.tol * np.abs(best) + floor):
        raise ConvergenceError("Richardson levels disagree beyond tolerance")
    return best, err


# --------------------------------------------------------------------------
# building blocks


def _as_array(z):
    return np.asarray(z, dtype=complex)


def _out(val, z):
    return complex(np.asarray(val).reshape(())) if np.ndim(z) == 0 else val


def _reduced_j(nu, q):
    """Entire part of J: J_nu(s) / (s/2)**nu as a function of q = s**2."""
    nu = complex(nu)
    if nu.imag == 0 and nu.real < 0 and nu.real == math.floor(nu.real):
        k = int(round(-nu.real))
        return (-1) ** k * (np.asarray(q) / 4) ** k * _reduced_j(k, q)
    return complex(sp.rgamma(nu + 1)) * _j_reduced_series(nu, q, DEFAULT_POLICY)


def _abs_power(r, s):
    """r**s for real r >= 0, complex s; 0**s follows the limit when it exists."""
    r = np.asarray(r, dtype=float)
    out = np.empty(r.shape, dtype=complex)
    pos = r > 0
    out[pos] = np.exp(s * np.log(r[pos]))
    if np.any(~pos):
        if s == 0:
            out[~pos] = 1.0
        elif complex(s).real > 0:
            out[~pos] = 0.0
        else:
            raise DomainError("kernel singular at z = 0")
    return out


def _bessel_product(mu, twice_d, w, subtract_leading=False):
    """J_{mu+d}(w) J_{mu-d}(conj w) with arg conj(w) = -arg w.

    With ``subtract_leading`` the leading power P is removed inside the
    series, avoiding cancellation.
    """
    mu = complex(mu)
    d = twice_d / 2
    a, b = mu + d, mu - d
    w = _as_array(w)
    q = w * w
    sa = _reduced_j(a, q)
    sb = _reduced_j(b, np.conj(q))
    pref = _abs_power(np.abs(w) / 2, 2 * mu) * np.exp(1j * twice_d * np.angle(w))
    if subtract_leading:
        ca, cb = complex(sp.rgamma(a + 1)), complex(sp.rgamma(b + 1))
        if a.imag == 0 and a.real < 0 and a.real == math.floor(a.real):
            ca = 0.0
        if b.imag == 0 and b.real < 0 and b.real == math.floor(b.real):
            cb = 0.0
        return pref * (ca * (sb - cb) + (sa - ca) * sb)
    return pref * sa * sb


def _leading_power(mu, twice_d, w):
    mu = complex(mu)
    d = twice_d / 2
    w = _as_array(w)
    g = complex(sp.rgamma(1 + mu + d) * sp.rgamma(1 + mu - d))
    return _abs_power(np.abs(w) / 2, 2 * mu) * np.exp(1j * twice_d * np.angle(w)) * g


def _combine(mu, odd, plus_part, minus_part):
    """Apply the family's denominator: plus_part is the (mu, d) term."""
    if odd:
        return 1j * (plus_part + minus_part) / np.cos(np.pi * mu)
    return (minus_part - plus_part) / np.sin(np.pi * mu)


# --------------------------------------------------------------------------
# Hankel functions for the product form


def _laplace_nodes():
    h = 0.1
    r1 = 4.0
    t = np.arange(-4.0, 3.2, h)
    y = np.pi / 2 * np.sinh(t)
    x = r1 / (1 + np.exp(-2 * y))
    wt = r1 * h * np.pi / 2 * np.cosh(t) / (2 * np.cosh(y) ** 2)
    gx, gw = sp.roots_laguerre(40)
    return x, wt, r1, gx, gw


_LAPLACE = _laplace_nodes()
_LAPLACE_SUBTRACT = 5


def _scaled_hankel_laplace(kind, nu, w):
    """H^(kind)_nu(w) exp(-+ i w) from its Laplace integral; Re w >= 0.

    The first few binomial terms of (1 +- iu/2w)^(nu-1/2) are integrated
    exactly (they give gamma functions); only the remainder, which is
    small near u = 0 where u^(nu-1/2) oscillates, goes through quadrature.
    """
    nu = complex(nu)
    w = _as_array(w)
    if nu.real < 0:
        # H1_nu = e^{-i pi nu} H1_{-nu},  H2_nu = e^{i pi nu} H2_{-nu}
        fac = np.exp(-1j * np.pi * nu) if kind == 1 else np.exp(1j * np.pi * nu)
        return fac * _scaled_hankel_laplace(kind, -nu, w)
    x, wt, r1, gx, gw = _LAPLACE
    beta = -np.pi / 4 if kind == 1 else np.pi / 4
    rot = np.exp(1j * beta)
    c = math.cos(beta)
    r = np.concatenate([x, r1 + gx / c])
    weights = np.concatenate([wt, gw / c * np.exp(gx)]) * rot
    u = r * rot
    alpha = nu - 0.5
    sgn = 1j if kind == 1 else -1j
    base = np.exp(-u + alpha * np.log(u)) * weights
    rg = complex(sp.rgamma(nu + 0.5))
    flat_w = w.ravel()
    out = np.empty(flat_w.shape, dtype=complex)
    chunk = 2048
    for s in range(0, flat_w.size, chunk):
        ww = flat_w[s:s + chunk, None]
        xx = sgn * u / (2 * ww)
        rem = np.exp(alpha * np.log1p(xx))
        exact = np.zeros(ww.shape, dtype=complex)
        coef = 1.0 + 0j
        poch = 1.0 + 0j
        xk = np.ones_like(xx)
        for k in range(_LAPLACE_SUBTRACT):
            rem -= coef * xk
            exact += coef * (sgn / (2 * ww)) ** k * poch
            xk = xk * xx
            coef = coef * (alpha - k) / (k + 1)
            poch = poch * (nu + 0.5 + k)
        out[s:s + chunk] = exact[:, 0] + rg * (rem @ base)
    phase = np.exp(-1j * (nu * np.pi / 2 + np.pi / 4))
    if kind == 2:
        phase = 1 / phase
    return np.sqrt(2 / (np.pi * w)) * phase * out.reshape(w.shape)


def _scaled_hankel_asym(kind, nu, w):
    """Same quantity from the asymptotic series; returns (value, rel. error)."""
    w = _as_array(w)
    s, err = _hankel_terms(kind, complex(nu), w, _ASYM_TERMS, 1e-17)
    phase = np.exp(-1j * (complex(nu) * np.pi / 2 + np.pi / 4))
    if kind == 2:
        phase = 1 / phase
    return np.sqrt(2 / (np.pi * w)) * phase * s, err


def _scaled_hankel(kind, nu, w):
    w = _as_array(w)
    out = np.empty(w.shape, dtype=complex)
    far = np.abs(w) >= ASYMPTOTIC_RADIUS
    todo = ~far
    if np.any(far):
        v, err = _scaled_hankel_asym(kind, nu, w[far])
        ok = err <= _ASYM_TOL
        idx = np.flatnonzero(far)
        out.flat[idx[ok]] = v[ok]
        todo.flat[idx[~ok]] = True
    if np.any(todo):
        out[todo] = _scaled_hankel_laplace(kind, nu, w[todo])
    return out


def _hankel_form(mu, twice_d, w, odd):
    """bJ(w) from Hankel products, for Re w >= 0."""
    mu = complex(mu)
    d = twice_d / 2
    a, b = mu + d, mu - d
    wc = np.conj(w)
    t1 = _scaled_hankel(1, a, w) * _scaled_hankel(1, b, wc)
    t2 = _scaled_hankel(2, a, w) * _scaled_hankel(2, b, wc)
    e = np.exp(2j * w.real)
    p1 = np.exp(1j * np.pi * mu) * e * t1
    p2 = np.exp(-1j * np.pi * mu) * t2 / e
    return 0.5j * (p1 + p2) if odd else 0.5j * (p1 - p2)


# --------------------------------------------------------------------------
# public kernels


def kernel_J(pair: OrderPair, z):
    """J_{mu+d}(z) J_{mu-d}(conj z), well defined modulo pi in arg z."""
    if pair.odd:
        raise ParityError("J_{mu,d} is only defined up to sign for half-integer d")
    z_arr = _as_array(z)
    return _out(_bessel_product(pair.mu, pair.twice_d, z_arr), z)


def kernel_P(pair: OrderPair, z):
    """Leading power (z/2)^{mu+d} (conj z/2)^{mu-d} / Gamma-normalization."""
    z_arr = _as_array(z)
    return _out(_leading_power(pair.mu, pair.twice_d, z_arr), z)


def _series_kernel(kind, mu, twice_d, odd, w):
    """Series-regime value of bJ, R or M at a generic mu."""
    if kind == "R":
        plus = _leading_power(mu, twice_d, w)
        minus = _leading_power(-mu, -twice_d, w)
    else:
        sub = kind == "M"
        plus = _bessel_product(mu, twice_d, w, subtract_leading=sub)
        minus = _bessel_product(-mu, -twice_d, w, subtract_leading=sub)
    return _combine(mu, odd, plus, minus)


def _far_kernel(kind, mu, twice_d, odd, w):
    """Value away from the origin for a generic or singular mu (w rotated)."""
    if kind == "R":
        return _combine(mu, odd, _leading_power(mu, twice_d, w),
                        _leading_power(-mu, -twice_d, w))
    j = _hankel_form(mu, twice_d, w, odd)
    if kind == "J":
        return j
    r = _combine(mu, odd, _leading_power(mu, twice_d, w),
                 _leading_power(-mu, -twice_d, w))
    return j - r


def _check_removable(pair: OrderPair):
    """R has a genuine pole where its numerator does not vanish."""
    shift = 0.5 if pair.odd else 0.0
    mu0 = round((pair.mu - shift).real) + shift
    w = np.array([1.0 + 0j])
    plus = _leading_power(mu0, pair.twice_d, w)
    minus = _leading_power(-mu0, -pair.twice_d, w)
    num = plus + minus if pair.odd else minus - plus
    if abs(num[0]) > 1e-12 * (abs(plus[0]) + abs(minus[0])):
        raise PoleError(f"the leading-power kernel has a pole at mu = {mu0}")


def _evaluate(kind, pair: OrderPair, z, lim: LimitPolicy):
    z_arr = _as_array(z)
    if np.any(z_arr == 0):
        raise DomainError("kernels are evaluated on C minus the origin")
    w = FOUR_PI * z_arr
    odd = pair.odd
    sign = -1.0 if odd else 1.0
    flip = w.real < 0
    w = np.where(flip, -w, w)
    out = np.empty(w.shape, dtype=complex)
    near = np.abs(w) <= SERIES_RADIUS
    singular = pair.singular_distance() < lim.radius
    if singular and kind in ("R", "M"):
        _check_removable(pair)
    if np.any(~near):
        if singular and kind in ("R", "M"):
            # R itself has the removable singularity; resolve it jointly
            val, _ = richardson_limit(
                lambda m: _far_kernel(kind, m, pair.twice_d, odd, w[~near]), pair.mu, lim)
            out[~near] = val
        else:
            out[~near] = _far_kernel(kind, pair.mu, pair.twice_d, odd, w[~near])
    if np.any(near):
        wn = w[near]
        if singular:
            val, _ = richardson_limit(
                lambda m: _series_kernel(kind, m, pair.twice_d, odd, wn), pair.mu, lim)
        else:
            val = _series_kernel(kind, pair.mu, pair.twice_d, odd, wn)
        out[near] = val
    out = np.where(flip, sign * out, out)
    return _out(out, z)


def kernel_boldJ(pair: OrderPair, z, lim: LimitPolicy = DEFAULT_LIMIT):
    """The Bessel kernel bJ_{mu,d}(z) (argument scaled by 4 pi inside)."""
    return _evaluate("J", pair, z, lim)


def kernel_R(pair: OrderPair, z, lim: LimitPolicy = DEFAULT_LIMIT):
    """Leading-power pair (P_{-mu,-d}(4 pi z) - P_{mu,d}(4 pi z)) / sin(pi mu)."""
    return _evaluate("R", pair, z, lim)


def kernel_M(pair: OrderPair, z, lim: LimitPolicy = DEFAULT_LIMIT):
    """Regularized kernel bJ - R; near the origin the subtraction is done
    term by term inside the series so no digits cancel."""
    return _evaluate("M", pair, z, lim)


def kernel_values(kernel_id: str, pair: OrderPair, z, lim: LimitPolicy = DEFAULT_LIMIT):
    """Dispatch used by the integrators.

    ``kernel_id`` is one of "J", "R", "M" (bold kernels), "P" for
    P_{mu,d}(4 pi z), or "unit" for the constant 1.
    """
    if kernel_id in ("J", "R", "M"):
        return _evaluate(kernel_id, pair, z, lim)
    z_arr = _as_array(z)
    if kernel_id == "P":
        return _out(_leading_power(pair.mu, pair.twice_d, FOUR_PI * z_arr), z)
    if kernel_id == "unit":
        return _out(np.ones(z_arr.shape, dtype=complex), z)
    raise ValueError(f"unknown kernel {kernel_id!r}")


def _root_pair(z):
    z = _as_array(z)
    r = np.sqrt(z * z - 4)
    plus = np.abs(z + r)
    minus = np.abs(z - r)
    s = np.where(minus > plus * (1 + 1e-15), -r, r)
    return z + s


def y_factor(z):
    """|z + sqrt(z^2 - 4)| / 2 with the root of larger |z + root|."""
    v = np.abs(_root_pair(z)) / 2
    return float(v) if np.ndim(z) == 0 else v


def phase_factor(z):
    """(z + sqrt(z^2 - 4)) / |z + sqrt(z^2 - 4)|, same root as ``y_factor``."""
    s = _root_pair(z)
    v = s / np.abs(s)
    return _out(v, z)


__all__ = [
    "OrderPair", "PolarPoint", "LimitPolicy", "DEFAULT_LIMIT", "richardson_limit",
    "kernel_J", "kernel_boldJ", "kernel_P", "kernel_R", "kernel_M", "kernel_values",
    "y_factor", "phase_factor",
]
