"""Scalar special functions for complex order and argument.

Log-gamma and gamma, Bessel J (power series near the origin, Hankel
expansions far out), Hankel functions through their asymptotic expansions,
and the Gauss hypergeometric function with analytic continuation.

Branch convention: ``arg z`` lies in (-pi, pi] and ``z**a = exp(a log z)``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sp

from .errors import (
    AccuracyError,
    ConvergenceError,
    DegenerateError,
    DomainError,
    PoleError,
    SectorError,
)

# Hankel sectors are narrowed by this much on each side.
SECTOR_MARGIN = math.pi / 16


@dataclass(frozen=True)
class SeriesPolicy:
    """Truncation rules shared by the series and asymptotic evaluators.

    ``asymptotic_tol`` is the largest relative truncation error (first
    omitted term over the leading term) that ``hankel`` accepts before
    raising ``AccuracyError``.
    """

    max_terms: int = 600
    abs_tol: float = 1e-30
    rel_tol: float = 1e-17
    regime_switch_radius: float = 12.0
    hankel_terms: int = 18
    asymptotic_tol: float = 1e-8

    def __post_init__(self):
        if int(self.max_terms) != self.max_terms or self.max_terms < 16:
            raise ValueError("max_terms must be an integer >= 16")
        for name in ("abs_tol", "rel_tol", "asymptotic_tol"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ValueError(f"{name} must lie in (0, 1)")
        if not self.regime_switch_radius > 0:
            raise ValueError("regime_switch_radius must be positive")
        if int(self.hankel_terms) != self.hankel_terms or self.hankel_terms < 1:
            raise ValueError("hankel_terms must be a positive integer")


DEFAULT_POLICY = SeriesPolicy()


def _is_nonpositive_integer(z) -> bool:
    z = complex(z)
    return z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real)


def _near_integer(z, tol=1e-13) -> bool:
    z = complex(z)
    return abs(z.imag) <= tol and abs(z.real - round(z.real)) <= tol


def _scalar_or_array(out, *inputs):
    if all(np.ndim(v) == 0 for v in inputs):
        return complex(np.asarray(out).reshape(()))
    return out


def log_gamma(z):
    """Principal-branch log Gamma; ``exp(log_gamma(z)) == Gamma(z)``."""
    za = np.asarray(z, dtype=complex)
    bad = (za.imag == 0) & (za.real <= 0) & (za.real == np.floor(za.real))
    if np.any(bad):
        raise PoleError(f"log_gamma pole at {za[bad].ravel()[0]}")
    return _scalar_or_array(sp.loggamma(za), z)


def gamma(z):
    za = np.asarray(z, dtype=complex)
    bad = (za.imag == 0) & (za.real <= 0) & (za.real == np.floor(za.real))
    if np.any(bad):
        raise PoleError(f"gamma pole at {za[bad].ravel()[0]}")
    return _scalar_or_array(sp.gamma(za), z)


def rgamma(z):
    """Reciprocal gamma; entire, zero at the poles of Gamma."""
    za = np.asarray(z, dtype=complex)
    return _scalar_or_array(sp.rgamma(za), z)


# --------------------------------------------------------------------------
# Bessel J


def _power(z, nu):
    """(z)**nu on the principal branch, with 0**nu handled explicitly."""
    z = np.asarray(z, dtype=complex)
    nu = complex(nu)
    out = np.empty(z.shape, dtype=complex)
    zero = z == 0
    nz = ~zero
    out[nz] = np.exp(nu * np.log(z[nz]))
    if np.any(zero):
        if nu == 0:
            out[zero] = 1.0
        elif nu.real > 0:
            out[zero] = 0.0
        else:
            raise DomainError("z = 0 with Re(nu) <= 0, nu != 0")
    return out


def _j_reduced_series(nu, q, policy):
    """sum_n (-q/4)^n / (n! (nu+1)_n) in extended precision, q = z**2."""
    ql = -np.asarray(q, dtype=np.clongdouble) / 4
    nul = np.clongdouble(complex(nu))
    term = np.ones(ql.shape, dtype=np.clongdouble)
    total = term.copy()
    qmax = float(np.max(np.abs(ql))) if ql.size else 0.0
    n_peak = math.sqrt(qmax) + abs(complex(nu)) + 1
    for n in range(1, policy.max_terms + 1):
        term = term * ql / (n * (nul + n))
        total = total + term
        if n > n_peak and np.all(
            np.abs(term) <= policy.rel_tol * np.abs(total) + policy.abs_tol
        ):
            return total.astype(complex)
    raise ConvergenceError("Bessel series did not converge within max_terms")


def _j_series(nu, z, policy):
    nu = complex(nu)
    z = np.asarray(z, dtype=complex)
    if _near_integer(nu, 0) and nu.real < 0:
        k = int(round(-nu.real))
        return (-1) ** k * _j_series(k, z, policy)
    pref = _power(z / 2, nu) * complex(sp.rgamma(nu + 1))
    return pref * _j_reduced_series(nu, z * z, policy)


def _hankel_terms(kind, nu, z, nterms, rel_tol):
    """Partial sum of the Hankel series and the first omitted term.

    Returns (S, err) with H = sqrt(2/(pi z)) exp(+-i(z - nu pi/2 - pi/4)) S.
    Stops early once terms fall below rel_tol or start to grow.
    """
    z = np.asarray(z, dtype=complex)
    mu4 = 4 * complex(nu) ** 2
    sign = -1.0 if kind == 1 else 1.0
    x = 1.0 / (2j * z)
    s = np.ones(z.shape, dtype=complex)
    term = np.ones(z.shape, dtype=complex)
    prev = np.ones(z.shape)
    err = np.zeros(z.shape)
    active = np.ones(z.shape, dtype=bool)
    for n in range(1, nterms + 1):
        term = term * (mu4 - (2 * n - 1) ** 2) / (4 * n) * sign * x
        mag = np.abs(term)
        growing = active & (mag > prev)
        last = n == nterms
        stop = growing | (active & last)
        err = np.where(stop, mag, err)
        active = active & ~stop
        if not np.any(active):
            break
        s = np.where(active, s + term, s)
        small = active & (mag <= rel_tol * np.abs(s))
        err = np.where(small, mag, err)
        active = active & ~small
        prev = mag
        if not np.any(active):
            break
    return s, err


def _hankel_value(kind, nu, z, arg, nterms, rel_tol):
    z = np.asarray(z, dtype=complex)
    arg = np.angle(z) if arg is None else np.asarray(arg, dtype=float)
    s, err = _hankel_terms(kind, nu, z, nterms, rel_tol)
    root = np.sqrt(2 / (np.pi * np.abs(z))) * np.exp(-0.5j * arg)
    phase = z - nu * np.pi / 2 - np.pi / 4
    pref = root * (np.exp(1j * phase) if kind == 1 else np.exp(-1j * phase))
    return pref * s, err


def hankel(kind, nu, z, policy: SeriesPolicy | None = None, arg=None,
           return_error=False):
    """Hankel function H^(kind)_nu(z) from its truncated asymptotic series.

    ``arg`` optionally fixes the branch of arg z (it may leave (-pi, pi]),
    which is how values on neighbouring sheets are requested.
    """
    policy = policy or DEFAULT_POLICY
    if kind not in (1, 2):
        raise ValueError("kind must be 1 or 2")
    z_arr = np.asarray(z, dtype=complex)
    if np.any(z_arr == 0):
        raise DomainError("Hankel functions are singular at z = 0")
    a = np.angle(z_arr) if arg is None else np.asarray(arg, dtype=float)
    if arg is not None and np.any(
        np.abs(np.exp(1j * a) - z_arr / np.abs(z_arr)) > 1e-9
    ):
        raise DomainError("arg does not match z")
    lo, hi = (-np.pi, 2 * np.pi) if kind == 1 else (-2 * np.pi, np.pi)
    if np.any((a <= lo + SECTOR_MARGIN) | (a >= hi - SECTOR_MARGIN)):
        raise SectorError(f"arg z outside the sector for kind {kind}")
    val, err = _hankel_value(kind, complex(nu), z_arr, a, policy.hankel_terms,
                             policy.rel_tol)
    if np.any(err > policy.asymptotic_tol):
        raise AccuracyError(
            f"Hankel truncation error {float(np.max(err)):.2e} exceeds tolerance"
        )
    val = _scalar_or_array(val, z)
    if return_error:
        return val, (float(err) if np.ndim(z) == 0 else err)
    return val


def _j_hankel(nu, z, policy):
    """J via (H1 + H2)/2, evaluated in the right half plane."""
    nu = complex(nu)
    z = np.asarray(z, dtype=complex)
    flip = z.real < 0
    zr = np.where(flip, -z, z)
    # J_nu(z) = exp(+-i pi nu) J_nu(-z) depending on the half plane of z
    fac = np.where(
        flip, np.where(z.imag >= 0, np.exp(1j * np.pi * nu), np.exp(-1j * np.pi * nu)), 1
    )
    h1, e1 = _hankel_value(1, nu, zr, None, policy.hankel_terms, policy.rel_tol)
    h2, e2 = _hankel_value(2, nu, zr, None, policy.hankel_terms, policy.rel_tol)
    env = np.abs(h1) + np.abs(h2)
    err = (np.abs(h1) * e1 + np.abs(h2) * e2) / env
    if np.any(err > policy.asymptotic_tol):
        raise ConvergenceError("neither Bessel regime meets tolerance")
    return fac * (h1 + h2) / 2


def bessel_j(nu, z, policy: SeriesPolicy | None = None, method="auto"):
    """Bessel function of the first kind, principal branch.

    ``method`` is "auto", "series" or "hankel"; auto uses the series for
    ``|z| <= policy.regime_switch_radius``.
    """
    policy = policy or DEFAULT_POLICY
    nu = complex(nu)
    z_arr = np.asarray(z, dtype=complex)
    if method == "series":
        out = _j_series(nu, z_arr, policy)
    elif method == "hankel":
        if np.any(z_arr == 0):
            raise DomainError("Hankel assembly needs z != 0")
        out = _j_hankel(nu, z_arr, policy)
    elif method == "auto":
        out = np.empty(z_arr.shape, dtype=complex)
        near = np.abs(z_arr) <= policy.regime_switch_radius
        if np.any(near):
            out[near] = _j_series(nu, z_arr[near], policy)
        if np.any(~near):
            out[~near] = _j_hankel(nu, z_arr[~near], policy)
    else:
        raise ValueError(f"unknown method {method!r}")
    return _scalar_or_array(out, z)


def bessel_k(nu, x, nodes=None):
    """Modified Bessel K_nu(x) for real x > 0 and complex nu.

    Trapezoid rule on K = int_0^inf exp(-x cosh t) cosh(nu t) dt, which
    converges geometrically since the integrand is entire and decays
    double-exponentially.
    """
    nu = complex(nu)
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("bessel_k needs x > 0")
    xmin = float(np.min(x))
    # integrand below 1e-300 once x cosh t - |Re nu| t > 700
    tmax = 1.0
    while xmin * math.cosh(tmax) - abs(nu.real) * tmax < 700:
        tmax += 0.5
    h = 0.05 if nodes is None else tmax / nodes
    t = np.arange(0.0, tmax + h / 2, h)
    w = np.full(t.shape, h)
    w[0] = h / 2
    e = np.exp(-np.multiply.outer(x, np.cosh(t)))
    out = e @ (w * np.cosh(nu * t))
    return _scalar_or_array(out, x)


# --------------------------------------------------------------------------
# Gauss hypergeometric function

_SERIES_RADIUS = 0.8
_TRANSFORM_RADIUS = 1.25
_SERIES_START = 0.7
_TRANSFORM_START = 1.4


def _gauss_series(a, b, c, z, policy):
    """Direct series; returns (value, absolute error estimate)."""
    term = 1.0 + 0j
    s = 1.0 + 0j
    absum = 1.0
    az = abs(z)
    for n in range(policy.max_terms):
        ratio = (a + n) * (b + n) / ((c + n) * (n + 1))
        term *= ratio * z
        s += term
        absum += abs(term)
        if term == 0:
            return s, 2.2e-16 * absum
        nxt = abs((a + n + 1) * (b + n + 1) / ((c + n + 1) * (n + 2))) * az
        if nxt < 1 and abs(term) <= policy.rel_tol * abs(s) + policy.abs_tol:
            return s, abs(term) * nxt / (1 - nxt) + 2.2e-16 * absum
    raise ConvergenceError("Gauss series did not converge within max_terms")


def _hyp2f1_inverse(a, b, c, z, policy):
    """Continuation through the 1/z connection formula."""
    if _near_integer(a - b, 0):
        raise DegenerateError("a - b is an integer; 1/z formula is logarithmic")
    w = 1 / z
    lmz = cmath.log(-z)
    g_c = complex(sp.gamma(c))
    f1, e1 = _gauss_series(a, a - c + 1, a - b + 1, w, policy)
    f2, e2 = _gauss_series(b, b - c + 1, b - a + 1, w, policy)
    k1 = g_c * complex(sp.gamma(b - a)) * complex(sp.rgamma(b)) * complex(sp.rgamma(c - a))
    k2 = g_c * complex(sp.gamma(a - b)) * complex(sp.rgamma(a)) * complex(sp.rgamma(c - b))
    p1 = cmath.exp(-a * lmz)
    p2 = cmath.exp(-b * lmz)
    t1 = k1 * p1 * f1
    t2 = k2 * p2 * f2
    err = abs(k1 * p1) * e1 + abs(k2 * p2) * e2 + 4.4e-16 * (abs(t1) + abs(t2))
    return t1 + t2, err


def _ode_walk(a, b, c, z0, f, df, z1, policy):
    """Carry (F, F') from z0 to z1 along a segment with Taylor steps.

    Each step stays within half the distance to the singular points 0 and 1.
    Returns (F(z1), F'(z1), accumulated absolute error estimate).
    """
    p = complex(z0)
    s1 = a + b + 1
    ab = a * b
    err = 0.0
    for _ in range(10000):
        rem = z1 - p
        if abs(rem) == 0:
            return f, df, err
        r = min(abs(p), abs(1 - p))
        h = rem if abs(rem) <= 0.5 * r else rem / abs(rem) * 0.5 * r
        denom = p * (1 - p)
        lin = c - s1 * p
        slope = 1 - 2 * p
        cn, cn1 = f, df
        hn = 1.0 + 0j
        fv = cn
        dv = cn1
        small = 0
        for n in range(policy.max_terms):
            cn2 = -((slope * n + lin) * (n + 1) * cn1
                    - (n * (n - 1) + s1 * n + ab) * cn) / (denom * (n + 2) * (n + 1))
            hn = hn * h
            t = cn1 * hn
            fv += t
            if n + 2 <= policy.max_terms:
                dv += (n + 2) * cn2 * hn
            mag = abs(t)
            if mag <= 1e-17 * abs(fv) + policy.abs_tol:
                small += 1
                if small >= 3:
                    err += mag + 2.2e-16 * abs(fv)
                    break
            else:
                small = 0
            cn, cn1 = cn1, cn2
        else:
            raise ConvergenceError("Taylor continuation did not converge")
        f, df = fv, dv
        p = p + h
        if abs(z1 - p) < 1e-15 * abs(z1):
            p = z1
    raise ConvergenceError("Taylor continuation took too many steps")


def _walk_from(a, b, c, start, z, evaluate, policy):
    f0, e0 = evaluate(a, b, c, start, policy)
    g0, _ = evaluate(a + 1, b + 1, c + 1, start, policy)
    df0 = a * b / c * g0
    f, _, e = _ode_walk(a, b, c, start, f0, df0, z, policy)
    # relative error of the start value carries through the linear walk
    err = e + abs(f) * e0 / max(abs(f0), 1e-300)
    return f, err


def _on_cut(z) -> bool:
    return z.imag == 0 and z.real > 1


def hyp2f1_with_error(a, b, c, z, policy: SeriesPolicy | None = None,
                      method="auto"):
    """Return (value, absolute error estimate) for 2F1(a, b; c; z).

    ``method``: "auto", "series" (Gauss series, continued outward by Taylor
    steps when |z| > 0.8) or "transform" (1/z formula, continued inward when
    |z| < 1.25).
    """
    policy = policy or DEFAULT_POLICY
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    if _is_nonpositive_integer(c):
        raise PoleError("c is a non-positive integer")
    if z == 0:
        return 1.0 + 0j, 0.0
    if _is_nonpositive_integer(a) or _is_nonpositive_integer(b):
        return _gauss_series(a, b, c, z, policy)
    if z == 1:
        s = c - a - b
        if s.real <= 0:
            raise ConvergenceError("2F1 diverges at z = 1 unless Re(c-a-b) > 0")
        val = complex(sp.gamma(c) * sp.gamma(s) * sp.rgamma(c - a) * sp.rgamma(c - b))
        return val, 4.4e-16 * abs(val)
    if _on_cut(z):
        raise DomainError("z lies on the branch cut [1, inf)")
    az = abs(z)
    unit = z / az

    def via_series():
        if az <= _SERIES_RADIUS:
            return _gauss_series(a, b, c, z, policy)
        return _walk_from(a, b, c, _SERIES_START * unit, z, _gauss_series, policy)

    def via_transform():
        if az >= _TRANSFORM_RADIUS:
            return _hyp2f1_inverse(a, b, c, z, policy)
        # the inward ray passes within |sin arg z| of the singular point 1
        if z.real > 0 and abs(unit.imag) < 0.05:
            raise DomainError("inward continuation would pass too close to z = 1")
        return _walk_from(a, b, c, _TRANSFORM_START * unit, z, _hyp2f1_inverse, policy)

    if method == "series":
        return via_series()
    if method == "transform":
        return via_transform()
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    if az <= _SERIES_RADIUS:
        return via_series()
    if az >= _TRANSFORM_RADIUS:
        return via_transform()
    best = via_series()
    try:
        other = via_transform()
    except (DegenerateError, DomainError, ConvergenceError):
        return best
    return other if other[1] < best[1] else best


def hyp2f1(a, b, c, z, policy: SeriesPolicy | None = None, method="auto"):
    """Gauss hypergeometric function on its principal branch."""
    return hyp2f1_with_error(a, b, c, z, policy, method)[0]
