"""Oscillatory double integrals over the plane in polar coordinates.

The integrals have the form

    I = int_0^{2 pi} int_0^inf K(x e^{i phi}) e^{-4 pi i x y cos(phi + theta)}
            x^{2 rho - 1} e^{i m phi} dx dphi.

Strategy: sample K on circles and take an FFT in phi, so that each angular
mode n closes against the plane wave into 2 pi (-i)^|l| e^{-i l theta}
J_|l|(4 pi x y) with l = n + m. The radial integrals then split into

* an analytic piece on [0, x_min] from the kernel's power series;
* Gauss-Legendre panels on [x_min, X], geometric near 0 and at the
  oscillation scale beyond;
* an analytic tail on [X, inf): the kernel's Hankel asymptotic series turns
  every term into a single Bessel function of a combined frequency, and
  int_X^inf J_j(k x) x^p dx is known in closed form.

``brute_2d_oracle`` does none of this and serves as an independent check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sp

from .closed_forms import AppendixMode, TargetPoint, strip_lower
from .errors import AccuracyError, AliasingError, ConfigError, RangeError, TailDivergence
from .kernels import DEFAULT_LIMIT, LimitPolicy, OrderPair, kernel_values, richardson_limit
from .special import gamma, rgamma

FOUR_PI = 4 * math.pi
HEAD_RADIUS = 1.75
KERNELS = ("J", "R", "M", "P", "unit")
TAIL_METHODS = ("ibp", "asymptotic_subtraction", "absolute")
_GL_ORDER = 10
_GL_T, _GL_W = np.polynomial.legendre.leggauss(_GL_ORDER)
_LEG_INV = np.linalg.inv(np.polynomial.legendre.legvander(_GL_T, _GL_ORDER - 1))
_LAGUERRE = sp.roots_laguerre(40)
_CONTOUR_START = 12.0
_SERIES_ORDER = 4


@dataclass(frozen=True)
class QuadConfig:
    """Knobs of the angular-first integrator.

    ``radial_truncation`` is the radius X where numerical panels stop and the
    analytic tail takes over; None picks ``HEAD_RADIUS`` for the kernels and
    ``max(8, 16 / y)`` for a bare radial integral. ``tail`` is "auto",
    "asymptotic_subtraction" or "ibp" (power-law tails only).
    """

    angular_modes: int = 64
    radial_truncation: float | None = None
    cells_per_period: int = 8
    ibp_order: int = 3
    accel_terms: int = 8
    abs_tol: float = 1e-9
    rel_tol: float = 1e-5
    tail: str = "auto"
    max_modes: int = 2048

    def __post_init__(self):
        n = self.angular_modes
        if int(n) != n or n < 8 or n & (n - 1):
            raise ConfigError("angular_modes must be a power of two >= 8")
        if self.radial_truncation is not None and not self.radial_truncation > 0:
            raise ConfigError("radial_truncation must be positive")
        if int(self.cells_per_period) != self.cells_per_period or self.cells_per_period < 4:
            raise ConfigError("cells_per_period must be an integer >= 4")
        if int(self.ibp_order) != self.ibp_order or self.ibp_order < 1:
            raise ConfigError("ibp_order must be an integer >= 1")
        if int(self.accel_terms) != self.accel_terms or self.accel_terms < 6:
            raise ConfigError("accel_terms must be an integer >= 6")
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ConfigError("tolerances must be positive")
        if self.tail not in ("auto", "asymptotic_subtraction", "ibp"):
            raise ConfigError(f"unknown tail method {self.tail!r}")
        if self.max_modes < n:
            raise ConfigError("max_modes must be >= angular_modes")


DEFAULT_QUAD = QuadConfig()


@dataclass(frozen=True)
class IntegralResult:
    value: complex
    err_estimate: float
    cells_used: int
    tail_method: str

    def __post_init__(self):
        if not self.err_estimate >= 0:
            raise ValueError("err_estimate must be >= 0")
        if self.tail_method not in TAIL_METHODS:
            raise ValueError(f"unknown tail method {self.tail_method!r}")


@dataclass(frozen=True)
class PowerLaw:
    """Radius function coef * x**exponent; its tail is handled exactly."""

    coef: complex
    exponent: complex

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return complex(self.coef) * np.exp(complex(self.exponent) * np.log(x))


# --------------------------------------------------------------------------
# small numerical helpers


def _wynn(partial):
    """Wynn epsilon extrapolation of a sequence; returns (limit, error)."""
    s = [complex(v) for v in partial]
    if len(s) < 3:
        return s[-1], abs(s[-1] - s[-2]) if len(s) > 1 else float("inf")
    scale = max(abs(v) for v in s) + 1e-300
    prev = [0j] * (len(s) + 1)
    cur = list(s)
    estimates = [s[-1]]
    k = 0
    while len(cur) > 1:
        k += 1
        diffs = [cur[i + 1] - cur[i] for i in range(len(cur) - 1)]
        if min(abs(d) for d in diffs) < 1e-15 * scale:
            break
        nxt = [prev[i + 1] + 1 / diffs[i] for i in range(len(diffs))]
        prev, cur = cur, nxt
        if k % 2 == 0:
            estimates.append(cur[-1])
    best = estimates[-1]
    err = abs(best - estimates[-2]) if len(estimates) > 1 else abs(s[-1] - s[-2])
    return best, err


def _panel_edges(x_min, x_head, width):
    first = min(width, x_head)
    edges = [x_min]
    while edges[-1] * 2 < first:
        edges.append(edges[-1] * 2)
    edges.append(first)
    if x_head > first:
        n = max(1, math.ceil((x_head - first) / width))
        edges.extend(np.linspace(first, x_head, n + 1)[1:])
    return np.asarray(edges)


def _gl_panels(edges):
    a, b = edges[:-1, None], edges[1:, None]
    half = (b - a) / 2
    return a + half * (_GL_T + 1), half * _GL_W, half[:, 0]


def _panel_sum(vals, weights, half):
    """Panel-wise Gauss-Legendre sum with a Legendre-decay error estimate."""
    total = np.sum(vals * weights)
    coef = np.abs(vals @ _LEG_INV.T)
    hi = coef[:, -1] + coef[:, -2]
    mid = coef[:, 3] + coef[:, 4] + 1e-300
    g = np.minimum(hi / mid, 1.0)
    err = np.sum(2 * half * hi * g**2.4)
    return complex(total), float(err)


# --------------------------------------------------------------------------
# radial tails  int_X^inf J_j(k x) x^p dx


def _wss_full(j, p):
    """int_0^inf J_j(t) t^p dt (analytic in p)."""
    return 2**p * gamma((j + p + 1) / 2) * rgamma((j - p + 1) / 2)


def _head_series(j, p, a):
    """int_0^a J_j(t) t^p dt by the power series; None near a term pole."""
    total = 0j
    k = 0
    term_scale = 1.0
    while True:
        e = j + 2 * k + p + 1
        if abs(e) < 1e-8:
            return None
        c = (-1) ** k * math.exp(-math.lgamma(k + 1) - math.lgamma(j + k + 1)) / 2 ** (j + 2 * k)
        t = c * np.exp(e * math.log(a)) / e
        total += t
        term_scale = max(term_scale, abs(t))
        if k > 4 and abs(t) < 1e-17 * max(abs(total), 1e-300) and k > a:
            return total
        k += 1
        if k > 400:
            return total


def _contour_tail(j, p, a):
    """int_a^inf J_j(t) t^p dt along vertical rays from a (a >= ~10)."""
    s, w = _LAGUERRE
    up = a + 1j * s
    dn = a - 1j * s
    f1 = np.sum(w * sp.hankel1e(j, up) * np.exp(p * np.log(up)))
    f2 = np.sum(w * sp.hankel2e(j, dn) * np.exp(p * np.log(dn)))
    return 0.5 * (1j * np.exp(1j * a) * f1 - 1j * np.exp(-1j * a) * f2)


def bessel_power_tail(j: int, kappa: float, p, x0: float) -> complex:
    """int_{x0}^inf J_j(kappa x) x^p dx, continued analytically in p.

    Needs Re p < 1/2 (kappa > 0) or Re p < -1 (kappa = 0).
    """
    j = abs(int(j))
    p = complex(p)
    if kappa == 0:
        if p.real >= -1:
            raise TailDivergence("non-oscillatory tail with Re p >= -1")
        return -(x0 ** (p + 1)) / (p + 1) if j == 0 else 0j
    if p.real >= 0.5:
        raise TailDivergence("tail diverges for Re p >= 1/2")
    a = kappa * x0
    scale = kappa ** (-p - 1)
    if a >= _CONTOUR_START:
        return complex(scale * _contour_tail(j, p, a))
    head = _head_series(j, p, a)
    if head is not None:
        return complex(scale * (_wss_full(j, p) - head))
    # numeric bridge from a to the contour start
    edges = np.linspace(a, _CONTOUR_START, 25)
    xs, ws, _ = _gl_panels(edges)
    bridge = np.sum(ws * sp.jv(j, xs) * np.exp(p * np.log(xs)))
    return complex(scale * (bridge + _contour_tail(j, p, _CONTOUR_START)))


def _bessel_power_tail_ibp(j, kappa, p, x0, order, accel):
    """Same integral by ``order`` integrations by parts against the Bessel
    operator, the remainder summed over half-periods with Wynn acceleration.

    With g = x^q, int g J x dx = -k^-2 [ (q^2 - j^2) int x^{q-2} J x dx
                                          - X (g J' - J g')(X) ].
    """
    j = abs(int(j))
    q = complex(p) - 1
    coef = 1 + 0j
    boundary = 0j
    a = kappa * x0
    jv0 = sp.jv(j, a)
    jp0 = sp.jvp(j, a)
    for _ in range(order):
        b = x0**q * (a * jp0 - q * jv0)
        boundary += coef * b / kappa**2
        coef *= -(q * q - j * j) / kappa**2
        q -= 2
    # remainder int_X^inf x^{q+1} J_j(k x) dx
    half = math.pi / kappa
    n_cells = 4 * accel
    edges = x0 + half * np.arange(n_cells + 1)
    xs, ws, _ = _gl_panels(edges)
    cells = np.sum(ws * sp.jv(j, kappa * xs) * np.exp((q + 1) * np.log(xs)), axis=1)
    partial = np.cumsum(cells)
    rem, err = _wynn(partial[-2 * accel:])
    return complex(boundary + coef * rem), float(abs(coef) * err)


# --------------------------------------------------------------------------
# kernel expansions


def _series_monomials(mu, twice_d, order, skip_leading):
    d = twice_d / 2
    out = []
    for j in range(order):
        for k in range(order):
            if skip_leading and j == k == 0:
                continue
            s = 2 * mu + 2 * j + 2 * k
            c = (-1) ** (j + k) * rgamma(mu + d + j + 1) * rgamma(mu - d + k + 1)
            c /= math.factorial(j) * math.factorial(k)
            out.append((c * (2 * math.pi) ** s, s, twice_d + 2 * j - 2 * k))
    return out


def _kernel_monomials(kind, mu, twice_d, order=_SERIES_ORDER):
    """K(x e^{i phi}) ~ sum c x^s e^{i n phi}; exact for R, P and unit."""
    mu = complex(mu)
    if kind == "unit":
        return [(1 + 0j, 0j, 0)]
    if kind == "P":
        return _series_monomials(mu, twice_d, 1, False)
    n_terms = 1 if kind == "R" else order
    skip = kind == "M"
    plus = _series_monomials(mu, twice_d, n_terms, skip)
    minus = _series_monomials(-mu, -twice_d, n_terms, skip)
    if twice_d % 2:
        f = 1j / np.cos(np.pi * mu)
        return [(f * c, s, n) for c, s, n in plus + minus]
    f = 1 / np.sin(np.pi * mu)
    return [(-f * c, s, n) for c, s, n in plus] + [(f * c, s, n) for c, s, n in minus]


def _angular_factor(l, theta):
    return 2 * math.pi * (-1j) ** abs(l) * np.exp(-1j * l * theta)


def _origin_piece(terms, rho, m0, y, theta, x_min):
    """int over [0, x_min] of the monomials against the plane wave."""
    total = 0j
    for c, s, n in terms:
        l = n + m0
        la = abs(l)
        acc = 0j
        for r in range(8):
            e = s + 2 * rho + la + 2 * r
            if e.real <= 0:
                raise RangeError("integrand not integrable at the origin")
            acc += (-1) ** r * (2 * math.pi * y) ** (la + 2 * r) / (
                math.factorial(r) * math.factorial(la + r)) * np.exp(e * math.log(x_min)) / e
        total += c * acc * _angular_factor(l, theta)
    return total


def _monomial_tail(terms, rho, m0, y, theta, x_head, method, cfg):
    total, err = 0j, 0.0
    for c, s, n in terms:
        l = n + m0
        p = s + 2 * rho - 1
        if method == "ibp":
            v, e = _bessel_power_tail_ibp(l, FOUR_PI * y, p, x_head, cfg.ibp_order, cfg.accel_terms)
        else:
            v, e = bessel_power_tail(l, FOUR_PI * y, p, x_head), 0.0
        f = c * _angular_factor(l, theta)
        total += f * v
        err += abs(f) * e
    return total, err


def _hankel_coeffs(nu, n):
    out = np.empty(n, dtype=complex)
    c = 1 + 0j
    for k in range(n):
        out[k] = c
        c *= (4 * nu * nu - (2 * k + 1) ** 2) / (4 * (k + 1))
    return out


def _asymptotic_tail(mu, twice_d, rho, m0, y, theta, x_head, max_order=60):
    """Tail of the bold kernel from its Hankel asymptotic series.

    bJ(w) ~ (1 / (pi |w|)) [ e^{2i Re w} S1_a(w) S1_b(conj w)
                              +- e^{-2i Re w} S2_a(w) S2_b(conj w) ]
    with S1_nu(w) = sum (nu,k) / (-2iw)^k and S2_nu(w) = sum (nu,k) / (2iw)^k.
    """
    mu = complex(mu)
    d = twice_d / 2
    ca = _hankel_coeffs(mu + d, max_order + 1)
    cb = _hankel_coeffs(mu - d, max_order + 1)
    w0 = FOUR_PI * x_head
    k = np.arange(max_order + 1)
    size = np.abs(ca)[:, None] * np.abs(cb)[None, :] / (2 * w0) ** (k[:, None] + k[None, :])
    # truncate at the smallest anti-diagonal (the series is asymptotic)
    diags = [max(size[i, n - i] for i in range(n + 1)) for n in range(max_order + 1)]
    small = [n for n in range(1, max_order + 1) if diags[n] < 1e-16]
    order = small[0] if small else int(np.argmin(diags[1:])) + 1
    trunc = diags[order]
    if trunc > 1e-9:
        raise AccuracyError("kernel asymptotic series not small enough at the head radius")
    order -= 1
    total = 0j
    err = 0.0
    odd = twice_d % 2 == 1
    for sigma in (1, -1):
        c = sigma * 2 * FOUR_PI - FOUR_PI * y * np.exp(1j * theta)
        kappa = abs(c)
        if kappa < 1e-12:
            kappa, psi = 0.0, 0.0
        else:
            psi = np.angle(c)
        s_sigma = 1.0 if sigma == 1 else (-1.0 if odd else 1.0)
        inv = (1 / (2j)) if sigma == 1 else (1 / (2j))
        for p in range(order + 1):
            for q in range(order + 1 - p):
                sgn = (-1) ** (p + q) if sigma == 1 else 1
                coef = sgn * ca[p] * cb[q] * inv ** (p + q) / FOUR_PI ** (p + q) / (4 * math.pi**2)
                l = m0 - p + q
                ang = 2 * math.pi * 1j ** abs(l) * np.exp(-1j * l * psi)
                t = bessel_power_tail(l, kappa, 2 * rho - 2 - p - q, x_head)
                total += s_sigma * coef * ang * t
    return total, float(trunc * (1 + abs(total)) + 1e-16 * abs(total))


# --------------------------------------------------------------------------
# angular decomposition


def _needed_modes(kernel_id, pair, m0, x_head, cfg):
    base = 2 * (abs(m0) + abs(pair.twice_d)) + 8
    if kernel_id in ("J", "M"):
        base = max(base, 2 * (2 * FOUR_PI * x_head + 24))
    n = cfg.angular_modes
    while n < base:
        n *= 2
    return n


def _circle_coeffs(kernel_id, pair, xs, n_modes, lim):
    phi = 2 * np.pi * np.arange(n_modes) / n_modes
    z = np.asarray(xs, dtype=float)[..., None] * np.exp(1j * phi)
    vals = kernel_values(kernel_id, pair, z, lim)
    return np.fft.fft(vals, axis=-1) / n_modes


def _alias_ratio(coeffs):
    n = coeffs.shape[-1]
    mags = np.abs(coeffs).reshape(-1, n)
    top = np.concatenate([mags[:, n // 2 - 2:n // 2 + 2]], axis=1).max()
    return float(top / max(mags.max(), 1e-300))


def angular_coeffs(kernel_id: str, pair: OrderPair, x: float, modes: int,
                   rel_tol: float = 1e-10, lim: LimitPolicy = DEFAULT_LIMIT):
    """Fourier coefficients c_n(x) of phi -> K(x e^{i phi}).

    Returns an array of length ``modes`` in FFT order (index n holds mode n
    for n < modes/2 and mode n - modes above). Raises AliasingError when the
    modes around +-modes/2 are not below rel_tol times the largest one.
    """
    if kernel_id not in KERNELS:
        raise ValueError(f"unknown kernel {kernel_id!r}")
    if not x > 0:
        raise ValueError("x must be positive")
    if int(modes) != modes or modes < 8:
        raise ValueError("modes must be an integer >= 8")
    c = _circle_coeffs(kernel_id, pair, np.array([x]), int(modes), lim)[0]
    if _alias_ratio(c[None, :]) > rel_tol:
        raise AliasingError(f"{modes} modes do not resolve the kernel at x = {x}")
    return c


# --------------------------------------------------------------------------
# strips


def _check_strip(kernel_id, rho, pair, m0, y):
    r = complex(rho).real
    a = abs(pair.mu.real)
    if kernel_id == "J":
        lo, hi = strip_lower(pair.mu, pair.twice_d, m0), (1.0 if y > 2 else 0.5)
    elif kernel_id == "R":
        lo, hi = a, 0.5 - a
    elif kernel_id == "M":
        lo, hi = a - 1, 0.5 - a
    else:
        shift = pair.mu.real if kernel_id == "P" else 0.0
        big_l = (pair.twice_d if kernel_id == "P" else 0) + m0
        lo, hi = -abs(big_l) / 2 - shift, 0.75 - shift
    if not lo < r < hi:
        raise RangeError(f"Re rho = {r:g} outside the convergence strip ({lo:g}, {hi:g})")


# --------------------------------------------------------------------------
# the double integral


def _resolve_tail(kernel_id, cfg):
    if cfg.tail == "ibp":
        if kernel_id in ("J", "M"):
            raise ConfigError("ibp tails are only available for power-law kernels")
        return "ibp"
    return "asymptotic_subtraction"


def _analytic_part(kernel_id, rho, pair, m0, y, thetas, x_min, x_head, tail, cfg, lim):
    """Origin piece plus tail for every theta; handles singular mu by Richardson."""
    td = pair.twice_d

    def at(mu):
        out = []
        errs = []
        terms = _kernel_monomials(kernel_id, mu, td)
        tail_terms = terms if kernel_id in ("R", "P", "unit") else (
            [(-c, s, n) for c, s, n in _kernel_monomials("R", mu, td)] if kernel_id == "M" else [])
        for th in thetas:
            v = _origin_piece(terms, rho, m0, y, th, x_min)
            e = 0.0
            if tail_terms:
                tv, te = _monomial_tail(tail_terms, rho, m0, y, th, x_head, tail, cfg)
                v += tv
                e += te
            if kernel_id in ("J", "M"):
                av, ae = _asymptotic_tail(mu, td, rho, m0, y, th, x_head)
                v += av
                e += ae
            out.append(v)
            errs.append(e)
        return np.array(out), np.array(errs)

    singular = kernel_id in ("J", "R", "M") and pair.singular_distance() < lim.radius
    if not singular:
        return at(pair.mu)
    shift = 0.5 if pair.odd else 0.0
    centre = complex(round((pair.mu - shift).real) + shift)
    val, rerr = richardson_limit(lambda m: at(m)[0], centre, lim)
    return np.asarray(val), np.asarray(rerr)


def _plane_wave_integrals(kernel_id, rho, components, m0, y, thetas, cfg, lim):
    """Integrals of sum_j w_j K_{pair_j} for each theta.

    ``components`` is a list of (weight, OrderPair) sharing twice_d.
    """
    rho = complex(rho)
    x_head = cfg.radial_truncation or HEAD_RADIUS
    if kernel_id in ("J", "M") and FOUR_PI * x_head < 16:
        raise ConfigError("radial_truncation too small for the kernel asymptotic tail")
    tail = _resolve_tail(kernel_id, cfg)
    x_min = 1e-3 / max(1.0, y)
    freq = 2 * y + (4 if kernel_id in ("J", "M") else 0)
    width = min(4 / (freq * cfg.cells_per_period), 0.25)
    edges = _panel_edges(x_min, x_head, width)
    xs, ws, half = _gl_panels(edges)

    n_modes = max(_needed_modes(kernel_id, p, m0, x_head, cfg) for _, p in components)
    while True:
        coeffs = sum(w * _circle_coeffs(kernel_id, p, xs, n_modes, lim) for w, p in components)
        alias = _alias_ratio(coeffs)
        if alias <= 1e-2 * cfg.rel_tol or kernel_id in ("P", "unit", "R"):
            break
        if n_modes * 2 > cfg.max_modes:
            raise AliasingError(f"{n_modes} angular modes leave a relative alias of {alias:.1e}")
        n_modes *= 2
    n = np.fft.fftfreq(n_modes, 1 / n_modes).astype(int)
    ls = n + m0
    bes = sp.jv(np.abs(ls)[None, None, :], FOUR_PI * y * xs[..., None])
    radial = coeffs * bes * np.exp((2 * rho - 1) * np.log(xs))[..., None]

    ana = np.zeros(len(thetas), dtype=complex)
    ana_err = np.zeros(len(thetas))
    for w, p in components:
        a, e = _analytic_part(kernel_id, rho, p, m0, y, thetas, x_min, x_head, tail, cfg, lim)
        ana += w * a
        ana_err += abs(w) * e
    values, errors = [], []
    for th, a, ae in zip(thetas, ana, ana_err):
        f = radial @ _angular_factor(ls, th)
        head, head_err = _panel_sum(f, ws, half)
        v = head + complex(a)
        values.append(v)
        errors.append(head_err + float(ae) + (alias + 1e-13) * abs(v))
    return values, errors, len(half), tail


def lhs_double_integral(kernel_id: str, rho, pair: OrderPair, target: TargetPoint,
                        mode: AppendixMode | None = None, cfg: QuadConfig | None = None,
                        lim: LimitPolicy = DEFAULT_LIMIT, check_tol: bool = True,
                        twist: int = 0) -> IntegralResult:
    """Numerical value of the plane-wave (or cos/sin) weighted double integral.

    ``mode`` None gives the full plane wave e(-2xy cos(phi + theta)) times
    e^{i twist phi}; an AppendixMode gives the cos or sin half with
    e^{i m phi} (``twist`` must then be 0).
    """
    cfg = cfg or DEFAULT_QUAD
    if kernel_id not in KERNELS:
        raise ValueError(f"unknown kernel {kernel_id!r}")
    y, theta = target.y, target.theta
    if not y > 0:
        raise RangeError("y must be positive")
    if mode is not None and twist:
        raise ValueError("twist is carried by the AppendixMode")
    m0 = int(twist) if mode is None else mode.m
    _check_strip(kernel_id, rho, pair, m0, y)
    if mode is None:
        vals, errs, cells, tail = _plane_wave_integrals(kernel_id, rho, [(1.0, pair)], m0, y, [theta], cfg, lim)
        value, err = vals[0], errs[0]
    else:
        vals, errs, cells, tail = _plane_wave_integrals(
            kernel_id, rho, [(1.0, pair)], m0, y, [theta, theta + math.pi], cfg, lim)
        if mode.trig == "cos":
            value = (vals[0] + vals[1]) / 2
        else:
            value = (vals[1] - vals[0]) / 2j
        err = (errs[0] + errs[1]) / 2
    if check_tol and err > cfg.abs_tol + cfg.rel_tol * abs(value):
        raise AccuracyError(f"error estimate {err:.2e} exceeds tolerance at |value| = {abs(value):.3e}")
    return IntegralResult(complex(value), float(err), cells, tail)


def lhs_mixture_integral(kernel_id: str, rho, components, target: TargetPoint,
                         cfg: QuadConfig | None = None,
                         lim: LimitPolicy = DEFAULT_LIMIT) -> IntegralResult:
    """Plane-wave integral of the weighted kernel sum  sum_j w_j K_{pair_j}.

    All pairs must share d. The sum is formed pointwise before any radial or
    angular integration, so this is the integral of a single function.
    """
    cfg = cfg or DEFAULT_QUAD
    components = [(complex(w), p) for w, p in components]
    if not components:
        raise ValueError("need at least one component")
    if len({p.twice_d for _, p in components}) != 1:
        raise ValueError("all components must share d")
    if not target.y > 0:
        raise RangeError("y must be positive")
    for _, p in components:
        _check_strip(kernel_id, rho, p, 0, target.y)
    vals, errs, cells, tail = _plane_wave_integrals(
        kernel_id, rho, components, 0, target.y, [target.theta], cfg, lim)
    return IntegralResult(complex(vals[0]), float(errs[0]), cells, tail)


# --------------------------------------------------------------------------
# a single radial integral


def radial_bessel_integral(c, m: int, y: float, rho, cfg: QuadConfig | None = None,
                           envelope=None) -> IntegralResult:
    """int_0^inf c(x) J_|m|(4 pi x y) x^{2 rho - 1} dx.

    ``c`` is a PowerLaw (tail and origin done exactly, or by integration by
    parts with cfg.tail = "ibp") or any vectorized callable; for the latter
    the tail is summed over half-periods with Wynn acceleration, and
    ``envelope`` (the exponent s of c(x) ~ x^s at infinity) is checked for
    convergence.
    """
    cfg = cfg or DEFAULT_QUAD
    if not y > 0:
        raise RangeError("y must be positive")
    rho = complex(rho)
    j = abs(int(m))
    kappa = FOUR_PI * y
    x_head = cfg.radial_truncation or max(8.0, 16.0 / y)
    width = min(4 / (2 * y * cfg.cells_per_period), 0.25)

    if isinstance(c, PowerLaw):
        s = complex(c.exponent)
        if (s + 2 * rho).real >= 1.5:
            raise TailDivergence("power-law integrand does not decay against the Bessel factor")
        x_min = 1e-3 / max(1.0, y)
        edges = _panel_edges(x_min, x_head, width)
        xs, ws, half = _gl_panels(edges)
        f = c(xs) * sp.jv(j, kappa * xs) * np.exp((2 * rho - 1) * np.log(xs))
        head, err = _panel_sum(f, ws, half)
        terms = [(complex(c.coef), s, j)]
        origin = _origin_piece(terms, rho, 0, y, 0.0, x_min) / _angular_factor(j, 0.0)
        p = s + 2 * rho - 1
        if cfg.tail == "ibp":
            t, te = _bessel_power_tail_ibp(j, kappa, p, x_head, cfg.ibp_order, cfg.accel_terms)
            method = "ibp"
        else:
            t, te = bessel_power_tail(j, kappa, p, x_head), 0.0
            method = "asymptotic_subtraction"
        value = head + origin + complex(c.coef) * t
        return IntegralResult(complex(value), float(err + abs(c.coef) * te), len(half), method)

    if envelope is not None and (complex(envelope) + 2 * rho).real >= 1.5:
        raise TailDivergence("envelope exponent outside the convergence strip")
    x_min = 1e-12
    edges = _panel_edges(x_min, x_head, width)
    xs, ws, half = _gl_panels(edges)
    f = np.asarray(c(xs)) * sp.jv(j, kappa * xs) * np.exp((2 * rho - 1) * np.log(xs))
    head, err = _panel_sum(f, ws, half)
    # half-period cells beyond the head, accelerated
    n_cells = 4 * cfg.accel_terms
    t_edges = x_head + (math.pi / kappa) * np.arange(n_cells + 1)
    txs, tws, _ = _gl_panels(t_edges)
    g = np.asarray(c(txs)) * sp.jv(j, kappa * txs) * np.exp((2 * rho - 1) * np.log(txs))
    cells = np.sum(g * tws, axis=1)
    partial = np.cumsum(cells)
    if np.max(np.abs(cells)) <= 1e-300:
        tail, terr = 0j, 0.0
    else:
        tail, terr = _wynn(partial[-2 * cfg.accel_terms:])
    return IntegralResult(complex(head + tail), float(err + terr), len(half) + n_cells, "absolute")


# --------------------------------------------------------------------------
# brute-force oracle


def _smooth_step(t):
    t = np.clip(t, 0.0, 1.0)
    a = np.where(t > 0, np.exp(-1 / np.maximum(t, 1e-300)), 0.0)
    b = np.where(t < 1, np.exp(-1 / np.maximum(1 - t, 1e-300)), 0.0)
    return a / (a + b)


def brute_2d_oracle(kernel_id: str, rho, pair: OrderPair, target: TargetPoint,
                    cfg: QuadConfig | None = None, mode: AppendixMode | None = None,
                    radii=(4.0, 6.0, 8.0), lim: LimitPolicy = DEFAULT_LIMIT) -> IntegralResult:
    """Tensor quadrature on [0, R] x [0, 2 pi] with a smooth radial taper.

    No angular decomposition and no tail asymptotics: the plane wave is
    sampled directly. The taper switches off between R/2 and R; the change between
    the last two ``radii`` sets the error estimate. Slow.
    """
    cfg = cfg or DEFAULT_QUAD
    rho = complex(rho)
    y, theta = target.y, target.theta
    if not y > 0:
        raise RangeError("y must be positive")
    m0 = 0 if mode is None else mode.m
    _check_strip(kernel_id, rho, pair, m0, y)
    r_max = max(radii)
    freq = 2 * y + (4 if kernel_id in ("J", "M") else 0)

    # near the origin: x = x0 e^{-s}
    x0 = min(0.05, 0.05 / y)
    terms = _kernel_monomials(kernel_id, pair.mu, pair.twice_d)
    alpha = min((s + 2 * rho).real + abs(n + m0) for _, s, n in terms)
    if alpha <= 0:
        raise RangeError("integrand not integrable at the origin")
    s_max = min(40 / alpha, 680.0)
    s_nodes, s_weights, _ = _gl_panels(np.linspace(0.0, s_max, math.ceil(s_max / 0.5) + 1))
    xa = x0 * np.exp(-s_nodes.ravel())
    wa = s_weights.ravel() * xa
    n_a = 64
    while n_a < 2 * (abs(m0) + abs(pair.twice_d)) + 16:
        n_a *= 2

    edges = np.linspace(x0, r_max, max(2, math.ceil((r_max - x0) * freq * 2)) + 1)
    xb, wb, _ = _gl_panels(edges)
    xb, wb = xb.ravel(), wb.ravel()
    n_b = 64
    while n_b < FOUR_PI * r_max * (y + (2 if kernel_id in ("J", "M") else 0)) + 64 + 4 * abs(m0):
        n_b *= 2

    def angular(xr, n_phi, th):
        phi = 2 * np.pi * np.arange(n_phi) / n_phi
        z = xr[:, None] * np.exp(1j * phi)[None, :]
        k = kernel_values(kernel_id, pair, z, lim)
        wave = np.exp(-1j * FOUR_PI * xr[:, None] * y * np.cos(phi + th)[None, :] + 1j * m0 * phi)
        return (k * wave).sum(axis=1) * (2 * np.pi / n_phi)

    def one(th):
        ga = angular(xa, n_a, th) * np.exp((2 * rho - 1) * np.log(xa))
        gb = angular(xb, n_b, th) * np.exp((2 * rho - 1) * np.log(xb))
        inner = np.sum(ga * wa)
        out = []
        for r in radii:
            taper = 1 - _smooth_step((xb - r / 2) / (r / 2))
            out.append(inner + np.sum(gb * wb * taper))
        return np.array(out)

    if mode is None:
        vals = one(theta)
    else:
        a, b = one(theta), one(theta + math.pi)
        vals = (a + b) / 2 if mode.trig == "cos" else (b - a) / 2j
    value = vals[-1]
    err = 2 * float(abs(vals[-1] - vals[-2])) + abs(value) * 1e-12
    return IntegralResult(complex(value), err, len(edges) - 1, "absolute")


__all__ = [
    "QuadConfig", "DEFAULT_QUAD", "IntegralResult", "PowerLaw", "angular_coeffs",
    "radial_bessel_integral", "lhs_double_integral", "lhs_mixture_integral", "brute_2d_oracle",
    "bessel_power_tail", "KERNELS", "TAIL_METHODS",
]
