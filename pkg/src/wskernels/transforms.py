"""Spectral transforms of test functions and the Fourier identity they satisfy.

For an even test function h, decaying faster than e^{-pi |t|} on a strip:

    phi(z)   = 1/2 int h(t) bJ_{it}(z) sinh(pi t) t dt        (Bessel transform)
    omega(z) = i int h(t) |2 pi z|^{2it} t dt / Gamma(1 + it)^2  (its Mellin part)

and the plane integral of phi(z) e(Tr(kz)) |dz ^ dzbar| / |z|^2 equals

    2 int h(t) sinh(pi t) |(k + sqrt(k^2 - 4)) / 2|^{-2it} dt / t,   |k| > 2.

The left side is computed as (phi - omega) + omega: the first piece by
swapping the t-integral outside and using the closed form of the
regularized kernel integral, the second on a shifted contour where the
power integral converges. The real-line analogue lives here too.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .closed_forms import TargetPoint, rhs_lemma43, rhs_real_line, rhs_special_WS
from .errors import DecayError, DomainError, RangeError
from .kernels import OrderPair, kernel_boldJ
from .quadrature import QuadConfig, lhs_mixture_integral
from .special import bessel_j, bessel_k, rgamma

TWO_PI = 2 * math.pi
_LAGUERRE = np.polynomial.laguerre.laggauss(40)


# --------------------------------------------------------------------------
# test functions and t-grids


@dataclass(frozen=True)
class TestFunction:
    """Even holomorphic h on |Im s| <= strip_M decaying like e^{-pi|t|}(|t|+1)^{-N}."""

    __test__ = False  # not a pytest class

    evaluator: Callable
    strip_M: float = 3.0
    decay_N: float = 8.0
    family: str = "custom"

    def __post_init__(self):
        if not self.strip_M > 2:
            raise ValueError("strip_M must exceed 2")
        if not self.decay_N > 6:
            raise ValueError("decay_N must exceed 6")

    def __call__(self, s):
        return self.evaluator(np.asarray(s, dtype=complex))

    @classmethod
    def gaussian(cls, a: float = 1.0) -> "TestFunction":
        if not a > 0:
            raise ValueError("width must be positive")
        return cls(lambda s: np.exp(-(s / a) ** 2), family=f"gaussian(a={a:g})")

    def check_class(self, t_max: float = 40.0, samples: int = 801) -> None:
        """Numerical membership test: evenness and the envelope on a few lines.

        Raises ValueError if h is not even and DecayError if the envelope
        ratio fails to decay by t_max on some line.
        """
        t = np.linspace(0.0, t_max, samples)
        for sigma in (0.0, 1.0, -1.0, self.strip_M / 2, -self.strip_M / 2):
            s = t + 1j * sigma
            hp, hm = self(s), self(-s)
            scale = float(np.max(np.abs(hp))) or 1.0
            if np.max(np.abs(hp - hm)) > 1e-12 * scale:
                raise ValueError(f"h is not even on Im s = {sigma:g}")
            with np.errstate(over="ignore"):
                ratio = np.abs(hp) * np.exp(math.pi * t) * (t + 1) ** self.decay_N
            if not np.all(np.isfinite(ratio[: samples // 2])):
                raise DecayError(f"envelope not bounded on Im s = {sigma:g}")
            if not ratio[-1] <= 1e-3 * max(float(np.max(ratio)), 1e-300):
                raise DecayError(f"h does not beat e^(-pi|t|) on Im s = {sigma:g}")


@dataclass(frozen=True)
class SpectralGrid:
    """Trapezoid rule on the line Im t = -sigma, truncated at |Re t| <= T."""

    step: float = 0.05
    T: float = 12.0
    sigma: float = 0.0
    tol: float = 1e-12

    def __post_init__(self):
        if not (self.step > 0 and self.T > 0):
            raise ValueError("step and T must be positive")
        if abs(round(self.T / self.step) * self.step - self.T) > 1e-9:
            raise ValueError("T must be a multiple of step")

    def with_sigma(self, sigma: float) -> "SpectralGrid":
        return SpectralGrid(self.step, self.T, sigma, self.tol)

    def nodes(self):
        """Complex nodes t - i sigma and weights, symmetric in Re t."""
        n = int(round(self.T / self.step))
        t = np.arange(-n, n + 1) * self.step
        w = np.full(t.shape, self.step)
        return t - 1j * self.sigma, w

    def half_nodes(self):
        """Nodes with Re t >= 0 and weights folding an even integrand."""
        n = int(round(self.T / self.step))
        t = np.arange(0, n + 1) * self.step - 1j * self.sigma
        w = np.full(t.shape, 2 * self.step)
        w[0] = self.step
        return t, w

    def check_tail(self, h: TestFunction, growth: float = 3.0) -> None:
        """DecayError unless |h| e^{pi T} (T+1)^growth is below tol at the cut."""
        edge = self.T - 1j * self.sigma
        bound = abs(complex(h(edge))) * math.exp(math.pi * self.T) * (self.T + 1) ** growth
        if bound > self.tol:
            raise DecayError(f"tail bound {bound:.1e} at T = {self.T:g} exceeds {self.tol:g}")

    @classmethod
    def for_function(cls, h: TestFunction, step: float = 0.05, sigma: float = 0.0,
                     tol: float = 1e-12, t_max: float = 60.0) -> "SpectralGrid":
        """Smallest T (a multiple of step) whose tail bound meets tol."""
        n = 1
        while n * step <= t_max:
            grid = cls(step, n * step, sigma, tol)
            try:
                grid.check_tail(h)
                return grid
            except DecayError:
                n += max(1, int(round(0.5 / step)))
        raise DecayError(f"no truncation below {t_max:g} meets the tail tolerance")


DEFAULT_GRID = SpectralGrid()


# --------------------------------------------------------------------------
# transforms


def bessel_transform_phi(h: TestFunction, z, grid: SpectralGrid = DEFAULT_GRID) -> complex:
    """phi(z) = 1/2 int h(t) bJ_{it}(z) sinh(pi t) t dt on the real line."""
    z = complex(z)
    if z == 0:
        raise DomainError("phi is evaluated away from z = 0")
    if grid.sigma:
        raise ValueError("phi is integrated on the real line")
    grid.check_tail(h)
    ts, ws = grid.half_nodes()
    total = 0j
    for t, w in zip(ts[1:].real, ws[1:]):
        hv = complex(h(t))
        if hv == 0:
            continue
        total += w * hv * complex(kernel_boldJ(OrderPair(1j * t, 0), z)) * math.sinh(math.pi * t) * t
    return total / 2


def mellin_omega(h: TestFunction, z, grid: SpectralGrid = DEFAULT_GRID) -> complex:
    """omega(z) = i int h(t) |2 pi z|^{2it} t dt / Gamma(1+it)^2 on Im t = -sigma."""
    z = complex(z)
    if z == 0:
        raise DomainError("omega is evaluated away from z = 0")
    if not 0 <= grid.sigma < 0.5:
        raise RangeError("contour shift must satisfy 0 <= sigma < 1/2")
    grid.check_tail(h)
    t, w = grid.nodes()
    r = abs(TWO_PI * z)
    vals = h(t) * np.exp(2j * t * math.log(r)) * t * rgamma(1 + 1j * t) ** 2
    return complex(1j * np.sum(w * vals))


def _target_for(k) -> TargetPoint:
    k = complex(k)
    if not abs(k) > 2:
        raise DomainError("need |k| > 2")
    theta = (cmath.phase(k) + math.pi) % (2 * math.pi)
    return TargetPoint(abs(k), theta)


def big_root(k) -> complex:
    """(k + sqrt(k^2 - 4)) / 2 with the root chosen so the modulus is >= 1."""
    k = complex(k)
    r = cmath.sqrt(k * k - 4)
    a, b = (k + r) / 2, (k - r) / 2
    return a if abs(a) >= abs(b) else b


def rhs_theorem16(h: TestFunction, k, grid: SpectralGrid = DEFAULT_GRID) -> complex:
    """2 int h(t) sinh(pi t) |A|^{-2it} dt / t with A = big_root(k)."""
    k = complex(k)
    if not abs(k) > 2:
        raise DomainError("need |k| > 2")
    grid.check_tail(h)
    if grid.sigma:
        raise ValueError("the right side is integrated on the real line")
    t, w = grid.nodes()
    t = t.real
    log_a = math.log(abs(big_root(k)))
    safe = np.where(t == 0, 1.0, t)
    g = np.where(t == 0, math.pi * h(0.0), h(t) * np.sinh(math.pi * t) * np.exp(-2j * t * log_a) / safe)
    return complex(2 * np.sum(w * g))


def part2_closed(h: TestFunction, k, grid: SpectralGrid = DEFAULT_GRID) -> complex:
    """2 int h(t) |k|^{-2it} sinh(pi t) dt / t, the omega piece in closed form."""
    k = complex(k)
    t, w = grid.with_sigma(0.0).nodes()
    t = t.real
    safe = np.where(t == 0, 1.0, t)
    g = np.where(t == 0, math.pi * h(0.0),
                 h(t) * np.sinh(math.pi * t) * np.exp(-2j * t * math.log(abs(k))) / safe)
    return complex(2 * np.sum(w * g))


def theorem16_parts(h: TestFunction, k, grid: SpectralGrid = DEFAULT_GRID, sigma: float = 0.25,
                    cfg: QuadConfig | None = None, mode: str = "split", raw_step: float = 0.2,
                    raw_T: float = 6.0):
    """The two pieces (phi - omega, omega) of the plane integral.

    mode "split": the first piece is a t-integral of the closed-form
    regularized kernel integral. mode "raw": the first piece is the plane
    integral of the pointwise t-sum phi - omega, done by the quadrature
    engine (slow). The second piece always uses the power integral on
    Im t = -sigma.
    """
    target = _target_for(k)
    if not 0 < sigma < 0.5:
        raise RangeError("contour shift must satisfy 0 < sigma < 1/2")
    grid.check_tail(h)
    if mode == "split":
        ts, ws = grid.with_sigma(0.0).half_nodes()
        part1 = 0j
        for t, w in zip(ts[1:].real, ws[1:]):
            hv = complex(h(t))
            if abs(hv) * math.sinh(math.pi * t) * t < 1e-300:
                continue
            inner = rhs_special_WS(OrderPair(1j * t, 0), target)
            part1 += w * hv * inner * math.sinh(math.pi * t) * t
        # 1/2 from phi and 2 from |dz ^ dzbar| = 2 dx dy
    elif mode == "raw":
        n = int(round(raw_T / raw_step))
        ts = np.arange(1, n + 1) * raw_step
        comps = [(raw_step * complex(h(t)) * math.sinh(math.pi * t) * t, OrderPair(1j * t, 0))
                 for t in ts]
        res = lhs_mixture_integral("M", 0.0, comps, target, cfg or QuadConfig())
        part1 = 2 * res.value
    else:
        raise ValueError(f"unknown mode {mode!r}")

    t, w = grid.with_sigma(sigma).nodes()
    part2 = 0j
    for tv, wv in zip(t, w):
        hv = complex(h(tv))
        if hv == 0:
            continue
        inner = 2 * TWO_PI ** (2j * tv) * rhs_lemma43(1j * tv, 0, target)
        part2 += wv * 1j * hv * tv * complex(rgamma(1 + 1j * tv)) ** 2 * inner
    return complex(part1), complex(part2)


def lhs_theorem16(h: TestFunction, k, cfg: QuadConfig | None = None,
                  grid: SpectralGrid = DEFAULT_GRID, mode: str = "split",
                  sigma: float = 0.25) -> complex:
    """Plane integral of phi(z) e(Tr(kz)) |dz ^ dzbar| / |z|^2 as part1 + part2."""
    p1, p2 = theorem16_parts(h, k, grid, sigma, cfg, mode)
    return p1 + p2


# --------------------------------------------------------------------------
# real line


def _power_phase_tail(p, f, x0):
    """int_{x0}^inf x^p e^{i f x} dx for real f, by rotating onto a ray."""
    p = complex(p)
    if f == 0:
        if p.real >= -1:
            raise RangeError("non-oscillatory tail with Re p >= -1 diverges")
        return -(x0 ** (p + 1)) / (p + 1)
    if p.real >= 0:
        raise RangeError("tail needs Re p < 0")
    s, w = _LAGUERRE
    direction = 1j * math.copysign(1.0, f)
    x = x0 + direction * s / abs(f)
    return complex(direction / abs(f) * cmath.exp(1j * f * x0) * np.sum(w * np.exp(p * np.log(x))))


def _reduced_minus_one(nu, w, sign):
    """(F_nu(w) - P_nu(w)) / P_nu(w) for F = J (sign -1) or I (sign +1), small w."""
    nu = complex(nu)
    q = (w / 2) ** 2 * sign
    term = np.ones_like(w, dtype=complex)
    total = np.zeros_like(w, dtype=complex)
    for n in range(1, 80):
        term = term * q / (n * (nu + n))
        total += term
        if np.all(np.abs(term) < 1e-17 * (np.abs(total) + 1e-300)):
            break
    return total


def _regularized_kernel(kind, nu, x):
    """J_nu(4 pi x) / x-free part: J, D or M kernel values at real x > 0."""
    nu = complex(nu)
    w = 4 * math.pi * np.asarray(x, dtype=float)
    if kind == "J":
        return np.asarray(bessel_j(nu, w), dtype=complex)

    def pw(n):
        return np.exp(n * np.log(w / 2)) * complex(rgamma(1 + n))

    den = cmath.sin(math.pi * nu / 2)
    small = w <= 4
    out = np.empty(w.shape, dtype=complex)
    sgn = -1 if kind == "D" else 1
    if np.any(small):
        ws = w[small]
        out[small] = (pw(-nu)[small] * _reduced_minus_one(-nu, ws, sgn)
                      - pw(nu)[small] * _reduced_minus_one(nu, ws, sgn)) / den
    big = ~small
    if np.any(big):
        wb = w[big]
        r = (pw(-nu)[big] - pw(nu)[big]) / den
        if kind == "D":
            b = (np.asarray(bessel_j(-nu, wb)) - np.asarray(bessel_j(nu, wb))) / den
        else:
            b = 4 / math.pi * cmath.cos(math.pi * nu / 2) * np.asarray(bessel_k(nu, wb))
        out[big] = b - r
    return out


def _hankel_coeffs(nu, n):
    out = np.empty(n, dtype=complex)
    c = 1 + 0j
    for k in range(n):
        out[k] = c
        c *= (4 * nu * nu - (2 * k + 1) ** 2) / (4 * (k + 1))
    return out


def _bessel_phase_tail(nu, f, x0, terms=30):
    """int_{x0}^inf J_nu(4 pi x) e^{i f x} dx / x from the Hankel series."""
    nu = complex(nu)
    c = _hankel_coeffs(nu, terms)
    w0 = 4 * math.pi * x0
    total = 0j
    for kind in (1, -1):  # H1 carries e^{+iw}, H2 carries e^{-iw}
        shift = cmath.exp(kind * 1j * (-nu * math.pi / 2 - math.pi / 4))
        base = 1 / math.sqrt(2 * math.pi**2)
        for n in range(terms):
            coef = c[n] * ((-kind) / (2j * 4 * math.pi)) ** n
            if abs(coef) / w0**n < 1e-18 * 4**n and n > 2:
                break
            total += 0.5 * base * shift * coef * _power_phase_tail(-1.5 - n, f + kind * 4 * math.pi, x0)
    return total


@dataclass(frozen=True)
class LineResult:
    value: complex
    err_estimate: float
    cells_used: int


def real_line_integral(kind: str, nu, y: float, sign: int = 1, x_head: float = 3.5,
                       cells_per_period: int = 8) -> LineResult:
    """Numerical int_0^inf K_nu(4 pi x) e(+-xy) dx / x for K in J, D, M.

    D = B - R and M = (4/pi) cos(pi nu/2) K_nu - R are the regularized
    kernels with R = (P_{-nu} - P_nu) / sin(pi nu / 2). Panels on [0, X],
    exact power/Hankel tails beyond.
    """
    from .quadrature import _gl_panels, _panel_edges, _panel_sum

    nu = complex(nu)
    if kind not in ("J", "D", "M"):
        raise ValueError(f"unknown kind {kind!r}")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if kind == "J" and not nu.real > 0:
        raise RangeError("J kernel against dx/x needs Re nu > 0")
    if kind in ("D", "M") and not (abs(nu.real) < 1 and nu != 0):
        raise RangeError("regularized kernels need 0 < |nu|, |Re nu| < 1")
    if y < 0 or (kind != "J" and y == 0):
        raise RangeError("y must be positive")
    f = sign * TWO_PI * y
    x_min = 1e-6
    period = 1 / (2 + y)
    edges = _panel_edges(x_min, x_head, period * 4 / cells_per_period)
    xs, ws, half = _gl_panels(edges)
    vals = _regularized_kernel(kind, nu, xs) * np.exp(1j * f * xs) / xs
    head, err = _panel_sum(vals, ws, half)

    # [0, x_min]: leading power only, the rest is O(x_min^2)
    if kind == "J":
        origin = (TWO_PI * x_min) ** nu * complex(rgamma(1 + nu)) / nu
    else:
        origin = 0j
    tail = 0j
    den = cmath.sin(math.pi * nu / 2)
    if kind in ("J", "D"):
        for order, c in (((nu,), 1.0),) if kind == "J" else (((-nu,), 1 / den), ((nu,), -1 / den)):
            tail += c * _bessel_phase_tail(order[0], f, x_head)
    if kind in ("D", "M"):
        for n, c in ((-nu, 1 / den), (nu, -1 / den)):
            # minus R: P_n(4 pi x) = (2 pi x)^n / Gamma(1 + n)
            tail -= c * TWO_PI**n * complex(rgamma(1 + n)) * _power_phase_tail(n - 1, f, x_head)
    value = head + origin + tail
    return LineResult(complex(value), float(err + 1e-13 * abs(value) + abs(origin) * 1e-6), len(half))


def real_line_target(h: TestFunction, kind: str, k: float,
                     grid: SpectralGrid = DEFAULT_GRID) -> complex:
    """1/2 int h(t) cosh(pi t) A^{-2it} dt with A = (k + sqrt(k^2 -+ 4)) / 2."""
    if kind == "B":
        if not k > 2:
            raise RangeError("the B pipeline needs k > 2")
        a = (k + math.sqrt(k * k - 4)) / 2
    elif kind == "K":
        if not k > 0:
            raise RangeError("the K pipeline needs k > 0")
        a = (k + math.sqrt(k * k + 4)) / 2
    else:
        raise ValueError(f"unknown kind {kind!r}")
    grid.check_tail(h)
    t, w = grid.with_sigma(0.0).nodes()
    t = t.real
    return complex(0.5 * np.sum(w * h(t) * np.cosh(math.pi * t) * np.exp(-2j * t * math.log(a))))


def real_line_pipeline(h: TestFunction, kind: str, k: float, grid: SpectralGrid = DEFAULT_GRID,
                       sigma: float = 0.25, numeric: bool = False) -> complex:
    """int_0^inf cos(2 pi k x) phi(x) dx / x for the B- or K-transform phi of h.

    Regularized split: the D (or M) kernel piece with the t-integral outside,
    plus the P piece on the shifted line Im t = -sigma via the power
    integral. ``numeric`` replaces the closed-form kernel integrals by
    ``real_line_integral``.
    """
    if kind not in ("B", "K"):
        raise ValueError(f"unknown kind {kind!r}")
    if kind == "B" and not k > 2:
        raise RangeError("the B pipeline needs k > 2")
    if not k > 0:
        raise RangeError("k must be positive")
    if not 0 < sigma < 0.5:
        raise RangeError("contour shift must satisfy 0 < sigma < 1/2")
    grid.check_tail(h)
    reg = "reg_D" if kind == "B" else "reg_M"
    ts, ws = grid.with_sigma(0.0).half_nodes()
    part1 = 0j
    for t, w in zip(ts[1:].real, ws[1:]):
        hv = complex(h(t))
        if abs(hv) * math.sinh(math.pi * t) * t < 1e-300:
            continue
        nu = 2j * t
        if numeric:
            inner = sum(real_line_integral("D" if kind == "B" else "M", nu, k, s).value
                        for s in (1, -1)) / 2
        else:
            inner = sum(rhs_real_line(reg, nu, k, s) for s in (1, -1)) / 2
        part1 += w * hv * math.sinh(math.pi * t) * t * inner
    part1 /= 2
    t, w = grid.with_sigma(sigma).nodes()
    part2 = 0j
    for tv, wv in zip(t, w):
        hv = complex(h(tv))
        if hv == 0:
            continue
        nu = 2j * tv
        inner = sum(rhs_real_line("power", nu, k, s) for s in (1, -1)) / 2
        part2 += wv * hv * tv * TWO_PI**nu * complex(rgamma(1 + nu)) * inner
    return complex(part1 + 1j * part2)


__all__ = [
    "TestFunction", "SpectralGrid", "DEFAULT_GRID", "bessel_transform_phi", "mellin_omega",
    "lhs_theorem16", "rhs_theorem16", "theorem16_parts", "part2_closed", "big_root",
    "real_line_integral", "real_line_pipeline", "real_line_target", "LineResult",
]
