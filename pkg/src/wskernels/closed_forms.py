"""Closed-form right-hand sides of the Weber-Schafheitlin type identities.

Notation used throughout:

* ``target = TargetPoint(y, theta)`` is the frequency ``y e^{i theta}`` and
  ``u = y^2 e^{2 i theta} / 4`` its squared, scaled form;
* ``F1(rho, nu; w) = 2F1((rho+nu)/2, (1+rho+nu)/2; 1+nu; w)`` and
  ``F2(rho, nu; w) = F1(rho, -nu; w)``, evaluated at ``w = 1/u``;
* ``E1, E2`` are the companion solutions at ``u = 0`` used when ``|u| < 1``.

The Fourier integral of the even-family kernel against ``x^{2 rho - 1}`` is,
for ``y >= 2``,

    C(mu, d) F1(mu+d; 1/u) F1(mu-d; 1/conj u) y^{-2 rho - 2 mu} e^{-2 i d theta}
      + C(-mu, -d) F2(mu+d; 1/u) F2(mu-d; 1/conj u) y^{-2 rho + 2 mu} e^{2 i d theta}

and for ``y < 2`` it is ``4^-rho`` times the E1/E2 combination returned by
:func:`rhs_prop32`.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

from .errors import ParityError, RangeError, SingularityError
from .kernels import DEFAULT_LIMIT, LimitPolicy, OrderPair, phase_factor, richardson_limit, y_factor
from .special import gamma, hyp2f1, rgamma

TWO_PI = 2 * math.pi
SINGULAR_RADIUS = 1e-6
_CUT_STEP = 1e-5


class BranchCutWarning(UserWarning):
    """Value on the positive real u-axis, taken as a one-sided limit."""


@dataclass(frozen=True)
class TargetPoint:
    y: float
    theta: float = 0.0

    def __post_init__(self):
        y, t = float(self.y), float(self.theta)
        if not (math.isfinite(y) and y >= 0):
            raise ValueError("y must be finite and >= 0")
        if not 0 <= t < TWO_PI:
            raise ValueError("theta must lie in [0, 2 pi)")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "theta", t)

    @classmethod
    def from_z(cls, z) -> "TargetPoint":
        z = complex(z)
        return cls(abs(z), math.atan2(z.imag, z.real) % TWO_PI)

    @property
    def z(self) -> complex:
        return self.y * cmath.exp(1j * self.theta)

    @property
    def u(self) -> complex:
        return self.y**2 * cmath.exp(2j * self.theta) / 4


@dataclass(frozen=True)
class AppendixMode:
    """Angular twist e^{i m phi} and the cos/sin half of the plane wave."""

    m: int
    trig: str = "cos"

    def __post_init__(self):
        if int(self.m) != self.m:
            raise ValueError("m must be an integer")
        object.__setattr__(self, "m", int(self.m))
        if self.trig not in ("cos", "sin"):
            raise ValueError("trig must be 'cos' or 'sin'")

    def allowed(self, pair: OrderPair) -> bool:
        even = (self.m + pair.twice_d) % 2 == 0
        return even == (self.trig == "cos")


# --------------------------------------------------------------------------
# coefficients


def _trig_gamma(x, a, trig):
    """trig(pi x) Gamma(x - a) with the reflection-formula cancellation.

    Needs a integer for sin and a half-integer for cos.
    """
    if trig == "sin":
        return (-1) ** round(a) * math.pi * rgamma(1 + a - x)
    s = math.sin(math.pi * a)
    return -math.pi / s * rgamma(1 + a - x)


def _inverse_gamma_over_trig(mu, k, odd):
    """1 / (Gamma(1 + mu - k) * den(mu)); den is sin(pi mu) or cos(pi mu)."""
    sigma = math.sin(math.pi * k) if odd else -math.cos(math.pi * k)
    return sigma * gamma(k - mu) / math.pi


def _appendix_coeff(rho, mu, twice_d, m, trig):
    """C (trig = sin) or D (trig = cos) coefficient of the twisted integral."""
    rho, mu = complex(rho), complex(mu)
    odd = twice_d % 2 == 1
    k = abs(twice_d) / 2
    a = m / 2 + twice_d / 2
    x = rho + mu
    val = -gamma(x + a) * _trig_gamma(x, a, trig) * _inverse_gamma_over_trig(mu, k, odd)
    val *= (-1) ** m * rgamma(1 + mu + k) / TWO_PI ** (2 * rho)
    return 1j * val if odd else val


def _general_coeff(rho, mu, twice_d):
    """Coefficient of the full plane-wave integral (m = 0)."""
    if twice_d % 2 == 0:
        return _appendix_coeff(rho, mu, twice_d, 0, "sin")
    # cos part vanishes; the plane wave contributes -i times the sin part
    return -1j * _appendix_coeff(rho, mu, twice_d, 0, "cos")


def coeff_C(rho, pair: OrderPair) -> complex:
    """Leading coefficient of the large-y expansion.

    Computed from a pole-free product of gamma functions, so mu = 0 with
    d != 0 needs no limit. For half-integer d this is the coefficient of the
    full plane-wave integral, where only the sine half survives.
    """
    return complex(_general_coeff(rho, pair.mu, pair.twice_d))


def _prop32_B(rho, mu, d):
    return ((-1) ** (d % 2) * cmath.cos(math.pi * mu) - cmath.cos(math.pi * rho)) / (
        4 * math.pi ** (2 * rho + 2))


def _gamma4(rho, mu, d, shift):
    out = 1.0 + 0j
    for s1 in (1, -1):
        for s2 in (1, -1):
            out *= gamma((shift + rho + s1 * mu + s2 * d) / 2)
    return out


# --------------------------------------------------------------------------
# hypergeometric factors


def _F(lam, nu, w):
    return hyp2f1((lam + nu) / 2, (1 + lam + nu) / 2, 1 + nu, w)


def _E1(rho, nu, w):
    return hyp2f1((rho + nu) / 2, (rho - nu) / 2, 0.5, w)


def _E2(rho, nu, w):
    return hyp2f1((rho + nu + 1) / 2, (rho - nu + 1) / 2, 1.5, w)


def _f_form_singular(mu, twice_d) -> bool:
    """Some 1 +- mu +- d sits near a non-positive integer."""
    d = twice_d / 2
    for nu in (mu + d, mu - d, -mu - d, -mu + d):
        n = round(nu.real)
        if n <= -1 and abs(nu - n) < SINGULAR_RADIUS:
            return True
    return abs(mu) < SINGULAR_RADIUS and twice_d == 0


def _check_u(u):
    dist = abs(u - 1)
    if 0 < dist < SINGULAR_RADIUS:
        raise SingularityError("within 1e-6 of the singular point u = 1")


def _f_form(rho, mu, twice_d, m, trig, z):
    """Two-term product expansion at frequency z, principal branches."""
    y = abs(z)
    e = z / y
    w = 4 / z**2
    wc = w.conjugate()
    d = twice_d / 2
    l1, l2 = rho + m / 2, rho - m / 2
    t1 = _appendix_coeff(rho, mu, twice_d, m, trig) * _F(l1, mu + d, w) * _F(l2, mu - d, wc)
    t1 *= y ** (-2 * rho - 2 * mu) * e ** -(m + twice_d)
    t2 = _appendix_coeff(rho, -mu, -twice_d, m, trig) * _F(l1, -mu - d, w) * _F(l2, -mu + d, wc)
    t2 *= y ** (-2 * rho + 2 * mu) * e ** -(m - twice_d)
    return t1 + t2


def _f_form_limit(rho, pair, m, trig, z, lim):
    mu, td = pair.mu, pair.twice_d
    if _f_form_singular(mu, td):
        centre = complex(math.floor(mu.real) + 0.5 if td % 2 else round(mu.real), 0)
        val, _ = richardson_limit(lambda s: _f_form(rho, s, td, m, trig, z), centre, lim)
        return complex(val)
    return _f_form(rho, mu, td, m, trig, z)


def _on_u_cut(z) -> bool:
    """4 / z^2 lies on (1, inf), i.e. z real with |z| < 2."""
    return abs(z.imag) <= 1e-14 * max(abs(z), 1.0) and abs(z) < 2


def _twisted(rho, pair, m, trig, target: TargetPoint, lim):
    z = target.z
    if target.y == 0:
        raise RangeError("closed form needs y > 0")
    _check_u(target.u)
    if target.y >= 2 or not _on_u_cut(z):
        return _f_form_limit(rho, pair, m, trig, z, lim)
    # real-analytic across the cut: symmetric one-sided average
    t = target.theta
    vals = [_f_form_limit(rho, pair, m, trig, target.y * cmath.exp(1j * (t + s)), lim)
            for s in (_CUT_STEP, -_CUT_STEP, 2 * _CUT_STEP, -2 * _CUT_STEP)]
    a1 = (vals[0] + vals[1]) / 2
    a2 = (vals[2] + vals[3]) / 2
    return (4 * a1 - a2) / 3


# --------------------------------------------------------------------------
# strips


def strip_lower(mu, twice_d: int, m: int = 0) -> float:
    """Lower end of the rho-strip where the twisted integral converges at 0.

    The kernel starts like x^{2 mu} e^{i(2d) phi} plus the mirrored term
    x^{-2 mu} e^{-i(2d) phi}; against e^{i m phi} the angular integral adds
    x^{|m + 2d|} and x^{|m - 2d|} respectively.
    """
    a = complex(mu).real
    return max(-a - abs(m + twice_d) / 2, a - abs(m - twice_d) / 2)


def _check_strip(rho, pair: OrderPair, y, m: int = 0):
    r = complex(rho).real
    lower = strip_lower(pair.mu, pair.twice_d, m)
    upper = 1.0 if y > 2 else 0.5
    if not lower < r < upper:
        raise RangeError(
            f"Re rho = {r:g} outside ({lower:g}, {upper:g}) for this pair and y")


# --------------------------------------------------------------------------
# main identities


def rhs_prop32(rho, pair: OrderPair, u) -> complex:
    """E1/E2 expansion about u = 0 of the plane-wave integral, times 4^rho."""
    if pair.odd:
        raise ParityError("the E1/E2 expansion is stated for integer d")
    rho, u = complex(rho), complex(u)
    if u == 1:
        raise SingularityError("u = 1 is the singular point")
    mu, d = pair.mu, pair.twice_d // 2
    t1 = _prop32_B(rho, mu, d) * _gamma4(rho, mu, d, 0)
    t1 *= _E1(rho, mu + d, u) * _E1(rho, mu - d, u.conjugate())
    t2 = _prop32_B(rho, mu, d + 1) * _gamma4(rho, mu, d, 1) * 4 * abs(u)
    t2 *= _E2(rho, mu + d, u) * _E2(rho, mu - d, u.conjugate())
    return complex(t1 + t2)


def _g_factor(rho, nu, r, alpha, second, side):
    """(r e^{i alpha})^{-(rho +- nu)/2} F(e^{-i alpha} / r), arg taken literally.

    ``side`` (+1 or -1) picks the half plane of the argument of F when it
    falls on the branch cut.
    """
    s = -nu if second else nu
    power = cmath.exp(-(rho + s) / 2 * (math.log(r) + 1j * alpha))
    w = cmath.exp(-1j * alpha) / r
    if abs(w.imag) < 1e-300 and w.real > 1:
        w = complex(w.real, side * 1e-300)
    return power * _F(rho, s, w)


def prop32_lhs(rho, pair: OrderPair, u, lim: LimitPolicy = DEFAULT_LIMIT) -> complex:
    """Left side of the E1/E2 identity: the G1 G1 + G2 G2 combination.

    Uses arg u in (0, 2 pi) and arg conj(u) = -arg u. On the positive real
    axis the value is the limit from above and a BranchCutWarning is issued.
    """
    if pair.odd:
        raise ParityError("the E1/E2 identity is stated for integer d")
    rho, u = complex(rho), complex(u)
    if u == 0:
        raise SingularityError("u = 0 is a singular point of the G factors")
    alpha = cmath.phase(u) % TWO_PI
    if abs(u.imag) < 1e-8 and u.real > 0:
        warnings.warn("u on the positive real axis; one-sided limit", BranchCutWarning,
                      stacklevel=2)
        alpha = 0.0
    d, r = pair.d, abs(u)

    def value(mu):
        c1 = 4 ** -mu * _general_coeff(rho, mu, pair.twice_d)
        c2 = 4 ** mu * _general_coeff(rho, -mu, -pair.twice_d)
        g1 = _g_factor(rho, mu + d, r, alpha, False, -1) * _g_factor(rho, mu - d, r, -alpha, False, 1)
        g2 = _g_factor(rho, mu + d, r, alpha, True, -1) * _g_factor(rho, mu - d, r, -alpha, True, 1)
        return c1 * g1 + c2 * g2

    if _f_form_singular(pair.mu, pair.twice_d):
        val, _ = richardson_limit(value, complex(round(pair.mu.real)), lim)
        return complex(val)
    return complex(value(pair.mu))


def rhs_general_WS(rho, pair: OrderPair, target: TargetPoint,
                   lim: LimitPolicy = DEFAULT_LIMIT, check_strip: bool = True) -> complex:
    """Closed form of the plane-wave integral of the kernel times x^{2 rho - 1}.

    y >= 2 uses the F1/F2 product expansion in 1/u; y < 2 uses the E1/E2
    expansion about u = 0 (integer d) or the continued F1/F2 form (half
    integer d).
    """
    rho = complex(rho)
    if check_strip:
        _check_strip(rho, pair, target.y)
    u = target.u
    _check_u(u)
    if target.y >= 2 or pair.odd:
        if target.y == 0:
            raise RangeError("closed form needs y > 0 for half-integer d")
        return complex(_twisted(rho, pair, 0, "cos" if pair.odd else "sin", target, lim)
                       * (-1j if pair.odd else 1))
    return 4 ** -rho * rhs_prop32(rho, pair, u)


def rhs_cor13(rho, pair: OrderPair) -> complex:
    """Closed form at y = 2, theta = 0 as a product of gamma functions."""
    rho = complex(rho)
    _check_strip(rho, pair, 2.0)
    mu = pair.mu
    k = abs(pair.twice_d) / 2
    trig = "cos" if pair.odd else "sin"
    val = 2 / math.pi**3 * (8 * math.pi) ** (-2 * rho) * cmath.cos(math.pi * rho)
    val *= gamma(0.5 - rho) ** 2
    val *= gamma(rho + mu + k) * _trig_gamma(rho + mu, k, trig)
    val *= gamma(rho - mu + k) * _trig_gamma(rho - mu, k, trig)
    return complex(val)


def rhs_special_WS(pair: OrderPair, target: TargetPoint,
                   lim: LimitPolicy = DEFAULT_LIMIT) -> complex:
    """Closed form of the regularized kernel's integral against dx/x."""
    if not abs(pair.mu.real) < 0.5:
        raise RangeError("needs |Re mu| < 1/2")
    if not target.y > 0:
        raise RangeError("needs y > 0")
    z = target.z
    Y = y_factor(z)
    E = phase_factor(z)
    y, t, td = target.y, target.theta, pair.twice_d
    lY, ly = math.log(Y), math.log(y)

    def value(mu):
        a = cmath.exp(2 * mu * lY) * E**td
        b = cmath.exp(2 * mu * ly + 1j * td * t)
        return ((a - b) + (1 / a - 1 / b)) / ((td / 2) ** 2 - mu**2)

    if td == 0 and abs(pair.mu) < lim.radius:
        val, _ = richardson_limit(value, 0j, lim)
        return complex(val)
    return complex(value(pair.mu))


def rhs_lemma43(nu, m: int, target: TargetPoint) -> complex:
    """Plane-wave integral of x^{2 nu - 1} e^{i m phi}."""
    nu = complex(nu)
    m = int(m)
    if not -abs(m) / 2 < nu.real < 0.75:
        raise RangeError("needs -|m|/2 < Re nu < 3/4")
    if not target.y > 0:
        raise RangeError("needs y > 0")
    k = abs(m) / 2
    trig = "sin" if m % 2 == 0 else "cos"
    val = gamma(nu + k) * _trig_gamma(nu, k, trig)
    if m % 2:
        val *= 1j
    val /= (TWO_PI * target.y) ** (2 * nu)
    return complex(val * cmath.exp(-1j * m * target.theta))


def appendix_corollary(rho, pair: OrderPair, mode: AppendixMode) -> complex:
    """Twisted integral at y = 2, theta = 0 as a gamma product.

    This is the product expansion with Gauss values at u = 1. For odd m it
    carries sin(pi rho) where even m carries cos(pi rho). When
    Re rho + |m|/2 >= 1/2 it is the continuation in rho, not a convergent value.
    """
    rho = complex(rho)
    mu, m, td = pair.mu, mode.m, pair.twice_d
    a = m / 2 + td / 2
    b = m / 2 - td / 2
    trig = "sin" if mode.trig == "cos" else "cos"
    val = 2 / math.pi**3 * (8 * math.pi) ** (-2 * rho)
    val *= gamma(0.5 - rho - m / 2) * gamma(0.5 - rho + m / 2)
    val *= gamma(rho + mu + a) * _trig_gamma(rho + mu, a, trig)
    val *= gamma(rho - mu + b) * _trig_gamma(rho - mu, b, trig)
    if m % 2 == 0:
        val *= cmath.cos(math.pi * rho)
        if mode.trig == "cos" and pair.odd:
            val *= 1j * cmath.tan(math.pi * mu)
        elif mode.trig == "sin":
            val *= 1j if pair.odd else 1 / cmath.tan(math.pi * mu)
    else:
        val *= -cmath.sin(math.pi * rho)
        if mode.trig == "cos":
            val *= -1j
    return complex(val)


def rhs_appendix(rho, pair: OrderPair, mode: AppendixMode, target: TargetPoint,
                 lim: LimitPolicy = DEFAULT_LIMIT, strict: bool = False) -> complex:
    """Cos- or sin-weighted twisted integral of the kernel.

    A mode of the wrong parity has an odd integrand, so the value is 0; with
    ``strict`` it raises ParityError instead.
    """
    rho = complex(rho)
    if not mode.allowed(pair):
        if strict:
            raise ParityError("m + 2d parity does not match the trig choice")
        return 0j
    _check_strip(rho, pair, target.y, mode.m)
    if target.y == 2 and target.theta in (0.0, math.pi):
        if rho.real + abs(mode.m) / 2 >= 0.5:
            raise SingularityError("the twisted integral is unbounded at u = 1 here")
        sign = (-1) ** (mode.m + pair.twice_d) if target.theta else 1
        return sign * appendix_corollary(rho, pair, mode)
    # C pairs with the cos integral, D with the sin integral
    trig = "sin" if mode.trig == "cos" else "cos"
    return complex(_twisted(rho, pair, mode.m, trig, target, lim))


# --------------------------------------------------------------------------
# real-line formulas


REAL_LINE_KINDS = ("WS_J", "WS_J_general", "WS_K", "reg_D", "reg_M", "power")


def _ws_j(nu, y, sign):
    if y <= 2:
        return cmath.exp(sign * 1j * nu * math.asin(y / 2)) / nu
    return 2**nu * cmath.exp(sign * 0.5j * math.pi * nu) / (nu * (math.sqrt(y * y - 4) + y) ** nu)


def _reg_bracket(nu, y, sign, root):
    big = (y + root) ** nu / 2**nu
    return -(cmath.exp(-sign * 0.5j * math.pi * nu) * (big - y**nu)
             + cmath.exp(sign * 0.5j * math.pi * nu) * (1 / big - y**-nu)) / (
        nu * cmath.sin(math.pi * nu / 2))


def _reg_d(nu, y, sign):
    # (J - P) transforms for -nu and nu, valid for every y > 0
    def x(n):
        return _ws_j(n, y, sign) - cmath.exp(sign * 0.5j * math.pi * n) * y**-n / n
    return (x(-nu) - x(nu)) / cmath.sin(math.pi * nu / 2)


def rhs_real_line(kind: str, nu, y, sign: int = 1, rho=None,
                  lim: LimitPolicy = DEFAULT_LIMIT) -> complex:
    """Fourier integrals on the half line, with e(+-xy) chosen by ``sign``.

    WS_J: J_nu(4 pi x)/x. WS_J_general: J_nu(4 pi x) x^{rho-1}, y > 2.
    WS_K: K_nu(4 pi x) x^{rho-1}. reg_D / reg_M: the regularized kernels
    against dx/x. power: x^{nu-1}.
    """
    nu = complex(nu)
    y = float(y)
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if kind not in REAL_LINE_KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    if y < 0:
        raise RangeError("y must be >= 0")

    if kind == "WS_J":
        if not nu.real > 0:
            raise RangeError("WS_J needs Re nu > 0")
        return complex(_ws_j(nu, y, sign))

    if kind == "power":
        if not 0 < nu.real < 1 or y == 0:
            raise RangeError("power needs 0 < Re nu < 1 and y > 0")
        return complex(gamma(nu) * cmath.exp(sign * 0.5j * math.pi * nu) * (TWO_PI * y) ** -nu)

    if kind == "WS_J_general":
        rho = complex(rho)
        if not (y > 2 and 0 < rho.real < 1.5 and (rho + nu).real > 0):
            raise RangeError("WS_J_general needs y > 2, 0 < Re rho < 3/2, Re(rho + nu) > 0")
        s = rho + nu
        val = gamma(s) * cmath.exp(sign * 0.5j * math.pi * s) * rgamma(1 + nu)
        val /= TWO_PI**rho * y**s
        return complex(val * _F(rho, nu, 4 / y**2))

    if kind == "WS_K":
        rho = complex(rho)
        if not (y > 0 and rho.real > abs(nu.real)):
            raise RangeError("WS_K needs y > 0 and Re rho > |Re nu|")

        def k_value(n):
            w = -4 / y**2
            out = 0j
            for s, sgn in ((-1, 1), (1, -1)):
                e = rho + s * n
                out += sgn * gamma(e) * cmath.exp(sign * 0.5j * math.pi * e) * rgamma(1 + s * n) \
                    * y**-e * _F(rho, s * n, w)
            return math.pi / (2 * TWO_PI**rho * cmath.sin(math.pi * n)) * out

        return _maybe_limit(k_value, nu, lambda n: abs(n - round(n.real)), lim)

    # reg_D, reg_M
    if not abs(nu.real) < 1 or y == 0:
        raise RangeError(f"{kind} needs |Re nu| < 1 and y > 0")
    if kind == "reg_D":
        f = lambda n: _reg_d(n, y, sign)  # noqa: E731
    else:
        root = math.sqrt(y * y + 4)
        f = lambda n: _reg_bracket(n, y, sign, root)  # noqa: E731
    return _maybe_limit(f, nu, abs, lim)


def _maybe_limit(f, nu, distance, lim):
    if distance(nu) < lim.radius:
        centre = complex(round(nu.real), 0)
        val, _ = richardson_limit(f, centre, lim)
        return complex(val)
    return complex(f(nu))


# --------------------------------------------------------------------------
# differential equations


def _two_variable(rho, pair: OrderPair, u0):
    """f(u, v) whose restriction v = conj(u) is the closed form near u0.

    Powers of u and v are continued from u0 so that the stencil never
    crosses a branch cut.
    """
    mu, d, td = pair.mu, pair.d, pair.twice_d
    lu0 = cmath.log(u0)
    lv0 = lu0.conjugate()

    def logs(u, v):
        return lu0 + cmath.log(u / u0), lv0 + cmath.log(v / u0.conjugate())

    if abs(u0) >= 1:
        c1 = 4 ** -mu * _general_coeff(rho, mu, td)
        c2 = 4 ** mu * _general_coeff(rho, -mu, -td)

        def f(u, v):
            lu, lv = logs(u, v)
            g1 = cmath.exp(-(rho + mu + d) / 2 * lu - (rho + mu - d) / 2 * lv)
            g1 *= _F(rho, mu + d, 1 / u) * _F(rho, mu - d, 1 / v)
            g2 = cmath.exp(-(rho - mu - d) / 2 * lu - (rho - mu + d) / 2 * lv)
            g2 *= _F(rho, -mu - d, 1 / u) * _F(rho, -mu + d, 1 / v)
            return 4 ** -rho * (c1 * g1 + c2 * g2)
        return f

    k = td // 2
    b1 = _prop32_B(rho, mu, k) * _gamma4(rho, mu, k, 0)
    b2 = _prop32_B(rho, mu, k + 1) * _gamma4(rho, mu, k, 1)

    def f(u, v):
        lu, lv = logs(u, v)
        root = cmath.exp((lu + lv) / 2)
        val = b1 * _E1(rho, mu + d, u) * _E1(rho, mu - d, v)
        val += b2 * 4 * root * _E2(rho, mu + d, u) * _E2(rho, mu - d, v)
        return 4 ** -rho * val
    return f


def _derivatives(g, x, h):
    f = [g(x + j * h) for j in (-2, -1, 0, 1, 2)]
    d1 = (f[0] - 8 * f[1] + 8 * f[3] - f[4]) / (12 * h)
    d2 = (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h)
    return f[2], d1, d2


def ode_residual(rho, pair: OrderPair, u, h_step: float = 1e-3,
                 operator: str = "both") -> float:
    """Relative residual of the hypergeometric operators on the closed form.

    ``operator`` selects the holomorphic one (order mu + d, acting on u),
    the conjugate one (order mu - d, acting on conj u) or the larger of both.
    """
    if not 1e-5 <= h_step <= 1e-2:
        raise ValueError("h_step must lie in [1e-5, 1e-2]")
    if pair.odd:
        raise ParityError("the differential equations are stated for integer d")
    if _f_form_singular(pair.mu, pair.twice_d):
        raise SingularityError("mu on the singular set of the product expansion")
    rho, u = complex(rho), complex(u)
    h = h_step * abs(u)
    if abs(u) < 1e-6 or abs(u - 1) < max(10 * h, 1e-4) or abs(abs(u) - 1) < 4 * h:
        raise SingularityError("u too close to a singular point or the |u| = 1 seam")
    f = _two_variable(rho, pair, u)
    v = u.conjugate()
    out = []
    if operator in ("both", "holomorphic"):
        val, d1, d2 = _derivatives(lambda s: f(s, v), u, h)
        nu = pair.mu + pair.d
        r = 4 * u * (1 - u) * d2 + 2 * (1 - 2 * (rho + 1) * u) * d1 - (rho**2 - nu**2) * val
        out.append(abs(r) / abs(val))
    if operator in ("both", "conjugate"):
        val, d1, d2 = _derivatives(lambda s: f(u, s), v, h)
        nu = pair.mu - pair.d
        r = 4 * v * (1 - v) * d2 + 2 * (1 - 2 * (rho + 1) * v) * d1 - (rho**2 - nu**2) * val
        out.append(abs(r) / abs(val))
    if not out:
        raise ValueError(f"unknown operator {operator!r}")
    return float(max(out))


__all__ = [
    "TargetPoint", "AppendixMode", "BranchCutWarning", "coeff_C", "rhs_general_WS",
    "rhs_prop32", "prop32_lhs", "rhs_cor13", "rhs_special_WS", "rhs_lemma43",
    "rhs_appendix", "appendix_corollary", "rhs_real_line", "ode_residual",
    "REAL_LINE_KINDS", "strip_lower",
]
