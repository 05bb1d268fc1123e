"""Corner function of the polygon heat-content expansion and its relatives.

    phi(theta)  = int_0^inf sinh((pi - theta) xi) / (sinh(pi xi) cosh(theta xi)) dxi
    psi(theta)  = cot(theta / 2)

Pole-removed forms on the rescaled variable x = theta / pi in (0, 1):

    phi_tilde(x) = phi(pi x) - log 2 / (pi x) = -(1/pi) int_0^inf y I(xy) csch^2(y) dy
    psi_tilde(x) = psi(pi x) - 2 / (pi x)

with I(x) = log(cosh x) / x.
"""

from __future__ import annotations

import math

import numpy as np

from . import kernels
from .errors import DomainError
from .quadrature import DEFAULT_CONFIG, FnEval, QuadratureConfig, integrate_semi_infinite

LOG2 = math.log(2.0)
THETA_FLOOR = 1e-8
TAYLOR_SWITCH = 0.1

# Bound 4/(1 - e^{-2})^2 on csch^2(y) e^{2y} for y >= 1; tails start at y >= 1.
_CSCH2_SCALE = 4.0 / (1.0 - math.exp(-2.0)) ** 2
# Bound on 2/((1 - e^{-2 pi xi})(1 + e^{-2 theta xi})) for xi >= 1.
_PHI_SCALE = 2.0 / (1.0 - math.exp(-2.0 * math.pi))


def _check_angle(theta: float, floor: float = THETA_FLOOR) -> float:
    theta = float(theta)
    if not (0.0 < theta < math.pi):
        raise DomainError(f"angle {theta!r} outside (0, pi)")
    if theta < floor:
        raise DomainError(f"angle {theta!r} below the floor {floor:g}")
    return theta


def _check_unit(x: float, floor: float = THETA_FLOOR / math.pi) -> float:
    x = float(x)
    if not (0.0 < x < 1.0):
        raise DomainError(f"argument {x!r} outside (0, 1)")
    if x < floor:
        raise DomainError(f"argument {x!r} below the floor {floor:g}")
    return x


def phi(theta: float, cfg: QuadratureConfig = DEFAULT_CONFIG,
        theta_floor: float = THETA_FLOOR) -> FnEval:
    """Corner function phi(theta) for an interior angle theta in (0, pi).

    The integrand decays like 2 exp(-2 theta xi); phi blows up like log 2 / theta as
    theta -> 0, so angles below ``theta_floor`` are refused.
    """
    theta = _check_angle(theta, theta_floor)
    return integrate_semi_infinite(
        None, 2.0 * theta, cfg, scale=_PHI_SCALE,
        panel=lambda a, b: kernels.phi_panel(theta, a, b))


def phi_sum_raw(angles, cfg: QuadratureConfig = DEFAULT_CONFIG) -> FnEval:
    """Sum of phi over any list of interior angles (polygon corner sum)."""
    total = FnEval(0.0, 0.0)
    for a in angles:
        total = total + phi(a, cfg)
    return total


def psi(x):
    """cot(x / 2); accepts scalars or arrays in (0, pi)."""
    arr = np.asarray(x, dtype=float)
    if np.any(~((arr > 0) & (arr < math.pi))):
        raise DomainError("psi is defined on (0, pi)")
    out = 1.0 / np.tan(0.5 * arr)
    return float(out) if out.ndim == 0 else out


def psi_deriv(x, order: int = 1):
    """Closed-form derivatives of cot(x/2): orders 1 and 2."""
    arr = np.asarray(x, dtype=float)
    c = 1.0 / np.tan(0.5 * arr)
    s2 = 1.0 + c * c  # csc^2(x/2)
    if order == 1:
        out = -0.5 * s2
    elif order == 2:
        out = 0.5 * s2 * c
    else:
        raise ValueError("order must be 1 or 2")
    return float(out) if out.ndim == 0 else out


def _coth_integrand(x):
    def f(y):
        y = np.asarray(y, dtype=float)
        # tanh(y) - tanh(xy) = 2 e^{-2xy} (1 - e^{-2(1-x)y}) / ((1 + e^{-2y})(1 + e^{-2xy}))
        exy = np.exp(-2.0 * x * y)
        ey = np.exp(-2.0 * y)
        diff = 2.0 * exy * -np.expm1(-2.0 * (1.0 - x) * y) / ((1.0 + ey) * (1.0 + exy))
        with np.errstate(divide="ignore", invalid="ignore"):
            coth = (1.0 + ey) / -np.expm1(-2.0 * y)
            out = coth * diff
        return np.where(y == 0.0, 1.0 - x, out)
    return f


def phi_variant_coth_form(x: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> FnEval:
    """phi(pi x) via (1/pi) int_0^inf coth(y) [tanh(y) - tanh(xy)] dy."""
    x = _check_unit(x)
    # For y >= 1 the integrand is at most 2 coth(1) exp(-2xy).
    r = integrate_semi_infinite(_coth_integrand(x), 2.0 * x, cfg,
                                scale=2.0 / math.tanh(1.0))
    return FnEval(r.value / math.pi, r.error_estimate / math.pi)


def log_cosh(x):
    """log(cosh x) to full relative precision, without overflow, for arrays."""
    ax = np.abs(np.asarray(x, dtype=float))
    big = ax + np.log1p(np.exp(-2.0 * ax)) - LOG2
    # cosh x - 1 = 2 sinh^2(x/2) keeps small arguments free of cancellation.
    small = np.log1p(2.0 * np.sinh(0.5 * ax) ** 2)
    return np.where(ax < 1.0, small, big)


def _sech2(ax):
    e = np.exp(-2.0 * ax)
    return 4.0 * e / (1.0 + e) ** 2


def _csch2(y):
    with np.errstate(divide="ignore"):
        return 4.0 * np.exp(-2.0 * y) / np.expm1(-2.0 * y) ** 2


# log(cosh x) = sum_n LOG_COSH_TAYLOR[n-1] x^(2n); exact rational coefficients.
LOG_COSH_TAYLOR = (1 / 2, -1 / 12, 1 / 45, -17 / 2520, 31 / 14175, -691 / 935550,
                   10922 / 42567525, -929569 / 10216206000, 3202291 / 97692469875)


def _I_series(x, order: int):
    # I(x) = sum_n a_n x^(2n-1); differentiate term by term.
    total = np.zeros_like(x)
    for n in range(len(LOG_COSH_TAYLOR), 0, -1):
        p = 2 * n - 1
        if p < order:
            continue
        c = LOG_COSH_TAYLOR[n - 1] * math.perm(p, order)
        total = total + c * x ** (p - order)
    return total


def I_deriv(x, order: int = 0):
    """I(x) = log(cosh x)/x and its derivatives of order 1, 2, 3 (x >= 0).

    Closed forms for x >= TAYLOR_SWITCH, a degree-17 Taylor polynomial below, where the
    closed forms cancel.  At x = 0 the continuous extension is returned.
    """
    if order not in (0, 1, 2, 3):
        raise ValueError("order must be 0, 1, 2 or 3")
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise DomainError("I is evaluated for x >= 0 only")
    small = arr < TAYLOR_SWITCH
    xs = np.where(small, arr, 0.0)
    xl = np.where(small, 1.0, arr)
    series = _I_series(xs, order)
    L = log_cosh(xl)
    T = np.tanh(xl)
    S = _sech2(xl)
    if order == 0:
        closed = L / xl
    elif order == 1:
        closed = T / xl - L / xl ** 2
    elif order == 2:
        closed = S / xl + 2.0 * (L - xl * T) / xl ** 3
    else:
        closed = (6.0 * (xl * T - L) - 3.0 * xl ** 2 * S - 2.0 * xl ** 3 * T * S) / xl ** 4
    out = np.where(small, series, closed)
    return float(out) if out.ndim == 0 else out


def phi_tilde_deriv(x: float, order: int = 0, cfg: QuadratureConfig = DEFAULT_CONFIG) -> FnEval:
    """k-th derivative of phi_tilde by differentiating under the integral sign:

        phi_tilde^(k)(x) = -(1/pi) int_0^inf y^(k+1) I^(k)(xy) csch^2(y) dy.
    """
    x = float(x)
    if not (0.0 < x < 1.0):
        raise DomainError(f"argument {x!r} outside (0, 1)")
    if order not in (0, 1, 2, 3):
        raise ValueError("order must be 0, 1, 2 or 3")

    def f(y):
        y = np.asarray(y, dtype=float)
        with np.errstate(invalid="ignore"):
            out = y ** (order + 1) * I_deriv(x * y, order) * _csch2(y)
        # y -> 0 limit: y^(k+1) I^(k)(xy) / y^2; only k = 1 survives (I'(0) = 1/2).
        lim = 0.5 if order == 1 else 0.0
        return np.where(y == 0.0, lim, out)

    # |I^(k)| <= 1/2 on [0, inf) for k = 1..3 and 0 <= I <= 1, so the weight is <= y^(k+1).
    r = integrate_semi_infinite(f, 2.0, cfg, scale=_CSCH2_SCALE, power=max(1, order + 1))
    return FnEval(-r.value / math.pi, r.error_estimate / math.pi)


def phi_tilde(x: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> FnEval:
    """phi(pi x) - log 2 / (pi x), evaluated through its pole-free integral."""
    return phi_tilde_deriv(x, 0, cfg)


def psi_tilde(x):
    """cot(pi x / 2) - 2 / (pi x)."""
    arr = np.asarray(x, dtype=float)
    out = 1.0 / np.tan(0.5 * math.pi * arr) - 2.0 / (math.pi * arr)
    return float(out) if out.ndim == 0 else out


_SERIES_TERMS = 64


def _paired_power_sum(x: float, m: int) -> float:
    """sum_{k != 0} 1/(2k + x)^m, pairing k with -k, with Euler-Maclaurin remainder.

    Terms k = 1..N-1 are summed directly; the remainder sum_{k >= N} g(k) for each
    branch g(k) = (2k +- x)^(-m) is int_N^inf g + g(N)/2 - g'(N)/12 + g'''(N)/720,
    whose neglected term is O(N^(-m-5)).
    """
    n = _SERIES_TERMS
    k = np.arange(n - 1, 0, -1, dtype=float)  # summed small-to-large in magnitude
    direct = np.sum(1.0 / (2.0 * k + x) ** m + 1.0 / (x - 2.0 * k) ** m)
    total = direct
    for sign in (1.0, -1.0):
        # Branch k -> (2k + sign x)^-m for k >= N; for negative k, (x - 2k)^-m = (-1)^m (2k - x)^-m.
        a = 2.0 * n + sign * x
        par = 1.0 if sign > 0 else (-1.0) ** m
        integral = a ** (1 - m) / (2.0 * (m - 1))
        g0 = a ** -m
        g1 = -2.0 * m * a ** (-m - 1)
        g3 = -8.0 * m * (m + 1) * (m + 2) * a ** (-m - 3)
        total += par * (integral + 0.5 * g0 - g1 / 12.0 + g3 / 720.0)
    return float(total)


def psi_tilde_deriv(x: float, order: int = 1) -> float:
    """Derivatives of psi_tilde from the csc^2 partial-fraction expansion.

    order 1: -(2/pi)  sum_{k!=0} (2k+x)^-2
    order 2:  (4/pi)  sum_{k!=0} (2k+x)^-3
    order 3: -(12/pi) sum_{k!=0} (2k+x)^-4
    """
    x = float(x)
    if not (0.0 < x < 1.0):
        raise DomainError(f"argument {x!r} outside (0, 1)")
    if order == 1:
        return -2.0 / math.pi * _paired_power_sum(x, 2)
    if order == 2:
        return 4.0 / math.pi * _paired_power_sum(x, 3)
    if order == 3:
        return -12.0 / math.pi * _paired_power_sum(x, 4)
    raise ValueError("order must be 1, 2 or 3")


def phi_deriv(theta: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> FnEval:
    """phi'(theta) = (1/pi) [phi_tilde'(theta/pi) - log 2 / (pi x^2)], x = theta/pi."""
    x = _check_angle(theta) / math.pi
    d = phi_tilde_deriv(x, 1, cfg)
    return FnEval((d.value - LOG2 / (math.pi * x * x)) / math.pi, d.error_estimate / math.pi)


def zeta_direct(s: float, terms: int = 2000) -> float:
    """Riemann zeta for s > 1 by direct summation plus Euler-Maclaurin tail."""
    if not s > 1:
        raise DomainError("zeta_direct needs s > 1")
    k = np.arange(terms - 1, 0, -1, dtype=float)
    n = float(terms)
    head = math.fsum(k ** -s)
    tail = n ** (1 - s) / (s - 1) + 0.5 * n ** -s + s * n ** (-s - 1) / 12.0 \
        - s * (s + 1) * (s + 2) * n ** (-s - 3) / 720.0
    return head + tail


def integrate_csch2(weight, cfg: QuadratureConfig = DEFAULT_CONFIG, *, power: float = 1.0,
                    limit0: float = 0.0) -> FnEval:
    """int_0^inf weight(y) csch^2(y) dy for weights growing at most like y^power.

    ``limit0`` is the y -> 0 limit of weight(y) csch^2(y).
    """
    def f(y):
        y = np.asarray(y, dtype=float)
        with np.errstate(invalid="ignore"):
            out = weight(y) * _csch2(y)
        return np.where(y == 0.0, limit0, out)
    return integrate_semi_infinite(f, 2.0, cfg, scale=_CSCH2_SCALE, power=power)
