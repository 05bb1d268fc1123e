"""Separable series solution on a rectangle, used as an exact oracle."""

import math

from scipy.special import erfcx

from ..errors import DomainError


def _h1(L: float, t: float, n_terms: int):
    """sum over odd n <= n_terms of 8L/(n pi)^2 exp(-(n pi / L)^2 t), plus a tail bound."""
    total = 0.0
    for n in range(n_terms if n_terms % 2 else n_terms - 1, 0, -2):
        total += 8.0 * L / (n * math.pi) ** 2 * math.exp(-(n * math.pi / L) ** 2 * t)
    # Omitted terms: n >= N+2 odd, each below 8L/(n pi)^2 e^{-(N+2)^2 pi^2 t / L^2};
    # sum_{odd n >= m} 1/n^2 <= 1/(2(m-2)) + 1/m^2 bounds the coefficient sum.
    m = (n_terms + 2) if n_terms % 2 else (n_terms + 1)
    coef = 8.0 * L / math.pi ** 2 * (1.0 / (2.0 * (m - 2)) + 1.0 / m ** 2)
    return total, coef * math.exp(-(m * math.pi / L) ** 2 * t)


def rectangle_series_oracle(a: float, b: float, t: float, n_terms: int = 2001, *,
                            with_bound: bool = False):
    """Heat content of the a x b rectangle: product of the 1D cosine-series factors.

    ``with_bound=True`` also returns a bound on the truncation error.
    """
    if not (a > 0 and b > 0 and t > 0):
        raise DomainError("need a, b, t > 0")
    if n_terms < 1:
        raise DomainError("n_terms must be at least 1")
    ha, ea = _h1(a, t, n_terms)
    hb, eb = _h1(b, t, n_terms)
    value = ha * hb
    bound = ea * hb + eb * ha + ea * eb
    return (value, bound) if with_bound else value


# -- exponentially small remainder, evaluated without cancellation -----------------------
#
# By images, the interval [0, L] has
#     h_L(t) = L - 4 sqrt(t/pi) + R_L(t),  R_L(t) = 8 sqrt(t) sum_{n>=1} (-1)^(n+1) ierfc(n L / (2 sqrt t)),
# with ierfc(x) = int_x^inf erfc.  The rectangle remainder over the three-term expansion
# is then p_a R_b + p_b R_a + R_a R_b with p_L = L - 4 sqrt(t/pi).

_ASYM_SWITCH = 30.0


def log_ierfc(x: float) -> float:
    """log of ierfc(x) = exp(-x^2)/sqrt(pi) - x erfc(x) for x >= 0, without underflow."""
    if x < 0:
        raise DomainError("log_ierfc needs x >= 0")
    if x < _ASYM_SWITCH:
        return -x * x + math.log(1.0 / math.sqrt(math.pi) - x * erfcx(x))
    # 1/sqrt(pi) - x erfcx(x) = (1/sqrt(pi)) sum_{m>=1} (-1)^(m+1) (2m-1)!! / (2^m x^(2m))
    z = 1.0 / (2.0 * x * x)
    total, term = 0.0, 1.0
    for m in range(1, 8):
        term *= (2 * m - 1) * z if m > 1 else z
        total += term if m % 2 else -term
    return -x * x + math.log(total / math.sqrt(math.pi))


def log_interval_remainder(L: float, t: float, n_images: int = 8) -> float:
    """log R_L(t); R_L is positive because the image terms alternate and decrease."""
    s = L / (2.0 * math.sqrt(t))
    lead = log_ierfc(s)
    rel = 0.0
    for n in range(2, n_images + 1):
        rel += (-1) ** (n + 1) * math.exp(log_ierfc(n * s) - lead)
    return math.log(8.0 * math.sqrt(t)) + lead + math.log1p(rel)


def log_rectangle_remainder(a: float, b: float, t: float) -> float:
    """log of (exact rectangle heat content - three-term small-time expansion)."""
    if not (a > 0 and b > 0 and t > 0):
        raise DomainError("need a, b, t > 0")
    ra, rb = log_interval_remainder(a, t), log_interval_remainder(b, t)
    pa = a - 4.0 * math.sqrt(t / math.pi)
    pb = b - 4.0 * math.sqrt(t / math.pi)
    if pa <= 0 or pb <= 0:
        raise DomainError("t too large for the remainder representation")
    # p_a R_b + p_b R_a + R_a R_b, factored around the larger term.
    terms = [math.log(pa) + rb, math.log(pb) + ra, ra + rb]
    top = max(terms)
    return top + math.log(math.fsum(math.exp(x - top) for x in terms))
