"""Pure-numpy implementations of the hot kernels.

These mirror ``_ckernels.pyx`` function for function and are used when the compiled
extension is unavailable (or ``TRIHEAT_PURE_PYTHON=1``).  The random streams are
identical; floating-point results may differ from the compiled ones in the last ulp
because numpy's transcendental functions are not libm's.
"""

import math

import numpy as np

from .quadrature import GAUSS_WEIGHTS, KRONROD_WEIGHTS, NODES, panel_error

BACKEND = "python"

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_TWO_M53 = 2.0 ** -53
# exp(-x) below the smallest uniform (2**-54) for x > 37.5; bridge test can be skipped.
BRIDGE_SKIP = 37.5
WORDS_PER_STEP = 3


def phi_integrand(theta, xi):
    """sinh((pi-theta) xi) / (sinh(pi xi) cosh(theta xi)) in overflow-free form."""
    xi = np.asarray(xi, dtype=float)
    e = np.exp(-2.0 * theta * xi)
    num = 2.0 * e * -np.expm1(-2.0 * (math.pi - theta) * xi)
    den = -np.expm1(-2.0 * math.pi * xi) * (1.0 + e)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = num / den
    return np.where(xi == 0.0, (math.pi - theta) / math.pi, out)


def phi_panel(theta, a, b):
    """21-point Gauss-Kronrod panel of the corner-function integrand on [a, b]."""
    half = 0.5 * (b - a)
    fx = phi_integrand(theta, 0.5 * (a + b) + half * NODES)
    resk = float(KRONROD_WEIGHTS @ fx)
    resg = float(GAUSS_WEIGHTS @ fx)
    resabs = float(KRONROD_WEIGHTS @ np.abs(fx))
    resasc = float(KRONROD_WEIGHTS @ np.abs(fx - 0.5 * resk))
    ah = abs(half)
    return resk * half, panel_error(resk * ah, resg * ah, resabs * ah, resasc * ah)


def mix64(z):
    """SplitMix64 finaliser on uint64 arrays (wrapping arithmetic)."""
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> _S30)) * _M1
        z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def stream_key(seed, tag, index):
    """Key of the substream ``(seed, tag, index)``; independent of evaluation order."""
    seed = np.uint64(seed)
    tag = np.uint64(tag)
    index = np.asarray(index, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64(mix64(seed + tag * _GOLDEN) ^ (index * _GOLDEN + np.uint64(1)))


def counter_word(key, counter):
    """Word number ``counter`` of the stream ``key``."""
    key = np.asarray(key, dtype=np.uint64)
    counter = np.asarray(counter, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64(key + (counter + np.uint64(1)) * _GOLDEN)


def counter_uniform(key, counter):
    """Uniform double in the open interval (0, 1)."""
    w = counter_word(key, counter)
    return ((w >> _S11).astype(np.float64) + 0.5) * _TWO_M53


def _outside(x, y, planes, disk):
    out = np.zeros(x.shape, dtype=bool)
    for nx, ny, c in planes:
        out |= nx * x + ny * y >= c
    if disk[2] > 0:
        out |= (x - disk[0]) ** 2 + (y - disk[1]) ** 2 >= disk[2] ** 2
    return out


def _distances(x, y, planes, disk):
    cols = [c - (nx * x + ny * y) for nx, ny, c in planes]
    if disk[2] > 0:
        cols.append(disk[2] - np.hypot(x - disk[0], y - disk[1]))
    return cols


def exit_steps(x0, y0, keys, dt, max_steps, planes, disk, bridge=True):
    """Step index at which each path first leaves the domain.

    The domain is the intersection of half-planes ``nx*x + ny*y < c`` (rows of
    ``planes``) and, if ``disk[2] > 0``, the open disk with centre ``disk[:2]`` and
    radius ``disk[2]``.  Increments are N(0, 2 dt) per coordinate (generator Laplacian).
    With ``bridge`` the probability that the Brownian bridge crossed a boundary within
    a step is sampled from the half-plane formula exp(-d0 d1 / dt).  Paths still inside
    after ``max_steps`` steps get ``max_steps + 1``.
    """
    planes = np.asarray(planes, dtype=float).reshape(-1, 3)
    disk = np.asarray(disk, dtype=float)
    x = np.array(x0, dtype=float)
    y = np.array(y0, dtype=float)
    keys = np.asarray(keys, dtype=np.uint64)
    n = x.size
    steps = np.full(n, max_steps + 1, dtype=np.int64)
    alive = np.arange(n)
    sigma = math.sqrt(2.0 * dt)
    two_pi = 2.0 * math.pi
    for k in range(1, max_steps + 1):
        if alive.size == 0:
            break
        kk = keys[alive]
        base = np.uint64(WORDS_PER_STEP * k)
        u1 = counter_uniform(kk, base)
        u2 = counter_uniform(kk, base + np.uint64(1))
        r = sigma * np.sqrt(-2.0 * np.log(u1))
        xa, ya = x[alive], y[alive]
        xn = xa + r * np.cos(two_pi * u2)
        yn = ya + r * np.sin(two_pi * u2)
        gone = _outside(xn, yn, planes, disk)
        if bridge:
            d0 = _distances(xa, ya, planes, disk)
            d1 = _distances(xn, yn, planes, disk)
            survive = np.ones(alive.size)
            near = np.zeros(alive.size, dtype=bool)
            for a0, a1 in zip(d0, d1):
                q = a0 * a1 / dt
                close = (q < BRIDGE_SKIP) & ~gone
                near |= close
                survive = np.where(close, survive * -np.expm1(-np.where(close, q, 0.0)), survive)
            if near.any():
                u3 = counter_uniform(kk, base + np.uint64(2))
                gone |= near & (u3 < 1.0 - survive)
        steps[alive[gone]] = k
        keep = ~gone
        x[alive] = xn
        y[alive] = yn
        alive = alive[keep]
    return steps
