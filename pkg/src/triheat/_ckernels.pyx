# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; same contracts as :mod:`triheat._pykernels`."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, expm1, log, sqrt, cos, sin, fabs, hypot, fmin, fmax, pow, M_PI
from libc.stdint cimport uint64_t, int64_t

cnp.import_array()

BACKEND = "cython"

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef double TWO_M53 = 1.1102230246251565e-16
cdef double BRIDGE_SKIP = 37.5
cdef int WORDS_PER_STEP = 3
cdef double EPS50 = 50.0 * 2.220446049250313e-16
cdef double TINY = 2.2250738585072014e-308

cdef double XGK[11]
cdef double WGK[11]
cdef double WG[5]
XGK[:] = [0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
          0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
          0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
          0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
          0.294392862701460198131126603103866, 0.148874338981631210884826001129720, 0.0]
WGK[:] = [0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
          0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
          0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
          0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
          0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
          0.149445554002916905664936468389821]
WG[:] = [0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
         0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
         0.295524224714752870173892994651338]


cdef inline double _phi_f(double theta, double xi) nogil:
    cdef double e
    if xi == 0.0:
        return (M_PI - theta) / M_PI
    e = exp(-2.0 * theta * xi)
    return 2.0 * e * -expm1(-2.0 * (M_PI - theta) * xi) / (-expm1(-2.0 * M_PI * xi) * (1.0 + e))


def phi_integrand(double theta, xi):
    cdef cnp.ndarray[double, ndim=1] arr = np.ascontiguousarray(np.atleast_1d(xi), dtype=float)
    cdef cnp.ndarray[double, ndim=1] out = np.empty_like(arr)
    cdef Py_ssize_t i
    for i in range(arr.shape[0]):
        out[i] = _phi_f(theta, arr[i])
    if np.ndim(xi) == 0:
        return float(out[0])
    return out.reshape(np.shape(xi))


cdef inline double _panel_error(double resk, double resg, double resabs, double resasc) nogil:
    cdef double err = fabs(resk - resg)
    if resasc != 0.0 and err != 0.0:
        err = resasc * fmin(1.0, pow(200.0 * err / resasc, 1.5))
    if resabs > TINY / EPS50:
        err = fmax(EPS50 * resabs, err)
    return err


def phi_panel(double theta, double a, double b):
    cdef double half = 0.5 * (b - a)
    cdef double center = 0.5 * (a + b)
    cdef double fv[21]
    cdef double resk = 0.0, resg = 0.0, resabs = 0.0, resasc = 0.0, ah
    cdef int j
    # Node order matches the numpy rule: -x0 .. -x9, 0, x9 .. x0.
    for j in range(10):
        fv[j] = _phi_f(theta, center - half * XGK[j])
        fv[20 - j] = _phi_f(theta, center + half * XGK[j])
    fv[10] = _phi_f(theta, center)
    for j in range(21):
        resk += (WGK[j] if j < 11 else WGK[20 - j]) * fv[j]
    for j in range(5):
        resg += WG[j] * (fv[2 * j + 1] + fv[19 - 2 * j])
    for j in range(21):
        resabs += (WGK[j] if j < 11 else WGK[20 - j]) * fabs(fv[j])
        resasc += (WGK[j] if j < 11 else WGK[20 - j]) * fabs(fv[j] - 0.5 * resk)
    ah = fabs(half)
    return resk * half, _panel_error(resk * ah, resg * ah, resabs * ah, resasc * ah)


cdef inline uint64_t _mix64(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline double _uniform(uint64_t key, uint64_t counter) nogil:
    cdef uint64_t w = _mix64(key + (counter + 1) * GOLDEN)
    return (<double>(w >> 11) + 0.5) * TWO_M53


def counter_uniform(key, counter):
    k = np.asarray(key, dtype=np.uint64)
    c = np.asarray(counter, dtype=np.uint64)
    kb, cb = np.broadcast_arrays(k, c)
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] kf = np.ascontiguousarray(kb.ravel())
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] cf = np.ascontiguousarray(cb.ravel())
    cdef cnp.ndarray[double, ndim=1] out = np.empty(kf.shape[0])
    cdef Py_ssize_t i
    for i in range(kf.shape[0]):
        out[i] = _uniform(kf[i], cf[i])
    return out.reshape(kb.shape)


def exit_steps(x0, y0, keys, double dt, long max_steps, planes, disk, bint bridge=True):
    cdef cnp.ndarray[double, ndim=1] xs = np.ascontiguousarray(x0, dtype=float).ravel()
    cdef cnp.ndarray[double, ndim=1] ys = np.ascontiguousarray(y0, dtype=float).ravel()
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] ks = np.ascontiguousarray(keys, dtype=np.uint64).ravel()
    cdef cnp.ndarray[double, ndim=2] pl = np.ascontiguousarray(
        np.asarray(planes, dtype=float).reshape(-1, 3))
    cdef cnp.ndarray[double, ndim=1] dk = np.ascontiguousarray(disk, dtype=float)
    cdef Py_ssize_t n = xs.shape[0], m = pl.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] steps = np.full(n, max_steps + 1, dtype=np.int64)
    cdef double[:, ::1] P = pl
    cdef double[::1] X = xs, Y = ys
    cdef uint64_t[::1] K = ks
    cdef int64_t[::1] S = steps
    cdef double cx = dk[0], cy = dk[1], R = dk[2]
    cdef bint has_disk = R > 0
    cdef double sigma = sqrt(2.0 * dt), two_pi = 2.0 * M_PI
    cdef double x, y, xn, yn, r, u1, u2, u3, a0, a1, q, survive
    cdef bint gone, near
    cdef Py_ssize_t i, e
    cdef long k
    cdef uint64_t key, base
    with nogil:
        for i in range(n):
            x = X[i]
            y = Y[i]
            key = K[i]
            for k in range(1, max_steps + 1):
                base = <uint64_t>(WORDS_PER_STEP * k)
                u1 = _uniform(key, base)
                u2 = _uniform(key, base + 1)
                r = sigma * sqrt(-2.0 * log(u1))
                xn = x + r * cos(two_pi * u2)
                yn = y + r * sin(two_pi * u2)
                gone = False
                for e in range(m):
                    if P[e, 0] * xn + P[e, 1] * yn >= P[e, 2]:
                        gone = True
                if has_disk and (xn - cx) * (xn - cx) + (yn - cy) * (yn - cy) >= R * R:
                    gone = True
                if bridge and not gone:
                    survive = 1.0
                    near = False
                    for e in range(m):
                        a0 = P[e, 2] - (P[e, 0] * x + P[e, 1] * y)
                        a1 = P[e, 2] - (P[e, 0] * xn + P[e, 1] * yn)
                        q = a0 * a1 / dt
                        if q < BRIDGE_SKIP:
                            near = True
                            survive = survive * -expm1(-q)
                    if has_disk:
                        a0 = R - hypot(x - cx, y - cy)
                        a1 = R - hypot(xn - cx, yn - cy)
                        q = a0 * a1 / dt
                        if q < BRIDGE_SKIP:
                            near = True
                            survive = survive * -expm1(-q)
                    if near:
                        u3 = _uniform(key, base + 2)
                        if u3 < 1.0 - survive:
                            gone = True
                x = xn
                y = yn
                if gone:
                    S[i] = k
                    break
    return steps
