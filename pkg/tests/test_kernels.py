"""Compiled and numpy kernels must implement the same contracts."""

import math

import numpy as np
import pytest

from triheat import kernels
from triheat.forward import (McConfig, disk_domain, exit_moments_domain_mc, heat_content_mc,
                             triangle_domain)
from triheat.moduli import Triangle

py = kernels.python_backend
cy = pytest.importorskip("triheat._ckernels")

TRI = Triangle((1.0, 1.0, math.sqrt(2.0)))


def test_default_backend_is_compiled_when_built():
    assert kernels.BACKEND in ("cython", "python")
    assert kernels.get_backend("cython") is cy
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


@pytest.mark.parametrize("theta", [0.3, math.pi / 2, 2.9])
def test_phi_integrand_agrees(theta):
    xi = np.concatenate([[0.0], np.geomspace(1e-8, 40.0, 200)])
    assert np.allclose(cy.phi_integrand(theta, xi), py.phi_integrand(theta, xi),
                       rtol=1e-14, atol=0)
    assert cy.phi_integrand(theta, 0.0) == pytest.approx((math.pi - theta) / math.pi)


@pytest.mark.parametrize("a,b", [(0.0, 0.5), (0.5, 4.0), (4.0, 30.0)])
def test_phi_panel_agrees(a, b):
    vc, ec = cy.phi_panel(1.1, a, b)
    vp, ep = py.phi_panel(1.1, a, b)
    assert vc == pytest.approx(vp, rel=1e-14, abs=1e-300)
    assert ec == pytest.approx(ep, rel=1e-6, abs=1e-300)


def test_counter_uniform_identical_streams():
    keys = kernels.stream_key(123, 7, np.arange(1000, dtype=np.uint64))
    ctr = np.arange(1000, dtype=np.uint64) * 3
    uc = cy.counter_uniform(keys, ctr)
    up = py.counter_uniform(keys, ctr)
    assert np.array_equal(uc, up)
    assert np.all((uc > 0) & (uc < 1))


def test_counter_uniform_is_roughly_uniform():
    keys = kernels.stream_key(1, 2, np.zeros(1, dtype=np.uint64))
    u = py.counter_uniform(keys, np.arange(200_000, dtype=np.uint64))
    hist, _ = np.histogram(u, bins=20, range=(0, 1))
    expected = len(u) / 20
    chi2 = float(((hist - expected) ** 2 / expected).sum())
    assert chi2 < 45.0  # 19 dof; p ~ 1e-3


@pytest.mark.parametrize("bridge", [True, False])
def test_exit_steps_identical(bridge):
    dom = triangle_domain(TRI)
    x0, y0 = dom.sample_starts(2000, 5, 8)
    keys = kernels.stream_key(5, 1, np.arange(2000, dtype=np.uint64))
    sc = cy.exit_steps(x0, y0, keys, 1e-4, 5000, dom.planes, dom.disk, bridge)
    sp = py.exit_steps(x0, y0, keys, 1e-4, 5000, dom.planes, dom.disk, bridge)
    assert np.array_equal(sc, sp)


def test_heat_content_independent_of_backend():
    vals = [heat_content_mc(TRI, [0.005, 0.02],
                            McConfig(n_paths=800, dt=1e-4, seed=9, backend=b)).values
            for b in ("python", "cython")]
    assert np.array_equal(vals[0], vals[1])


def test_bridge_reduces_exit_time_bias():
    # Discrete boundary checks overestimate exit times; the bridge test removes most of it.
    out = {}
    for bridge in (False, True):
        cfg = McConfig(n_paths=20_000, dt=1e-3, seed=4, bridge=bridge)
        out[bridge] = exit_moments_domain_mc(disk_domain(1.0), [1], cfg, starts=(0.0, 0.0))
    assert abs(out[True].values[0] - 0.25) < abs(out[False].values[0] - 0.25)
    assert abs(out[True].values[0] - 0.25) <= 3 * out[True].std_errors[0]
