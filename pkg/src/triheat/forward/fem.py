"""Piecewise-linear finite elements for the heat equation u_t = Laplace(u) on a convex
polygon with u = 0 on the boundary and u = 1 initially.

The mesh is the uniform self-similar subdivision of a fan triangulation (each edge of
each fan triangle split into 2**refinement pieces).  Time stepping is Crank-Nicolson
with a Rannacher start: the first ``startup_steps`` steps are each replaced by two
implicit Euler half-steps, which damps the non-smooth initial data.  Both schemes share
the matrix M + dt/2 K, so one sparse LU factorisation serves the whole run.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..errors import DomainError, SolverError
from .curve import HeatCurve

MAX_REFINEMENT = 10


class MeshTooCoarseWarning(UserWarning):
    pass


@dataclass(frozen=True)
class FemConfig:
    refinement: int = 6
    dt: float = 1e-4
    t_max: float = 0.1
    scheme: str = "crank_nicolson"
    startup_steps: int = 2
    initial: str = "projection"
    estimate_error: bool = True
    extrapolate: bool = False

    def __post_init__(self):
        if not 1 <= self.refinement <= MAX_REFINEMENT:
            raise DomainError(f"refinement must be in [1, {MAX_REFINEMENT}]")
        if not (self.dt > 0 and self.t_max > 0 and self.dt <= self.t_max):
            raise DomainError("need 0 < dt <= t_max")
        if self.scheme != "crank_nicolson":
            raise DomainError(f"unknown scheme {self.scheme!r}")
        if self.initial not in ("projection", "interpolant"):
            raise DomainError(f"unknown initial data mode {self.initial!r}")
        if self.startup_steps < 0:
            raise DomainError("startup_steps must be nonnegative")
        if self.extrapolate and self.refinement < 3:
            raise DomainError("extrapolation needs refinement >= 3")


@dataclass
class Mesh:
    nodes: np.ndarray       # (n, 2)
    elements: np.ndarray    # (m, 3) counter-clockwise
    boundary: np.ndarray    # bool (n,)

    @property
    def h(self) -> float:
        e = self.elements
        p = self.nodes
        lens = [np.hypot(*(p[e[:, i]] - p[e[:, (i + 1) % 3]]).T) for i in range(3)]
        return float(np.max(lens))


def _lattice(p0, p1, p2, n):
    """Nodes and elements of the n-per-edge subdivision of one triangle."""
    ij = [(i, j) for i in range(n + 1) for j in range(n + 1 - i)]
    index = {key: k for k, key in enumerate(ij)}
    ij_arr = np.array(ij, dtype=float) / n
    nodes = p0 + np.outer(ij_arr[:, 0], p1 - p0) + np.outer(ij_arr[:, 1], p2 - p0)
    elems = []
    for i in range(n):
        for j in range(n - i):
            elems.append((index[i, j], index[i + 1, j], index[i, j + 1]))
            if i + j <= n - 2:
                elems.append((index[i + 1, j], index[i + 1, j + 1], index[i, j + 1]))
    return nodes, np.array(elems, dtype=np.int64)


def polygon_mesh(vertices, refinement: int) -> Mesh:
    """Self-similar mesh of a convex polygon, fan-triangulated from its first vertex."""
    v = np.asarray(vertices, dtype=float)
    if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
        raise DomainError("polygon needs at least three 2D vertices")
    if signed_area(v) < 0:
        v = v[::-1]
    n = 2 ** refinement
    all_nodes, all_elems, offset = [], [], 0
    for k in range(1, len(v) - 1):
        nodes, elems = _lattice(v[0], v[k], v[k + 1], n)
        all_nodes.append(nodes)
        all_elems.append(elems + offset)
        offset += len(nodes)
    nodes = np.vstack(all_nodes)
    elems = np.vstack(all_elems)
    # Merge duplicated nodes on shared fan edges.
    scale = float(np.max(np.abs(v))) or 1.0
    keys = np.round(nodes / scale * 2.0 ** 40).astype(np.int64)
    _, first, inverse = np.unique(keys, axis=0, return_index=True, return_inverse=True)
    inverse = inverse.ravel()
    nodes = nodes[first]
    elems = inverse[elems]
    # Boundary edges belong to exactly one element.
    edges = np.sort(np.vstack([elems[:, [0, 1]], elems[:, [1, 2]], elems[:, [2, 0]]]), axis=1)
    uniq, counts = np.unique(edges, axis=0, return_counts=True)
    boundary = np.zeros(len(nodes), dtype=bool)
    boundary[uniq[counts == 1].ravel()] = True
    return Mesh(nodes, elems, boundary)


def signed_area(v) -> float:
    v = np.asarray(v, dtype=float)
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def assemble(mesh: Mesh):
    """Stiffness and consistent mass matrices (CSR)."""
    p = mesh.nodes
    e = mesh.elements
    x, y = p[e, 0], p[e, 1]
    # Gradients of barycentric coordinates: grad l_i = (y_j - y_k, x_k - x_j) / (2A)
    b = np.stack([y[:, 1] - y[:, 2], y[:, 2] - y[:, 0], y[:, 0] - y[:, 1]], axis=1)
    c = np.stack([x[:, 2] - x[:, 1], x[:, 0] - x[:, 2], x[:, 1] - x[:, 0]], axis=1)
    area = 0.5 * (b[:, 0] * c[:, 1] - b[:, 1] * c[:, 0])
    if np.any(area <= 0):
        raise SolverError("mesh has inverted or degenerate elements")
    ke = (b[:, :, None] * b[:, None, :] + c[:, :, None] * c[:, None, :]) / (4.0 * area[:, None, None])
    me = area[:, None, None] / 12.0 * (np.ones((3, 3)) + np.eye(3))
    rows = np.repeat(e, 3, axis=1).ravel()
    cols = np.tile(e, (1, 3)).ravel()
    n = len(p)
    K = sp.csr_matrix((ke.ravel(), (rows, cols)), shape=(n, n))
    M = sp.csr_matrix((me.ravel(), (rows, cols)), shape=(n, n))
    return K, M


def _solve_polygon(vertices, refinement: int, cfg: FemConfig):
    mesh = polygon_mesh(vertices, refinement)
    K, M = assemble(mesh)
    inner = np.flatnonzero(~mesh.boundary)
    Kii = K[inner][:, inner].tocsc()
    Mii = M[inner][:, inner].tocsc()
    # H(t) = int u_h = sum_j u_j int(basis_j): row sums of the full mass matrix.
    weights = np.asarray(M.sum(axis=1)).ravel()[inner]
    dt = cfg.dt
    n_steps = int(round(cfg.t_max / dt))
    try:
        lhs = spla.splu((Mii + 0.5 * dt * Kii).tocsc())
        if cfg.initial == "projection":
            u = spla.splu(Mii).solve(weights)
        else:
            u = np.ones(len(inner))
    except RuntimeError as exc:  # singular factor
        raise SolverError(f"sparse factorisation failed: {exc}") from exc
    rhs_cn = (Mii - 0.5 * dt * Kii).tocsr()
    times = dt * np.arange(1, n_steps + 1)
    values = np.empty(n_steps)
    for k in range(n_steps):
        if k < cfg.startup_steps:
            u = lhs.solve(Mii @ u)
            u = lhs.solve(Mii @ u)
        else:
            u = lhs.solve(rhs_cn @ u)
        values[k] = weights @ u
    if not np.all(np.isfinite(values)):
        raise SolverError("non-finite heat content in time stepping")
    return mesh, times, values


def heat_content_polygon(vertices, cfg: FemConfig = FemConfig()) -> HeatCurve:
    """Heat content of a convex polygon by finite elements.

    With ``cfg.estimate_error`` the run is repeated one refinement coarser and the
    Richardson estimate |H_r - H_(r-1)| / 3 of the O(h^2) spatial error is reported.
    With ``cfg.extrapolate`` the returned values are the extrapolants
    (4 H_r - H_(r-1)) / 3 instead, and the error is their change from the level below.
    """
    mesh, times, values = _solve_polygon(vertices, cfg.refinement, cfg)
    if mesh.h > math.sqrt(times[0]):
        warnings.warn(
            f"mesh size {mesh.h:.3g} exceeds the boundary-layer width sqrt(t) = "
            f"{math.sqrt(times[0]):.3g} at the first output time", MeshTooCoarseWarning,
            stacklevel=2)
    if cfg.extrapolate:
        coarse = _solve_polygon(vertices, cfg.refinement - 1, cfg)[2]
        coarser = _solve_polygon(vertices, cfg.refinement - 2, cfg)[2]
        values, below = (4.0 * values - coarse) / 3.0, (4.0 * coarse - coarser) / 3.0
        errors = np.abs(values - below)
    elif cfg.estimate_error and cfg.refinement > 1:
        coarse = _solve_polygon(vertices, cfg.refinement - 1, cfg)[2]
        errors = np.abs(values - coarse) / 3.0
    else:
        errors = np.zeros_like(values)
    area = abs(signed_area(vertices))
    meta = {"refinement": cfg.refinement, "dt": cfg.dt, "h": mesh.h, "nodes": len(mesh.nodes),
            "area": area, "startup_steps": cfg.startup_steps, "initial": cfg.initial,
            "extrapolated": cfg.extrapolate}
    return HeatCurve(times, values, "fem", errors, meta)


def heat_content_fem(tri, cfg: FemConfig = FemConfig()) -> HeatCurve:
    """Heat content of a triangle by finite elements (see :func:`heat_content_polygon`)."""
    return heat_content_polygon(tri.vertices(), cfg)
