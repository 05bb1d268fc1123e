"""Forward solvers for the Dirichlet heat content H(t) and exit-time moments."""

from .curve import METHODS, HeatCurve
from .fem import FemConfig, MeshTooCoarseWarning, heat_content_fem, heat_content_polygon
from .montecarlo import (
    Domain,
    McConfig,
    MomentSpectrum,
    disk_domain,
    exit_moments_domain_mc,
    exit_moments_mc,
    heat_content_domain_mc,
    heat_content_mc,
    layer_cake_moment,
    polygon_domain,
    triangle_domain,
)
from .series import rectangle_series_oracle

__all__ = [
    "METHODS", "HeatCurve", "FemConfig", "MeshTooCoarseWarning", "heat_content_fem",
    "heat_content_polygon", "Domain", "McConfig", "MomentSpectrum", "disk_domain",
    "exit_moments_domain_mc", "exit_moments_mc", "heat_content_domain_mc", "heat_content_mc",
    "layer_cake_moment", "polygon_domain", "triangle_domain", "rectangle_series_oracle",
]
