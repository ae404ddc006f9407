"""Smallest-eigenvalue statistics of Wishart-Laguerre ensembles, with and without fixed trace."""

__version__ = "0.1.0"

from .ensemble import EnsembleParams, RationalPoly, UnsupportedParameters  # noqa: E402
from .edelman import CoefficientSet, coefficients, register_coefficient_provider, wl_cdf, wl_density  # noqa: E402
from .ftwl import DensityCurve, ftwl_cdf, ftwl_density, ftwl_moment, ftwl_normalization  # noqa: E402
from .bessel import bessel_i  # noqa: E402
from .pfaffian import pfaffian  # noqa: E402
from .microscopic import MicroDist, convergence_probe, dirac_map, kappa, micro_p, micro_q  # noqa: E402
from .hfma import (  # noqa: E402
    equivalence_report,
    gen_pochhammer,
    hfma_0f1_quadrature,
    hfma_0f1_series,
    micro_via_hfma,
    partitions_of,
)
from .montecarlo import SampleBatch, ks_distance, sample_min, smallest_eig  # noqa: E402

__all__ = [
    "EnsembleParams", "RationalPoly", "UnsupportedParameters",
    "CoefficientSet", "coefficients", "register_coefficient_provider", "wl_cdf", "wl_density",
    "DensityCurve", "ftwl_cdf", "ftwl_density", "ftwl_moment", "ftwl_normalization",
    "bessel_i", "pfaffian",
    "MicroDist", "convergence_probe", "dirac_map", "kappa", "micro_p", "micro_q",
    "equivalence_report", "gen_pochhammer", "hfma_0f1_quadrature", "hfma_0f1_series",
    "micro_via_hfma", "partitions_of",
    "SampleBatch", "ks_distance", "sample_min", "smallest_eig",
]
