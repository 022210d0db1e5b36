"""Meta-distribution of p-values, minimum-p-value hacking, and test power.

The p-value of a repeated experiment is itself a random variable.  This
package evaluates its exact distribution across statistically identical
replications (finite sample sizes and the Gaussian large-sample limit),
the distribution and expectation of the minimum p-value over repeated
trials, and an inverse-power density, all cross-validated by a seeded
Monte Carlo oracle.
"""

__version__ = "0.1.0"

from .errors import (
    BracketError,
    ConvergenceError,
    DomainError,
    PvalMetaError,
    QuadratureError,
)
from .mc import EmpiricalDistribution, MCConfig, ks_distance, sample_min_pvalues, sample_pvalues
from .metadist import (
    LIMIT,
    DispersionStats,
    MetaDistParams,
    cdf,
    cdf_by_quadrature,
    dispersion_stats,
    location_from_median,
    mean_true_pvalue,
    pdf,
    pdf_approx_small_p,
    solve_median_for_mean,
    total_mass,
)
from .phacking import HackingParams, cdf_min, expected_min, hacking_curve, pdf_min
from .power import PowerParams, power_metadensity, power_metadensity_integral
from .quadrature import QuadratureConfig, QuadratureResult

__all__ = [
    "__version__",
    "PvalMetaError",
    "DomainError",
    "ConvergenceError",
    "QuadratureError",
    "BracketError",
    "LIMIT",
    "MetaDistParams",
    "DispersionStats",
    "location_from_median",
    "pdf",
    "cdf",
    "cdf_by_quadrature",
    "total_mass",
    "pdf_approx_small_p",
    "mean_true_pvalue",
    "solve_median_for_mean",
    "dispersion_stats",
    "HackingParams",
    "pdf_min",
    "cdf_min",
    "expected_min",
    "hacking_curve",
    "PowerParams",
    "power_metadensity",
    "power_metadensity_integral",
    "MCConfig",
    "EmpiricalDistribution",
    "sample_pvalues",
    "sample_min_pvalues",
    "ks_distance",
    "QuadratureConfig",
    "QuadratureResult",
]
