"""Distribution of the minimum p-value across repeated trials.

Reporting only the smallest of m independent p-values is modeled as the
first order statistic of the meta-distribution: density
m * phi * (1 - Phi)^(m-1), CDF 1 - (1 - Phi)^m, and the expected minimum.

The expected minimum is computed through the tail formula
E[min] = integral over (0, 1) of (1 - CDF_min), substituted into statistic
space where the integrand is a smooth survival-power kernel.  A second,
density-weighted route (integral of p * density_min) is exposed alongside
it; the two agree to quadrature accuracy and the test suite pins that.
Trials are independent; correlated trials are out of scope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import metadist, specfun
from .errors import DomainError
from .metadist import MetaDistParams
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig, integrate

__all__ = [
    "HackingParams",
    "pdf_min",
    "cdf_min",
    "pdf_min_limit_closed",
    "expected_min",
    "expected_min_by_density",
    "hacking_curve",
]


@dataclass(frozen=True)
class HackingParams:
    """Base meta-distribution plus the number of trials minimized over."""

    base: MetaDistParams
    m: int

    def __post_init__(self):
        m = self.m
        if isinstance(m, bool) or int(m) != m or m < 1:
            raise DomainError(f"trial count m={m!r} must be an integer >= 1")
        object.__setattr__(self, "m", int(m))


def pdf_min(p, hp: HackingParams):
    """Density of the minimum of m trials at p (scalar or array)."""
    m = hp.m
    density = metadist.pdf(p, hp.base)
    if m == 1:
        return density
    survival = 1.0 - metadist.cdf(p, hp.base)
    return m * density * survival ** (m - 1)


def cdf_min(p, hp: HackingParams):
    """CDF of the minimum of m trials at p (scalar or array)."""
    survival = 1.0 - metadist.cdf(p, hp.base)
    return 1.0 - survival**hp.m


def pdf_min_limit_closed(p: float, p_median: float, m: int) -> float:
    """Limiting-regime density of the minimum, evaluated as one closed form.

    Kept verbatim as a single expression (exponential factor times the
    survival power) so it can be checked independently against the
    ``pdf_min`` composition.
    """
    if isinstance(m, bool) or int(m) != m or m < 1:
        raise DomainError(f"trial count m={m!r} must be an integer >= 1")
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"p={p} outside the open interval (0, 1)")
    z_med = specfun.inv_erfc(2.0 * p_median)
    z_p = specfun.inv_erfc(2.0 * p)
    return (
        m
        * math.exp(z_med * (2.0 * z_p - z_med))
        * (1.0 - 0.5 * specfun.erfc(z_p - z_med)) ** (m - 1)
    )


def _central_survival(params: MetaDistParams):
    if params.is_limit:
        return lambda t: 0.5 * specfun.erfc(t / math.sqrt(2.0))
    n = params.n
    return lambda t: specfun.student_t_survival(t, n)


def expected_min(
    hp: HackingParams, config: QuadratureConfig = DEFAULT_QUADRATURE
) -> float:
    """Expected minimum p-value over m trials.

    Tail formula for a variable on [0, 1], taken to statistic space: the
    integrand becomes (1 - central survival at (zeta - location))^m times
    the central statistic density.  Strictly decreasing in m; equals the
    meta-distribution mean at m = 1.
    """
    base = hp.base
    m = hp.m
    loc = metadist.location_from_median(base)
    survival = _central_survival(base)
    kernel = metadist._kernel_pdf(base)

    def integrand(z: float) -> float:
        return (1.0 - survival(z - loc)) ** m * kernel(z)

    return integrate(integrand, -math.inf, math.inf, config).value


def expected_min_by_density(
    hp: HackingParams, config: QuadratureConfig = DEFAULT_QUADRATURE
) -> float:
    """Expected minimum via the density-weighted integral of p * density_min.

    Exercises the density composition directly; agrees with
    ``expected_min`` to quadrature accuracy.
    """
    base = hp.base
    m = hp.m
    loc = metadist.location_from_median(base)
    survival_map = metadist._survival_at(base)
    central = _central_survival(base)
    kernel = metadist._kernel_pdf(base)

    def integrand(z: float) -> float:
        p = survival_map(z)
        if not 0.0 < p < 1.0:
            return 0.0
        density = metadist.pdf(p, base)
        tail = 1.0 - central(z - loc)
        return p * m * density * tail ** (m - 1) * kernel(z)

    return integrate(
        integrand, -math.inf, math.inf, config, break_points=(0.0, loc)
    ).value


def hacking_curve(
    base: MetaDistParams,
    m_max: int,
    config: QuadratureConfig = DEFAULT_QUADRATURE,
) -> list[tuple[int, float]]:
    """Rows (m, expected minimum) for m = 1..m_max; strictly decreasing."""
    if isinstance(m_max, bool) or int(m_max) != m_max or m_max < 1:
        raise DomainError(f"m_max={m_max!r} must be an integer >= 1")
    return [
        (m, expected_min(HackingParams(base=base, m=m), config))
        for m in range(1, int(m_max) + 1)
    ]
