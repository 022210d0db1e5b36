"""Meta-distribution of one-tailed p-values across identical replications.

A replication draws its T statistic from a Student-T (or, in the
large-sample limit, Gaussian) law shifted so that the resulting p-value
has a prescribed median.  This module evaluates the induced distribution
of the p-value itself: density, CDF, small-p approximation, mean, and
dispersion summaries.

Two routes to the CDF are provided on purpose:

* ``cdf`` uses the exact monotone-transform identity (the p-value is a
  strictly decreasing map of the statistic, so its CDF is a survival
  value of the shifted statistic).  It is fast and vectorizes.
* ``cdf_by_quadrature`` integrates the density in statistic space with an
  explicit error bound.  It exists so the density expression itself can be
  validated; the two routes agree to tight tolerance and the test suite
  enforces that.

Every integral substitutes the statistic for the p-value, which turns the
endpoint-divergent p-space integrand into a smooth kernel on the line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

from . import specfun
from .errors import BracketError, ConvergenceError, DomainError
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig, QuadratureResult, integrate

__all__ = [
    "LIMIT",
    "SampleSize",
    "MetaDistParams",
    "PdfIntermediates",
    "DispersionStats",
    "location_from_median",
    "pdf",
    "pdf_intermediates",
    "cdf",
    "cdf_by_quadrature",
    "total_mass",
    "pdf_approx_small_p",
    "mean_true_pvalue",
    "mean_true_pvalue_result",
    "solve_median_for_mean",
    "dispersion_stats",
]

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)

# Upper bound of the band where the closed-form small-p approximation holds.
SMALL_P_BAND_UPPER = 1.0 / (2.0 * math.pi)


class _LimitType:
    """Sentinel for the large-sample (Gaussian) regime."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "LIMIT"


LIMIT = _LimitType()

SampleSize = Union[int, _LimitType]


def is_limit(n: SampleSize) -> bool:
    return isinstance(n, _LimitType)


@dataclass(frozen=True)
class MetaDistParams:
    """Parameters of the meta-distribution.

    p_median: median of the p-value across replications, in (0, 1).
    n: sample size behind each replication (integer >= 2), or ``LIMIT``
       for the Gaussian regime.

    p_median == 1/2 with finite n is accepted at construction (the
    location is well defined and Monte Carlo sampling works) but density
    and quadrature-CDF evaluation reject it; the distribution there is
    the uniform limit, reachable through p_median = 1/2 +- eps.
    """

    p_median: float
    n: SampleSize

    def __post_init__(self):
        p = self.p_median
        if not (isinstance(p, (int, float)) and 0.0 < float(p) < 1.0):
            raise DomainError(f"p_median={p!r} must lie strictly inside (0, 1)")
        object.__setattr__(self, "p_median", float(p))
        n = self.n
        if is_limit(n):
            return
        if isinstance(n, bool) or int(n) != n or n < 2:
            raise DomainError(f"sample size n={n!r} must be an integer >= 2 or LIMIT")
        object.__setattr__(self, "n", int(n))

    @property
    def is_limit(self) -> bool:
        return is_limit(self.n)


@dataclass(frozen=True)
class PdfIntermediates:
    """Inverse-beta intermediates behind a finite-n density evaluation.

    ``lam_below`` is defined for p < 1/2, ``lam_above`` for p > 1/2 (both
    at p == 1/2, where they hit their boundary values 1 and 0), and
    ``lam_median`` encodes the median parameter.
    """

    lam_below: float | None
    lam_above: float | None
    lam_median: float


@dataclass(frozen=True)
class DispersionStats:
    mean: float
    std: float
    mad: float
    quantiles: tuple[tuple[float, float], ...]
    error_bounds: dict[str, float]


# ---------------------------------------------------------------------------
# Location
# ---------------------------------------------------------------------------


@lru_cache(maxsize=2048)
def _location_cached(p_median: float, n) -> float:
    if is_limit(n):
        return _SQRT2 * specfun.inv_erfc(2.0 * p_median)
    return specfun.student_t_survival_inverse(p_median, n)


def location_from_median(params: MetaDistParams) -> float:
    """Statistic-space location whose survival probability equals the median.

    Positive iff p_median < 1/2; zero at 1/2.
    """
    return _location_cached(params.p_median, params.n)


@lru_cache(maxsize=2048)
def _lam_median_cached(p_median: float, n: int) -> float:
    # requires p_median < 1/2; callers reflect first
    return specfun.inv_reg_inc_beta(1.0 - 2.0 * p_median, 0.5, 0.5 * n)


# ---------------------------------------------------------------------------
# Density
# ---------------------------------------------------------------------------


def _require_offcenter(params: MetaDistParams) -> None:
    if not params.is_limit and params.p_median == 0.5:
        raise DomainError(
            "density branches are undefined at p_median == 1/2 with finite n; "
            "use LIMIT or approach through p_median = 1/2 +- eps"
        )


def _pdf_low_log(lam, lam_med: float, n: int):
    """Log of the below-half density branch; `lam` scalar or ndarray.

    At the representability fringe the inverse beta collapses to its
    boundary value 0; there the branch tends to density one (heavy-tail
    ratio limit), so log zero is returned explicitly.
    """
    if isinstance(lam, np.ndarray):
        with np.errstate(divide="ignore", invalid="ignore"):
            root = np.sqrt((1.0 - lam) * lam)
            root_med = math.sqrt((1.0 - lam_med) * lam_med)
            den2 = (lam - 1.0) * lam_med - 2.0 * root * root_med + 1.0
            inner2 = lam * (1.0 - lam_med) / den2
            d_term = (
                1.0 / lam
                - 2.0 * np.sqrt(1.0 - lam) * math.sqrt(lam_med)
                / (np.sqrt(lam) * math.sqrt(1.0 - lam_med))
                + 1.0 / (1.0 - lam_med)
                - 1.0
            )
            out = (
                -(n + 1.0) / 2.0 * np.log(lam)
                + 0.5 * np.log(inner2)
                - n / 2.0 * np.log(d_term)
            )
        return np.where(lam <= 0.0, 0.0, out)
    if lam <= 0.0:
        return 0.0
    root = math.sqrt((1.0 - lam) * lam)
    root_med = math.sqrt((1.0 - lam_med) * lam_med)
    den2 = (lam - 1.0) * lam_med - 2.0 * root * root_med + 1.0
    inner2 = lam * (1.0 - lam_med) / den2
    d_term = (
        1.0 / lam
        - 2.0 * math.sqrt(1.0 - lam) * math.sqrt(lam_med)
        / (math.sqrt(lam) * math.sqrt(1.0 - lam_med))
        + 1.0 / (1.0 - lam_med)
        - 1.0
    )
    return -(n + 1.0) / 2.0 * math.log(lam) + 0.5 * math.log(inner2) - n / 2.0 * math.log(d_term)


def _pdf_high_log(lam, lam_med: float, n: int):
    """Log of the above-half density branch; `lam` scalar or ndarray.

    The inverse beta collapsing to its boundary value 1 marks the far
    fringe where the branch tends to density one; handled explicitly.
    """
    if isinstance(lam, np.ndarray):
        with np.errstate(divide="ignore", invalid="ignore"):
            root = np.sqrt((1.0 - lam) * lam)
            root_med = math.sqrt((1.0 - lam_med) * lam_med)
            num = (lam - 1.0) * (lam_med - 1.0)
            den = -lam * lam_med + 2.0 * root * root_med + 1.0
            out = (n + 1.0) / 2.0 * (np.log(num / den) - np.log1p(-lam))
        return np.where(lam >= 1.0, 0.0, out)
    if lam >= 1.0:
        return 0.0
    root = math.sqrt((1.0 - lam) * lam)
    root_med = math.sqrt((1.0 - lam_med) * lam_med)
    num = (lam - 1.0) * (lam_med - 1.0)
    den = -lam * lam_med + 2.0 * root * root_med + 1.0
    return (n + 1.0) / 2.0 * (math.log(num / den) - math.log1p(-lam))


def _pdf_finite_scalar(p: float, p_median: float, n: int) -> float:
    if p_median > 0.5:
        return _pdf_finite_scalar(1.0 - p, 1.0 - p_median, n)
    lam_med = _lam_median_cached(p_median, n)
    if p < 0.5:
        lam = specfun.inv_reg_inc_beta(2.0 * p, 0.5 * n, 0.5)
        return math.exp(_pdf_low_log(lam, lam_med, n))
    if p > 0.5:
        lam = specfun.inv_reg_inc_beta(2.0 * p - 1.0, 0.5, 0.5 * n)
        return math.exp(_pdf_high_log(lam, lam_med, n))
    # seam: both one-sided limits are evaluable at their boundary values
    low = math.exp(_pdf_low_log(1.0, lam_med, n))
    high = math.exp(_pdf_high_log(0.0, lam_med, n))
    return 0.5 * (low + high)


def _pdf_finite_array(p: np.ndarray, p_median: float, n: int) -> np.ndarray:
    if p_median > 0.5:
        return _pdf_finite_array(1.0 - p, 1.0 - p_median, n)
    lam_med = _lam_median_cached(p_median, n)
    out = np.empty_like(p)
    below = p < 0.5
    above = p > 0.5
    seam = ~(below | above)
    if below.any():
        lam = specfun._inv_reg_inc_beta_array(2.0 * p[below], 0.5 * n, 0.5)
        out[below] = np.exp(_pdf_low_log(lam, lam_med, n))
    if above.any():
        lam = specfun._inv_reg_inc_beta_array(2.0 * p[above] - 1.0, 0.5, 0.5 * n)
        out[above] = np.exp(_pdf_high_log(lam, lam_med, n))
    if seam.any():
        low = math.exp(_pdf_low_log(1.0, lam_med, n))
        high = math.exp(_pdf_high_log(0.0, lam_med, n))
        out[seam] = 0.5 * (low + high)
    return out


def _pdf_limit_scalar(p: float, p_median: float) -> float:
    z_med = specfun.inv_erfc(2.0 * p_median)
    z_p = specfun.inv_erfc(2.0 * p)
    return math.exp(-z_med * (z_med - 2.0 * z_p))


def _pdf_limit_array(p: np.ndarray, p_median: float) -> np.ndarray:
    z_med = specfun.inv_erfc(2.0 * p_median)
    z_p = specfun._inv_erfc_array(2.0 * p)
    return np.exp(-z_med * (z_med - 2.0 * z_p))


def pdf(p, params: MetaDistParams):
    """Density of the p-value meta-distribution at p (scalar or array).

    Finite n evaluates the below-half / above-half inverse-beta branches
    (value at exactly 1/2 is the average of the coinciding one-sided
    limits); the limiting regime uses the closed Gaussian form.  The
    density diverges integrably as p -> 0 in the limiting regime and is
    finite everywhere else.
    """
    _require_offcenter(params)
    if isinstance(p, np.ndarray):
        p = np.asarray(p, dtype=float)
        if np.any(p <= 0.0) or np.any(p >= 1.0):
            raise DomainError("p must lie strictly inside (0, 1)")
        if params.is_limit:
            return _pdf_limit_array(p, params.p_median)
        return _pdf_finite_array(p, params.p_median, params.n)
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"p={p} outside the open interval (0, 1)")
    if params.is_limit:
        return _pdf_limit_scalar(p, params.p_median)
    return _pdf_finite_scalar(p, params.p_median, params.n)


def pdf_intermediates(p: float, params: MetaDistParams) -> PdfIntermediates:
    """Expose the inverse-beta intermediates behind a finite-n density value."""
    if params.is_limit:
        raise DomainError("intermediates exist only for finite sample sizes")
    _require_offcenter(params)
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"p={p} outside the open interval (0, 1)")
    p_median, n = params.p_median, params.n
    reflected = p_median > 0.5
    if reflected:
        p, p_median = 1.0 - p, 1.0 - p_median
    lam_med = _lam_median_cached(p_median, n)
    lam_below = lam_above = None
    if p <= 0.5:
        lam_below = specfun.inv_reg_inc_beta(2.0 * p, 0.5 * n, 0.5)
    if p >= 0.5:
        lam_above = specfun.inv_reg_inc_beta(2.0 * p - 1.0, 0.5, 0.5 * n)
    return PdfIntermediates(lam_below=lam_below, lam_above=lam_above, lam_median=lam_med)


# ---------------------------------------------------------------------------
# CDF
# ---------------------------------------------------------------------------


def cdf(k, params: MetaDistParams):
    """CDF at k via the exact monotone-transform identity (scalar or array).

    The p-value is a strictly decreasing function of the statistic, so
    P(p <= k) equals the survival probability of the shifted statistic at
    the statistic value mapping to k.  Agrees with ``cdf_by_quadrature``
    to quadrature accuracy.
    """
    loc = location_from_median(params)
    if isinstance(k, np.ndarray):
        k = np.asarray(k, dtype=float)
        if np.any(k <= 0.0) or np.any(k >= 1.0):
            raise DomainError("k must lie strictly inside (0, 1)")
        if params.is_limit:
            z = specfun._inv_erfc_array(2.0 * k)
            z_med = specfun.inv_erfc(2.0 * params.p_median)
            return 0.5 * specfun.erfc(z - z_med)
        zeta = specfun._student_t_survival_inverse_array(k, params.n)
        return specfun.student_t_survival(zeta - loc, params.n)
    k = float(k)
    if not 0.0 < k < 1.0:
        raise DomainError(f"k={k} outside the open interval (0, 1)")
    if params.is_limit:
        z_med = specfun.inv_erfc(2.0 * params.p_median)
        return 0.5 * specfun.erfc(specfun.inv_erfc(2.0 * k) - z_med)
    zeta = specfun.student_t_survival_inverse(k, params.n)
    return specfun.student_t_survival(zeta - loc, params.n)


def _statistic_space_density_integrand(params: MetaDistParams):
    """phi(g(zeta)) * f0(zeta): the p-space density transported to the line."""
    n = params.n

    if params.is_limit:

        def integrand(z: float) -> float:
            p = 0.5 * specfun.erfc(z / _SQRT2)
            if not 0.0 < p < 1.0:
                return 0.0
            return _pdf_limit_scalar(p, params.p_median) * _INV_SQRT_2PI * math.exp(
                -0.5 * z * z
            )

        return integrand

    def integrand(z: float) -> float:
        p = specfun.student_t_survival(z, n)
        if not 0.0 < p < 1.0:
            return 0.0
        return _pdf_finite_scalar(p, params.p_median, n) * specfun.student_t_pdf(z, 0.0, n)

    return integrand


def cdf_by_quadrature(
    k: float, params: MetaDistParams, config: QuadratureConfig = DEFAULT_QUADRATURE
) -> QuadratureResult:
    """CDF at k by integrating the density in statistic space.

    Slower than ``cdf`` but carries an explicit error bound and exercises
    the density expression itself.
    """
    _require_offcenter(params)
    k = float(k)
    if not 0.0 < k < 1.0:
        raise DomainError(f"k={k} outside the open interval (0, 1)")
    if params.is_limit:
        zeta_k = _SQRT2 * specfun.inv_erfc(2.0 * k)
    else:
        zeta_k = specfun.student_t_survival_inverse(k, params.n)
    integrand = _statistic_space_density_integrand(params)
    return integrate(integrand, zeta_k, math.inf, config)


def total_mass(
    params: MetaDistParams, config: QuadratureConfig = DEFAULT_QUADRATURE
) -> QuadratureResult:
    """Integral of the density over (0, 1), computed in statistic space.

    Equals 1 up to quadrature error for every valid parameter set; exposed
    so normalization can be checked with an explicit error bound.
    """
    _require_offcenter(params)
    integrand = _statistic_space_density_integrand(params)
    loc = location_from_median(params)
    return integrate(integrand, -math.inf, math.inf, config, break_points=(0.0, loc))


# ---------------------------------------------------------------------------
# Small-p approximation
# ---------------------------------------------------------------------------


def pdf_approx_small_p(p: float, p_median: float) -> float:
    """Closed-form approximation of the limiting density for small p.

    Valid on the band 0 < p < 1/(2*pi); the median parameter must lie in
    the same band for the inner square roots to stay real.
    """
    p = float(p)
    p_median = float(p_median)
    if not 0.0 < p < SMALL_P_BAND_UPPER:
        raise DomainError(
            f"p={p} outside the approximation band (0, {SMALL_P_BAND_UPPER:.6f})"
        )
    if not 0.0 < p_median < SMALL_P_BAND_UPPER:
        raise DomainError(
            f"p_median={p_median} outside the approximation band "
            f"(0, {SMALL_P_BAND_UPPER:.6f})"
        )

    def _sqrt_term(v: float) -> float:
        return math.sqrt(-math.log(2.0 * math.pi * math.log(1.0 / (2.0 * math.pi * v * v))) - 2.0 * math.log(v))

    front = math.sqrt(2.0 * math.pi) * p_median * math.sqrt(
        math.log(1.0 / (2.0 * math.pi * p_median * p_median))
    )
    return front * math.exp(_sqrt_term(p) * _sqrt_term(p_median))


# ---------------------------------------------------------------------------
# Mean, inverse problem, dispersion
# ---------------------------------------------------------------------------


def _survival_at(params: MetaDistParams):
    """Scalar map zeta -> p for this regime."""
    if params.is_limit:
        return lambda z: 0.5 * specfun.erfc(z / _SQRT2)
    n = params.n
    return lambda z: specfun.student_t_survival(z, n)


def _kernel_pdf(params: MetaDistParams):
    """Density of the statistic fluctuation around the location."""
    if params.is_limit:
        return lambda t: _INV_SQRT_2PI * math.exp(-0.5 * t * t)
    n = params.n
    return lambda t: specfun.student_t_pdf(t, 0.0, n)


def mean_true_pvalue_result(
    params: MetaDistParams, config: QuadratureConfig = DEFAULT_QUADRATURE
) -> QuadratureResult:
    """Expected p-value with its quadrature error bound."""
    loc = location_from_median(params)
    survival = _survival_at(params)
    kernel = _kernel_pdf(params)
    result = integrate(lambda t: survival(loc + t) * kernel(t), -math.inf, math.inf, config)
    if params.is_limit:
        closed = 0.5 * specfun.erfc(0.5 * loc)
        if abs(result.value - closed) > 1e-7:
            raise ConvergenceError(
                f"limiting-regime mean disagrees with its closed form: "
                f"quadrature={result.value!r}, closed={closed!r}"
            )
    return result


def mean_true_pvalue(
    params: MetaDistParams, config: QuadratureConfig = DEFAULT_QUADRATURE
) -> float:
    """Expected p-value across replications (the mean of the meta-distribution).

    Computed by integrating the survival map against the statistic kernel;
    in the limiting regime the value is cross-checked at runtime against
    the closed Gaussian-convolution form erfc(location / 2) / 2.
    """
    return mean_true_pvalue_result(params, config).value


def solve_median_for_mean(
    target_mean: float,
    n: SampleSize,
    config: QuadratureConfig = DEFAULT_QUADRATURE,
    tol: float = 1e-6,
) -> float:
    """Median parameter whose meta-distribution mean equals `target_mean`.

    Bisection on the median; the mean is strictly increasing in it.
    """
    target_mean = float(target_mean)
    if not 0.0 < target_mean < 1.0:
        raise DomainError(f"target mean {target_mean} outside the open interval (0, 1)")
    lo, hi = 1e-12, 1.0 - 1e-12

    def mean_at(p_median: float) -> float:
        return mean_true_pvalue(MetaDistParams(p_median=p_median, n=n), config)

    if mean_at(lo) > target_mean or mean_at(hi) < target_mean:
        raise BracketError(
            f"target mean {target_mean} not attainable within the median bracket"
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        value = mean_at(mid)
        if abs(value - target_mean) <= tol:
            return mid
        if value < target_mean:
            lo = mid
        else:
            hi = mid
        if hi - lo <= math.ulp(mid):
            break
    raise ConvergenceError(
        f"median solve stalled for target mean {target_mean} at n={n!r}"
    )


def dispersion_stats(
    params: MetaDistParams,
    quantile_levels: Sequence[float] = (0.05, 0.25, 0.5, 0.75, 0.95),
    config: QuadratureConfig = DEFAULT_QUADRATURE,
) -> DispersionStats:
    """Standard deviation, mean absolute deviation, and quantiles.

    Moments come from statistic-space quadrature; quantiles from the exact
    monotone-transform identity (the q-quantile is the survival map applied
    at the location shifted by the central q-survival-inverse).
    """
    for q in quantile_levels:
        if not 0.0 < q < 1.0:
            raise DomainError(f"quantile level {q} outside the open interval (0, 1)")
    loc = location_from_median(params)
    survival = _survival_at(params)
    kernel = _kernel_pdf(params)
    mean_res = mean_true_pvalue_result(params, config)
    mu = mean_res.value

    var_res = integrate(
        lambda t: (survival(loc + t) - mu) ** 2 * kernel(t), -math.inf, math.inf, config
    )
    std = math.sqrt(max(var_res.value, 0.0))

    # |p - mu| has a kink where the survival map crosses the mean
    if params.is_limit:
        t_star = _SQRT2 * specfun.inv_erfc(2.0 * mu) - loc
    else:
        t_star = specfun.student_t_survival_inverse(mu, params.n) - loc
    mad_res = integrate(
        lambda t: abs(survival(loc + t) - mu) * kernel(t),
        -math.inf,
        math.inf,
        config,
        break_points=(t_star,),
    )

    if params.is_limit:
        central_inverse = lambda q: _SQRT2 * specfun.inv_erfc(2.0 * q)
    else:
        central_inverse = lambda q: specfun.student_t_survival_inverse(q, params.n)
    quantiles = tuple(
        (float(q), survival(loc + central_inverse(float(q)))) for q in quantile_levels
    )

    return DispersionStats(
        mean=mu,
        std=std,
        mad=mad_res.value,
        quantiles=quantiles,
        error_bounds={
            "mean": mean_res.error_bound,
            "variance": var_res.error_bound,
            "mad": mad_res.error_bound,
        },
    )
