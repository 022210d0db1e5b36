"""Inverse-power density: distribution of the projected test power.

For a test whose realizations are Student-T distributed at a given
p-value level, the projected power beta_c below/above one half follows
two printed inverse-beta branch expressions.  They are evaluated here
verbatim, including a beta-function ratio that is identically one (it is
computed and checked rather than simplified away), so the implementation
stays auditable term by term.

Whether the expression is a density or a CDF is left open by its source;
its integral over (0, 1) is therefore reported as a diagnostic, never
asserted to equal one.  Negative evaluations, should they occur, are
returned as-is and flagged through ``PowerEvaluation.negative`` rather
than clipped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import specfun
from .errors import ConvergenceError, DomainError
from .quadrature import DEFAULT_QUADRATURE, QuadratureConfig, QuadratureResult, integrate

__all__ = [
    "PowerParams",
    "PowerIntermediates",
    "PowerEvaluation",
    "power_metadensity",
    "power_metadensity_detailed",
    "power_metadensity_integral",
]


@dataclass(frozen=True)
class PowerParams:
    """Level p-value and sample size of the projected-power expression.

    The third inverse-beta argument is 2 * p_level - 1, so p_level must
    lie in (1/2, 1); anything else is rejected with a diagnostic naming
    the offending intermediate.
    """

    p_level: float
    n: int

    def __post_init__(self):
        p = self.p_level
        if not isinstance(p, (int, float)):
            raise DomainError(f"p_level={p!r} must be a real number")
        object.__setattr__(self, "p_level", float(p))
        n = self.n
        if isinstance(n, bool) or int(n) != n or n < 2:
            raise DomainError(f"sample size n={n!r} must be an integer >= 2")
        object.__setattr__(self, "n", int(n))
        if not 0.0 < 2.0 * self.p_level - 1.0 < 1.0:
            raise DomainError(
                f"gamma3 argument 2*p_level-1 = {2.0 * self.p_level - 1.0} "
                "outside (0, 1); p_level must lie in (1/2, 1)"
            )


@dataclass(frozen=True)
class PowerIntermediates:
    """Inverse-beta intermediates of one evaluation.

    gamma1 is defined on the below-half branch, gamma2 on the above-half
    branch, gamma3 by the level p-value; beta_ratio is the (identically
    one) beta-function ratio carried by the above-half branch.
    """

    gamma1: float | None
    gamma2: float | None
    gamma3: float
    beta_ratio: float


@dataclass(frozen=True)
class PowerEvaluation:
    value: float
    intermediates: PowerIntermediates
    negative: bool


def _gamma3(params: PowerParams) -> float:
    """Inverse-beta intermediate for the level p-value.

    Isolated so an alternative subscript reading is a one-line change.
    """
    arg = 2.0 * params.p_level - 1.0
    if not 0.0 < arg < 1.0:
        raise DomainError(f"gamma3 argument {arg} outside (0, 1)")
    return specfun.inv_reg_inc_beta(arg, 0.5 * params.n, 0.5)


def power_metadensity_detailed(beta_c: float, params: PowerParams) -> PowerEvaluation:
    """Evaluate the projected-power expression with full intermediates."""
    beta_c = float(beta_c)
    if not 0.0 < beta_c < 1.0:
        raise DomainError(f"beta_c={beta_c} outside the open interval (0, 1)")
    if beta_c == 0.5:
        raise DomainError("beta_c == 1/2 sits between the two branches; offset it")
    n = params.n
    g3 = _gamma3(params)
    s3 = math.sqrt(1.0 / g3 - 1.0)
    beta_ratio = math.exp(specfun.log_beta(0.5, 0.5 * n) - specfun.log_beta(0.5 * n, 0.5))
    if abs(beta_ratio - 1.0) > 1e-12:
        raise ConvergenceError(
            f"beta-function ratio B(1/2,n/2)/B(n/2,1/2) evaluated to {beta_ratio!r}"
        )

    if beta_c < 0.5:
        arg = 2.0 * beta_c
        if not 0.0 < arg < 1.0:
            raise DomainError(f"gamma1 argument {arg} outside (0, 1)")
        g1 = specfun.inv_reg_inc_beta(arg, 0.5 * n, 0.5)
        root = math.sqrt(-(g1 - 1.0) * g1)
        den = (
            2.0 * s3 * root
            - 2.0 * root
            + g1 * (2.0 * s3 - 1.0 / g3)
            - 1.0
        )
        value = (
            math.sqrt(1.0 - g1)
            * g1 ** (-0.5 * n)
            * (-g1 / den) ** (0.5 * (n + 1))
            / root
        )
        inter = PowerIntermediates(gamma1=g1, gamma2=None, gamma3=g3, beta_ratio=beta_ratio)
    else:
        arg = 2.0 * beta_c - 1.0
        if not 0.0 < arg < 1.0:
            raise DomainError(f"gamma2 argument {arg} outside (0, 1)")
        g2 = specfun.inv_reg_inc_beta(arg, 0.5, 0.5 * n)
        root = math.sqrt(-(g2 - 1.0) * g2)
        inner = 1.0 / (
            (-2.0 * (root + g2) * s3 + 2.0 * s3 + 2.0 * root - 1.0) / (g2 - 1.0)
            + 1.0 / g3
        )
        value = (
            math.sqrt(g2)
            * (1.0 - g2) ** (-0.5 * n)
            * beta_ratio
            * inner ** (0.5 * (n + 1))
            / root
        )
        inter = PowerIntermediates(gamma1=None, gamma2=g2, gamma3=g3, beta_ratio=beta_ratio)
    return PowerEvaluation(value=value, intermediates=inter, negative=value < 0.0)


def power_metadensity(beta_c: float, params: PowerParams) -> float:
    """Projected-power expression at beta_c (below/above-half branches)."""
    return power_metadensity_detailed(beta_c, params).value


def power_metadensity_integral(
    params: PowerParams, config: QuadratureConfig = DEFAULT_QUADRATURE
) -> QuadratureResult:
    """Diagnostic integral of the expression over beta_c in (0, 1).

    Reported with its error bound; not asserted to be a probability mass.
    """

    def integrand(b: float) -> float:
        if b <= 0.0 or b >= 1.0 or b == 0.5:
            return 0.0
        return power_metadensity(b, params)

    return integrate(integrand, 0.0, 1.0, config, break_points=(0.5,))
