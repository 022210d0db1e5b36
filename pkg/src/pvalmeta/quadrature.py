"""Adaptive quadrature with a uniform tolerance contract.

Thin wrapper around QUADPACK's adaptive Gauss-Kronrod subdivision (via
scipy) so every integral in the package shares one tolerance/limit
configuration and one failure mode: `QuadratureError` carrying the value
and the achieved error bound.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

from scipy.integrate import IntegrationWarning, quad

from .errors import DomainError, QuadratureError

__all__ = ["QuadratureConfig", "QuadratureResult", "integrate", "DEFAULT_QUADRATURE"]


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and subdivision limit applied to every integral."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 2000

    def __post_init__(self):
        if self.abs_tol <= 0.0 or self.rel_tol <= 0.0:
            raise DomainError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_bound: float


DEFAULT_QUADRATURE = QuadratureConfig()


def _run(f, lo, hi, config, interior) -> QuadratureResult:
    # QUADPACK accepts break points only on finite intervals; split instead
    # when the range is infinite (it applies a rational transform there).
    if interior and (lo == float("-inf") or hi == float("inf")):
        total = 0.0
        bound = 0.0
        for a, b in zip([lo, *interior], [*interior, hi]):
            value, err = quad(
                f, a, b,
                epsabs=config.abs_tol,
                epsrel=config.rel_tol,
                limit=config.max_subdivisions,
            )
            total += value
            bound += err
        return QuadratureResult(total, bound)
    value, err = quad(
        f, lo, hi,
        epsabs=config.abs_tol,
        epsrel=config.rel_tol,
        limit=config.max_subdivisions,
        points=interior or None,
    )
    return QuadratureResult(value, err)


def integrate(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    config: QuadratureConfig = DEFAULT_QUADRATURE,
    break_points: Sequence[float] | None = None,
) -> QuadratureResult:
    """Integrate f over [lo, hi] (endpoints may be +-inf).

    `break_points` marks known kinks of the integrand.  Raises
    `QuadratureError` with the best value and achieved bound when the
    requested tolerance is not reached.
    """
    interior = sorted(p for p in (break_points or ()) if lo < p < hi)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", IntegrationWarning)
            return _run(f, lo, hi, config, interior)
    except IntegrationWarning as exc:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IntegrationWarning)
            result = _run(f, lo, hi, config, interior)
        raise QuadratureError(str(exc), result.value, result.error_bound) from exc
