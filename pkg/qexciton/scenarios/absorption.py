"""
Absorption scenarios of the driven exciton.
"""

import logging

import numpy as np

from ..response import ResponseParams, linear_susceptibility, third_order_absorption
from .base import ScenarioContext, scenario

logger = logging.getLogger(__name__)


def _response_params(ctx: ScenarioContext, params: dict) -> ResponseParams:
    return ResponseParams(grid=ctx.grid, **params)


@scenario("absorption_linear")
def absorption_linear(ctx: ScenarioContext, **params) -> np.ndarray:
    """Linear absorption alpha1 = Im chi1."""
    series = linear_susceptibility(_response_params(ctx, params))
    logger.info("%s: %d series terms, truncation %.2e", ctx.config.name, series.terms_used, series.truncation_error)
    return series.alpha1


@scenario("absorption_third")
def absorption_third(ctx: ScenarioContext, **params) -> np.ndarray:
    """Third-order absorption alpha3 = Im chi3."""
    series = third_order_absorption(_response_params(ctx, params))
    logger.info("%s: %d series terms, truncation %.2e", ctx.config.name, series.terms_used, series.truncation_error)
    return series.alpha3
