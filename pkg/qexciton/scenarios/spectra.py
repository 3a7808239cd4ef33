"""
Fluorescence spectrum scenarios.
"""

import logging

import numpy as np

from ..multimode import TwoModeParams, two_exciton_spectrum
from ..polariton import SystemParams, emission_spectrum
from ..qpolariton import deformed_emission_spectrum
from .base import ScenarioContext, scenario

logger = logging.getLogger(__name__)


@scenario("single")
def single(
    ctx: ScenarioContext,
    omega: float,
    omega_ex: float,
    g: float,
    gamma_ex: float = 0.0,
    gamma_ph: float = 0.0,
    alpha_sq: float = 0.0,
    scale: float = 1.0,
    q: float = 1.0,
    n: int = 0,
    linewidth: str = "constant",
) -> np.ndarray:
    """One exciton mode in a cavity."""
    p = SystemParams(omega, omega_ex, g, gamma_ex, gamma_ph, alpha_sq, scale)
    return emission_spectrum(p, q, n, ctx.grid, linewidth).values


@scenario("qpol")
def qpol(
    ctx: ScenarioContext,
    omega: float,
    omega_ex: float,
    g: float,
    gamma_ex: float = 0.0,
    gamma_ph: float = 0.0,
    alpha_sq: float = 0.0,
    scale: float = 1.0,
    q: float = 1.0,
    n: int = 0,
    s: float = 1.0,
    n_k: int = 0,
    linewidth: str = "constant",
) -> np.ndarray:
    """s-deformed polaritons."""
    p = SystemParams(omega, omega_ex, g, gamma_ex, gamma_ph, alpha_sq, scale)
    return deformed_emission_spectrum(p, q, n, s, n_k, ctx.grid, linewidth).values


@scenario("two_mode")
def two_mode(
    ctx: ScenarioContext,
    linewidth: str = "branch",
    mode: str = "eigenvector",
    form: str = "consistent",
    **params,
) -> np.ndarray:
    """Two exciton modes sharing one cavity mode."""
    p = TwoModeParams(**params)
    series = two_exciton_spectrum(p, ctx.grid, linewidth=linewidth, mode=mode, form=form)
    logger.debug("%s: branch centers %s", ctx.config.name, [b.center for b in series.branches])
    return series.values
