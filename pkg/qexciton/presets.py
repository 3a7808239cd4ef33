"""
Figure presets.

Each preset expands to the fixed scenario set of one reference figure.
Cavity energy, broadening and probe window of the absorption presets are
chosen here; see DESIGN.md.
"""

import numpy as np

from .config import ScenarioConfig
from .errors import ConfigError
from .spectrum import EnergyGrid

# 0.25 ueV step over the single-mode doublet
FLUORESCENCE_GRID = EnergyGrid(1.7485, 1.7515, 12001)
TWO_MODE_GRID = EnergyGrid(1.745, 1.785, 8001)
ABSORPTION_GRID = EnergyGrid(1.572, 1.576, 4001)

SINGLE_MODE = {
    "omega": 1.75,
    "omega_ex": 1.75,
    "g": 200e-6,
    "gamma_ex": 20e-6,
    "gamma_ph": 40e-6,
    "n": 1,
    "alpha_sq": 9.0,
}

TWO_MODE = {
    "omega": 1.75,
    "omega_ex1": 1.75,
    "omega_ex2": 1.77,
    "g": 200e-6,
    "gamma_ex1": 200e-6,
    "gamma_ex2": 200e-6,
    "gamma_ph": 45e-6,
    "n1": 1,
    "n2": 1,
    "alpha_sq": 9.0,
}

ABSORPTION = {
    "omega": 1.5,
    "omega_ex": 1.574,
    "g": 200e-6,
    "eta": 50e-6,
}


def _fig1() -> list[ScenarioConfig]:
    return [
        ScenarioConfig(
            kind="single",
            params={**SINGLE_MODE, "q": q},
            grid=FLUORESCENCE_GRID,
            name=f"fig1_q{q:.3f}",
            output=f"fig1_q{q:.3f}.csv",
        )
        for q in (1.0, 1.01, 1.015)
    ]


def _fig2() -> list[ScenarioConfig]:
    return [
        ScenarioConfig(
            kind="qpol",
            params={**SINGLE_MODE, "q": 1.0, "s": s, "n_k": 1},
            grid=FLUORESCENCE_GRID,
            name=f"fig2_s{s:.3f}",
            output=f"fig2_s{s:.3f}.csv",
        )
        for s in (1.0, 1.007, 1.01)
    ]


def _fig3() -> list[ScenarioConfig]:
    return [
        ScenarioConfig(
            kind="two_mode",
            params={**TWO_MODE, "q1": q, "q2": q},
            grid=TWO_MODE_GRID,
            name=f"fig3_q{q:.3f}",
            output=f"fig3_q{q:.3f}.csv",
        )
        for q in (1.0, 1.04, 1.08)
    ]


def _absorption(figure: str, kind: str, q_values, digits: int = 3) -> list[ScenarioConfig]:
    configs = []
    for q in q_values:
        label = f"{figure}_q{q:.{digits}f}"
        configs.append(ScenarioConfig(
            kind=kind,
            params={**ABSORPTION, "q": float(q)},
            grid=ABSORPTION_GRID,
            name=label,
            output=f"{label}.csv",
        ))
    return configs


PRESETS = {
    "fig1": _fig1,
    "fig2": _fig2,
    "fig3": _fig3,
    "fig4": lambda: _absorption("fig4", "absorption_linear", (0.99, 1.0, 1.01)),
    "fig5": lambda: _absorption("fig5", "absorption_linear", np.linspace(0.99, 1.01, 9), digits=4),
    "fig6": lambda: _absorption("fig6", "absorption_third", (0.99, 1.0, 1.01)),
}


def preset(name: str) -> list[ScenarioConfig]:
    """
    Scenario set of a figure preset.

    Raises:
        ConfigError: for an unknown preset name.
    """
    if name not in PRESETS:
        raise ConfigError(f"Unknown preset: {name} (available: {', '.join(sorted(PRESETS))})")
    return PRESETS[name]()
