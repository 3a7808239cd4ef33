"""
Shared fixtures: caption parameter sets of the published figures.
"""

import pytest
from hypothesis import settings

from qexciton.multimode import TwoModeParams
from qexciton.polariton import SystemParams
from qexciton.response import ResponseParams
from qexciton.spectrum import EnergyGrid

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")


@pytest.fixture
def microcavity() -> SystemParams:
    """Single exciton mode at resonance with the cavity."""
    return SystemParams(
        omega=1.75,
        omega_ex=1.75,
        g=200e-6,
        gamma_ex=20e-6,
        gamma_ph=40e-6,
        alpha_sq=9.0,
    )


@pytest.fixture
def doublet_grid() -> EnergyGrid:
    """0.25 ueV steps across the vacuum Rabi doublet."""
    return EnergyGrid(1.7485, 1.7515, 12001)


@pytest.fixture
def two_excitons():
    """Factory for the two-exciton cavity at a common deformation q."""
    def make(q: float = 1.0, **overrides) -> TwoModeParams:
        params = dict(
            omega=1.75,
            omega_ex1=1.75,
            omega_ex2=1.77,
            g=200e-6,
            gamma_ex1=200e-6,
            gamma_ex2=200e-6,
            gamma_ph=45e-6,
            q1=q,
            q2=q,
            n1=1,
            n2=1,
            alpha_sq=9.0,
        )
        params.update(overrides)
        return TwoModeParams(**params)
    return make


@pytest.fixture
def driven_exciton():
    """Factory for the driven 1s exciton probed around 1574 meV."""
    def make(q: float = 1.0, **overrides) -> ResponseParams:
        params = dict(
            omega=1.5,
            omega_ex=1.574,
            g=200e-6,
            q=q,
            eta=50e-6,
            grid=EnergyGrid(1.572, 1.576, 4001),
        )
        params.update(overrides)
        return ResponseParams(**params)
    return make
