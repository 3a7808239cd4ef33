"""
Base scenario infrastructure.

Provides ScenarioContext and the @scenario decorator for registering the
handler that evaluates one scenario kind.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..config import ScenarioConfig


@dataclass
class ScenarioContext:
    """Context passed to all scenario handlers."""
    config: ScenarioConfig
    grid: np.ndarray


# Global registry of scenario handlers
_scenario_registry: dict[str, Callable] = {}


def scenario(kind: str | None = None):
    """
    Decorator to register a scenario handler.

    The handler receives the context and the scenario params as keyword
    arguments and returns the value column sampled on ctx.grid.

    Usage:
        @scenario("single")
        def single(ctx: ScenarioContext, omega: float, ...) -> np.ndarray:
            ...
    """
    def decorator(func: Callable) -> Callable:
        _scenario_registry[kind if kind else func.__name__] = func
        return func

    # Handle @scenario without parentheses
    if callable(kind):
        func = kind
        _scenario_registry[func.__name__] = func
        return func

    return decorator


def get_registered_scenarios() -> dict[str, Callable]:
    """Get a copy of all registered scenario handlers."""
    return _scenario_registry.copy()
