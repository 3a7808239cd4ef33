"""
Scenario kinds.

Provides the @scenario decorator and ScenarioContext for the handlers that
turn a scenario config into a sampled curve.
"""

from .base import ScenarioContext, get_registered_scenarios, scenario


def load_builtin_scenarios() -> dict:
    """
    Load all built-in scenario handlers.

    This imports the built-in modules to trigger their @scenario decorators.
    """
    from . import absorption  # noqa: F401
    from . import spectra  # noqa: F401

    return get_registered_scenarios()


__all__ = ["ScenarioContext", "get_registered_scenarios", "load_builtin_scenarios", "scenario"]
