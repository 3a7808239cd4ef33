"""
Scenario execution with asyncio.

Routes each scenario config to the handler registered for its kind, writes
the resulting curve as CSV (and optionally SVG) and runs independent
scenarios concurrently.
"""

import asyncio
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .config import ScenarioConfig
from .errors import ConfigError
from .plotting import write_svg
from .scenarios import ScenarioContext

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ScenarioResult:
    """A finished scenario and the files it produced."""
    config: ScenarioConfig
    grid: np.ndarray
    values: np.ndarray
    csv_path: Path
    svg_path: Path | None = None


def evaluate(
    config: ScenarioConfig,
    handlers: dict[str, Callable],
) -> tuple[np.ndarray, np.ndarray]:
    """
    Evaluate one scenario.

    Args:
        config: The scenario to evaluate.
        handlers: Dictionary of kind -> handler function.

    Returns:
        The energy grid and the value column.
    """
    handler = handlers.get(config.kind)
    if handler is None:
        raise ConfigError(f"No handler registered for kind '{config.kind}'")

    grid = config.grid.values()
    ctx = ScenarioContext(config=config, grid=grid)
    values = np.asarray(handler(ctx, **config.params), dtype=float)
    if values.shape != grid.shape:
        raise ConfigError(f"handler for '{config.kind}' returned {values.shape}, expected {grid.shape}")
    return grid, values


def write_csv(path: Path, grid: np.ndarray, values: np.ndarray, column: str) -> None:
    """Write `omega_eV,<column>` rows with 17 significant digits and LF endings."""
    np.savetxt(
        path,
        np.column_stack((grid, values)),
        fmt="%.17g",
        delimiter=",",
        header=f"omega_eV,{column}",
        comments="",
        newline="\n",
    )


class ScenarioRunner:
    """
    Runs scenarios and writes their outputs into one directory.

    Handles:
    - Kind -> handler dispatch
    - CSV and optional SVG output
    - Bounded concurrent execution (results keep the input order)
    """

    def __init__(
        self,
        handlers: dict[str, Callable],
        out_dir: Path,
        svg: bool = False,
        jobs: int = 1,
    ):
        if jobs < 1:
            raise ConfigError(f"jobs must be at least 1, got {jobs}")
        self.handlers = handlers
        self.out_dir = Path(out_dir)
        self.svg = svg
        self.jobs = jobs

    def run_one(self, config: ScenarioConfig) -> ScenarioResult:
        """Evaluate one scenario and write its files."""
        grid, values = evaluate(config, self.handlers)

        self.out_dir.mkdir(parents=True, exist_ok=True)
        csv_path = self.out_dir / config.output_name
        write_csv(csv_path, grid, values, config.value_column)
        print(f"  -> wrote {csv_path}")

        svg_path = None
        if self.svg:
            svg_path = csv_path.with_suffix(".svg")
            write_svg(svg_path, grid, values, config.value_column, title=config.name)
            print(f"  -> wrote {svg_path}")

        return ScenarioResult(config=config, grid=grid, values=values, csv_path=csv_path, svg_path=svg_path)

    async def run_all(self, configs: list[ScenarioConfig]) -> list[ScenarioResult]:
        """Run all scenarios, at most `jobs` at a time."""
        limit = asyncio.Semaphore(self.jobs)

        async def run_limited(config: ScenarioConfig) -> ScenarioResult:
            async with limit:
                logger.info("running %s (%s)", config.name, config.kind)
                return await asyncio.to_thread(self.run_one, config)

        tasks = [asyncio.create_task(run_limited(config)) for config in configs]
        try:
            return list(await asyncio.gather(*tasks))
        finally:
            for task in tasks:
                task.cancel()
            await asyncio.gather(*tasks, return_exceptions=True)

    def run(self, configs: list[ScenarioConfig]) -> list[ScenarioResult]:
        return asyncio.run(self.run_all(configs))
