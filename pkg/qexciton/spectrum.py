"""
Energy grids and Lorentzian spectra.

Shared by the single-mode, deformed-polariton and two-mode spectra.
"""

from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks

from .errors import DomainError, ZeroLinewidthError


@dataclass(frozen=True)
class EnergyGrid:
    """Uniform energy grid in eV."""
    start: float
    stop: float
    points: int

    def __post_init__(self) -> None:
        if self.points < 2:
            raise DomainError(f"grid needs at least 2 points, got {self.points}")
        if not self.start < self.stop:
            raise DomainError(f"grid start must be below stop ({self.start} >= {self.stop})")

    @property
    def step(self) -> float:
        return (self.stop - self.start) / (self.points - 1)

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


def as_grid(grid) -> np.ndarray:
    """Accept an EnergyGrid or an array of energies; check it is strictly increasing."""
    if isinstance(grid, EnergyGrid):
        return grid.values()
    values = np.asarray(grid, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise DomainError("grid must be a nonempty 1-D sequence of energies")
    if np.any(np.diff(values) <= 0):
        raise DomainError("grid must be strictly increasing")
    return values


@dataclass(frozen=True)
class Lorentzian:
    """One branch of a spectrum: weight * width / ((w - center)^2 + width^2)."""
    center: float
    width: float
    weight: float

    def __call__(self, omega):
        omega = np.asarray(omega, dtype=float)
        return self.weight * self.width / ((omega - self.center) ** 2 + self.width ** 2)

    @property
    def peak(self) -> float:
        return self.weight / self.width

    @property
    def area(self) -> float:
        """Integral over the whole real line."""
        return np.pi * self.weight


@dataclass(frozen=True, eq=False)
class SpectrumSeries:
    """Sampled spectrum with its per-branch Lorentzian decomposition."""
    grid: np.ndarray
    values: np.ndarray
    branches: tuple[Lorentzian, ...]

    def branch_values(self, index: int) -> np.ndarray:
        """Contribution of branch `index` (0-based) on the grid."""
        return self.branches[index](self.grid)

    def peaks(self, min_height: float = 0.0) -> np.ndarray:
        """Energies of interior local maxima whose height is at least min_height * max."""
        threshold = min_height * float(np.max(self.values)) if self.values.size else 0.0
        indices, _ = find_peaks(self.values, height=threshold)
        return self.grid[indices]

    def peak_heights(self, min_height: float = 0.0) -> np.ndarray:
        threshold = min_height * float(np.max(self.values)) if self.values.size else 0.0
        indices, _ = find_peaks(self.values, height=threshold)
        return self.values[indices]

    def splitting(self, min_height: float = 0.0) -> float:
        """Energy separation of the two strongest local maxima."""
        peaks = self.peaks(min_height)
        if peaks.size < 2:
            raise DomainError(f"spectrum has {peaks.size} resolved peak(s), need 2 for a splitting")
        strongest = np.sort(peaks[np.argsort(self.peak_heights(min_height))[-2:]])
        return float(strongest[1] - strongest[0])


def lorentzian_sum(
    grid,
    centers,
    widths,
    weights,
) -> SpectrumSeries:
    """
    Build a spectrum from branch centers, widths and weights.

    Branches are summed in their given order at every grid point.

    Raises:
        ZeroLinewidthError: if any width is zero.
    """
    omega = as_grid(grid)
    branches = []
    for index, (center, width, weight) in enumerate(zip(centers, widths, weights), 1):
        if width == 0:
            raise ZeroLinewidthError(index)
        if width < 0:
            raise DomainError(f"negative linewidth {width} on branch {index}")
        branches.append(Lorentzian(center=float(center), width=float(width), weight=float(weight)))

    values = np.zeros_like(omega)
    for branch in branches:
        values = values + branch(omega)

    return SpectrumSeries(grid=omega, values=values, branches=tuple(branches))
