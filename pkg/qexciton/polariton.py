"""
One exciton mode coupled to one cavity mode.

Complex polariton spectrum, Hopfield coefficients and the resonance
fluorescence spectrum for a cavity field prepared in a coherent state.
Energies are in eV with hbar = 1.
"""

import cmath
import logging
import math
from dataclasses import dataclass

from . import qalgebra
from .errors import DegeneracyError, DomainError
from .spectrum import SpectrumSeries, lorentzian_sum

logger = logging.getLogger(__name__)

LINEWIDTH_MODES = ("constant", "branch")

# |omega - 2 Omega + omega_ex k - i(gamma_ex + gamma_ph)| below this (relative
# to the largest diagonal entry) is treated as an exceptional point.
EXCEPTIONAL_TOL = 1e-12


@dataclass(frozen=True)
class SystemParams:
    """Cavity and exciton parameters of the single-mode model."""
    omega: float  # cavity mode energy
    omega_ex: float  # exciton energy
    g: float  # coupling
    gamma_ex: float = 0.0  # exciton damping
    gamma_ph: float = 0.0  # photon damping
    alpha_sq: float = 0.0  # |alpha|^2 of the initial coherent state
    scale: float = 1.0  # geometric factor A(r)

    def __post_init__(self) -> None:
        for name in ("omega", "omega_ex", "g", "gamma_ex", "gamma_ph", "alpha_sq", "scale"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if self.g < 0:
            raise DomainError(f"coupling g must be non-negative, got {self.g}")
        if self.gamma_ex < 0 or self.gamma_ph < 0:
            raise DomainError("damping constants must be non-negative")
        if self.alpha_sq < 0:
            raise DomainError("alpha_sq must be non-negative")
        if self.scale <= 0:
            raise DomainError("scale A(r) must be positive")

    def exciton_energy(self, k: float) -> complex:
        """Diagonal exciton entry omega_ex k - i gamma_ex."""
        return complex(self.omega_ex * k, -self.gamma_ex)

    @property
    def photon_energy(self) -> complex:
        return complex(self.omega, -self.gamma_ph)


@dataclass(frozen=True)
class PolaritonBranch:
    """One polariton branch: eigenfrequency, Hopfield coefficients, damping."""
    omega_c: complex
    u: complex  # exciton coefficient
    v: complex  # photon coefficient
    gamma_branch: float


@dataclass(frozen=True)
class _Branch:
    omega_c: complex
    exciton_offset: complex  # omega_ex k - i gamma_ex - Omega
    photon_offset: complex  # omega - i gamma_ph - Omega
    denominator: complex  # omega - 2 Omega + omega_ex k - i(gamma_ex + gamma_ph)


def _solve_branch(p: SystemParams, k: float, branch: int) -> _Branch:
    if branch not in (1, 2):
        raise DomainError(f"branch must be 1 or 2, got {branch}")
    a = p.exciton_energy(k)
    b = p.photon_energy
    coupling = p.g * p.g * k
    delta = complex(p.omega_ex * k - p.omega, -(p.gamma_ex - p.gamma_ph)) / 2
    root = cmath.sqrt(delta * delta + coupling)
    sign = 1 if branch == 1 else -1

    # (a - Omega)(b - Omega) = g^2 k; the smaller offset is recovered from
    # the product so that it keeps full relative precision.
    x = delta - sign * root
    y = -delta - sign * root
    if abs(x) <= abs(y):
        if y != 0:
            x = coupling / y
        omega_c = a - x
    else:
        if x != 0:
            y = coupling / x
        omega_c = b - y

    return _Branch(
        omega_c=omega_c,
        exciton_offset=x,
        photon_offset=y,
        denominator=-2 * sign * root,
    )


def polariton_spectrum(p: SystemParams, q: float, n: int) -> tuple[complex, complex]:
    """
    Complex branch frequencies (Omega_1, Omega_2).

    Branch 1 carries the "+" square root (principal branch). The pair equals
    the eigenvalues of [[omega_ex k - i gamma_ex, g], [g k, omega - i gamma_ph]].
    """
    k = qalgebra.k_factor(q, n)
    return _solve_branch(p, k, 1).omega_c, _solve_branch(p, k, 2).omega_c


def hopfield_coefficients(p: SystemParams, q: float, n: int, branch: int) -> tuple[complex, complex]:
    """
    Exciton and photon coefficients (u_k, v_k) of one branch.

    |u| and |v| follow the closed forms; the relative sign of v is the one
    that solves the linear system, so (u, v) is an eigenvector of the
    branch. Undamped branches satisfy |u|^2 k(n) + |v|^2 = 1.

    Raises:
        DegeneracyError: at an exceptional point, where both branches coalesce.
    """
    k = qalgebra.k_factor(q, n)
    solved = _solve_branch(p, k, branch)
    scale = max(1.0, abs(p.exciton_energy(k)), abs(p.photon_energy))
    if abs(solved.denominator) <= EXCEPTIONAL_TOL * scale:
        raise DegeneracyError(
            f"exceptional point: branches coalesce at Omega={solved.omega_c:.12g}"
        )

    u = cmath.sqrt(solved.photon_offset / (k * solved.denominator))
    if p.g > 0:
        v = -solved.exciton_offset * u / p.g
    else:
        v = -cmath.sqrt(solved.exciton_offset / solved.denominator)
    return u, v


def linewidths(p: SystemParams, omegas, mode: str = "constant") -> tuple[float, ...]:
    """
    Branch damping constants.

    "constant": (gamma_ex + gamma_ph) / 2 for every branch.
    "branch":   -Im(Omega_k) of each branch.
    """
    if mode == "constant":
        return tuple((p.gamma_ex + p.gamma_ph) / 2 for _ in omegas)
    if mode == "branch":
        return tuple(-complex(omega).imag for omega in omegas)
    raise DomainError(f"unknown linewidth mode {mode!r}; expected one of {LINEWIDTH_MODES}")


def polariton_branches(
    p: SystemParams, q: float, n: int, linewidth: str = "constant"
) -> tuple[PolaritonBranch, PolaritonBranch]:
    """Both branches with their coefficients and widths."""
    omegas = polariton_spectrum(p, q, n)
    widths = linewidths(p, omegas, linewidth)
    branches = []
    for index, (omega_c, width) in enumerate(zip(omegas, widths), 1):
        u, v = hopfield_coefficients(p, q, n, index)
        branches.append(PolaritonBranch(omega_c=omega_c, u=u, v=v, gamma_branch=width))
    return branches[0], branches[1]


def emission_spectrum(
    p: SystemParams,
    q: float,
    n: int,
    grid,
    linewidth: str = "constant",
) -> SpectrumSeries:
    """
    Resonance fluorescence spectrum of the cavity field.

    S(w) = (A |alpha|^2 / pi) sum_i |v_i|^2 G_i / ((w - Re Omega_i)^2 + G_i^2)

    Raises:
        ZeroLinewidthError: if a branch width is zero.
    """
    branches = polariton_branches(p, q, n, linewidth)
    prefactor = p.scale * p.alpha_sq / math.pi
    logger.debug(
        "single-mode branches q=%s n=%s: %s",
        q, n, ", ".join(f"{b.omega_c:.9g}" for b in branches),
    )
    return lorentzian_sum(
        grid,
        centers=[b.omega_c.real for b in branches],
        widths=[b.gamma_branch for b in branches],
        weights=[prefactor * abs(b.v) ** 2 for b in branches],
    )
