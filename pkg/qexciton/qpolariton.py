"""
Polaritons obeying an s-deformed algebra.

The polariton commutator becomes M(n_k) instead of 1, which rescales the
branch frequencies by 1/M(n_k) and the coefficients by sqrt(M(n_k)).
"""

import math

from . import qalgebra
from .polariton import SystemParams, hopfield_coefficients, linewidths, polariton_spectrum
from .spectrum import SpectrumSeries, lorentzian_sum


def deformed_polariton_spectrum(
    p: SystemParams, q: float, n: int, s: float, n_k: int
) -> tuple[complex, complex]:
    """Deformed branch frequencies Omega'_k = Omega_k / M(n_k)."""
    m = qalgebra.M_factor(s, n_k)
    omega_1, omega_2 = polariton_spectrum(p, q, n)
    return omega_1 / m, omega_2 / m


def deformed_hopfield_coefficients(
    p: SystemParams, q: float, n: int, s: float, n_k: int, branch: int
) -> tuple[complex, complex]:
    """
    Coefficients (u_k, v_k) of the deformed polaritons.

    Undamped branches satisfy |u|^2 k(n) + |v|^2 = M(n_k).
    """
    root_m = math.sqrt(qalgebra.M_factor(s, n_k))
    u, v = hopfield_coefficients(p, q, n, branch)
    return root_m * u, root_m * v


def deformed_emission_spectrum(
    p: SystemParams,
    q: float,
    n: int,
    s: float,
    n_k: int,
    grid,
    linewidth: str = "constant",
) -> SpectrumSeries:
    """
    Fluorescence spectrum with s-deformed polaritons.

    S(w) = (A |alpha|^2 (|v_1|^2 + |v_2|^2) / pi)
           * sum_i |v_i|^2 G_i / ((w - Re Omega'_i M)^2 + G_i^2)

    The centers Omega'_i M(n_k) coincide with the undeformed branches.
    """
    # Omega'_i M(n_k) is the undeformed Omega_i.
    omegas = polariton_spectrum(p, q, n)
    widths = linewidths(p, omegas, linewidth)

    photon_weights = [
        abs(deformed_hopfield_coefficients(p, q, n, s, n_k, branch)[1]) ** 2
        for branch in (1, 2)
    ]
    prefactor = p.scale * p.alpha_sq * sum(photon_weights) / math.pi
    return lorentzian_sum(
        grid,
        centers=[omega.real for omega in omegas],
        widths=widths,
        weights=[prefactor * weight for weight in photon_weights],
    )
