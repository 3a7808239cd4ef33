"""
Optical response of a driven deformed exciton.

The dipole density is a series over the number n of virtual cavity quanta
exchanged with the exciton. For a monochromatic probe every time integral
is replaced by its adiabatic limit

    int_{-inf}^{t} E(t') exp(i nu t') dt'  ->  i / (w - nu + i eta)

so each linear term becomes one resonance and each cubic term a product of
three. Phase factors exp(+-i omega_ex k (t - t0)) are evaluated at t = t0,
leaving h_i(n) = 1 / (omega_ex k(n + i)).
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Union

import numpy as np

from . import qalgebra
from .errors import DomainError, TruncationError
from .spectrum import EnergyGrid, as_grid

logger = logging.getLogger(__name__)

DEFAULT_ETA = 50e-6
DEFAULT_TOLERANCE = 1e-12
MAX_TERMS = 200


@dataclass(frozen=True)
class ResponseParams:
    """Driven exciton coupled to one cavity mode, probed on an energy grid."""
    omega: float  # cavity mode energy
    omega_ex: float
    g: float
    q: float = 1.0
    dipole: float = 1.0  # |d_vc . E0|, arbitrary units
    eta: float = DEFAULT_ETA
    n_max: Union[int, str] = "auto"
    grid: object = field(default_factory=lambda: EnergyGrid(1.572, 1.576, 4001))
    tolerance: float = DEFAULT_TOLERANCE
    normalize: bool = True  # divide by the q = 1, dipole = 1 peak on the same grid

    def __post_init__(self) -> None:
        for name in ("omega", "omega_ex", "g", "q", "dipole", "eta", "tolerance"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if self.eta <= 0:
            raise DomainError(f"eta must be positive, got {self.eta}")
        if self.omega_ex <= 0:
            raise DomainError(f"omega_ex must be positive, got {self.omega_ex}")
        if self.g < 0:
            raise DomainError(f"coupling g must be non-negative, got {self.g}")
        if self.g >= self.omega_ex:
            raise DomainError(
                f"series does not converge for g >= omega_ex ({self.g} >= {self.omega_ex})"
            )
        if self.n_max != "auto":
            if isinstance(self.n_max, bool) or not isinstance(self.n_max, int) or self.n_max < 1:
                raise DomainError(f"n_max must be a positive integer or 'auto', got {self.n_max!r}")
        if self.tolerance <= 0:
            raise DomainError("tolerance must be positive")
        qalgebra.k_factor(self.q, 0)


@dataclass(frozen=True, eq=False)
class SusceptibilitySeries:
    """Linear and cubic response sampled on the probe grid."""
    grid: np.ndarray
    chi1: np.ndarray
    alpha1: np.ndarray
    chi3: np.ndarray
    alpha3: np.ndarray
    terms_used: int
    truncation_error: float


def L_function(q: float, n, omega: float, omega_ex: float, eta: float):
    """
    [n]_q [1/((w - w_ex k(n-1) + i eta)(w - w_ex k(n+1) + i eta))
         + 1/((w - w_ex k(n+2) + i eta)(w - w_ex k(n) + i eta))]

    w is the cavity energy. Accepts an integer array for n.
    """
    if eta <= 0:
        raise DomainError(f"eta must be positive, got {eta}")
    n = np.asarray(n)
    k = lambda m: np.asarray(qalgebra.k_factor(q, m))  # noqa: E731
    detuned = lambda m: omega - omega_ex * k(m) + 1j * eta  # noqa: E731
    bracket = 1.0 / (detuned(n - 1) * detuned(n + 1)) + 1.0 / (detuned(n + 2) * detuned(n))
    value = np.asarray(qalgebra.q_bracket(q, n)) * bracket
    if value.ndim == 0:
        return complex(value)
    return value


class _Weights:
    """Log-space factorial tables for terms up to occupation n_top."""

    def __init__(self, p: ResponseParams, n_top: int):
        m = np.arange(1, n_top + 1)
        f = np.asarray(qalgebra.q_number_sqrt(p.q, np.arange(0, n_top + 1)), dtype=float)
        self.f = f
        self.log_f_fact = np.concatenate(([0.0], np.cumsum(np.log(f[1:]))))
        self.log_h0_fact = np.concatenate(
            ([0.0], -np.cumsum(np.log(p.omega_ex * np.asarray(qalgebra.k_factor(p.q, m)))))
        )
        self.log_h1_fact = np.concatenate(
            ([0.0], -np.cumsum(np.log(p.omega_ex * np.asarray(qalgebra.k_factor(p.q, m + 1)))))
        )
        self.damping_1 = np.exp(-0.5 * p.g ** 2 * L_function(p.q, 1, p.omega, p.omega_ex, p.eta))
        self.damping_0 = np.exp(-0.5 * p.g ** 2 * L_function(p.q, 0, p.omega, p.omega_ex, p.eta))
        self.p = p

    def outer(self, n: int) -> complex:
        """g^2n / n! h_1(n)! sqrt(f_q(n)!) exp(-g^2 L(n) / 2)."""
        p = self.p
        if n == 0:
            log_w = 0.0
        elif p.g == 0:
            return 0j
        else:
            log_w = 2 * n * math.log(p.g) - math.lgamma(n + 1)
        log_w += self.log_h1_fact[n] + 0.5 * self.log_f_fact[n]
        return math.exp(log_w) * np.exp(-0.5 * p.g ** 2 * L_function(p.q, n, p.omega, p.omega_ex, p.eta))

    def amplitude(self, h_index: int, f_index: int) -> float:
        """h_0(h_index)! sqrt(f_q(f_index)! f_q(f_index))."""
        log_a = self.log_h0_fact[h_index] + 0.5 * self.log_f_fact[f_index]
        return math.exp(log_a) * math.sqrt(self.f[f_index])


def _resonance(omega: np.ndarray, nu: float, eta: float) -> np.ndarray:
    return 1j / (omega - nu + 1j * eta)


def _series_terms(p: ResponseParams, omega: np.ndarray, n: int, tables: _Weights):
    """
    Linear and cubic contributions of occupation n, without the dipole powers.

    Every factor is evaluated at the probe energy omega. A field factor
    resonant at nu contributes i / (omega - nu + i eta); its conjugate field
    enters as i / (omega + nu + i eta). The cubic term is the product of
    three such factors, so the 3 omega output is read on the same grid.
    """
    w_ex = p.omega_ex
    k = lambda m: float(qalgebra.k_factor(p.q, m))  # noqa: E731
    f = tables.f
    weight = tables.outer(n)
    if weight == 0:
        zero = np.zeros_like(omega, dtype=complex)
        return zero, zero

    r_ex = _resonance(omega, w_ex, p.eta)
    r_minus_ex = _resonance(omega, -w_ex, p.eta)
    r_down = _resonance(omega, w_ex * k(n - 1), p.eta)
    r_up = _resonance(omega, w_ex * k(n + 1), p.eta)
    r_minus_up = _resonance(omega, -w_ex * k(n + 1), p.eta)

    linear = (
        1j * tables.amplitude(n + 1, n + 1) * tables.damping_1 * r_ex
        - 1j * math.sqrt(f[n]) * tables.amplitude(n, n) * tables.damping_0 * r_down
    )
    cubic = 0.5j * (
        math.sqrt(f[n + 1]) * tables.amplitude(n + 2, n + 2) * tables.damping_0
        * r_ex * r_ex * r_minus_up
        + math.sqrt(f[n]) * tables.amplitude(n, n) * tables.damping_0
        * r_down * r_minus_ex * r_ex
        - math.sqrt(f[n + 1]) * tables.amplitude(n + 1, n + 1) * tables.damping_1
        * r_minus_up * r_up * r_ex
        - math.sqrt(f[n]) * tables.amplitude(n + 1, n + 1) * tables.damping_1
        * r_up * r_minus_up * r_ex
    )
    return weight * linear, weight * cubic


def _relative(term: np.ndarray, total: np.ndarray) -> float:
    size = float(np.max(np.abs(term)))
    if size == 0:
        return 0.0
    scale = float(np.max(np.abs(total)))
    return size / scale if scale > 0 else math.inf


def _sum_series(p: ResponseParams, omega: np.ndarray):
    n_top = MAX_TERMS if p.n_max == "auto" else p.n_max
    tables = _Weights(p, n_top + 3)

    chi1 = np.zeros_like(omega, dtype=complex)
    chi3 = np.zeros_like(omega, dtype=complex)
    error = math.inf
    for n in range(n_top + 1):
        linear, cubic = _series_terms(p, omega, n, tables)
        chi1 = chi1 + linear
        chi3 = chi3 + cubic
        if n == 0:
            continue
        error = max(_relative(linear, chi1), _relative(cubic, chi3))
        if p.n_max == "auto" and error <= p.tolerance:
            logger.debug("response series converged after %d terms (error %.3e)", n + 1, error)
            return chi1, chi3, n + 1, error

    if error > p.tolerance:
        raise TruncationError(
            f"response series not converged at n_max={n_top}: last term {error:.3e} "
            f"relative, tolerance {p.tolerance:.3e}"
        )
    return chi1, chi3, n_top + 1, error


def _raw_response(p: ResponseParams) -> SusceptibilitySeries:
    omega = as_grid(p.grid)
    chi1, chi3, terms, error = _sum_series(p, omega)
    chi1 = p.dipole * chi1
    chi3 = p.dipole ** 3 * chi3
    return SusceptibilitySeries(
        grid=omega,
        chi1=chi1,
        alpha1=chi1.imag,
        chi3=chi3,
        alpha3=chi3.imag,
        terms_used=terms,
        truncation_error=error,
    )


def susceptibility(p: ResponseParams) -> SusceptibilitySeries:
    """
    Linear and cubic response on the probe grid.

    With p.normalize, chi1 is divided by max |alpha1| and chi3 by max |alpha3|
    of the q = 1, dipole = 1 response on the same grid.

    Raises:
        TruncationError: if the series bound is unmet at n_max.
    """
    raw = _raw_response(p)
    if not p.normalize:
        return raw

    reference = _raw_response(replace(p, q=1.0, dipole=1.0, normalize=False))
    norm1 = float(np.max(np.abs(reference.alpha1))) or 1.0
    norm3 = float(np.max(np.abs(reference.alpha3))) or 1.0
    return replace(
        raw,
        chi1=raw.chi1 / norm1,
        alpha1=raw.alpha1 / norm1,
        chi3=raw.chi3 / norm3,
        alpha3=raw.alpha3 / norm3,
    )


def linear_susceptibility(p: ResponseParams) -> SusceptibilitySeries:
    """chi1 and alpha1 = Im chi1; the cubic part is left at zero."""
    full = susceptibility(p)
    zero = np.zeros_like(full.chi3)
    return replace(full, chi3=zero, alpha3=zero.real)


def third_order_absorption(p: ResponseParams) -> SusceptibilitySeries:
    """
    Cubic response chi3 and alpha3 = Im chi3; the linear part is left at zero.

    alpha3 is sampled on the probe grid itself: each cubic term is a product
    of three resonance factors in the probe energy, with conjugate-field
    factors i / (omega + nu + i eta).
    """
    full = susceptibility(p)
    zero = np.zeros_like(full.chi1)
    return replace(full, chi1=zero, alpha1=zero.real)


def quadratic_response(p: ResponseParams) -> np.ndarray:
    """
    Second-order response. The dipole density has no term quadratic in the
    field, so this is zero on every grid point.
    """
    omega = as_grid(p.grid)
    return np.zeros_like(omega, dtype=complex)


def absorption_map(p: ResponseParams, q_values) -> np.ndarray:
    """Linear absorption alpha1 for each q, shape (len(q_values), grid points)."""
    rows = [linear_susceptibility(replace(p, q=float(q))).alpha1 for q in q_values]
    return np.vstack(rows)
