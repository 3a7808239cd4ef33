"""
One cavity mode coupled to two deformed exciton modes.

The three polariton branches are the roots of a cubic. The characteristic
cubic is kept in factored form and evaluated through the differences
Omega - c, Omega - d, Omega - e, so that neither the eV offset nor a huge
k(n) swamps the small root differences. Starting values come from the
companion matrix and every root is polished with Newton steps.

Notation:
    c = omega_ex1 k(n1) - i gamma_ex1
    d = omega_ex2 k(n2) - i gamma_ex2
    e = omega - i gamma_ph
"""

import cmath
import logging
import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import qalgebra
from .errors import DegeneracyError, DomainError, NumericalError
from .spectrum import SpectrumSeries, lorentzian_sum

logger = logging.getLogger(__name__)

CUBIC_FORMS = ("consistent", "printed")
COEFFICIENT_MODES = ("eigenvector", "printed")

RESIDUAL_TOL = 1e-9
DISCRIMINANT_TOL = 1e-12
CLUSTER_TOL = 1e-4
EIGEN_RESIDUAL_TOL = 1e-8
MAX_NEWTON_STEPS = 50

_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class TwoModeParams:
    """Cavity mode plus two exciton modes sharing one coupling constant."""
    omega: float
    omega_ex1: float
    omega_ex2: float
    g: float
    gamma_ex1: float = 0.0
    gamma_ex2: float = 0.0
    gamma_ph: float = 0.0
    q1: float = 1.0
    q2: float = 1.0
    n1: int = 0
    n2: int = 0
    alpha_sq: float = 0.0
    scale: float = 1.0

    def __post_init__(self) -> None:
        for name in ("omega", "omega_ex1", "omega_ex2", "g", "gamma_ex1",
                     "gamma_ex2", "gamma_ph", "alpha_sq", "scale"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if self.g < 0:
            raise DomainError(f"coupling g must be non-negative, got {self.g}")
        if min(self.gamma_ex1, self.gamma_ex2, self.gamma_ph) < 0:
            raise DomainError("damping constants must be non-negative")
        if self.n1 < 0 or self.n2 < 0:
            raise DomainError("occupations must be non-negative")
        if self.alpha_sq < 0:
            raise DomainError("alpha_sq must be non-negative")
        if self.scale <= 0:
            raise DomainError("scale A(r) must be positive")
        # validates q1, q2
        qalgebra.k_factor(self.q1, self.n1)
        qalgebra.k_factor(self.q2, self.n2)

    @property
    def k1(self) -> float:
        return qalgebra.k_factor(self.q1, self.n1)

    @property
    def k2(self) -> float:
        return qalgebra.k_factor(self.q2, self.n2)

    @property
    def c(self) -> complex:
        return complex(self.omega_ex1 * self.k1, -self.gamma_ex1)

    @property
    def d(self) -> complex:
        return complex(self.omega_ex2 * self.k2, -self.gamma_ex2)

    @property
    def e(self) -> complex:
        return complex(self.omega, -self.gamma_ph)

    def system_matrix(self) -> np.ndarray:
        """Matrix acting on (u, x, v) whose eigenvalues are the branch frequencies."""
        g, k1, k2 = self.g, self.k1, self.k2
        return np.array([
            [self.c, 0.0, g],
            [0.0, self.d, g],
            [g * k1, g * k2, self.e],
        ], dtype=complex)


@dataclass(frozen=True)
class CubicPolynomial:
    """
    Cubic a3 z^3 + a2 z^2 + a1 z + a0 in the shifted variable z = Omega - shift.

    When `factors` = (c, d, e, alpha, beta) is given, the same monic cubic is
    (W - c)(W - d)(W - e) - beta (W - c) - alpha (W - d) and evaluation uses
    that form.
    """
    coeffs: tuple[complex, complex, complex, complex]
    shift: complex = 0j
    factors: tuple[complex, complex, complex, complex, complex] | None = None

    def __post_init__(self) -> None:
        if len(self.coeffs) != 4:
            raise DomainError(f"a cubic needs 4 coefficients, got {len(self.coeffs)}")
        if self.coeffs[0] == 0:
            raise DomainError("leading coefficient of the cubic is zero")
        if self.factors is not None and len(self.factors) != 5:
            raise DomainError(f"factored cubic needs (c, d, e, alpha, beta), got {len(self.factors)} values")

    @classmethod
    def from_coefficients(cls, coeffs) -> "CubicPolynomial":
        """Build from coefficients in Omega (highest degree first), recentred on -a2/(3 a3)."""
        a3, a2, a1, a0 = (complex(c) for c in coeffs)
        if a3 == 0:
            raise DomainError("leading coefficient of the cubic is zero")
        b, c, d = a2 / a3, a1 / a3, a0 / a3
        s = -b / 3
        return cls(
            coeffs=(1 + 0j, 3 * s + b, (3 * s + 2 * b) * s + c, ((s + b) * s + c) * s + d),
            shift=s,
        )

    def _offsets(self, omega):
        c, d, e, _, _ = self.factors
        omega = np.asarray(omega, dtype=complex)
        return omega - c, omega - d, omega - e

    def __call__(self, omega):
        if self.factors is not None:
            dc, dd, de = self._offsets(omega)
            alpha, beta = self.factors[3:]
            return dc * dd * de - beta * dc - alpha * dd
        z = np.asarray(omega, dtype=complex) - self.shift
        a3, a2, a1, a0 = self.coeffs
        return ((a3 * z + a2) * z + a1) * z + a0

    def derivative(self, omega):
        if self.factors is not None:
            dc, dd, de = self._offsets(omega)
            alpha, beta = self.factors[3:]
            return dd * de + dc * de + dc * dd - alpha - beta
        z = np.asarray(omega, dtype=complex) - self.shift
        a3, a2, a1, _ = self.coeffs
        return (3 * a3 * z + 2 * a2) * z + a1

    def rounding_scale(self, omega) -> float:
        """
        Sum of the magnitudes of the terms summed when evaluating P(omega).

        Rounding errors in P(omega) are a few ulps of this value.
        """
        if self.factors is not None:
            dc, dd, de = (abs(complex(x)) for x in self._offsets(omega))
            alpha, beta = (abs(x) for x in self.factors[3:])
            return dc * dd * de + beta * dc + alpha * dd
        z = abs(complex(omega) - self.shift)
        a3, a2, a1, a0 = (abs(c) for c in self.coeffs)
        return ((a3 * z + a2) * z + a1) * z + a0

    def coefficients(self) -> np.ndarray:
        """Monic coefficients in Omega, highest degree first."""
        if self.factors is not None:
            c, d, e, alpha, beta = self.factors
            return np.array([
                1 + 0j,
                -(c + d + e),
                c * d + c * e + d * e - alpha - beta,
                -(c * d * e) + beta * c + alpha * d,
            ], dtype=complex)
        shifted = np.poly1d(np.asarray(self.coeffs, dtype=complex) / self.coeffs[0])
        return np.asarray(shifted(np.poly1d([1.0, -self.shift])).coeffs, dtype=complex)


@dataclass(frozen=True)
class CubicRoots:
    """Roots ordered by (Re, Im) with their residuals and degeneracy flags."""
    roots: tuple[complex, complex, complex]
    residuals: tuple[float, float, float]
    degenerate: tuple[bool, bool, bool] = (False, False, False)

    @property
    def any_degenerate(self) -> bool:
        return any(self.degenerate)


def characteristic_cubic(p: TwoModeParams, form: str = "consistent") -> CubicPolynomial:
    """
    Cubic whose roots are the three branch frequencies.

    "consistent" is the determinant of (system_matrix - Omega):
        (c - W)[(d - W)(e - W) - g^2 k2] - g^2 k1 (d - W) = 0
    "printed" is the closed form with k1 and k2 attached to the opposite
    detunings; both agree when k(n1) = k(n2).
    """
    if form not in CUBIC_FORMS:
        raise DomainError(f"unknown cubic form {form!r}; expected one of {CUBIC_FORMS}")
    c, d, e = p.c, p.d, p.e
    shift = (c + d + e) / 3
    cs, ds, es = c - shift, d - shift, e - shift
    g2 = p.g * p.g
    k1, k2 = p.k1, p.k2
    if form == "printed":
        k1, k2 = k2, k1

    # P(z) = (z - cs)(z - ds)(z - es) - g^2 k2 (z - cs) - g^2 k1 (z - ds)
    return CubicPolynomial(
        coeffs=(
            1 + 0j,
            -(cs + ds + es),
            cs * ds + cs * es + ds * es - g2 * (k1 + k2),
            -(cs * ds * es) + g2 * k2 * cs + g2 * k1 * ds,
        ),
        shift=shift,
        factors=(c, d, e, g2 * k1, g2 * k2),
    )


def _has_multiple_root(b: complex, c: complex, d: complex, scale: float) -> bool:
    """Whether z^3 + b z^2 + c z + d has a vanishing discriminant up to rounding."""
    p = c - b * b / 3
    q = 2 * b ** 3 / 27 - b * c / 3 + d
    if abs(p) <= DISCRIMINANT_TOL * scale ** 2 and abs(q) <= DISCRIMINANT_TOL * scale ** 3:
        return True
    half_q = q / 2
    third_p = p / 3
    disc = half_q * half_q + third_p ** 3
    return abs(disc) <= DISCRIMINANT_TOL * max(abs(half_q) ** 2, abs(third_p) ** 3)


def _starting_values(poly: CubicPolynomial) -> list[complex]:
    if poly.factors is not None:
        starts = np.roots(poly.coefficients())
    else:
        starts = np.roots(np.asarray(poly.coeffs, dtype=complex)) + poly.shift
    return [complex(r) for r in starts]


def _polish(poly: CubicPolynomial, omega: complex, radius: float) -> complex:
    """Newton steps while |P| decreases and the root stays within radius of its start."""
    start = omega
    value = complex(poly(omega))
    for _ in range(MAX_NEWTON_STEPS):
        slope = complex(poly.derivative(omega))
        if value == 0 or slope == 0:
            break
        step = value / slope
        candidate = omega - step
        if abs(candidate - start) > radius:
            break
        candidate_value = complex(poly(candidate))
        if abs(candidate_value) >= abs(value):
            break
        omega, value = candidate, candidate_value
        if abs(step) <= 2 * _EPS * abs(omega):
            break
    return omega


def _merge_clusters(roots: list[complex]) -> tuple[list[complex], list[bool]]:
    def close(i: int, j: int) -> bool:
        return abs(roots[i] - roots[j]) <= CLUSTER_TOL * max(abs(roots[i]), abs(roots[j]))

    pairs = list(combinations(range(3), 2))
    if all(close(i, j) for i, j in pairs):
        mean = sum(roots) / 3
        return [mean, mean, mean], [True, True, True]

    i, j = min(pairs, key=lambda ij: abs(roots[ij[0]] - roots[ij[1]]))
    if not close(i, j):
        return roots, [False, False, False]
    merged = list(roots)
    merged[i] = merged[j] = (roots[i] + roots[j]) / 2
    flags = [False, False, False]
    flags[i] = flags[j] = True
    return merged, flags


def solve_cubic(poly) -> CubicRoots:
    """
    Roots of a cubic (CubicPolynomial or 4 coefficients, highest degree first).

    Companion-matrix eigenvalues (numpy.roots) are polished with Newton steps
    and ordered by (Re, Im). Where the discriminant vanishes, roots closer
    than CLUSTER_TOL (relative) are replaced by their mean and flagged.

    Raises:
        DomainError: if the leading coefficient is zero.
        NumericalError: if a residual exceeds RESIDUAL_TOL * rounding_scale
            plus the rounding of the root itself.
    """
    if not isinstance(poly, CubicPolynomial):
        poly = CubicPolynomial.from_coefficients(poly)

    a3, a2, a1, a0 = poly.coeffs
    b, c, d = a2 / a3, a1 / a3, a0 / a3
    scale = max(abs(poly.shift), abs(b), math.sqrt(abs(c)), abs(d) ** (1 / 3), 1e-300)

    starts = _starting_values(poly)
    roots = []
    for i, start in enumerate(starts):
        radius = 0.5 * min(abs(start - other) for j, other in enumerate(starts) if j != i)
        roots.append(_polish(poly, start, radius))

    flags = [False, False, False]
    if _has_multiple_root(b, c, d, scale):
        roots, flags = _merge_clusters(roots)

    order = sorted(range(3), key=lambda i: (roots[i].real, roots[i].imag))
    roots = [roots[i] for i in order]
    flags = [flags[i] for i in order]

    residuals = tuple(float(abs(complex(poly(r)))) for r in roots)
    for root, residual, flagged in zip(roots, residuals, flags):
        bound = RESIDUAL_TOL * poly.rounding_scale(root)
        bound += 4 * _EPS * abs(complex(poly.derivative(root))) * abs(root)
        if flagged:
            # a multiple root sits where the coefficients are pure rounding
            bound += RESIDUAL_TOL * scale ** 3
        if residual > bound:
            raise NumericalError(f"cubic root {root!r} has residual {residual:.3e}")

    if any(flags):
        logger.info("degenerate cubic roots: %s", roots)

    return CubicRoots(roots=tuple(roots), residuals=residuals, degenerate=tuple(flags))


def _eigenvector_coefficients(p: TwoModeParams, omega_c: complex) -> tuple[complex, complex, complex]:
    matrix = p.system_matrix()
    shifted = matrix.copy()
    shifted[0, 0] = p.c - omega_c
    shifted[1, 1] = p.d - omega_c
    shifted[2, 2] = p.e - omega_c

    _, _, vh = np.linalg.svd(shifted)
    vector = vh[-1].conj()

    residual = np.linalg.norm(shifted @ vector)
    bound = EIGEN_RESIDUAL_TOL * np.linalg.norm(matrix, 2) * np.linalg.norm(vector)
    if residual > bound:
        raise NumericalError(f"branch at {omega_c!r} is not an eigenvalue (residual {residual:.3e})")

    u, x, v = vector
    norm = math.sqrt(abs(u) ** 2 * p.k1 + abs(x) ** 2 * p.k2 + abs(v) ** 2)
    vector = vector / norm
    # global phase: largest component real and positive
    pivot = vector[int(np.argmax(np.abs(vector)))]
    vector = vector * (abs(pivot) / pivot)
    return complex(vector[0]), complex(vector[1]), complex(vector[2])


def _printed_coefficients(p: TwoModeParams, omega_c: complex) -> tuple[complex, complex, complex]:
    g, k1, k2 = p.g, p.k1, p.k2
    c_off = p.c - omega_c
    d_off = p.d - omega_c
    e_off = p.e - omega_c
    bracket = d_off * e_off - g * g * k2
    norm_sq = (g * g * k1 + c_off ** 2) * bracket ** 2 + g ** 6 * k1 ** 2 * k2
    a = cmath.sqrt(norm_sq)

    size = max(g, abs(c_off), abs(d_off), abs(e_off), 1e-300)
    if abs(a) <= DISCRIMINANT_TOL * size ** 3:
        raise DegeneracyError(f"normaliser A vanishes on branch {omega_c!r}")
    return g * bracket / a, g ** 3 * k1 / a, -c_off * bracket / a


def three_mode_coefficients(
    p: TwoModeParams,
    branch: int,
    mode: str = "eigenvector",
    form: str = "consistent",
) -> tuple[complex, complex, complex]:
    """
    Coefficients (u_k, x_k, v_k) of branch 1..3 (roots ordered by Re, Im).

    "eigenvector": null vector of the system matrix, normalised so that
    |u|^2 k1 + |x|^2 k2 + |v|^2 = 1, largest component real positive.
    "printed": closed-form u/x/v with normaliser A.

    Raises:
        DegeneracyError: if the branch root is degenerate or A = 0.
    """
    if mode not in COEFFICIENT_MODES:
        raise DomainError(f"unknown coefficient mode {mode!r}; expected one of {COEFFICIENT_MODES}")
    if branch not in (1, 2, 3):
        raise DomainError(f"branch must be 1, 2 or 3, got {branch}")

    roots = solve_cubic(characteristic_cubic(p, form))
    if roots.degenerate[branch - 1]:
        raise DegeneracyError(f"branch {branch} is a degenerate root {roots.roots[branch - 1]!r}")

    omega_c = roots.roots[branch - 1]
    if mode == "printed":
        return _printed_coefficients(p, omega_c)
    return _eigenvector_coefficients(p, omega_c)


@dataclass(frozen=True)
class ThreeModeBranch:
    omega_c: complex
    u: complex
    x: complex
    v: complex
    gamma_branch: float


def three_mode_branches(
    p: TwoModeParams,
    linewidth: str = "branch",
    mode: str = "eigenvector",
    form: str = "consistent",
) -> tuple[ThreeModeBranch, ThreeModeBranch, ThreeModeBranch]:
    """
    All three branches with coefficients and widths.

    "branch" width is -Im(Omega_k); "constant" is the single-mode style
    ((gamma_ex1 + gamma_ex2)/2 + gamma_ph)/2.
    """
    roots = solve_cubic(characteristic_cubic(p, form)).roots
    if linewidth == "branch":
        widths = [-r.imag for r in roots]
    elif linewidth == "constant":
        widths = [((p.gamma_ex1 + p.gamma_ex2) / 2 + p.gamma_ph) / 2] * 3
    else:
        raise DomainError(f"unknown linewidth mode {linewidth!r}")

    branches = []
    for index, (omega_c, width) in enumerate(zip(roots, widths), 1):
        u, x, v = three_mode_coefficients(p, index, mode=mode, form=form)
        branches.append(ThreeModeBranch(omega_c=omega_c, u=u, x=x, v=v, gamma_branch=width))
    return tuple(branches)


def two_exciton_spectrum(
    p: TwoModeParams,
    grid,
    linewidth: str = "branch",
    mode: str = "eigenvector",
    form: str = "consistent",
) -> SpectrumSeries:
    """
    Fluorescence spectrum of the three-branch system.

    S(w) = (|alpha|^2 A / pi) sum_k |v_k|^2 G_k / (G_k^2 + (w - Re Omega_k)^2)
    """
    branches = three_mode_branches(p, linewidth=linewidth, mode=mode, form=form)
    prefactor = p.alpha_sq * p.scale / math.pi
    return lorentzian_sum(
        grid,
        centers=[b.omega_c.real for b in branches],
        widths=[b.gamma_branch for b in branches],
        weights=[prefactor * abs(b.v) ** 2 for b in branches],
    )
