"""
Independent checks of the closed forms.

Dense eigensolvers, the fixed-excitation blocks of the cavity/exciton
Hamiltonian and a seeded random sweep that compares every closed form with
its brute-force counterpart. Matrices built here use their own k(n)
evaluation so that a fault in qalgebra shows up as a deviation.
"""

import logging
import math
from dataclasses import dataclass, field, replace

import mpmath
import numpy as np
from scipy import integrate, linalg
from scipy.optimize import linear_sum_assignment

from . import qalgebra
from .errors import DegeneracyError, DomainError, NumericalError
from .multimode import CubicPolynomial, TwoModeParams, characteristic_cubic, solve_cubic, three_mode_coefficients
from .polariton import SystemParams, emission_spectrum, hopfield_coefficients, polariton_spectrum
from .response import ResponseParams, quadratic_response, susceptibility
from .spectrum import EnergyGrid

logger = logging.getLogger(__name__)

MAX_DIM = 64
EIG_RESIDUAL_TOL = 1e-10
DAMPING_MODES = ("occupation", "constant")

# (name, tolerance) of every pass/fail check in validate_closed_forms
SWEEP_TOLERANCES = {
    "single_mode_eigenvalues": 1e-10,
    "two_mode_roots": 1e-10,
    "two_mode_companion": 1e-10,
    "two_mode_roots_reference": 1e-12,
    "vieta": 1e-10,
    "undamped_normalization": 1e-12,
    "damped_residual": 1e-9,
    "sector_n1": 1e-12,
    "sector_hermitian": 1e-12,
}


def eig_small_complex(matrix, vectors: bool = False):
    """
    Eigenvalues (and optionally unit eigenvectors as columns) of a small
    dense complex matrix, ordered by (Re, Im).

    Raises:
        DomainError: for non-square, oversized or non-finite input.
        NumericalError: if an eigenpair residual exceeds 1e-10 ||M|| ||v||.
    """
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DomainError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] > MAX_DIM:
        raise DomainError(f"matrix dimension {m.shape[0]} exceeds {MAX_DIM}")
    if not np.all(np.isfinite(m)):
        raise DomainError("matrix has non-finite entries")

    try:
        values, vecs = linalg.eig(m)
    except linalg.LinAlgError as e:
        raise NumericalError(f"eigenvalue iteration failed: {e}") from e

    scale = np.linalg.norm(m, 2)
    for index in range(values.size):
        v = vecs[:, index]
        residual = np.linalg.norm(m @ v - values[index] * v)
        if residual > EIG_RESIDUAL_TOL * max(scale, np.finfo(float).tiny) * np.linalg.norm(v):
            raise NumericalError(f"eigenpair {index} residual {residual:.3e} too large")

    order = np.lexsort((values.imag, values.real))
    if vectors:
        return values[order], vecs[:, order]
    return values[order]


def match_eigenvalues(reference, candidate) -> np.ndarray:
    """Reorder `candidate` to minimise sum |reference_i - candidate_i|."""
    reference = np.asarray(reference, dtype=complex)
    candidate = np.asarray(candidate, dtype=complex)
    if reference.shape != candidate.shape:
        raise DomainError("eigenvalue sets differ in size")
    cost = np.abs(reference[:, None] - candidate[None, :])
    _, cols = linear_sum_assignment(cost)
    return candidate[cols]


@dataclass(frozen=True, eq=False)
class SectorMatrix:
    """Hamiltonian block with N excitations, basis |n_ph = N - m, n_ex = m>."""
    N: int
    entries: np.ndarray

    @property
    def dim(self) -> int:
        return self.N + 1

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return bool(np.allclose(self.entries, self.entries.conj().T, rtol=0.0, atol=tol))

    def eigenvalues(self) -> np.ndarray:
        return eig_small_complex(self.entries)


def _direct_k(q: float, n) -> float:
    """k(n) straight from q/(q+1) [q^n + q^-(n+1)]."""
    return q / (q + 1) * (q ** n + q ** -(n + 1))


def _direct_bracket(q: float, n: int) -> float:
    if q == 1.0:
        return float(n)
    return (q ** n - q ** -n) / (q - 1 / q)


def build_sector(N: int, q: float, p: SystemParams, damping: str = "occupation") -> SectorMatrix:
    """
    Fixed-N block of omega a^dag a + omega_ex b_q^dag b_q + g (a b_q^dag + a^dag b_q).

    Diagonal: omega (N - m) + omega_ex [m]_q - i damping, with damping
    gamma_ph (N - m) + gamma_ex m ("occupation") or gamma_ph + gamma_ex
    ("constant"). Off-diagonal: g sqrt(N - m) sqrt([m + 1]_q).
    """
    if not isinstance(N, (int, np.integer)) or not 1 <= N <= MAX_DIM - 1:
        raise DomainError(f"sector N must be an integer in [1, {MAX_DIM - 1}], got {N!r}")
    if damping not in DAMPING_MODES:
        raise DomainError(f"unknown damping placement {damping!r}")
    if not q > 0:
        raise DomainError(f"q must be positive, got {q}")

    entries = np.zeros((N + 1, N + 1), dtype=complex)
    for m in range(N + 1):
        if damping == "occupation":
            loss = p.gamma_ph * (N - m) + p.gamma_ex * m
        else:
            loss = p.gamma_ph + p.gamma_ex
        entries[m, m] = complex(p.omega * (N - m) + p.omega_ex * _direct_bracket(q, m), -loss)
        if m < N:
            coupling = p.g * math.sqrt(N - m) * math.sqrt(_direct_bracket(q, m + 1))
            entries[m + 1, m] = entries[m, m + 1] = coupling
    return SectorMatrix(N=N, entries=entries)


@dataclass(frozen=True)
class CheckResult:
    """Largest deviation seen by one check; tolerance None marks a reported-only figure."""
    name: str
    max_deviation: float
    tolerance: float | None
    samples: int
    skipped: int = 0

    @property
    def passed(self) -> bool:
        if self.tolerance is None:
            return True
        return math.isfinite(self.max_deviation) and self.max_deviation <= self.tolerance


@dataclass(frozen=True)
class ValidationReport:
    seed: int
    draws: int
    checks: tuple[CheckResult, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> list[str]:
        return [check.name for check in self.checks if not check.passed]

    def merged(self, checks) -> "ValidationReport":
        return replace(self, checks=self.checks + tuple(checks))

    def to_text(self) -> str:
        lines = [f"seed: {self.seed}", f"draws: {self.draws}"]
        for check in self.checks:
            status = "info" if check.tolerance is None else ("pass" if check.passed else "fail")
            lines.append(f"{check.name}.max_deviation: {check.max_deviation:.6e}")
            if check.tolerance is not None:
                lines.append(f"{check.name}.tolerance: {check.tolerance:.1e}")
            lines.append(f"{check.name}.samples: {check.samples}")
            if check.skipped:
                lines.append(f"{check.name}.skipped: {check.skipped}")
            lines.append(f"{check.name}.status: {status}")
        lines.append(f"failures: {', '.join(self.failures) or 'none'}")
        lines.append(f"result: {'pass' if self.passed else 'fail'}")
        return "\n".join(lines) + "\n"


class _Sweep:
    """Running maximum of one check."""

    def __init__(self, name: str, tolerance: float | None):
        self.name = name
        self.tolerance = tolerance
        self.worst = 0.0
        self.samples = 0
        self.skipped = 0

    def record(self, deviation: float) -> None:
        self.samples += 1
        if not math.isfinite(deviation):
            self.worst = math.inf
        else:
            self.worst = max(self.worst, float(deviation))

    def result(self) -> CheckResult:
        return CheckResult(self.name, self.worst, self.tolerance, self.samples, self.skipped)


def _draw_system(rng: np.random.Generator, damped: bool) -> tuple[SystemParams, float, int]:
    gamma = (lambda: float(rng.uniform(0.0, 1e-3))) if damped else (lambda: 0.0)
    p = SystemParams(
        omega=float(rng.uniform(0.5, 3.0)),
        omega_ex=float(rng.uniform(0.5, 3.0)),
        g=float(rng.uniform(0.0, 1e-3)),
        gamma_ex=gamma(),
        gamma_ph=gamma(),
    )
    return p, float(rng.uniform(0.9, 1.1)), int(rng.integers(0, 201))


def _draw_two_mode(rng: np.random.Generator, damped: bool) -> TwoModeParams:
    gamma = (lambda: float(rng.uniform(0.0, 1e-3))) if damped else (lambda: 0.0)
    return TwoModeParams(
        omega=float(rng.uniform(0.5, 3.0)),
        omega_ex1=float(rng.uniform(0.5, 3.0)),
        omega_ex2=float(rng.uniform(0.5, 3.0)),
        g=float(rng.uniform(0.0, 1e-3)),
        gamma_ex1=gamma(),
        gamma_ex2=gamma(),
        gamma_ph=gamma(),
        q1=float(rng.uniform(0.9, 1.1)),
        q2=float(rng.uniform(0.9, 1.1)),
        n1=int(rng.integers(0, 201)),
        n2=int(rng.integers(0, 201)),
    )


def _single_mode_matrix(p: SystemParams, q: float, n: int) -> np.ndarray:
    k = _direct_k(q, n)
    return np.array([
        [complex(p.omega_ex * k, -p.gamma_ex), p.g],
        [p.g * k, complex(p.omega, -p.gamma_ph)],
    ])


def _two_mode_matrix(p: TwoModeParams) -> np.ndarray:
    k1, k2 = _direct_k(p.q1, p.n1), _direct_k(p.q2, p.n2)
    return np.array([
        [complex(p.omega_ex1 * k1, -p.gamma_ex1), 0.0, p.g],
        [0.0, complex(p.omega_ex2 * k2, -p.gamma_ex2), p.g],
        [p.g * k1, p.g * k2, complex(p.omega, -p.gamma_ph)],
    ])


def _relative_deviation(a, b, matrix) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)))) / max(1.0, np.linalg.norm(matrix, 2))


def _companion_roots(cubic: CubicPolynomial) -> np.ndarray:
    _, a2, a1, a0 = cubic.coefficients()
    companion = np.array([
        [-a2, -a1, -a0],
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
    ], dtype=complex)
    return eig_small_complex(companion)


def reference_cubic_roots(cubic: CubicPolynomial, dps: int = 40) -> np.ndarray:
    """
    Roots of `cubic` in `dps`-digit arithmetic, ordered by (Re, Im).

    The polynomial is expanded from its float factors (or shifted
    coefficients) inside mpmath, so the result is the root set of exactly
    the float-valued cubic that solve_cubic sees.

    Raises:
        NumericalError: if mpmath.polyroots does not converge.
    """
    with mpmath.workdps(dps):
        if cubic.factors is not None:
            c, d, e, alpha, beta = (mpmath.mpmathify(x) for x in cubic.factors)
            coeffs = [
                1,
                -(c + d + e),
                c * d + c * e + d * e - alpha - beta,
                -(c * d * e) + beta * c + alpha * d,
            ]
        else:
            a3, a2, a1, a0 = (mpmath.mpmathify(x) for x in cubic.coeffs)
            s = mpmath.mpmathify(cubic.shift)
            coeffs = [
                a3,
                a2 - 3 * a3 * s,
                a1 - 2 * a2 * s + 3 * a3 * s ** 2,
                a0 - a1 * s + a2 * s ** 2 - a3 * s ** 3,
            ]
        start = [mpmath.mpc(r) for r in np.roots(cubic.coefficients())]
        try:
            roots = mpmath.polyroots(coeffs, maxsteps=200, extraprec=2 * dps, roots_init=start)
        except mpmath.libmp.NoConvergence as e:
            raise NumericalError(f"extended-precision cubic roots did not converge: {e}") from e
        values = [complex(r) for r in roots]
    return np.array(sorted(values, key=lambda r: (r.real, r.imag)), dtype=complex)


def _single_mode_checks(rng: np.random.Generator, draws: int) -> list[CheckResult]:
    eigen = _Sweep("single_mode_eigenvalues", SWEEP_TOLERANCES["single_mode_eigenvalues"])
    norm = _Sweep("undamped_normalization", SWEEP_TOLERANCES["undamped_normalization"])
    residual = _Sweep("damped_residual", SWEEP_TOLERANCES["damped_residual"])

    for draw in range(draws):
        damped = draw % 2 == 1
        p, q, n = _draw_system(rng, damped)
        matrix = _single_mode_matrix(p, q, n)
        closed = np.array(polariton_spectrum(p, q, n))
        brute = match_eigenvalues(closed, eig_small_complex(matrix))
        eigen.record(_relative_deviation(closed, brute, matrix))

        for branch in (1, 2):
            try:
                u, v = hopfield_coefficients(p, q, n, branch)
            except DegeneracyError:
                (residual if damped else norm).skipped += 1
                continue
            if damped:
                vec = np.array([u, v])
                miss = np.linalg.norm(matrix @ vec - closed[branch - 1] * vec)
                residual.record(miss / (np.linalg.norm(matrix, 2) * np.linalg.norm(vec)))
            else:
                norm.record(abs(abs(u) ** 2 * _direct_k(q, n) + abs(v) ** 2 - 1.0))

    return [eigen.result(), norm.result(), residual.result()]


def _two_mode_checks(rng: np.random.Generator, draws: int) -> list[CheckResult]:
    # eig and companion eigenvalues are accurate to a few ulps of ||M|| only
    roots_check = _Sweep("two_mode_roots", SWEEP_TOLERANCES["two_mode_roots"])
    companion_check = _Sweep("two_mode_companion", SWEEP_TOLERANCES["two_mode_companion"])
    reference_check = _Sweep("two_mode_roots_reference", SWEEP_TOLERANCES["two_mode_roots_reference"])
    vieta = _Sweep("vieta", SWEEP_TOLERANCES["vieta"])
    residual = _Sweep("two_mode_damped_residual", SWEEP_TOLERANCES["damped_residual"])

    for _ in range(draws):
        p = _draw_two_mode(rng, damped=True)
        matrix = _two_mode_matrix(p)
        cubic = characteristic_cubic(p)
        roots = np.array(solve_cubic(cubic).roots)

        roots_check.record(_relative_deviation(roots, match_eigenvalues(roots, eig_small_complex(matrix)), matrix))
        companion_check.record(
            _relative_deviation(roots, match_eigenvalues(roots, _companion_roots(cubic)), matrix)
        )
        try:
            exact = match_eigenvalues(roots, reference_cubic_roots(cubic))
        except NumericalError:
            reference_check.skipped += 1
        else:
            reference_check.record(float(np.max(np.abs(roots - exact) / np.maximum(1.0, np.abs(exact)))))

        c, d, e = np.diag(matrix)
        g2k1, g2k2 = matrix[2, 0] * p.g, matrix[2, 1] * p.g
        r1, r2, r3 = roots
        sums = (
            (r1 + r2 + r3, c + d + e,
             abs(r1) + abs(r2) + abs(r3), abs(c) + abs(d) + abs(e)),
            (r1 * r2 + r1 * r3 + r2 * r3, c * d + c * e + d * e - g2k1 - g2k2,
             abs(r1 * r2) + abs(r1 * r3) + abs(r2 * r3),
             abs(c * d) + abs(c * e) + abs(d * e) + abs(g2k1) + abs(g2k2)),
            (r1 * r2 * r3, c * d * e - g2k2 * c - g2k1 * d,
             abs(r1 * r2 * r3), abs(c * d * e) + abs(g2k2 * c) + abs(g2k1 * d)),
        )
        for value, expected, value_size, expected_size in sums:
            vieta.record(abs(value - expected) / max(1.0, value_size, expected_size))

        for branch in (1, 2, 3):
            try:
                vec = np.array(three_mode_coefficients(p, branch))
            except DegeneracyError:
                residual.skipped += 1
                continue
            miss = np.linalg.norm(matrix @ vec - roots[branch - 1] * vec)
            residual.record(miss / (np.linalg.norm(matrix, 2) * np.linalg.norm(vec)))

    return [
        roots_check.result(),
        companion_check.result(),
        reference_check.result(),
        vieta.result(),
        residual.result(),
    ]


def _sector_checks(rng: np.random.Generator, draws: int) -> list[CheckResult]:
    first = _Sweep("sector_n1", SWEEP_TOLERANCES["sector_n1"])
    hermitian = _Sweep("sector_hermitian", SWEEP_TOLERANCES["sector_hermitian"])
    # reported only: how far the c-number k(n) closed form sits from the
    # exact transition energies between sectors N-1 and N
    mapping_n = _Sweep("sector_mapping_n_eq_N", None)
    mapping_n1 = _Sweep("sector_mapping_n_eq_N_minus_1", None)

    for _ in range(draws):
        p, q, _ = _draw_system(rng, damped=False)
        block = build_sector(1, q, p)
        closed = np.array(polariton_spectrum(p, q, 0))
        exact = block.eigenvalues()
        first.record(_relative_deviation(closed, match_eigenvalues(closed, exact), block.entries))
        hermitian.record(float(np.max(np.abs(exact.imag))))

        N = int(rng.integers(2, 7))
        upper = build_sector(N, q, p).eigenvalues()
        lower = build_sector(N - 1, q, p).eigenvalues()
        transitions = (upper[:, None] - lower[None, :]).ravel()
        hermitian.record(float(np.max(np.abs(upper.imag))))
        for sweep, n in ((mapping_n, N), (mapping_n1, N - 1)):
            omegas = polariton_spectrum(p, q, n)
            sweep.record(max(float(np.min(np.abs(transitions - w))) for w in omegas))

    return [first.result(), hermitian.result(), mapping_n.result(), mapping_n1.result()]


def validate_closed_forms(seed: int = 0, draws: int = 1000) -> ValidationReport:
    """
    Seeded random sweep of closed forms against dense eigensolvers.

    Each check draws from its own generator spawned from `seed`, so the
    report depends only on (seed, draws).

    Raises:
        DomainError: if draws < 1.
    """
    if draws < 1:
        raise DomainError(f"draws must be at least 1, got {draws}")
    single_rng, two_rng, sector_rng = (
        np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(3)
    )
    checks = (
        _single_mode_checks(single_rng, draws)
        + _two_mode_checks(two_rng, draws)
        + _sector_checks(sector_rng, draws)
    )
    report = ValidationReport(seed=seed, draws=draws, checks=tuple(checks))
    logger.info("closed-form sweep seed=%d draws=%d: %s", seed, draws, "pass" if report.passed else "fail")
    return report


def _reference_checks() -> list[CheckResult]:
    k_check = _Sweep("k_factor_reference", 1e-13)
    bracket_check = _Sweep("q_bracket_reference", 1e-12)
    with mpmath.workdps(40):
        for q in (0.9, 0.99, 1.0, 1.01, 1.015, 1.08, 1.1, 2.0):
            mq = mpmath.mpf(q)
            for n in (0, 1, 2, 5, 20, 100):
                expected = mq / (mq + 1) * (mq ** n + mq ** (-(n + 1)))
                k_check.record(float(abs(qalgebra.k_factor(q, n) - expected) / expected))
                if n > 0:
                    expected = n if q == 1.0 else (mq ** n - mq ** -n) / (mq - 1 / mq)
                    bracket_check.record(float(abs(qalgebra.q_bracket(q, n) - expected) / expected))

    symmetry = _Sweep("q_inverse_symmetry", 1e-13)
    for q in (2.0, 1.25, 1.01):
        for n in range(0, 30):
            a, b = qalgebra.k_factor(q, n), qalgebra.k_factor(1.0 / q, n)
            symmetry.record(abs(a - b) / a)
    return [k_check.result(), bracket_check.result(), symmetry.result()]


def _quadrature_check() -> CheckResult:
    """Each emission branch integrated over +-20 widths against 2 weight atan(20)."""
    sweep = _Sweep("lorentzian_quadrature", 5e-3)
    p = SystemParams(omega=1.75, omega_ex=1.75, g=200e-6, gamma_ex=20e-6, gamma_ph=40e-6, alpha_sq=9.0)
    for q in (1.0, 1.01, 1.015):
        series = emission_spectrum(p, q, 1, EnergyGrid(1.7485, 1.7515, 101))
        for branch in series.branches:
            area, _ = integrate.quad(
                branch, branch.center - 20 * branch.width, branch.center + 20 * branch.width,
                points=[branch.center], limit=200,
            )
            expected = 2 * branch.weight * math.atan(20.0)
            sweep.record(abs(area - expected) / expected)
    return sweep.result()


def _response_checks() -> list[CheckResult]:
    zero = _Sweep("quadratic_response_zero", 0.0)
    truncation = _Sweep("response_truncation", 1e-10)
    grid = EnergyGrid(1.572, 1.576, 401)
    for q in (0.99, 1.0, 1.01):
        p = ResponseParams(omega=1.5, omega_ex=1.574, g=200e-6, q=q, grid=grid)
        zero.record(float(np.max(np.abs(quadratic_response(p)))))
        auto = susceptibility(p)
        longer = susceptibility(replace(p, n_max=auto.terms_used + 5))
        for a, b in ((auto.chi1, longer.chi1), (auto.chi3, longer.chi3)):
            truncation.record(float(np.max(np.abs(a - b)) / np.max(np.abs(b))))
    return [zero.result(), truncation.result()]


def invariant_checks() -> list[CheckResult]:
    """Algebra reference values, Lorentzian areas and response-series checks."""
    return _reference_checks() + [_quadrature_check()] + _response_checks()


def validate(seed: int = 0, draws: int = 1000) -> ValidationReport:
    """Closed-form sweep followed by the invariant suite."""
    return validate_closed_forms(seed, draws).merged(invariant_checks())
