"""
Deformed boson algebra.

Scalar (and integer-array) evaluations of the functions every other module
consumes: the commutator k(n) = [b_q, b_q^dag] at occupation n, the q-number
[n]_q, its square root f_q(n) and the q-factorial built from it.

All functions are written in terms of lam = |ln q|:

    k(n)   = cosh((n + 1/2) lam) / cosh(lam / 2)
    [n]_q  = sinh(n lam) / sinh(lam)

equivalent to the usual expressions in powers of q. This form makes the q <-> 1/q
symmetry exact and keeps [n]_q accurate close to q = 1.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

# |q - 1| below this switches to the nondeformed limits.
NONDEFORMED_TOL = 1e-12


@dataclass(frozen=True)
class DeformationParams:
    """Deformation parameters and the occupations operator functions are evaluated at."""
    q: float = 1.0  # exciton deformation
    s: float = 1.0  # polariton deformation
    n: int = 0  # exciton occupation
    n_k: int = 0  # polariton occupation

    def __post_init__(self) -> None:
        _check_positive(self.q, "q")
        _check_positive(self.s, "s")
        if self.n < 0 or self.n_k < 0:
            raise DomainError(f"occupations must be non-negative (n={self.n}, n_k={self.n_k})")

    @property
    def k(self) -> float:
        return k_factor(self.q, self.n)

    @property
    def M(self) -> float:
        return M_factor(self.s, self.n_k)


def _check_positive(value: float, name: str) -> None:
    if not np.isfinite(value) or value <= 0:
        raise DomainError(f"{name} must be a positive real, got {value!r}")


def _log_deformation(x: float) -> float:
    """lam = |ln x|, or 0.0 inside the nondeformed window."""
    if abs(x - 1.0) < NONDEFORMED_TOL:
        return 0.0
    return abs(float(np.log(x)))


def _scalar_or_array(value):
    if np.ndim(value) == 0:
        return float(value)
    return value


def _commutator(x: float, n, name: str):
    _check_positive(x, name)
    lam = _log_deformation(x)
    n = np.asarray(n, dtype=float)
    if lam == 0.0:
        return _scalar_or_array(np.ones_like(n))
    return _scalar_or_array(np.cosh((n + 0.5) * lam) / np.cosh(0.5 * lam))


def k_factor(q: float, n):
    """
    Commutator function k(n) = q/(q+1) [q^n + q^-(n+1)].

    Defined for n >= -1 (k(-1) = k(0) = 1). Accepts an integer array for n.

    Raises:
        DomainError: if q is not a positive real.
    """
    return _commutator(q, n, "q")


def M_factor(s: float, n_k):
    """Polariton commutator M(n_k): k_factor with (s, n_k)."""
    return _commutator(s, n_k, "s")


def q_bracket(q: float, n):
    """
    q-number [n]_q = (q^n - q^-n) / (q - q^-1).

    Returns n exactly in the nondeformed limit.
    """
    _check_positive(q, "q")
    lam = _log_deformation(q)
    n = np.asarray(n, dtype=float)
    if lam == 0.0:
        return _scalar_or_array(n.copy())
    return _scalar_or_array(np.sinh(n * lam) / np.sinh(lam))


def q_number_sqrt(q: float, n):
    """f_q(n) = sqrt([n]_q), the matrix element of b_q between |n> and |n-1>."""
    return _scalar_or_array(np.sqrt(np.asarray(q_bracket(q, n))))


def q_factorial(q: float, n: int) -> float:
    """
    f_q(n)! = prod_{m=1}^{n} f_q(m), with the empty product equal to 1.

    At q = 1 this is sqrt(n!).
    """
    if n < 0:
        raise DomainError(f"q_factorial needs n >= 0, got {n}")
    return float(q_factorials(q, n)[n])


def q_factorials(q: float, n_max: int) -> np.ndarray:
    """Array [f_q(0)!, f_q(1)!, ..., f_q(n_max)!]."""
    terms = np.asarray(q_number_sqrt(q, np.arange(1, n_max + 1)), dtype=float)
    return np.concatenate(([1.0], np.cumprod(terms)))


def h_weight(omega_ex: float, q: float, i: int, n):
    """
    h_i(n) = 1 / (omega_ex k(n + i)), the magnitude of the phase factor
    exp(+-i omega_ex k(n+i) (t - t0)) / (omega_ex k(n+i)) at t = t0.
    """
    return _scalar_or_array(1.0 / (omega_ex * np.asarray(k_factor(q, np.asarray(n) + i))))


def h_factorial(omega_ex: float, q: float, i: int, n: int) -> float:
    """h_i(n)! = prod_{m=1}^{n} h_i(m), empty product 1."""
    if n < 0:
        raise DomainError(f"h_factorial needs n >= 0, got {n}")
    if n == 0:
        return 1.0
    return float(np.prod(h_weight(omega_ex, q, i, np.arange(1, n + 1))))
