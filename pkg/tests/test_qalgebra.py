"""
Tests for the deformed boson algebra.
"""

import math

import hypothesis.strategies as st
import mpmath
import numpy as np
import pytest
from hypothesis import given

from qexciton import qalgebra
from qexciton.errors import DomainError

deformations = st.floats(min_value=0.5, max_value=2.0)
occupations = st.integers(min_value=0, max_value=200)


def reference_k(q: float, n: int) -> float:
    with mpmath.workdps(40):
        mq = mpmath.mpf(q)
        return float(mq / (mq + 1) * (mq ** n + mq ** (-(n + 1))))


def reference_bracket(q: float, n: int) -> float:
    with mpmath.workdps(40):
        mq = mpmath.mpf(q)
        return float((mq ** n - mq ** -n) / (mq - 1 / mq))


class TestKFactor:

    def test_nondeformed_is_one(self):
        assert qalgebra.k_factor(1.0, 0) == 1.0
        assert qalgebra.k_factor(1.0, 57) == 1.0

    def test_low_occupations_are_one(self):
        assert qalgebra.k_factor(1.3, -1) == 1.0
        assert qalgebra.k_factor(1.3, 0) == 1.0

    @pytest.mark.parametrize("q", [0.9, 0.99, 1.01, 1.015, 1.08, 1.1, 2.0])
    @pytest.mark.parametrize("n", [1, 2, 5, 40, 200])
    def test_matches_high_precision_reference(self, q, n):
        np.testing.assert_allclose(qalgebra.k_factor(q, n), reference_k(q, n), rtol=1e-13)

    def test_inverse_deformation_is_identical(self):
        n = np.arange(0, 50)
        np.testing.assert_allclose(qalgebra.k_factor(2.0, n), qalgebra.k_factor(0.5, n), rtol=1e-15)

    def test_array_occupations(self):
        values = qalgebra.k_factor(1.01, np.arange(4))
        assert values.shape == (4,)
        assert values[0] == 1.0
        assert np.all(np.diff(values) > 0)

    @given(deformations, occupations)
    def test_never_below_one(self, q, n):
        assert qalgebra.k_factor(q, n) >= 1.0

    @given(deformations, occupations)
    def test_reciprocal_symmetry(self, q, n):
        np.testing.assert_allclose(qalgebra.k_factor(q, n), qalgebra.k_factor(1.0 / q, n), rtol=1e-12)

    @pytest.mark.parametrize("q", [0.0, -1.0, math.nan, math.inf])
    def test_rejects_invalid_q(self, q):
        with pytest.raises(DomainError):
            qalgebra.k_factor(q, 1)

    def test_m_factor_is_k_factor_in_s(self):
        assert qalgebra.M_factor(1.007, 1) == qalgebra.k_factor(1.007, 1)
        with pytest.raises(DomainError):
            qalgebra.M_factor(-2.0, 1)


class TestQNumbers:

    def test_nondeformed_bracket_is_n(self):
        assert qalgebra.q_bracket(1.0, 7) == 7.0

    @pytest.mark.parametrize("q", [0.5, 1.01, 1.05, 3.0])
    def test_unit_bracket(self, q):
        assert qalgebra.q_bracket(q, 0) == 0.0
        np.testing.assert_allclose(qalgebra.q_bracket(q, 1), 1.0, rtol=1e-15)

    @pytest.mark.parametrize("q", [0.9, 1.01, 1.1, 2.0])
    @pytest.mark.parametrize("n", [2, 3, 10, 60])
    def test_bracket_matches_reference(self, q, n):
        np.testing.assert_allclose(qalgebra.q_bracket(q, n), reference_bracket(q, n), rtol=1e-12)

    @pytest.mark.parametrize("q", [0.9, 1.1, 1.5])
    def test_bracket_recursion(self, q):
        # [n+1]_q = q^-n + q [n]_q
        for n in range(1, 20):
            np.testing.assert_allclose(
                qalgebra.q_bracket(q, n + 1), q ** -n + q * qalgebra.q_bracket(q, n), rtol=1e-12
            )

    def test_bracket_close_to_nondeformed(self):
        np.testing.assert_allclose(qalgebra.q_bracket(1.0 + 1e-9, 5), 5.0, rtol=1e-8)

    @given(deformations, occupations)
    def test_bracket_reciprocal_symmetry(self, q, n):
        np.testing.assert_allclose(qalgebra.q_bracket(q, n), qalgebra.q_bracket(1.0 / q, n), rtol=1e-12)

    @pytest.mark.parametrize("q", [1.0 + 1e-8, 1.0 - 1e-8])
    def test_bracket_near_nondeformed_up_to_large_n(self, q):
        n = np.arange(0, 1001)
        assert np.max(np.abs(qalgebra.q_bracket(q, n) - n)) < 1e-6

    def test_number_sqrt(self):
        np.testing.assert_allclose(qalgebra.q_number_sqrt(1.05, 4) ** 2, qalgebra.q_bracket(1.05, 4), rtol=1e-14)

    @pytest.mark.parametrize("n", [0, 1, 5, 12])
    def test_factorial_nondeformed(self, n):
        np.testing.assert_allclose(qalgebra.q_factorial(1.0, n), math.sqrt(math.factorial(n)), rtol=1e-12)

    def test_factorial_table(self):
        table = qalgebra.q_factorials(1.02, 6)
        assert table[0] == 1.0
        for n in range(1, 7):
            np.testing.assert_allclose(table[n], table[n - 1] * qalgebra.q_number_sqrt(1.02, n), rtol=1e-14)

    def test_factorial_rejects_negative(self):
        with pytest.raises(DomainError):
            qalgebra.q_factorial(1.0, -1)


class TestHWeights:

    def test_h_weight(self):
        np.testing.assert_allclose(qalgebra.h_weight(1.574, 1.0, 1, 3), 1 / 1.574, rtol=1e-15)
        np.testing.assert_allclose(
            qalgebra.h_weight(1.574, 1.01, 0, 2), 1 / (1.574 * qalgebra.k_factor(1.01, 2)), rtol=1e-15
        )

    def test_h_factorial(self):
        assert qalgebra.h_factorial(1.574, 1.01, 1, 0) == 1.0
        np.testing.assert_allclose(qalgebra.h_factorial(2.0, 1.0, 0, 3), 1 / 8, rtol=1e-15)
        expected = 1 / (1.5 ** 2 * qalgebra.k_factor(1.05, 2) * qalgebra.k_factor(1.05, 3))
        np.testing.assert_allclose(qalgebra.h_factorial(1.5, 1.05, 1, 2), expected, rtol=1e-14)


class TestDeformationParams:

    def test_derived_factors(self):
        params = qalgebra.DeformationParams(q=1.01, s=1.007, n=1, n_k=1)
        assert params.k == qalgebra.k_factor(1.01, 1)
        assert params.M == qalgebra.M_factor(1.007, 1)

    @pytest.mark.parametrize("kwargs", [{"q": 0.0}, {"s": -1.0}, {"n": -1}, {"n_k": -2}])
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(DomainError):
            qalgebra.DeformationParams(**kwargs)
