import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nc_orlicz.errors import DivergenceError, DomainError, NumericalFailure, ShapeError, UnsupportedFamilyError
from nc_orlicz.linalg import eigh, eigvalsh, hermitian_function, jacobi_eigh
from nc_orlicz.nfunction import Power, PowerLog
from nc_orlicz.sampling import random_matrix, random_unitary
from nc_orlicz.spectra import (
    DecreasingStepFunction,
    ParametricDecay,
    TracedMatrix,
    diagonal_realization,
    distribution_function,
    extremal_element,
    hardy_average,
    hardy_transform,
    singular_value_function,
    singular_values,
    sum_inequality_check,
)


def hermitian(rng, n):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (a + a.conj().T) / 2


class TestLinalg:
    @pytest.mark.parametrize("n", [1, 2, 5, 12])
    def test_jacobi_matches_lapack(self, rng, n):
        a = hermitian(rng, n)
        w, v = jacobi_eigh(a)
        np.testing.assert_allclose(np.sort(w), np.linalg.eigvalsh(a), atol=1e-11)
        np.testing.assert_allclose(v @ np.diag(w) @ v.conj().T, a, atol=1e-11)

    def test_backends_agree(self, rng):
        a = hermitian(rng, 7)
        np.testing.assert_allclose(np.sort(eigvalsh(a, "jacobi")), eigvalsh(a, "lapack"), atol=1e-11)

    def test_jacobi_sweep_cap(self, rng):
        with pytest.raises(NumericalFailure):
            jacobi_eigh(hermitian(rng, 4), max_sweeps=0)

    def test_unknown_backend(self):
        with pytest.raises(ValueError):
            eigh(np.eye(2), backend="qr")

    def test_non_square(self):
        with pytest.raises(ShapeError):
            eigh(np.ones((2, 3)))

    def test_functional_calculus_sqrt(self, rng):
        b = random_matrix(rng, 5).entries
        a = b @ b.conj().T + np.eye(5)
        r = hermitian_function(a, np.sqrt)
        np.testing.assert_allclose(r @ r, a, atol=1e-10)


class TestTracedMatrix:
    def test_bad_scale(self):
        with pytest.raises(DomainError):
            TracedMatrix(np.eye(2), 0.0)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            TracedMatrix.identity(2) + TracedMatrix.identity(3)

    def test_scale_mismatch(self):
        with pytest.raises(ShapeError):
            TracedMatrix.identity(2, 1.0) @ TracedMatrix.identity(2, 0.5)

    def test_trace_is_scaled(self):
        assert TracedMatrix.diag([1, 2, 3], 0.5).trace() == pytest.approx(3.0)


class TestStepFunction:
    def test_diag_steps(self):
        m = singular_value_function(TracedMatrix.diag([3, 1, 2]))
        assert m.values.tolist() == [3, 2, 1]
        assert m.lengths.tolist() == [1, 1, 1]

    def test_nilpotent(self):
        m = singular_value_function(TracedMatrix(np.array([[0, 1], [0, 0]]), 2.0))
        assert m.values.tolist() == [1.0]
        assert m.lengths.tolist() == [2.0]

    def test_zero_matrix(self):
        assert singular_value_function(TracedMatrix(np.zeros((3, 3)))).is_zero

    def test_hardy_value(self):
        m = DecreasingStepFunction(np.array([3.0, 2.0]), np.array([1.0, 1.0]))
        assert hardy_transform(m, 2.0) == pytest.approx(5.0)
        assert hardy_transform(m, 10.0) == pytest.approx(5.0)
        assert hardy_average(m, 0.5) == pytest.approx(3.0)

    def test_right_continuity(self):
        m = DecreasingStepFunction(np.array([3.0, 2.0]), np.array([1.0, 1.0]))
        assert m(0.0) == 3.0
        assert m(1.0) == 2.0
        assert m(2.0) == 0.0

    def test_distribution(self):
        m = DecreasingStepFunction(np.array([3.0, 2.0]), np.array([1.0, 0.5]))
        assert m.distribution(2.5) == 1.0
        assert m.distribution(1.0) == 1.5
        assert m.distribution(3.0) == 0.0

    @pytest.mark.parametrize("values, lengths", [([1, 2], [1, 1]), ([2, 1], [1, 0]), ([-1], [1])])
    def test_invalid(self, values, lengths):
        with pytest.raises(DomainError):
            DecreasingStepFunction(np.array(values, float), np.array(lengths, float))

    def test_merge_is_relative(self):
        m = DecreasingStepFunction.from_values([1e6, 1e6 * (1 - 1e-12), 1.0], 1.0)
        assert m.values.size == 2
        assert m.lengths[0] == 2.0

    def test_diagonal_realization_roundtrip(self):
        m = DecreasingStepFunction(np.array([3.0, 1.0]), np.array([1.0, 1.5]))
        x = diagonal_realization(m, 0.5, n=6)
        mu = singular_value_function(x)
        np.testing.assert_allclose(mu.values, m.values)
        np.testing.assert_allclose(mu.lengths, m.lengths)


class TestDecay:
    def test_integral(self):
        d = extremal_element(Power(2.0), cutoff=1.0)
        assert hardy_transform(d, 1.0) == pytest.approx(2 * math.sqrt(2), rel=1e-12)
        assert hardy_transform(d, 5.0) == pytest.approx(2 * math.sqrt(2), rel=1e-12)

    def test_extremal_value(self):
        assert extremal_element(Power(2.0))(0.5) == pytest.approx(2.0)

    def test_extremal_needs_power(self):
        with pytest.raises(UnsupportedFamilyError):
            extremal_element(PowerLog(2.0))

    def test_divergent(self):
        with pytest.raises(DivergenceError):
            ParametricDecay(((0.0, 1.0, 1.0, 1.0),)).hardy(0.5)

    def test_piecewise_hardy(self):
        d = ParametricDecay(((0.0, 1.0, 1.0, 0.5), (1.0, 4.0, 1.0, 1.0)))
        assert d.hardy(4.0) == pytest.approx(2.0 + math.log(4.0))

    def test_increasing_rejected(self):
        with pytest.raises(DomainError):
            ParametricDecay(((0.0, 1.0, 1.0, 0.0), (1.0, 2.0, 2.0, 0.0)))


class TestSpectralIdentities:
    @pytest.mark.parametrize("c", [1.0, 0.25])
    def test_unitary_invariance(self, rng, c):
        x = random_matrix(rng, 6, c)
        u, v = random_unitary(rng, 6), random_unitary(rng, 6)
        y = TracedMatrix(u @ x.entries @ v, c)
        np.testing.assert_allclose(singular_values(x), singular_values(y), atol=1e-12)

    def test_adjoint_invariance(self, rng):
        x = random_matrix(rng, 5)
        np.testing.assert_allclose(singular_values(x), singular_values(x.H), atol=1e-12)

    def test_matches_numpy_svd(self, rng):
        a = random_matrix(rng, 8).entries
        np.testing.assert_allclose(singular_values(TracedMatrix(a)), np.linalg.svd(a, compute_uv=False), atol=1e-12)

    def test_distribution_matches_mu(self, rng):
        x = random_matrix(rng, 6, 0.5)
        m = singular_value_function(x)
        s = np.array([0.1, 0.5, 1.0, 2.0])
        np.testing.assert_allclose(distribution_function(x, s), m.distribution(s))

    @given(seed=st.integers(0, 2**32 - 1), t=st.floats(0, 3), s=st.floats(0, 3))
    @settings(max_examples=60, deadline=None)
    def test_sum_and_product(self, seed, t, s):
        r = np.random.default_rng(seed)
        x = random_matrix(r, 4, 0.5)
        y = random_matrix(r, 4, 0.5)
        assert sum_inequality_check(x, y, t, s)

    def test_trace_cyclic(self, rng):
        x = random_matrix(rng, 5, 0.3)
        y = random_matrix(rng, 5, 0.3)
        assert (x @ y).trace() == pytest.approx((y @ x).trace(), rel=1e-12)

    def test_trace_equals_integral_of_mu(self, rng):
        b = random_matrix(rng, 5).entries
        x = TracedMatrix(b @ b.conj().T, 0.3)
        assert singular_value_function(x).integral(lambda v: v) == pytest.approx(x.trace().real, rel=1e-12)
