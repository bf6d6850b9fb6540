import numpy as np
import pytest

from nc_orlicz.errors import DomainError, ShapeError
from nc_orlicz.nfunction import ExpType, Power, PowerLog
from nc_orlicz.norms import weak_orlicz_quasinorm
from nc_orlicz.sampling import random_density, random_matrix
from nc_orlicz.spectra import TracedMatrix, singular_value_function
from nc_orlicz.weighted import (
    Density,
    functional_calculus,
    induced_operator,
    isometry_check,
    t_map,
    t_map_hadamard,
    weight_of,
    weighted_luxemburg_norm,
    weighted_modular,
    weighted_weak_norm,
)

ALPHAS = [0.0, 0.25, 0.5, 0.75, 1.0]
FAMILIES = [Power(2.0), PowerLog(1.5), ExpType()]


def density(rng, n=4, c=1.0):
    return Density(random_density(rng, n, c))


class TestDensity:
    def test_rejects_non_hermitian(self):
        with pytest.raises(DomainError):
            Density(TracedMatrix(np.array([[1.0, 1.0], [0.0, 1.0]])))

    def test_rejects_singular(self):
        with pytest.raises(DomainError):
            Density(TracedMatrix(np.diag([1.0, 0.0])))

    def test_weight_is_trace_of_product(self, rng):
        d = density(rng)
        x = random_matrix(rng, 4)
        assert weight_of(d, x) == pytest.approx(np.trace(d.matrix.entries @ x.entries))

    def test_weight_shape_mismatch(self, rng):
        with pytest.raises(ShapeError):
            weight_of(density(rng, 3), random_matrix(rng, 4))

    def test_functional_calculus_matches_diagonal(self):
        d = Density(TracedMatrix.diag([1.0, 4.0, 9.0]))
        np.testing.assert_allclose(functional_calculus(d, np.sqrt).entries, np.diag([1.0, 2.0, 3.0]), atol=1e-14)


class TestTMap:
    def test_diagonal_case(self):
        f = Power(2.0)
        d = Density(TracedMatrix.diag([0.5, 2.0]))
        g = np.sqrt(2 * np.array([0.5, 2.0]))
        x = TracedMatrix(np.array([[1.0, 2.0], [3.0, 4.0]]))
        expected = np.outer(g**0.5, g**0.5) * x.entries
        np.testing.assert_allclose(t_map(x, d, f, 0.5).entries, expected, rtol=1e-13)

    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_routes_agree(self, rng, alpha):
        d, x, f = density(rng), random_matrix(rng, 4), PowerLog(2.0)
        np.testing.assert_allclose(t_map(x, d, f, alpha).entries, t_map_hadamard(x, d, f, alpha).entries, atol=1e-12)

    def test_induced_operator_action(self, rng):
        d, x, f = density(rng), random_matrix(rng, 4), Power(3.0)
        vec = induced_operator(d, f, 0.3) @ x.entries.ravel()
        np.testing.assert_allclose(vec.reshape(4, 4), t_map(x, d, f, 0.3).entries, atol=1e-12)

    @pytest.mark.parametrize("alpha", [-0.1, 1.5])
    def test_alpha_domain(self, rng, alpha):
        with pytest.raises(DomainError):
            t_map(random_matrix(rng, 4), density(rng), Power(2.0), alpha)

    def test_identity_density_power(self, rng):
        # Phi^{-1}(1) = 2^(1/2) for t^2/2, so T multiplies by sqrt(2)
        d = Density(TracedMatrix.identity(3))
        x = random_matrix(rng, 3)
        np.testing.assert_allclose(t_map(x, d, Power(2.0), 0.7).entries, np.sqrt(2) * x.entries, atol=1e-13)


class TestNorms:
    def test_weak_norm_factorises(self, rng):
        d, x, f = density(rng), random_matrix(rng, 4), Power(2.0)
        direct = weak_orlicz_quasinorm(singular_value_function(t_map(x, d, f, 0.5)), f).value
        assert weighted_weak_norm(x, d, f, 0.5).value == pytest.approx(direct, rel=1e-14)

    @pytest.mark.parametrize("f", FAMILIES, ids=["power", "power-log", "exp"])
    def test_weak_le_strong(self, rng, f):
        d, x = density(rng), random_matrix(rng, 4)
        assert weighted_weak_norm(x, d, f, 0.25).value <= weighted_luxemburg_norm(x, d, f, 0.25).value * (1 + 1e-10)

    def test_quasi_triangle(self, rng):
        f = PowerLog(1.5)
        for _ in range(20):
            d = density(rng)
            x, y = random_matrix(rng, 4), random_matrix(rng, 4)
            lhs = weighted_weak_norm(x + y, d, f, 0.5).value
            rhs = 2 * (weighted_weak_norm(x, d, f, 0.5).value + weighted_weak_norm(y, d, f, 0.5).value)
            assert lhs <= rhs

    def test_modular_at_norm_is_one(self, rng):
        d, x, f = density(rng), random_matrix(rng, 4), ExpType()
        c = weighted_weak_norm(x, d, f, 0.75).value
        assert weighted_modular(x, d, f, 0.75, c) == pytest.approx(1.0, rel=1e-9)


class TestIsometry:
    @pytest.mark.parametrize("alpha", ALPHAS)
    @pytest.mark.parametrize("f", FAMILIES, ids=["power", "power-log", "exp"])
    def test_isometry(self, rng, f, alpha):
        d = density(rng, 4, 0.5)
        sample = [random_matrix(rng, 4, 0.5) for _ in range(5)]
        rep = isometry_check(d, f, alpha, sample)
        assert rep.passed, rep.failures
        assert rep.rank == rep.n_squared == 16
        assert rep.max_norm_rel_error < 1e-10
        assert rep.samples == 5
