import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nc_orlicz.duality import (
    dual_norm_bruteforce,
    indicator_candidate,
    pairing,
    random_feasible_candidates,
    rearrangement_bound,
    weak_dual_bracket,
)
from nc_orlicz.errors import DomainError
from nc_orlicz.nfunction import Power
from nc_orlicz.norms import lorentz_norm, marcinkiewicz_norm, step_pairing
from nc_orlicz.sampling import random_matrix, random_step_function
from nc_orlicz.spectra import TracedMatrix

from conftest import PARAMETRIC, PARAMETRIC_IDS


def continuum_limit(p):
    q = p / (p - 1)
    return p ** (1 / p) * q ** (1 + 1 / q)


class TestBruteforce:
    @given(seed=st.integers(0, 2**32 - 1), f=st.sampled_from(PARAMETRIC))
    @settings(max_examples=40, deadline=None)
    def test_equals_marcinkiewicz(self, seed, f):
        m = random_step_function(np.random.default_rng(seed))
        assert dual_norm_bruteforce(m, f).value == pytest.approx(marcinkiewicz_norm(m, f).value, rel=1e-8)

    @pytest.mark.parametrize("f", PARAMETRIC, ids=PARAMETRIC_IDS)
    def test_indicator_has_unit_lorentz_norm(self, f):
        for t in (0.01, 1.0, 30.0):
            assert lorentz_norm(indicator_candidate(f, t), f).value == pytest.approx(1.0, rel=1e-12)

    @pytest.mark.parametrize("f", PARAMETRIC, ids=PARAMETRIC_IDS)
    def test_random_candidates_below(self, rng, f):
        m = random_step_function(rng)
        bound = marcinkiewicz_norm(m, f).value
        for y in random_feasible_candidates(f, rng, 30):
            assert lorentz_norm(y, f).value == pytest.approx(1.0, rel=1e-12)
            assert step_pairing(m, y) <= bound * (1 + 1e-10)


class TestPairing:
    def test_rearrangement_bound(self, rng):
        for _ in range(20):
            x, y = random_matrix(rng, 5, 0.5), random_matrix(rng, 5, 0.5)
            assert abs(pairing(x, y)) <= rearrangement_bound(x, y) * (1 + 1e-12)

    def test_pairing_value(self):
        x = TracedMatrix(np.array([[1, 2j], [0, 1]]), 0.5)
        assert pairing(x, x) == pytest.approx(0.5 * 6)


class TestBracket:
    def test_seed_stable(self):
        a = weak_dual_bracket(Power(2.0), 20, 8, np.random.default_rng(5))
        b = weak_dual_bracket(Power(2.0), 20, 8, np.random.default_rng(5))
        assert a == b

    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
    def test_finite_and_attained(self, p):
        rep = weak_dual_bracket(Power(p), 20, 16, np.random.default_rng(1))
        assert math.isfinite(rep.C_emp) and rep.C_emp > 0
        assert rep.attained_ratio >= 0.5
        assert rep.random_sup <= rep.C_emp

    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
    def test_grows_towards_continuum_constant(self, p):
        cs = [weak_dual_bracket(Power(p), 4, n, np.random.default_rng(2)).C_emp for n in (4, 16, 64)]
        assert cs[0] <= cs[1] <= cs[2] <= continuum_limit(p)

    def test_p3_stable_across_n(self):
        cs = [weak_dual_bracket(Power(3.0), 10, n, np.random.default_rng(3)).C_emp for n in (4, 16, 64)]
        assert (max(cs) - min(cs)) / min(cs) < 0.25

    def test_csv_row(self):
        row = weak_dual_bracket(Power(2.0), 4, 4, np.random.default_rng(0), family="power-2").csv_row()
        assert list(row) == ["family", "n", "trials", "C_emp", "attained_ratio"]
        assert row["family"] == "power-2"

    def test_trials_domain(self):
        with pytest.raises(DomainError):
            weak_dual_bracket(Power(2.0), 1, 4)
