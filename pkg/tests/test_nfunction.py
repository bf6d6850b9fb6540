import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar

from nc_orlicz.errors import ContractViolation, DomainError, UnsupportedFamilyError
from nc_orlicz.nfunction import (
    ExpType,
    Power,
    PowerLog,
    Tabulated,
    complement,
    delta2_constant,
    dilation_indices,
    fundamental_function,
    from_json,
    index_inclusion_check,
    indices,
    inverse_product_ratio,
    nabla2_check,
)
from nc_orlicz.sampling import family_battery, near_linear

from conftest import PARAMETRIC, PARAMETRIC_IDS

BATTERY = family_battery()


def legendre(f, s):
    # Psi(s) = sup_t (s t - Phi(t)); maximiser is psi(s), bracket generously
    hi = max(10.0, 10 * float(f.psi(s)))
    res = minimize_scalar(lambda t: -(s * t - float(f.Phi(t))), bounds=(0.0, hi), method="bounded",
                          options={"xatol": 1e-12})
    return -res.fun


class TestEvaluation:
    def test_power_values(self):
        f = Power(2.0)
        assert f.Phi(3.0) == pytest.approx(4.5)
        assert f.phi(3.0) == pytest.approx(3.0)
        assert f.Phi_inv(4.5) == pytest.approx(3.0)

    def test_powerlog_inverse(self):
        assert PowerLog(2.0).Phi_inv(math.log(2.0)) == pytest.approx(1.0, rel=1e-12)

    def test_exp_inverse(self):
        assert ExpType().Phi_inv(math.e - 2.0) == pytest.approx(1.0, rel=1e-12)

    def test_exp_small_argument_accuracy(self):
        t = 1e-5
        assert ExpType().Phi(t) == pytest.approx(t * t / 2 + t**3 / 6, rel=1e-12)

    def test_exp_overflow_is_inf(self):
        assert ExpType().Phi(1e4) == math.inf

    def test_negative_argument_rejected(self):
        with pytest.raises(DomainError):
            Power(2.0).Phi(-1.0)

    @pytest.mark.parametrize("p", [1.0, 0.5, math.inf])
    def test_power_domain(self, p):
        with pytest.raises(DomainError):
            Power(p)

    def test_power_complement_is_power(self):
        assert complement(Power(3.0)) == Power(1.5)

    @pytest.mark.parametrize("f", PARAMETRIC + [complement(f) for f in PARAMETRIC[3:]],
                             ids=PARAMETRIC_IDS + [i + "-c" for i in PARAMETRIC_IDS[3:]])
    def test_inverse_roundtrip(self, f):
        y = np.geomspace(1e-10, 1e10, 81)
        back = np.asarray(f.Phi(f.Phi_inv(y)))
        np.testing.assert_allclose(back, y, rtol=1e-11)


class TestComplement:
    @pytest.mark.parametrize("f", PARAMETRIC, ids=PARAMETRIC_IDS)
    def test_complement_matches_legendre(self, f):
        psi = complement(f)
        for s in [0.1, 0.7, 1.0, 2.5, 6.0]:
            assert float(psi.Phi(s)) == pytest.approx(legendre(f, s), rel=1e-7, abs=1e-12)

    def test_power_complement_closed_form(self):
        # Legendre transform of t^2/2 is s^2/2, done symbolically
        t, s = sp.symbols("t s", positive=True)
        expr = s * t - t**2 / 2
        tstar = sp.solve(sp.diff(expr, t), t)[0]
        assert sp.simplify(expr.subs(t, tstar) - s**2 / 2) == 0
        assert complement(Power(2.0)).Phi(1.7) == pytest.approx(1.7**2 / 2)

    def test_biconjugation(self, parametric):
        f = parametric
        cc = complement(complement(f))
        t = np.geomspace(1e-2, 5.0, 25)
        np.testing.assert_allclose(np.asarray(cc.Phi(t)), np.asarray(f.Phi(t)), rtol=1e-6)

    def test_tabulated_complement(self, tab2):
        s = np.array([0.2, 1.0, 3.0])
        np.testing.assert_allclose(np.asarray(complement(tab2).Phi(s)), s**2 / 2, rtol=1e-5)


class TestInequalities:
    @given(s=st.floats(1e-3, 1e3), t=st.floats(1e-3, 1e3),
           idx=st.integers(0, len(PARAMETRIC) - 1))
    @settings(max_examples=200, deadline=None)
    def test_young(self, s, t, idx):
        f = PARAMETRIC[idx]
        lhs = s * t
        rhs = float(f.Phi(t)) + float(f.conjugate.Phi(s))
        assert lhs <= rhs * (1 + 1e-10) + 1e-300

    @given(a=st.floats(1e-3, 50), b=st.floats(1e-3, 50), lam=st.floats(0, 1),
           idx=st.integers(0, len(PARAMETRIC) - 1))
    @settings(max_examples=200, deadline=None)
    def test_convexity(self, a, b, lam, idx):
        f = PARAMETRIC[idx]
        mid = float(f.Phi(lam * a + (1 - lam) * b))
        assert mid <= (lam * float(f.Phi(a)) + (1 - lam) * float(f.Phi(b))) * (1 + 1e-12) + 1e-300

    def test_inverse_product_power3(self):
        assert inverse_product_ratio(Power(3.0), 1.0) == pytest.approx(3 ** (1 / 3) * 1.5 ** (2 / 3), rel=1e-12)
        assert inverse_product_ratio(Power(3.0), 1.0) == pytest.approx(1.88988, abs=1e-5)

    def test_inverse_product_tabulated_p2(self, tab2):
        assert inverse_product_ratio(tab2, 1.0) == pytest.approx(2.0, abs=1e-6)

    @pytest.mark.parametrize("f", list(BATTERY.values()), ids=list(BATTERY))
    def test_inverse_product_in_range(self, f):
        r = inverse_product_ratio(f, np.geomspace(1e-6, 1e6, 61))
        assert np.all((r >= 1 - 1e-9) & (r <= 2 + 1e-9))

    def test_inverse_product_domain(self):
        with pytest.raises(DomainError):
            inverse_product_ratio(Power(2.0), 0.0)

    def test_contract_violation_is_assertion(self):
        assert issubclass(ContractViolation, AssertionError)


class TestGrowth:
    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
    def test_delta2_power(self, p):
        assert delta2_constant(Power(p)) == pytest.approx(2**p, rel=1e-12)

    def test_exp_not_delta2(self):
        assert delta2_constant(ExpType()) == math.inf

    def test_exp_complement_delta2(self):
        assert math.isfinite(delta2_constant(complement(ExpType())))

    @pytest.mark.parametrize("f, expected", [(Power(2.0), True), (PowerLog(1.5), True), (ExpType(), True),
                                             (PowerLog(1.0), False)])
    def test_nabla2(self, f, expected):
        # t log(1+t) has upper index 1 at infinity, so Nabla2 fails
        assert nabla2_check(f).holds is expected

    def test_nabla2_fails_for_exp_complement(self):
        assert not nabla2_check(complement(ExpType())).holds

    @pytest.mark.parametrize("f", list(BATTERY.values()), ids=list(BATTERY))
    def test_delta2_nabla2_duality(self, f):
        # Phi in Delta2 iff Psi in Nabla2
        assert math.isfinite(delta2_constant(f)) == nabla2_check(complement(f)).holds

    @pytest.mark.parametrize("f, expected", [(Power(2.5), (2.5, 2.5)), (PowerLog(2.0), (2.0, 3.0)),
                                             (ExpType(), (2.0, math.inf))])
    def test_exact_indices(self, f, expected):
        assert indices(f) == expected

    def test_grid_indices_near_linear(self):
        a, b = indices(near_linear(0.05))
        assert 1.0 < a <= b < 1.1


class TestFundamental:
    def test_power2_at_two(self):
        assert fundamental_function(Power(2.0), 2.0) == pytest.approx(1.0)

    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
    def test_closed_form(self, p):
        q = p / (p - 1)
        t = np.array([0.3, 1.0, 7.0])
        np.testing.assert_allclose(fundamental_function(Power(p), t), (t / q) ** (1 / q), rtol=1e-12)

    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
    def test_dilation_indices(self, p):
        d = dilation_indices(Power(p))
        q = p / (p - 1)
        assert d.p_phi == pytest.approx(1 / q, abs=1e-4)
        assert d.q_phi == pytest.approx(1 / q, abs=1e-4)
        assert not d.flagged

    def test_dilation_scale_invariant(self):
        a = dilation_indices(PowerLog(1.0))
        b = dilation_indices(PowerLog(1.0), scale=37.0)
        assert a.p_phi == pytest.approx(b.p_phi, abs=1e-9)
        assert a.q_phi == pytest.approx(b.q_phi, abs=1e-9)

    @pytest.mark.parametrize("p", [1.5, 3.0])
    def test_inclusion_emits_ambiguity(self, p):
        res = index_inclusion_check(Power(p))
        assert res.holds_psi
        assert not res.holds_phi
        assert res.warnings[0]["kind"] == "index-interval-ambiguity"

    def test_inclusion_p2_both(self):
        res = index_inclusion_check(Power(2.0))
        assert res.holds_psi and res.holds_phi
        assert len(res.warnings) >= 1


class TestJson:
    @pytest.mark.parametrize("obj, cls", [
        ({"family": "power", "p": 2}, Power),
        ({"family": "power_log", "p": 1}, PowerLog),
        ({"family": "exp-type"}, ExpType),
        ({"family": "tabulated", "grid": [1, 2], "phi": [1, 2], "tail_exponents": [1, 1]}, Tabulated),
    ])
    def test_roundtrip(self, obj, cls):
        f = from_json(obj)
        assert isinstance(f, cls)
        assert from_json(f.to_json()) == f

    def test_complement_json(self):
        f = from_json({"family": "complement", "of": {"family": "power", "p": 3}})
        assert f.Phi(2.0) == pytest.approx(2.0**1.5 / 1.5)

    def test_unknown_family(self):
        with pytest.raises(UnsupportedFamilyError):
            from_json({"family": "sinh"})
