"""Named, seeded invariant suites.

Every suite is a function ``(ctx) -> dict of checks``; a check is a dict with
at least a boolean ``passed``.  Each suite draws from its own generator seeded
by ``(seed, crc32(name))``, so results do not depend on which other suites run
or in which order.
"""

from __future__ import annotations

import math
import os
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import hardy as hd
from .config import DEFAULT, Settings
from .duality import (
    dual_norm_bruteforce,
    pairing,
    random_feasible_candidates,
    rearrangement_bound,
    weak_dual_bracket,
)
from .errors import ContractViolation, NCOrliczError
from .linalg import hermitian_function
from .nfunction import (
    ExpType,
    Power,
    PowerLog,
    complement,
    delta2_constant,
    dilation_indices,
    index_inclusion_check,
    inverse_product_ratio,
    nabla2_check,
)
from .norms import (
    hardy_average_quasinorm,
    luxemburg_norm,
    marcinkiewicz_norm,
    modular_sup,
    seminorm_N0,
    seminorm_Ninf,
    step_pairing,
    weak_lp_norm,
    weak_orlicz_quasinorm,
)
from .sampling import (
    family_battery,
    near_linear,
    parametric_families,
    random_density,
    random_hardy_element,
    random_matrix,
    random_step_function,
    random_unitary,
)
from .spectra import (
    DecreasingStepFunction,
    ParametricDecay,
    TracedMatrix,
    extremal_element,
    singular_value_function,
    singular_values,
)
from .weighted import Density, functional_calculus, induced_operator, isometry_check, t_map, weight_of, weighted_weak_norm

__all__ = ["TOLERANCES", "SUITES", "SuiteResult", "Context", "run_suite", "run_suites", "select_suites", "suite_rng"]

TOLERANCES: dict[str, float] = {
    "young": 1e-12,
    "convexity": 1e-12,
    "biconjugation": 1e-6,
    "inverse_product": 1e-9,
    "dilation": 1e-4,
    "modular_sup": 1e-9,
    "unitary_invariance": 1e-10,
    "sum_inequality": 1e-9,
    "trace_functional": 1e-10,
    "projection": 1e-9,
    "weak_lp": 1e-9,
    "quasi_norm": 1e-9,
    "power_consistency": 1e-9,
    "marcinkiewicz": 1e-9,
    "seminorm": 1e-9,
    "extremal": 1e-9,
    "isometry": 1e-10,
    "weight": 1e-10,
    "reconstruction": 1e-12,
    "membership": 1e-10,
    "pairing": 1e-10,
    "bruteforce": 1e-8,
    "bracket_stability": 0.25,
    "attained_ratio": 0.5,
    "equivalence_variation": 0.2,
}

_MAX_FAILURES = 10


@dataclass
class Context:
    rng: np.random.Generator
    trials: int
    tol: dict[str, float]
    settings: Settings = DEFAULT

    def count(self, divisor: int = 1, minimum: int = 1) -> int:
        return max(minimum, self.trials // divisor)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checks: dict
    error: str | None = None

    def to_json(self) -> dict:
        out = {"passed": self.passed, "checks": self.checks}
        if self.error is not None:
            out["error"] = self.error
        return out


class _Check:
    """Accumulates pass/fail plus a bounded list of failure records."""

    def __init__(self):
        self.n = 0
        self.failures: list = []
        self.failed = 0
        self.stats: dict = {}

    def record(self, ok: bool, **info):
        self.n += 1
        if not ok:
            self.failed += 1
            if len(self.failures) < _MAX_FAILURES:
                self.failures.append(info)

    def worst(self, key: str, value: float):
        self.stats[key] = max(self.stats.get(key, 0.0), float(value))

    def result(self, **extra) -> dict:
        out = {"passed": self.failed == 0, "cases": self.n, "failed": self.failed}
        out.update(self.stats)
        out.update(extra)
        if self.failures:
            out["failures"] = self.failures
        return out


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def _log_uniform(rng, lo, hi, size=None):
    return np.exp(rng.uniform(math.log(lo), math.log(hi), size=size))


# ---------------------------------------------------------------------------
# nfunction


def _nf_young(ctx: Context) -> dict:
    checks = {}
    for name, f in family_battery().items():
        psi = f.conjugate
        s = _log_uniform(ctx.rng, 1e-3, 1e2, ctx.trials)
        t = _log_uniform(ctx.rng, 1e-3, 1e2, ctx.trials)
        lhs = s * t
        rhs = f.Phi(t) + psi.Phi(s)
        bad = lhs > rhs + ctx.tol["young"] * np.maximum(1.0, lhs)
        c = _Check()
        c.n, c.failed = int(s.size), int(bad.sum())
        c.failures = [{"s": float(a), "t": float(b)} for a, b in zip(s[bad][:_MAX_FAILURES], t[bad][:_MAX_FAILURES])]
        checks[name] = c.result()
    return checks


def _nf_convexity(ctx: Context) -> dict:
    checks = {}
    for name, f in family_battery().items():
        t1 = _log_uniform(ctx.rng, 1e-3, 1e2, ctx.trials)
        t2 = _log_uniform(ctx.rng, 1e-3, 1e2, ctx.trials)
        th = ctx.rng.uniform(size=ctx.trials)
        lhs = f.Phi(th * t1 + (1 - th) * t2)
        rhs = th * f.Phi(t1) + (1 - th) * f.Phi(t2)
        bad = lhs > rhs + ctx.tol["convexity"] * np.maximum(1.0, rhs)
        checks[name] = {"passed": not bad.any(), "cases": int(t1.size), "failed": int(bad.sum())}
    return checks


def _nf_biconjugation(ctx: Context) -> dict:
    grid = np.geomspace(1e-3, 1e3, 61)
    checks = {}
    for name, f in parametric_families().items():
        ff = complement(complement(f))
        a, b = ff.Phi(grid), f.Phi(grid)
        fin = np.isfinite(b)
        err = float(np.max(np.abs(a[fin] - b[fin]) / b[fin]))
        inf_ok = bool(np.all(np.isinf(a[~fin])))
        checks[name] = {"passed": err < ctx.tol["biconjugation"] and inf_ok, "max_rel_error": err}
    return checks


def _nf_delta2_nabla2(ctx: Context) -> dict:
    checks = {}
    for name, f in family_battery().items():
        k = delta2_constant(f, ctx.settings)
        nb = nabla2_check(f.conjugate, ctx.settings)
        k_psi = delta2_constant(f.conjugate, ctx.settings)
        nb_phi = nabla2_check(f, ctx.settings)
        ok = (math.isfinite(k) == nb.holds) and (math.isfinite(k_psi) == nb_phi.holds)
        checks[name] = {
            "passed": ok,
            "delta2": k,
            "complement_nabla2": nb.holds,
            "complement_delta2": k_psi,
            "nabla2": nb_phi.holds,
        }
    return checks


def _nf_inverse_product(ctx: Context) -> dict:
    grid = np.geomspace(1e-6, 1e6, 241)
    tol = ctx.tol["inverse_product"]
    checks = {}
    for name, f in family_battery().items():
        try:
            r = np.asarray(inverse_product_ratio(f, grid, tol=tol))
            checks[name] = {"passed": True, "min": float(r.min()), "max": float(r.max())}
        except ContractViolation as exc:
            checks[name] = {"passed": False, "error": str(exc)[:200]}
    return checks


def _nf_indices(ctx: Context) -> dict:
    checks = {}
    for p in (1.5, 2.0, 3.0, 4.0):
        f = Power(p)
        di = dilation_indices(f, ctx.settings)
        inc = index_inclusion_check(f, ctx.settings)
        target = 1.0 / f.q
        err = max(abs(di.p_phi - target), abs(di.q_phi - target))
        checks[f"power-{p:g}"] = {
            "passed": err < ctx.tol["dilation"] and inc.holds_psi and bool(inc.warnings) and not di.flagged,
            "p_phi": di.p_phi,
            "q_phi": di.q_phi,
            "expected": target,
            "inclusion_psi": inc.holds_psi,
            "inclusion_phi": inc.holds_phi,
            "warnings": list(inc.warnings),
        }
    return checks


# ---------------------------------------------------------------------------
# spectra


def _random_shape(ctx: Context, lo: int = 1, hi: int = 8):
    return int(ctx.rng.integers(lo, hi + 1)), float(_log_uniform(ctx.rng, 0.25, 4.0))


def _sp_modular_sup(ctx: Context) -> dict:
    fams = [Power(2.0), Power(1.5), PowerLog(2.0), ExpType()]
    c = _Check()
    for i in range(ctx.trials):
        n, cs = _random_shape(ctx)
        x = random_matrix(ctx.rng, n, cs)
        f = fams[i % len(fams)]
        scale = float(_log_uniform(ctx.rng, 0.2, 5.0))
        mu_side = modular_sup(singular_value_function(x), f, scale)
        # lambda_s just below each singular value, from the raw spectrum
        sv = singular_values(x)
        sv = sv[sv > 0]
        lam = cs * np.sum(sv[None, :] >= sv[:, None], axis=1)
        lam_side = float(np.max(lam * np.asarray(f.Phi(sv / scale)))) if sv.size else 0.0
        err = _rel(mu_side, lam_side) if lam_side else abs(mu_side)
        c.worst("max_rel_error", err)
        c.record(err <= ctx.tol["modular_sup"], n=n, mu=mu_side, lam=lam_side)
    return {"sup_mu_equals_sup_lambda": c.result()}


def _sp_unitary(ctx: Context) -> dict:
    c = _Check()
    for _ in range(ctx.count(10)):
        n, cs = _random_shape(ctx)
        x = random_matrix(ctx.rng, n, cs)
        u, v = random_unitary(ctx.rng, n), random_unitary(ctx.rng, n)
        y = TracedMatrix(u @ x.entries @ v, cs)
        a, b = singular_values(x), singular_values(y)
        err = float(np.max(np.abs(a - b))) / max(a[0], 1e-300)
        c.worst("max_rel_error", err)
        c.record(err <= ctx.tol["unitary_invariance"], n=n)
    return {"mu_unitarily_invariant": c.result()}


def _sp_sum_inequalities(ctx: Context) -> dict:
    tol = ctx.tol["sum_inequality"]
    c_sum, c_prod, c_mono = _Check(), _Check(), _Check()
    for _ in range(ctx.trials):
        n, cs = _random_shape(ctx, 1, 6)
        x, y = random_matrix(ctx.rng, n, cs), random_matrix(ctx.rng, n, cs)
        mx, my = singular_value_function(x), singular_value_function(y)
        ms, mp = singular_value_function(x + y), singular_value_function(x @ y)
        grid = cs * np.arange(1, 2 * n + 1) / 2.0
        t, s = np.meshgrid(grid, grid, indexing="ij")
        a, b = mx(t), my(s)
        lhs_s, lhs_p = ms(t + s), mp(t + s)
        ok_s = np.all(lhs_s <= a + b + tol * np.maximum(1.0, a + b))
        ok_p = np.all(lhs_p <= a * b + tol * np.maximum(1.0, a * b))
        c_sum.record(bool(ok_s), n=n)
        c_prod.record(bool(ok_p), n=n)
        # y = 0 case: monotonicity of mu
        c_mono.record(bool(np.all(mx(t + s) <= mx(t) + tol)), n=n)
    return {"subadditivity": c_sum.result(), "submultiplicativity": c_prod.result(), "monotonicity": c_mono.result()}


def _sp_trace_functional(ctx: Context) -> dict:
    fams = [Power(2.0), Power(3.0), PowerLog(1.5)]
    c = _Check()
    for i in range(ctx.count(10)):
        n, cs = _random_shape(ctx)
        x = random_matrix(ctx.rng, n, cs)
        f = fams[i % len(fams)]
        a = x.entries.conj().T @ x.entries
        lhs = cs * float(np.real(np.trace(hermitian_function(a, lambda w: f.Phi(np.sqrt(np.clip(w, 0, None)))))))
        rhs = singular_value_function(x).integral(f.Phi)
        err = _rel(lhs, rhs)
        c.worst("max_rel_error", err)
        c.record(err <= ctx.tol["trace_functional"], n=n)
    return {"trace_of_Phi_equals_integral": c.result()}


def _sp_step_structure(ctx: Context) -> dict:
    c = _Check()
    for _ in range(ctx.count(10)):
        n, cs = _random_shape(ctx)
        m = singular_value_function(random_matrix(ctx.rng, n, cs))
        ts = np.sort(ctx.rng.uniform(0, 1.2 * n * cs, 50))
        ss = np.sort(_log_uniform(ctx.rng, 1e-2, 1e1, 50))
        mu, lam = m(ts), m.distribution(ss)
        right_cont = np.allclose(m(m.breakpoints), np.append(m.values[1:], 0.0))
        ok = bool(np.all(np.diff(mu) <= 0) and np.all(np.diff(lam) <= 0) and right_cont and np.all(np.diff(m.values) < 0))
        c.record(ok, n=n)
    return {"monotone_right_continuous": c.result()}


# ---------------------------------------------------------------------------
# norms


def _nm_projections(ctx: Context) -> dict:
    checks = {}
    for name, f in parametric_families().items():
        c = _Check()
        for k in range(1, 33):
            x = TracedMatrix.diag(np.r_[np.ones(k), np.zeros(2)])
            m = singular_value_function(x)
            target = 1.0 / float(f.Phi_inv(1.0 / k))
            lux, weak = luxemburg_norm(m, f, ctx.settings).value, weak_orlicz_quasinorm(m, f, ctx.settings).value
            err = max(_rel(lux, target), _rel(weak, target))
            c.worst("max_rel_error", err)
            c.record(err <= ctx.tol["projection"], k=k, luxemburg=lux, weak=weak, expected=target)
        checks[name] = c.result()
    return checks


def _nm_weak_lp(ctx: Context) -> dict:
    c = _Check()
    for _ in range(ctx.trials):
        m = random_step_function(ctx.rng)
        p = float(ctx.rng.uniform(1.1, 5.0))
        try:
            rep = weak_lp_norm(m, p, ctx.settings, tol=ctx.tol["weak_lp"])
            err = _rel(rep.details["mu_form"], rep.details["lambda_form"])
            c.worst("max_rel_error", err)
            c.record(True)
        except ContractViolation as exc:
            c.record(False, p=p, error=str(exc))
    return {"mu_form_equals_lambda_form": c.result()}


def _nm_weak_le_strong(ctx: Context) -> dict:
    fams = list(parametric_families().values())
    c, cp = _Check(), _Check()
    for i in range(ctx.trials):
        m = random_step_function(ctx.rng)
        f = fams[i % len(fams)]
        weak = weak_orlicz_quasinorm(m, f, ctx.settings).value
        lux = luxemburg_norm(m, f, ctx.settings).value
        c.record(weak <= lux * (1 + ctx.tol["quasi_norm"]), weak=weak, luxemburg=lux)
        p = float(ctx.rng.uniform(1.1, 5.0))
        wp = weak_orlicz_quasinorm(m, Power(p), ctx.settings).value
        cl = p ** (-1.0 / p) * weak_lp_norm(m, p, ctx.settings).value
        cp.worst("max_rel_error", _rel(wp, cl))
        cp.record(_rel(wp, cl) <= ctx.tol["power_consistency"], p=p)
    return {"weak_le_luxemburg": c.result(), "power_factor_p_to_minus_1_over_p": cp.result()}


def _nm_quasi_norm(ctx: Context) -> dict:
    fams = list(parametric_families().values())
    tol = ctx.tol["quasi_norm"]
    tri, norm_at, unit = _Check(), _Check(), _Check()
    for i in range(ctx.trials):
        f = fams[i % len(fams)]
        n = int(ctx.rng.integers(1, 9))
        x = TracedMatrix.diag(ctx.rng.exponential(size=n) * ctx.rng.choice([0.1, 1.0, 3.0]))
        y = TracedMatrix.diag(ctx.rng.permutation(ctx.rng.exponential(size=n)))
        mx, my, ms = (singular_value_function(z) for z in (x, y, x + y))
        nx, ny, ns = (weak_orlicz_quasinorm(m, f, ctx.settings).value for m in (mx, my, ms))
        tri.record(ns <= 2 * (nx + ny) * (1 + tol), sum=ns, x=nx, y=ny)
        norm_at.record(modular_sup(mx, f, nx) <= 1 + tol, norm=nx)
        if nx <= 1:
            unit.record(modular_sup(mx, f) <= nx + tol, norm=nx)
    return {"quasi_triangle_2": tri.result(), "normalization": norm_at.result(), "unit_ball": unit.result()}


def _equivalence_samples(ctx: Context, f: Power, n: int, count: int) -> list[DecreasingStepFunction]:
    out = [singular_value_function(random_matrix(ctx.rng, n)) for _ in range(count)]
    out.append(DecreasingStepFunction(np.array([1.0]), np.array([1.0])))
    out.append(singular_value_function(TracedMatrix.diag(f.Phi_inv(1.0 / np.arange(1, n + 1)))))
    return out


def _nm_equivalence(ctx: Context) -> dict:
    """Ratio brackets per (p, n).  Stability is reported, not asserted."""
    checks = {}
    count = ctx.count(200, minimum=5)
    for p in (1.5, 2.0, 3.0):
        f = Power(p)
        brackets = {}
        mc = _Check()
        for n in (4, 16, 64):
            ratios = []
            for m in _equivalence_samples(ctx, f, n, count):
                weak = weak_orlicz_quasinorm(m, f, ctx.settings).value
                try:
                    mar = marcinkiewicz_norm(m, f, ctx.settings)
                    mc.record(True)
                except ContractViolation as exc:
                    mc.record(False, n=n, error=str(exc))
                    continue
                ratios.append(mar.details["equivalent_banach_norm"] / weak)
            brackets[str(n)] = [min(ratios), max(ratios)]
        lows = [b[0] for b in brackets.values()]
        highs = [b[1] for b in brackets.values()]
        var_lo = max(lows) / min(lows) - 1
        var_hi = max(highs) / min(highs) - 1
        lim = f.p ** (1 / f.p) * f.q ** (1 + 1 / f.q)
        checks[f"power-{p:g}"] = {
            "passed": mc.failed == 0 and all(math.isfinite(h) for h in highs),
            "brackets": brackets,
            "variation_low": var_lo,
            "variation_high": var_hi,
            "stable": max(var_lo, var_hi) < ctx.tol["equivalence_variation"],
            "continuum_sup": lim,
            "marcinkiewicz_equals_equivalent": mc.result(),
        }
    return checks


def _nm_hardy_average(ctx: Context) -> dict:
    checks = {}
    count = ctx.count(500, minimum=5)
    for name, f in (("power-1.5", Power(1.5)), ("power-2", Power(2.0)), ("power-3", Power(3.0)), ("power-log-2", PowerLog(2.0))):
        consts = {}
        for n in (4, 16, 64):
            vals = []
            samples = [singular_value_function(random_matrix(ctx.rng, n)) for _ in range(count)]
            for m in samples:
                vals.append(hardy_average_quasinorm(m, f, ctx.settings).value / weak_orlicz_quasinorm(m, f, ctx.settings).value)
            consts[str(n)] = max(vals)
        cv = list(consts.values())
        checks[name] = {
            "passed": all(math.isfinite(v) for v in cv),
            "C_by_n": consts,
            "variation": max(cv) / min(cv) - 1,
        }
    return checks


def _nm_seminorms(ctx: Context) -> dict:
    tol = ctx.tol["seminorm"]
    fams = list(parametric_families().values())
    steps = _Check()
    for i in range(ctx.count(10)):
        m = random_step_function(ctx.rng)
        f = fams[i % len(fams)]
        steps.record(seminorm_N0(m, f) == 0 and seminorm_Ninf(m, f) == 0)
    f2 = Power(2.0)
    decay = ParametricDecay(((0.0, 1.0, math.sqrt(2.0), 0.5),))
    n0, ninf = seminorm_N0(decay, f2), seminorm_Ninf(decay, f2)
    ext = {}
    for p in (1.5, 2.0, 3.0):
        f = Power(p)
        ext[f"power-{p:g}"] = seminorm_N0(extremal_element(f), f)
    return {
        "step_functions_vanish": steps.result(),
        "extremal_decay_p2": {"passed": abs(n0 - 4.0) <= tol * 4 and ninf == 0.0, "N0": n0, "Ninf": ninf, "expected_N0": 4.0},
        "extremal_N0_by_family": {"passed": all(math.isfinite(v) and v > 0 for v in ext.values()), "values": ext},
    }


def _nm_extremal(ctx: Context) -> dict:
    tol = ctx.tol["extremal"]
    checks = {}
    for p in (1.5, 2.0, 3.0, 4.0):
        f = Power(p)
        vals = {str(cut): weak_orlicz_quasinorm(extremal_element(f, cut), f, ctx.settings).value for cut in (1.0, 10.0, math.inf)}
        checks[f"power-{p:g}"] = {"passed": all(abs(v - 1.0) <= tol for v in vals.values()), "weak_norm_by_cutoff": vals}
    return checks


# ---------------------------------------------------------------------------
# weighted


_ALPHAS = (0.0, 0.25, 0.5, 0.75, 1.0)


def _wt_isometry(ctx: Context) -> dict:
    fams = list(parametric_families().values())
    checks = {}
    per_alpha = {a: _Check() for a in _ALPHAS}
    for i in range(ctx.count(100)):
        n = int(ctx.rng.integers(2, 7))
        d = Density(random_density(ctx.rng, n))
        f = fams[i % len(fams)]
        sample = [random_matrix(ctx.rng, n) for _ in range(3)]
        for a in _ALPHAS:
            rep = isometry_check(d, f, a, sample, tol=ctx.tol["isometry"])
            per_alpha[a].worst("max_rel_error", rep.max_norm_rel_error)
            per_alpha[a].record(rep.passed, n=n, rank=rep.rank, failures=list(rep.failures)[:3])
    for a, c in per_alpha.items():
        checks[f"alpha={a:g}"] = c.result()
    return checks


def _wt_quasi_norm(ctx: Context) -> dict:
    fams = list(parametric_families().values())
    tol = ctx.tol["quasi_norm"]
    c1, c2, c3, c4, hom = _Check(), _Check(), _Check(), _Check(), _Check()
    for i in range(ctx.trials):
        n = int(ctx.rng.integers(1, 6))
        d = Density(random_density(ctx.rng, n))
        a = _ALPHAS[i % len(_ALPHAS)]
        f = fams[i % len(fams)]
        x = random_matrix(ctx.rng, n) * float(_log_uniform(ctx.rng, 0.05, 5.0))
        y = random_matrix(ctx.rng, n)
        tx = t_map(x, d, f, a)
        mx = singular_value_function(tx)
        nx = weak_orlicz_quasinorm(mx, f, ctx.settings).value
        ny = weighted_weak_norm(y, d, f, a, ctx.settings).value
        ns = weighted_weak_norm(x + y, d, f, a, ctx.settings).value
        c1.record(modular_sup(mx, f, nx) <= 1 + tol, norm=nx)
        c2.record(ns <= 2 * (nx + ny) * (1 + tol), sum=ns, x=nx, y=ny)
        if nx <= 1:
            c3.record(modular_sup(mx, f) <= nx + tol, norm=nx)
        lux = luxemburg_norm(mx, f, ctx.settings).value
        c4.record(nx <= lux * (1 + tol), weak=nx, luxemburg=lux)
        eta = complex(*ctx.rng.uniform(-1, 1, 2))
        ne = weighted_weak_norm(eta * x, d, f, a, ctx.settings).value
        hom.record(abs(ne - abs(eta) * nx) <= tol * max(nx, 1e-300) * 10, eta=str(eta))
    return {
        "i_normalization": c1.result(),
        "ii_quasi_triangle_2": c2.result(),
        "iii_unit_ball": c3.result(),
        "iv_weak_le_strong": c4.result(),
        "homogeneity": hom.result(),
    }


def _wt_weight(ctx: Context) -> dict:
    tol = ctx.tol["weight"]
    add, faith, calc, surj, unw = _Check(), _Check(), _Check(), _Check(), _Check()
    for i in range(ctx.count(20)):
        n = int(ctx.rng.integers(1, 6))
        dm = random_density(ctx.rng, n)
        d = Density(dm)
        x = random_matrix(ctx.rng, n)
        y = random_matrix(ctx.rng, n)
        xp, yp = x.adjoint() @ x, y.adjoint() @ y
        lam = float(ctx.rng.exponential())
        lhs = weight_of(d, xp + yp * lam)
        rhs = weight_of(d, xp) + lam * weight_of(d, yp)
        add.record(abs(lhs - rhs) <= tol * max(1.0, abs(rhs)) and abs(lhs.imag) <= tol * max(1.0, abs(lhs)))
        faith.record(weight_of(d, xp).real > 0)
        back = functional_calculus(d, lambda w: w)
        calc.record(np.max(np.abs(back.entries - dm.entries)) <= 1e-12 * max(1.0, np.abs(dm.entries).max()))
        f = Power(2.0)
        surj.record(np.linalg.matrix_rank(induced_operator(d, f, _ALPHAS[i % 5])) == n * n)
        # D = Phi(1) * 1 gives T = identity
        one = Density(TracedMatrix(np.eye(n) * float(f.Phi(1.0))))
        w_one = weighted_weak_norm(x, one, f, 0.5).value
        plain = weak_orlicz_quasinorm(singular_value_function(x), f).value
        unw.record(_rel(w_one, plain) <= tol)
    return {
        "additivity": add.result(),
        "faithfulness": faith.result(),
        "calculus_identity": calc.result(),
        "surjectivity": surj.result(),
        "identity_weight_reduces": unw.result(),
    }


# ---------------------------------------------------------------------------
# hardy


_BLOCKS = ((1,), (2,), (1, 1), (1, 2), (2, 1), (1, 1, 2), (2, 2), (1, 1, 1, 1), (1, 2, 1, 3), (3, 1, 1), (1,) * 6)


def _hd_axioms(ctx: Context) -> dict:
    checks = {}
    for sizes in _BLOCKS:
        b = hd.BlockStructure(sizes)
        ax = hd.subdiagonal_axioms(b, ctx.rng)
        uniq = hd.decomposition_is_unique(b)
        x = random_matrix(ctx.rng, b.n)
        e = hd.conditional_expectation(b, x)
        ex = {
            "idempotent": bool(np.array_equal(hd.conditional_expectation(b, e).entries, e.entries)),
            "trace_preserving": abs(e.trace() - x.trace()) <= 1e-12 * max(1.0, abs(x.trace())),
        }
        checks[",".join(map(str, sizes))] = {"passed": ax["passed"] and uniq and all(ex.values()), "axioms": ax, "unique_splitting": uniq, **ex}
    return checks


def _random_blocks(ctx: Context) -> hd.BlockStructure:
    return hd.BlockStructure(_BLOCKS[int(ctx.rng.integers(len(_BLOCKS)))])


def _hd_membership(ctx: Context) -> dict:
    c = _Check()
    members = 0
    for i in range(ctx.trials):
        b = _random_blocks(ctx)
        x = random_matrix(ctx.rng, b.n, float(_log_uniform(ctx.rng, 0.5, 2.0)))
        if i % 3 == 1:
            x = hd.triangular_projection(b, x)
        elif i % 3 == 2:
            # Hardy member plus a lower perturbation near the threshold
            eps = np.where(b.strict_lower_mask, ctx.rng.uniform(0, 2e-10, (b.n, b.n)), 0)
            x = hd.triangular_projection(b, x) + TracedMatrix(eps, x.trace_scale)
        try:
            members += hd.hardy_membership(b, None, x, ctx.tol["membership"])
            c.record(True)
        except AssertionError:
            c.record(False, blocks=list(b.sizes))
    return {"annihilator_and_structural_agree": c.result(members=members)}


def _hd_riesz(ctx: Context) -> dict:
    tol = ctx.tol["reconstruction"]
    rec, valid, proj, compat, uniq = _Check(), _Check(), _Check(), _Check(), _Check()
    for _ in range(ctx.count(5)):
        b = _random_blocks(ctx)
        x = random_matrix(ctx.rng, b.n)
        h, z = hd.riesz_decomposition(b, x)
        err = float(np.max(np.abs((h + z.adjoint()).entries - x.entries)))
        rec.worst("max_abs_error", err)
        rec.record(err <= tol * max(1.0, np.abs(x.entries).max()))
        ez = hd.conditional_expectation(b, z).entries
        valid.record(hd.hardy_membership(b, None, h) and hd.hardy_membership(b, None, z) and not ez.any())
        ph = hd.triangular_projection(b, h)
        proj.record(np.array_equal(ph.entries, h.entries))
        compat.record(hd.trace_compatibility(b, x))
        # a nonzero shift by delta in A cannot keep z - delta^* in A_0
        delta = random_hardy_element(ctx.rng, b.upper_mask)
        z2 = z - delta.adjoint()
        ok2 = hd.hardy_membership(b, None, z2) and not hd.conditional_expectation(b, z2).entries.any()
        uniq.record(not ok2)
    return {
        "reconstruction": rec.result(),
        "components_valid": valid.result(),
        "projection_idempotent": proj.result(),
        "trace_compatible": compat.result(),
        "uniqueness": uniq.result(),
    }


def _hd_pairing(ctx: Context) -> dict:
    count = min(100, ctx.count(100))
    checks = {}
    for name, f in (("power-2", Power(2.0)), ("power-3", Power(3.0)), ("power-log-2", PowerLog(2.0))):
        c = _Check()
        for _ in range(count):
            b = _random_blocks(ctx)
            y = random_matrix(ctx.rng, b.n)
            sample = [random_hardy_element(ctx.rng, b.upper_mask) for _ in range(count)]
            rep = hd.dual_pairing_check(b, None, y, sample, ctx.tol["pairing"])
            c.worst("max_abs_difference", rep.max_abs_difference)
            c.record(rep.passed, blocks=list(b.sizes))
        # h-component norm is finite for the last y
        hn = hd.dual_pairing_check(b, f, y, sample[:1]).h_lorentz_norm
        checks[name] = c.result(h_lorentz_norm_finite=bool(hn is not None and math.isfinite(hn)))
        checks[name]["passed"] = checks[name]["passed"] and checks[name]["h_lorentz_norm_finite"]
    # strictly lower y pairs to zero with every Hardy element
    b = hd.BlockStructure((1, 2, 1))
    y = TracedMatrix(np.where(b.strict_lower_mask, random_matrix(ctx.rng, b.n).entries, 0))
    vals = [abs(pairing(random_hardy_element(ctx.rng, b.upper_mask), y)) for _ in range(20)]
    checks["strictly_lower_y"] = {"passed": max(vals) < ctx.tol["pairing"], "max_abs": max(vals)}
    return checks


def _hd_truncation(ctx: Context) -> dict:
    sizes = [1, 4, 16, 64]
    out = {}
    for name, f in (("power-1.01", Power(1.01)), ("power-2", Power(2.0)), ("power-4", Power(4.0)), ("near-linear", near_linear())):
        rows = hd.truncation_growth_probe(f, sizes, ctx.rng, ctx.settings)
        r = {str(row["n"]): row["ratio"] for row in rows}
        big = [row["ratio"] for row in rows if row["n"] > 1]
        out[name] = {
            "passed": abs(r["1"] - 1.0) < 1e-12,
            "ratio_by_n": r,
            "all_ones_by_n": {str(row["n"]): row["ratios"]["all_ones"] for row in rows},
            "variation_factor": max(big) / min(big),
        }
    return out


# ---------------------------------------------------------------------------
# duality


def _du_bruteforce(ctx: Context) -> dict:
    fams = [Power(1.5), Power(2.0), Power(3.0)]
    eq, lp = _Check(), _Check()
    for i in range(ctx.count(10)):
        f = fams[i % len(fams)]
        m = random_step_function(ctx.rng)
        bf = dual_norm_bruteforce(m, f).value
        mar = marcinkiewicz_norm(m, f, ctx.settings).value
        err = _rel(bf, mar)
        eq.worst("max_rel_error", err)
        eq.record(err <= ctx.tol["bruteforce"], brute=bf, marcinkiewicz=mar)
        for y in random_feasible_candidates(f, ctx.rng, 2):
            lp.record(step_pairing(m, y) <= bf * (1 + ctx.tol["bruteforce"]))
    return {"bruteforce_equals_marcinkiewicz": eq.result(), "random_candidates_below": lp.result()}


def _du_bracket(ctx: Context) -> dict:
    count = ctx.count(50, minimum=4)
    checks = {}
    for name, f in (("power-1.5", Power(1.5)), ("power-2", Power(2.0)), ("power-3", Power(3.0))):
        rows = {}
        ok = True
        for n in (4, 16, 64):
            seeds = ctx.rng.integers(0, 2**63, size=2)
            reps = [weak_dual_bracket(f, count, n, np.random.default_rng(int(s))) for s in seeds]
            c0, c1 = reps[0].C_emp, reps[1].C_emp
            seed_stable = abs(c0 - c1) <= ctx.tol["bracket_stability"] * max(c0, c1)
            attained = min(r.attained_ratio for r in reps) >= ctx.tol["attained_ratio"]
            finite = all(math.isfinite(r.C_emp) for r in reps)
            ok = ok and seed_stable and attained and finite
            rows[str(n)] = {"C_emp": [c0, c1], "attained_ratio": [r.attained_ratio for r in reps], "seed_stable": seed_stable}
        cs = [max(v["C_emp"]) for v in rows.values()]
        checks[name] = {"passed": ok, "by_n": rows, "dimension_variation": max(cs) / min(cs) - 1, "continuum_limit": f.p ** (1 / f.p) * f.q ** (1 + 1 / f.q)}
    return checks


def _du_pairing(ctx: Context) -> dict:
    tol = 1e-12
    ses, herm, bound = _Check(), _Check(), _Check()
    for i in range(ctx.trials):
        n, cs = _random_shape(ctx, 1, 6)
        x, y, w = (random_matrix(ctx.rng, n, cs) for _ in range(3))
        a = complex(*ctx.rng.standard_normal(2))
        if i % 10 == 0:
            lhs = pairing(x + w * a, y)
            rhs = pairing(x, y) + a * pairing(w, y)
            lhs2 = pairing(x, y + w * a)
            rhs2 = pairing(x, y) + np.conj(a) * pairing(x, w)
            scale = max(1.0, abs(lhs), abs(lhs2))
            ses.record(abs(lhs - rhs) <= tol * scale * 10 and abs(lhs2 - rhs2) <= tol * scale * 10)
            herm.record(abs(pairing(x, y) - np.conj(pairing(y, x))) <= tol * max(1.0, abs(pairing(x, y))))
        p = abs(pairing(x, y))
        rb = rearrangement_bound(x, y)
        bound.record(p <= rb * (1 + 1e-12) + 1e-300, pairing=p, bound=rb)
    return {"sesquilinear": ses.result(), "conjugate_symmetric": herm.result(), "rearrangement_bound": bound.result()}


# ---------------------------------------------------------------------------
# registry and runner


SUITES: dict[str, Callable[[Context], dict]] = {
    "nfunction.young": _nf_young,
    "nfunction.convexity": _nf_convexity,
    "nfunction.biconjugation": _nf_biconjugation,
    "nfunction.delta2_nabla2": _nf_delta2_nabla2,
    "nfunction.inverse_product": _nf_inverse_product,
    "nfunction.indices": _nf_indices,
    "spectra.modular_sup": _sp_modular_sup,
    "spectra.unitary_invariance": _sp_unitary,
    "spectra.sum_inequalities": _sp_sum_inequalities,
    "spectra.trace_functional": _sp_trace_functional,
    "spectra.step_structure": _sp_step_structure,
    "norms.projections": _nm_projections,
    "norms.weak_lp_forms": _nm_weak_lp,
    "norms.weak_le_strong": _nm_weak_le_strong,
    "norms.quasi_norm": _nm_quasi_norm,
    "norms.equivalence": _nm_equivalence,
    "norms.hardy_average": _nm_hardy_average,
    "norms.seminorms": _nm_seminorms,
    "norms.extremal": _nm_extremal,
    "weighted.isometry": _wt_isometry,
    "weighted.quasi_norm": _wt_quasi_norm,
    "weighted.weight": _wt_weight,
    "hardy.axioms": _hd_axioms,
    "hardy.membership": _hd_membership,
    "hardy.riesz": _hd_riesz,
    "hardy.pairing": _hd_pairing,
    "hardy.truncation": _hd_truncation,
    "duality.bruteforce": _du_bruteforce,
    "duality.bracket": _du_bracket,
    "duality.pairing": _du_pairing,
}


def suite_rng(seed: int, name: str) -> np.random.Generator:
    return np.random.default_rng([int(seed) & (2**64 - 1), zlib.crc32(name.encode())])


def select_suites(patterns: list[str] | None) -> list[str]:
    """Suite names matching exact names or module prefixes; all if empty."""
    if not patterns:
        return sorted(SUITES)
    out = set()
    for pat in patterns:
        hit = [s for s in SUITES if s == pat or s.startswith(pat + ".")]
        if not hit:
            raise KeyError(f"unknown suite {pat!r}")
        out.update(hit)
    return sorted(out)


def run_suite(name: str, seed: int, trials: int, tol: dict[str, float] | None = None, settings: Settings = DEFAULT) -> SuiteResult:
    tols = dict(TOLERANCES)
    tols.update(tol or {})
    ctx = Context(suite_rng(seed, name), int(trials), tols, settings)
    try:
        with np.errstate(over="ignore"):
            checks = SUITES[name](ctx)
    except (NCOrliczError, ArithmeticError, ValueError) as exc:
        return SuiteResult(name, False, {}, f"{type(exc).__name__}: {exc}")
    return SuiteResult(name, all(c.get("passed", False) for c in checks.values()), dict(sorted(checks.items())))


def _threads() -> int:
    env = os.environ.get("NC_ORLICZ_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return max(1, min(4, os.cpu_count() or 1))


def run_suites(
    names: list[str], seed: int, trials: int, tol: dict[str, float] | None = None, settings: Settings = DEFAULT
) -> list[SuiteResult]:
    """Run suites (possibly concurrently); results sorted by name."""
    names = sorted(names)
    workers = min(_threads(), len(names)) or 1
    if workers == 1:
        results = [run_suite(n, seed, trials, tol, settings) for n in names]
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(lambda n: run_suite(n, seed, trials, tol, settings), names))
    return sorted(results, key=lambda r: r.name)
