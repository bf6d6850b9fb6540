"""Trace pairings and brute-force dual norms on the commutative core."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._roots import refine_max
from .errors import DomainError
from .nfunction import NFunction, fundamental_function
from .norms import NormReport, lorentz_norm, step_pairing, weak_orlicz_quasinorm
from .spectra import DecreasingStepFunction, TracedMatrix, singular_value_function

__all__ = [
    "pairing",
    "rearrangement_bound",
    "indicator_candidate",
    "dual_norm_bruteforce",
    "random_feasible_candidates",
    "weak_dual_bracket",
    "BracketReport",
]


def pairing(x: TracedMatrix, y: TracedMatrix) -> complex:
    """``tau(x y^*)``."""
    return (x @ y.adjoint()).trace()


def rearrangement_bound(x: TracedMatrix, y: TracedMatrix) -> float:
    """``int mu(x) mu(y)``, an upper bound for ``|tau(x y^*)|``."""
    x._check(y)
    return step_pairing(singular_value_function(x), singular_value_function(y))


def indicator_candidate(f: NFunction, t: float) -> DecreasingStepFunction:
    """``chi_[0,t) / fund(t)``; its Lorentz norm is 1."""
    return DecreasingStepFunction(np.array([1.0 / float(fundamental_function(f, t))]), np.array([float(t)]))


def dual_norm_bruteforce(m: DecreasingStepFunction, f: NFunction) -> NormReport:
    """``sup_t <m, chi_[0,t)/fund(t)>`` over the indicator family.

    Each pairing is evaluated as an explicit step-function integral.  The
    candidates at the step breakpoints are scanned, then the two segments
    around the best one are refined.
    """
    if m.is_zero:
        return NormReport(0.0, None, "closed-form")

    def value(t: float) -> float:
        return step_pairing(m, indicator_candidate(f, t))

    T = m.breakpoints
    vals = np.array([value(t) for t in T])
    j = int(np.argmax(vals))
    best, best_t = float(vals[j]), float(T[j])
    lo = T[j - 1] if j > 0 else T[0] * 1e-6
    hi = T[j + 1] if j + 1 < T.size else T[-1] * 1e6
    for a, b in ((lo, T[j]), (T[j], hi)):
        v, t = refine_max(value, float(a), float(b))
        if v > best:
            best, best_t = v, t
    return NormReport(best, best_t, "segment-search", {"candidates": int(T.size)})


def random_feasible_candidates(
    f: NFunction, rng: np.random.Generator, count: int, max_steps: int = 8, scale: float = 1.0
) -> list[DecreasingStepFunction]:
    """Random decreasing step functions normalised to Lorentz norm 1."""
    out = []
    for _ in range(count):
        k = int(rng.integers(1, max_steps + 1))
        vals = np.sort(rng.exponential(size=k))[::-1] + 1e-3
        lens = rng.exponential(scale, size=k) + 1e-3
        y = DecreasingStepFunction.from_values(vals, lens)
        out.append(y.scale(1.0 / lorentz_norm(y, f).value))
    return out


@dataclass(frozen=True)
class BracketReport:
    family: str
    n: int
    trials: int
    C_emp: float
    aligned_sup: float
    random_sup: float
    attained_ratio: float
    skipped: int
    details: dict = field(default_factory=dict, compare=False)

    def csv_row(self) -> dict:
        return {
            "family": self.family,
            "n": self.n,
            "trials": self.trials,
            "C_emp": self.C_emp,
            "attained_ratio": self.attained_ratio,
        }


def _ratio(x: TracedMatrix, y: TracedMatrix, f: NFunction) -> float | None:
    mx = singular_value_function(x)
    my = singular_value_function(y)
    if mx.is_zero or my.is_zero:
        return None
    den = weak_orlicz_quasinorm(mx, f).value * lorentz_norm(my, f).value
    return abs(pairing(x, y)) / den


def _aligned_pair(d: np.ndarray, k: int, c: float) -> tuple[TracedMatrix, TracedMatrix]:
    """Diagonal ``x = diag(d)`` and ``y`` the indicator of its ``k`` largest entries, phase aligned."""
    order = np.argsort(-np.abs(d), kind="stable")
    y = np.zeros_like(d, dtype=complex)
    top = order[:k]
    y[top] = np.exp(1j * np.angle(d[top]))
    return TracedMatrix.diag(d, c), TracedMatrix.diag(y, c)


def weak_dual_bracket(
    f: NFunction,
    trials: int,
    n: int,
    rng: np.random.Generator | None = None,
    trace_scale: float = 1.0,
    family: str | None = None,
) -> BracketReport:
    """Empirical Hölder constant for ``|tau(x y^*)| <= C ||x||_{Phi,inf} ||y||_{1,Psi}``.

    Half of the trials are random Gaussian pairs.  The other half are
    diagonal pairs with ``y`` the indicator of the top ``k`` entries of
    ``x`` (best ``k``), and the first of these uses the discrete extremal
    element ``x_j = Phi^{-1}(1/(c j))``.  ``attained_ratio`` is the aligned
    sup divided by ``C_emp``.
    """
    if trials < 2:
        raise DomainError("trials must be at least 2")
    rng = np.random.default_rng(0) if rng is None else rng
    c = trace_scale
    random_sup = 0.0
    aligned_sup = 0.0
    skipped = 0
    n_aligned = trials // 2
    for i in range(trials - n_aligned):
        x = TracedMatrix(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)), c)
        y = TracedMatrix(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)), c)
        r = _ratio(x, y, f)
        if r is None:
            skipped += 1
            continue
        random_sup = max(random_sup, r)
    for i in range(n_aligned):
        if i == 0:
            d = np.asarray(f.Phi_inv(1.0 / (c * np.arange(1, n + 1))), dtype=complex)
        else:
            mag = np.abs(rng.standard_normal(n)) * rng.uniform(0.2, 1.0, size=n) ** rng.uniform(0, 3)
            d = mag * np.exp(2j * np.pi * rng.uniform(size=n))
        if not np.any(d):
            skipped += 1
            continue
        xnorm = weak_orlicz_quasinorm(singular_value_function(TracedMatrix.diag(d, c)), f).value
        # the pairing with the top-k indicator is c * (sum of k largest |d|)
        partial = c * np.cumsum(np.sort(np.abs(d))[::-1])
        ks = np.arange(1, n + 1)
        r_k = partial / (xnorm * np.asarray(fundamental_function(f, c * ks)))
        k = int(np.argmax(r_k)) + 1
        x, y = _aligned_pair(d, k, c)
        r = _ratio(x, y, f)
        aligned_sup = max(aligned_sup, r)
    C_emp = max(random_sup, aligned_sup)
    if not math.isfinite(C_emp):
        raise ArithmeticError("empirical Hölder constant is not finite")
    name = family or f.to_json().get("family", type(f).__name__)
    return BracketReport(
        family=str(name),
        n=int(n),
        trials=int(trials),
        C_emp=C_emp,
        aligned_sup=aligned_sup,
        random_sup=random_sup,
        attained_ratio=aligned_sup / C_emp if C_emp > 0 else math.nan,
        skipped=skipped,
    )
