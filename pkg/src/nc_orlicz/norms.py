"""Rearrangement-invariant norms, quasi-norms and seminorms.

Every function accepts a :class:`DecreasingStepFunction`, a
:class:`ParametricDecay` (where meaningful) or a :class:`TracedMatrix`, which
is reduced to its singular-number function first.

Notation: ``Phi`` is the N-function, ``Psi`` its complement and
``fund(t) = 1 / Psi^{-1}(1/t)`` the fundamental function that generates the
Lorentz and Marcinkiewicz norms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._roots import convex_inverse, refine_max
from .config import DEFAULT, Settings
from .errors import ContractViolation, DivergenceError, DomainError, UnboundedError
from .nfunction import NFunction, Power, fundamental_function
from .spectra import DecreasingStepFunction, _as_rearrangement

__all__ = [
    "NormReport",
    "luxemburg_norm",
    "weak_orlicz_quasinorm",
    "equivalent_banach_norm",
    "weak_lp_norm",
    "lorentz_norm",
    "marcinkiewicz_norm",
    "seminorm_N0",
    "seminorm_Ninf",
    "modular_sup",
    "hardy_average_quasinorm",
    "step_pairing",
]


@dataclass(frozen=True)
class NormReport:
    value: float
    attained_at: float | None = None
    method: str = "closed-form"
    details: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> dict:
        return {"value": self.value, "attained_at": self.attained_at, "method": self.method}


_ZERO = NormReport(0.0, None, "closed-form")


# ---------------------------------------------------------------------------
# sup over segments


def _segments_for(m) -> list[tuple[float, float]]:
    if isinstance(m, DecreasingStepFunction):
        T = np.concatenate([[0.0], m.breakpoints])
        return list(zip(T[:-1].tolist(), T[1:].tolist()))
    return [(a, b) for a, b, _, _ in m.pieces]


def _segment_samples(a: float, b: float, k: int) -> np.ndarray:
    if a == 0.0 and math.isinf(b):
        return np.geomspace(1e-12, 1e12, 2 * k)
    if a == 0.0:
        return np.geomspace(b * 1e-12, b, k)
    if math.isinf(b):
        return np.geomspace(a, a * 1e12, k)
    return np.linspace(a, b, k)


def _limit_probe(h, edge: float, far1: float, far2: float) -> float | None:
    """Value of ``h`` far out, or raise if ``h`` keeps growing there."""
    with np.errstate(all="ignore"):
        v0, v1, v2 = (float(h(np.array([x]))[0]) for x in (edge, far1, far2))
    if not math.isfinite(v2) or (v2 > v1 * (1 + 1e-9) and v1 > v0 * (1 + 1e-9)):
        raise UnboundedError("supremum is infinite")
    return max(v1, v2)


def _sup_over_segments(
    h: Callable[[np.ndarray], np.ndarray],
    segments: list[tuple[float, float]],
    settings: Settings,
    probe_limits: bool = True,
) -> tuple[float, float]:
    """Sup of ``h`` over the union of segments: dense samples + refinement.

    Segments whose best sample is within 1e-3 of the global best are refined
    by bounded Brent search between the neighbours of their best sample.
    """
    k = settings.segment_samples
    best_val, best_t = -math.inf, math.nan
    per_seg = []
    for a, b in segments:
        ts = _segment_samples(a, b, k)
        with np.errstate(all="ignore"):
            vals = np.asarray(h(ts), dtype=float)
        if np.any(np.isnan(vals)):
            raise UnboundedError("objective is undefined on a segment")
        j = int(np.argmax(vals))
        per_seg.append((ts, vals, j))
        if vals[j] > best_val:
            best_val, best_t = float(vals[j]), float(ts[j])
    if not math.isfinite(best_val):
        raise UnboundedError("supremum is infinite")
    for ts, vals, j in per_seg:
        if vals[j] < best_val - 1e-3 * abs(best_val):
            continue
        lo, hi = ts[max(j - 1, 0)], ts[min(j + 1, ts.size - 1)]
        v, t = refine_max(lambda x: float(h(np.array([x]))[0]), float(lo), float(hi))
        if v > best_val:
            best_val, best_t = v, t
    if probe_limits:
        a0, b0 = segments[0]
        if a0 == 0.0:
            edge = b0 if math.isfinite(b0) else 1.0
            lim = _limit_probe(h, edge * 1e-12, edge * 1e-100, edge * 1e-200)
            if lim > best_val:
                best_val, best_t = lim, 0.0
        a1, b1 = segments[-1]
        if math.isinf(b1):
            edge = a1 if a1 > 0 else 1.0
            lim = _limit_probe(h, edge * 1e12, edge * 1e100, edge * 1e200)
            if lim > best_val:
                best_val, best_t = lim, math.inf
    return best_val, best_t


# ---------------------------------------------------------------------------
# Orlicz-type norms


def modular_sup(m, f: NFunction, scale: float = 1.0) -> float:
    """``sup_t t Phi(mu_t / scale)``; exact max over step right endpoints."""
    m = _as_rearrangement(m)
    if isinstance(m, DecreasingStepFunction):
        if m.is_zero:
            return 0.0
        return float(np.max(m.breakpoints * np.asarray(f.Phi(m.values / scale))))

    def h(t):
        return t * np.asarray(f.Phi(np.asarray(m(t)) / scale))

    segs = [(a, b) for a, b, _, _ in m.pieces]
    return _sup_over_segments(h, segs, DEFAULT)[0]


def luxemburg_norm(m, f: NFunction, settings: Settings = DEFAULT) -> NormReport:
    """``inf{lam > 0 : int Phi(mu_t / lam) dt <= 1}`` for finite-support input.

    Solved in ``u = 1/lam``: the modular ``u -> sum l Phi(u v)`` is convex and
    increasing, so Newton from above converges monotonically.
    """
    m = _as_rearrangement(m)
    if not isinstance(m, DecreasingStepFunction):
        raise DomainError("luxemburg_norm needs a finitely supported step function")
    if m.is_zero:
        return _ZERO
    v, ln = m.values, m.lengths

    def modular(u):
        with np.errstate(over="ignore"):
            return np.asarray(f.Phi(np.outer(u, v))) @ ln

    def slope(u):
        with np.errstate(over="ignore"):
            return np.asarray(f.phi(np.outer(u, v))) @ (v * ln)

    u = float(convex_inverse(modular, slope, np.array([1.0]))[0])
    return NormReport(1.0 / u, None, "bisection")


def weak_orlicz_quasinorm(m, f: NFunction, settings: Settings = DEFAULT) -> NormReport:
    """``inf{c : t Phi(mu_t / c) <= 1 for all t} = sup_t mu_t / Phi^{-1}(1/t)``.

    For steps ``1/Phi^{-1}(1/t)`` increases, so the sup over each step sits at
    its right endpoint and the result is an exact finite maximum.
    """
    m = _as_rearrangement(m)
    if isinstance(m, DecreasingStepFunction):
        if m.is_zero:
            return _ZERO
        T = m.breakpoints
        r = m.values / np.asarray(f.Phi_inv(1.0 / T))
        k = int(np.argmax(r))
        return NormReport(float(r[k]), float(T[k]), "closed-form")

    def h(t):
        return np.asarray(m(t)) / np.asarray(f.Phi_inv(1.0 / t))

    val, t = _sup_over_segments(h, _segments_for(m), settings)
    return NormReport(val, t, "segment-search")


def hardy_average_quasinorm(m, f: NFunction, settings: Settings = DEFAULT) -> NormReport:
    """Weak Orlicz quasi-norm of the Hardy average ``(1/t) int_0^t mu``."""
    m = _as_rearrangement(m)
    if isinstance(m, DecreasingStepFunction) and m.is_zero:
        return _ZERO

    def h(t):
        return np.asarray(m.hardy(t)) / t / np.asarray(f.Phi_inv(1.0 / t))

    segs = _segments_for(m)
    if isinstance(m, DecreasingStepFunction):
        # the average decays like 1/t past the support; cover it as well
        L = m.total_length
        segs = segs + [(L, L * 1e6)]
    val, t = _sup_over_segments(h, segs, settings)
    return NormReport(val, t, "segment-search")


def _hardy_sup(m, weight: Callable[[np.ndarray], np.ndarray], settings: Settings) -> NormReport:
    if isinstance(m, DecreasingStepFunction) and m.is_zero:
        return _ZERO

    def h(t):
        return weight(t) * np.asarray(m.hardy(t))

    # past the support the Hardy transform is constant and the weight
    # decreases, so the step grid [0, L] suffices
    val, t = _sup_over_segments(h, _segments_for(m), settings)
    return NormReport(val, t, "segment-search")


def equivalent_banach_norm(m, f: NFunction, settings: Settings = DEFAULT) -> NormReport:
    """``sup_t Psi^{-1}(1/t) int_0^t mu_s ds``."""
    m = _as_rearrangement(m)
    psi = f.conjugate
    return _hardy_sup(m, lambda t: np.asarray(psi.Phi_inv(1.0 / t)), settings)


def marcinkiewicz_norm(m, f: NFunction, settings: Settings = DEFAULT, cross_check: bool = True) -> NormReport:
    """``sup_t (1/fund(t)) int_0^t mu_s ds``.

    With ``cross_check`` the result is compared with
    :func:`equivalent_banach_norm` and a :class:`ContractViolation` raised on
    a relative mismatch above 1e-9.
    """
    m = _as_rearrangement(m)
    rep = _hardy_sup(m, lambda t: 1.0 / np.asarray(fundamental_function(f, t)), settings)
    if cross_check:
        other = equivalent_banach_norm(m, f, settings)
        if abs(rep.value - other.value) > 1e-9 * max(1.0, abs(other.value)):
            raise ContractViolation(f"Marcinkiewicz {rep.value} != equivalent norm {other.value}")
        rep = NormReport(rep.value, rep.attained_at, rep.method, {"equivalent_banach_norm": other.value})
    return rep


def weak_lp_norm(m, p: float, settings: Settings = DEFAULT, tol: float = 1e-9) -> NormReport:
    """Classical weak-``L_p`` quasi-norm ``sup_t t^(1/p) mu_t``.

    For steps it is also computed as ``sup_s s lambda_s^(1/p)`` and the two
    forms must agree to ``tol`` (relative).
    """
    if not p > 1:
        raise DomainError("weak_lp_norm needs p > 1")
    m = _as_rearrangement(m)
    if isinstance(m, DecreasingStepFunction):
        if m.is_zero:
            return _ZERO
        T = m.breakpoints
        mu_vals = T ** (1.0 / p) * m.values
        k = int(np.argmax(mu_vals))
        mu_form = float(mu_vals[k])
        # lambda is constant on [v_{k+1}, v_k); its sup there is approached at v_k
        nxt = np.append(m.values[1:], 0.0)
        lam = np.asarray(m.distribution(nxt))
        lam_form = float(np.max(m.values * lam ** (1.0 / p)))
        if abs(mu_form - lam_form) > tol * max(1.0, mu_form):
            raise ContractViolation(f"weak L_p forms disagree: {mu_form} vs {lam_form}")
        return NormReport(mu_form, float(T[k]), "closed-form", {"mu_form": mu_form, "lambda_form": lam_form})

    def h(t):
        return t ** (1.0 / p) * np.asarray(m(t))

    val, t = _sup_over_segments(h, _segments_for(m), settings)
    return NormReport(val, t, "segment-search", {"mu_form": val})


def lorentz_norm(m, f: NFunction, settings: Settings = DEFAULT) -> NormReport:
    """``int mu d fund`` as the Stieltjes sum ``sum v_k (fund(T_k) - fund(T_{k-1}))``."""
    m = _as_rearrangement(m)
    if not isinstance(m, DecreasingStepFunction):
        raise DomainError("lorentz_norm needs a finitely supported step function")
    if m.is_zero:
        return _ZERO
    F = np.concatenate([[0.0], np.asarray(fundamental_function(f, m.breakpoints))])
    return NormReport(float(np.sum(m.values * np.diff(F))), None, "closed-form")


def step_pairing(a: DecreasingStepFunction, b: DecreasingStepFunction) -> float:
    """``int_0^inf a(t) b(t) dt`` for two step functions."""
    if a.is_zero or b.is_zero:
        return 0.0
    T = np.union1d(a.breakpoints, b.breakpoints)
    left = np.concatenate([[0.0], T[:-1]])
    mid = 0.5 * (left + T)
    return float(np.sum((T - left) * a(mid, snap_rtol=0.0) * b(mid, snap_rtol=0.0)))


# ---------------------------------------------------------------------------
# singular seminorms


def _power_limit(coef: float, exponent: float, tol: float = 1e-12) -> float:
    if exponent > tol:
        return 0.0
    if exponent < -tol:
        return math.inf
    return coef


def _sampled_limit(h, ts: np.ndarray) -> float:
    vals = np.asarray(h(ts), dtype=float)
    if not np.all(np.isfinite(vals)):
        return math.inf
    tail = vals[-5:]
    if tail[-1] > tail[0] * 1.01 and np.all(np.diff(tail) > 0):
        return math.inf
    return float(tail[-1])


def seminorm_N0(m, f: NFunction) -> float:
    """``limsup_{t->0} (1/fund(t)) int_0^t mu``.

    Zero for step functions.  For a decay the first piece ``c t^-beta``
    gives ``int_0^t = c t^(1-beta)/(1-beta)``; with the power family
    ``fund(t) = (t/q)^(1/q)`` and the limit is read off the exponent.
    Other families use the ratio sampled at ``t = b 2^-k``.
    """
    m = _as_rearrangement(m)
    if isinstance(m, DecreasingStepFunction):
        return 0.0
    a, b, c, beta = m.pieces[0]
    if beta >= 1:
        raise DivergenceError("decay is not integrable at 0")
    if isinstance(f, Power):
        q = f.q
        return _power_limit(c * q ** (1.0 / q) / (1.0 - beta), 1.0 - beta - 1.0 / q)
    edge = b if math.isfinite(b) else 1.0
    ts = edge * 2.0 ** -np.arange(40, 81, dtype=float)
    return _sampled_limit(lambda t: np.asarray(m.hardy(t)) / np.asarray(fundamental_function(f, t)), ts)


def seminorm_Ninf(m, f: NFunction) -> float:
    """``limsup_{t->inf} (1/fund(t)) int_0^t mu``; zero for finite support."""
    m = _as_rearrangement(m)
    if isinstance(m, DecreasingStepFunction) or math.isfinite(m.support_end):
        return 0.0
    a, _, c, beta = m.pieces[-1]
    if beta >= 1:
        # int_0^t grows at most logarithmically while fund(t) -> inf
        return 0.0
    if isinstance(f, Power):
        q = f.q
        return _power_limit(c * q ** (1.0 / q) / (1.0 - beta), 1.0 - beta - 1.0 / q)
    edge = a if a > 0 else 1.0
    ts = edge * 2.0 ** np.arange(40, 81, dtype=float)
    return _sampled_limit(lambda t: np.asarray(m.hardy(t)) / np.asarray(fundamental_function(f, t)), ts)
