"""Vectorized inversion of monotone maps and bounded 1-D maximization."""

from __future__ import annotations

from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import NumericalFailure

_MAX_SCALE_STEPS = 2200
_MAX_BISECT = 400
_MAX_NEWTON = 100


def _bracket(g, yp: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``lo, hi`` with ``g(lo) <= y < g(hi)`` by halving/doubling from 1."""
    lo = np.ones_like(yp)
    hi = np.ones_like(yp)
    above = g(hi) > yp

    # shrink lo until g(lo) <= y where g(1) > y
    idx = np.flatnonzero(above)
    lo[idx] = 0.5
    for _ in range(_MAX_SCALE_STEPS):
        if idx.size == 0:
            break
        bad = g(lo[idx]) > yp[idx]
        idx = idx[bad]
        hi[idx] = lo[idx]
        lo[idx] *= 0.5
    else:
        raise NumericalFailure("could not bracket threshold from below")

    # grow hi until g(hi) > y where g(1) <= y
    idx = np.flatnonzero(~above)
    hi[idx] = 2.0
    for _ in range(_MAX_SCALE_STEPS):
        if idx.size == 0:
            break
        bad = ~(g(hi[idx]) > yp[idx])
        idx = idx[bad]
        lo[idx] = hi[idx]
        hi[idx] *= 2.0
    else:
        raise NumericalFailure("could not bracket threshold from above")
    return lo, hi


def threshold_crossing(g: Callable[[np.ndarray], np.ndarray], y) -> np.ndarray:
    """Return ``inf{t > 0 : g(t) > y}`` elementwise.

    ``g`` must be vectorized, nondecreasing on ``(0, inf)`` with
    ``g(0+) <= y`` and ``g(t) -> inf``.  For continuous strictly increasing
    ``g`` this is the ordinary inverse.  Entries with ``y <= 0`` map to 0.

    The bracket is found by doubling/halving from 1, then bisected until the
    endpoints are adjacent floats (or within 4 ulp).
    """
    y = np.asarray(y, dtype=float)
    shape = y.shape
    y = y.ravel()
    out = np.zeros_like(y)
    pos = y > 0
    if not pos.any():
        return out.reshape(shape)
    yp = y[pos]
    lo, hi = _bracket(g, yp)
    for _ in range(_MAX_BISECT):
        mid = lo + 0.5 * (hi - lo)
        active = (mid > lo) & (mid < hi) & (hi - lo > 4 * np.finfo(float).eps * hi)
        if not active.any():
            break
        ia = np.flatnonzero(active)
        up = g(mid[ia]) > yp[ia]
        hi[ia[up]] = mid[ia[up]]
        lo[ia[~up]] = mid[ia[~up]]
    out[pos] = hi
    return out.reshape(shape)


def convex_inverse(g: Callable[[np.ndarray], np.ndarray], dg: Callable[[np.ndarray], np.ndarray], y) -> np.ndarray:
    """Inverse of a convex increasing ``g`` with ``g(0+) = 0``, elementwise.

    Newton's method started at the upper end of the bracket decreases
    monotonically to the root for convex ``g`` (``dg`` may be any
    subgradient, e.g. the left derivative).  Entries that stall fall back to
    bisection.
    """
    y = np.asarray(y, dtype=float)
    shape = y.shape
    y = y.ravel()
    out = np.zeros_like(y)
    pos = y > 0
    if not pos.any():
        return out.reshape(shape)
    yp = y[pos]
    lo, hi = _bracket(g, yp)
    t = hi.copy()
    eps = np.finfo(float).eps
    active = np.ones(t.shape, dtype=bool)
    for _ in range(_MAX_NEWTON):
        ia = np.flatnonzero(active)
        if ia.size == 0:
            break
        ta = t[ia]
        with np.errstate(over="ignore", invalid="ignore"):
            step = (g(ta) - yp[ia]) / dg(ta)
        new = np.clip(ta - step, lo[ia], ta)
        new = np.where(np.isfinite(new), new, ta)
        t[ia] = new
        active[ia] = ~((step <= 4 * eps * ta) | (new >= ta))
    if active.any():
        ia = np.flatnonzero(active)
        t[ia] = threshold_crossing(g, yp[ia])
    out[pos] = t
    return out.reshape(shape)


def refine_max(h: Callable[[float], float], a: float, b: float) -> tuple[float, float]:
    """Maximize scalar ``h`` on ``[a, b]``; returns ``(value, argmax)``.

    Bounded Brent search (golden-section steps with parabolic acceleration).
    The endpoints are always compared, so boundary maxima are exact.
    """
    best_t, best_v = (a, h(a))
    vb = h(b)
    if vb > best_v:
        best_t, best_v = b, vb
    if b > a:
        res = minimize_scalar(
            lambda t: -h(t),
            bounds=(a, b),
            method="bounded",
            options={"xatol": max(1e-14, 1e-12 * abs(b)), "maxiter": 500},
        )
        if -res.fun > best_v:
            best_t, best_v = float(res.x), float(-res.fun)
    return best_v, best_t
