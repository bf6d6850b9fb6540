"""N-functions (Young functions) and their scalar calculus.

An N-function ``Phi`` is stored through its nondecreasing left derivative
``phi``; ``Phi(t) = int_0^t phi``.  Four concrete representations exist:

* :class:`Power` -- ``t**p / p``, ``p > 1``
* :class:`PowerLog` -- ``t**p * log(1 + t)``, ``p >= 1``
* :class:`ExpType` -- ``exp(t) - t - 1``
* :class:`Tabulated` -- derivative samples on a grid, linear in between,
  power-law tails outside

plus :class:`Conjugate`, the complementary function of any of the above,
built from the generalized left inverse ``psi`` of ``phi``.

All evaluation methods accept scalars or arrays and return the same kind.
"""

from __future__ import annotations

import abc
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Callable, Iterable

import numpy as np

from ._roots import convex_inverse, threshold_crossing
from .config import DEFAULT, Settings
from .errors import DomainError, UnsupportedFamilyError

__all__ = [
    "NFunction",
    "Power",
    "PowerLog",
    "ExpType",
    "Tabulated",
    "Conjugate",
    "eval_Phi",
    "eval_Phi_inv",
    "complement",
    "inverse_product_ratio",
    "indices",
    "grid_indices",
    "delta2_constant",
    "nabla2_check",
    "Nabla2Result",
    "fundamental_function",
    "dilation_function",
    "dilation_indices",
    "DilationIndices",
    "index_inclusion_check",
    "IndexInclusion",
    "from_json",
]


def _as_nonneg(x, name: str) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise DomainError(f"{name} must be nonnegative, got {x!r}")
    return arr, arr.ndim == 0


def _ret(arr: np.ndarray, scalar: bool):
    return float(arr) if scalar else arr


class NFunction(abc.ABC):
    """Abstract N-function.

    Subclasses implement ``_Phi`` and ``_phi`` on strictly positive float
    arrays.  ``_Phi_inv`` defaults to Newton from above (monotone because
    ``Phi`` is convex) and ``_psi`` to bisection; both are overridden where a
    closed form exists.
    """

    family: str = ""

    @abc.abstractmethod
    def _Phi(self, t: np.ndarray) -> np.ndarray: ...

    @abc.abstractmethod
    def _phi(self, t: np.ndarray) -> np.ndarray: ...

    def _Phi_inv(self, y: np.ndarray) -> np.ndarray:
        return convex_inverse(self._Phi, self._phi, y)

    def _psi(self, s: np.ndarray) -> np.ndarray:
        return threshold_crossing(self._phi, s)

    def _elasticity(self, t: np.ndarray) -> np.ndarray:
        return t * self._phi(t) / self._Phi(t)

    # public evaluation -------------------------------------------------

    def Phi(self, t):
        """``Phi(t)`` for ``t >= 0``."""
        arr, scalar = _as_nonneg(t, "t")
        out = np.zeros_like(arr)
        pos = arr > 0
        if pos.any():
            with np.errstate(over="ignore"):
                out[pos] = self._Phi(arr[pos])
        return _ret(out, scalar)

    def phi(self, t):
        """Left derivative ``phi(t)``; ``phi(0) = 0``."""
        arr, scalar = _as_nonneg(t, "t")
        out = np.zeros_like(arr)
        pos = arr > 0
        if pos.any():
            with np.errstate(over="ignore"):
                out[pos] = self._phi(arr[pos])
        return _ret(out, scalar)

    def Phi_inv(self, y):
        """Inverse of ``Phi`` on ``[0, inf)``."""
        arr, scalar = _as_nonneg(y, "y")
        out = np.zeros_like(arr)
        pos = arr > 0
        if pos.any():
            with np.errstate(over="ignore"):
                out[pos] = self._Phi_inv(arr[pos])
        return _ret(out, scalar)

    def psi(self, s):
        """Generalized left inverse ``inf{t > 0 : phi(t) > s}``."""
        arr, scalar = _as_nonneg(s, "s")
        out = np.zeros_like(arr)
        pos = arr > 0
        if pos.any():
            with np.errstate(over="ignore"):
                out[pos] = self._psi(arr[pos])
        return _ret(out, scalar)

    def elasticity(self, t):
        """``t * phi(t) / Phi(t)`` for ``t > 0``."""
        arr = np.asarray(t, dtype=float)
        if np.any(~(arr > 0)):
            raise DomainError("elasticity needs t > 0")
        with np.errstate(over="ignore", invalid="ignore"):
            out = self._elasticity(arr)
        return _ret(out, arr.ndim == 0)

    __call__ = Phi

    # structure ------------------------------------------------------------

    @cached_property
    def conjugate(self) -> "NFunction":
        return self._make_complement()

    def _make_complement(self) -> "NFunction":
        return Conjugate(self)

    def exact_indices(self) -> tuple[float, float] | None:
        """Closed-form ``(a_Phi, b_Phi)`` when known, else ``None``."""
        return None

    @property
    def is_parametric(self) -> bool:
        return False

    @abc.abstractmethod
    def to_json(self) -> dict[str, Any]: ...


@dataclass(frozen=True)
class Power(NFunction):
    """``Phi(t) = t**p / p`` with ``p > 1``."""

    p: float
    family = "power"

    def __post_init__(self):
        if not (self.p > 1 and math.isfinite(self.p)):
            raise DomainError(f"power family needs finite p > 1, got {self.p}")

    @property
    def q(self) -> float:
        return self.p / (self.p - 1.0)

    def _Phi(self, t):
        return t**self.p / self.p

    def _phi(self, t):
        return t ** (self.p - 1.0)

    def _Phi_inv(self, y):
        return (self.p * y) ** (1.0 / self.p)

    def _psi(self, s):
        return s ** (1.0 / (self.p - 1.0))

    def _elasticity(self, t):
        return np.full_like(t, self.p)

    def _make_complement(self):
        return Power(self.q)

    def exact_indices(self):
        return (self.p, self.p)

    @property
    def is_parametric(self):
        return True

    def to_json(self):
        return {"family": "power", "p": self.p}


@dataclass(frozen=True)
class PowerLog(NFunction):
    """``Phi(t) = t**p * log(1 + t)`` with ``p >= 1``.

    ``t phi / Phi = p + t / ((1 + t) log(1 + t))`` decreases from ``p + 1``
    at 0 to ``p`` at infinity, so the indices are ``(p, p + 1)``.
    """

    p: float
    family = "power-log"

    def __post_init__(self):
        if not (self.p >= 1 and math.isfinite(self.p)):
            raise DomainError(f"power-log family needs finite p >= 1, got {self.p}")

    def _Phi(self, t):
        return t**self.p * np.log1p(t)

    def _phi(self, t):
        with np.errstate(invalid="ignore", over="ignore"):
            out = self.p * t ** (self.p - 1.0) * np.log1p(t) + t**self.p / (1.0 + t)
        return np.where(np.isinf(t), np.inf, out)

    def _elasticity(self, t):
        return self.p + t / ((1.0 + t) * np.log1p(t))

    def exact_indices(self):
        return (self.p, self.p + 1.0)

    @property
    def is_parametric(self):
        return True

    def to_json(self):
        return {"family": "power-log", "p": self.p}


@dataclass(frozen=True)
class ExpType(NFunction):
    """``Phi(t) = exp(t) - t - 1``; indices ``(2, inf)``, not in Delta2."""

    family = "exp-type"

    def _Phi(self, t):
        small = t < 1e-3
        out = np.empty_like(t)
        ts = t[small]
        # Taylor series avoids the cancellation in expm1(t) - t
        out[small] = ts * ts * (0.5 + ts * (1 / 6 + ts * (1 / 24 + ts * (1 / 120 + ts / 720))))
        tl = t[~small]
        with np.errstate(over="ignore", invalid="ignore"):
            e = np.expm1(tl)
        out[~small] = np.where(np.isinf(e), np.inf, e - tl)
        return out

    def _phi(self, t):
        return np.expm1(t)

    def _psi(self, s):
        return np.log1p(s)

    def _elasticity(self, t):
        out = np.empty_like(t)
        small = t < 1.0
        ts = t[small]
        out[small] = ts * np.expm1(ts) / self._Phi(ts)
        tl = t[~small]
        out[~small] = tl / (1.0 - tl / np.expm1(tl))
        return out

    def exact_indices(self):
        return (2.0, math.inf)

    @property
    def is_parametric(self):
        return True

    def to_json(self):
        return {"family": "exp-type"}


@dataclass(frozen=True)
class Tabulated(NFunction):
    """N-function from samples of its derivative.

    ``phi`` is linear between the grid points (so ``Phi`` is the exact
    trapezoid integral), ``phi(t) = phi_0 (t/t_0)**a`` below the grid and
    ``phi(t) = phi_N (t/t_N)**b`` above it, where ``(a, b)`` are the
    ``tail_exponents`` of the derivative.
    """

    grid: tuple[float, ...]
    values: tuple[float, ...]
    tail_exponents: tuple[float, float]
    family = "tabulated"

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "grid", tuple(g.tolist()))
        object.__setattr__(self, "values", tuple(v.tolist()))
        object.__setattr__(self, "tail_exponents", tuple(float(e) for e in self.tail_exponents))
        if g.ndim != 1 or g.size < 2 or g.shape != v.shape:
            raise DomainError("grid and values must be 1-D of equal length >= 2")
        if not (g[0] > 0 and np.all(np.diff(g) > 0)):
            raise DomainError("grid must be strictly increasing and positive")
        if not (np.all(v > 0) and np.all(np.diff(v) >= 0)):
            raise DomainError("derivative samples must be positive and nondecreasing")
        a, b = self.tail_exponents
        if not (a > 0 and b > 0):
            raise DomainError("tail exponents must be positive")

    @cached_property
    def _arrays(self):
        g = np.asarray(self.grid)
        v = np.asarray(self.values)
        a, _ = self.tail_exponents
        nodes = np.empty_like(g)
        nodes[0] = v[0] * g[0] / (a + 1.0)
        nodes[1:] = nodes[0] + np.cumsum(0.5 * (v[1:] + v[:-1]) * np.diff(g))
        return g, v, nodes

    def _phi(self, t):
        g, v, _ = self._arrays
        a, b = self.tail_exponents
        out = np.interp(t, g, v)
        lo = t < g[0]
        out[lo] = v[0] * (t[lo] / g[0]) ** a
        hi = t > g[-1]
        out[hi] = v[-1] * (t[hi] / g[-1]) ** b
        return out

    def _Phi(self, t):
        g, v, nodes = self._arrays
        a, b = self.tail_exponents
        i = np.clip(np.searchsorted(g, t, side="right") - 1, 0, g.size - 2)
        dt = t - g[i]
        slope = (v[i + 1] - v[i]) / (g[i + 1] - g[i])
        out = nodes[i] + v[i] * dt + 0.5 * slope * dt * dt
        lo = t < g[0]
        out[lo] = nodes[0] * (t[lo] / g[0]) ** (a + 1.0)
        hi = t > g[-1]
        out[hi] = nodes[-1] + v[-1] * g[-1] / (b + 1.0) * ((t[hi] / g[-1]) ** (b + 1.0) - 1.0)
        return out

    def _psi(self, s):
        g, v, _ = self._arrays
        a, b = self.tail_exponents
        out = np.empty_like(s)
        lo = s < v[0]
        out[lo] = g[0] * (s[lo] / v[0]) ** (1.0 / a)
        hi = s >= v[-1]
        out[hi] = g[-1] * (s[hi] / v[-1]) ** (1.0 / b)
        mid = ~(lo | hi)
        sm = s[mid]
        # last node with phi_i <= s: phi_{i+1} > s strictly, so flat runs
        # resolve to their right end (inf convention)
        i = np.searchsorted(v, sm, side="right") - 1
        out[mid] = g[i] + (sm - v[i]) / (v[i + 1] - v[i]) * (g[i + 1] - g[i])
        return out

    def to_json(self):
        return {
            "family": "tabulated",
            "grid": list(self.grid),
            "phi": list(self.values),
            "tail_exponents": list(self.tail_exponents),
        }


@dataclass(frozen=True)
class Conjugate(NFunction):
    """Complementary N-function of ``base``.

    Its derivative is ``base.psi``; the value uses Young's equality
    ``Psi(s) = s psi(s) - Phi(psi(s))``, exact for continuous ``phi``.
    """

    base: NFunction
    family = "complement"

    def _phi(self, s):
        return self.base._psi(s)

    def _Phi(self, s):
        t = self.base._psi(s)
        with np.errstate(invalid="ignore", over="ignore"):
            out = s * t - self.base._Phi(t)
        # inf - inf: both terms overflowed, report the value as inf
        return np.where(np.isinf(t) | np.isnan(out), np.inf, np.maximum(out, 0.0))

    def _Phi_inv(self, y):
        # Psi(phi(t)) = t phi(t) - Phi(t) =: g(t), increasing in t; where phi
        # jumps at t*, Psi is linear with slope t* over the gap
        base = self.base
        t = threshold_crossing(lambda u: u * base._phi(u) - base._Phi(u), y)
        with np.errstate(divide="ignore", invalid="ignore"):
            s = (y + base._Phi(t)) / t
        return np.where(y > 0, s, 0.0)

    def to_json(self):
        return {"family": "complement", "of": self.base.to_json()}


# ---------------------------------------------------------------------------
# checked operations


def eval_Phi(f: NFunction, t):
    """``Phi(t)``; raises :class:`DomainError` for negative ``t``."""
    return f.Phi(t)


def eval_Phi_inv(f: NFunction, y):
    """``Phi^{-1}(y)``; raises :class:`DomainError` for negative ``y``."""
    return f.Phi_inv(y)


def complement(f: NFunction) -> NFunction:
    """Complementary N-function (power ``p`` maps to power ``p/(p-1)``)."""
    return f.conjugate


def inverse_product_ratio(f: NFunction, t, tol: float = 1e-9):
    """``Phi^{-1}(t) Psi^{-1}(t) / t``, which lies in ``[1, 2]``.

    Raises :class:`ContractViolation` if the ratio leaves ``[1 - tol, 2 + tol]``.
    """
    from .errors import ContractViolation

    arr = np.asarray(t, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("inverse_product_ratio needs t > 0")
    r = f.Phi_inv(arr) * f.conjugate.Phi_inv(arr) / arr
    if np.any(r < 1 - tol) or np.any(r > 2 + tol):
        raise ContractViolation(f"inverse product ratio outside [1, 2]: {r!r}")
    return _ret(np.asarray(r), arr.ndim == 0)


def _index_grid(settings: Settings) -> np.ndarray:
    return np.geomspace(settings.index_grid_lo, settings.index_grid_hi, settings.index_grid_points)


def grid_indices(f: NFunction, settings: Settings = DEFAULT) -> tuple[float, float]:
    """Inf and sup of ``t phi(t) / Phi(t)`` over the configured log grid.

    The sup is reported as ``inf`` when it exceeds ``settings.index_cap``.
    """
    e = np.asarray(f.elasticity(_index_grid(settings)))
    e = np.where(np.isfinite(e), e, np.inf)
    a = float(np.min(e))
    b = float(np.max(e))
    if b > settings.index_cap:
        b = math.inf
    return a, b


def indices(f: NFunction, settings: Settings = DEFAULT) -> tuple[float, float]:
    """Growth indices ``(a_Phi, b_Phi)``: exact when known, else on the grid."""
    exact = f.exact_indices()
    return exact if exact is not None else grid_indices(f, settings)


def delta2_constant(f: NFunction, settings: Settings = DEFAULT) -> float:
    """``sup_t Phi(2t) / Phi(t)`` on the log grid, ``inf`` above the cap."""
    t = _index_grid(settings)
    den = np.asarray(f.Phi(t))
    num = np.asarray(f.Phi(2 * t))
    ok = np.isfinite(den) & (den > 0)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(np.isfinite(num[ok]), num[ok] / den[ok], np.inf)
    k = float(np.max(ratio))
    return math.inf if k > settings.delta2_cap else k


@dataclass(frozen=True)
class Nabla2Result:
    holds: bool
    c: float | None


def nabla2_check(f: NFunction, settings: Settings = DEFAULT, rtol: float = 1e-12) -> Nabla2Result:
    """Search ``c in (1, c_max]`` with ``Phi(t) <= Phi(ct) / (2c)`` on the grid.

    Candidate ``c`` are the powers of the grid ratio, so ``ct`` lands back on
    an (extended) grid point and ``Phi`` is evaluated once.
    """
    t = _index_grid(settings)
    r = t[1] / t[0]
    jmax = int(math.floor(math.log(settings.nabla2_c_max) / math.log(r) + 1e-9))
    ext = t[0] * r ** np.arange(t.size + jmax)
    vals = np.asarray(f.Phi(ext))
    base = vals[: t.size]
    ok = np.isfinite(base) & (base > 0)
    for j in range(1, jmax + 1):
        c = r**j
        shifted = vals[j : j + t.size]
        with np.errstate(invalid="ignore"):
            ratio = shifted[ok] / (2 * c * base[ok])
        ratio = np.where(np.isnan(ratio), np.inf, ratio)
        if np.all(ratio >= 1 - rtol):
            return Nabla2Result(True, float(c))
    return Nabla2Result(False, None)


def fundamental_function(f: NFunction, t):
    """``1 / Psi^{-1}(1/t)`` with ``Psi`` the complement of ``f``."""
    arr = np.asarray(t, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("fundamental_function needs t > 0")
    with np.errstate(divide="ignore"):
        out = 1.0 / np.asarray(f.conjugate.Phi_inv(1.0 / arr))
    return _ret(out, arr.ndim == 0)


def dilation_function(
    func: Callable[[np.ndarray], np.ndarray], t, s_grid: np.ndarray
) -> np.ndarray:
    """``M(t) = sup_s func(t s) / func(s)`` with the sup over ``s_grid``."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    den = np.asarray(func(s_grid))
    num = np.asarray(func(np.outer(t, s_grid)))
    return np.max(num / den, axis=1)


@dataclass(frozen=True)
class DilationIndices:
    p_phi: float
    q_phi: float
    residual_low: float
    residual_high: float
    flagged: bool


def dilation_indices(f: NFunction, settings: Settings = DEFAULT, scale: float = 1.0) -> DilationIndices:
    """Dilation indices of the fundamental function of ``f``.

    ``log M(t)`` is fit linearly against ``log t`` at ``t = 2^-k`` (for
    ``p_phi``) and ``t = 2^k`` (for ``q_phi``).  ``flagged`` is set when the
    max fit residual exceeds ``settings.dilation_residual_max``.  ``scale``
    multiplies the fundamental function and must not change the result.
    """
    s_grid = np.geomspace(settings.dilation_s_lo, settings.dilation_s_hi, settings.dilation_s_points)
    ks = np.arange(settings.dilation_k_min, settings.dilation_k_max + 1, dtype=float)

    def func(x):
        return scale * np.asarray(fundamental_function(f, x))

    out = []
    for t in (2.0**-ks, 2.0**ks):
        logm = np.log(dilation_function(func, t, s_grid))
        logt = np.log(t)
        slope, icpt = np.polyfit(logt, logm, 1)
        resid = float(np.max(np.abs(logm - (slope * logt + icpt))))
        out.append((float(slope), resid))
    (p_phi, r_lo), (q_phi, r_hi) = out
    flagged = max(r_lo, r_hi) > settings.dilation_residual_max
    return DilationIndices(p_phi, q_phi, r_lo, r_hi, flagged)


@dataclass(frozen=True)
class IndexInclusion:
    p_phi: float
    q_phi: float
    psi_interval: tuple[float, float]
    holds_psi: bool
    phi_interval: tuple[float, float]
    holds_phi: bool
    warnings: tuple[dict, ...] = field(default=())

    @property
    def holds(self) -> bool:
        return self.holds_psi


def _recip(x: float) -> float:
    return 0.0 if math.isinf(x) else 1.0 / x


def index_inclusion_check(f: NFunction, settings: Settings = DEFAULT, tol: float = 1e-4) -> IndexInclusion:
    """Check ``[p_phi, q_phi]`` against reciprocal growth-index intervals.

    The fundamental function is built from the complement ``Psi``, and its
    dilation indices land in ``[1/b_Psi, 1/a_Psi]``; that is the pass
    criterion.  The same check against ``[1/b_Phi, 1/a_Phi]`` is always
    reported next to it in a warning record, since the two readings differ
    for every power family except ``p = 2``.
    """
    d = dilation_indices(f, settings)
    a_f, b_f = indices(f, settings)
    a_c, b_c = indices(f.conjugate, settings)
    psi_iv = (_recip(b_c), _recip(a_c))
    phi_iv = (_recip(b_f), _recip(a_f))

    def inside(iv):
        return iv[0] - tol <= d.p_phi and d.q_phi <= iv[1] + tol

    holds_psi, holds_phi = inside(psi_iv), inside(phi_iv)
    warnings = [
        {
            "kind": "index-interval-ambiguity",
            "message": (
                "dilation indices checked against the complement's reciprocal index "
                "interval; the interval built from the function's own indices "
                + ("also contains them" if holds_phi else "does NOT contain them")
            ),
            "psi_interval": list(psi_iv),
            "phi_interval": list(phi_iv),
            "holds_psi": holds_psi,
            "holds_phi": holds_phi,
        }
    ]
    if d.flagged:
        warnings.append(
            {
                "kind": "dilation-fit-residual",
                "message": "log M(t) is not linear in log t on the fit window",
                "residual": max(d.residual_low, d.residual_high),
            }
        )
    return IndexInclusion(d.p_phi, d.q_phi, psi_iv, holds_psi, phi_iv, holds_phi, tuple(warnings))


def from_json(obj: dict[str, Any]) -> NFunction:
    """Build an N-function from its JSON description."""
    if not isinstance(obj, dict) or "family" not in obj:
        raise DomainError("N-function config must be an object with a 'family' key")
    fam = str(obj["family"]).lower().replace("_", "-")
    if fam == "power":
        return Power(float(obj["p"]))
    if fam in ("power-log", "powerlog"):
        return PowerLog(float(obj["p"]))
    if fam in ("exp-type", "exp"):
        return ExpType()
    if fam == "tabulated":
        tails: Iterable[float] = obj["tail_exponents"]
        return Tabulated(tuple(obj["grid"]), tuple(obj["phi"]), tuple(tails))
    if fam == "complement":
        return complement(from_json(obj["of"]))
    raise UnsupportedFamilyError(f"unknown N-function family {obj['family']!r}")
