"""Generalized singular numbers on finite models.

A :class:`TracedMatrix` is an ``n x n`` complex matrix with the trace
``tau(x) = c * Tr(x)``.  Its generalized singular-number function
``mu_t(x)`` is the :class:`DecreasingStepFunction` whose values are the
singular values of ``x`` and whose steps have length ``c`` per singular value.
:class:`ParametricDecay` covers infinite-measure decreasing functions made of
power-law pieces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Sequence, Union

import numpy as np

from . import linalg
from .config import DEFAULT, Settings
from .errors import DivergenceError, DomainError, ShapeError, UnsupportedFamilyError
from .nfunction import NFunction, Power

__all__ = [
    "TracedMatrix",
    "DecreasingStepFunction",
    "ParametricDecay",
    "Rearrangement",
    "singular_values",
    "singular_value_function",
    "distribution_function",
    "hardy_transform",
    "hardy_average",
    "extremal_element",
    "sum_inequality_check",
    "diagonal_realization",
]


@dataclass(frozen=True, eq=False)
class TracedMatrix:
    """Complex square matrix with trace scale ``c`` (``tau = c Tr``)."""

    entries: np.ndarray
    trace_scale: float = 1.0

    def __post_init__(self):
        a = np.array(self.entries, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ShapeError(f"entries must be a nonempty square matrix, got shape {a.shape}")
        c = float(self.trace_scale)
        if not (c > 0 and math.isfinite(c)):
            raise DomainError(f"trace_scale must be positive, got {self.trace_scale}")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)
        object.__setattr__(self, "trace_scale", c)

    @classmethod
    def identity(cls, n: int, trace_scale: float = 1.0) -> "TracedMatrix":
        return cls(np.eye(n), trace_scale)

    @classmethod
    def diag(cls, values: Sequence[complex], trace_scale: float = 1.0) -> "TracedMatrix":
        return cls(np.diag(np.asarray(values, dtype=complex)), trace_scale)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def gamma(self) -> float:
        """``tau(1)``."""
        return self.trace_scale * self.n

    def trace(self) -> complex:
        return self.trace_scale * complex(np.trace(self.entries))

    def adjoint(self) -> "TracedMatrix":
        return TracedMatrix(self.entries.conj().T, self.trace_scale)

    @property
    def H(self) -> "TracedMatrix":
        return self.adjoint()

    def is_hermitian(self, atol: float = 1e-12) -> bool:
        a = self.entries
        return bool(np.allclose(a, a.conj().T, atol=atol, rtol=0))

    def _check(self, other: "TracedMatrix"):
        if not isinstance(other, TracedMatrix):
            return NotImplemented
        if other.n != self.n:
            raise ShapeError(f"shape mismatch: {self.n} vs {other.n}")
        if not math.isclose(other.trace_scale, self.trace_scale, rel_tol=1e-12):
            raise ShapeError("trace scales differ")
        return other

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return TracedMatrix(self.entries + other.entries, self.trace_scale)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return TracedMatrix(self.entries - other.entries, self.trace_scale)

    def __matmul__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return TracedMatrix(self.entries @ other.entries, self.trace_scale)

    def __mul__(self, scalar):
        if isinstance(scalar, TracedMatrix):
            return NotImplemented
        return TracedMatrix(complex(scalar) * self.entries, self.trace_scale)

    __rmul__ = __mul__

    def __neg__(self):
        return TracedMatrix(-self.entries, self.trace_scale)

    def __repr__(self):
        return f"TracedMatrix(n={self.n}, trace_scale={self.trace_scale})"

    def to_json(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "trace_scale": self.trace_scale,
            "entries": [[[z.real, z.imag] for z in row] for row in self.entries],
        }


@dataclass(frozen=True, eq=False)
class DecreasingStepFunction:
    """Right-continuous decreasing step function ``sum_k v_k 1_[T_{k-1}, T_k)``.

    ``values`` are strictly decreasing and nonnegative, ``lengths`` positive;
    the function vanishes after ``total_length``.  The empty function is 0.
    """

    values: np.ndarray
    lengths: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float).reshape(-1)
        ln = np.array(self.lengths, dtype=float).reshape(-1)
        if v.shape != ln.shape:
            raise DomainError("values and lengths must have equal length")
        if np.any(~np.isfinite(v)) or np.any(v < 0):
            raise DomainError("step values must be finite and nonnegative")
        if np.any(~(ln > 0)) or np.any(~np.isfinite(ln)):
            raise DomainError("step lengths must be finite and positive")
        if np.any(np.diff(v) >= 0):
            raise DomainError("step values must be strictly decreasing")
        v.setflags(write=False)
        ln.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "lengths", ln)

    @classmethod
    def from_values(cls, values, lengths, merge_rtol: float = DEFAULT.merge_rtol) -> "DecreasingStepFunction":
        """Sort, drop zeros and merge near-equal values (relative to the max)."""
        v = np.asarray(values, dtype=float).reshape(-1)
        ln = np.broadcast_to(np.asarray(lengths, dtype=float), v.shape)
        order = np.argsort(-v, kind="stable")
        v, ln = v[order], ln[order]
        keep = v > 0
        v, ln = v[keep], ln[keep]
        if v.size == 0:
            return cls.zero()
        tol = merge_rtol * v[0]
        out_v, out_l = [v[0]], [ln[0]]
        for vi, li in zip(v[1:], ln[1:]):
            if out_v[-1] - vi <= tol:
                out_l[-1] += li
            else:
                out_v.append(vi)
                out_l.append(li)
        return cls(np.array(out_v), np.array(out_l))

    @classmethod
    def zero(cls) -> "DecreasingStepFunction":
        return cls(np.zeros(0), np.zeros(0))

    @property
    def is_zero(self) -> bool:
        return self.values.size == 0 or bool(np.all(self.values == 0))

    @property
    def breakpoints(self) -> np.ndarray:
        """Right endpoints ``T_k`` of the steps."""
        return np.cumsum(self.lengths)

    @property
    def total_length(self) -> float:
        return float(np.sum(self.lengths))

    def _step_index(self, t: np.ndarray, snap_rtol: float) -> np.ndarray:
        T = self.breakpoints
        return np.searchsorted(T * (1.0 - snap_rtol), t, side="right")

    def __call__(self, t, snap_rtol: float = DEFAULT.snap_rtol):
        """``mu_t``; breakpoints within ``snap_rtol`` count as reached."""
        arr = np.asarray(t, dtype=float)
        if np.any(arr < 0):
            raise DomainError("t must be nonnegative")
        k = self._step_index(arr, snap_rtol)
        padded = np.append(self.values, 0.0)
        out = padded[k]
        return float(out) if arr.ndim == 0 else out

    def distribution(self, s):
        """``lambda_s = |{mu > s}|``."""
        arr = np.asarray(s, dtype=float)
        out = np.sum(np.where(self.values[None, :] > arr.reshape(-1, 1), self.lengths[None, :], 0.0), axis=1)
        return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)

    def hardy(self, t):
        """``int_0^t mu_s ds`` (piecewise linear, exact)."""
        arr = np.asarray(t, dtype=float)
        if np.any(arr < 0):
            raise DomainError("t must be nonnegative")
        T = np.concatenate([[0.0], self.breakpoints])
        acc = np.concatenate([[0.0], np.cumsum(self.values * self.lengths)])
        k = np.clip(np.searchsorted(T, arr, side="right") - 1, 0, T.size - 1)
        padded = np.append(self.values, 0.0)
        out = acc[k] + padded[k] * (arr - T[k])
        return float(out) if arr.ndim == 0 else out

    def integral(self, g) -> float:
        """``int_0^inf g(mu_t) dt`` for ``g`` with ``g(0) = 0``."""
        if self.values.size == 0:
            return 0.0
        return float(np.sum(self.lengths * np.asarray(g(self.values))))

    def scale(self, alpha: float) -> "DecreasingStepFunction":
        if alpha < 0:
            raise DomainError("scale factor must be nonnegative")
        if alpha == 0:
            return DecreasingStepFunction.zero()
        return DecreasingStepFunction(alpha * self.values, self.lengths)

    def to_json(self) -> dict[str, Any]:
        return {"steps": [[float(v), float(ln)] for v, ln in zip(self.values, self.lengths)]}

    def __repr__(self):
        return f"DecreasingStepFunction(steps={list(zip(self.values.tolist(), self.lengths.tolist()))})"


@dataclass(frozen=True)
class ParametricDecay:
    """Piecewise power law ``f(t) = c_i t^(-beta_i)`` on ``[a_i, b_i)``.

    Pieces are contiguous from 0; the last may end at ``inf``.  ``f`` vanishes
    after the last piece.  Each piece is a tuple ``(a, b, c, beta)``.
    """

    pieces: tuple[tuple[float, float, float, float], ...]

    def __post_init__(self):
        pcs = tuple(tuple(float(x) for x in p) for p in self.pieces)
        object.__setattr__(self, "pieces", pcs)
        if not pcs:
            raise DomainError("a decay needs at least one piece")
        if pcs[0][0] != 0.0:
            raise DomainError("the first piece must start at 0")
        prev_end, prev_val = 0.0, math.inf
        for a, b, c, beta in pcs:
            if a != prev_end:
                raise DomainError("pieces must be contiguous")
            if not (b > a) or not (c > 0) or not (beta >= 0):
                raise DomainError(f"invalid piece {(a, b, c, beta)}")
            start_val = c * a ** (-beta) if a > 0 else (math.inf if beta > 0 else c)
            if start_val > prev_val * (1 + 1e-12):
                raise DomainError("decay must be nonincreasing across pieces")
            prev_end = b
            prev_val = c * b ** (-beta) if math.isfinite(b) else 0.0
        if any(math.isinf(p[1]) for p in pcs[:-1]):
            raise DomainError("only the last piece may extend to infinity")

    @property
    def support_end(self) -> float:
        return self.pieces[-1][1]

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        out = np.zeros_like(arr)
        with np.errstate(divide="ignore", over="ignore"):
            for a, b, c, beta in self.pieces:
                m = (arr >= a) & (arr < b)
                out[m] = c * arr[m] ** (-beta)
        return float(out) if arr.ndim == 0 else out

    def hardy(self, t):
        """Closed-form ``int_0^t f``; :class:`DivergenceError` if ``beta >= 1`` at 0."""
        if self.pieces[0][3] >= 1:
            raise DivergenceError("decay is not integrable at 0 (beta >= 1 on the first piece)")
        arr = np.asarray(t, dtype=float)
        out = np.zeros_like(arr)
        for a, b, c, beta in self.pieces:
            hi = np.minimum(arr, b)
            m = hi > a
            if not m.any():
                continue
            if beta == 1.0:
                out[m] += c * np.log(hi[m] / a)
            else:
                e = 1.0 - beta
                lo_term = a**e if a > 0 else 0.0
                out[m] += c * (hi[m] ** e - lo_term) / e
        return float(out) if arr.ndim == 0 else out

    def to_json(self) -> dict[str, Any]:
        return {"pieces": [list(p) for p in self.pieces]}


Rearrangement = Union[DecreasingStepFunction, ParametricDecay]


def singular_values(x: TracedMatrix, backend: str | None = None) -> np.ndarray:
    """Singular values of ``x`` (descending) from the eigenvalues of ``x^* x``."""
    a = x.entries
    w = linalg.eigvalsh(a.conj().T @ a, backend)
    w = np.clip(w, 0.0, None)
    s = np.sqrt(w)[::-1]
    # eigenvalues of x*x below rounding level are zero
    cutoff = x.n * np.finfo(float).eps * (s[0] ** 2 if s.size else 0.0)
    s[w[::-1] <= cutoff] = 0.0
    return s


def singular_value_function(
    x: TracedMatrix, backend: str | None = None, settings: Settings = DEFAULT
) -> DecreasingStepFunction:
    """``mu(x)``: singular values as steps of length ``c``; zeros dropped."""
    s = singular_values(x, backend)
    return DecreasingStepFunction.from_values(s, x.trace_scale, settings.merge_rtol)


def distribution_function(x: TracedMatrix, s, backend: str | None = None):
    """``lambda_s(x) = c * #{singular values > s}``."""
    arr = np.asarray(s, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("s must be positive")
    sv = singular_values(x, backend)
    out = x.trace_scale * np.sum(sv[None, :] > arr.reshape(-1, 1), axis=1)
    return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


def _as_rearrangement(m) -> Rearrangement:
    if isinstance(m, TracedMatrix):
        return singular_value_function(m)
    if isinstance(m, (DecreasingStepFunction, ParametricDecay)):
        return m
    raise TypeError(f"expected a step function, decay or TracedMatrix, got {type(m).__name__}")


def hardy_transform(m, t):
    """``int_0^t m`` for a step function, decay or matrix."""
    arr = np.asarray(t, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("t must be positive")
    return _as_rearrangement(m).hardy(t)


def hardy_average(m, t):
    """``(1/t) int_0^t m``, the Hardy averaging operator."""
    arr = np.asarray(t, dtype=float)
    out = np.asarray(hardy_transform(m, arr)) / arr
    return float(out) if arr.ndim == 0 else out


def extremal_element(f: NFunction, cutoff: float = math.inf) -> ParametricDecay:
    """``t -> Phi^{-1}(1/t)`` on ``(0, cutoff]``; power family only.

    For ``Phi = t^p/p`` this is ``(p/t)^(1/p)``.
    """
    if not isinstance(f, Power):
        raise UnsupportedFamilyError("extremal_element needs the power family")
    if not cutoff > 0:
        raise DomainError("cutoff must be positive")
    p = f.p
    return ParametricDecay(((0.0, float(cutoff), p ** (1.0 / p), 1.0 / p),))


def sum_inequality_check(
    x: TracedMatrix, y: TracedMatrix, t: float, s: float, tol: float = 1e-9, backend: str | None = None
) -> bool:
    """``mu_{t+s}(x+y) <= mu_t(x) + mu_s(y)`` and ``mu_{t+s}(xy) <= mu_t(x) mu_s(y)``."""
    x._check(y)
    mx = singular_value_function(x, backend)
    my = singular_value_function(y, backend)
    msum = singular_value_function(x + y, backend)
    mprod = singular_value_function(x @ y, backend)
    a, b = mx(t), my(s)
    lhs1, rhs1 = msum(t + s), a + b
    lhs2, rhs2 = mprod(t + s), a * b
    ok1 = lhs1 <= rhs1 + tol * max(1.0, rhs1)
    ok2 = lhs2 <= rhs2 + tol * max(1.0, rhs2)
    return bool(ok1 and ok2)


def diagonal_realization(
    m: DecreasingStepFunction, trace_scale: float, n: int | None = None, perm: np.ndarray | None = None
) -> TracedMatrix:
    """Diagonal matrix whose ``mu`` is ``m``; step lengths must be multiples of ``c``.

    ``n`` pads with zeros; ``perm`` reorders the diagonal.
    """
    counts = m.lengths / trace_scale
    ints = np.rint(counts).astype(int)
    if np.any(np.abs(counts - ints) > 1e-9 * np.maximum(1.0, counts)) or np.any(ints < 1):
        raise DomainError("step lengths must be positive integer multiples of the trace scale")
    diag = np.repeat(m.values, ints)
    size = diag.size if n is None else n
    if size < diag.size:
        raise DomainError("n is smaller than the number of diagonal entries")
    d = np.zeros(max(size, 1))
    d[: diag.size] = diag
    if perm is not None:
        d = d[perm]
    return TracedMatrix(np.diag(d), trace_scale)
