"""Random test objects: matrices, unitaries, densities, step functions."""

from __future__ import annotations

import numpy as np

from .nfunction import ExpType, NFunction, Power, PowerLog, Tabulated
from .spectra import DecreasingStepFunction, TracedMatrix

__all__ = [
    "random_matrix",
    "random_unitary",
    "random_density",
    "random_hardy_element",
    "random_step_function",
    "random_integer_steps",
    "near_linear",
    "tabulated_power",
    "family_battery",
    "parametric_families",
]


def random_matrix(rng: np.random.Generator, n: int, trace_scale: float = 1.0) -> TracedMatrix:
    """Complex Gaussian matrix, entries of unit variance."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    return TracedMatrix(z, trace_scale)


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar unitary via QR with the phase correction."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_density(rng: np.random.Generator, n: int, trace_scale: float = 1.0, spread: float = 4.0) -> TracedMatrix:
    """Positive definite ``U diag(e^g) U^*`` with log-eigenvalues in ``[-spread, spread]/2``."""
    u = random_unitary(rng, n)
    w = np.exp(rng.uniform(-spread / 2, spread / 2, size=n))
    a = (u * w) @ u.conj().T
    return TracedMatrix(0.5 * (a + a.conj().T), trace_scale)


def random_hardy_element(rng: np.random.Generator, mask: np.ndarray, trace_scale: float = 1.0) -> TracedMatrix:
    n = mask.shape[0]
    return TracedMatrix(np.where(mask, random_matrix(rng, n).entries, 0), trace_scale)


def random_step_function(rng: np.random.Generator, max_steps: int = 8) -> DecreasingStepFunction:
    """Exponential values and lengths, at most ``max_steps`` steps."""
    k = int(rng.integers(1, max_steps + 1))
    vals = rng.exponential(size=k) * np.exp(rng.uniform(-2, 2))
    lens = rng.exponential(size=k) + 1e-2
    return DecreasingStepFunction.from_values(vals, lens)


def random_integer_steps(rng: np.random.Generator, n: int, trace_scale: float = 1.0) -> DecreasingStepFunction:
    """Step function realisable as an ``n x n`` diagonal (lengths multiples of ``c``)."""
    k = int(rng.integers(1, n + 1))
    vals = np.sort(rng.exponential(size=k))[::-1]
    return DecreasingStepFunction.from_values(vals, trace_scale)


def tabulated_power(p: float, lo: float = 1e-3, hi: float = 1e3, points: int = 4001) -> Tabulated:
    """Table of ``phi(t) = t^(p-1)`` with matching tails; approximates ``Power(p)``."""
    grid = np.geomspace(lo, hi, points)
    return Tabulated(grid, grid ** (p - 1.0), (p - 1.0, p - 1.0))


def near_linear(eps: float = 0.01, lo: float = 1e-3, hi: float = 1e3, points: int = 401) -> Tabulated:
    """Tabulated ``phi(t) = t^eps``, so ``Phi`` is close to linear."""
    grid = np.geomspace(lo, hi, points)
    return Tabulated(grid, grid**eps, (eps, eps))


def parametric_families() -> dict[str, NFunction]:
    return {
        "power-1.5": Power(1.5),
        "power-2": Power(2.0),
        "power-3": Power(3.0),
        "power-log-1.5": PowerLog(1.5),
        "power-log-2": PowerLog(2.0),
        "exp-type": ExpType(),
    }


def family_battery() -> dict[str, NFunction]:
    """Parametric families, their complements and two tables."""
    out: dict[str, NFunction] = {}
    for name, f in parametric_families().items():
        out[name] = f
        out[f"complement({name})"] = f.conjugate
    out["tabulated-power-2.5"] = tabulated_power(2.5)
    out["tabulated-near-linear"] = near_linear(0.05)
    return dict(sorted(out.items()))
