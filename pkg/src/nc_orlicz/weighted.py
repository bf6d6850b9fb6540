"""Weights given by densities and the weighted weak Orlicz quasi-norm.

A faithful weight on the matrix algebra is ``omega(x) = tau(D x)`` for a
positive definite density ``D``.  The weighted quasi-norm of ``x`` is the
weak Orlicz quasi-norm of

    T(x) = Phi^{-1}(D)^alpha  x  Phi^{-1}(D)^(1 - alpha).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from . import linalg
from .config import DEFAULT, Settings
from .errors import DomainError, NumericalFailure
from .nfunction import NFunction
from .norms import NormReport, luxemburg_norm, modular_sup, weak_orlicz_quasinorm
from .spectra import TracedMatrix, singular_value_function, singular_values

__all__ = [
    "Density",
    "weight_of",
    "functional_calculus",
    "t_map",
    "t_map_hadamard",
    "induced_operator",
    "weighted_weak_norm",
    "weighted_luxemburg_norm",
    "weighted_modular",
    "isometry_check",
    "IsometryReport",
]


@dataclass(frozen=True, eq=False)
class Density:
    """Hermitian positive definite density of a faithful weight."""

    matrix: TracedMatrix

    def __post_init__(self):
        if not self.matrix.is_hermitian(atol=1e-10 * max(1.0, float(np.abs(self.matrix.entries).max()))):
            raise DomainError("density must be Hermitian")
        w = np.linalg.eigvalsh(self.matrix.entries)
        if not np.all(w > 0):
            raise DomainError("density must be positive definite (faithful weight)")

    @property
    def n(self) -> int:
        return self.matrix.n

    def eig(self, backend: str | None = None):
        return linalg.eigh(self.matrix.entries, backend)


def _check_shapes(d: Density, x: TracedMatrix):
    d.matrix._check(x)


def weight_of(d: Density, x: TracedMatrix) -> complex:
    """``omega(x) = tau(D x)``."""
    _check_shapes(d, x)
    return (d.matrix @ x).trace()


def functional_calculus(d: Density, g: Callable[[np.ndarray], np.ndarray], backend: str | None = None) -> TracedMatrix:
    """``g(D) = U g(Lambda) U^*``; ``g`` must be defined on the spectrum."""
    w, _ = d.eig(backend)
    gw = np.asarray(g(w))
    if not np.all(np.isfinite(gw)):
        raise NumericalFailure("g is not finite on the spectrum of D")
    return TracedMatrix(linalg.hermitian_function(d.matrix.entries, g, backend), d.matrix.trace_scale)


def _check_alpha(alpha: float):
    if not (0.0 <= alpha <= 1.0):
        raise DomainError(f"alpha must lie in [0, 1], got {alpha}")


def _weight_factors(d: Density, f: NFunction, alpha: float, backend: str | None):
    w, U = d.eig(backend)
    g = np.asarray(f.Phi_inv(w))
    return U, g**alpha, g ** (1.0 - alpha)


def t_map(x: TracedMatrix, d: Density, f: NFunction, alpha: float, backend: str | None = None) -> TracedMatrix:
    """``Phi^{-1}(D)^alpha x Phi^{-1}(D)^(1-alpha)``."""
    _check_shapes(d, x)
    _check_alpha(alpha)
    U, ga, gb = _weight_factors(d, f, alpha, backend)
    left = (U * ga) @ U.conj().T
    right = (U * gb) @ U.conj().T
    return TracedMatrix(left @ x.entries @ right, x.trace_scale)


def t_map_hadamard(x: TracedMatrix, d: Density, f: NFunction, alpha: float, backend: str | None = None) -> TracedMatrix:
    """Same map computed in the eigenbasis of ``D`` as a Hadamard product.

    ``U^* T(x) U = [g_i^alpha g_j^(1-alpha)] * (U^* x U)``; used as an
    independent route in :func:`isometry_check`.
    """
    _check_shapes(d, x)
    _check_alpha(alpha)
    U, ga, gb = _weight_factors(d, f, alpha, backend)
    inner = U.conj().T @ x.entries @ U
    return TracedMatrix(U @ (np.outer(ga, gb) * inner) @ U.conj().T, x.trace_scale)


def induced_operator(d: Density, f: NFunction, alpha: float, backend: str | None = None) -> np.ndarray:
    """Matrix of ``x -> T(x)`` on the ``n^2`` matrix units (row-major vec)."""
    _check_alpha(alpha)
    U, ga, gb = _weight_factors(d, f, alpha, backend)
    A = (U * ga) @ U.conj().T
    B = (U * gb) @ U.conj().T
    # vec_row(A X B) = (A kron B^T) vec_row(X)
    return np.kron(A, B.T)


def weighted_weak_norm(x: TracedMatrix, d: Density, f: NFunction, alpha: float, settings: Settings = DEFAULT) -> NormReport:
    """``||x||_{Phi,inf,alpha,omega} = ||T(x)||_{Phi,inf}``."""
    tx = t_map(x, d, f, alpha)
    rep = weak_orlicz_quasinorm(singular_value_function(tx, settings=settings), f, settings)
    return NormReport(rep.value, rep.attained_at, rep.method, {"factorization": "weak_orlicz_quasinorm(mu(T(x)))"})


def weighted_luxemburg_norm(x: TracedMatrix, d: Density, f: NFunction, alpha: float, settings: Settings = DEFAULT) -> NormReport:
    """``||x||_{Phi,alpha,omega} = ||T(x)||_Phi`` (Luxemburg)."""
    tx = t_map(x, d, f, alpha)
    return luxemburg_norm(singular_value_function(tx, settings=settings), f, settings)


def weighted_modular(x: TracedMatrix, d: Density, f: NFunction, alpha: float, scale: float = 1.0) -> float:
    """``sup_t t Phi(mu_t(T(x)) / scale)``."""
    return modular_sup(singular_value_function(t_map(x, d, f, alpha)), f, scale)


def _lambda_form_norm(x: TracedMatrix, f: NFunction) -> float:
    """``inf{c : lambda_s Phi(s/c) <= 1 for all s}`` from raw singular values.

    ``lambda_s`` jumps only at singular values; just below ``sigma_k`` it
    equals ``c * #{sigma >= sigma_k}``, giving ``c >= sigma_k / Phi^{-1}(1/lambda)``.
    """
    sv = singular_values(x)
    sv = sv[sv > 0]
    if sv.size == 0:
        return 0.0
    lam = x.trace_scale * np.sum(sv[None, :] >= sv[:, None] * (1 - 1e-12), axis=1)
    return float(np.max(sv / np.asarray(f.Phi_inv(1.0 / lam))))


@dataclass(frozen=True)
class IsometryReport:
    passed: bool
    rank: int
    n_squared: int
    max_norm_rel_error: float
    homogeneity_ok: bool
    modular_scaling_ok: bool
    samples: int
    failures: tuple = field(default=())


def isometry_check(
    d: Density,
    f: NFunction,
    alpha: float,
    sample: Iterable[TracedMatrix],
    tol: float = 1e-10,
    etas: Iterable[complex] = (0.5, -0.3j, 0.9 + 0.1j),
) -> IsometryReport:
    """Verify the finite model of the weighted/unweighted isometry.

    (a) the induced map on matrix units has rank ``n^2``;
    (b) ``||x||_{Phi,inf,alpha,omega}`` equals ``||T(x)||_{Phi,inf}`` with
        ``T`` recomputed in the eigenbasis of ``D`` and the norm taken in
        distribution-function form;
    (c) for ``|eta| <= 1``: ``||eta x|| <= |eta| ||x||`` and the modular
        ``sup_t t Phi(mu_t(T(eta x)))`` is at most ``|eta|`` times that of ``x``.
    """
    n = d.n
    rank = int(np.linalg.matrix_rank(induced_operator(d, f, alpha)))
    failures = []
    if rank != n * n:
        failures.append({"check": "rank", "rank": rank})
    worst = 0.0
    hom_ok = mod_ok = True
    count = 0
    etas = tuple(etas)
    for x in sample:
        count += 1
        direct = weighted_weak_norm(x, d, f, alpha).value
        other = _lambda_form_norm(t_map_hadamard(x, d, f, alpha), f)
        err = abs(direct - other) / max(abs(other), 1e-300) if other else abs(direct)
        worst = max(worst, err)
        if err > tol:
            failures.append({"check": "isometry", "direct": direct, "independent": other})
        base_mod = weighted_modular(x, d, f, alpha)
        for eta in etas:
            a = abs(eta)
            scaled = weighted_weak_norm(eta * x, d, f, alpha).value
            if scaled > a * direct * (1 + 1e-9) + 1e-300:
                hom_ok = False
                failures.append({"check": "homogeneity", "eta": str(eta)})
            if weighted_modular(eta * x, d, f, alpha) > a * base_mod * (1 + 1e-9) + 1e-300:
                mod_ok = False
                failures.append({"check": "modular", "eta": str(eta)})
    return IsometryReport(not failures, rank, n * n, worst, hom_ok, mod_ok, count, tuple(failures))
