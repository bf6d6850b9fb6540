"""Hermitian eigensolvers and spectral functional calculus.

Two interchangeable backends:

``"jacobi"``
    cyclic complex Jacobi, self-contained; converges when the off-diagonal
    Frobenius norm drops below ``tol * ||A||_F``.
``"lapack"``
    :func:`numpy.linalg.eigh`.

Both return eigenvalues in ascending order with orthonormal eigenvectors in
the columns of ``V`` (``A = V diag(w) V^*``).
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .config import DEFAULT
from .errors import NumericalFailure, ShapeError

__all__ = ["jacobi_eigh", "eigh", "eigvalsh", "hermitian_function"]


def _check_square(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {a.shape}")
    return a


def jacobi_eigh(a, tol: float = DEFAULT.jacobi_tol, max_sweeps: int = DEFAULT.jacobi_max_sweeps):
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Each pivot ``(p, q)`` is first made real by a diagonal phase, then
    annihilated by the classical real rotation (smaller-angle choice).

    Raises
    ------
    NumericalFailure
        If ``max_sweeps`` sweeps do not reach the tolerance.
    """
    a = _check_square(a)
    A = np.array(a, dtype=complex)
    A = 0.5 * (A + A.conj().T)
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    scale = np.linalg.norm(A)
    if n == 1 or scale == 0.0:
        return np.real(np.diag(A)).copy(), V
    target = tol * scale
    iu = np.triu_indices(n, 1)
    for _ in range(max_sweeps):
        off = np.sqrt(2.0) * np.linalg.norm(A[iu])
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                r = abs(apq)
                if r <= 1e-300 or r < 1e-18 * scale:
                    continue
                phase = apq / r
                app = A[p, p].real
                aqq = A[q, q].real
                theta = (aqq - app) / (2.0 * r)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # G = D R with D_qq = conj(phase); acts on columns p, q
                g = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                cols = A[:, [p, q]] @ g
                A[:, p], A[:, q] = cols[:, 0], cols[:, 1]
                rows = g.conj().T @ A[[p, q], :]
                A[p, :], A[q, :] = rows[0], rows[1]
                A[p, q] = A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                vc = V[:, [p, q]] @ g
                V[:, p], V[:, q] = vc[:, 0], vc[:, 1]
    else:
        off = np.sqrt(2.0) * np.linalg.norm(A[iu])
        if off > target:
            raise NumericalFailure(f"Jacobi did not converge in {max_sweeps} sweeps (off={off:.3e})")
    w = np.real(np.diag(A))
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def eigh(a, backend: str | None = None):
    """Hermitian eigen-decomposition with the selected backend."""
    a = _check_square(a)
    backend = backend or DEFAULT.eig_backend
    if backend == "jacobi":
        return jacobi_eigh(a)
    if backend == "lapack":
        try:
            return np.linalg.eigh(a)
        except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
            raise NumericalFailure(str(exc)) from exc
    raise ValueError(f"unknown eigensolver backend {backend!r}")


def eigvalsh(a, backend: str | None = None) -> np.ndarray:
    backend = backend or DEFAULT.eig_backend
    if backend == "lapack":
        return np.linalg.eigvalsh(_check_square(a))
    return eigh(a, backend)[0]


def hermitian_function(a, g: Callable[[np.ndarray], np.ndarray], backend: str | None = None) -> np.ndarray:
    """``U g(Lambda) U^*`` for Hermitian ``a = U Lambda U^*``."""
    w, U = eigh(a, backend)
    gw = np.asarray(g(w))
    out = (U * gw) @ U.conj().T
    return 0.5 * (out + out.conj().T)
