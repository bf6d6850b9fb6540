"""Block upper-triangular subdiagonal algebras and their Hardy spaces.

For an ordered partition of ``{0..n-1}`` into contiguous blocks, ``A`` is the
algebra of block upper-triangular matrices, ``D`` the block diagonal, ``E``
the compression onto ``D`` and ``A_0 = ker E ∩ A`` the strictly block upper
part.  The Hardy space ``{x : tau(x a) = 0 for a in A_0}`` is ``A`` itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .config import DEFAULT, Settings
from .errors import DomainError, ShapeError
from .nfunction import NFunction
from .norms import lorentz_norm, weak_orlicz_quasinorm
from .sampling import random_unitary
from .spectra import TracedMatrix, singular_value_function

__all__ = [
    "BlockStructure",
    "conditional_expectation",
    "hardy_membership",
    "annihilator_test",
    "structural_test",
    "triangular_projection",
    "riesz_decomposition",
    "decomposition_is_unique",
    "subdiagonal_axioms",
    "trace_compatibility",
    "truncation_growth_probe",
    "dual_pairing_check",
    "PairingReport",
]


@dataclass(frozen=True)
class BlockStructure:
    """Contiguous block sizes, e.g. ``(1, 1, 2)`` for ``n = 4``."""

    sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if not sizes or any(s < 1 for s in sizes):
            raise DomainError("block sizes must be positive integers")
        object.__setattr__(self, "sizes", sizes)

    @classmethod
    def triangular(cls, n: int) -> "BlockStructure":
        return cls((1,) * n)

    @classmethod
    def parse(cls, text: str) -> "BlockStructure":
        try:
            return cls(tuple(int(s) for s in text.split(",")))
        except ValueError as exc:
            raise DomainError(f"bad block specification {text!r}") from exc

    @property
    def n(self) -> int:
        return sum(self.sizes)

    @property
    def labels(self) -> np.ndarray:
        return np.repeat(np.arange(len(self.sizes)), self.sizes)

    @property
    def upper_mask(self) -> np.ndarray:
        """Support of ``A`` (block diagonal and above)."""
        b = self.labels
        return b[:, None] <= b[None, :]

    @property
    def diagonal_mask(self) -> np.ndarray:
        b = self.labels
        return b[:, None] == b[None, :]

    @property
    def strict_upper_mask(self) -> np.ndarray:
        """Support of ``A_0``."""
        b = self.labels
        return b[:, None] < b[None, :]

    @property
    def strict_lower_mask(self) -> np.ndarray:
        b = self.labels
        return b[:, None] > b[None, :]

    def units(self, mask: np.ndarray) -> list[tuple[int, int]]:
        return [tuple(ij) for ij in np.argwhere(mask)]

    def check(self, x: TracedMatrix):
        if x.n != self.n:
            raise ShapeError(f"block structure has n={self.n}, matrix has n={x.n}")


def _unit(n: int, i: int, j: int) -> np.ndarray:
    e = np.zeros((n, n), dtype=complex)
    e[i, j] = 1.0
    return e


def conditional_expectation(b: BlockStructure, x: TracedMatrix) -> TracedMatrix:
    """Compression onto the block diagonal."""
    b.check(x)
    return TracedMatrix(np.where(b.diagonal_mask, x.entries, 0), x.trace_scale)


def annihilator_test(b: BlockStructure, x: TracedMatrix, tol: float = 1e-10) -> bool:
    """``|tau(x a)| < tol`` for every matrix unit ``a`` spanning ``A_0``."""
    b.check(x)
    n = b.n
    for i, j in b.units(b.strict_upper_mask):
        if abs(x.trace_scale * np.trace(x.entries @ _unit(n, i, j))) >= tol:
            return False
    return True


def structural_test(b: BlockStructure, x: TracedMatrix, tol: float = 1e-10) -> bool:
    """Every strictly block-lower entry is below ``tol / c`` in modulus.

    The threshold matches :func:`annihilator_test`, since
    ``tau(x e_ij) = c x_ji``.
    """
    b.check(x)
    lower = np.abs(x.entries[b.strict_lower_mask])
    return bool(np.all(lower * x.trace_scale < tol))


def hardy_membership(b: BlockStructure, f: NFunction | None, x: TracedMatrix, tol: float = 1e-10) -> bool:
    """Membership in ``H_{Phi,inf}(A)``; both tests run and must agree.

    Every matrix has finite weak Orlicz quasi-norm, so ``f`` does not affect
    the answer in the finite model.
    """
    one = annihilator_test(b, x, tol)
    two = structural_test(b, x, tol)
    if one != two:
        raise AssertionError("annihilator and structural membership tests disagree")
    return one


def triangular_projection(b: BlockStructure, x: TracedMatrix) -> TracedMatrix:
    """Keep the block diagonal and everything above it."""
    b.check(x)
    return TracedMatrix(np.where(b.upper_mask, x.entries, 0), x.trace_scale)


def riesz_decomposition(b: BlockStructure, x: TracedMatrix) -> tuple[TracedMatrix, TracedMatrix]:
    """``x = h + z^*`` with ``h = P(x)`` in ``A`` and ``z = (x - P(x))^*`` in ``A_0``."""
    h = triangular_projection(b, x)
    z = (x - h).adjoint()
    return h, z


def decomposition_is_unique(b: BlockStructure) -> bool:
    """``A`` and ``J(A_0)`` together have ``n^2`` independent matrix units.

    The units of ``A`` and of ``J(A_0)`` (adjoints of ``A_0`` units) are
    stacked as vectors; full rank means ``A ∩ J(A_0) = {0}`` and
    ``A + J(A_0) = M_n``, so the splitting is unique.
    """
    n = b.n
    vecs = [_unit(n, i, j).ravel() for i, j in b.units(b.upper_mask)]
    vecs += [_unit(n, i, j).conj().T.ravel() for i, j in b.units(b.strict_upper_mask)]
    rank = np.linalg.matrix_rank(np.array(vecs))
    return rank == n * n == len(vecs)


def subdiagonal_axioms(b: BlockStructure, rng: np.random.Generator | None = None, trials: int = 20) -> dict:
    """Check the three subdiagonal-algebra axioms on the block model.

    (i) ``A + J(A)`` spans ``M_n`` (rank of the stacked units);
    (ii) ``E(xy) = E(x) E(y)`` for random ``x, y`` in ``A``;
    (iii) ``A ∩ J(A) = D`` (common units, confirmed by a dimension count).
    """
    rng = np.random.default_rng(0) if rng is None else rng
    n = b.n
    up = b.units(b.upper_mask)
    a_vecs = [_unit(n, i, j).ravel() for i, j in up]
    ja_vecs = [_unit(n, i, j).conj().T.ravel() for i, j in up]
    rank_sum = int(np.linalg.matrix_rank(np.array(a_vecs + ja_vecs)))
    span_ok = rank_sum == n * n

    mult_err = 0.0
    for _ in range(trials):
        x = TracedMatrix(np.where(b.upper_mask, rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)), 0))
        y = TracedMatrix(np.where(b.upper_mask, rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)), 0))
        lhs = conditional_expectation(b, x @ y).entries
        rhs = (conditional_expectation(b, x) @ conditional_expectation(b, y)).entries
        mult_err = max(mult_err, float(np.max(np.abs(lhs - rhs))))
    mult_ok = mult_err < 1e-12

    a_set = set(up)
    ja_set = {(j, i) for i, j in up}
    common = a_set & ja_set
    d_set = set(b.units(b.diagonal_mask))
    dim_inter = len(a_set) + len(ja_set) - rank_sum
    inter_ok = common == d_set and dim_inter == len(d_set)
    return {
        "span": span_ok,
        "multiplicative": mult_ok,
        "multiplicative_max_error": mult_err,
        "intersection_is_diagonal": inter_ok,
        "passed": span_ok and mult_ok and inter_ok,
    }


def trace_compatibility(b: BlockStructure, x: TracedMatrix, tol: float = 1e-12) -> bool:
    """``tau(P(x) a^*) = tau(x a^*)`` for every unit ``a`` of ``A_0 ∪ D``.

    ``P`` is the orthogonal projection onto ``A`` for the pairing
    ``<x, y> = tau(x y^*)``.
    """
    b.check(x)
    n = b.n
    px = triangular_projection(b, x).entries
    scale = max(1.0, float(np.abs(x.entries).max()))
    for i, j in b.units(b.upper_mask):
        a_star = _unit(n, i, j).conj().T
        lhs = x.trace_scale * np.trace(px @ a_star)
        rhs = x.trace_scale * np.trace(x.entries @ a_star)
        if abs(lhs - rhs) > tol * scale * x.trace_scale:
            return False
    return True


def truncation_growth_probe(
    f: NFunction,
    sizes: Sequence[int],
    rng: np.random.Generator | None = None,
    settings: Settings = DEFAULT,
) -> list[dict]:
    """``max ||P(x)||_{Phi,inf} / ||x||_{Phi,inf}`` over three inputs per size.

    Inputs: the all-ones matrix, a Gaussian matrix and a Haar unitary, with
    the fully triangular structure and trace scale 1.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    rows = []
    for n in sizes:
        if n > 256:
            raise DomainError("sizes are limited to 256")
        b = BlockStructure.triangular(n)
        inputs = {
            "all_ones": np.ones((n, n)),
            "gaussian": rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)),
            "unitary": random_unitary(rng, n),
        }
        ratios = {}
        for name, a in inputs.items():
            x = TracedMatrix(a)
            num = weak_orlicz_quasinorm(singular_value_function(triangular_projection(b, x)), f, settings).value
            den = weak_orlicz_quasinorm(singular_value_function(x), f, settings).value
            ratios[name] = num / den
        worst = max(ratios, key=ratios.get)
        rows.append({"n": int(n), "ratio": ratios[worst], "worst_input": worst, "ratios": ratios})
    return rows


@dataclass(frozen=True)
class PairingReport:
    passed: bool
    max_abs_difference: float
    pairs: int
    h_lorentz_norm: float | None = None
    failures: tuple = field(default=())


def dual_pairing_check(
    b: BlockStructure,
    f: NFunction | None,
    y: TracedMatrix,
    sample: Iterable[TracedMatrix],
    tol: float = 1e-10,
) -> PairingReport:
    """``tau(a y^*) = tau(a h^*)`` for every Hardy ``a``, where ``y = h + z^*``.

    The difference is ``tau(a z)`` with ``a`` block upper and ``z`` strictly
    block upper, so it vanishes.  With ``f`` given, the report carries the
    ``L_{1,Psi}`` (Lorentz) norm of ``h``.
    """
    h, _ = riesz_decomposition(b, y)
    worst = 0.0
    count = 0
    failures = []
    for a in sample:
        if not structural_test(b, a):
            raise DomainError("sample element is not in the Hardy space")
        lhs = (a @ y.adjoint()).trace()
        rhs = (a @ h.adjoint()).trace()
        diff = abs(lhs - rhs)
        worst = max(worst, diff)
        count += 1
        if diff >= tol:
            failures.append({"lhs": [lhs.real, lhs.imag], "rhs": [rhs.real, rhs.imag]})
    hnorm = lorentz_norm(singular_value_function(h), f).value if f is not None else None
    return PairingReport(not failures, worst, count, hnorm, tuple(failures))
