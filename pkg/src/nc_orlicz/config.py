"""Pinned numerical constants.

Every grid, cap and tolerance the library uses lives here so that runs are
reproducible and the values are visible in one place.  Functions accept a
``settings`` argument for overrides; the CLI builds one from ``--tol`` flags.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace

__all__ = ["Settings", "DEFAULT"]


@dataclass(frozen=True)
class Settings:
    # growth indices a_Phi, b_Phi and Delta2 constants: log grid over [lo, hi]
    index_grid_lo: float = 1e-6
    index_grid_hi: float = 1e6
    index_grid_points: int = 2401
    index_cap: float = 1e3
    delta2_cap: float = 1e3
    # nabla2 search: c in (1, nabla2_c_max] on a geometric grid
    nabla2_c_max: float = 64.0
    nabla2_c_points: int = 600
    # dilation indices: t = 2^-k and 2^k for k in [dilation_k_min, dilation_k_max]
    dilation_k_min: int = 8
    dilation_k_max: int = 20
    dilation_s_lo: float = 1e-6
    dilation_s_hi: float = 1e6
    dilation_s_points: int = 241
    dilation_residual_max: float = 1e-3
    # sup-type norms: samples per linearity segment before refinement
    segment_samples: int = 256
    # step functions: singular values closer than this (relative to the
    # largest one) are merged into a single step
    merge_rtol: float = 1e-10
    # breakpoint snapping for right-continuous evaluation
    snap_rtol: float = 1e-12
    # Jacobi eigensolver
    jacobi_tol: float = 1e-13
    jacobi_max_sweeps: int = 100
    eig_backend: str = "lapack"
    # Luxemburg bisection
    luxemburg_rtol: float = 1e-13

    def with_overrides(self, overrides: dict[str, float]) -> "Settings":
        known = {f.name: f.type for f in fields(self)}
        clean = {}
        for key, value in overrides.items():
            if key not in known:
                raise KeyError(f"unknown setting {key!r}")
            current = getattr(self, key)
            clean[key] = type(current)(value)
        return replace(self, **clean)


DEFAULT = Settings()
