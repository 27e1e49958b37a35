"""Hankel transform and the radial Dunkl transform.

For a radial function the Dunkl transform reduces to the Hankel transform of
order ``alpha = gamma + n/2 - 1``.  This module uses the self-reciprocal
normalization

    (H_alpha f)(r) = int_0^inf f(s) [J_alpha(rs) / (rs)^alpha] s^{2 alpha + 1} ds,

for which ``H_alpha o H_alpha = id`` and Plancherel holds with the same
weight ``d_k r^{2 alpha + 1} dr`` on both sides.  The classical normalization
with the extra factor ``1 / (2^alpha Gamma(alpha + 1))`` is available as
:func:`classical_prefactor` and is what the closed-form kernels in
:mod:`dunkl_kg.kernels` are written against.

The transform is a dense quadrature sum (O(N^2)); each output value is a
Kahan-compensated sum over input nodes in ascending order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .measures import (
    MultIndex,
    RadialGrid,
    RadialProfile,
    grid_for,
    kahan_sum,
    weighted_norm_sq,
)
from .specfun import normalized_bessel

__all__ = [
    "SpectralProfile",
    "classical_prefactor",
    "hankel",
    "hankel_at",
    "unitary_scale",
    "dunkl_forward",
    "dunkl_inverse",
    "dunkl_inverse_at",
    "multiply_spectral",
    "convolve",
    "plancherel_check",
]


@dataclass(frozen=True, eq=False)
class SpectralProfile:
    """Samples of a transformed radial function at spectral nodes ``s``."""

    grid: RadialGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex)
        if vals.shape != self.grid.nodes.shape:
            raise ValueError("spectral values do not match the grid")
        if not np.isfinite(vals).all():
            raise ValueError("spectral values must be finite")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.nodes


def classical_prefactor(alpha: float) -> float:
    """``1 / (2^alpha Gamma(alpha + 1))``, i.e. ``J_alpha(x)/x^alpha`` at ``x = 0``."""
    return 1.0 / (2.0**alpha * math.gamma(alpha + 1))


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not alpha > -1:
        raise ValueError(f"Hankel order must exceed -1, got {alpha}")
    return alpha


def _kernel(alpha: float, out_points: np.ndarray, grid: RadialGrid) -> np.ndarray:
    s = grid.nodes
    k = normalized_bessel(alpha, np.multiply.outer(out_points, s))
    return k * (classical_prefactor(alpha) * grid.weights * s ** (2 * alpha + 1))


_KERNELS: dict[tuple, np.ndarray] = {}
_KERNEL_CACHE_SIZE = 8


def _cacheable(grid: RadialGrid) -> bool:
    return grid.kind == "gauss-legendre" or grid.kind.startswith("gauss-jacobi")


def _matrix(alpha: float, out_grid: RadialGrid, in_grid: RadialGrid) -> np.ndarray:
    if not (_cacheable(out_grid) and _cacheable(in_grid)):
        return _kernel(alpha, out_grid.nodes, in_grid)
    key = (alpha, out_grid.key, in_grid.key)
    mat = _KERNELS.get(key)
    if mat is None:
        if len(_KERNELS) >= _KERNEL_CACHE_SIZE:
            _KERNELS.pop(next(iter(_KERNELS)))
        mat = _KERNELS[key] = _kernel(alpha, out_grid.nodes, in_grid)
        mat.flags.writeable = False
    return mat


def _apply(matrix: np.ndarray, values: np.ndarray) -> np.ndarray:
    return kahan_sum(matrix * values[np.newaxis, :], axis=1)


def hankel(alpha: float, f, out_grid: RadialGrid | None = None) -> SpectralProfile:
    """Self-reciprocal Hankel transform of order ``alpha`` sampled on ``out_grid``.

    ``f`` may be a :class:`RadialProfile` or a :class:`SpectralProfile`; the
    transform is its own inverse so both directions use this routine.
    """
    alpha = _check_alpha(alpha)
    out_grid = f.grid if out_grid is None else out_grid
    mat = _matrix(alpha, out_grid, f.grid)
    return SpectralProfile(out_grid, _apply(mat, f.values))


def hankel_at(alpha: float, f, points) -> np.ndarray:
    """Self-reciprocal Hankel transform of ``f`` evaluated at arbitrary ``points >= 0``."""
    alpha = _check_alpha(alpha)
    pts = np.atleast_1d(np.asarray(points, dtype=float))
    if (pts < 0).any():
        raise ValueError("evaluation points must be nonnegative")
    return _apply(_kernel(alpha, pts, f.grid), f.values)


@lru_cache(maxsize=32)
def _unitary_scale(alpha: float) -> float:
    probe = make_probe_mult(alpha)
    grid = grid_for(probe)
    ref = RadialProfile(grid, np.exp(-0.5 * grid.nodes**2))
    image = hankel(alpha, ref)
    return math.sqrt(weighted_norm_sq(probe, ref) / weighted_norm_sq(probe, image))


def make_probe_mult(alpha: float) -> MultIndex:
    # the scale depends on alpha only; d_k cancels in the ratio
    return MultIndex(n=1, gamma=alpha + 0.5, alpha=alpha, d_k=1.0, c_k=1.0)


def unitary_scale(mu: MultIndex) -> float:
    """Factor making :func:`dunkl_forward` an isometry, fixed by a reference Gaussian.

    With the self-reciprocal normalization this is 1 up to quadrature error;
    it is computed once per order on the default-size grid of
    :func:`~dunkl_kg.measures.grid_for` and then frozen.
    """
    return _unitary_scale(_check_alpha(mu.alpha))


def dunkl_forward(mu: MultIndex, f: RadialProfile, out_grid: RadialGrid | None = None) -> SpectralProfile:
    """Radial Dunkl transform ``F_k f`` in the unitary convention."""
    image = hankel(mu.alpha, f, out_grid)
    return SpectralProfile(image.grid, unitary_scale(mu) * image.values)


def dunkl_inverse(mu: MultIndex, F: SpectralProfile, out_grid: RadialGrid | None = None) -> RadialProfile:
    """Inverse radial Dunkl transform; ``dunkl_inverse(dunkl_forward(f)) = f``."""
    image = hankel(mu.alpha, F, out_grid)
    return RadialProfile(image.grid, image.values / unitary_scale(mu))


def dunkl_inverse_at(mu: MultIndex, F: SpectralProfile, points) -> np.ndarray:
    """Inverse transform evaluated at arbitrary radii, e.g. the origin."""
    return hankel_at(mu.alpha, F, points) / unitary_scale(mu)


def multiply_spectral(F: SpectralProfile, m) -> SpectralProfile:
    """Pointwise product with the multiplier ``m(s)`` (callable or array)."""
    factor = m(F.nodes) if callable(m) else m
    factor = np.broadcast_to(np.asarray(factor, dtype=complex), F.values.shape)
    if not np.isfinite(factor).all():
        raise ValueError("multiplier is not finite on every spectral node")
    return SpectralProfile(F.grid, F.values * factor)


def convolve(mu: MultIndex, f: RadialProfile, g: RadialProfile) -> RadialProfile:
    """Dunkl convolution of radial profiles via the multiplier law."""
    if f.grid is not g.grid and f.grid.key != g.grid.key:
        raise ValueError("convolve: profiles live on different grids")
    Ff = dunkl_forward(mu, f)
    Fg = dunkl_forward(mu, g)
    return dunkl_inverse(mu, SpectralProfile(Ff.grid, Ff.values * Fg.values))


def plancherel_check(mu: MultIndex, f: RadialProfile) -> tuple[float, float]:
    """Weighted norms ``(||f||_k^2, ||F_k f||_k^2)``."""
    return weighted_norm_sq(mu, f), weighted_norm_sq(mu, dunkl_forward(mu, f))
