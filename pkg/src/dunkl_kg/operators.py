"""Rank-one Dunkl operator and Dunkl Laplacian as finite-difference grid operators.

    (T f)(x) = f'(x) + k (f(x) - f(-x)) / x

The grid is symmetric and offset by half a step, ``x_j = +-(j - 1/2) h``, so
no node sits on the singular point ``x = 0`` and the reflection ``f(-x)`` is
simply the reversed sample array.  Derivatives use fourth-order central
stencils with fourth-order one-sided stencils in the two outermost nodes at
each end; those boundary bands should be excluded from error norms.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .measures import RadialGrid

__all__ = [
    "SymmetricGrid1D",
    "make_symmetric_grid",
    "derivative",
    "dunkl_T",
    "dunkl_laplacian",
    "weighted_pairing",
]

BOUNDARY_BAND = 2


@dataclass(frozen=True, eq=False)
class SymmetricGrid1D:
    """Nodes ``(j - 1/2) h`` for ``j = -n+1 .. n``, ascending, symmetric about 0."""

    h: float
    n_half: int

    @property
    def xs(self) -> np.ndarray:
        return (np.arange(-self.n_half, self.n_half) + 0.5) * self.h

    @property
    def size(self) -> int:
        return 2 * self.n_half

    def interior(self, band: int = BOUNDARY_BAND) -> np.ndarray:
        """Boolean mask excluding ``band`` nodes at either end."""
        mask = np.ones(self.size, dtype=bool)
        mask[:band] = False
        mask[self.size - band:] = False
        return mask

    def positive_half(self) -> RadialGrid:
        """Positive nodes as a midpoint-rule :class:`RadialGrid` on ``(0, n h)``."""
        xs = self.xs[self.n_half:]
        return RadialGrid(rmax=self.n_half * self.h, nodes=xs, weights=np.full(xs.size, self.h))


def make_symmetric_grid(h: float, half_width: float) -> SymmetricGrid1D:
    if not h > 0:
        raise ValueError("grid step must be positive")
    n_half = int(round(half_width / h))
    if n_half < 4:
        raise ValueError("symmetric grid needs at least 4 nodes per side")
    return SymmetricGrid1D(h=float(h), n_half=n_half)


def derivative(f, h: float) -> np.ndarray:
    """Fourth-order finite-difference first derivative of uniform samples."""
    f = np.asarray(f)
    if f.size < 5:
        raise ValueError("need at least 5 samples")
    d = np.empty_like(f)
    d[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)
    d[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h)
    d[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12 * h)
    d[-1] = (25 * f[-1] - 48 * f[-2] + 36 * f[-3] - 16 * f[-4] + 3 * f[-5]) / (12 * h)
    d[-2] = (3 * f[-1] + 10 * f[-2] - 18 * f[-3] + 6 * f[-4] - f[-5]) / (12 * h)
    return d


def dunkl_T(k: float, f, grid: SymmetricGrid1D) -> np.ndarray:
    """Rank-one Dunkl operator applied to samples ``f`` on ``grid``."""
    if k < 0:
        raise ValueError("multiplicity must be nonnegative")
    f = np.asarray(f)
    if f.shape != (grid.size,):
        raise ValueError("samples do not match the grid")
    out = derivative(f, grid.h)
    if k:
        out = out + k * (f - f[::-1]) / grid.xs
    return out


def dunkl_laplacian(k: float, f, grid: SymmetricGrid1D) -> np.ndarray:
    """``T(T f)``; on even ``f`` this is the Bessel operator ``f'' + (2k/x) f'``."""
    return dunkl_T(k, dunkl_T(k, f, grid), grid)


def weighted_pairing(k: float, f, g, grid: SymmetricGrid1D) -> complex:
    """Midpoint rule for ``int f g |x|^{2k} dx`` over the grid."""
    w = np.abs(grid.xs) ** (2 * k) * grid.h
    return complex(np.sum(np.asarray(f) * np.asarray(g) * w))
