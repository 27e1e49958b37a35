"""Multiplicity bookkeeping and the weighted radial measure.

The reflection group is the rank-one ``Z_2`` acting on the first coordinate
of ``R^n`` with multiplicity ``k = gamma``, so the weight is
``w_k(x) = |x_1|^{2 gamma}`` and a radial function ``F(|x|)`` integrates as

    int F(|x|) w_k(x) dx = d_k int_0^inf F(r) r^{2 gamma + n - 1} dr.

Radial samples live on a :class:`RadialGrid`: Gauss-Legendre on ``(0, rmax)``
by default, or Gauss-Jacobi with the factor ``r^{2 alpha + 1}`` built into the
rule when that exponent is not an integer (see :func:`grid_for`).  Sums over nodes run in ascending node order with Kahan
compensation, so results are bit-reproducible for a fixed grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import roots_jacobi

from .tolerances import DEFAULT_NODES, DEFAULT_RMAX, MIN_NODES

__all__ = [
    "MultIndex",
    "RadialGrid",
    "RadialProfile",
    "make_mult",
    "make_grid",
    "grid_for",
    "default_grid",
    "profile",
    "kahan_sum",
    "radial_integral",
    "weighted_norm_sq",
    "weighted_inner",
    "interpolate",
]


@dataclass(frozen=True)
class MultIndex:
    """Dimension ``n`` and Dunkl index ``gamma`` with derived constants.

    ``alpha = gamma + n/2 - 1`` is the Hankel order of the radial transform,
    ``d_k`` the sphere constant ``int_{S^{n-1}} w_k d(sigma)`` and ``c_k`` the
    Mehta-type constant ``(int e^{-|x|^2/2} w_k dx)^{-1}``.
    """

    n: int
    gamma: float
    alpha: float
    d_k: float
    c_k: float

    @property
    def exponent(self) -> float:
        """Exponent ``2 gamma + n - 1 = 2 alpha + 1`` of the radial measure."""
        return 2 * self.alpha + 1


def make_mult(n: int, gamma: float) -> MultIndex:
    if int(n) != n or n < 1:
        raise ValueError(f"dimension n must be a positive integer, got {n}")
    gamma = float(gamma)
    if not math.isfinite(gamma) or gamma < 0:
        raise ValueError(f"multiplicity gamma must be >= 0, got {gamma}")
    n = int(n)
    alpha = gamma + n / 2 - 1
    # int_{S^{n-1}} |x_1|^{2 gamma} d(sigma), unnormalized surface measure
    d_k = 2 * math.pi ** ((n - 1) / 2) * math.gamma(gamma + 0.5) / math.gamma(gamma + n / 2)
    gauss_moment = 2 ** (alpha) * math.gamma(alpha + 1)  # int e^{-r^2/2} r^{2a+1} dr
    c_k = 1.0 / (d_k * gauss_moment)
    return MultIndex(n=n, gamma=gamma, alpha=alpha, d_k=d_k, c_k=c_k)


@dataclass(frozen=True, eq=False)
class RadialGrid:
    """Quadrature rule for ``int_0^rmax``; nodes strictly increasing in ``(0, rmax)``."""

    rmax: float
    nodes: np.ndarray
    weights: np.ndarray
    kind: str = "custom"

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        weights = np.array(self.weights, dtype=float)
        if nodes.ndim != 1 or nodes.shape != weights.shape:
            raise ValueError("nodes and weights must be 1-D arrays of equal length")
        if not (nodes > 0).all() or not (nodes < self.rmax).all():
            raise ValueError("grid nodes must lie in (0, rmax)")
        if not (np.diff(nodes) > 0).all():
            raise ValueError("grid nodes must be strictly increasing")
        if not (weights > 0).all():
            raise ValueError("quadrature weights must be positive")
        nodes.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def key(self) -> tuple:
        """Hashable identity used for kernel caches."""
        if self.kind == "gauss-legendre":
            return (self.kind, self.rmax, len(self))
        if self.kind.startswith("gauss-jacobi"):
            return (self.kind, self.rmax, len(self))
        return (self.kind, self.rmax, self.nodes.tobytes(), self.weights.tobytes())


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """Complex samples of a radial function at the nodes of ``grid``."""

    grid: RadialGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex)
        if vals.shape != self.grid.nodes.shape:
            raise ValueError(
                f"profile has {vals.size} values for a grid of {len(self.grid)} nodes"
            )
        if not np.isfinite(vals).all():
            raise ValueError("profile values must be finite")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.nodes


@lru_cache(maxsize=16)
def _gauss_legendre(rmax: float, n_nodes: int) -> RadialGrid:
    x, w = leggauss(n_nodes)
    half = 0.5 * rmax
    return RadialGrid(rmax=rmax, nodes=half * (x + 1), weights=half * w, kind="gauss-legendre")


@lru_cache(maxsize=16)
def _gauss_jacobi(rmax: float, n_nodes: int, exponent: float) -> RadialGrid:
    # int_0^rmax F r^e dr = (rmax/2)^{e+1} int_{-1}^{1} F (1+x)^e dx; store w / r^e
    x, w = roots_jacobi(n_nodes, 0.0, exponent)
    half = 0.5 * rmax
    nodes = half * (x + 1)
    weights = half ** (exponent + 1) * w / nodes**exponent
    return RadialGrid(rmax=rmax, nodes=nodes, weights=weights, kind=f"gauss-jacobi:{exponent!r}")


def make_grid(rmax: float = DEFAULT_RMAX, n_nodes: int = DEFAULT_NODES, exponent: float = 0.0) -> RadialGrid:
    """Gauss rule on ``(0, rmax)`` exact for ``p(r) r^exponent``, ``deg p <= 2 n_nodes - 1``.

    ``exponent = 0`` gives Gauss-Legendre.  Otherwise the nodes are
    Gauss-Jacobi and the stored weights are divided by ``r^exponent``, so that
    ``sum weights * nodes**exponent * F`` is the Jacobi rule for ``F``.
    """
    rmax = float(rmax)
    if not math.isfinite(rmax) or rmax <= 0:
        raise ValueError(f"rmax must be positive, got {rmax}")
    if int(n_nodes) != n_nodes or n_nodes < MIN_NODES:
        raise ValueError(f"n_nodes must be an integer >= {MIN_NODES}, got {n_nodes}")
    exponent = float(exponent)
    if not exponent > -1:
        raise ValueError(f"weight exponent must exceed -1, got {exponent}")
    if exponent == 0:
        return _gauss_legendre(rmax, int(n_nodes))
    return _gauss_jacobi(rmax, int(n_nodes), exponent)


def grid_for(mu: MultIndex, rmax: float = DEFAULT_RMAX, n_nodes: int = DEFAULT_NODES) -> RadialGrid:
    """Grid suited to ``mu``: Gauss-Legendre when ``2 alpha + 1`` is an integer
    (the weight is then a polynomial), Gauss-Jacobi otherwise."""
    e = mu.exponent
    return make_grid(rmax, n_nodes, 0.0 if float(e).is_integer() else e)


def default_grid() -> RadialGrid:
    return make_grid(DEFAULT_RMAX, DEFAULT_NODES)


def profile(grid: RadialGrid, func) -> RadialProfile:
    """Sample the callable ``func(r)`` on ``grid``."""
    return RadialProfile(grid, func(grid.nodes))


def kahan_sum(terms, axis: int = -1):
    """Compensated sum along ``axis`` in ascending index order.

    Vectorized over the remaining axes; works for real and complex input.
    """
    arr = np.moveaxis(np.asarray(terms), axis, 0)
    total = np.zeros(arr.shape[1:], dtype=arr.dtype)
    comp = np.zeros_like(total)
    for term in arr:
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total if total.ndim else total[()]


def radial_integral(mu: MultIndex, grid: RadialGrid, values) -> complex:
    """``d_k int F(r) r^{2 gamma + n - 1} dr`` by the rule of ``grid``."""
    w = grid.weights * grid.nodes**mu.exponent
    return mu.d_k * kahan_sum(w * np.asarray(values))


def weighted_norm_sq(mu: MultIndex, f) -> float:
    """Squared ``L^2(w_k dx)`` norm of a radial (or spectral) profile."""
    return float(np.real(radial_integral(mu, f.grid, np.abs(f.values) ** 2)))


def weighted_inner(mu: MultIndex, f, g) -> complex:
    """Sesquilinear form ``<f, g>_k = int f conj(g) w_k dx``, linear in ``f``."""
    if f.grid is not g.grid and f.grid.key != g.grid.key:
        raise ValueError("weighted_inner: profiles live on different grids")
    return complex(radial_integral(mu, f.grid, f.values * np.conj(g.values)))


def _is_gauss(grid: RadialGrid) -> bool:
    return grid.kind == "gauss-legendre" or grid.kind.startswith("gauss-jacobi")


@lru_cache(maxsize=16)
def _barycentric_weights(kind: str, n: int) -> np.ndarray:
    # closed form for Gauss(-Jacobi) points: (-1)^j sqrt((1 - x_j^2) w_j)
    if kind == "gauss-legendre":
        x, w = leggauss(n)
    else:
        x, w = roots_jacobi(n, 0.0, float(kind.split(":")[1]))
    return (-1.0) ** np.arange(n) * np.sqrt((1 - x * x) * w)


def interpolate(f: RadialProfile, points, derivative: bool = False) -> np.ndarray:
    """Evaluate the polynomial interpolant of ``f`` (or its derivative) at ``points``.

    Barycentric Lagrange interpolation through the Gauss nodes, spectrally
    accurate for smooth profiles on ``[0, rmax]``.  Only Gauss-Legendre and
    Gauss-Jacobi grids are supported.
    """
    grid = f.grid
    if not _is_gauss(grid):
        raise ValueError("interpolation requires a Gauss-Legendre or Gauss-Jacobi grid")
    pts = np.atleast_1d(np.asarray(points, dtype=float))
    if (pts < 0).any() or (pts > grid.rmax).any():
        raise ValueError(f"interpolation points must lie in [0, {grid.rmax}]")
    bw = _barycentric_weights(grid.kind, len(grid))
    x = grid.nodes
    fv = f.values
    out = np.empty(pts.shape, dtype=complex)
    for i, p in enumerate(pts):
        diff = p - x
        hit = np.flatnonzero(diff == 0)
        if hit.size:
            j = hit[0]
            if not derivative:
                out[i] = fv[j]
                continue
            # derivative at a node: p'(x_j) = sum_k (w_k / w_j)(f_k - f_j)/(x_j - x_k)
            mask = np.arange(len(x)) != j
            out[i] = np.sum(bw[mask] / bw[j] * (fv[mask] - fv[j]) / (x[j] - x[mask]))
            continue
        a = bw / diff
        denom = np.sum(a)
        val = np.sum(a * fv) / denom
        if derivative:
            out[i] = np.sum(a / diff * (val - fv)) / denom
        else:
            out[i] = val
    return out
