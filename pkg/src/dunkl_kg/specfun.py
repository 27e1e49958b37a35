"""Special functions: Gamma, Bessel J of real order, the normalized Bessel
function and the truncated kernel ``S_+^lambda(x) = x^lambda J_lambda(x)``.

Bessel values come from :func:`scipy.special.jv` (AMOS/Cephes), wrapped with
the domain checks this package relies on.  All functions accept scalars or
array-likes and return a ``float`` for scalar input.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import special

from .tolerances import MAX_ORDER

__all__ = ["gamma_fn", "bessel_j", "normalized_bessel", "s_plus", "s_plus_at_zero"]


def _check_order(nu: float) -> float:
    nu = float(nu)
    if not math.isfinite(nu):
        raise ValueError(f"Bessel order must be finite, got {nu}")
    if abs(nu) > MAX_ORDER:
        raise ValueError(f"|order| = {abs(nu)} outside validity window {MAX_ORDER}")
    return nu


def _out(values: np.ndarray, scalar: bool):
    return float(values) if scalar else values


def gamma_fn(x: float) -> float:
    """Euler Gamma function for ``x > 0``."""
    x = float(x)
    if not x > 0:
        raise ValueError(f"gamma_fn is defined here for x > 0 only, got {x}")
    return math.gamma(x)


def bessel_j(nu: float, x):
    """Bessel function of the first kind ``J_nu(x)`` for real ``nu`` and ``x >= 0``.

    Raises
    ------
    ValueError
        For ``x < 0``, NaN arguments or an order outside ``|nu| <= 200``.
    OverflowError
        If the value cannot be represented (e.g. ``J_{-nu}`` at ``x = 0``).
    """
    nu = _check_order(nu)
    xa = np.asarray(x, dtype=float)
    if np.isnan(xa).any():
        raise ValueError("NaN argument to bessel_j")
    if (xa < 0).any():
        raise ValueError("bessel_j requires x >= 0")
    with np.errstate(all="ignore"):
        vals = special.jv(nu, xa)
    if not np.isfinite(vals).all():
        raise OverflowError(f"J_{nu} not representable at some x (x=0 with nu<0?)")
    return _out(vals, xa.ndim == 0)


def normalized_bessel(alpha: float, x):
    """``2^a Gamma(a+1) J_a(x) / x^a``, continuously extended by 1 at ``x = 0``.

    Small arguments use the hypergeometric series ``0F1(; a+1; -x^2/4)`` so
    that ``x^a`` never underflows.
    """
    alpha = _check_order(alpha)
    if not alpha > -1:
        raise ValueError(f"normalized Bessel needs alpha > -1, got {alpha}")
    xa = np.asarray(x, dtype=float)
    if np.isnan(xa).any():
        raise ValueError("NaN argument to normalized_bessel")
    if (xa < 0).any():
        raise ValueError("normalized_bessel requires x >= 0")
    out = np.empty_like(xa)
    small = xa < 1e-3
    z = -0.25 * xa[small] ** 2
    # four terms reach ~1e-24 relative at x = 1e-3
    out[small] = 1 + z / (alpha + 1) * (
        1 + z / (2 * (alpha + 2)) * (1 + z / (3 * (alpha + 3)))
    )
    xb = xa[~small]
    scale = 2.0**alpha * math.gamma(alpha + 1)
    out[~small] = scale * special.jv(alpha, xb) / xb**alpha
    return _out(out, xa.ndim == 0)


def s_plus(lam: float, x):
    """Truncated kernel: ``x^lam J_lam(x)`` for ``x > 0`` and exactly 0 for ``x <= 0``."""
    lam = _check_order(lam)
    xa = np.asarray(x, dtype=float)
    if np.isnan(xa).any():
        raise ValueError("NaN argument to s_plus")
    out = np.zeros_like(xa)
    pos = xa > 0
    xp = xa[pos]
    with np.errstate(all="ignore"):
        out[pos] = xp**lam * special.jv(lam, xp)
    if not np.isfinite(out).all():
        raise OverflowError(f"S_+^{lam} overflowed")
    return _out(out, xa.ndim == 0)


def s_plus_at_zero(lam: float) -> float:
    """Right limit ``S_+^lam(0+)``.

    Finite only for ``lam > 0`` (limit 0) and for non-positive integers
    ``lam = -N`` where ``z^{-N} J_{-N}(z) -> (-1)^N / (2^N N!)``.
    """
    lam = _check_order(lam)
    if lam > 0:
        return 0.0
    if lam == 0:
        return 1.0
    if float(lam).is_integer():
        n = int(-lam)
        return (-1) ** n / (2.0**n * math.factorial(n))
    return math.inf
