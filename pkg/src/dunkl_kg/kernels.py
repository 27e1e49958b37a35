"""Physical-space kernels of the Klein-Gordon propagator and the origin formula.

Written in the classical Hankel normalization, the transforms of the
propagator symbols

    G_t(y) = K_a^2 int_0^inf sin(t w)/w  jn_a(ys) s^{2a+1} ds,
    F_t(y) = K_a^2 int_0^inf cos(t w)    jn_a(ys) s^{2a+1} ds,

with ``w = sqrt(s^2 + m^2)``, ``K_a = 1/(2^a Gamma(a+1))`` and ``jn_a`` the
normalized Bessel function, are supported in ``y < |t|``:

    G_t(y) = (sqrt(pi)/Gamma(a+1)) (m/sqrt 2)^{2a+1} S_+^{-a-1/2}(m sqrt(t^2-y^2)),
    F_t(y) = d/dt G_t(y) = (sqrt(pi)/Gamma(a+1)) (m/sqrt 2)^{2a+1} m^2 t S_+^{-a-3/2}(...).

Since the radial inverse transform at the origin is ``K_a int s^{2a+1} (.) ds``,
``u(0, t) = int_0^|t| r^{2a+1} G_t(r) f(r) dr + d/dt (same with g)`` whenever
``G_t`` is locally integrable, i.e. for ``a < 1/2``.  At ``a = 1/2`` the
kernel carries a point mass on the light cone ``r = |t|`` which is added
explicitly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import roots_jacobi

from .measures import MultIndex, RadialProfile, interpolate
from .oracle import ConvergenceError, regularized_integral
from .specfun import bessel_j, normalized_bessel, s_plus, s_plus_at_zero
from .tolerances import KERNEL_QUADRATURE, KERNEL_REGULATOR_LEVELS, REGULATOR_SCHEDULE

__all__ = [
    "KernelParams",
    "kernel_constant",
    "hankel_G_quadrature",
    "hankel_F_quadrature",
    "hankel_G_closed",
    "hankel_F_closed",
    "cone_exponent",
    "kernel_schedule",
    "spherical_mean_origin",
    "integral_representation_origin",
]


@dataclass(frozen=True)
class KernelParams:
    alpha: float
    m: float
    t: float

    def __post_init__(self):
        if not self.alpha > -1:
            raise ValueError(f"alpha must exceed -1, got {self.alpha}")
        if not (math.isfinite(self.m) and self.m > 0):
            raise ValueError(f"m must be positive, got {self.m}")
        if not math.isfinite(self.t):
            raise ValueError("t must be finite")


def kernel_constant(alpha: float, m: float) -> float:
    """``(sqrt(pi)/Gamma(alpha+1)) (m/sqrt 2)^{2 alpha + 1}``."""
    return math.sqrt(math.pi) / math.gamma(alpha + 1) * (m / math.sqrt(2)) ** (2 * alpha + 1)


def _check_y(y):
    ya = np.asarray(y, dtype=float)
    if not (ya > 0).all():
        raise ValueError("kernel radius y must be positive")
    return ya


def kernel_schedule(p: KernelParams, y: float) -> tuple[float, ...]:
    """Regulator schedule for the kernel quadratures at radius ``y``.

    The Gaussian regulator smooths the kernel over a width ``sqrt(eps)`` in
    ``y``, so the Richardson expansion in ``eps`` is governed by
    ``eps / d^2`` with ``d = ||t| - y|`` the distance to the light cone.
    The default schedule is used for ``d >= 1`` and scaled by ``d^2`` below.
    """
    d = abs(abs(p.t) - y)
    if d == 0:
        raise ValueError("kernel quadrature is pointwise and undefined on the light cone y = |t|")
    e0 = REGULATOR_SCHEDULE[0] * min(1.0, d * d)
    return tuple(e0 / 2**k for k in range(KERNEL_REGULATOR_LEVELS))


def _quadrature(p: KernelParams, y: float, kind: str, tol: float) -> float:
    y = float(_check_y(y))
    a, m, t = p.alpha, p.m, p.t
    schedule = kernel_schedule(p, y)
    pref = 1.0 / (2**a * math.gamma(a + 1) * y**a)

    def integrand(s):
        w = np.sqrt(s * s + m * m)
        symbol = np.sin(t * w) / w if kind == "G" else np.cos(t * w)
        return symbol * bessel_j(a, y * s) * s ** (a + 1)

    # s^{2a+1} at the origin; only singular for a < -1/2
    exponent = 2 * a + 1 if a < -0.5 else 0.0
    value, _ = regularized_integral(integrand, abs(t) + y, tol, schedule, exponent=exponent)
    return pref * value


def hankel_G_quadrature(p: KernelParams, y: float, tol: float = 0.1 * KERNEL_QUADRATURE) -> float:
    """Abel-regularized oscillatory quadrature of ``G_t(y)``, ``y != |t|``.

    Raises :class:`ConvergenceError` when panel refinement does not settle.
    """
    if p.t == 0:
        return 0.0
    return _quadrature(p, y, "G", tol)


def hankel_F_quadrature(p: KernelParams, y: float, tol: float = 0.1 * KERNEL_QUADRATURE) -> float:
    """Abel-regularized oscillatory quadrature of ``F_t(y)`` (pointwise, ``y != |t|``)."""
    return _quadrature(p, y, "F", tol)


def _closed(p: KernelParams, y, order_shift: float, factor: float):
    ya = _check_y(y)
    tau = abs(p.t)
    inside = ya < tau
    out = np.zeros_like(ya)
    z = p.m * np.sqrt(tau * tau - ya[inside] ** 2)
    out[inside] = factor * kernel_constant(p.alpha, p.m) * s_plus(-p.alpha - 0.5 - order_shift, z)
    return float(out) if ya.ndim == 0 else out


def hankel_G_closed(p: KernelParams, y):
    """Closed form of ``G_t(y)``; exactly 0 for ``y >= |t|`` and odd in ``t``."""
    return _closed(p, y, 0.0, math.copysign(1.0, p.t) if p.t else 0.0)


def hankel_F_closed(p: KernelParams, y):
    """Closed form of ``F_t(y) = dG_t/dt``; exactly 0 for ``y >= |t|`` and even in ``t``."""
    return _closed(p, y, 1.0, p.m**2 * abs(p.t))


def cone_exponent(alpha: float) -> float:
    """Exponent ``e`` with ``G_t(y) ~ (|t| - y)^e`` as ``y -> |t|-``.

    Zero (bounded kernel) when ``alpha <= -1/2`` or ``alpha + 1/2`` is a
    positive integer; otherwise ``-alpha - 1/2 < 0`` (blow-up).
    """
    lam = -alpha - 0.5
    return 0.0 if math.isfinite(s_plus_at_zero(lam)) else lam


def spherical_mean_origin(mu: MultIndex, f: RadialProfile, r):
    """``M f(0, r)``; the translation at the origin is the identity, so this is ``f(r)``."""
    vals = interpolate(f, np.atleast_1d(r))
    return complex(vals[0]) if np.ndim(r) == 0 else vals


def _phi(lam: float, z):
    # z^{-lam} J_lam(z), entire in z
    return normalized_bessel(lam, z) / (2**lam * math.gamma(lam + 1))


def _jacobi_origin(data, tau: float, n_quad: int) -> tuple[complex, complex]:
    a, m = data.mu.alpha, data.m
    lam = -a - 0.5
    x, wx = roots_jacobi(n_quad, lam, 2 * a + 1)
    sigma = 0.5 * (x + 1)
    w = wx * 2.0 ** (-lam - 2 * a - 2) * (1 + sigma) ** lam
    z = m * tau * np.sqrt((1 - sigma) * (1 + sigma))
    r = tau * sigma
    phi = _phi(lam, z)
    f = spherical_mean_origin(data.mu, data.f, r)
    g = spherical_mean_origin(data.mu, data.g, r)
    dg = interpolate(data.g, r, derivative=True)
    scale = kernel_constant(a, m) * m ** (2 * lam)
    u_f = scale * tau * np.sum(w * phi * f)
    dphi = -(z**2) * _phi(lam + 1, z)
    u_g = scale * np.sum(w * ((phi + dphi) * g + r * phi * dg))
    return u_f, u_g


def _cone_origin(data, tau: float, n_quad: int, argument: str) -> tuple[complex, complex]:
    # alpha = 1/2: distributional kernel with a point mass on r = tau
    m = data.m
    x, wx = leggauss(n_quad)
    r = 0.5 * tau * (x + 1)
    w = 0.5 * tau * wx
    diff = tau * tau - r * r
    z = m * (np.sqrt(diff) if argument == "sqrt" else diff)
    f = spherical_mean_origin(data.mu, data.f, r)
    g = spherical_mean_origin(data.mu, data.g, r)
    c = kernel_constant(0.5, m)
    f_t = spherical_mean_origin(data.mu, data.f, tau)
    g_t = spherical_mean_origin(data.mu, data.g, tau)
    dg_t = complex(interpolate(data.g, [tau], derivative=True)[0])
    u_f = c * np.sum(w * r * r * s_plus(-1.0, z) * f) + tau * f_t
    u_g = (
        c * (tau * tau * s_plus_at_zero(-1.0) * g_t + np.sum(w * r * r * m * m * tau * s_plus(-2.0, z) * g))
        + g_t
        + tau * dg_t
    )
    return u_f, u_g


def integral_representation_origin(
    data,
    t: float,
    argument: str = "sqrt",
    n_quad: int = 256,
    tol: float = 1e-9,
) -> complex:
    """``u(0, t)`` from radial integrals of the data against the physical kernels.

    Supported orders are ``-1 < alpha < 1/2`` (Gauss-Jacobi quadrature after
    ``r = |t| sigma``, which absorbs the endpoint singularities) and
    ``alpha = 1/2`` (Gauss-Legendre plus the light-cone terms).  The
    ``argument="quadratic"`` variant replaces ``m sqrt(t^2 - r^2)`` by
    ``m (t^2 - r^2)`` and exists only to show that it disagrees with the
    spectral solution; it is available for ``alpha = 1/2``.

    Raises
    ------
    ValueError
        Unsupported order or argument, or ``|t| > rmax``.
    ConvergenceError
        If ``n_quad`` and ``n_quad // 2`` nodes disagree by more than ``tol``
        (relative to ``max(1, |u|)``).
    """
    a = data.mu.alpha
    if argument not in ("sqrt", "quadratic"):
        raise ValueError(f"argument must be 'sqrt' or 'quadratic', got {argument!r}")
    cone = math.isclose(a, 0.5, abs_tol=1e-14)
    if not (a < 0.5 or cone):
        raise ValueError(f"origin representation implemented for alpha < 1/2 and alpha = 1/2, got {a}")
    if argument == "quadratic" and not cone:
        raise ValueError("the quadratic argument is only provided for alpha = 1/2")
    tau = abs(float(t))
    if tau > data.grid.rmax:
        raise ValueError(f"|t| = {tau} exceeds rmax = {data.grid.rmax}")
    if tau == 0:
        return spherical_mean_origin(data.mu, data.g, 0.0)

    def evaluate(n):
        if cone:
            return _cone_origin(data, tau, n, argument)
        return _jacobi_origin(data, tau, n)

    u_f, u_g = evaluate(n_quad)
    value = math.copysign(1.0, t) * u_f + u_g
    c_f, c_g = evaluate(n_quad // 2)
    coarse = math.copysign(1.0, t) * c_f + c_g
    if abs(value - coarse) > tol * max(1.0, abs(value)):
        raise ConvergenceError(f"origin representation unresolved: {abs(value - coarse):.3e}")
    return complex(value)
