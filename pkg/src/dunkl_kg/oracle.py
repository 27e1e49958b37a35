"""Independent reference engines.

These are deliberately slower and structurally different from the main code
paths: a Runge-Kutta march instead of closed-form multipliers, adaptive
bisection quadrature instead of a fixed rule, and dense cosine sums on a
uniform grid instead of Gauss-Legendre Hankel sums.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import roots_jacobi

from .measures import RadialProfile, interpolate
from .tolerances import REGULATOR_SCHEDULE

__all__ = [
    "ConvergenceError",
    "ModeState",
    "mode_march",
    "march_modes",
    "refined_quadrature",
    "panel_quadrature",
    "regularized_integral",
    "classical_reference",
    "cosine_transform",
]


class ConvergenceError(RuntimeError):
    """A reference computation failed to meet its requested tolerance."""


@dataclass(frozen=True)
class ModeState:
    s: float
    u: complex
    v: complex


def _rk4_steps(w2, u, v, h, n_steps):
    for _ in range(n_steps):
        k1u, k1v = v, -w2 * u
        k2u, k2v = v + 0.5 * h * k1v, -w2 * (u + 0.5 * h * k1u)
        k3u, k3v = v + 0.5 * h * k2v, -w2 * (u + 0.5 * h * k2u)
        k4u, k4v = v + h * k3v, -w2 * (u + h * k3u)
        u = u + h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u)
        v = v + h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)
    return u, v


def _max_step(s, m):
    return 1e-3 * np.minimum(1.0, 1.0 / np.hypot(s, m))


def mode_march(state0: ModeState, m: float, t: float, dt: float) -> ModeState:
    """Classical RK4 for ``u'' = -(s^2 + m^2) u`` from 0 to ``t``.

    The step actually used is ``t / ceil(|t| / dt)``, never larger than ``dt``.
    """
    if dt <= 0 or dt > _max_step(state0.s, m) * (1 + 1e-12):
        raise ValueError(f"step {dt} rejected: need 0 < dt <= 1e-3 min(1, 1/w)")
    n_steps = math.ceil(abs(t) / dt) if t else 0
    if n_steps == 0:
        return state0
    h = t / n_steps
    u, v = _rk4_steps(state0.s**2 + m**2, complex(state0.u), complex(state0.v), h, n_steps)
    return ModeState(state0.s, u, v)


def march_modes(s, u0, v0, m: float, t, dt_fraction: float = 1.0):
    """Vectorized RK4 over many modes, each with its own end time ``t[i]``.

    All modes take the same number of steps, chosen so every mode respects
    its own step bound scaled by ``dt_fraction`` (at most 1).
    """
    s = np.asarray(s, dtype=float)
    t = np.broadcast_to(np.asarray(t, dtype=float), s.shape)
    limit = _max_step(s, m) * dt_fraction
    n_steps = int(np.max(np.ceil(np.abs(t) / limit)))
    u = np.asarray(u0, dtype=complex) * np.ones_like(s)
    v = np.asarray(v0, dtype=complex) * np.ones_like(s)
    if n_steps == 0:
        return u, v
    return _rk4_steps(s**2 + m**2, u, v, t / n_steps, n_steps)


_GL10 = leggauss(10)
_GL20 = leggauss(20)


def _gl(f, a, b, rule):
    x, w = rule
    half = 0.5 * (b - a)
    return half * np.sum(w * f(0.5 * (a + b) + half * x))


def _adaptive(f, a, b, tol, max_depth):
    total = 0.0
    stack = [(a, b, tol, 0)]
    while stack:
        lo, hi, eps, depth = stack.pop()
        coarse = _gl(f, lo, hi, _GL10)
        fine = _gl(f, lo, hi, _GL20)
        if abs(fine - coarse) <= eps:
            total += fine
        elif depth >= max_depth:
            raise ConvergenceError(f"adaptive quadrature did not converge on [{lo}, {hi}]")
        else:
            mid = 0.5 * (lo + hi)
            # right half pushed first so panels are summed left to right
            stack.append((mid, hi, 0.5 * eps, depth + 1))
            stack.append((lo, mid, 0.5 * eps, depth + 1))
    return total


def refined_quadrature(f, a: float, b: float, tol: float = 1e-12, max_depth: int = 40) -> float:
    """Adaptive bisection quadrature (10- vs 20-point Gauss-Legendre per panel).

    ``f`` must accept numpy arrays.  For ``b = inf`` unit-length panels are
    added until eight consecutive panels each contribute less than ``tol``;
    oscillatory integrands that do not decay should be damped by the caller
    (see :func:`regularized_integral`).
    """
    if math.isinf(b):
        total, quiet, lo = 0.0, 0, a
        for _ in range(100000):
            part = _adaptive(f, lo, lo + 1.0, tol, max_depth)
            total += part
            quiet = quiet + 1 if abs(part) < tol else 0
            if quiet >= 8:
                return total
            lo += 1.0
        raise ConvergenceError("integrand did not decay on [a, inf)")
    return _adaptive(f, a, b, tol, max_depth)


def panel_quadrature(f, a: float, b: float, panel: float, order: int = 40, exponent: float = 0.0) -> float:
    """Composite Gauss-Legendre with panels of width at most ``panel``.

    With ``exponent != 0`` (and ``a = 0``) the integrand is taken to behave
    like ``s^exponent`` at the origin and the first panel uses Gauss-Jacobi
    nodes for that weight.
    """
    n = max(1, math.ceil((b - a) / panel))
    edges = np.linspace(a, b, n + 1)
    x, w = leggauss(order)
    total = 0.0
    if exponent != 0.0:
        if a != 0.0:
            raise ValueError("an origin exponent requires a = 0")
        xj, wj = roots_jacobi(order, 0.0, exponent)
        h = edges[1]
        sj = 0.5 * h * (xj + 1)
        total = float(np.sum(f(sj) / sj**exponent * wj) * (0.5 * h) ** (exponent + 1))
        edges = edges[1:]
        if edges.size < 2:
            return total
    lo, hi = edges[:-1, None], edges[1:, None]
    nodes = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x
    return total + float(np.sum(f(nodes) * (0.5 * (hi - lo) * w)))


def regularized_integral(
    f,
    frequency: float,
    tol: float,
    schedule=REGULATOR_SCHEDULE,
    cutoff: float = 40.0,
    exponent: float = 0.0,
) -> tuple[float, float]:
    """Abel-Gauss summation of ``int_0^inf f(s) ds`` for oscillatory ``f``.

    Each value ``A(eps) = int f(s) exp(-eps s^2) ds`` is integrated up to
    ``sqrt(cutoff / eps)`` with composite Gauss-Legendre panels sized to the
    oscillation ``frequency``; the panel width is halved until two refinements
    agree to ``tol / 10``.  The values are extrapolated to ``eps = 0`` by a
    Neville table, i.e. assuming an expansion in powers of ``eps``.  The
    schedule needs at least three values in ratio 2.

    ``exponent`` is passed to :func:`panel_quadrature` for integrands with
    an ``s^exponent`` endpoint singularity.

    Returns ``(value, spread)`` where ``spread`` is the change caused by
    dropping the smallest regulator (a pessimistic error indicator).
    """
    eps = tuple(float(e) for e in schedule)
    if len(eps) < 3 or not np.allclose(np.array(eps[:-1]) / np.array(eps[1:]), 2.0):
        raise ValueError("regulator schedule must be at least three values with ratio 2")
    values = []
    panel0 = min(1.0, 2 * math.pi / max(frequency, 1e-8))
    for e in eps:
        upper = math.sqrt(cutoff / e)

        def damped(s, e=e):
            return f(s) * np.exp(-e * s * s)

        panel = panel0
        prev = panel_quadrature(damped, 0.0, upper, panel, exponent=exponent)
        for _ in range(6):
            panel *= 0.5
            cur = panel_quadrature(damped, 0.0, upper, panel, exponent=exponent)
            if abs(cur - prev) <= 0.1 * tol:
                break
            prev = cur
        else:
            raise ConvergenceError("panel refinement did not settle")
        values.append(cur)
    full = _neville_at_zero(eps, values)
    short = _neville_at_zero(eps[:-1], values[:-1])
    return full, abs(full - short)


def _neville_at_zero(x, y) -> float:
    # value at 0 of the polynomial through (x_i, y_i)
    table = list(y)
    for k in range(1, len(x)):
        for i in range(len(x) - 1, k - 1, -1):
            table[i] = (x[i - k] * table[i] - x[i] * table[i - 1]) / (x[i - k] - x[i])
    return table[-1]


def cosine_transform(values, x, h: float, s) -> np.ndarray:
    """``sqrt(2/pi) sum_j h v_j cos(s x_j)``: midpoint cosine transform, dense sums."""
    phase = np.cos(np.multiply.outer(np.asarray(s), np.asarray(x)))
    return math.sqrt(2 / math.pi) * h * (phase @ np.asarray(values))


def classical_reference(
    data,
    t: float,
    h: float = 0.05,
    ds: float = 0.05,
    smax: float = 40.0,
    mass: float | None = None,
) -> RadialProfile:
    """Classical (``gamma = 0``, ``n = 1``) Klein-Gordon solution by cosine sums.

    The profiles are interpolated onto a uniform midpoint grid, cosine
    transformed, multiplied by the propagator symbols and synthesized back at
    the nodes of ``data.grid``.  ``mass`` overrides ``data.m`` (``0`` gives the
    wave equation).
    """
    mu = data.mu
    if mu.gamma != 0 or mu.n != 1:
        raise ValueError("classical_reference requires gamma = 0 and n = 1")
    if t == 0:
        return data.g
    rmax = data.grid.rmax
    x = (np.arange(int(round(rmax / h))) + 0.5) * h
    s = (np.arange(int(round(smax / ds))) + 0.5) * ds
    f_hat = cosine_transform(interpolate(data.f, x), x, h, s)
    g_hat = cosine_transform(interpolate(data.g, x), x, h, s)
    m = data.m if mass is None else float(mass)
    w = np.sqrt(s * s + m * m)
    u_hat = np.sin(t * w) / w * f_hat + np.cos(t * w) * g_hat
    return RadialProfile(data.grid, cosine_transform(u_hat, s, ds, data.grid.nodes))
