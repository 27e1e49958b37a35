"""Invariant suite behind ``dunkl-kg selftest``.

Each check returns a :class:`CheckResult` holding the measured error and the
tolerance it was compared with.  Tolerances are looked up by name through
:func:`dunkl_kg.tolerances.get`, so an environment override changes the
verdict without touching the computation.  The suite is deterministic for a
fixed seed: no timings or other run-dependent values are reported.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from . import tolerances
from .energetics import measure_limits, measure_series
from .kernels import (
    KernelParams,
    hankel_F_closed,
    hankel_G_closed,
    hankel_G_quadrature,
    integral_representation_origin,
)
from .measures import RadialProfile, default_grid, make_mult, profile, radial_integral, weighted_norm_sq
from .operators import dunkl_laplacian, make_symmetric_grid
from .oracle import classical_reference, march_modes, refined_quadrature
from .propagator import (
    CauchyData,
    advance_state,
    evolve_state,
    mult_p11,
    mult_p12,
    mult_p21,
    residual_slope,
    solve,
    solve_at,
    solve_dt,
    wave_limit_solve,
)
from .specfun import bessel_j, normalized_bessel, s_plus
from .transform import convolve, dunkl_forward, dunkl_inverse, hankel

__all__ = ["CheckResult", "run_suite", "CHECKS"]


@dataclass(frozen=True)
class CheckResult:
    module: str
    name: str
    value: float
    tolerance: str
    limit: float

    @property
    def passed(self) -> bool:
        return bool(self.value <= self.limit)


def _rel(a, b) -> float:
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))


def _gaussian_data(mu, m=1.0, grid=None):
    grid = grid or default_grid()
    f = profile(grid, lambda r: 0.5 * np.exp(-r * r))
    g = profile(grid, lambda r: np.exp(-0.5 * r * r))
    return CauchyData(f, g, m, mu)


# ---- specfun ------------------------------------------------------------

def check_recursion(rng):
    x = rng.uniform(0.1, 20, 100)
    beta = rng.uniform(-2, 3, 100)
    worst = 0.0
    for xi, bi in zip(x, beta):
        # five-point stencil, step scaled to x to keep truncation error small near 0.1
        h = 1e-3 * min(1.0, xi)
        pts = xi + h * np.array([-2.0, -1.0, 1.0, 2.0])
        f = pts**bi * bessel_j(bi, pts)
        fd = (f[0] - 8 * f[1] + 8 * f[2] - f[3]) / (12 * h)
        exact = xi**bi * bessel_j(bi - 1, xi)
        worst = max(worst, abs(fd - exact) / max(1.0, abs(exact)))
    return worst


def check_half_order(rng):
    x = np.linspace(0.01, 50, 2000)
    plus = np.sqrt(2 / (np.pi * x)) * np.sin(x)
    minus = np.sqrt(2 / (np.pi * x)) * np.cos(x)
    return max(np.max(np.abs(bessel_j(0.5, x) - plus)), np.max(np.abs(bessel_j(-0.5, x) - minus)))


def check_normalized_origin(rng):
    return max(abs(normalized_bessel(a, 0.0) - 1.0) for a in (-0.5, 0.0, 0.5, 1.0, 2.5))


def check_s_plus_support(rng):
    return float(max(abs(s_plus(lam, -1.0)) + abs(s_plus(lam, 0.0)) for lam in (-1.5, -0.5, 0.5, 2.0)))


# ---- measures -----------------------------------------------------------

def check_grid_constants(rng):
    worst = abs(make_mult(1, 0.0).d_k - 2.0)
    grid = default_grid()
    for n, gamma in ((1, 0.0), (1, 1.5), (3, 0.0), (3, 1.0)):
        mu = make_mult(n, gamma)
        total = radial_integral(mu, grid, np.exp(-0.5 * grid.nodes**2))
        worst = max(worst, abs(mu.c_k * total.real - 1.0))
    return worst


# ---- transform ----------------------------------------------------------

_TRANSFORM_CASES = ((1, 0.0), (1, 1.5), (3, 0.0), (3, 1.0))


def _round_trip(power):
    grid = default_grid()
    worst_rt, worst_pl = 0.0, 0.0
    for n, gamma in _TRANSFORM_CASES:
        mu = make_mult(n, gamma)
        f = profile(grid, lambda r: r**power * np.exp(-0.5 * r * r))
        F = dunkl_forward(mu, f)
        back = dunkl_inverse(mu, F)
        worst_rt = max(worst_rt, _rel(back.values, f.values))
        a, b = weighted_norm_sq(mu, f), weighted_norm_sq(mu, F)
        worst_pl = max(worst_pl, abs(a - b) / a)
    return worst_rt, worst_pl


def check_round_trip(rng):
    return _round_trip(0)[0]


def check_plancherel(rng):
    return _round_trip(0)[1]


def check_round_trip_r2(rng):
    return _round_trip(2)[0]


def check_self_reciprocal(rng):
    grid = default_grid()
    worst = 0.0
    for alpha in (-0.5, 0.0, 0.5, 1.0, 1.5):
        f = profile(grid, lambda r: np.exp(-0.5 * r * r))
        worst = max(worst, _rel(hankel(alpha, f).values, f.values))
    return worst


def check_multiplier_law(rng):
    # H(e^{-a r^2/2}) = a^{-alpha-1} e^{-s^2/(2a)}, so the self-convolution of
    # e^{-r^2/2} is 2^{-alpha-1} e^{-r^2/4}
    grid = default_grid()
    worst = 0.0
    for n, gamma in ((1, 0.0), (3, 0.0), (1, 1.5)):
        mu = make_mult(n, gamma)
        f = profile(grid, lambda r: np.exp(-0.5 * r * r))
        expected = 2.0 ** (-mu.alpha - 1) * np.exp(-0.25 * grid.nodes**2)
        worst = max(worst, _rel(convolve(mu, f, f).values, expected))
    return worst


# ---- operators ----------------------------------------------------------

def spectral_laplacian_error(gamma: float, h: float = 0.01, half_width: float = 12.0) -> float:
    """``F_k(Delta_k f)`` by finite differences vs ``-s^2 F_k f`` for a Gaussian."""
    sym = make_symmetric_grid(h, half_width)
    xs = sym.xs
    lap = dunkl_laplacian(gamma, np.exp(-0.5 * xs * xs), sym)
    mu = make_mult(1, gamma)
    half = sym.positive_half()
    out = default_grid()
    lap_hat = dunkl_forward(mu, RadialProfile(half, lap[sym.n_half:]), out_grid=out)
    f_hat = dunkl_forward(mu, profile(out, lambda r: np.exp(-0.5 * r * r)))
    return _rel(lap_hat.values, -out.nodes**2 * f_hat.values)


def check_spectral_laplacian(rng):
    return max(spectral_laplacian_error(g) for g in (0.0, 1.5))


# ---- propagator ---------------------------------------------------------

def rk4_mode_error(rng, n_modes: int = 64, m: float = 1.0) -> float:
    """Sup error of the multiplier solution against RK4 over random modes."""
    s = rng.uniform(0.0, 10.0, n_modes)
    t = rng.uniform(0.0, 5.0, n_modes)
    u0 = rng.normal(size=n_modes) + 1j * rng.normal(size=n_modes)
    v0 = rng.normal(size=n_modes) + 1j * rng.normal(size=n_modes)
    u_rk, v_rk = march_modes(s, u0, v0, m, t)
    u_mx = np.array([mult_p11(si, ti, m) * a + mult_p12(si, ti, m) * b for si, ti, a, b in zip(s, t, u0, v0)])
    v_mx = np.array([mult_p21(si, ti, m) * a + mult_p11(si, ti, m) * b for si, ti, a, b in zip(s, t, u0, v0)])
    return float(max(np.max(np.abs(u_rk - u_mx)), np.max(np.abs(v_rk - v_mx))))


def check_rk4(rng):
    return rk4_mode_error(rng)


def check_initial_data(rng):
    data = _gaussian_data(make_mult(3, 0.0))
    ok = solve(data, 0.0) is data.g and solve_dt(data, 0.0) is data.f
    return 0.0 if ok else 1.0


def check_group_law(rng):
    data = _gaussian_data(make_mult(1, 1.0))
    t, dt = 1.3, 0.9
    a = advance_state(evolve_state(data, t), dt, data.m)
    b = evolve_state(data, t + dt)
    return max(_rel(a.u_hat.values, b.u_hat.values), _rel(a.v_hat.values, b.v_hat.values))


def check_residual_slope(rng):
    data = _gaussian_data(make_mult(3, 0.0))
    return max(abs(residual_slope(data, t, 0.05) - tolerances.SLOPE_TARGET) for t in (0.7, 2.0))


def check_wave_limit(rng):
    grid = default_grid()
    mu = make_mult(3, 0.0)
    f = profile(grid, lambda r: 0.5 * np.exp(-r * r))
    g = profile(grid, lambda r: np.exp(-0.5 * r * r))
    small = CauchyData(f, g, 1e-4, mu)
    return _rel(solve(small, 1.0).values, wave_limit_solve(small, 1.0).values)


def dalembert_error(t: float = 1.0) -> float:
    """Mass-zero, ``gamma = 0, n = 1`` solution against d'Alembert's formula."""
    grid = default_grid()
    mu = make_mult(1, 0.0)
    f = profile(grid, lambda r: np.exp(-r * r))
    g = profile(grid, lambda r: np.exp(-0.5 * r * r))
    data = CauchyData(f, g, 1.0, mu)
    x = grid.nodes
    exact = 0.5 * (np.exp(-0.5 * (x - t) ** 2) + np.exp(-0.5 * (x + t) ** 2))
    exact = exact + 0.25 * math.sqrt(math.pi) * (special.erf(x + t) - special.erf(x - t))
    return _rel(wave_limit_solve(data, t).values, exact)


def check_dalembert(rng):
    return max(dalembert_error(t) for t in (0.5, 1.0, 3.0))


def check_classical(rng):
    data = _gaussian_data(make_mult(1, 0.0))
    return _rel(solve(data, 1.0).values, classical_reference(data, 1.0).values)


# ---- kernels ------------------------------------------------------------

def check_support(rng):
    worst = 0.0
    for alpha in (-0.5, 0.0, 1.0):
        p = KernelParams(alpha, 1.0, 2.0)
        y = np.linspace(2.0, 6.0, 41)
        worst = max(worst, np.max(np.abs(hankel_G_closed(p, y))), np.max(np.abs(hankel_F_closed(p, y))))
    return float(worst)


def check_kernel_quadrature(rng):
    worst = 0.0
    for alpha, y in ((0.5, 1.0), (0.0, 3.0)):
        p = KernelParams(alpha, 1.0, 2.0)
        q, c = hankel_G_quadrature(p, y), hankel_G_closed(p, y)
        worst = max(worst, abs(q - c) / max(1.0, abs(c)))
    return worst


def check_representation(rng):
    worst = 0.0
    for n, gamma in ((3, 0.0), (1, 1.0)):
        data = _gaussian_data(make_mult(n, gamma))
        for t in (0.5, 1.0, 1.5):
            spectral = solve_at(data, t, [0.0])[0]
            rep = integral_representation_origin(data, t)
            worst = max(worst, abs(spectral - rep) / abs(spectral))
    return worst


# ---- energetics ---------------------------------------------------------

def check_conservation(rng):
    worst = 0.0
    for n, gamma in ((1, 0.0), (3, 1.0)):
        series = measure_series(_gaussian_data(make_mult(n, gamma)), 20.0, 200)
        worst = max(worst, float(np.ptp(series.Q) / series.Q[0]))
    return worst


def check_cesaro(rng):
    report, _ = measure_limits(_gaussian_data(make_mult(3, 0.0)), 200.0, 4000)
    return max(report.residuals.values())


def check_strichartz(rng):
    report, _ = measure_limits(_gaussian_data(make_mult(3, 0.0)), 20.0, 200)
    bound = report.strichartz_bound
    return 0.0 if math.isinf(bound) else max(0.0, report.L2_inf - bound)


# ---- oracle -------------------------------------------------------------

def check_mode_oracle(rng):
    u, v = march_modes(np.array([0.0, 3.0]), np.array([1.0, 0.0]), np.array([0.0, 1.0]), 1.0, 1.0)
    w = math.sqrt(10.0)
    return float(max(abs(u[0] - math.cos(1.0)), abs(u[1] - math.sin(w) / w)))


def check_refined_quadrature(rng):
    gauss = refined_quadrature(lambda r: np.exp(-0.5 * r * r), 0.0, math.inf, 1e-13)
    cubic = refined_quadrature(lambda r: r**3, 0.0, 1.0, 1e-13)
    return max(abs(gauss - math.sqrt(math.pi / 2)), abs(cubic - 0.25))


CHECKS = (
    ("specfun", "recursion_fd", "RECURSION_FD", check_recursion),
    ("specfun", "half_order_closed_forms", "HALF_ORDER", check_half_order),
    ("specfun", "normalized_bessel_origin", "HALF_ORDER", check_normalized_origin),
    ("specfun", "s_plus_zero_branch", "HALF_ORDER", check_s_plus_support),
    ("measures", "d_k_and_c_k", "GRID_CONSTANT", check_grid_constants),
    ("transform", "round_trip", "ROUND_TRIP", check_round_trip),
    ("transform", "plancherel", "PLANCHEREL", check_plancherel),
    ("transform", "round_trip_r2", "ROUND_TRIP", check_round_trip_r2),
    ("transform", "gaussian_self_reciprocal", "ROUND_TRIP", check_self_reciprocal),
    ("transform", "multiplier_law", "MULTIPLIER_LAW", check_multiplier_law),
    ("operators", "spectral_laplacian", "SPECTRAL_LAPLACIAN", check_spectral_laplacian),
    ("propagator", "rk4_modes", "RK4_MODES", check_rk4),
    ("propagator", "initial_data_exact", "RK4_MODES", check_initial_data),
    ("propagator", "group_law", "GROUP_LAW", check_group_law),
    ("propagator", "residual_slope", "SLOPE_WINDOW", check_residual_slope),
    ("propagator", "wave_limit", "WAVE_LIMIT_SCALED", check_wave_limit),
    ("propagator", "dalembert", "DALEMBERT", check_dalembert),
    ("oracle", "classical_reference", "CLASSICAL_REFERENCE", check_classical),
    ("oracle", "mode_march_closed_form", "RK4_MODES", check_mode_oracle),
    ("oracle", "refined_quadrature", "HALF_ORDER", check_refined_quadrature),
    ("kernels", "support_exact", "HALF_ORDER", check_support),
    ("kernels", "closed_vs_quadrature", "KERNEL_QUADRATURE", check_kernel_quadrature),
    ("kernels", "origin_representation", "REPRESENTATION", check_representation),
    ("energetics", "conservation", "CONSERVATION", check_conservation),
    ("energetics", "cesaro_limits", "CESARO", check_cesaro),
    ("energetics", "strichartz_bound", "CONSERVATION", check_strichartz),
)


def run_suite(seed: int = 0, only: str | None = None) -> list[CheckResult]:
    """Run every check (or those of module ``only``) with a seeded generator."""
    results = []
    for module, name, tol_name, fn in CHECKS:
        if only and module != only:
            continue
        rng = np.random.default_rng([seed, len(results)])
        value = float(fn(rng))
        results.append(CheckResult(module, name, value, tol_name, tolerances.get(tol_name)))
    return results
