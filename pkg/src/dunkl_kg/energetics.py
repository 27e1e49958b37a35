"""Energies of the radial Dunkl-Klein-Gordon flow and their large-time limits.

Everything is evaluated on the spectral side, where the flow is a rotation
per mode (see :mod:`dunkl_kg.propagator`).  With ``u_hat, v_hat`` the
transforms of ``u`` and ``du/dt``:

    K = 1/2 ||v_hat||^2,   P = 1/2 ||s u_hat||^2,   L2 = ||u_hat||^2,
    E = K + P,             Q = E + (m^2/2) L2.

``Q`` is conserved mode by mode; ``E`` alone is not.  Averaging
``cos^2(tw) -> 1/2`` gives the limits returned by :func:`predict_limits`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .measures import kahan_sum, weighted_norm_sq
from .propagator import CauchyData, evolve_state, frequency
from .transform import hankel_at, unitary_scale

__all__ = [
    "EnergySeries",
    "LimitReport",
    "kinetic",
    "potential",
    "total",
    "l2_mass",
    "conserved",
    "predict_limits",
    "measure_series",
    "cesaro_average",
    "measure_limits",
]

# Ff(0) counts as nonzero above this fraction of max |Ff|
_ZERO_MODE_FRACTION = 1e-10
_BLOCK = 512


def _spectral_norm_sq(data: CauchyData, values) -> float:
    grid = data.g_hat.grid
    w = grid.weights * grid.nodes**data.mu.exponent
    return float(np.real(data.mu.d_k * kahan_sum(w * np.abs(values) ** 2)))


def kinetic(data: CauchyData, t: float) -> float:
    """``1/2 ||du/dt(., t)||_k^2``."""
    return 0.5 * weighted_norm_sq(data.mu, evolve_state(data, t).v_hat)


def potential(data: CauchyData, t: float) -> float:
    """``1/2 ||s F_k u(., t)||_k^2``, the spectral form of ``1/2 sum_j ||T_j u||_k^2``."""
    u_hat = evolve_state(data, t).u_hat
    return 0.5 * _spectral_norm_sq(data, u_hat.nodes * u_hat.values)


def total(data: CauchyData, t: float) -> float:
    return kinetic(data, t) + potential(data, t)


def l2_mass(data: CauchyData, t: float) -> float:
    """``||u(., t)||_k^2``."""
    return weighted_norm_sq(data.mu, evolve_state(data, t).u_hat)


def conserved(data: CauchyData, t: float) -> float:
    """``E + (m^2/2) ||u||_k^2``, independent of ``t``."""
    return total(data, t) + 0.5 * data.m**2 * l2_mass(data, t)


@dataclass(frozen=True, eq=False)
class EnergySeries:
    times: np.ndarray
    K: np.ndarray
    P: np.ndarray
    E: np.ndarray
    Q: np.ndarray
    L2: np.ndarray

    def __post_init__(self):
        for name in ("times", "K", "P", "E", "Q", "L2"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if not (np.diff(self.times) > 0).all():
            raise ValueError("times must be increasing")

    def remainders(self, report: LimitReport) -> dict[str, np.ndarray]:
        """Oscillatory remainders ``series(t) - predicted limit``."""
        return {
            "K": self.K - report.K_inf,
            "P": self.P - report.P_inf,
            "E": self.E - report.E_inf,
            "L2": self.L2 - report.L2_inf,
        }


@dataclass(frozen=True)
class LimitReport:
    """Predicted limits, optionally with measured Cesaro averages.

    ``residuals[key]`` is ``|avg - limit| / |limit|`` and ``rate_constants``
    the empirical ``C`` in ``residual <= C / T``.
    """

    K_inf: float
    P_inf: float
    E_inf: float
    L2_inf: float
    strichartz_bound: float
    t_max: float | None = None
    measured: dict = field(default_factory=dict)
    residuals: dict = field(default_factory=dict)
    rate_constants: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "K_inf": self.K_inf,
            "P_inf": self.P_inf,
            "E_inf": self.E_inf,
            "L2_inf": self.L2_inf,
            "strichartz_bound": self.strichartz_bound,
        }


def predict_limits(data: CauchyData) -> LimitReport:
    """Large-time limits of ``K, P, E, L2`` and the Strichartz-type bound.

    The bound ``1/2 ||(-Delta_k)^{-1/2} f||^2 + 1/2 ||g||^2`` is ``inf``
    when ``|F_k f|^2 s^{2 alpha - 1}`` is not integrable at ``s = 0``, i.e.
    ``alpha <= 0`` and ``F_k f(0) != 0``.
    """
    m = data.m
    s = data.f_hat.nodes
    fh, gh = data.f_hat.values, data.g_hat.values
    w = frequency(s, m)
    f2 = _spectral_norm_sq(data, fh)
    g2 = _spectral_norm_sq(data, gh)
    sg2 = _spectral_norm_sq(data, s * gh)
    fw2 = _spectral_norm_sq(data, fh / w)
    k_inf = 0.25 * f2 + 0.25 * sg2 + 0.25 * m**2 * g2
    p_inf = 0.25 * f2 + 0.25 * sg2 - 0.25 * m**2 * fw2
    l2_inf = 0.5 * g2 + 0.5 * fw2

    f0 = abs(hankel_at(data.mu.alpha, data.f, [0.0])[0]) * unitary_scale(data.mu)
    scale = max(np.max(np.abs(fh)), f0)
    if data.mu.alpha <= 0 and f0 > _ZERO_MODE_FRACTION * scale:
        bound = math.inf
    else:
        bound = 0.5 * _spectral_norm_sq(data, fh / s) + 0.5 * g2
    return LimitReport(k_inf, p_inf, k_inf + p_inf, l2_inf, bound)


def measure_series(data: CauchyData, t_max: float, n_steps: int) -> EnergySeries:
    """Sample ``K, P, E, Q, L2`` at ``n_steps + 1`` uniform times in ``[0, t_max]``."""
    if not t_max > 0:
        raise ValueError("t_max must be positive")
    if int(n_steps) != n_steps or n_steps < 1:
        raise ValueError("n_steps must be a positive integer")
    times = np.linspace(0.0, t_max, int(n_steps) + 1)
    s = data.g_hat.nodes
    w = frequency(s, data.m)
    fh, gh = data.f_hat.values, data.g_hat.values
    grid = data.g_hat.grid
    meas = data.mu.d_k * grid.weights * s**data.mu.exponent
    K, P, L2 = [], [], []
    for start in range(0, times.size, _BLOCK):
        tb = times[start:start + _BLOCK, None]
        c, sn = np.cos(tb * w), np.sin(tb * w)
        u = sn / w * fh + c * gh
        v = c * fh - w * sn * gh
        au2 = np.abs(u) ** 2
        K.append(0.5 * kahan_sum(meas * np.abs(v) ** 2, axis=1))
        P.append(0.5 * kahan_sum(meas * s * s * au2, axis=1))
        L2.append(kahan_sum(meas * au2, axis=1))
    K, P, L2 = (np.concatenate(x) for x in (K, P, L2))
    E = K + P
    return EnergySeries(times, K, P, E, E + 0.5 * data.m**2 * L2, L2)


def cesaro_average(times, values) -> float:
    """``(1/T) int_0^T values dt`` by the trapezoid rule."""
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    span = times[-1] - times[0]
    if span <= 0:
        raise ValueError("need a positive time span")
    return float(np.sum(0.5 * (values[1:] + values[:-1]) * np.diff(times)) / span)


def measure_limits(data: CauchyData, t_max: float, n_steps: int) -> tuple[LimitReport, EnergySeries]:
    """Predicted limits together with Cesaro averages of the measured series."""
    pred = predict_limits(data)
    series = measure_series(data, t_max, n_steps)
    measured, residuals, rates = {}, {}, {}
    for key, target in (("K", pred.K_inf), ("P", pred.P_inf), ("E", pred.E_inf), ("L2", pred.L2_inf)):
        avg = cesaro_average(series.times, getattr(series, key))
        measured[key] = avg
        residuals[key] = abs(avg - target) / abs(target) if target else abs(avg)
        rates[key] = residuals[key] * t_max
    report = LimitReport(
        pred.K_inf, pred.P_inf, pred.E_inf, pred.L2_inf, pred.strichartz_bound,
        t_max=float(t_max), measured=measured, residuals=residuals, rate_constants=rates,
    )
    return report, series
