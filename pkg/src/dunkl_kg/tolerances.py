"""Numerical tolerances and defaults used across the package.

Every tolerance the library and the self-test compare against lives here.
``selftest`` accepts overrides through the ``DUNKL_KG_TOL_OVERRIDE``
environment variable (``name=value,name=value``) so that a corrupted
tolerance can be demonstrated to fail visibly.
"""
from __future__ import annotations

import os

# grid defaults
DEFAULT_RMAX = 40.0
DEFAULT_NODES = 1024
MIN_NODES = 8

# special functions
MAX_ORDER = 200.0
GAMMA_REL = 1e-12
BESSEL_ABS_SMALL_X = 1e-12  # |x| <= 50
BESSEL_ABS_LARGE_X = 1e-10  # |x| <= 1e4
SERIES_ORACLE = 1e-12
RECURSION_FD = 1e-6
HALF_ORDER = 1e-12

# measures / transform
GRID_CONSTANT = 1e-12
ROUND_TRIP = 1e-8
PLANCHEREL = 1e-8
MULTIPLIER_LAW = 1e-7
SPECTRAL_LAPLACIAN = 1e-5

# operators
EIGEN_RELATION = 1e-4

# propagator
RK4_MODES = 1e-8
GROUP_LAW = 1e-9
WAVE_LIMIT_SCALED = 1e-6
DALEMBERT = 1e-5
CLASSICAL_REFERENCE = 1e-7
SLOPE_TARGET = 2.0
SLOPE_WINDOW = 0.1

# kernels
KERNEL_QUADRATURE = 2e-4
REPRESENTATION = 5e-4
REGULATOR_SCHEDULE = (1e-2, 5e-3, 2.5e-3)
# kernel quadrature: extra Richardson level, schedule shrunk by d^2 within
# distance d < 1 of the light cone y = |t|
KERNEL_REGULATOR_LEVELS = 4

# energetics
CONSERVATION = 1e-9
CESARO = 1e-2

TOLERANCE_ENV = "DUNKL_KG_TOL_OVERRIDE"


def overrides() -> dict[str, float]:
    """Parse ``DUNKL_KG_TOL_OVERRIDE`` into ``{NAME: value}``."""
    raw = os.environ.get(TOLERANCE_ENV, "").strip()
    out: dict[str, float] = {}
    if not raw:
        return out
    for item in raw.split(","):
        name, _, value = item.partition("=")
        name = name.strip().upper()
        if not name or not value:
            raise ValueError(f"malformed tolerance override {item!r}")
        if name not in globals():
            raise ValueError(f"unknown tolerance {name!r}")
        out[name] = float(value)
    return out


def get(name: str) -> float:
    """Tolerance ``name`` with any environment override applied."""
    return overrides().get(name.upper(), globals()[name.upper()])
