"""Radial Dunkl-Klein-Gordon equation for the rank-one reflection group.

Hankel-reduced Dunkl transform, spectral propagator, closed-form kernels,
energy bookkeeping and independent reference solvers.
"""
from .measures import MultIndex, RadialGrid, RadialProfile, default_grid, make_grid, make_mult, profile
from .propagator import CauchyData, solve, solve_dt, wave_limit_solve
from .transform import SpectralProfile, dunkl_forward, dunkl_inverse

__version__ = "0.1.0"

__all__ = [
    "MultIndex",
    "RadialGrid",
    "RadialProfile",
    "SpectralProfile",
    "CauchyData",
    "default_grid",
    "make_grid",
    "make_mult",
    "profile",
    "dunkl_forward",
    "dunkl_inverse",
    "solve",
    "solve_dt",
    "wave_limit_solve",
]
