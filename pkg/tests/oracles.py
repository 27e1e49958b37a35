"""Test-side reference values, independent of scipy's Bessel code."""
import math

import mpmath
import numpy as np


def rgamma(x):
    """1/Gamma(x), zero at the poles, via reflection for x < 1/2."""
    if x <= 0 and float(x).is_integer():
        return 0.0
    if x < 0.5:
        return math.sin(math.pi * x) * math.gamma(1 - x) / math.pi
    return 1.0 / math.gamma(x)


def bessel_series(nu, x, terms=60):
    """Power series sum_k (-1)^k (x/2)^{2k+nu} / (k! Gamma(k+nu+1))."""
    half = 0.5 * x
    total = 0.0
    for k in range(terms):
        total += (-1) ** k * half ** (2 * k + nu) * rgamma(k + nu + 1) / math.factorial(k)
    return total


def bessel_mp(nu, x, dps=30):
    with mpmath.workdps(dps):
        return float(mpmath.besselj(nu, x))


def gaussian_hankel(alpha, a, s):
    """Self-reciprocal transform of exp(-a r^2 / 2): a^{-alpha-1} exp(-s^2 / (2a))."""
    return a ** (-alpha - 1) * np.exp(-np.asarray(s) ** 2 / (2 * a))


def gaussian_r2_hankel(alpha, s):
    """Self-reciprocal transform of r^2 exp(-r^2/2): (2(alpha+1) - s^2) exp(-s^2/2)."""
    s = np.asarray(s)
    return (2 * (alpha + 1) - s * s) * np.exp(-0.5 * s * s)


def sphere_weight(n, gamma):
    """int over S^{n-1} of |x_1|^{2 gamma}, by mpmath quadrature in the polar angle."""
    if n == 1:
        return 2.0
    area = 2 * math.pi ** ((n - 1) / 2) / math.gamma((n - 1) / 2)  # |S^{n-2}|
    with mpmath.workdps(30):
        val = mpmath.quad(lambda th: abs(mpmath.cos(th)) ** (2 * gamma) * mpmath.sin(th) ** (n - 2), [0, mpmath.pi / 2, mpmath.pi])
    return float(area * val)
