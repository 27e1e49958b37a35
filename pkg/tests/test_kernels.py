import math

import numpy as np
import pytest
from scipy import integrate, special

from conftest import gaussian_data
from dunkl_kg.kernels import (
    KernelParams,
    cone_exponent,
    hankel_F_closed,
    hankel_F_quadrature,
    hankel_G_closed,
    hankel_G_quadrature,
    kernel_schedule,
    integral_representation_origin,
    kernel_constant,
    spherical_mean_origin,
)
from dunkl_kg.measures import grid_for, make_mult, profile
from dunkl_kg.propagator import CauchyData, evolve_state
from dunkl_kg.transform import dunkl_inverse_at


def u_origin(data, t):
    return dunkl_inverse_at(data.mu, evolve_state(data, t).u_hat, [0.0])[0]


def test_params_validation():
    with pytest.raises(ValueError):
        KernelParams(-1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        KernelParams(0.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        hankel_G_closed(KernelParams(0.0, 1.0, 1.0), 0.0)


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 0.5, 1.0, 2.5])
def test_support_is_exact(alpha):
    for t in (1.0, -1.0, 3.0):
        p = KernelParams(alpha, 1.3, t)
        y = abs(t) + np.array([0.0, 1e-12, 0.5, 10.0])
        assert np.all(hankel_G_closed(p, y) == 0.0)
        assert np.all(hankel_F_closed(p, y) == 0.0)


def test_time_symmetry():
    p, q = KernelParams(0.5, 1.0, 2.0), KernelParams(0.5, 1.0, -2.0)
    y = np.array([0.3, 1.0, 1.9])
    np.testing.assert_array_equal(hankel_G_closed(q, y), -hankel_G_closed(p, y))
    np.testing.assert_array_equal(hankel_F_closed(q, y), hankel_F_closed(p, y))
    assert hankel_G_closed(KernelParams(0.5, 1.0, 0.0), 1.0) == 0.0


def test_schedule_shrinks_near_light_cone():
    p = KernelParams(0.5, 1.0, 2.0)
    far, near = kernel_schedule(p, 0.5), kernel_schedule(p, 1.8)
    assert far[0] == 1e-2 and len(far) == 4
    assert near[0] == pytest.approx(1e-2 * 0.04)
    assert all(a == 2 * b for a, b in zip(near, near[1:]))
    with pytest.raises(ValueError):
        hankel_F_quadrature(p, 2.0)


@pytest.mark.parametrize("alpha,y", [(0.0, 1.4), (1.0, 0.6), (1.5, 1.4)])
def test_quadrature_near_light_cone(alpha, y):
    p = KernelParams(alpha, 1.0, 2.0)
    for quad, closed in ((hankel_G_quadrature, hankel_G_closed), (hankel_F_quadrature, hankel_F_closed)):
        c = closed(p, y)
        assert quad(p, y) == pytest.approx(c, abs=2e-4 * max(1, abs(c)))


def test_quadrature_trivial_cases():
    assert hankel_G_quadrature(KernelParams(0.5, 1.0, 0.0), 1.0) == 0.0
    assert abs(hankel_G_quadrature(KernelParams(1.0, 1.0, 1.0), 3.0)) <= 2e-4


@pytest.mark.parametrize("m", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("y", [0.3, 1.0])
def test_classical_three_dimensional_kernel(m, y):
    p = KernelParams(0.5, m, 2.0)
    c = hankel_G_closed(p, y)
    assert hankel_G_quadrature(p, y) == pytest.approx(c, abs=2e-4 * max(1, abs(c)))


@pytest.mark.parametrize("alpha,y", [(0.0, 1.0), (1.0, 0.5), (-0.5, 1.5)])
def test_F_against_cosine_quadrature(alpha, y):
    p = KernelParams(alpha, 1.0, 3.0)
    c = hankel_F_closed(p, y)
    assert hankel_F_quadrature(p, y) == pytest.approx(c, abs=5e-4 * max(1, abs(c)))


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 0.5, 1.5])
def test_F_is_time_derivative_of_G(alpha):
    m, y, t, h = 1.2, 0.8, 2.0, 1e-3
    g = [hankel_G_closed(KernelParams(alpha, m, t + k * h), y) for k in (-2, -1, 1, 2)]
    fd = (g[0] - 8 * g[1] + 8 * g[2] - g[3]) / (12 * h)
    f = hankel_F_closed(KernelParams(alpha, m, t), y)
    assert abs(fd - f) <= 1e-5 * max(1, abs(f))


def test_one_dimensional_kernel_is_cosine_pair():
    # alpha = -1/2: int_0^t G_t(y) cos(sy) dy = sin(t w)/w
    m, t = 1.0, 2.0
    p = KernelParams(-0.5, m, t)
    for s in (0.0, 0.7, 3.0):
        val = integrate.quad(lambda y: hankel_G_closed(p, y) * math.cos(s * y), 0, t, limit=200)[0]
        w = math.hypot(s, m)
        assert val == pytest.approx(math.sin(t * w) / w, abs=1e-10)
    assert hankel_G_closed(p, 1.0) == pytest.approx(special.j0(m * math.sqrt(3.0)), rel=1e-14)


def test_cone_exponent():
    assert cone_exponent(-0.5) == 0.0
    assert cone_exponent(-0.75) == 0.0
    assert cone_exponent(0.5) == 0.0
    assert cone_exponent(1.5) == 0.0
    assert cone_exponent(0.0) == -0.5
    assert cone_exponent(1.0) == -1.5
    # bounded case: finite left limit at the cone
    p = KernelParams(0.5, 1.0, 2.0)
    assert hankel_G_closed(p, 2.0 - 1e-9) == pytest.approx(kernel_constant(0.5, 1.0) * -0.5, rel=1e-6)


@pytest.mark.parametrize("alpha", [-0.25, 0.0, 0.3, 1.0])
def test_cone_blow_up_rate(alpha):
    p = KernelParams(alpha, 1.0, 2.0)
    d1, d2 = 1e-6, 1e-8
    slope = math.log(abs(hankel_G_closed(p, 2.0 - d2) / hankel_G_closed(p, 2.0 - d1))) / math.log(d2 / d1)
    assert slope == pytest.approx(cone_exponent(alpha), abs=1e-3)


def test_spherical_mean_at_origin(grid):
    mu = make_mult(3, 0.0)
    f = profile(grid, lambda r: np.exp(-0.5 * r * r))
    assert spherical_mean_origin(mu, f, 1.0) == pytest.approx(math.exp(-0.5), abs=1e-12)
    assert spherical_mean_origin(mu, f, 0.0) == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(spherical_mean_origin(mu, f, grid.nodes[:5]), f.values[:5])
    with pytest.raises(ValueError):
        spherical_mean_origin(mu, f, 41.0)


@pytest.mark.parametrize("n,gamma", [(3, 0.0), (1, 1.0)])
@pytest.mark.parametrize("t", [0.5, 1.0, 1.5, -1.0])
def test_representation_cone_case(n, gamma, t):
    data = gaussian_data(n, gamma)
    spectral = u_origin(data, t)
    assert abs(integral_representation_origin(data, t) - spectral) <= 5e-4 * abs(spectral)


@pytest.mark.parametrize("n,gamma", [(1, 0.0), (2, 0.0), (1, 0.25), (1, 0.1)])
def test_representation_below_cone_order(n, gamma):
    mu = make_mult(n, gamma)
    grid = grid_for(mu)
    f = profile(grid, lambda r: 0.5 * np.exp(-r * r))
    g = profile(grid, lambda r: np.exp(-0.5 * r * r))
    data = CauchyData(f, g, 1.0, mu)
    for t in (0.5, 1.5, 3.0):
        spectral = u_origin(data, t)
        assert abs(integral_representation_origin(data, t) - spectral) <= 1e-8


def test_representation_at_time_zero():
    data = gaussian_data(3, 0.0)
    assert integral_representation_origin(data, 0.0) == pytest.approx(1.0, abs=1e-12)


def test_quadratic_argument_fails():
    data = gaussian_data(3, 0.0)
    errs = [abs(integral_representation_origin(data, t, argument="quadratic") - u_origin(data, t)) / abs(u_origin(data, t))
            for t in (0.5, 1.0, 1.5)]
    assert max(errs) > 5e-4


def test_representation_rejects():
    with pytest.raises(ValueError):
        integral_representation_origin(gaussian_data(5, 0.0), 1.0)
    with pytest.raises(ValueError):
        integral_representation_origin(gaussian_data(1, 0.0), 50.0)
    with pytest.raises(ValueError):
        integral_representation_origin(gaussian_data(1, 0.0), 1.0, argument="quadratic")
    with pytest.raises(ValueError):
        integral_representation_origin(gaussian_data(3, 0.0), 1.0, argument="other")


def test_consistency_chain_with_closed_kernel():
    # f-part at the origin equals int_0^t r^{2a+1} G_t(r) f(r) dr (alpha = 0 has an
    # inverse square-root singularity at the cone, handled by quad's algebraic weight)
    mu = make_mult(2, 0.0)
    grid = grid_for(mu)
    f = profile(grid, lambda r: np.exp(-r * r))
    data = CauchyData(f, profile(grid, lambda r: 0 * r), 1.0, mu)
    t = 1.5
    p = KernelParams(0.0, 1.0, t)

    def smooth(r):
        return r * hankel_G_closed(p, r) * math.exp(-r * r) * math.sqrt(t - r)

    val = integrate.quad(smooth, 0, t, weight="alg", wvar=(0, -0.5))[0]
    assert val == pytest.approx(u_origin(data, t).real, rel=5e-4)
