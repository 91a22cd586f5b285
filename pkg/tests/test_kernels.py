import numpy as np
import pytest

from oracles import quad_fourier_three_point, quad_fourier_two_point
from qst_toolkit import (
    ConstraintViolated,
    DimensionMismatch,
    EventPointList,
    KernelSpec,
    kernel_density,
    kernel_fourier,
    surface_integral,
    transplanckian_damping,
)


def test_spec_validation():
    with pytest.raises(DimensionMismatch):
        KernelSpec(n_points=1)
    with pytest.raises(ValueError):
        KernelSpec(n_points=2, normalization=0.0)
    with pytest.raises(ValueError):
        KernelSpec(n_points=2, normalization=-1.0)


def test_point_list_validation():
    with pytest.raises(DimensionMismatch):
        EventPointList(np.zeros((2, 3)))
    with pytest.raises(DimensionMismatch):
        EventPointList(np.zeros(4))
    pts = EventPointList(np.array([[1.0, 0, 0, 0], [-1.0, 0, 0, 0]]))
    assert pts.n_points == 2


def test_density_rejects_off_surface_points():
    spec = KernelSpec(n_points=2)
    pts = EventPointList(np.array([[1.0, 0, 0, 0], [0.0, 0, 0, 0]]))
    with pytest.raises(ConstraintViolated):
        kernel_density(spec, pts)


def test_density_value_on_surface():
    # Two opposite points: weight = c * exp(-(|x|^2 + |-x|^2)/2) = c * exp(-|x|^2)
    spec = KernelSpec(n_points=2, normalization=2.5)
    x = np.array([0.3, -0.1, 0.7, 0.2])
    pts = EventPointList(np.stack([x, -x]))
    expected = 2.5 * np.exp(-np.dot(x, x))
    assert kernel_density(spec, pts) == pytest.approx(expected, rel=1e-14)


def test_density_peaks_at_coincidence():
    spec = KernelSpec(n_points=3)
    zero = EventPointList(np.zeros((3, 4)))
    peak = kernel_density(spec, zero)
    rng = np.random.default_rng(3)
    for _ in range(20):
        a = rng.normal(size=4)
        b = rng.normal(size=4)
        pts = EventPointList(np.stack([a, b, -(a + b)]))
        assert kernel_density(spec, pts) <= peak + 1e-15


def test_fourier_two_point_matches_quadrature():
    spec = KernelSpec(n_points=2, normalization=1.0)
    rng = np.random.default_rng(11)
    for _ in range(20):
        k = rng.uniform(-3.0, 3.0, size=(2, 4))
        got = kernel_fourier(spec, k)
        want = quad_fourier_two_point(k[0], k[1])
        assert got == pytest.approx(want, rel=1e-8)


def test_fourier_three_point_matches_quadrature():
    spec = KernelSpec(n_points=3, normalization=1.0)
    rng = np.random.default_rng(12)
    for _ in range(20):
        k = rng.uniform(-3.0, 3.0, size=(3, 4))
        got = kernel_fourier(spec, k)
        want = quad_fourier_three_point(k[0], k[1], k[2])
        assert got == pytest.approx(want, rel=1e-8)


def test_fourier_depends_only_on_momentum_differences():
    # Shifting every momentum by the same 4-vector leaves the transform
    # unchanged: the density lives on the zero-sum surface.
    spec = KernelSpec(n_points=3)
    rng = np.random.default_rng(13)
    k = rng.uniform(-2.0, 2.0, size=(3, 4))
    shift = rng.uniform(-5.0, 5.0, size=4)
    assert kernel_fourier(spec, k + shift) == pytest.approx(
        kernel_fourier(spec, k), rel=1e-12
    )


def test_surface_integral_two_point_exact():
    spec = KernelSpec(n_points=2, normalization=1.0)
    assert surface_integral(spec) == pytest.approx(np.pi ** 2, rel=1e-12)
    scaled = KernelSpec(n_points=2, normalization=3.0)
    assert surface_integral(scaled) == pytest.approx(3.0 * np.pi ** 2, rel=1e-12)


def test_surface_integral_three_point_exact():
    spec = KernelSpec(n_points=3, normalization=1.0)
    assert surface_integral(spec) == pytest.approx(16.0 * np.pi ** 4 / 9.0, rel=1e-12)


def test_surface_integral_is_transform_at_zero():
    for n in (2, 3, 4):
        spec = KernelSpec(n_points=n)
        at_zero = kernel_fourier(spec, np.zeros((n, 4)))
        assert surface_integral(spec) == pytest.approx(at_zero, rel=1e-12)


def test_damping_is_gaussian_in_separation():
    spec = KernelSpec(n_points=2)
    for kappa in (0.0, 0.5, 1.0, 2.0, 4.0):
        got = transplanckian_damping(spec, kappa)
        assert got == pytest.approx(np.exp(-kappa ** 2 / 4.0), rel=1e-10)


def test_damping_direction_independent():
    spec = KernelSpec(n_points=3)
    rng = np.random.default_rng(14)
    kappa = 1.7
    base = transplanckian_damping(spec, kappa)
    for _ in range(5):
        d = rng.normal(size=4)
        got = transplanckian_damping(spec, kappa, direction=d)
        assert got == pytest.approx(base, rel=1e-10)


def test_damping_rejects_bad_arguments():
    spec = KernelSpec(n_points=2)
    with pytest.raises(DimensionMismatch):
        transplanckian_damping(spec, 1.0, direction=np.ones(3))
    with pytest.raises(ValueError):
        transplanckian_damping(spec, 1.0, direction=np.zeros(4))
