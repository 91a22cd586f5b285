"""Gaussian interaction kernels on the zero-sum constraint surface.

Products of fields evaluated through the best-localized states pick up a
Gaussian weight in the event coordinates, concentrated on configurations
whose points sum to zero.  The kernel for n points is

    c_n * delta^4(sum_j x_j) * exp(-(1/2) sum_j |x_j|_E^2)

with the Euclidean norm over all four components.  `kernel_density`
evaluates the smooth factor on the constraint surface, `kernel_fourier`
gives its transform in closed form, and `transplanckian_damping` exposes
the Gaussian envelope that suppresses large relative momenta.

Conventions: the constraint surface is parametrized by the first n - 1
points (the last is minus their sum) and carries the flat measure
d4x_1 ... d4x_{n-1}; the transform kernel is exp(i sum_j <k_j, x_j>)
with the component-wise (Euclidean) pairing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConstraintViolated, DimensionMismatch

#: Default absolute tolerance for the zero-sum constraint.
ZERO_SUM_TOL = 1e-9


@dataclass(frozen=True)
class KernelSpec:
    """Kernel parameters: number of points n >= 2 and overall normalization."""

    n_points: int
    normalization: float = 1.0

    def __post_init__(self):
        if self.n_points < 2:
            raise DimensionMismatch(f"kernel needs n >= 2 points, got {self.n_points}")
        if not (np.isfinite(self.normalization) and self.normalization > 0):
            raise ValueError(f"normalization must be positive, got {self.normalization}")


@dataclass(frozen=True)
class EventPointList:
    """A validated (n, 4) array of event coordinates or momenta."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 4:
            raise DimensionMismatch(f"points must have shape (n, 4), got {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ConstraintViolated("points contain non-finite entries")
        object.__setattr__(self, "points", pts)
        pts.flags.writeable = False

    @property
    def n_points(self) -> int:
        return self.points.shape[0]

    def zero_sum_defect(self) -> float:
        return float(np.abs(self.points.sum(axis=0)).max())


def _as_points(spec: KernelSpec, points) -> np.ndarray:
    if not isinstance(points, EventPointList):
        points = EventPointList(np.asarray(points, dtype=float))
    if points.n_points != spec.n_points:
        raise DimensionMismatch(
            f"spec is for {spec.n_points} points, got {points.n_points}")
    return points.points


def kernel_density(spec: KernelSpec, points, tol: float = ZERO_SUM_TOL) -> float:
    """Kernel value at a configuration on the zero-sum surface.

    Raises :class:`ConstraintViolated` when the points do not sum to zero
    within `tol`: off the surface the kernel is literally zero and asking
    for its density is almost always a bug in the caller.
    """
    pts = _as_points(spec, points)
    defect = float(np.abs(pts.sum(axis=0)).max())
    if defect > tol:
        raise ConstraintViolated(
            f"points sum to {pts.sum(axis=0)} (defect {defect:.3e} > tol {tol:.1e})")
    return float(spec.normalization * np.exp(-0.5 * np.sum(pts ** 2)))


def kernel_fourier(spec: KernelSpec, momenta) -> float:
    """Transform of the kernel over the constraint surface, in closed form.

    Equals c_n (2pi)^(2(n-1)) n^(-2) exp(-(1/2) sum_j |k_j - kbar|_E^2)
    where kbar is the mean momentum; the dependence on the mean alone
    through k_j - kbar is the transform-side image of the zero-sum
    constraint.  At zero momenta this is the total surface integral of
    the kernel (c2 * pi^2 for the two-point kernel).
    """
    ks = _as_points(spec, momenta)
    n = spec.n_points
    centered = ks - ks.mean(axis=0)
    gauss = np.exp(-0.5 * np.sum(centered ** 2))
    return float(spec.normalization * (2.0 * np.pi) ** (2 * (n - 1)) / n ** 2 * gauss)


def surface_integral(spec: KernelSpec) -> float:
    """Total kernel weight on the constraint surface: the transform at zero."""
    return kernel_fourier(spec, np.zeros((spec.n_points, 4)))


def transplanckian_damping(spec: KernelSpec, kappa: float, direction=None) -> float:
    """Suppression factor for relative momentum transfer of magnitude kappa.

    Evaluates the transform with two points carrying +-kappa/2 along a
    unit 4-direction (default: the time axis) and all others at zero,
    normalized by the zero-momentum value: exp(-kappa^2 / 4) for every n
    and direction, which is the Gaussian cutoff of large momentum
    transfer.
    """
    if direction is None:
        direction = np.array([1.0, 0.0, 0.0, 0.0])
    direction = np.asarray(direction, dtype=float)
    if direction.shape != (4,):
        raise DimensionMismatch(f"direction must be a 4-vector, got {direction.shape}")
    nrm = np.linalg.norm(direction)
    if nrm == 0:
        raise ValueError("direction must be nonzero")
    direction = direction / nrm
    ks = np.zeros((spec.n_points, 4))
    ks[0] = 0.5 * kappa * direction
    ks[1] = -0.5 * kappa * direction
    return kernel_fourier(spec, ks) / surface_integral(spec)
