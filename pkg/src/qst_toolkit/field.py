"""Commutator of a free field smeared with the localization kernel.

The nonlocality scale shows up directly in the field algebra: once each
mode is damped by the Gaussian kernel of the best-localized states, the
commutator function no longer vanishes at spacelike separation — it decays
like a Gaussian in the separation instead of being identically zero.

The smeared commutator evaluated here is

    C(a) = (2 pi)^-3 * Int d3k / (2 w_k) * |g(k)|^2
           * (exp(-i a.k) - exp(+i a.k)),

with a.k = a0 w_k - avec.kvec, w_k = sqrt(|kvec|^2 + mass^2), and the
on-shell damping |g(k)|^2 = exp(-char_width (w_k^2 + |kvec|^2)).  The
default char_width of 1/2 matches the Gaussian of the two-mode ground
state's characteristic function.

A purely spatial separation (a0 = 0) gives exactly zero for any damping
that depends on |kvec| alone — the integrand is odd under kvec -> -kvec —
so the locality-violation profile is taken along a small fixed time
offset, spacelike whenever r exceeds the offset.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, QuadratureUnderResolved, UnsupportedTransform
from .sigma import LorentzTransform

#: Characteristic-function width of the best-localized state.
DEFAULT_CHAR_WIDTH = 0.5

#: Default quadrature resolution (radial nodes, polar nodes, azimuthal nodes).
DEFAULT_GRID = (64, 48, 48)

#: Default momentum cutoff; the damping makes the tail beyond it negligible.
DEFAULT_KMAX = 8.0


def _momentum_grid(kmax: float, n_radial: int, n_theta: int, n_phi: int):
    kr, wr = np.polynomial.legendre.leggauss(n_radial)
    kr = 0.5 * kmax * (kr + 1.0)
    wr = 0.5 * kmax * wr
    ct, wt = np.polynomial.legendre.leggauss(n_theta)
    st = np.sqrt(1.0 - ct ** 2)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    wp = 2.0 * np.pi / n_phi
    dirs = np.stack([
        np.outer(st, np.cos(phi)).ravel(),
        np.outer(st, np.sin(phi)).ravel(),
        np.outer(ct, np.ones(n_phi)).ravel(),
    ], axis=1)                                    # (n_theta*n_phi, 3)
    wdir = (wt[:, None] * np.full(n_phi, wp)).ravel()
    return kr, wr, dirs, wdir


def smeared_commutator(a, mass: float = 0.0, char_width: float = DEFAULT_CHAR_WIDTH,
                       kmax: float = DEFAULT_KMAX, grid: tuple = DEFAULT_GRID,
                       check: bool = False, check_tol: float = 1e-4) -> complex:
    """Commutator function at 4-separation `a` for a field of mass `mass`.

    Purely imaginary and odd in `a` by construction.  With check=True the
    value is recomputed on a doubled grid and
    :class:`QuadratureUnderResolved` is raised if the two disagree by
    more than `check_tol` relative (with an absolute floor of 1e-15 so
    exact zeros do not trip the check).
    """
    a = np.asarray(a, dtype=float)
    if a.shape != (4,):
        raise DimensionMismatch(f"separation must be a 4-vector, got shape {a.shape}")
    if mass < 0:
        raise ValueError(f"mass must be nonnegative, got {mass}")

    def evaluate(n_radial, n_theta, n_phi):
        kr, wr, dirs, wdir = _momentum_grid(kmax, n_radial, n_theta, n_phi)
        omega = np.sqrt(kr ** 2 + mass ** 2)
        damping = np.exp(-char_width * (omega ** 2 + kr ** 2))
        radial = wr * kr ** 2 * damping / (2.0 * omega)
        # a.k = a0*omega - avec.kvec on the mass shell
        phase = a[0] * omega[:, None] - np.outer(kr, dirs @ a[1:])
        osc = np.exp(-1j * phase) - np.exp(1j * phase)
        return complex((radial @ (osc @ wdir)) / (2.0 * np.pi) ** 3)

    value = evaluate(*grid)
    if check:
        fine = evaluate(2 * grid[0], 2 * grid[1], 2 * grid[2])
        scale = max(abs(fine), 1e-15)
        if abs(fine - value) / scale > check_tol:
            raise QuadratureUnderResolved(
                f"doubling the grid moved C(a) by {abs(fine - value) / scale:.2e} "
                f"relative (tol {check_tol:.1e}); raise kmax or the grid sizes")
    return value


@dataclass(frozen=True)
class CommutatorCurve:
    """Commutator values along a family of spatial separations."""

    r: np.ndarray
    values: np.ndarray
    t_offset: float
    mass: float
    char_width: float

    def csv_rows(self) -> list[list]:
        return [[float(r), v.real, v.imag, abs(v)]
                for r, v in zip(self.r, self.values)]


def locality_violation_profile(r_values=None, t_offset: float = 0.5,
                               mass: float = 0.0,
                               char_width: float = DEFAULT_CHAR_WIDTH,
                               kmax: float = DEFAULT_KMAX,
                               grid: tuple = DEFAULT_GRID,
                               check: bool = True,
                               check_tol: float = 1e-4) -> CommutatorCurve:
    """|C| along spatial radius r at a fixed small time offset.

    Every point with r > t_offset is spacelike-separated, where an exactly
    local field would give zero; the smeared field gives a Gaussian tail
    instead.  The offset must be nonzero: at t = 0 the integrand is odd
    under momentum reflection and the commutator vanishes identically,
    damping or not (see `gaussian_tail_fit` for quantifying the tail).

    The largest radius is re-evaluated on a doubled grid as a resolution
    check unless check=False.
    """
    if r_values is None:
        r_values = np.linspace(1.0, 4.0, 13)
    r_values = np.asarray(r_values, dtype=float)
    if r_values.ndim != 1 or r_values.size == 0:
        raise DimensionMismatch("r_values must be a nonempty 1d array")
    values = np.array([
        smeared_commutator([t_offset, 0.0, 0.0, r], mass=mass,
                           char_width=char_width, kmax=kmax, grid=grid)
        for r in r_values
    ])
    if check:
        smeared_commutator([t_offset, 0.0, 0.0, float(r_values.max())], mass=mass,
                           char_width=char_width, kmax=kmax, grid=grid,
                           check=True, check_tol=check_tol)
    return CommutatorCurve(r=r_values, values=values, t_offset=t_offset,
                           mass=mass, char_width=char_width)


def gaussian_tail_fit(curve: CommutatorCurve) -> tuple[float, float, float]:
    """Fit log|C| = log(amplitude) - decay * r^2; returns (amplitude, decay, r2).

    A positive `decay` with r2 near 1 is the quantitative statement that
    the spacelike tail is Gaussian in the separation.
    """
    mags = np.abs(curve.values)
    if np.any(mags <= 0):
        raise ValueError("commutator magnitudes must be positive for the tail fit")
    x = curve.r ** 2
    y = np.log(mags)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 0.0
    return float(np.exp(intercept)), float(-slope), r2


def covariance_check(transform: LorentzTransform, a, mass: float = 0.0,
                     char_width: float = DEFAULT_CHAR_WIDTH,
                     kmax: float = DEFAULT_KMAX,
                     grid: tuple = DEFAULT_GRID) -> float:
    """Relative change of C under a spatial rotation or reflection of `a`.

    Rotations commute with the damping, so the commutator is exactly
    invariant and the return value is pure quadrature noise.  Boosts are
    rejected with :class:`UnsupportedTransform`: the Gaussian damping
    singles out the frame of the localizing state, so the smeared
    commutator is deliberately not boost-invariant and the check would be
    comparing different physical quantities.
    """
    if not isinstance(transform, LorentzTransform):
        transform = LorentzTransform(np.asarray(transform, dtype=float))
    mat = transform.matrix
    if np.abs(mat[0, 1:]).max() > 1e-12 or np.abs(mat[1:, 0]).max() > 1e-12 \
            or abs(mat[0, 0] - 1.0) > 1e-12:
        raise UnsupportedTransform(
            "only spatial rotations and reflections are supported; the "
            "momentum damping breaks boost invariance by construction")
    a = np.asarray(a, dtype=float)
    base = smeared_commutator(a, mass=mass, char_width=char_width,
                              kmax=kmax, grid=grid)
    moved = smeared_commutator(mat @ a, mass=mass, char_width=char_width,
                               kmax=kmax, grid=grid)
    return abs(moved - base) / max(abs(base), 1e-300)
