"""Manifold of admissible coordinate commutators.

A point is an antisymmetric 4x4 tensor sigma parametrized by two real
3-vectors (e, m): the time-space block carries e, the space-space block
carries m.  Admissibility means the two quadratic invariants take their
pinned values: the full contraction vanishes and the Pfaffian is +-1,
which in the (e, m) parametrization reads |e|^2 = |m|^2 and e.m = +-1.

Conventions fixed here and used everywhere else in the package:

* metric = diag(+1, -1, -1, -1),
* the totally antisymmetric symbol has eps[0,1,2,3] = +1,
* sigma[0, i] = e[i] and (sigma[2,3], sigma[1,3], sigma[1,2]) =
  (m[0], -m[1], m[2]).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConstraintViolation, InvalidTransform

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])

#: Default absolute tolerance for admissibility and group-membership checks.
DEFAULT_TOL = 1e-9


def _as_vec3(v, name: str) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.shape != (3,):
        raise ConstraintViolation(f"{name} must be a real 3-vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ConstraintViolation(f"{name} has non-finite entries: {arr}")
    return arr


@dataclass(frozen=True)
class SigmaPoint:
    """An admissible commutator tensor in the (e, m) parametrization.

    Construction validates the two defining constraints and raises
    :class:`ConstraintViolation` on failure.  Instances are immutable.

    Parameters
    ----------
    e : array_like, shape (3,)
        Time-space block of the tensor.
    m : array_like, shape (3,)
        Space-space block (axial part) of the tensor.
    tol : float, optional
        Absolute tolerance for the constraint checks, scaled by the
        point's magnitude so large boosted points validate fairly.
    """

    e: np.ndarray
    m: np.ndarray
    tol: float = field(default=DEFAULT_TOL, compare=False)

    def __post_init__(self):
        e = _as_vec3(self.e, "e")
        m = _as_vec3(self.m, "m")
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "m", m)
        e.flags.writeable = False
        m.flags.writeable = False
        scale = max(1.0, float(e @ e), float(m @ m))
        if abs(e @ e - m @ m) > self.tol * scale:
            raise ConstraintViolation(
                f"|e|^2 - |m|^2 = {e @ e - m @ m:.3e} exceeds tol {self.tol:.1e} (scale {scale:.2e})"
            )
        if abs(abs(e @ m) - 1.0) > self.tol * scale:
            raise ConstraintViolation(
                f"e.m = {e @ m:.12f} is not +-1 within tol {self.tol:.1e}"
            )

    @property
    def orientation(self) -> int:
        """Sign of e.m, i.e. the Pfaffian sign: +1 or -1."""
        return 1 if float(self.e @ self.m) > 0 else -1

    def tensor(self) -> np.ndarray:
        """Assemble the full antisymmetric 4x4 tensor."""
        s = np.zeros((4, 4))
        s[0, 1:] = self.e
        s[2, 3] = self.m[0]
        s[1, 3] = -self.m[1]
        s[1, 2] = self.m[2]
        return s - s.T

    def entry(self, mu: int, nu: int) -> float:
        return float(self.tensor()[mu, nu])


def make_sigma(e, m, tol: float = DEFAULT_TOL) -> SigmaPoint:
    """Validate (e, m) and return the corresponding manifold point."""
    return SigmaPoint(e=np.asarray(e, dtype=float), m=np.asarray(m, dtype=float), tol=tol)


def sigma_from_tensor(s, tol: float = DEFAULT_TOL) -> SigmaPoint:
    """Build a point from a raw 4x4 tensor, checking antisymmetry first."""
    s = np.asarray(s, dtype=float)
    if s.shape != (4, 4):
        raise ConstraintViolation(f"tensor must be 4x4, got {s.shape}")
    scale = max(1.0, float(np.abs(s).max()))
    if np.abs(s + s.T).max() > tol * scale:
        raise ConstraintViolation("tensor is not antisymmetric")
    e = s[0, 1:].copy()
    m = np.array([s[2, 3], -s[1, 3], s[1, 2]])
    return make_sigma(e, m, tol=tol)


def invariant_qq(point: SigmaPoint) -> float:
    """Full contraction sigma_{mu nu} sigma^{mu nu} with both indices raised.

    Computed honestly from the tensor and the metric; equals
    2(|m|^2 - |e|^2) in the (e, m) parametrization, hence zero on the
    manifold.
    """
    s = point.tensor()
    s_up = METRIC @ s @ METRIC
    return float(np.sum(s * s_up))


def invariant_pfaffian(point: SigmaPoint) -> float:
    """Pfaffian of the tensor; equals e.m, so +-1 on the manifold.

    Uses the closed 4x4 expansion
    s01*s23 - s02*s13 + s03*s12, which is the epsilon contraction
    (1/8) eps^{mu nu rho la} s_{mu nu} s_{rho la} with eps[0,1,2,3] = +1.
    """
    s = point.tensor()
    return float(s[0, 1] * s[2, 3] - s[0, 2] * s[1, 3] + s[0, 3] * s[1, 2])


def is_base_point(point: SigmaPoint, tol: float = 1e-9) -> bool:
    """True when |e| = 1 and m = +-e, the orbit's reference slice."""
    e, m = point.e, point.m
    if abs(e @ e - 1.0) > tol:
        return False
    return bool(np.abs(m - e).max() <= tol or np.abs(m + e).max() <= tol)


def standard_point() -> SigmaPoint:
    """The canonical base point e = m = (1, 0, 0)."""
    e = np.array([1.0, 0.0, 0.0])
    return make_sigma(e, e)


def random_sigma_point(rng: np.random.Generator, orientation: int | None = None,
                       min_alignment: float = 0.05) -> SigmaPoint:
    """Draw a random admissible point, not restricted to the base slice.

    Directions are sampled isotropically and both vectors rescaled by the
    common factor that lands e.m on +-1, so |e| = |m| ranges over
    [1, 1/sqrt(min_alignment)].  Nearly orthogonal direction pairs are
    rejected: they would blow the scale up and with it the floating-point
    drift of the invariants.  Arbitrarily large points are still reachable
    by boosting via `lorentz_act`.
    """
    if orientation is None:
        orientation = int(rng.choice([-1, 1]))
    if orientation not in (-1, 1):
        raise ConstraintViolation(f"orientation must be +-1, got {orientation}")
    if not 0 < min_alignment <= 1:
        raise ConstraintViolation(f"min_alignment must be in (0, 1], got {min_alignment}")
    while True:
        u = rng.normal(size=3)
        v = rng.normal(size=3)
        u /= np.linalg.norm(u)
        v /= np.linalg.norm(v)
        dot = u @ v
        if abs(dot) >= min_alignment:
            break
    v = v * np.sign(dot) * orientation
    # |e| = |m| holds exactly since both are unit vectors scaled alike;
    # the common factor lands e.m on +-1.
    s = 1.0 / np.sqrt(abs(u @ v))
    return make_sigma(s * u, s * v)


@dataclass(frozen=True)
class LorentzTransform:
    """A 4x4 matrix satisfying L^T g L = g within a strict tolerance.

    Factories cover the subgroups the toolkit needs: spatial rotations,
    boosts along an arbitrary axis, spatial reflection, and composition.
    """

    matrix: np.ndarray
    tol: float = field(default=1e-12, compare=False)

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=float)
        if mat.shape != (4, 4):
            raise InvalidTransform(f"matrix must be 4x4, got {mat.shape}")
        defect = np.abs(mat.T @ METRIC @ mat - METRIC).max()
        if defect > self.tol:
            raise InvalidTransform(
                f"L^T g L deviates from g by {defect:.3e} (tol {self.tol:.1e})"
            )
        object.__setattr__(self, "matrix", mat)
        mat.flags.writeable = False

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.matrix))

    def compose(self, other: "LorentzTransform") -> "LorentzTransform":
        return LorentzTransform(self.matrix @ other.matrix)

    def __matmul__(self, other: "LorentzTransform") -> "LorentzTransform":
        return self.compose(other)

    def inverse(self) -> "LorentzTransform":
        # g L^T g is the inverse for any metric-preserving L.
        return LorentzTransform(METRIC @ self.matrix.T @ METRIC)

    @staticmethod
    def identity() -> "LorentzTransform":
        return LorentzTransform(np.eye(4))

    @staticmethod
    def rotation(axis, angle: float) -> "LorentzTransform":
        """Spatial rotation by `angle` about the 3-vector `axis`."""
        axis = _as_vec3(axis, "axis")
        n = np.linalg.norm(axis)
        if n == 0:
            raise InvalidTransform("rotation axis must be nonzero")
        k = axis / n
        kx = np.array([[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]])
        r3 = np.eye(3) + np.sin(angle) * kx + (1.0 - np.cos(angle)) * (kx @ kx)
        out = np.eye(4)
        out[1:, 1:] = r3
        return LorentzTransform(out)

    @staticmethod
    def boost(axis, rapidity: float) -> "LorentzTransform":
        """Pure boost with the given rapidity along `axis`."""
        axis = _as_vec3(axis, "axis")
        n = np.linalg.norm(axis)
        if n == 0:
            raise InvalidTransform("boost axis must be nonzero")
        k = axis / n
        ch, sh = np.cosh(rapidity), np.sinh(rapidity)
        out = np.eye(4)
        out[0, 0] = ch
        out[0, 1:] = sh * k
        out[1:, 0] = sh * k
        out[1:, 1:] = np.eye(3) + (ch - 1.0) * np.outer(k, k)
        return LorentzTransform(out)

    @staticmethod
    def parity() -> "LorentzTransform":
        return LorentzTransform(np.diag([1.0, -1.0, -1.0, -1.0]))


def lorentz_act(transform: LorentzTransform, point: SigmaPoint,
                tol: float = DEFAULT_TOL) -> SigmaPoint:
    """Push a manifold point forward: sigma' = L sigma L^T.

    Both invariants are exactly preserved in exact arithmetic, so the
    result re-validates against the standard constraints; `tol` bounds
    the accumulated floating-point drift allowed in that re-check.
    """
    if not isinstance(transform, LorentzTransform):
        transform = LorentzTransform(np.asarray(transform, dtype=float))
    s_new = transform.matrix @ point.tensor() @ transform.matrix.T
    return sigma_from_tensor(s_new, tol=tol)


def rotate_em(point: SigmaPoint, rotation: LorentzTransform) -> tuple[np.ndarray, np.ndarray]:
    """(e, m) image under a spatial rotation: e -> R e, m -> det(R) R m.

    Convenience for tests; `lorentz_act` is the general path.
    """
    r3 = rotation.matrix[1:, 1:]
    if np.abs(rotation.matrix[0, 1:]).max() > 1e-14 or abs(rotation.matrix[0, 0] - 1.0) > 1e-14:
        raise InvalidTransform("rotate_em expects a purely spatial transform")
    det = np.linalg.det(r3)
    return r3 @ point.e, det * (r3 @ point.m)
