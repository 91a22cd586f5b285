"""Numerical toolkit for noncommuting spacetime coordinates.

Modules
-------
sigma
    Manifold of admissible coordinate commutators and Lorentz actions.
oscillator
    Truncated two-mode representation, Weyl operators, characteristic
    functions, and the high-precision group-law residual.
localization
    Uncertainty reports, empirical floors, and the squared-length spectrum.
pair
    Two-event systems: separations, distance spectra, diagonal reduction.
kernels
    Gaussian interaction kernels on the zero-sum surface and their
    transforms.
field
    Smeared free-field commutator and the spacelike locality-violation
    profile.
cli
    The `qst` command-line experiment harness.
"""

__version__ = "0.1.0"

from .errors import (
    BruteForceTooLarge,
    ConstraintViolated,
    ConstraintViolation,
    DegenerateGround,
    DimensionMismatch,
    DimensionTooSmall,
    EdgeSupportWarning,
    IndexOutOfRange,
    InvalidTransform,
    NotFactorizable,
    QstError,
    QuadratureUnderResolved,
    UnsupportedTransform,
)
from .field import (
    CommutatorCurve,
    covariance_check,
    gaussian_tail_fit,
    locality_violation_profile,
    smeared_commutator,
)
from .kernels import (
    EventPointList,
    KernelSpec,
    kernel_density,
    kernel_fourier,
    surface_integral,
    transplanckian_damping,
)
from .localization import (
    SpectrumResult,
    UncertaintyFloor,
    UncertaintyReport,
    euclidean_length_spectrum,
    optimal_state,
    sample_uncertainty_floor,
    uncertainties,
)
from .oscillator import (
    CoordinateSet,
    FactoredOperator,
    WeylExponent,
    build_coordinates,
    characteristic_function,
    commutator_residual,
    transform_coordinates,
    weyl,
    weyl_apply,
    weyl_ground_residual,
    weyl_twist_phase,
)
from .pair import (
    PairSystem,
    barycenter_coordinates,
    build_pair,
    difference_coordinates,
    mode_mixer,
    pair_distance_spectrum,
    quantum_diagonal_reduce,
    separation_squared,
)
from .sigma import (
    LorentzTransform,
    SigmaPoint,
    invariant_pfaffian,
    invariant_qq,
    is_base_point,
    lorentz_act,
    make_sigma,
    random_sigma_point,
    sigma_from_tensor,
    standard_point,
)
