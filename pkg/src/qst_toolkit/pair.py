"""Two independent events: separations, distance spectra, diagonal reduction.

Two copies of the coordinate representation act on a four-mode product
space (modes 1, 2 for the first event, 3, 4 for the second), with both
copies sharing one commutator tensor.  Differences of the two coordinate
sets scaled by 1/sqrt(2) satisfy the single-event algebra again, which is
why the squared separation has spectrum 4, 8, 12, ... — twice the
single-event squared-length ladder.

The diagonal reduction maps two-event observables to one-event ones by
rotating to barycenter/relative modes with a number-conserving mode mixer
and evaluating the relative modes in their ground state.  On the truncated
space the mixer is exact on every total-number sector that fits, so
reduced observables are exact away from the truncation edge.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import (
    BruteForceTooLarge,
    DimensionMismatch,
    DimensionTooSmall,
    IndexOutOfRange,
    NotFactorizable,
)
from .localization import (
    EDGE_WEIGHT_TOL,
    SpectrumResult,
    cluster_levels,
    euclidean_length_spectrum,
)
from .oscillator import FactoredOperator, build_coordinates, ladder
from .sigma import SigmaPoint

#: Largest per-mode dimension for which brute-force diagonalization runs.
BRUTE_FORCE_DIM_CAP = 10


@dataclass(frozen=True)
class PairSystem:
    """Two commuting copies of the coordinate operators on four modes."""

    dim_per_mode: int
    sigma: SigmaPoint
    event1: tuple
    event2: tuple

    @property
    def dims(self) -> tuple[int, int, int, int]:
        return (self.dim_per_mode,) * 4

    @property
    def total_dim(self) -> int:
        return self.dim_per_mode ** 4

    def coordinate(self, event: int, mu: int) -> FactoredOperator:
        if event not in (1, 2):
            raise IndexOutOfRange(f"event must be 1 or 2, got {event}")
        if not 0 <= mu <= 3:
            raise IndexOutOfRange(f"coordinate index must be 0..3, got {mu}")
        return (self.event1, self.event2)[event - 1][mu]

    def ground_state(self) -> np.ndarray:
        vec = np.zeros(self.total_dim, dtype=complex)
        vec[0] = 1.0
        return vec


def build_pair(dim: int) -> PairSystem:
    """Two independent copies of the standard representation, one shared tensor."""
    single = build_coordinates(dim)
    dims = (dim,) * 4
    event1, event2 = [], []
    for mu in range(4):
        (mode, mat), = single.coordinate(mu).mode_parts().items()
        event1.append(FactoredOperator(dims, [(mode, mat)]))
        event2.append(FactoredOperator(dims, [(mode + 2, mat)]))
    return PairSystem(dim_per_mode=dim, sigma=single.sigma,
                      event1=tuple(event1), event2=tuple(event2))


def difference_coordinates(pair: PairSystem) -> list[FactoredOperator]:
    """Relative coordinates (q1 - q2)/sqrt(2); they satisfy the one-event algebra."""
    s = 1.0 / np.sqrt(2.0)
    return [s * (pair.coordinate(1, mu) - pair.coordinate(2, mu)) for mu in range(4)]


def barycenter_coordinates(pair: PairSystem) -> list[FactoredOperator]:
    """Mean coordinates (q1 + q2)/sqrt(2), commuting with the relative set."""
    s = 1.0 / np.sqrt(2.0)
    return [s * (pair.coordinate(1, mu) + pair.coordinate(2, mu)) for mu in range(4)]


def separation_squared(pair: PairSystem) -> list[FactoredOperator]:
    """The four operators (q1_mu - q2_mu); their squares sum to the distance."""
    return [pair.coordinate(1, mu) - pair.coordinate(2, mu) for mu in range(4)]


def _dense_distance_matrix(pair: PairSystem) -> np.ndarray:
    total = pair.total_dim
    out = np.zeros((total, total))
    for op in separation_squared(pair):
        d = op.dense(allow_large=True)
        sq = d @ d
        if np.abs(sq.imag).max() > 1e-10:
            raise DimensionMismatch("squared separation is not real")
        out += sq.real
    return out


def pair_distance_spectrum(pair: PairSystem, k: int, method: str = "normal_mode",
                           edge_tol: float = EDGE_WEIGHT_TOL) -> SpectrumResult:
    """The k lowest distinct eigenvalues of sum_mu (q1_mu - q2_mu)^2.

    method="normal_mode" (default) rotates to relative coordinates, where
    the operator is exactly twice the one-event squared length, and reuses
    that spectrum; multiplicities count the relative sector only, since
    the barycenter factor multiplies every level by the same amount.

    method="brute_force" materializes the full four-mode matrix and
    diagonalizes it, excluding eigenvectors with weight above `edge_tol`
    on the last level of any mode before clustering; its multiplicities
    include the surviving barycenter degeneracy, so only the level values
    are comparable between the two methods.
    """
    if k < 1:
        raise IndexOutOfRange(f"need k >= 1, got {k}")
    n = pair.dim_per_mode
    if method == "normal_mode":
        single = build_coordinates(n)
        base = euclidean_length_spectrum(single, k, method="factored")
        return SpectrumResult(
            levels=2.0 * base.levels,
            multiplicities=base.multiplicities,
            edge_flags=base.edge_flags.copy(),
            method="normal_mode",
            n_excluded=base.n_excluded,
        )
    if method != "brute_force":
        raise ValueError(f"unknown method {method!r}")
    if n > BRUTE_FORCE_DIM_CAP:
        raise BruteForceTooLarge(
            f"brute force supports per-mode dimension <= {BRUTE_FORCE_DIM_CAP}, got {n}")
    mat = _dense_distance_matrix(pair)
    evals, evecs = np.linalg.eigh(mat)
    # Edge filter: drop eigenvectors with weight on the last level of any mode.
    grid = np.indices(pair.dims).reshape(4, -1)
    on_edge = (grid >= n - 1).any(axis=0)
    edge_w = (np.abs(evecs[on_edge, :]) ** 2).sum(axis=0)
    keep = edge_w <= edge_tol
    if not keep.any():
        raise DimensionTooSmall(
            f"no edge-clean eigenvectors at per-mode dimension {n}")
    levels, mult = cluster_levels(evals[keep])
    if k > levels.size:
        raise IndexOutOfRange(
            f"only {levels.size} edge-clean distinct levels at dim {n}, requested {k}")
    return SpectrumResult(
        levels=levels[:k],
        multiplicities=mult[:k],
        edge_flags=np.zeros(k, dtype=bool),
        method="brute_force",
        n_excluded=int((~keep).sum()),
    )


def mode_mixer(dim: int) -> np.ndarray:
    """Balanced number-conserving mixer of two truncated modes.

    exp(pi/4 (a1+ a2 - a1 a2+)) on the two-mode space: sends the
    barycenter combination (a1 + a2)/sqrt(2) to a1 and the relative
    combination (a1 - a2)/sqrt(2) to -a2, exactly on every total-number
    sector below the truncation edge.
    """
    a = ladder(dim)
    gen = np.kron(a.T.conj(), a) - np.kron(a, a.T.conj())
    return expm((np.pi / 4.0) * gen)


def quantum_diagonal_reduce(pair: PairSystem, observable,
                            strict: bool = False) -> np.ndarray:
    """Reduce a two-event observable to a one-event operator.

    Conjugates by the barycenter/relative mode mixer on mode pairs (1, 3)
    and (2, 4) and evaluates the relative modes in their joint ground
    state.  The result acts on the two remaining (barycenter) modes, i.e.
    on the one-event space.  The map is unital and positive by
    construction; barycenter coordinates reduce to the one-event
    coordinates exactly, and the squared separation reduces to 4 times
    the identity away from the truncation edge.

    `observable` may be a FactoredOperator on the pair's four modes or a
    dense matrix of matching size.  With strict=True, observables whose
    reduction cannot be exact on any interior sector — detected through a
    unitality check on the complementary block — are rejected with
    :class:`NotFactorizable`; the default accepts any well-shaped
    observable and reduces it faithfully.
    """
    n = pair.dim_per_mode
    total = pair.total_dim
    if isinstance(observable, FactoredOperator):
        if observable.dims != pair.dims:
            raise NotFactorizable(
                f"observable lives on modes {observable.dims}, pair has {pair.dims}")
        obs = observable.dense(allow_large=True)
    else:
        obs = np.asarray(observable, dtype=complex)
        if obs.shape != (total, total):
            raise NotFactorizable(
                f"observable has shape {obs.shape}, expected ({total}, {total})")
    u = mode_mixer(n)
    # Group the four modes into the mixer pairs (1, 3) and (2, 4); the
    # pair-grouping permutation is its own inverse.
    t = obs.reshape((n,) * 8)
    t = t.transpose(0, 2, 1, 3, 4, 6, 5, 7).reshape(total, total)
    big = np.kron(u, u)
    t = big @ t @ big.conj().T
    t = t.reshape((n,) * 8).transpose(0, 2, 1, 3, 4, 6, 5, 7)
    # Modes 3, 4 now carry the relative degrees of freedom: evaluate them
    # in their joint ground state, keeping the barycenter modes 1, 2.
    reduced = t[:, :, 0, 0, :, :, 0, 0].reshape(n * n, n * n)
    if strict:
        ident = quantum_diagonal_reduce(pair, np.eye(total), strict=False)
        if np.abs(ident - np.eye(n * n)).max() > 1e-10:
            raise NotFactorizable("reduction is not unital at this dimension")
        herm = np.abs(obs - obs.conj().T).max()
        if herm > 1e-10:
            raise NotFactorizable(f"observable is not Hermitian (defect {herm:.2e})")
    return reduced