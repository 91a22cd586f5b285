"""Localization limits: uncertainty reports, floors, and length spectra.

The truncated representation inherits the continuum's localization
structure away from the truncation edge: the two-mode ground state
saturates both uncertainty products at 3/2, the squared-length operator
has spectrum 2, 4, 6, ... with multiplicities 1, 2, 3, ..., and no state
supported below the edge can push either product under the Heisenberg
floor of 1/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BruteForceTooLarge,
    DegenerateGround,
    DimensionMismatch,
    IndexOutOfRange,
)
from .oscillator import CoordinateSet

#: Weight on the last level of any mode above which a state is edge-flagged.
EDGE_WEIGHT_TOL = 1e-9


@dataclass(frozen=True)
class UncertaintyReport:
    """Standard deviations of the four coordinates in a given state.

    `prod_ts` is dq0 * (dq1 + dq2 + dq3); `prod_ss` is the sum of the
    three pairwise space-space products.  `edge_flag` marks states with
    non-negligible weight on the last level of either mode, where the
    truncated commutators are unreliable.
    """

    dq: np.ndarray
    prod_ts: float
    prod_ss: float
    sum_sq: float
    edge_flag: bool

    def csv_row(self) -> list:
        return [*(float(v) for v in self.dq), self.prod_ts, self.prod_ss,
                int(self.edge_flag)]


def edge_weight(state: np.ndarray, dims: tuple[int, ...]) -> float:
    """Total probability weight on the last level of any mode."""
    grid = np.abs(np.asarray(state).reshape(dims)) ** 2
    total = 0.0
    for axis, d in enumerate(dims):
        total += float(np.take(grid, d - 1, axis=axis).sum())
    return total


def uncertainties(coords: CoordinateSet, state: np.ndarray,
                  edge_tol: float = EDGE_WEIGHT_TOL) -> UncertaintyReport:
    """Per-coordinate standard deviations and the two uncertainty products."""
    state = np.asarray(state, dtype=complex)
    if state.shape != (coords.total_dim,):
        raise DimensionMismatch(
            f"state has shape {state.shape}, expected ({coords.total_dim},)")
    nrm = np.linalg.norm(state)
    if nrm == 0:
        raise ValueError("state vector has zero norm")
    state = state / nrm
    dq = np.empty(4)
    for mu in range(4):
        q_psi = coords.coordinate(mu).apply(state)
        mean = np.vdot(state, q_psi).real
        second = float(np.vdot(q_psi, q_psi).real)  # <q^2>, q Hermitian
        dq[mu] = np.sqrt(max(second - mean * mean, 0.0))
    prod_ts = float(dq[0] * (dq[1] + dq[2] + dq[3]))
    prod_ss = float(dq[1] * dq[2] + dq[1] * dq[3] + dq[2] * dq[3])
    return UncertaintyReport(
        dq=dq,
        prod_ts=prod_ts,
        prod_ss=prod_ss,
        sum_sq=float(np.sum(dq ** 2)),
        edge_flag=edge_weight(state, coords.dims) > edge_tol,
    )


def optimal_state(coords: CoordinateSet, gap_tol: float = 1e-6) -> np.ndarray:
    """State of best simultaneous localization: ground of the squared length.

    Diagonalizes sum_mu q_mu^2 through its exact per-mode split and returns
    the unique lowest eigenvector.  Raises :class:`DegenerateGround` when
    the gap to the next eigenvalue is below `gap_tol` (which happens at
    truncation dimension 2, where the edge defect collides with the
    ground level).
    """
    evals, evecs = _mode_length_eigs(coords)
    pairs = evals[:, None] + evals[None, :]
    flat = np.sort(pairs.ravel())
    if flat[1] - flat[0] < gap_tol:
        raise DegenerateGround(
            f"ground gap {flat[1] - flat[0]:.3e} below {gap_tol:.1e} at "
            f"dim {coords.dim_per_mode}")
    i, j = np.unravel_index(np.argmin(pairs), pairs.shape)
    return np.kron(evecs[:, i], evecs[:, j]).astype(complex)


def _mode_length_eigs(coords: CoordinateSet) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of the per-mode part of the squared length.

    sum_mu q_mu^2 = h (x) I + I (x) h with h = x^2 + p^2 on one mode; the
    a^2 and (a^+)^2 pieces of x^2 and p^2 cancel exactly in the sum, so h
    is diagonal in the number basis: 2n + 1 below the edge and n at the
    last level.  The defect is confirmed numerically rather than assumed.
    """
    n = coords.dim_per_mode
    # The per-mode split needs each coordinate to act on a single mode:
    # coordinates 0, 1 on mode 1 and coordinates 2, 3 on mode 2.
    parts = [coords.coordinate(mu).mode_parts() for mu in range(4)]
    expected_modes = (0, 0, 1, 1)
    for mu, (p, mode) in enumerate(zip(parts, expected_modes)):
        if set(p) != {mode}:
            raise DimensionMismatch(
                f"coordinate {mu} acts on modes {sorted(p)}; the length "
                "spectrum needs the standard untransformed set")
    h1 = parts[0][0] @ parts[0][0] + parts[1][0] @ parts[1][0]
    h2 = parts[2][1] @ parts[2][1] + parts[3][1] @ parts[3][1]
    off = max(np.abs(h1 - np.diag(np.diag(h1))).max(),
              np.abs(h2 - np.diag(np.diag(h2))).max())
    if off > 1e-12 or np.abs(h1 - h2).max() > 1e-12:
        raise DimensionMismatch(
            f"per-mode length operator is not diagonal (off-diagonal {off:.2e}); "
            "was the coordinate set transformed?")
    evals = np.diag(h1).real.copy()
    return evals, np.eye(n)


@dataclass(frozen=True)
class SpectrumResult:
    """Distinct eigenvalue clusters of a length-type operator.

    `levels` holds the cluster centers in increasing order and
    `multiplicities` the cluster sizes.  Eigenvectors carrying weight
    above the edge threshold on the last level of any mode are excluded
    before clustering; `n_excluded` counts them.  `edge_flags` stays
    aligned with `levels` (all False after exclusion) so CSV emission has
    a stable schema.
    """

    levels: np.ndarray
    multiplicities: np.ndarray
    edge_flags: np.ndarray
    method: str
    n_excluded: int

    def csv_rows(self) -> list[list]:
        return [[i, float(v), int(f), self.method]
                for i, (v, f) in enumerate(zip(self.levels, self.edge_flags))]


def cluster_levels(values: np.ndarray, gap: float = 0.5) -> tuple[np.ndarray, np.ndarray]:
    """Group sorted eigenvalues into distinct levels separated by `gap`."""
    values = np.sort(np.asarray(values, dtype=float))
    if values.size == 0:
        return np.empty(0), np.empty(0, dtype=int)
    splits = np.nonzero(np.diff(values) > gap)[0] + 1
    groups = np.split(values, splits)
    levels = np.array([g.mean() for g in groups])
    mult = np.array([g.size for g in groups], dtype=int)
    return levels, mult


def euclidean_length_spectrum(coords: CoordinateSet, k: int,
                              method: str = "factored",
                              edge_tol: float = EDGE_WEIGHT_TOL) -> SpectrumResult:
    """The k lowest distinct eigenvalues of sum_mu q_mu^2, edge levels excluded.

    method="factored" (default) uses the exact per-mode split of the
    operator and drops the edge level of each mode by construction; it is
    exact linear algebra at any dimension.  method="dense" diagonalizes
    the materialized matrix restricted to the interior block as an
    independent cross-check (the restriction is verified, not assumed).
    """
    n = coords.dim_per_mode
    if k < 1:
        raise IndexOutOfRange(f"need k >= 1, got {k}")
    if method == "factored":
        evals, _ = _mode_length_eigs(coords)
        interior = evals[:n - 1]  # mode edge level excluded structurally
        pair_sums = (interior[:, None] + interior[None, :]).ravel()
        levels, mult = cluster_levels(pair_sums)
        n_excluded = coords.total_dim - interior.size ** 2
    elif method == "dense":
        if coords.total_dim > 4096:
            raise BruteForceTooLarge(
                f"dense spectrum at total dimension {coords.total_dim} not supported")
        q_sq = sum(np.linalg.matrix_power(coords.matrices[mu], 2) for mu in range(4))
        if np.abs(q_sq.imag).max() > 1e-12:
            raise DimensionMismatch("squared-length matrix is not real")
        grid = np.arange(n)
        inner = (grid[:, None] < n - 1) & (grid[None, :] < n - 1)
        mask = inner.ravel()
        block = q_sq.real[np.ix_(mask, mask)]
        coupling = np.abs(q_sq.real[np.ix_(mask, ~mask)]).max()
        if coupling > 1e-12:
            raise DimensionMismatch(
                f"interior block couples to edge levels ({coupling:.2e}); "
                "dense exclusion would be unsound")
        levels, mult = cluster_levels(np.linalg.eigvalsh(block))
        n_excluded = int((~mask).sum())
    else:
        raise ValueError(f"unknown method {method!r}")
    if k > levels.size:
        raise IndexOutOfRange(
            f"only {levels.size} distinct levels available below the edge at "
            f"dim {n}, requested {k}")
    return SpectrumResult(
        levels=levels[:k],
        multiplicities=mult[:k],
        edge_flags=np.zeros(k, dtype=bool),
        method=method,
        n_excluded=n_excluded,
    )


@dataclass(frozen=True)
class UncertaintyFloor:
    """Empirical minima of the uncertainty products over a state ensemble.

    `min_*` are minima over the whole ensemble including the ground state;
    `random_min_*` restrict to the random draws, quantifying how close the
    random ensemble alone gets to the ground-state floor.
    """

    min_prod_ts: float
    min_prod_ss: float
    min_sum_sq: float
    random_min_prod_ts: float
    random_min_prod_ss: float
    ground: UncertaintyReport
    argmin_ts: UncertaintyReport
    argmin_ss: UncertaintyReport
    n_samples: int
    seed: int


def sample_uncertainty_floor(coords: CoordinateSet, n_samples: int, seed: int,
                             batch: int = 2000) -> UncertaintyFloor:
    """Scan random low-lying states for the smallest uncertainty products.

    The ensemble is the exact ground state (sample 0) plus iid complex
    Gaussian superpositions over product levels below dim/2 per mode, so
    every sample is edge-clean by construction.  Returns the observed
    minima together with full reports for the ground state and for the
    states achieving each minimum.
    """
    if n_samples < 1:
        raise IndexOutOfRange(f"need n_samples >= 1, got {n_samples}")
    n = coords.dim_per_mode
    low = max(2, n // 2)
    rng = np.random.default_rng(seed)

    mats = []  # per-coordinate (mode, matrix) restricted action
    for mu in range(4):
        parts = coords.coordinate(mu).mode_parts()
        (mode, mat), = parts.items()
        mats.append((mode, mat))

    ground = uncertainties(coords, coords.ground_state())
    best_ts = best_ss = best_sum = np.inf
    arg_ts = arg_ss = ground
    state_ts = state_ss = None

    remaining = n_samples - 1
    while remaining > 0:
        m = min(batch, remaining)
        remaining -= m
        coeff = rng.normal(size=(m, low, low)) + 1j * rng.normal(size=(m, low, low))
        coeff /= np.linalg.norm(coeff.reshape(m, -1), axis=1)[:, None, None]
        grids = np.zeros((m, n, n), dtype=complex)
        grids[:, :low, :low] = coeff

        dq = np.empty((m, 4))
        for mu, (mode, mat) in enumerate(mats):
            if mode == 0:
                hit = np.einsum("ab,sbc->sac", mat, grids)
            else:
                hit = np.einsum("sab,cb->sac", grids, mat)
            mean = np.einsum("sab,sab->s", grids.conj(), hit).real
            second = np.einsum("sab,sab->s", hit.conj(), hit).real
            dq[:, mu] = np.sqrt(np.maximum(second - mean ** 2, 0.0))

        prod_ts = dq[:, 0] * dq[:, 1:].sum(axis=1)
        prod_ss = dq[:, 1] * dq[:, 2] + dq[:, 1] * dq[:, 3] + dq[:, 2] * dq[:, 3]
        sum_sq = (dq ** 2).sum(axis=1)

        i = int(np.argmin(prod_ts))
        if prod_ts[i] < best_ts:
            best_ts = float(prod_ts[i])
            state_ts = grids[i].reshape(-1).copy()
        j = int(np.argmin(prod_ss))
        if prod_ss[j] < best_ss:
            best_ss = float(prod_ss[j])
            state_ss = grids[j].reshape(-1).copy()
        best_sum = min(best_sum, float(sum_sq.min()))

    if state_ts is not None:
        arg_ts = uncertainties(coords, state_ts)
    if state_ss is not None:
        arg_ss = uncertainties(coords, state_ss)

    return UncertaintyFloor(
        min_prod_ts=min(best_ts, ground.prod_ts),
        min_prod_ss=min(best_ss, ground.prod_ss),
        min_sum_sq=min(best_sum, ground.sum_sq),
        random_min_prod_ts=best_ts,
        random_min_prod_ss=best_ss,
        ground=ground,
        argmin_ts=arg_ts if (state_ts is not None and best_ts < ground.prod_ts) else ground,
        argmin_ss=arg_ss if (state_ss is not None and best_ss < ground.prod_ss) else ground,
        n_samples=n_samples,
        seed=seed,
    )
