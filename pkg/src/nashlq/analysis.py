"""Numerical interrogation of equilibrium uniqueness.

A sufficient condition for a unique Nash equilibrium is that ``G + G^T``
stays positive definite over the whole action box, where ``G`` is the
Jacobian of the stacked gradient vector.  That cannot be verified
exhaustively, so this module sweeps stratified samples of the box, tracks
the smallest eigenvalue seen and where it occurred, and runs ensembles of
randomly generated symmetric strictly diagonally dominant systems to pile
up evidence (or surface a counterexample with a reproducible witness).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import qmc

from .game import (
    ActionProfile,
    GameSpec,
    exact_gradient,
    pseudogradient_jacobian,
    profile_array,
)
from .simulate import substream

__all__ = [
    "PreconditionViolated",
    "MatrixEnsembleConfig",
    "RosenReport",
    "SweepRecord",
    "SweepResult",
    "rosen_check",
    "two_player_mu",
    "generate_sdd_matrix",
    "generate_negative_definite_matrix",
    "game_from_matrix",
    "rosen_sweep",
    "conjecture_sweep",
]

# Default box ceiling for sweeps: entries of G decay as gains grow, so any
# violation is expected near the lower boundary and a generous ceiling on
# the order of the diagonal rates loses nothing.
BOX_FACTOR = 10.0


class PreconditionViolated(ValueError):
    """Inputs violate a documented precondition of the analysis routine."""


@dataclass(frozen=True)
class MatrixEnsembleConfig:
    """Shape of a random-matrix ensemble for uniqueness evidence runs."""

    n: int
    count: int
    offdiag_scale: float = 1.0
    dominance_margin: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.count < 1:
            raise ValueError("count must be at least 1")
        if not self.offdiag_scale > 0:
            raise ValueError("offdiag_scale must be positive")
        if not self.dominance_margin > 0:
            raise ValueError("dominance_margin must be positive")


@dataclass(frozen=True, eq=False)
class RosenReport:
    """Smallest eigenvalue of ``G + G^T`` over sampled profiles.

    ``witness`` is the sampled profile attaining ``min_eig``; ``violated``
    flags ``min_eig <= 0``, i.e. the uniqueness certificate failed somewhere.
    """

    min_eig: float
    witness: ActionProfile
    samples: int
    violated: bool


@dataclass(frozen=True, eq=False)
class SweepRecord:
    """One ensemble member: its game, sweep report, and reproduction keys."""

    matrix_index: int
    seed: int
    spec: GameSpec
    report: RosenReport


@dataclass(frozen=True, eq=False)
class SweepResult:
    """Aggregate of an ensemble sweep with finite-difference spot checks."""

    records: tuple[SweepRecord, ...]
    min_eig: float
    spot_checked: int
    spot_check_max_rel_err: float

    @property
    def violations(self) -> tuple[SweepRecord, ...]:
        return tuple(r for r in self.records if r.report.violated)


def rosen_check(spec: GameSpec, k) -> float:
    """Smallest eigenvalue of ``G(k) + G(k)^T``; positive certifies k."""
    g = pseudogradient_jacobian(spec, k)
    return float(np.linalg.eigvalsh(g + g.T).min())


def two_player_mu(a11: float, a12: float, a22: float, k1: float, k2: float) -> float:
    """Sylvester determinant deciding 2-player uniqueness with zero tradeoffs.

        mu = 4 (k1 - a11)^3 (k2 - a22)^3 - a12^4 (k1 - a11 + k2 - a22)^2

    Under strict diagonal dominance with negative diagonal (``a11 < -|a12|``,
    ``a22 < -|a12|``) and nonnegative gains, ``mu > 0`` is equivalent to
    ``G + G^T`` being positive definite at ``(k1, k2)``.
    """
    if not (a11 < -abs(a12) and a22 < -abs(a12)):
        raise PreconditionViolated(
            "need a11 < -|a12| and a22 < -|a12| (strict diagonal dominance, negative diagonal)"
        )
    if k1 < 0 or k2 < 0:
        raise PreconditionViolated("gains must be nonnegative")
    d1 = k1 - a11
    d2 = k2 - a22
    return 4.0 * d1**3 * d2**3 - a12**4 * (d1 + d2) ** 2


def generate_sdd_matrix(config: MatrixEnsembleConfig, rng: np.random.Generator) -> np.ndarray:
    """Random symmetric strictly diagonally dominant matrix, negative diagonal.

    Off-diagonal entries are uniform on ``[-offdiag_scale, offdiag_scale]``;
    each diagonal entry is set below minus the absolute row sum by at least
    ``dominance_margin``, so the output is negative definite by Gershgorin.
    """
    n = config.n
    a = np.zeros((n, n))
    upper = np.triu_indices(n, 1)
    if upper[0].size:
        vals = rng.uniform(-config.offdiag_scale, config.offdiag_scale, size=upper[0].size)
        a[upper] = vals
        a.T[upper] = vals
    offdiag = np.sum(np.abs(a), axis=1)
    diag = -(offdiag + config.dominance_margin + rng.uniform(0.0, config.offdiag_scale, size=n))
    a[np.diag_indices(n)] = diag
    return a


def generate_negative_definite_matrix(
    n: int,
    rng: np.random.Generator,
    eig_range: tuple[float, float] = (0.02, 2.0),
) -> np.ndarray:
    """Random symmetric negative definite matrix, generally NOT diagonally dominant.

    Used by the counterexample search: eigenvalues are drawn uniform in
    ``-eig_range`` against a random orthogonal basis, which produces strong
    off-diagonal coupling well outside the diagonally dominant class.
    """
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    eigs = rng.uniform(eig_range[0], eig_range[1], size=n)
    a = -(q * eigs) @ q.T
    return (a + a.T) / 2.0


def game_from_matrix(a: np.ndarray, rho, box_factor: float = BOX_FACTOR) -> GameSpec:
    """Wrap a stable state matrix in a sweep-ready game.

    The box ceiling defaults to ``box_factor * max(1, |a_ii|)`` per player.
    """
    a = np.asarray(a, dtype=float)
    k_upper = box_factor * np.maximum(1.0, np.abs(np.diag(a)))
    return GameSpec(a=a, rho=rho, k_upper=k_upper)


def _box_samples(spec: GameSpec, samples: int, rng: np.random.Generator) -> np.ndarray:
    """Latin-hypercube points over the box, plus the lower corner.

    Violations, if any, are expected near the lower boundary, so the corner
    is always evaluated.
    """
    sampler = qmc.LatinHypercube(d=spec.n, seed=rng)
    span = spec.k_upper - spec.k_lower
    points = spec.k_lower + sampler.random(samples) * span
    return np.vstack([spec.k_lower, points])


def rosen_sweep(spec: GameSpec, samples: int = 200, seed=0) -> RosenReport:
    """Sweep the action box and report the smallest ``G + G^T`` eigenvalue.

    ``seed`` may be an integer or a Generator to continue an existing stream.
    The sweep is sampled evidence, not a proof.
    """
    rng = seed if isinstance(seed, np.random.Generator) else substream(seed)
    points = _box_samples(spec, samples, rng)
    best = np.inf
    witness = points[0]
    for point in points:
        value = rosen_check(spec, point)
        if value < best:
            best = value
            witness = point
    return RosenReport(
        min_eig=float(best),
        witness=ActionProfile(witness),
        samples=points.shape[0],
        violated=bool(best <= 0.0),
    )


def _fd_jacobian_gap(spec: GameSpec, k, step: float = 1e-5) -> float:
    """Relative gap between the closed-form Jacobian and differenced gradients."""
    k = profile_array(k)
    g = pseudogradient_jacobian(spec, k)
    fd = np.empty_like(g)
    for j in range(spec.n):
        bump = np.zeros(spec.n)
        bump[j] = step
        fd[:, j] = (exact_gradient(spec, k + bump) - exact_gradient(spec, k - bump)) / (2 * step)
    return float(np.max(np.abs(fd - g)) / np.max(np.abs(g)))


def conjecture_sweep(
    ensemble: MatrixEnsembleConfig,
    samples_per_matrix: int = 200,
    rho_range: tuple[float, float] = (0.0, 1.0),
    generator: str = "sdd",
    box_factor: float = BOX_FACTOR,
    spot_check_rate: float = 0.01,
) -> SweepResult:
    """Sweep an ensemble of random games for uniqueness-certificate failures.

    ``generator="sdd"`` draws symmetric strictly diagonally dominant systems
    (the conjectured-safe class, where no violation is expected);
    ``generator="negative-definite"`` searches outside that class, where
    violations are genuine findings and are reported with full reproduction
    keys.  A fraction ``spot_check_rate`` of extra box points per matrix
    cross-checks the closed-form Jacobian against finite differences.
    """
    if generator not in ("sdd", "negative-definite"):
        raise ValueError("generator must be 'sdd' or 'negative-definite'")
    records = []
    spot_checked = 0
    spot_worst = 0.0
    for index in range(ensemble.count):
        rng = substream(ensemble.seed, index)
        if generator == "sdd":
            a = generate_sdd_matrix(ensemble, rng)
        else:
            a = generate_negative_definite_matrix(ensemble.n, rng)
        rho = rng.uniform(rho_range[0], rho_range[1], size=ensemble.n)
        spec = game_from_matrix(a, rho, box_factor)
        report = rosen_sweep(spec, samples_per_matrix, seed=rng)
        records.append(
            SweepRecord(matrix_index=index, seed=ensemble.seed, spec=spec, report=report)
        )
        spot_count = round(samples_per_matrix * spot_check_rate)
        if spot_check_rate > 0:
            spot_count = max(1, spot_count)
        for _ in range(spot_count):
            point = spec.k_lower + rng.random(spec.n) * (spec.k_upper - spec.k_lower)
            spot_worst = max(spot_worst, _fd_jacobian_gap(spec, point))
            spot_checked += 1
    return SweepResult(
        records=tuple(records),
        min_eig=float(min(r.report.min_eig for r in records)),
        spot_checked=spot_checked,
        spot_check_max_rel_err=spot_worst,
    )
