"""Closed-loop trajectory simulation and Monte Carlo cost estimation.

Trajectories of ``xdot = (A - K) x`` from random initial states are the
model-free side of the game: each player averages its sampled finite-horizon
cost over a batch and never sees the system matrices.  Because ``A - K`` is
symmetric, one eigendecomposition per profile gives exact trajectories, and
both the exact time integral and its composite-trapezoid counterpart reduce
to an n-by-n table of per-mode-pair integrals, so whole batches evaluate
without materializing time grids per trajectory.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .game import GameSpec, _factor, _profile

__all__ = [
    "SQRT3",
    "SimConfig",
    "TrajectoryBatch",
    "substream",
    "sample_initial_state",
    "simulate_state",
    "pair_integrals",
    "trajectory_cost",
    "simulate_batch",
    "monte_carlo_cost",
]

# Initial states are i.i.d. uniform on (-sqrt(3), sqrt(3)): zero mean, unit
# variance, so the expected initial covariance is the identity.
SQRT3 = 1.7320508075688772

_INTEGRATORS = ("quadrature", "exact")

# Time grids are processed in bounded chunks so long horizons at fine steps
# never materialize an n^2-by-steps array.
_CHUNK = 8192


@dataclass(frozen=True)
class SimConfig:
    """Batch size, sampling horizon, quadrature step, seed, and integrator."""

    batch_size: int = 500
    horizon: float = 200.0
    dt: float = 0.1
    seed: int = 0
    integrator: str = "quadrature"

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError("batch_size must be at least 1")
        if not self.horizon > 0:
            raise ValueError("horizon must be positive")
        if not 0 < self.dt <= self.horizon:
            raise ValueError("dt must satisfy 0 < dt <= horizon")
        if self.integrator not in _INTEGRATORS:
            raise ValueError(f"integrator must be one of {_INTEGRATORS}")


@dataclass(frozen=True, eq=False)
class TrajectoryBatch:
    """Sampled initial states and the finite-horizon cost of each trajectory."""

    x0: np.ndarray
    per_player_cost: np.ndarray


def substream(*key: int) -> np.random.Generator:
    """Counter-based generator keyed by integers, e.g. ``(seed, stage)``.

    Philox substreams make draws reproducible for a given key regardless of
    how work is scheduled around them.
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))


def sample_initial_state(rng: np.random.Generator, n: int) -> np.ndarray:
    """One initial state: n i.i.d. uniforms on (-sqrt(3), sqrt(3))."""
    return rng.uniform(-SQRT3, SQRT3, size=n)


def _modes(spec: GameSpec, k) -> tuple[np.ndarray, np.ndarray]:
    lam, q = np.linalg.eigh(spec.a - np.diag(_profile(spec, k)))
    return lam, q


def simulate_state(spec: GameSpec, k, x0, t: float) -> np.ndarray:
    """Closed-loop state ``x(t) = exp((A - K) t) x0`` via the symmetric modes."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    lam, q = _modes(spec, k)
    x0 = np.asarray(x0, dtype=float)
    return q @ (np.exp(lam * t) * (q.T @ x0))

def pair_integrals(eigs: np.ndarray, horizon: float, dt: float | None = None) -> np.ndarray:
    """Table of ``integral_0^T exp((lam_m + lam_p) t) dt`` over mode pairs.

    With ``dt=None`` the integrals are exact; otherwise they are composite
    trapezoid sums on a uniform grid of ``round(T/dt)`` steps.  Squared
    states expand bilinearly over modes, so this table is the only
    time-dependence the cost integral needs.  Either variant is a
    nonnegative combination of rank-one terms, hence positive semidefinite.
    """
    eigs = np.asarray(eigs, dtype=float)
    s = eigs[:, None] + eigs[None, :]
    if dt is None:
        denom = np.where(s == 0.0, 1.0, s)
        return np.where(s == 0.0, horizon, np.expm1(s * horizon) / denom)
    steps = max(1, round(horizon / dt))
    step = horizon / steps
    out = np.zeros_like(s)
    for start in range(0, steps + 1, _CHUNK):
        t = step * np.arange(start, min(start + _CHUNK, steps + 1))
        w = np.full(t.shape, step)
        if start == 0:
            w[0] *= 0.5
        if start + _CHUNK > steps:
            w[-1] *= 0.5
        out += (np.exp(s[:, :, None] * t) * w).sum(axis=-1)
    return out


def _batch_cost(spec: GameSpec, k, x0: np.ndarray, config: SimConfig) -> np.ndarray:
    k = _profile(spec, k)
    lam, q = _modes(spec, k)
    w = pair_integrals(lam, config.horizon, None if config.integrator == "exact" else config.dt)
    coords = x0 @ q
    d = q[None, :, :] * coords[:, None, :]
    base = np.einsum("bim,mp,bip->bi", d, w, d)
    # the integrand is a square; clamp eigensolver round-off
    return (1.0 + spec.rho * k**2) * np.maximum(base, 0.0)


def trajectory_cost(spec: GameSpec, k, x0, config: SimConfig) -> np.ndarray:
    """Finite-horizon cost of one trajectory for every player.

    Integrates ``x_i(t)^2 + rho_i u_i(t)^2 = (1 + rho_i k_i^2) x_i(t)^2``
    over ``[0, horizon]`` from the given initial state, exactly or by
    composite trapezoid depending on ``config.integrator``.
    """
    x0 = np.asarray(x0, dtype=float)
    return _batch_cost(spec, k, x0[None, :], config)[0]


def simulate_batch(spec: GameSpec, k, config: SimConfig, stage: int = 0) -> TrajectoryBatch:
    """Draw a batch of initial states and evaluate every trajectory's cost.

    The batch is drawn in one call from the ``(seed, stage)`` substream; row
    ``b`` is trajectory ``b``'s draw, so results are reproducible however the
    batch is later processed.  Raises :class:`NotPositiveDefinite` before
    simulating if the profile leaves the stable region.
    """
    k = _profile(spec, k)
    _factor(np.diag(k) - spec.a)  # stability check up front
    rng = substream(config.seed, stage)
    x0 = rng.uniform(-SQRT3, SQRT3, size=(config.batch_size, spec.n))
    return TrajectoryBatch(x0=x0, per_player_cost=_batch_cost(spec, k, x0, config))


def monte_carlo_cost(spec: GameSpec, k, config: SimConfig, stage: int = 0) -> np.ndarray:
    """Batch-mean estimate of each player's cost at the given profile.

    Unbiased for the horizon-truncated cost; trajectories are averaged in
    index order so the estimate is bit-stable for a given ``(seed, stage)``.
    """
    return simulate_batch(spec, k, config, stage).per_player_cost.mean(axis=0)
