"""Shared test helpers: random well-posed games and finite-difference oracles.

The finite-difference routines are deliberately built only on ``cost`` and
``exact_gradient`` evaluations so they stay independent of the closed-form
derivative code paths they are used to check.
"""

import numpy as np

from nashlq import (
    GameSpec,
    MatrixEnsembleConfig,
    cost,
    exact_gradient,
    generate_sdd_matrix,
    substream,
)


def random_game(seed, n=None, rho_zero=False):
    """A random diagonally dominant game plus an interior profile."""
    rng = substream(seed)
    if n is None:
        n = int(rng.integers(1, 7))
    cfg = MatrixEnsembleConfig(
        n=n,
        count=1,
        offdiag_scale=float(rng.uniform(0.2, 2.0)),
        dominance_margin=float(rng.uniform(0.05, 0.5)),
        seed=0,
    )
    a = generate_sdd_matrix(cfg, rng)
    rho = rng.uniform(0.0, 1.0, size=n)
    if rho_zero:
        rho = np.zeros(n)
    else:
        rho[rng.random(n) < 0.2] = 0.0
    k_upper = rng.uniform(0.5, 8.0, size=n)
    spec = GameSpec(a=a, rho=rho, k_upper=k_upper)
    k = spec.k_lower + rng.random(n) * (spec.k_upper - spec.k_lower)
    return spec, k


def fd_gradient(spec, k, h=1e-5):
    """Central differences of each player's own cost in its own action."""
    k = np.asarray(k, dtype=float)
    out = np.empty(spec.n)
    for i in range(spec.n):
        bump = np.zeros(spec.n)
        bump[i] = h
        out[i] = (cost(spec, k + bump)[i] - cost(spec, k - bump)[i]) / (2 * h)
    return out


def fd_hessian_diag(spec, k, h=1e-4):
    """Second central differences of each player's own cost."""
    k = np.asarray(k, dtype=float)
    base = cost(spec, k)
    out = np.empty(spec.n)
    for i in range(spec.n):
        bump = np.zeros(spec.n)
        bump[i] = h
        out[i] = (cost(spec, k + bump)[i] - 2 * base[i] + cost(spec, k - bump)[i]) / h**2
    return out


def fd_jacobian(spec, k, h=1e-5):
    """Central differences of the stacked gradient vector, column by column."""
    k = np.asarray(k, dtype=float)
    out = np.empty((spec.n, spec.n))
    for j in range(spec.n):
        bump = np.zeros(spec.n)
        bump[j] = h
        out[:, j] = (exact_gradient(spec, k + bump) - exact_gradient(spec, k - bump)) / (2 * h)
    return out


def rel_gap(value, reference):
    """Infinity-norm relative gap, safe when the reference vanishes."""
    value = np.asarray(value, dtype=float)
    reference = np.asarray(reference, dtype=float)
    scale = np.max(np.abs(reference))
    gap = np.max(np.abs(value - reference))
    return gap / scale if scale > 0 else gap
