"""Closed-form evaluation of the decentralized LQ game.

An n-player game over the symmetric linear system ``xdot = A x + u`` with
per-player scalar feedback ``u_i = -k_i x_i``.  Writing ``K = diag(k)``,
player i's infinite-horizon cost is

    J_i = (1 + rho_i k_i^2) / 2 * M_ii,    M = (K - A)^{-1},

valid whenever ``K - A`` is symmetric positive definite (a stable closed
loop).  Everything in this module is a pure function of a :class:`GameSpec`
and a gain profile: costs, own-action gradients, own-action curvatures, and
the Jacobian of the stacked gradient vector used for uniqueness analysis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

__all__ = [
    "NotPositiveDefinite",
    "GameSpec",
    "ActionProfile",
    "CostGradientReport",
    "resolvent",
    "cost",
    "exact_gradient",
    "marginal_cost_from_cost",
    "second_derivative",
    "pseudogradient_jacobian",
    "stability_margin",
    "evaluate",
]

# Gershgorin slack added when lifting lower bounds to restore stability.
STABILITY_MARGIN = 1e-6

# Cholesky pivots below this fraction of ||K - A||_inf count as failure.
PIVOT_RTOL = 1e-12


class NotPositiveDefinite(RuntimeError):
    """``K - A`` failed its positive-definite factorization.

    For a symmetric state matrix this signals an unstable closed loop:
    the game's costs are infinite at such a profile.
    """


def _symmetrized(a: np.ndarray) -> np.ndarray:
    """Return ``a`` exactly symmetric, averaging away round-off only."""
    gap = np.max(np.abs(a - a.T)) if a.size else 0.0
    if gap == 0.0:
        return a
    scale = 1.0 + np.max(np.abs(a))
    if gap > 1e-8 * scale:
        raise ValueError(f"state matrix is not symmetric (max asymmetry {gap:g})")
    return (a + a.T) / 2.0


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _vector(value, n: int, name: str) -> np.ndarray:
    value = np.asarray(value, dtype=float)
    if value.ndim == 0:
        value = np.full(n, float(value))
    if value.shape != (n,):
        raise ValueError(f"{name} must be a scalar or length-{n} vector, got shape {value.shape}")
    return value.copy()


@dataclass(frozen=True, eq=False)
class GameSpec:
    """Immutable game: state matrix, tradeoff weights, and the action box.

    ``a`` must be symmetric (tiny asymmetries are averaged away, larger ones
    rejected).  If the stability check at the lower corner of the box fails,
    the lower bounds are lifted to ``max(0, a_ii + sum_j|a_ij| + margin)``,
    which makes ``K - A`` strictly diagonally dominant with positive diagonal
    for every profile in the box, hence positive definite.
    """

    a: np.ndarray
    rho: np.ndarray
    k_upper: np.ndarray
    k_lower: np.ndarray | None = None

    def __post_init__(self):
        a = np.atleast_2d(np.array(self.a, dtype=float))
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"state matrix must be square, got shape {a.shape}")
        a = _symmetrized(a)
        n = a.shape[0]

        rho = _vector(self.rho, n, "rho")
        if np.any(rho < 0):
            raise ValueError("tradeoff coefficients rho must be nonnegative")

        k_upper = _vector(self.k_upper, n, "k_upper")
        k_lower = np.zeros(n) if self.k_lower is None else _vector(self.k_lower, n, "k_lower")

        # Stability must hold on the whole box; K - A is smallest (in the
        # Loewner order) at the lower corner, so one check there suffices.
        if not _is_positive_definite(np.diag(k_lower) - a):
            offdiag = np.sum(np.abs(a), axis=1) - np.abs(np.diag(a))
            lift = np.maximum(0.0, np.diag(a) + offdiag + STABILITY_MARGIN)
            k_lower = np.maximum(k_lower, lift)
            if not _is_positive_definite(np.diag(k_lower) - a):
                raise NotPositiveDefinite(
                    "stability lift failed; state matrix is numerically degenerate"
                )
        if np.any(k_lower >= k_upper):
            raise ValueError(
                "empty action box: need k_lower < k_upper componentwise "
                f"(after any stability lift, k_lower={k_lower})"
            )

        object.__setattr__(self, "a", _frozen(a))
        object.__setattr__(self, "rho", _frozen(rho))
        object.__setattr__(self, "k_upper", _frozen(k_upper))
        object.__setattr__(self, "k_lower", _frozen(k_lower))

    @property
    def n(self) -> int:
        return self.a.shape[0]

    def contains(self, k) -> bool:
        """True when the profile lies in the action box."""
        k = profile_array(k)
        return bool(np.all(k >= self.k_lower) and np.all(k <= self.k_upper))

    def clip(self, k) -> np.ndarray:
        """Project a profile onto the action box componentwise."""
        return np.clip(profile_array(k), self.k_lower, self.k_upper)


@dataclass(frozen=True, eq=False)
class ActionProfile:
    """Joint gain vector, one scalar action per player."""

    k: np.ndarray

    def __post_init__(self):
        k = np.atleast_1d(np.array(self.k, dtype=float))
        if k.ndim != 1:
            raise ValueError(f"action profile must be a vector, got shape {k.shape}")
        object.__setattr__(self, "k", _frozen(k))

    def __len__(self) -> int:
        return self.k.shape[0]


@dataclass(frozen=True, eq=False)
class CostGradientReport:
    """Per-player closed-form quantities at one profile.

    ``resolvent_diag`` holds the diagonal of ``(K - A)^{-1}`` (always
    positive on the stable region), ``cost`` the player costs, ``grad`` the
    stacked own-action partial derivatives, and ``curvature`` the strictly
    positive second derivatives of each cost in its own action.
    """

    resolvent_diag: np.ndarray
    cost: np.ndarray
    grad: np.ndarray
    curvature: np.ndarray


def profile_array(k) -> np.ndarray:
    """Coerce an :class:`ActionProfile` or array-like to a float vector."""
    if isinstance(k, ActionProfile):
        return k.k
    return np.atleast_1d(np.asarray(k, dtype=float))


def _profile(spec: GameSpec, k) -> np.ndarray:
    k = profile_array(k)
    if k.shape != (spec.n,):
        raise ValueError(f"profile has shape {k.shape}, expected ({spec.n},)")
    return k


def _factor(s: np.ndarray):
    """Cholesky-factor a symmetric matrix, raising on non-PD or tiny pivots."""
    try:
        c = scipy.linalg.cho_factor(s, lower=True, check_finite=False)
    except scipy.linalg.LinAlgError as err:
        lam_min = float(np.linalg.eigvalsh(s).min())
        raise NotPositiveDefinite(
            f"K - A is not positive definite (smallest eigenvalue {lam_min:g}); "
            "the closed loop is not stable at this profile"
        ) from err
    pivots = np.diag(c[0]) ** 2
    scale = float(np.max(np.sum(np.abs(s), axis=1)))
    if pivots.min() <= PIVOT_RTOL * scale:
        lam_min = float(np.linalg.eigvalsh(s).min())
        raise NotPositiveDefinite(
            f"K - A is numerically singular (pivot {pivots.min():g} vs scale {scale:g}, "
            f"smallest eigenvalue {lam_min:g})"
        )
    return c


def _is_positive_definite(s: np.ndarray) -> bool:
    try:
        _factor(s)
    except NotPositiveDefinite:
        return False
    return True


def resolvent(spec: GameSpec, k) -> np.ndarray:
    """Return ``M = (K - A)^{-1}``, symmetric positive definite.

    ``K - A`` is factored once; the full inverse is cheap at game sizes and
    houses every player's diagonal entry plus the cross terms needed by
    :func:`pseudogradient_jacobian`.
    """
    k = _profile(spec, k)
    s = np.diag(k) - spec.a
    c = _factor(s)
    m = scipy.linalg.cho_solve(c, np.eye(spec.n), check_finite=False)
    return (m + m.T) / 2.0


def evaluate(spec: GameSpec, k) -> CostGradientReport:
    """Costs, gradients, and curvatures from a single factorization."""
    k = _profile(spec, k)
    f = np.diag(resolvent(spec, k))
    weight = 1.0 + spec.rho * k**2
    j = 0.5 * weight * f
    # grad = rho*k*f - weight*f^2/2, factored so the same (rho*k - J) term
    # appears here and in marginal_cost_from_cost; the two stay within a few
    # ulp of each other even where the gradient crosses zero.
    g = f * (spec.rho * k - j)
    h = f * (spec.rho * (1.0 - k * f) ** 2 + f**2)
    return CostGradientReport(resolvent_diag=f, cost=j, grad=g, curvature=h)


def cost(spec: GameSpec, k) -> np.ndarray:
    """Per-player infinite-horizon costs ``(1 + rho k^2)/2 * M_ii``."""
    return evaluate(spec, k).cost


def exact_gradient(spec: GameSpec, k) -> np.ndarray:
    """Stacked vector of each player's own-action cost derivative."""
    return evaluate(spec, k).grad


def second_derivative(spec: GameSpec, k) -> np.ndarray:
    """Own-action second derivatives, strictly positive on the stable region."""
    return evaluate(spec, k).curvature


def marginal_cost_from_cost(cost_value, gain, tradeoff):
    """Own-action cost derivative recovered from the cost value alone.

    Implements ``2 J / (1 + rho k^2) * (rho k - J)``, which lets a player
    turn a sampled cost estimate into a gradient estimate without any model
    knowledge.  Fed the closed-form cost, it reproduces
    :func:`exact_gradient` to round-off.
    """
    cost_value = np.asarray(cost_value, dtype=float)
    gain = np.asarray(gain, dtype=float)
    tradeoff = np.asarray(tradeoff, dtype=float)
    return 2.0 * cost_value / (1.0 + tradeoff * gain**2) * (tradeoff * gain - cost_value)


def pseudogradient_jacobian(spec: GameSpec, k) -> np.ndarray:
    """Jacobian G of the stacked gradient vector, ``G_ij = d grad_i / d k_j``.

    The diagonal equals :func:`second_derivative`.  Off the diagonal,
    ``d M_ii / d k_j = -M_ij^2`` gives
    ``G_ij = ((1 + rho_i k_i^2) M_ii - rho_i k_i) * M_ij^2``.
    """
    k = _profile(spec, k)
    m = resolvent(spec, k)
    f = np.diag(m)
    weight = 1.0 + spec.rho * k**2
    coeff = weight * f - spec.rho * k
    g = coeff[:, None] * m**2
    np.fill_diagonal(g, f * (spec.rho * (1.0 - k * f) ** 2 + f**2))
    return g


def stability_margin(spec: GameSpec, k) -> float:
    """Smallest eigenvalue of ``K - A``; positive iff the closed loop is stable."""
    k = _profile(spec, k)
    return float(np.linalg.eigvalsh(np.diag(k) - spec.a).min())
