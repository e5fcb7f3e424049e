import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nashlq import (
    ActionProfile,
    GameSpec,
    NotPositiveDefinite,
    cost,
    evaluate,
    exact_gradient,
    five_player_game,
    marginal_cost_from_cost,
    pseudogradient_jacobian,
    resolvent,
    second_derivative,
    stability_margin,
)
from util import fd_gradient, fd_hessian_diag, fd_jacobian, random_game, rel_gap

# Costs at the published round-1 stage-250 gains of the 5-player benchmark,
# frozen from a dense-solve oracle (np.linalg.solve on K - A).
TABLE_POINT = np.array([1.31, 1.89, 1.46, 3.85, 1.03])
F_GOLDEN = np.array([
    0.7440706685115461,
    0.5123148101651842,
    0.6693802084342813,
    0.2575929682083571,
    0.8786490094439168,
])
J_GOLDEN = np.array([
    0.7258642339856444,
    0.4979056538635504,
    0.6575864520922943,
    0.2555597869102885,
    0.8117219190025193,
])


def scalar_spec(rho):
    return GameSpec(a=[[-1.0]], rho=rho, k_upper=5.0)


class TestResolvent:
    def test_diagonal_decoupled(self):
        spec = GameSpec(a=np.diag([-2.0, -3.0]), rho=0.0, k_upper=5.0)
        m = resolvent(spec, [0.0, 0.0])
        assert np.allclose(m, np.diag([0.5, 1.0 / 3.0]), rtol=1e-14, atol=0)

    def test_two_by_two_adjugate(self):
        spec = GameSpec(a=[[-2.0, -0.5], [-0.5, -2.0]], rho=0.0, k_upper=5.0)
        m = resolvent(spec, [0.0, 0.0])
        expected = np.array([[2.0, -0.5], [-0.5, 2.0]]) / 3.75
        assert np.allclose(m, expected, rtol=1e-14, atol=0)

    def test_identity_case(self):
        spec = GameSpec(a=-np.eye(3), rho=0.0, k_upper=5.0)
        assert np.allclose(resolvent(spec, np.zeros(3)), np.eye(3), rtol=1e-14, atol=1e-15)

    def test_inverse_and_symmetry(self):
        spec, k = random_game(11)
        m = resolvent(spec, k)
        s = np.diag(k) - spec.a
        assert np.max(np.abs(s @ m - np.eye(spec.n))) < 1e-10
        assert np.array_equal(m, m.T)
        assert np.linalg.eigvalsh(m).min() > 0

    def test_unstable_profile_raises(self):
        spec = GameSpec(a=[[1.0, 0.0], [0.0, -1.0]], rho=0.0, k_upper=5.0)
        with pytest.raises(NotPositiveDefinite, match="eigenvalue"):
            resolvent(spec, [0.0, 0.0])


class TestCost:
    def test_scalar_unit_tradeoff(self):
        report = evaluate(scalar_spec(1.0), [1.0])
        assert report.resolvent_diag[0] == pytest.approx(0.5, rel=1e-14)
        assert report.cost[0] == pytest.approx(0.5, rel=1e-14)

    def test_scalar_zero_tradeoff(self):
        # J = 1/(2(k - a)) when rho = 0
        assert cost(scalar_spec(0.0), [1.0])[0] == pytest.approx(0.25, rel=1e-14)

    def test_five_player_golden_values(self):
        spec = five_player_game()
        report = evaluate(spec, TABLE_POINT)
        assert rel_gap(report.resolvent_diag, F_GOLDEN) < 1e-13
        assert rel_gap(report.cost, J_GOLDEN) < 1e-13

    def test_golden_values_match_dense_solve(self):
        spec = five_player_game()
        m = np.linalg.solve(np.diag(TABLE_POINT) - spec.a, np.eye(5))
        f = np.diag(m)
        assert np.array_equal(0.5 * (1 + spec.rho * TABLE_POINT**2) * f, J_GOLDEN)

    def test_report_cost_identity_bitwise(self):
        spec, k = random_game(3)
        report = evaluate(spec, k)
        weight = 1.0 + spec.rho * k**2
        assert np.array_equal(report.cost, 0.5 * weight * report.resolvent_diag)


class TestGradient:
    def test_scalar_unit_tradeoff(self):
        assert exact_gradient(scalar_spec(1.0), [1.0])[0] == pytest.approx(0.25, rel=1e-14)

    def test_scalar_zero_tradeoff(self):
        assert exact_gradient(scalar_spec(0.0), [1.0])[0] == pytest.approx(-0.125, rel=1e-14)

    @pytest.mark.parametrize("seed", range(30))
    def test_matches_central_differences(self, seed):
        spec, k = random_game(seed)
        assert rel_gap(fd_gradient(spec, k), exact_gradient(spec, k)) < 1e-6

    def test_resolvent_diag_self_derivative(self):
        # d f_i / d k_i = -f_i^2, the i = j case of the cross-derivative rule
        spec, k = random_game(7)
        f = np.diag(resolvent(spec, k))
        h = 1e-5
        for i in range(spec.n):
            bump = np.zeros(spec.n)
            bump[i] = h
            fd = (
                resolvent(spec, k + bump)[i, i] - resolvent(spec, k - bump)[i, i]
            ) / (2 * h)
            assert abs(fd + f[i] ** 2) / f[i] ** 2 < 1e-6


class TestMarginalCost:
    def test_unit_tradeoff(self):
        assert marginal_cost_from_cost(0.5, 1.0, 1.0) == 0.25

    def test_zero_tradeoff(self):
        assert marginal_cost_from_cost(0.25, 1.0, 0.0) == -0.125

    @given(st.integers(0, 10**6))
    def test_identity_within_ulps(self, seed):
        spec, k = random_game(seed)
        g = exact_gradient(spec, k)
        m = marginal_cost_from_cost(cost(spec, k), k, spec.rho)
        assert np.all(np.abs(m - g) <= 4 * np.spacing(np.abs(g)))


class TestSecondDerivative:
    def test_scalar_zero_tradeoff_at_origin(self):
        # rho = 0 reduces to f^3; f = 1 at k = 0
        assert second_derivative(scalar_spec(0.0), [0.0])[0] == pytest.approx(1.0, rel=1e-14)

    def test_scalar_unit_tradeoff(self):
        assert second_derivative(scalar_spec(1.0), [1.0])[0] == pytest.approx(0.25, rel=1e-14)

    @pytest.mark.parametrize("seed", range(30))
    def test_matches_second_differences(self, seed):
        spec, k = random_game(seed + 100)
        assert rel_gap(fd_hessian_diag(spec, k), second_derivative(spec, k)) < 1e-4

    @given(st.integers(0, 10**6))
    def test_strictly_positive(self, seed):
        spec, k = random_game(seed)
        report = evaluate(spec, k)
        assert np.all(report.resolvent_diag > 0)
        assert np.all(report.cost > 0)
        assert np.all(report.curvature > 0)


class TestJacobian:
    def test_diagonal_system_decouples(self):
        spec = GameSpec(a=np.diag([-1.0, -2.0, -3.0]), rho=[0.3, 0.0, 1.0], k_upper=5.0)
        g = pseudogradient_jacobian(spec, [0.5, 1.0, 2.0])
        off = g - np.diag(np.diag(g))
        assert np.array_equal(off, np.zeros((3, 3)))

    def test_diagonal_equals_second_derivative(self):
        spec, k = random_game(5)
        g = pseudogradient_jacobian(spec, k)
        assert np.array_equal(np.diag(g), second_derivative(spec, k))

    @pytest.mark.parametrize("seed", range(20))
    def test_columns_match_differenced_gradients(self, seed):
        spec, k = random_game(seed + 300)
        g = pseudogradient_jacobian(spec, k)
        fd = fd_jacobian(spec, k)
        for j in range(spec.n):
            assert rel_gap(fd[:, j], g[:, j]) < 1e-5

    @pytest.mark.parametrize("seed", range(10))
    def test_two_player_closed_form(self, seed):
        # For two players with zero tradeoffs, G + G^T has the closed form
        # (1/nu^3) [[2 d2^3, a12^2 (d1 + d2)], [a12^2 (d1 + d2), 2 d1^3]]
        # with d_i = k_i - a_ii and nu = d1 d2 - a12^2.
        spec, k = random_game(seed + 600, n=2, rho_zero=True)
        a11, a12, a22 = spec.a[0, 0], spec.a[0, 1], spec.a[1, 1]
        d1, d2 = k[0] - a11, k[1] - a22
        nu = d1 * d2 - a12**2
        expected = np.array(
            [
                [2 * d2**3, a12**2 * (d1 + d2)],
                [a12**2 * (d1 + d2), 2 * d1**3],
            ]
        ) / nu**3
        g = pseudogradient_jacobian(spec, k)
        assert np.allclose(g + g.T, expected, rtol=1e-12, atol=0)


class TestDecoupledEquilibrium:
    def test_stationary_gain_formula(self):
        # With diagonal A each player solves alone: the interior stationary
        # point of 2 rho k (k - a) = 1 + rho k^2 is k = a + sqrt(a^2 + 1/rho).
        diag = np.array([-1.0, -2.0, -0.5])
        rho = np.array([1.0, 0.5, 2.0])
        spec = GameSpec(a=np.diag(diag), rho=rho, k_upper=10.0)
        k_star = diag + np.sqrt(diag**2 + 1.0 / rho)
        assert spec.contains(k_star)
        assert np.max(np.abs(exact_gradient(spec, k_star))) < 1e-15

    def test_zero_tradeoff_has_no_interior_stationary_point(self):
        spec = GameSpec(a=np.diag([-1.0, -2.0]), rho=0.0, k_upper=10.0)
        assert np.all(exact_gradient(spec, spec.k_upper) < 0)


class TestStabilityMargin:
    def test_identity(self):
        spec = GameSpec(a=-np.eye(2), rho=0.0, k_upper=5.0)
        assert stability_margin(spec, [0.0, 0.0]) == 1.0

    def test_sign_flip(self):
        spec = GameSpec(a=[[1.0, 0.0], [0.0, -1.0]], rho=0.0, k_upper=5.0)
        assert stability_margin(spec, [0.0, 0.0]) == -1.0

    def test_five_player_matrix_is_negative_definite(self):
        spec = five_player_game()
        assert stability_margin(spec, np.zeros(5)) > 0
        assert np.linalg.eigvalsh(spec.a).max() < 0


class TestGameSpec:
    def test_roundoff_asymmetry_is_averaged(self):
        a = np.array([[-2.0, 0.3], [0.3 + 1e-12, -2.0]])
        spec = GameSpec(a=a, rho=0.0, k_upper=5.0)
        assert np.array_equal(spec.a, spec.a.T)

    def test_large_asymmetry_rejected(self):
        with pytest.raises(ValueError, match="symmetric"):
            GameSpec(a=[[-2.0, 0.5], [-0.5, -2.0]], rho=0.0, k_upper=5.0)

    def test_negative_rho_rejected(self):
        with pytest.raises(ValueError, match="rho"):
            GameSpec(a=[[-1.0]], rho=-0.5, k_upper=5.0)

    def test_empty_box_rejected(self):
        with pytest.raises(ValueError, match="box"):
            GameSpec(a=[[-1.0]], rho=0.0, k_upper=1.0, k_lower=2.0)

    def test_unstable_matrix_lifts_lower_bounds(self):
        spec = GameSpec(a=[[1.0, 0.0], [0.0, -1.0]], rho=0.0, k_upper=5.0)
        assert np.allclose(spec.k_lower, [1.0 + 1e-6, 0.0], rtol=0, atol=1e-12)
        assert stability_margin(spec, spec.k_lower) > 0

    def test_lift_accounts_for_coupling(self):
        spec = GameSpec(a=[[0.5, 0.2], [0.2, -3.0]], rho=0.0, k_upper=5.0)
        assert np.allclose(spec.k_lower, [0.7 + 1e-6, 0.0], rtol=0, atol=1e-12)
        assert stability_margin(spec, spec.k_lower) > 0

    def test_lift_failure_when_box_empties(self):
        with pytest.raises(ValueError, match="box"):
            GameSpec(a=[[1.0, 0.0], [0.0, -1.0]], rho=0.0, k_upper=0.5)

    def test_scalar_broadcasting(self):
        spec = GameSpec(a=[[-1.0]], rho=1.0, k_upper=3.0)
        assert spec.rho.shape == (1,) and spec.k_upper.shape == (1,)

    def test_wrong_profile_shape_rejected(self):
        spec = five_player_game()
        with pytest.raises(ValueError, match="shape"):
            cost(spec, [1.0, 2.0])

    def test_accepts_action_profile_objects(self):
        spec = scalar_spec(1.0)
        assert cost(spec, ActionProfile([1.0]))[0] == pytest.approx(0.5, rel=1e-14)
