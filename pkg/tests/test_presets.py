import numpy as np

from nashlq import (
    FIVE_PLAYER_A,
    FIVE_PLAYER_RHO,
    FIVE_PLAYER_ROUND1_FINAL,
    FIVE_PLAYER_ROUND1_START,
    FIVE_PLAYER_ROUND2_FINAL,
    FIVE_PLAYER_ROUND2_START,
    diagonal_game,
    five_player_game,
    preset_game,
    scalar_game,
    two_player_game,
)
from nashlq.presets import FIVE_PLAYER_BATCH, FIVE_PLAYER_HORIZON, FIVE_PLAYER_STAGES


class TestFivePlayerConstants:
    def test_state_matrix_digits(self):
        # transcription check, literal by literal
        expected = np.array([
            [-0.0342, -0.0111,  0.0095, -0.0012,  0.0118],
            [-0.0111, -0.0627,  0.0098,  0.0155,  0.0254],
            [ 0.0095,  0.0098, -0.0341, -0.0065, -0.0081],
            [-0.0012,  0.0155, -0.0065, -0.0323, -0.0081],
            [ 0.0118,  0.0254, -0.0081, -0.0081, -0.1086],
        ])
        assert np.array_equal(FIVE_PLAYER_A, expected)

    def test_tradeoffs_digits(self):
        assert np.array_equal(FIVE_PLAYER_RHO, [0.5542, 0.2642, 0.4526, 0.0664, 0.7990])

    def test_round_starts_digits(self):
        assert np.array_equal(FIVE_PLAYER_ROUND1_START, [0.69, 4.41, 3.69, 2.39, 4.24])
        assert np.array_equal(FIVE_PLAYER_ROUND2_START, [1.15, 0.53, 2.82, 1.59, 0.54])

    def test_round_finals_digits(self):
        assert np.array_equal(FIVE_PLAYER_ROUND1_FINAL, [1.31, 1.89, 1.46, 3.85, 1.03])
        assert np.array_equal(FIVE_PLAYER_ROUND2_FINAL, [1.29, 1.88, 1.49, 3.85, 1.03])

    def test_protocol_constants(self):
        assert FIVE_PLAYER_STAGES == 250
        assert FIVE_PLAYER_BATCH == 500
        assert FIVE_PLAYER_HORIZON == 200.0

    def test_matrix_structure(self):
        assert np.array_equal(FIVE_PLAYER_A, FIVE_PLAYER_A.T)
        offdiag = np.abs(FIVE_PLAYER_A).sum(axis=1) - np.abs(np.diag(FIVE_PLAYER_A))
        assert np.all(np.abs(np.diag(FIVE_PLAYER_A)) > offdiag)
        assert np.linalg.eigvalsh(FIVE_PLAYER_A).max() < 0

    def test_constants_read_only(self):
        try:
            FIVE_PLAYER_A[0, 0] = 1.0
        except ValueError:
            return
        raise AssertionError("preset constants must be immutable")


class TestPresetGames:
    def test_five_player_game_builds(self):
        spec = five_player_game()
        assert spec.n == 5
        assert np.array_equal(spec.k_lower, np.zeros(5))
        assert spec.contains(FIVE_PLAYER_ROUND1_START)
        assert spec.contains(FIVE_PLAYER_ROUND2_START)

    def test_all_presets_build(self):
        for name, builder in (
            ("scalar", scalar_game),
            ("two-player", two_player_game),
            ("diagonal", diagonal_game),
            ("five-player", five_player_game),
        ):
            assert preset_game(name).n == builder().n

    def test_unknown_preset(self):
        try:
            preset_game("hexagonal")
        except ValueError as err:
            assert "hexagonal" in str(err)
        else:
            raise AssertionError("expected ValueError")
