"""Tests for utilities, energies and regret."""

import numpy as np
import pytest

from altgda.engine import rollout, rollout_vs_opponent
from altgda.errors import DimensionMismatchError, MissingHalfStatesError, StageError, WrongModeError
from altgda.metrics import (
    cumulative_utility_alt,
    cumulative_utility_series,
    cumulative_utility_sim,
    energy_delta_agent1,
    energy_delta_agent2,
    energy_step_identity,
    energy_identity_residuals,
    perturbed_energy,
    regret_alt_closed_form,
    regret_alt_summed,
    regret_bound,
    regret_report,
    regret_series,
    regret_sim_summed,
    regret_tolerance,
    weighted_energy,
)
from altgda.models import DynamicsMode, GameInstance, JointState, Stage
from altgda.numerics import spectral_norm
from altgda.opponents import ConstantOpponent, RandomOpponent, ScriptedOpponent


@pytest.fixture
def game60():
    return GameInstance.build([[1.0]], 0.5, 0.5, [60.0], [0.0])


def random_games(count: int, seed: int = 2024):
    """Random games up to 5×5 with entries in [-1, 1] and safe step sizes."""
    rng = np.random.default_rng(seed)
    for _ in range(count):
        k1, k2 = (int(k) for k in rng.integers(1, 6, size=2))
        A = rng.uniform(-1.0, 1.0, size=(k1, k2))
        norm = max(spectral_norm(A), 1e-3)
        geometric = rng.uniform(0.2, 1.8) / norm
        ratio = rng.uniform(0.25, 4.0)
        eta1, eta2 = geometric * np.sqrt(ratio), geometric / np.sqrt(ratio)
        yield rng, GameInstance.build(A, eta1, eta2, rng.normal(size=k1), rng.normal(size=k2))


class TestUtility:
    """Tests for cumulative utilities."""

    def test_sim_single_state(self):
        """Test a zero-round simultaneous run sums its initial payoff."""
        game = GameInstance.build([[1.0]], 0.5, 0.5, [35.0], [35.0])
        assert cumulative_utility_sim(rollout(game, DynamicsMode.SIM, 0)) == 1225.0

    def test_alt_two_rounds(self, game60):
        """Test (60 + 60)·0 + (45 + 60)·(−30) = −3150."""
        traj = rollout(game60, DynamicsMode.ALT, 2)
        assert cumulative_utility_alt(traj) == pytest.approx(-3150.0)
        np.testing.assert_allclose(cumulative_utility_series(traj), [0.0, 0.0, -3150.0])

    def test_alt_equals_telescoped_norm(self, game60):
        """Test the alternating utility equals (‖x₁ᵀ‖² − ‖x₁⁰‖²)/η₁."""
        traj = rollout(game60, DynamicsMode.ALT, 2)
        assert cumulative_utility_alt(traj) == pytest.approx((45.0**2 - 60.0**2) / 0.5)

    def test_alt_without_rounds(self, game60):
        """Test a zero-round alternating run has utility 0."""
        assert cumulative_utility_alt(rollout(game60, DynamicsMode.ALT, 0)) == 0.0

    def test_mode_checks(self, game60):
        """Test each utility rejects the other dynamic."""
        with pytest.raises(WrongModeError):
            cumulative_utility_sim(rollout(game60, DynamicsMode.ALT, 2))
        with pytest.raises(MissingHalfStatesError):
            cumulative_utility_alt(rollout(game60, DynamicsMode.SIM, 2))

    def test_sim_series_is_inclusive(self, game60):
        """Test the simultaneous running sum includes the current state."""
        traj = rollout(game60, DynamicsMode.SIM, 2)
        # payoffs: 0, 60·(−30), 45·(−60)
        np.testing.assert_allclose(cumulative_utility_series(traj), [0.0, -1800.0, -4500.0])


class TestEnergy:
    """Tests for energies and the per-step identities."""

    def test_weighted_and_perturbed(self, game60):
        """Test 7200 at (60, 0) and at (60, −30), where the weighted energy is 9000."""
        s0 = game60.initial
        s1 = JointState(x1=[60.0], x2=[-30.0], t=1)
        assert weighted_energy(game60, s0) == 7200.0
        assert perturbed_energy(game60, s0) == 7200.0
        assert perturbed_energy(game60, s1) == 7200.0
        assert weighted_energy(game60, s1) == 9000.0

    def test_perturbed_needs_full_state(self, game60):
        """Test the perturbed energy of a Half state."""
        with pytest.raises(StageError):
            perturbed_energy(game60, JointState(x1=[1.0], x2=[1.0], stage=Stage.HALF))

    def test_agent1_identity_example(self, game60):
        """Test (60, −30) → Half(45, −30) gives −3150 on both sides."""
        before = JointState(x1=[60.0], x2=[-30.0], t=1)
        half = JointState(x1=[45.0], x2=[-30.0], t=1, stage=Stage.HALF)
        lhs, rhs = energy_delta_agent1(game60, before, half)
        assert lhs == pytest.approx(-3150.0)
        assert rhs == pytest.approx(-3150.0)

    def test_agent2_identity_example(self, game60):
        """Test Half(45, −30) → (45, −52.5)."""
        half = JointState(x1=[45.0], x2=[-30.0], t=1, stage=Stage.HALF)
        after = JointState(x1=[45.0], x2=[-52.5], t=2)
        lhs, rhs = energy_delta_agent2(game60, half, after)
        assert lhs == pytest.approx((52.5**2 - 30.0**2) / 0.5)
        assert lhs == pytest.approx(rhs)

    def test_round_identity(self, game60):
        """Test the weighted energy change equals the payoff drop."""
        s0 = game60.initial
        s1 = JointState(x1=[60.0], x2=[-30.0], t=1)
        lhs, rhs = energy_step_identity(game60, s0, s1)
        assert lhs == pytest.approx(1800.0)
        assert rhs == pytest.approx(1800.0)

    def test_stage_roles(self, game60):
        """Test identities reject states with the wrong stage."""
        with pytest.raises(StageError):
            energy_delta_agent1(game60, game60.initial, game60.initial)

    def test_residuals_on_random_games(self):
        """Test both identities on random games over 1000 rounds."""
        for _, game in random_games(200):
            res = energy_identity_residuals(rollout(game, DynamicsMode.ALT, 1000))
            worst = res.worst()
            assert worst["agent1"] < 1e-9
            assert worst["agent2"] < 1e-9
            assert worst["combined"] < 1e-9
            assert res.holds()

    def test_agent1_identity_against_opponents(self, tmp_path):
        """Test agent 1's identity holds whatever agent 2 plays."""
        for i, (rng, game) in enumerate(random_games(20, seed=99)):
            k2 = game.matrix.cols
            script = tmp_path / f"moves_{i}.txt"
            script.write_text("\n".join(", ".join(str(v) for v in rng.normal(size=k2)) for _ in range(200)))
            rules = [
                RandomOpponent(game, {"seed": i, "scale": 3.0}),
                ConstantOpponent(game, {"value": rng.normal(size=k2).tolist()}),
                ScriptedOpponent(game, {"path": script}),
            ]
            for rule in rules:
                res = energy_identity_residuals(rollout_vs_opponent(game, rule, 200))
                assert not res.agent2_applies
                assert res.worst()["agent1"] < 1e-9
                assert res.holds()

    def test_residuals_need_half_states(self, game60):
        """Test simultaneous runs have no per-stage identities."""
        with pytest.raises(MissingHalfStatesError):
            energy_identity_residuals(rollout(game60, DynamicsMode.SIM, 3))


class TestRegret:
    """Tests for regret."""

    def test_two_round_example(self, game60):
        """Test regret against 0 is minus the utility, 3150, below the bound 7200."""
        traj = rollout(game60, DynamicsMode.ALT, 2)
        assert regret_alt_summed(traj, [0.0]) == pytest.approx(3150.0)
        assert regret_alt_closed_form(game60, [0.0], [60.0], [45.0]) == pytest.approx(3150.0)
        assert regret_bound(game60, [0.0], [60.0]) == pytest.approx(7200.0)

    def test_report(self, game60):
        """Test the report agrees and respects the bound."""
        report = regret_report(rollout(game60, DynamicsMode.ALT, 2), [0.0])
        assert report.summed_regret == pytest.approx(3150.0)
        assert report.closed_form_regret == pytest.approx(3150.0)
        assert report.agrees
        assert report.within_bound
        assert report.horizon == 2

    def test_series_alignment(self, game60):
        """Test the alternating series starts at 0 and ends at the summed regret."""
        traj = rollout(game60, DynamicsMode.ALT, 5)
        series = regret_series(traj, [1.5])
        assert series.shape == (6,)
        assert series[0] == 0.0
        assert series[-1] == regret_alt_summed(traj, [1.5])

    def test_sim_regret(self, game60):
        """Test simultaneous regret against 0 is minus the cumulative utility."""
        traj = rollout(game60, DynamicsMode.SIM, 2)
        assert regret_sim_summed(traj, [0.0]) == pytest.approx(4500.0)
        with pytest.raises(WrongModeError):
            regret_report(traj, [0.0])
        with pytest.raises(WrongModeError):
            regret_sim_summed(rollout(game60, DynamicsMode.ALT, 2), [0.0])

    def test_alt_regret_needs_half_states(self, game60):
        """Test alternating summed regret rejects a simultaneous run."""
        traj = rollout(game60, DynamicsMode.SIM, 2)
        with pytest.raises(MissingHalfStatesError):
            regret_alt_summed(traj, [0.0])

    def test_comparator_length(self, game60):
        """Test a wrong-length comparator."""
        with pytest.raises(DimensionMismatchError):
            regret_series(rollout(game60, DynamicsMode.ALT, 2), [0.0, 1.0])

    def test_closed_form_on_random_games(self):
        """Test summed = closed form ≤ bound at every horizon for many comparators."""
        for rng, game in random_games(200, seed=7):
            traj = rollout(game, DynamicsMode.ALT, 1000)
            first = traj.x1[0]
            lasts = traj.full_x1()
            largest = lasts[np.argmax(np.einsum("ij,ij->i", lasts, lasts))]
            norms = np.einsum("ij,ij->i", lasts, lasts)
            for x in rng.normal(scale=3.0, size=(100, game.matrix.rows)):
                series = regret_series(traj, x)
                # closed form at every horizon, vectorised
                closed = (2.0 * lasts @ x - norms - (2.0 * x - first) @ first) / game.eta1
                bound = regret_bound(game, x, first)
                tol = regret_tolerance(game, bound, largest)
                assert np.max(np.abs(series - closed)) <= tol
                assert np.max(np.maximum(series, closed)) <= bound + tol

    def test_opponent_independence(self):
        """Test the closed form holds against an arbitrary opponent."""
        game = GameInstance.build([[1.0, -0.5]], 0.4, 0.4, [2.0], [0.5, 0.5])
        traj = rollout_vs_opponent(game, RandomOpponent(game, {"seed": 3}), 300)
        report = regret_report(traj, [1.0])
        assert report.agrees
        assert report.within_bound
