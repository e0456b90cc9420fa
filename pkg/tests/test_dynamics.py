"""Tests for update rules, rollouts, opponents and the continuous reference."""

import math

import numpy as np
import pytest

from altgda.engine import (
    alt_gd_inverse_step,
    alt_gd_stage1,
    alt_gd_stage2,
    alt_gd_step,
    continuous_reference,
    rollout,
    rollout_vs_opponent,
    sim_gd_step,
)
from altgda.errors import ConfigError, DivergenceError, OpponentContractError, StageError
from altgda.metrics import perturbed_energy_series, weighted_energy
from altgda.models import DynamicsMode, GameInstance, JointState, Stage
from altgda.opponents import (
    ConstantOpponent,
    OpponentRegistry,
    RandomOpponent,
    ScriptedOpponent,
    Stage2Opponent,
    ZeroOpponent,
    default_registry,
)


@pytest.fixture
def game60():
    """A=[1], η=(½, ½), start (60, 0)."""
    return GameInstance.build([[1.0]], 0.5, 0.5, [60.0], [0.0])


@pytest.fixture
def random_game():
    rng = np.random.default_rng(11)
    A = rng.uniform(-1, 1, size=(3, 2))
    return GameInstance.build(A, 0.3, 0.2, rng.normal(size=3), rng.normal(size=2))


def xy(s: JointState) -> tuple[float, float]:
    return float(s.x1[0]), float(s.x2[0])


class TestUpdates:
    """Tests for single-step update rules."""

    def test_sim_step(self, game60):
        """Test (60, 0) → (60, −30) → (45, −60)."""
        s1 = sim_gd_step(game60, game60.initial)
        assert xy(s1) == (60.0, -30.0)
        assert s1.t == 1
        assert xy(sim_gd_step(game60, s1)) == (45.0, -60.0)

    def test_stage1(self, game60):
        """Test agent 1's half step examples."""
        assert xy(alt_gd_stage1(game60, game60.initial)) == (60.0, 0.0)
        half = alt_gd_stage1(game60, JointState(x1=[60.0], x2=[-30.0], t=1))
        assert xy(half) == (45.0, -30.0)
        assert half.stage == Stage.HALF
        assert half.t == 1
        s = alt_gd_stage1(game60, JointState(x1=[35.0], x2=[35.0]))
        assert xy(s) == (52.5, 35.0)

    def test_stage2(self, game60):
        """Test agent 2's answer examples."""
        s = alt_gd_stage2(game60, JointState(x1=[45.0], x2=[-30.0], t=1, stage=Stage.HALF))
        assert xy(s) == (45.0, -52.5)
        assert s.t == 2
        assert s.stage == Stage.FULL
        zero = alt_gd_stage2(game60, JointState(x1=[0.0], x2=[7.0], stage=Stage.HALF))
        assert xy(zero) == (0.0, 7.0)

    def test_alt_step(self, game60):
        """Test the composed alternating round."""
        s1 = alt_gd_step(game60, game60.initial)
        assert xy(s1) == (60.0, -30.0)
        assert xy(alt_gd_step(game60, s1)) == (45.0, -52.5)

    def test_origin_is_fixed(self, game60):
        """Test the equilibrium is a fixed point of both rules."""
        origin = JointState(x1=[0.0], x2=[0.0])
        assert xy(sim_gd_step(game60, origin)) == (0.0, 0.0)
        assert xy(alt_gd_step(game60, origin)) == (0.0, 0.0)

    def test_stage_tags_enforced(self, game60):
        """Test updates reject states with the wrong stage."""
        half = JointState(x1=[1.0], x2=[1.0], stage=Stage.HALF)
        with pytest.raises(StageError):
            alt_gd_stage1(game60, half)
        with pytest.raises(StageError):
            sim_gd_step(game60, half)
        with pytest.raises(StageError):
            alt_gd_stage2(game60, game60.initial)

    def test_one_dimensional_linear_map(self):
        """Test the round equals [[1, ηa], [−ηa, 1 − η²a²]] for η₁ = η₂ = η."""
        a, eta = 1.7, 0.3
        game = GameInstance.build([[a]], eta, eta, [0.4], [-1.1])
        M = np.array([[1.0, eta * a], [-eta * a, 1.0 - eta**2 * a**2]])
        expected = M @ np.array([0.4, -1.1])
        np.testing.assert_allclose(xy(alt_gd_step(game, game.initial)), expected, rtol=1e-12)

    def test_inverse_round(self, random_game):
        """Test stepping back recovers the previous Full state."""
        s = alt_gd_step(random_game, alt_gd_step(random_game, random_game.initial))
        back = alt_gd_inverse_step(random_game, s)
        assert back.t == 1
        np.testing.assert_allclose(back.concatenated, alt_gd_step(random_game, random_game.initial).concatenated)

    def test_sim_energy_factor(self, game60):
        """Test ‖x₁‖² + ‖x₂‖² grows by exactly 1.25 per simultaneous step."""
        s = game60.initial
        for _ in range(100):
            before = float(s.x1 @ s.x1 + s.x2 @ s.x2)
            s = sim_gd_step(game60, s)
            after = float(s.x1 @ s.x1 + s.x2 @ s.x2)
            assert after / before == pytest.approx(1.25, rel=1e-12)


class TestRollout:
    """Tests for rollout."""

    def test_alt_layout(self, game60):
        """Test Full and Half states of a two-round alternating rollout."""
        traj = rollout(game60, DynamicsMode.ALT, 2)
        assert len(traj) == 5
        assert [xy(s) for s in traj.full_states()] == [(60.0, 0.0), (60.0, -30.0), (45.0, -52.5)]
        assert [xy(s) for s in traj.half_states()] == [(60.0, 0.0), (45.0, -30.0)]
        assert list(traj.t) == [0, 0, 1, 1, 2]
        assert traj.horizon == 2

    def test_sim_one_round(self, game60):
        """Test one simultaneous round."""
        traj = rollout(game60, DynamicsMode.SIM, 1)
        assert not traj.has_half_states
        assert xy(traj.final) == (60.0, -30.0)

    @pytest.mark.parametrize("mode", [DynamicsMode.ALT, DynamicsMode.SIM])
    def test_origin_stays(self, mode):
        """Test the origin is preserved for 100 rounds."""
        game = GameInstance.build([[1.0]], 0.5, 0.5, [0.0], [0.0])
        traj = rollout(game, mode, 100)
        assert not np.any(traj.points())

    def test_zero_horizon(self, game60):
        """Test T = 0 records only the initial state."""
        traj = rollout(game60, DynamicsMode.ALT, 0)
        assert len(traj) == 1
        assert traj.horizon == 0

    def test_negative_horizon(self, game60):
        """Test T must be nonnegative."""
        with pytest.raises(ValueError):
            rollout(game60, DynamicsMode.ALT, -1)

    def test_matches_single_steps(self, random_game):
        """Test the rollout agrees bitwise with repeated alt_gd_step."""
        traj = rollout(random_game, DynamicsMode.ALT, 50)
        s = random_game.initial
        for full in traj.full_states()[1:]:
            s = alt_gd_step(random_game, s)
            assert np.array_equal(s.x1, full.x1)
            assert np.array_equal(s.x2, full.x2)

    def test_perturbed_energy_conserved(self, game60):
        """Test the perturbed energy stays 7200 over 1e5 alternating rounds."""
        traj = rollout(game60, DynamicsMode.ALT, 100_000)
        energy = perturbed_energy_series(traj)
        assert energy[0] == 7200.0
        assert np.max(np.abs(energy - 7200.0)) / 7200.0 < 1e-6

    def test_sim_divergence(self):
        """Test divergence names the round and carries the states before it."""
        game = GameInstance.build([[1e200]], 1.0, 1.0, [1.0], [1.0])
        with pytest.raises(DivergenceError) as info:
            rollout(game, DynamicsMode.SIM, 5)
        assert info.value.step == 2
        assert info.value.partial is not None
        assert len(info.value.partial) == 2

    def test_alt_divergence(self):
        """Test alternating divergence in the first round leaves only the initial state."""
        game = GameInstance.build([[1e200]], 1.0, 1.0, [1.0], [1.0])
        with pytest.raises(DivergenceError) as info:
            rollout(game, DynamicsMode.ALT, 5)
        assert info.value.step == 1
        assert len(info.value.partial) == 1

    def test_opponent_mode_rejected(self, game60):
        """Test rollout refuses the opponent mode."""
        with pytest.raises(ValueError):
            rollout(game60, DynamicsMode.ALT_VS_OPPONENT, 3)


class TestOpponents:
    """Tests for rollout_vs_opponent and the built-in rules."""

    def test_stage2_reproduces_alt(self, random_game):
        """Test the Stage 2 opponent gives the alternating trajectory bit for bit."""
        alt = rollout(random_game, DynamicsMode.ALT, 200)
        opp = rollout_vs_opponent(random_game, Stage2Opponent(random_game), 200)
        assert np.array_equal(alt.x1, opp.x1)
        assert np.array_equal(alt.x2, opp.x2)
        assert np.array_equal(alt.half, opp.half)
        assert opp.mode == DynamicsMode.ALT_VS_OPPONENT

    def test_constant_opponent(self):
        """Test x₁ᵗ = x₁⁰ + t·η₁·A c when x₂⁰ = c."""
        A = np.array([[1.0, 2.0], [0.0, -1.0]])
        c = np.array([0.5, -0.25])
        game = GameInstance.build(A, 0.1, 0.3, [1.0, 2.0], c)
        traj = rollout_vs_opponent(game, ConstantOpponent(game, {"value": c.tolist()}), 10)
        for t, x1 in enumerate(traj.full_x1()):
            np.testing.assert_allclose(x1, game.initial.x1 + t * 0.1 * (A @ c), rtol=1e-12)

    def test_constant_needs_value(self, game60):
        """Test the constant rule without a value."""
        with pytest.raises(ConfigError):
            ConstantOpponent(game60)

    def test_zero_opponent_freezes_agent1(self):
        """Test x₁ stays put when agent 2 always plays zero from x₂⁰ = 0."""
        game = GameInstance.build([[2.0]], 0.5, 0.5, [3.0], [0.0])
        traj = rollout_vs_opponent(game, ZeroOpponent(game), 20)
        assert np.all(traj.x1 == 3.0)

    def test_random_opponent_is_reproducible(self, random_game):
        """Test reset re-seeds the random rule between rollouts."""
        rule = RandomOpponent(random_game, {"seed": 5})
        first = rollout_vs_opponent(random_game, rule, 30)
        second = rollout_vs_opponent(random_game, rule, 30)
        assert np.array_equal(first.x2, second.x2)

    def test_callable_opponent(self, game60):
        """Test a plain function works as an opponent."""
        traj = rollout_vs_opponent(game60, lambda t, s: np.array([float(t)]), 3)
        assert list(traj.full_x2()[:, 0]) == [0.0, 0.0, 1.0, 2.0]

    @pytest.mark.parametrize(
        "move",
        [np.array([1.0, 2.0]), np.array([np.nan]), "abc"],
    )
    def test_contract_violation(self, game60, move):
        """Test malformed strategies name the offending round."""

        def rule(t, state):
            return np.array([0.0]) if t < 2 else move

        with pytest.raises(OpponentContractError) as info:
            rollout_vs_opponent(game60, rule, 5)
        assert info.value.round_index == 2

    def test_scripted_opponent(self, game60, tmp_path):
        """Test moves replay from a file and running out is a contract violation."""
        script = tmp_path / "moves.txt"
        script.write_text("# moves\n1\n\n-1, \n0.5\n")
        rule = ScriptedOpponent(game60, {"path": script})
        traj = rollout_vs_opponent(game60, rule, 3)
        assert list(traj.full_x2()[:, 0]) == [0.0, 1.0, -1.0, 0.5]
        with pytest.raises(OpponentContractError):
            rollout_vs_opponent(game60, rule, 4)

    def test_scripted_bad_line(self, game60, tmp_path):
        """Test a malformed script line is reported with its line number."""
        script = tmp_path / "moves.txt"
        script.write_text("1\n1 2\n")
        with pytest.raises(ConfigError) as info:
            ScriptedOpponent(game60, {"path": script})
        assert info.value.line == 2


class TestOpponentRegistry:
    """Tests for the OpponentRegistry."""

    def test_default_rules(self):
        """Test every built-in rule is registered."""
        registry = default_registry()
        assert set(registry.get_names()) == {"stage2", "constant", "zero", "scripted", "random"}
        assert "zero" in registry
        assert len(registry) == 5

    def test_unknown_rule(self, game60):
        """Test creating an unregistered rule."""
        with pytest.raises(ConfigError):
            OpponentRegistry().create("stage2", game60)

    def test_duplicate_registration(self):
        """Test names are unique."""
        registry = OpponentRegistry()
        registry.register(ZeroOpponent)
        with pytest.raises(ValueError):
            registry.register(ZeroOpponent)


class TestContinuousReference:
    """Tests for the continuous-time oracle."""

    @pytest.fixture
    def unit_game(self):
        return GameInstance.build([[1.0]], 1.0, 1.0, [1.0], [0.0])

    def test_full_rotation(self, unit_game):
        """Test the flow returns to (1, 0) after 2π."""
        traj = continuous_reference(unit_game, 2 * math.pi, h=1e-3, record_every=1000)
        assert traj.sample_times[-1] == pytest.approx(2 * math.pi)
        assert np.linalg.norm(traj.final.concatenated - np.array([1.0, 0.0])) < 1e-6

    def test_quarter_turn(self, unit_game):
        """Test the exact solution (cos t, −sin t)."""
        traj = continuous_reference(unit_game, math.pi / 2, h=1e-3)
        np.testing.assert_allclose(traj.final.concatenated, [0.0, -1.0], atol=1e-9)

    def test_energy_conserved(self, unit_game):
        """Test ‖x₁‖²/η₁ + ‖x₂‖²/η₂ drifts less than 1e-8 over t = 10."""
        traj = continuous_reference(unit_game, 10.0, h=1e-3, record_every=100)
        energies = [weighted_energy(unit_game, s) for s in traj.states]
        assert max(abs(e - 1.0) for e in energies) < 1e-8

    def test_origin(self):
        """Test the origin stays put."""
        game = GameInstance.build([[1.0]], 1.0, 1.0, [0.0], [0.0])
        traj = continuous_reference(game, 1.0, h=0.1)
        assert not np.any(traj.points())

    def test_sampling(self, unit_game):
        """Test the final substep is always recorded."""
        traj = continuous_reference(unit_game, 1.0, h=0.1, record_every=3)
        assert list(traj.t) == [0, 3, 6, 9, 10]
        assert traj.mode == DynamicsMode.CONTINUOUS

    @pytest.mark.parametrize("kwargs", [{"h": 0.0}, {"h": -1.0}, {"record_every": 0}])
    def test_bad_arguments(self, unit_game, kwargs):
        """Test invalid substeps and sampling."""
        with pytest.raises(ValueError):
            continuous_reference(unit_game, 1.0, **kwargs)

    def test_divergence_between_samples(self):
        """Test an overflow is reported at its substep even when that substep is not recorded."""
        game = GameInstance.build([[1e200]], 1.0, 1.0, [1.0], [1.0])
        with pytest.raises(DivergenceError) as info:
            continuous_reference(game, 1.0, h=0.1, record_every=10)
        assert info.value.step == 1
        assert len(info.value.partial) == 1
        assert list(info.value.partial.t) == [0]

    def test_negative_horizon(self, unit_game):
        """Test t_end must be nonnegative."""
        with pytest.raises(ValueError):
            continuous_reference(unit_game, -1.0)
