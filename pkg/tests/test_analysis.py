"""Tests for step-size safety, orbit bounds, volume preservation and recurrence."""

import math

import numpy as np
import pytest

from altgda.analysis import (
    check_injectivity,
    check_orbit_bounds,
    conic_classify_1d,
    conic_value_1d,
    default_epsilon,
    jacobian_altgd,
    jacobian_simgd,
    jacobian_stage1,
    jacobian_stage2,
    recurrence_scan,
    rotation_angle_2d,
    rotation_period,
    stepsize_safety,
    volume_track,
)
from altgda.engine import rollout
from altgda.errors import DimensionMismatchError, WrongModeError
from altgda.harness import cat_cloud
from altgda.models import ConicType, DynamicsMode, GameInstance, JointState, StepSizes
from altgda.numerics import det, spectral_norm


@pytest.fixture
def fig1_game():
    """A=[1], η=(½, ½), start (35, 35)."""
    return GameInstance.build([[1.0]], 0.5, 0.5, [35.0], [35.0])


UNIT_SQUARE = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]


class TestStepsizeSafety:
    """Tests for the safety certificate."""

    def test_fig1_constants(self, fig1_game):
        """Test upper_rhs 6125, lower_rhs 3675 and caps 6125/1.5."""
        cert = stepsize_safety(fig1_game)
        assert cert.spectral_norm == pytest.approx(1.0)
        assert cert.safety_margin == pytest.approx(1.5)
        assert cert.safe
        assert cert.upper_rhs == pytest.approx(6125.0)
        assert cert.lower_rhs == pytest.approx(3675.0)
        assert cert.per_agent_caps[0] == pytest.approx(4083.333333, rel=1e-9)
        assert cert.per_agent_caps[1] == pytest.approx(4083.333333, rel=1e-9)

    def test_implied_norm_bounds(self, fig1_game):
        """Test the bounds on ‖x₁‖² + ‖x₂‖² are 1470 and 4083.33."""
        cert = stepsize_safety(fig1_game)
        # W = 2(‖x₁‖² + ‖x₂‖²) for η₁ = η₂ = ½
        assert cert.upper_rhs / (cert.upper_coefficient * 2.0) == pytest.approx(4083.3333, rel=1e-6)
        assert cert.lower_rhs / (cert.lower_coefficient * 2.0) == pytest.approx(1470.0)

    def test_boundary_is_unsafe(self):
        """Test √(η₁η₂)‖A‖ = 2 counts as unsafe with infinite caps."""
        cert = stepsize_safety(GameInstance.build([[1.0]], 2.0, 2.0, [1.0], [0.0]))
        assert cert.safety_margin == pytest.approx(0.0, abs=1e-12)
        assert not cert.safe
        assert cert.per_agent_caps == (math.inf, math.inf)
        unsafe = stepsize_safety(GameInstance.build([[1.0]], 3.0, 3.0, [1.0], [0.0]))
        assert not unsafe.safe
        assert unsafe.per_agent_caps == (math.inf, math.inf)


class TestOrbitBounds:
    """Tests for check_orbit_bounds."""

    def test_fig1_long_run(self, fig1_game):
        """Test 1470 ≤ ‖x₁ᵗ‖² + ‖x₂ᵗ‖² ≤ 4083.34 over 1e4 rounds."""
        traj = rollout(fig1_game, DynamicsMode.ALT, 10_000)
        check = check_orbit_bounds(traj, stepsize_safety(fig1_game))
        assert check.all_passed
        assert not check.vacuous
        assert check.first_failure is None
        sq = np.sum(traj.full_x1() ** 2, axis=1) + np.sum(traj.full_x2() ** 2, axis=1)
        assert sq.min() >= 1470.0 - 1e-6
        assert sq.max() <= 4083.34
        assert check.max_half_weighted_energy is not None

    def test_random_safe_games_long_run(self):
        """Test every Full state satisfies the bounds over 1e5 rounds of random safe games."""
        rng = np.random.default_rng(31)
        for _ in range(10):
            k1, k2 = (int(k) for k in rng.integers(1, 5, size=2))
            A = rng.uniform(-1.0, 1.0, size=(k1, k2))
            geometric = rng.uniform(0.2, 1.8) / max(spectral_norm(A), 1e-3)
            ratio = rng.uniform(0.25, 4.0)
            eta1, eta2 = geometric * np.sqrt(ratio), geometric / np.sqrt(ratio)
            game = GameInstance.build(A, eta1, eta2, rng.normal(size=k1), rng.normal(size=k2))
            cert = stepsize_safety(game)
            assert cert.safe
            check = check_orbit_bounds(rollout(game, DynamicsMode.ALT, 100_000), cert)
            assert not check.vacuous
            assert check.all_passed, check.first_failure

    def test_vacuous_bounds_pass_with_warning(self):
        """Test unsafe step sizes give vacuous but passing upper bounds."""
        game = GameInstance.build([[1.0]], 3.0, 3.0, [1.0], [0.0])
        traj = rollout(game, DynamicsMode.ALT, 5)
        check = check_orbit_bounds(traj, stepsize_safety(game))
        assert check.vacuous
        assert check.warning is not None
        assert bool(np.all(check.upper_ok))

    def test_alternating_only(self, fig1_game):
        """Test simultaneous runs are rejected."""
        traj = rollout(fig1_game, DynamicsMode.SIM, 5)
        with pytest.raises(WrongModeError):
            check_orbit_bounds(traj, stepsize_safety(fig1_game))


class TestConic:
    """Tests for the 1-D conic classification."""

    @pytest.mark.parametrize(
        "eta, expected",
        [(0.5, ConicType.ELLIPSE), (2.0, ConicType.PARABOLA), (3.0, ConicType.HYPERBOLA)],
    )
    def test_classify(self, eta, expected):
        """Test the sign of a² − 4/(η₁η₂)."""
        assert conic_classify_1d(1.0, StepSizes(eta1=eta, eta2=eta)) == expected

    def test_value_constant_along_orbit(self, fig1_game):
        """Test the conic value is conserved at every Full state."""
        traj = rollout(fig1_game, DynamicsMode.ALT, 200)
        values = [conic_value_1d(1.0, fig1_game.steps, float(a), float(b)) for a, b in traj.points()[~traj.half]]
        np.testing.assert_allclose(values, 6125.0, rtol=1e-12)


class TestJacobians:
    """Tests for Jacobians and volume preservation."""

    def test_fig_values(self, fig1_game):
        """Test the 1-D stage, alternating and simultaneous Jacobians."""
        np.testing.assert_array_equal(jacobian_stage1(fig1_game).entries, [[1.0, 0.5], [0.0, 1.0]])
        np.testing.assert_array_equal(jacobian_stage2(fig1_game).entries, [[1.0, 0.0], [-0.5, 1.0]])
        np.testing.assert_allclose(jacobian_altgd(fig1_game).entries, [[1.0, 0.5], [-0.5, 0.75]])
        assert det(jacobian_altgd(fig1_game)) == pytest.approx(1.0, abs=1e-12)
        assert det(jacobian_simgd(fig1_game)) == pytest.approx(1.25)

    def test_random_games(self):
        """Test det = 1 for alternating and det(I + η₁η₂AᵀA) ≥ 1 for simultaneous play."""
        rng = np.random.default_rng(5)
        for _ in range(100):
            k1, k2 = (int(k) for k in rng.integers(1, 6, size=2))
            A = rng.uniform(-1.0, 1.0, size=(k1, k2))
            eta1, eta2 = rng.uniform(0.05, 1.0, size=2)
            game = GameInstance.build(A, eta1, eta2, np.zeros(k1), np.zeros(k2))
            assert abs(det(jacobian_altgd(game)) - 1.0) <= 1e-12
            expected = np.linalg.det(np.eye(k2) + eta1 * eta2 * A.T @ A)
            sim = det(jacobian_simgd(game))
            assert sim == pytest.approx(expected, rel=1e-9)
            assert sim >= 1.0 - 1e-12

    def test_injectivity(self):
        """Test a round stepped back returns its start."""
        rng = np.random.default_rng(8)
        A = rng.normal(size=(3, 4))
        game = GameInstance.build(A, 0.3, 0.6, rng.normal(size=3), rng.normal(size=4))
        assert check_injectivity(game, JointState(x1=rng.normal(size=3), x2=rng.normal(size=4)))


class TestVolumeTrack:
    """Tests for hull-area tracking."""

    def test_sim_unit_square(self, fig1_game):
        """Test the simultaneous map scales area by 1.25 per step."""
        track = volume_track(fig1_game, UNIT_SQUARE, DynamicsMode.SIM, 5)
        np.testing.assert_allclose(track.areas, 1.25 ** np.arange(6), rtol=1e-12)

    def test_alt_unit_square(self, fig1_game):
        """Test the alternating map preserves area."""
        track = volume_track(fig1_game, UNIT_SQUARE, DynamicsMode.ALT, 50)
        assert track.relative_drift < 1e-9

    def test_cat_cloud_presets(self):
        """Test the fig4 cloud: constant area for alt, ×1.04 per step for sim."""
        game = GameInstance.build([[1.0]], 0.2, 0.2, [2.0], [0.0])
        cloud = cat_cloud()
        alt = volume_track(game, cloud, DynamicsMode.ALT, 24, snapshot_every=4)
        assert list(alt.steps) == [0, 4, 8, 12, 16, 20, 24]
        assert alt.relative_drift < 1e-9
        sim = volume_track(game, cloud, DynamicsMode.SIM, 24)
        np.testing.assert_allclose(sim.growth_factors, 1.04, rtol=1e-9)
        assert len(sim.clouds) == 25

    def test_degenerate_cloud(self, fig1_game):
        """Test collinear clouds are flagged."""
        track = volume_track(fig1_game, [(0, 0), (1, 1), (2, 2)], DynamicsMode.ALT, 3)
        assert track.degenerate
        assert np.all(track.areas == 0.0)

    def test_last_step_recorded(self, fig1_game):
        """Test n_steps is recorded even off the snapshot grid."""
        track = volume_track(fig1_game, UNIT_SQUARE, DynamicsMode.ALT, 10, snapshot_every=4)
        assert list(track.steps) == [0, 4, 8, 10]

    def test_rejections(self, fig1_game):
        """Test larger games and other dynamics are rejected."""
        game = GameInstance.build([[1.0, 0.0]], 0.5, 0.5, [1.0], [0.0, 0.0])
        with pytest.raises(DimensionMismatchError):
            volume_track(game, UNIT_SQUARE, DynamicsMode.ALT, 3)
        with pytest.raises(WrongModeError):
            volume_track(fig1_game, UNIT_SQUARE, DynamicsMode.CONTINUOUS, 3)


class TestRecurrence:
    """Tests for near-return detection."""

    def test_rotation_angle(self, fig1_game):
        """Test θ = arccos(0.875) and a period of about 12.43 rounds."""
        theta = rotation_angle_2d(fig1_game)
        assert theta == pytest.approx(math.acos(0.875))
        assert theta == pytest.approx(0.50536, abs=1e-5)
        assert rotation_period(theta) == pytest.approx(12.43, abs=0.01)

    def test_small_step_limit(self):
        """Test θ approaches √(η₁η₂)·a as the step sizes shrink."""
        game = GameInstance.build([[2.0]], 1e-3, 1e-3, [1.0], [0.0])
        assert rotation_angle_2d(game) == pytest.approx(2e-3, rel=1e-6)

    def test_degenerate_and_hyperbolic(self):
        """Test trace −2 gives π and trace < −2 is rejected."""
        parabola = GameInstance.build([[1.0]], 2.0, 2.0, [1.0], [0.0])
        assert rotation_angle_2d(parabola) == pytest.approx(math.pi)
        hyperbola = GameInstance.build([[1.0]], 3.0, 3.0, [1.0], [0.0])
        with pytest.raises(ValueError):
            rotation_angle_2d(hyperbola)

    def test_fig1_returns(self, fig1_game):
        """Test the fig1 orbit comes back within 1% of its start, near multiples of the period."""
        traj = rollout(fig1_game, DynamicsMode.ALT, 10_000)
        report = recurrence_scan(traj)
        assert report.epsilon == pytest.approx(0.01 * math.hypot(35.0, 35.0))
        assert report.recurred
        assert report.min_distance_seen < report.epsilon
        period = rotation_period(rotation_angle_2d(fig1_game))
        for t in report.return_times:
            k = round(t / period)
            assert abs(t - k * period) < 0.5
        assert report.return_times == sorted(set(report.return_times))

    def test_parallel_scan_matches(self, fig1_game):
        """Test the threaded scan gives the same report."""
        traj = rollout(fig1_game, DynamicsMode.ALT, 3000)
        serial = recurrence_scan(traj, epsilon=2.0)
        parallel = recurrence_scan(traj, epsilon=2.0, workers=4)
        assert parallel.return_times == serial.return_times
        assert parallel.min_distance_seen == serial.min_distance_seen
        assert parallel.argmin_time == serial.argmin_time

    def test_zero_horizon(self, fig1_game):
        """Test a run with no rounds never returns."""
        report = recurrence_scan(rollout(fig1_game, DynamicsMode.ALT, 0))
        assert not report.recurred
        assert report.min_distance_seen == math.inf

    def test_origin_epsilon(self):
        """Test the default radius at the origin."""
        game = GameInstance.build([[1.0]], 0.5, 0.5, [0.0], [0.0])
        assert default_epsilon(rollout(game, DynamicsMode.ALT, 1)) == 1e-12

    def test_rejects_sim(self, fig1_game):
        """Test simultaneous runs are rejected."""
        with pytest.raises(WrongModeError):
            recurrence_scan(rollout(fig1_game, DynamicsMode.SIM, 5))
