import math

import numpy as np
import pytest

from armforge import config
from armforge.errors import ContractViolation, DomainError, NoSolution, Unreachable
from armforge.kinematics import (IkOptions, JointState, Pose, Workspace, base_interference,
                                 chain_geometry, forward_kinematics, inverse_kinematics,
                                 inverse_kinematics_report, jacobian, joint_frames,
                                 reach_radius_from_extension, reachable, rodrigues,
                                 target_annulus_contains, workspace_contains)

REACH = 24 * config.INCH
BASE_HEIGHT = 0.09


# ==================== Forward kinematics ====================

def test_full_extension_along_x(arm):
    pose = forward_kinematics(arm, JointState((0.0, 0.0, 0.0, 0.0)))
    assert pose.position == pytest.approx((REACH, 0.0, BASE_HEIGHT), abs=1e-12)
    assert pose.orientation == pytest.approx((0.0, 0.0, 0.0, 1.0), abs=1e-12)


def test_base_yaw_turns_the_chain(arm):
    pose = forward_kinematics(arm, JointState((math.pi / 2, 0.0, 0.0, 0.0)))
    assert pose.position == pytest.approx((0.0, REACH, BASE_HEIGHT), abs=1e-12)


def test_negative_shoulder_lifts_the_arm(arm):
    pose = forward_kinematics(arm, JointState((0.0, -math.pi / 2, 0.0, 0.0)))
    assert pose.position == pytest.approx((0.0, 0.0, BASE_HEIGHT + REACH), abs=1e-12)


def test_elbow_bend_matches_planar_geometry(make_planar_arm):
    two_link = make_planar_arm([0.3, 0.2])
    pose = forward_kinematics(two_link, JointState((0.0, -math.pi / 2)))
    # second link pitched up 90 degrees
    assert pose.position == pytest.approx((0.3, 0.0, 0.2), abs=1e-12)


def test_fk_quaternion_is_unit(arm, rng):
    lo, hi = arm.lower_limits(), arm.upper_limits()
    for _ in range(20):
        pose = forward_kinematics(arm, JointState(tuple(rng.uniform(lo, hi))))
        assert np.linalg.norm(pose.orientation) == pytest.approx(1.0, abs=1e-12)


def test_fk_rejects_wrong_length(arm):
    with pytest.raises(ContractViolation):
        forward_kinematics(arm, JointState((0.0, 0.0)))


def test_rodrigues_quarter_turn():
    R = rodrigues((0.0, 0.0, 1.0), math.pi / 2)
    assert R @ np.array([1.0, 0.0, 0.0]) == pytest.approx([0.0, 1.0, 0.0], abs=1e-15)


def test_joint_frames_follow_the_chain(arm):
    frames = joint_frames(arm, JointState(arm.home_angles()))
    assert len(frames) == 4
    origin, axis = frames[0]
    assert origin == pytest.approx([0.0, 0.0, 0.05])
    assert axis == pytest.approx([0.0, 0.0, 1.0])
    # shoulder axis turns with the base yaw
    assert frames[1][1] == pytest.approx([-1.0, 0.0, 0.0], abs=1e-12)


def test_jacobian_matches_finite_differences(arm, rng):
    q = rng.uniform(arm.lower_limits(), arm.upper_limits())
    J = jacobian(arm, q)
    h = 1e-7
    for i in range(len(q)):
        dq = np.zeros_like(q)
        dq[i] = h
        numeric = (chain_geometry(arm, q + dq).tip - chain_geometry(arm, q - dq).tip) / (2 * h)
        assert J[:, i] == pytest.approx(numeric, abs=1e-6)


# ==================== Joint state ====================

def test_joint_state_rejects_nan():
    with pytest.raises(ContractViolation):
        JointState((0.0, math.nan))


def test_joint_state_for_arm_checks_limits(arm):
    with pytest.raises(ContractViolation):
        JointState.for_arm(arm, (0.0, 0.0, 3.0, 0.0))
    with pytest.raises(ContractViolation):
        JointState.for_arm(arm, (0.0, 0.0))
    assert len(JointState.for_arm(arm, arm.home_angles())) == 4


# ==================== Inverse kinematics ====================

def test_ik_round_trip_on_seeded_targets(arm):
    rng = np.random.default_rng(7)
    lo, hi = arm.lower_limits(), arm.upper_limits()
    seed = JointState(arm.home_angles())
    converged = 0
    for _ in range(100):
        target = forward_kinematics(arm, JointState(tuple(rng.uniform(lo, hi))))
        try:
            q = inverse_kinematics(arm, Pose(target.position), seed)
        except NoSolution:
            continue
        tip = forward_kinematics(arm, q).position
        assert np.all(q.as_array() >= lo - 1e-9) and np.all(q.as_array() <= hi + 1e-9)
        if np.linalg.norm(np.subtract(tip, target.position)) <= 1e-4:
            converged += 1
    assert converged >= 95


def test_ik_report_fields(arm):
    target = forward_kinematics(arm, JointState((1.2, -0.6, 1.2, 0.4)))
    result = inverse_kinematics_report(arm, Pose(target.position), JointState(arm.home_angles()))
    assert result.residual <= 1e-4
    assert result.iters >= 1
    assert set(result.to_dict()) == {"angles", "residual", "iters", "restarts_used"}


def test_ik_is_reproducible(arm):
    target = Pose((0.1, 0.3, 0.05))
    seed = JointState(arm.home_angles())
    a = inverse_kinematics_report(arm, target, seed)
    b = inverse_kinematics_report(arm, target, seed)
    assert a.q == b.q and a.iters == b.iters


def test_ik_unreachable_beyond_chain_length(arm):
    with pytest.raises(Unreachable) as info:
        inverse_kinematics(arm, Pose((99.0, 0.0, 0.0)), JointState(arm.home_angles()))
    assert info.value.to_dict()["kind"] == "Unreachable"


def test_ik_no_solution_when_limits_block_the_target(arm):
    # straight down the arm ends at z = 0.09 - 0.6096
    opts = IkOptions(max_iters=100, restarts=2)
    with pytest.raises(NoSolution) as info:
        inverse_kinematics(arm, Pose((0.0, 0.0, -0.55)), JointState(arm.home_angles()), opts)
    assert info.value.residual > 1e-4
    assert len(info.value.details["best_angles"]) == 4


def test_ik_rejects_seed_outside_limits(arm):
    with pytest.raises(ContractViolation):
        inverse_kinematics(arm, Pose((0.1, 0.3, 0.05)), JointState((0.0, 0.0, 3.0, 0.0)))


# ==================== Workspace ====================

def test_reach_radius_from_full_extension():
    assert reach_radius_from_extension() / config.INCH == pytest.approx(16.97, abs=0.005)
    assert Workspace().reach_radius == pytest.approx(0.43105, rel=1e-4)


@pytest.mark.parametrize("point,inside", [
    ((0.0, config.ANNULUS_INNER, 0.0), True),
    ((0.0, config.ANNULUS_OUTER, 0.0), True),
    ((0.0, 0.33, 0.1), True),
    ((0.33, 0.0, 0.0), True),          # edge of the half plane
    ((0.0, 0.30, 0.0), False),
    ((0.0, 0.36, 0.0), False),
    ((0.0, -0.33, 0.0), False),        # behind the arm
])
def test_target_annulus_closed_interval(point, inside):
    assert target_annulus_contains(Workspace(), point) is inside


def test_workspace_membership():
    ws = Workspace()
    assert workspace_contains(ws, (0.0, 0.4, 0.2))
    assert not workspace_contains(ws, (0.0, 0.45, 0.0))
    assert not workspace_contains(ws, (0.1, -0.1, 0.0))
    assert workspace_contains(ws, (0.0, 0.0, 0.0))


def _turned(point, angle):
    x, y, z = point
    c, s = math.cos(angle), math.sin(angle)
    return (c * x - s * y, s * x + c * y, z)


def test_full_circle_workspace_ignores_yaw(rng):
    ws = Workspace(sweep=2 * math.pi, height=0.5)
    for _ in range(500):
        point = tuple(rng.uniform(-0.5, 0.5, 3))
        if abs(math.hypot(point[0], point[1]) - ws.reach_radius) < 1e-9:
            continue
        turned = _turned(point, float(rng.uniform(-math.pi, math.pi)))
        assert workspace_contains(ws, turned) is workspace_contains(ws, point)


def test_turning_within_the_sweep_keeps_membership(rng):
    ws = Workspace()
    for _ in range(500):
        r, z = float(rng.uniform(0.0, 0.5)), float(rng.uniform(0.0, 0.3))
        a, b = rng.uniform(0.01, math.pi - 0.01, 2)
        point = (r * math.cos(a), r * math.sin(a), z)
        turned = _turned(point, float(b - a))
        assert workspace_contains(ws, turned) is workspace_contains(ws, point)
        assert target_annulus_contains(ws, turned) is target_annulus_contains(ws, point)


def test_annulus_lies_inside_the_workspace(rng):
    ws = Workspace()
    hits = 0
    for _ in range(2000):
        r, a = float(rng.uniform(0.28, 0.38)), float(rng.uniform(-math.pi, math.pi))
        point = (r * math.cos(a), r * math.sin(a), float(rng.uniform(0.0, 0.3)))
        if target_annulus_contains(ws, point):
            hits += 1
            assert workspace_contains(ws, point)
    assert hits > 100


def test_workspace_height_bound():
    ws = Workspace(height=0.4)
    assert workspace_contains(ws, (0.0, 0.3, 0.4))
    assert not workspace_contains(ws, (0.0, 0.3, 0.5))


def test_base_interference_and_reachable():
    ws = Workspace()
    assert base_interference(ws, (0.01, 0.01, 0.0))
    assert not base_interference(ws, (0.1, 0.1, 0.0))
    assert not reachable(ws, (0.02, 0.02, 0.0))
    assert reachable(ws, (0.0, 0.3, 0.1))


@pytest.mark.parametrize("kwargs", [
    {"annulus_inner": 0.4, "annulus_outer": 0.3},
    {"reach_radius": 0.3},
    {"sweep": 0.0},
    {"height": -1.0},
    {"base_exclusion": -0.01},
])
def test_workspace_invariants(kwargs):
    with pytest.raises(DomainError):
        Workspace(**kwargs)
