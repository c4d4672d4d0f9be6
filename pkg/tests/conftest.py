import math
import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(ROOT))

from armforge.arm_model import (ArmSpec, GripperSpec, IBeamSection, JointKind, JointSpec, LinkSpec,
                                MaterialSpec, MotorKind, MotorSpec, default_arm)

ACRYLIC = MaterialSpec("acrylic", density=1180.0, flexural_strength=70.0e6)
SECTION = IBeamSection(0.012, 0.002, 0.002, 0.016, 0.012, 0.002)
STRONG_MOTOR = MotorSpec("test", MotorKind.SERVO, mass=0.0, stall_torque=50.0, rated_speed=6.0)


def planar_arm(lengths, masses=None, motor=STRONG_MOTOR, gripper_mass=0.0, payload=0.0, motor_mass=None):
    """Serial arm in the x-z plane: every joint pitches about +y, no ground link."""
    masses = masses or [0.0] * len(lengths)
    if motor_mass is not None:
        motor = MotorSpec(motor.name, motor.kind, motor_mass, motor.stall_torque, motor.rated_speed)
    links, joints = [], []
    previous = None
    for i, (length, mass) in enumerate(zip(lengths, masses)):
        links.append(LinkSpec(f"l{i}", length, mass, SECTION, ACRYLIC, parent=previous))
        joints.append(JointSpec(f"j{i}", JointKind.FULL_REVOLUTE, (0.0, 1.0, 0.0),
                                (-math.pi, math.pi), motor))
        previous = f"l{i}"
    return ArmSpec(tuple(links), tuple(joints), GripperSpec(mass=gripper_mass), payload_mass=payload)


@pytest.fixture(scope="session")
def arm():
    return default_arm()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def make_planar_arm():
    return planar_arm
