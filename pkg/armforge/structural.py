"""
Static loading of the arm: point-mass moments, I-beam section properties,
bending stress, per-joint torque demand with the 1.5 dynamic factor, and
material strength checks.

Stress follows the cantilever simplification: total stress is taken as the
maximum bending stress at the link root.
"""
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from armforge import config
from armforge.arm_model import ArmSpec, IBeamSection, MaterialSpec, motor_torque_available
from armforge.errors import DomainError
from armforge.kinematics import ChainGeometry, JointState, chain_geometry, check_state

logger = logging.getLogger(__name__)

Z_AXIS = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class JointLoad:
    joint: str
    static_torque: float
    design_torque: float
    available_torque: float
    safety_factor: float


@dataclass(frozen=True)
class LinkLoad:
    link: str
    moment: float
    bending_stress_as_written: float
    bending_stress_exact: float
    strength_margin: float
    passes: bool


@dataclass(frozen=True)
class MaterialCheck:
    passes: bool
    margin: float


@dataclass(frozen=True)
class StaticsReport:
    per_joint: Tuple[JointLoad, ...]
    per_link: Tuple[LinkLoad, ...]
    payload: float

    def joint(self, name: str) -> JointLoad:
        for load in self.per_joint:
            if load.joint == name:
                return load
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "payload": self.payload,
            "per_joint": [vars(j) for j in self.per_joint],
            "per_link": [vars(k) for k in self.per_link],
        }

    def to_frame(self) -> pd.DataFrame:
        """Per-joint table (CSV output)."""
        return pd.DataFrame(
            [vars(j) for j in self.per_joint],
            columns=["joint", "static_torque", "design_torque", "available_torque", "safety_factor"],
        )

    def link_frame(self) -> pd.DataFrame:
        return pd.DataFrame([vars(k) for k in self.per_link])


@dataclass(frozen=True)
class PointMass:
    label: str
    mass: float
    position: np.ndarray
    link_index: int


# ==================== Formulas ====================

def moment(mass: float, distance: float, g: float = config.GRAVITY) -> float:
    """M = m*g*d."""
    if mass < 0 or distance < 0:
        raise DomainError("moment needs non-negative mass and distance", mass=mass, distance=distance)
    return mass * g * distance


def second_moment_as_written(s: IBeamSection) -> float:
    """b1*h1^3 + b2*h2^3 + b3*h3^3, as written (no 1/12, no parallel-axis terms)."""
    return s.b1 * s.h1 ** 3 + s.b2 * s.h2 ** 3 + s.b3 * s.h3 ** 3


def _rectangles(s: IBeamSection) -> List[Tuple[float, float, float]]:
    """(width, height, centroid height above the bottom face) per plate."""
    return [
        (s.b3, s.h3, s.h3 / 2),
        (s.b2, s.h2, s.h3 + s.h2 / 2),
        (s.b1, s.h1, s.h3 + s.h2 + s.h1 / 2),
    ]


def section_centroid(s: IBeamSection) -> float:
    """Centroid height above the bottom face."""
    parts = _rectangles(s)
    area = sum(b * h for b, h, _ in parts)
    return sum(b * h * y for b, h, y in parts) / area


def second_moment_exact(s: IBeamSection) -> float:
    """Composite section about its centroid: sum of b*h^3/12 + A*d^2."""
    y_bar = section_centroid(s)
    return sum(b * h ** 3 / 12 + b * h * (y - y_bar) ** 2 for b, h, y in _rectangles(s))


def extreme_fiber(s: IBeamSection) -> float:
    """Largest distance from the centroid to an outer face."""
    y_bar = section_centroid(s)
    return max(y_bar, s.height - y_bar)


def bending_stress(M: float, y: float, I: float) -> float:
    """sigma = M*y/I."""
    if I <= 0:
        raise DomainError("second moment of area must be positive", I=I)
    return M * y / I


def material_check(stress: float, material: MaterialSpec) -> MaterialCheck:
    if stress < 0:
        raise DomainError("stress cannot be negative", stress=stress)
    margin = math.inf if stress == 0 else material.flexural_strength / stress
    return MaterialCheck(passes=margin >= 1.0, margin=margin)


# ==================== Torque chain ====================

def point_masses(spec: ArmSpec, geo: ChainGeometry, payload: float) -> List[PointMass]:
    """
    Links at their centre of mass, motors at their joint origins, and gripper
    plus payload at the end effector. ``link_index`` is the link that carries
    each mass, used to decide which masses are distal to a joint or link root.
    """
    masses = []
    for k, link in enumerate(spec.links):
        start, end = geo.link_starts[k], geo.link_ends[k]
        com = start + link.com_fraction * (end - start)
        masses.append(PointMass(link.name, link.mass, com, k))

    for j, joint in enumerate(spec.joints):
        if joint.motor is not None:
            k = j + spec.joint_offset
            masses.append(PointMass(f"{joint.name}_motor", joint.motor.mass, geo.joint_origins[j], k))

    tip_index = len(spec.links) - 1
    masses.append(PointMass("gripper", spec.gripper.total_mass, geo.tip, tip_index))
    masses.append(PointMass("payload", payload, geo.tip, tip_index))
    return masses


def _axis_torque(masses: List[PointMass], origin: np.ndarray, axis: np.ndarray, g: float) -> float:
    """Magnitude of the gravity torque component about ``axis`` through ``origin``."""
    total = 0.0
    for pm in masses:
        lever = pm.position - origin
        total += pm.mass * float(np.dot(np.cross(lever, -Z_AXIS), axis))
    return abs(g * total)


def _gravity_moment(masses: List[PointMass], point: np.ndarray, g: float) -> float:
    """
    Gravity moment about ``point``: g times the norm of the mass-weighted
    horizontal lever sum. Equals sum(m*g*d) when every mass sits on the same
    side along one horizontal direction.
    """
    offset = np.zeros(2)
    for pm in masses:
        offset += pm.mass * (pm.position - point)[:2]
    return g * float(np.linalg.norm(offset))


def _distal_to_joint(spec: ArmSpec, masses: List[PointMass], j: int) -> List[PointMass]:
    first = j + spec.joint_offset
    return [pm for pm in masses if pm.link_index >= first]


def _static_torques(spec: ArmSpec, geo: ChainGeometry, masses: List[PointMass], g: float) -> List[float]:
    return [_gravity_moment(_distal_to_joint(spec, masses, j), geo.joint_origins[j], g)
            for j in range(len(spec.joints))]


def _holding_torques(spec: ArmSpec, geo: ChainGeometry, masses: List[PointMass], g: float) -> List[float]:
    return [_axis_torque(_distal_to_joint(spec, masses, j), geo.joint_origins[j], geo.joint_axes[j], g)
            for j in range(len(spec.joints))]


def joint_static_torques(spec: ArmSpec, q, payload: float, g: float = config.GRAVITY) -> np.ndarray:
    """Static torque per joint (N*m): distal gravity moment about each joint origin."""
    geo = chain_geometry(spec, q)
    return np.array(_static_torques(spec, geo, point_masses(spec, geo, payload), g))


def joint_holding_torques(spec: ArmSpec, q, payload: float, g: float = config.GRAVITY) -> np.ndarray:
    """
    Torque each motor must supply to hold the arm still: the gravity moment
    projected on the joint's own axis. Zero for a vertical yaw axis, whose
    bearing carries the moment instead.
    """
    geo = chain_geometry(spec, q)
    return np.array(_holding_torques(spec, geo, point_masses(spec, geo, payload), g))


def torque_chain(spec: ArmSpec, q: JointState, payload: Optional[float] = None,
                 g: float = config.GRAVITY) -> StaticsReport:
    """
    Per-joint static and design torque against motor stall torque, and
    per-link root bending stress against material strength.
    """
    payload = spec.payload_mass if payload is None else payload
    if payload < 0:
        raise DomainError("payload cannot be negative", payload=payload)
    check_state(spec, q, limits=True)

    geo = chain_geometry(spec, q)
    masses = point_masses(spec, geo, payload)

    per_joint = []
    for joint, static in zip(spec.joints, _static_torques(spec, geo, masses, g)):
        design = config.DYNAMIC_FACTOR * static
        available = motor_torque_available(joint.motor, 0.0) if joint.motor else 0.0
        safety = math.inf if design == 0 else available / design
        per_joint.append(JointLoad(joint.name, static, design, available, safety))

    per_link = []
    for k, link in enumerate(spec.links):
        root = geo.link_starts[k]
        # the motor at this link's root has no lever about it
        distal = [pm for pm in masses if pm.link_index >= k]
        M = _gravity_moment(distal, root, g)
        section = link.cross_section
        stress_as_written = bending_stress(M, section.height / 2, second_moment_as_written(section))
        stress_exact = bending_stress(M, extreme_fiber(section), second_moment_exact(section))
        check = material_check(stress_exact, link.material)
        per_link.append(LinkLoad(link.name, M, stress_as_written, stress_exact, check.margin, check.passes))

    weakest = min(per_joint, key=lambda jl: jl.safety_factor, default=None)
    if weakest is not None and weakest.safety_factor < 1.0:
        logger.warning(
            f"⚠ Joint '{weakest.joint}' design torque {weakest.design_torque:.3f} N*m "
            f"exceeds its stall torque {weakest.available_torque:.3f} N*m"
        )
    return StaticsReport(tuple(per_joint), tuple(per_link), payload)
