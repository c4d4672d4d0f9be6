"""
Arm data model: links, joints, motors, materials and gripper, plus mobility
analysis, motor torque-speed curves and spec validation.

ArmSpec files are JSON. Motors and materials are declared once in top-level
maps and referenced by name from joints and links. Units are fixed: meters,
kilograms, N*m, rad/s, Pa.
"""
import json
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from armforge import config
from armforge.errors import ConfigurationError, ContractViolation, DomainError
from armforge.gripper import GearSpec, VacuumSpec

logger = logging.getLogger(__name__)

Vector3 = Tuple[float, float, float]


class MotorKind(str, Enum):
    SERVO = "servo"
    STEPPER = "stepper"


class JointKind(str, Enum):
    FULL_REVOLUTE = "full_revolute"
    HALF_JOINT = "half_joint"


class GripperKind(str, Enum):
    TWO_FINGER = "two_finger"
    VACUUM = "vacuum"


# ==================== Domain types ====================

@dataclass(frozen=True)
class IBeamSection:
    """Top flange (b1 x h1), web (b2 x h2), bottom flange (b3 x h3)."""
    b1: float
    h1: float
    b2: float
    h2: float
    b3: float
    h3: float

    @property
    def height(self) -> float:
        return self.h1 + self.h2 + self.h3

    @property
    def area(self) -> float:
        return self.b1 * self.h1 + self.b2 * self.h2 + self.b3 * self.h3

    def dimensions(self) -> Dict[str, float]:
        return {"b1": self.b1, "h1": self.h1, "b2": self.b2,
                "h2": self.h2, "b3": self.b3, "h3": self.h3}


@dataclass(frozen=True)
class MaterialSpec:
    name: str
    density: float
    flexural_strength: float
    material_cost_score: float = 0.0
    machining_cost_score: float = 0.0


@dataclass(frozen=True)
class MotorSpec:
    name: str
    kind: MotorKind
    mass: float
    stall_torque: float
    rated_speed: float
    operating_voltage: float = 5.0
    steps_per_rev: int = 0
    current_draw: float = 0.0


@dataclass(frozen=True)
class LinkSpec:
    name: str
    length: float
    mass: float
    cross_section: IBeamSection
    material: MaterialSpec
    direction: Vector3 = (1.0, 0.0, 0.0)
    com_fraction: float = 0.5
    parent: Optional[str] = None


@dataclass(frozen=True)
class JointSpec:
    name: str
    kind: JointKind
    axis: Vector3
    limits: Tuple[float, float]
    motor: Optional[MotorSpec]


@dataclass(frozen=True)
class GripperSpec:
    kind: GripperKind = GripperKind.TWO_FINGER
    mass: float = 0.0
    motor: Optional[MotorSpec] = None
    grip_tolerance: float = 0.005
    gears: Optional[Tuple[GearSpec, GearSpec]] = None
    vacuum: Optional[VacuumSpec] = None

    @property
    def total_mass(self) -> float:
        return self.mass + (self.motor.mass if self.motor else 0.0)


@dataclass(frozen=True)
class Pose:
    """Position in meters and a unit quaternion in scipy order (x, y, z, w)."""
    position: Vector3 = (0.0, 0.0, 0.0)
    orientation: Tuple[float, float, float, float] = (0.0, 0.0, 0.0, 1.0)

    def __post_init__(self):
        if len(self.position) != 3 or len(self.orientation) != 4:
            raise ContractViolation("pose needs a 3-vector and a 4-element quaternion")
        norm = math.sqrt(sum(c * c for c in self.orientation))
        if abs(norm - 1.0) > 1e-9:
            raise ContractViolation("pose quaternion is not unit length", norm=norm)

    def to_dict(self) -> dict:
        return {"position": list(self.position), "orientation": list(self.orientation)}


@dataclass(frozen=True)
class ArmSpec:
    """
    Serial chain. Links are ordered base to tip. With one joint per link,
    joint i drives link i; with one joint fewer, links[0] is the fixed
    ground link and joint i drives link i + 1.
    """
    links: Tuple[LinkSpec, ...]
    joints: Tuple[JointSpec, ...]
    gripper: GripperSpec = field(default_factory=GripperSpec)
    base_mount: Pose = field(default_factory=Pose)
    payload_mass: float = 0.0
    name: str = "arm"
    home: Optional[Tuple[float, ...]] = None

    @property
    def has_ground_link(self) -> bool:
        return len(self.joints) == len(self.links) - 1

    @property
    def joint_offset(self) -> int:
        """Index of the first actuated link."""
        return 1 if self.has_ground_link else 0

    @property
    def total_length(self) -> float:
        return sum(link.length for link in self.links)

    def driving_joint(self, link_index: int) -> Optional[int]:
        j = link_index - self.joint_offset
        return j if 0 <= j < len(self.joints) else None

    def lower_limits(self) -> np.ndarray:
        return np.array([j.limits[0] for j in self.joints], dtype=float)

    def upper_limits(self) -> np.ndarray:
        return np.array([j.limits[1] for j in self.joints], dtype=float)

    def home_angles(self) -> Tuple[float, ...]:
        if self.home is not None:
            return tuple(self.home)
        return tuple(0.5 * (lo + hi) for lo, hi in (j.limits for j in self.joints))


@dataclass(frozen=True)
class Violation:
    path: str
    message: str

    def to_dict(self) -> dict:
        return {"path": self.path, "message": self.message}


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = ()

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def __len__(self) -> int:
        return len(self.violations)

    def messages(self) -> List[str]:
        return [v.message for v in self.violations]

    def to_dict(self) -> dict:
        return {"valid": self.is_valid, "violations": [v.to_dict() for v in self.violations]}


# ==================== Units ====================

def kgcm_to_nm(torque_kgcm: float) -> float:
    return torque_kgcm * config.KGCM_TO_NM


def nm_to_kgcm(torque_nm: float) -> float:
    return torque_nm / config.KGCM_TO_NM


# ==================== Mobility ====================

def gruebler_dof(links: int, full_joints: int, half_joints: int) -> int:
    """
    Planar mobility M = 3(L - 1) - 2*J1 - J2.

    A result <= 0 is an overconstrained structure and is returned as is.
    """
    if links < 1:
        raise DomainError("a mechanism needs at least one link", links=links)
    if full_joints < 0 or half_joints < 0:
        raise DomainError("joint counts cannot be negative",
                          full_joints=full_joints, half_joints=half_joints)
    return 3 * (links - 1) - 2 * full_joints - half_joints


def mobility(spec: ArmSpec) -> int:
    """
    DOF of the arm's chain. The ground counts as a link; the gripper motor
    sits outside the chain.
    """
    n_links = len(spec.links) + (0 if spec.has_ground_link else 1)
    full = sum(1 for j in spec.joints if j.kind == JointKind.FULL_REVOLUTE)
    half = sum(1 for j in spec.joints if j.kind == JointKind.HALF_JOINT)
    return gruebler_dof(n_links, full, half)


# ==================== Motors ====================

SERVO_KNEE = 0.8


def motor_torque_available(motor: MotorSpec, speed: float) -> float:
    """
    Torque a motor can deliver at ``speed`` (rad/s).

    Stepper: linear derating from stall torque at rest to zero at rated speed.
    Servo: flat at stall torque up to 0.8 x rated speed, then linear to zero.
    """
    if speed < 0:
        raise DomainError("motor speed cannot be negative", speed=speed)
    if speed >= motor.rated_speed:
        return 0.0

    if motor.kind == MotorKind.STEPPER:
        return motor.stall_torque * (1.0 - speed / motor.rated_speed)

    knee = SERVO_KNEE * motor.rated_speed
    if speed <= knee:
        return motor.stall_torque
    return motor.stall_torque * (motor.rated_speed - speed) / (motor.rated_speed - knee)


# ==================== Validation ====================

def _is_unit(vec, tol: float = 1e-9) -> bool:
    return len(vec) == 3 and abs(math.sqrt(sum(c * c for c in vec)) - 1.0) <= tol


def validate_arm(spec: ArmSpec) -> ValidationReport:
    """Collect every violation; never raises."""
    found: List[Violation] = []

    def add(path: str, message: str):
        found.append(Violation(path, message))

    if not spec.links:
        add("links", "arm has no links")
    n_links, n_joints = len(spec.links), len(spec.joints)
    if n_links and n_joints not in (n_links, n_links - 1):
        add("joints", f"{n_joints} joints cannot drive a serial chain of {n_links} links")

    names = set()
    for i, link in enumerate(spec.links):
        path = f"links[{i}]"
        if link.name in names:
            add(path, f"duplicate link name '{link.name}'")
        names.add(link.name)

        expected_parent = spec.links[i - 1].name if i > 0 else None
        if link.parent != expected_parent:
            add(path, f"link '{link.name}' is not connected to the chain "
                      f"(parent {link.parent!r}, expected {expected_parent!r})")
        if not link.length > 0:
            add(path, f"link '{link.name}' has non-positive length")
        if link.mass < 0:
            add(path, f"link '{link.name}' has negative mass")
        if not 0.0 <= link.com_fraction <= 1.0:
            add(path, f"link '{link.name}' centre of mass lies outside the link")
        if not _is_unit(link.direction):
            add(path, f"link '{link.name}' direction is not a unit vector")
        if any(not d > 0 for d in link.cross_section.dimensions().values()):
            add(path, f"link '{link.name}' cross section has non-positive dimensions")
        if not link.material.density > 0 or not link.material.flexural_strength > 0:
            add(path, f"material '{link.material.name}' needs positive density and strength")

    for i, joint in enumerate(spec.joints):
        path = f"joints[{i}]"
        lo, hi = joint.limits
        if lo == hi:
            add(path, "degenerate joint range")
        elif lo > hi:
            add(path, f"joint '{joint.name}' has inverted limits")
        if not _is_unit(joint.axis):
            add(path, f"joint '{joint.name}' axis is not a unit vector")
        if joint.motor is None:
            add(path, f"joint '{joint.name}' has no motor")
        else:
            m = joint.motor
            if not m.stall_torque > 0 or not m.rated_speed > 0 or m.mass < 0:
                add(path, f"motor '{m.name}' needs positive stall torque and rated speed")

    if spec.gripper.mass < 0:
        add("gripper", "gripper mass is negative")
    if spec.payload_mass < 0:
        add("payload_mass", "payload mass is negative")
    if spec.home is not None:
        if len(spec.home) != n_joints:
            add("home", "home pose length does not match the joint count")
        else:
            for joint, angle in zip(spec.joints, spec.home):
                lo, hi = joint.limits
                if lo < hi and not lo <= angle <= hi:
                    add("home", f"home angle of '{joint.name}' is outside its limits")

    return ValidationReport(tuple(found))


# ==================== Loading ====================

def _material_from_dict(name: str, data: dict) -> MaterialSpec:
    return MaterialSpec(
        name=name,
        density=float(data["density"]),
        flexural_strength=float(data["flexural_strength"]),
        material_cost_score=float(data.get("material_cost_score", 0.0)),
        machining_cost_score=float(data.get("machining_cost_score", 0.0)),
    )


def _motor_from_dict(name: str, data: dict) -> MotorSpec:
    return MotorSpec(
        name=name,
        kind=MotorKind(data.get("kind", "servo")),
        mass=float(data["mass"]),
        stall_torque=float(data["stall_torque"]),
        rated_speed=float(data["rated_speed"]),
        operating_voltage=float(data.get("operating_voltage", 5.0)),
        steps_per_rev=int(data.get("steps_per_rev", 0)),
        current_draw=float(data.get("current_draw", 0.0)),
    )


def _pose_from_dict(data: Optional[dict]) -> Pose:
    if not data:
        return Pose()
    return Pose(
        position=tuple(float(c) for c in data.get("position", (0.0, 0.0, 0.0))),
        orientation=tuple(float(c) for c in data.get("orientation", (0.0, 0.0, 0.0, 1.0))),
    )


def arm_from_dict(data: dict) -> ArmSpec:
    """Build an ArmSpec from the JSON schema (see armforge/data/arm.json)."""
    try:
        materials = {k: _material_from_dict(k, v) for k, v in data.get("materials", {}).items()}
        motors = {k: _motor_from_dict(k, v) for k, v in data.get("motors", {}).items()}

        links = []
        previous = None
        for raw in data["links"]:
            material_name = raw["material"]
            if material_name not in materials:
                raise ConfigurationError(f"unknown material '{material_name}'", material=material_name)
            section = raw["section"]
            links.append(LinkSpec(
                name=raw["name"],
                length=float(raw["length"]),
                mass=float(raw["mass"]),
                cross_section=IBeamSection(**{k: float(section[k]) for k in ("b1", "h1", "b2", "h2", "b3", "h3")}),
                material=materials[material_name],
                direction=tuple(float(c) for c in raw.get("direction", (1.0, 0.0, 0.0))),
                com_fraction=float(raw.get("com_fraction", 0.5)),
                parent=raw.get("parent", previous),
            ))
            previous = raw["name"]

        joints = []
        for raw in data["joints"]:
            motor_name = raw.get("motor")
            motor = motors.get(motor_name)
            if motor is None:
                logger.warning(f"⚠ Joint '{raw['name']}' references unknown motor '{motor_name}'")
            joints.append(JointSpec(
                name=raw["name"],
                kind=JointKind(raw.get("kind", "full_revolute")),
                axis=tuple(float(c) for c in raw["axis"]),
                limits=(float(raw["limits"][0]), float(raw["limits"][1])),
                motor=motor,
            ))

        raw_gripper = data.get("gripper", {})
        gears = raw_gripper.get("gears")
        vacuum = raw_gripper.get("vacuum")
        gripper = GripperSpec(
            kind=GripperKind(raw_gripper.get("kind", "two_finger")),
            mass=float(raw_gripper.get("mass", 0.0)),
            motor=motors.get(raw_gripper.get("motor")),
            grip_tolerance=float(raw_gripper.get("grip_tolerance", 0.005)),
            gears=tuple(GearSpec(int(g["teeth"]), float(g["circular_pitch"])) for g in gears) if gears else None,
            vacuum=VacuumSpec(**{k: float(v) for k, v in vacuum.items()}) if vacuum else None,
        )

        home = data.get("home")
        return ArmSpec(
            links=tuple(links),
            joints=tuple(joints),
            gripper=gripper,
            base_mount=_pose_from_dict(data.get("base_mount")),
            payload_mass=float(data.get("payload_mass", 0.0)),
            name=data.get("name", "arm"),
            home=tuple(float(a) for a in home) if home is not None else None,
        )
    except KeyError as e:
        raise ConfigurationError(f"arm config is missing key {e}", key=str(e)) from e
    except (TypeError, ValueError) as e:
        raise ConfigurationError(f"arm config is malformed: {e}") from e


def load_arm(path) -> ArmSpec:
    resolved = config.resolve_path(path)
    if not Path(resolved).exists():
        raise ConfigurationError(f"arm config not found: {path}", path=str(path))
    with open(resolved, "r", encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"arm config is not valid JSON: {e}", path=str(resolved)) from e
    spec = arm_from_dict(data)
    logger.info(f"✓ Loaded arm '{spec.name}' ({len(spec.links)} links, {len(spec.joints)} joints)")
    return spec


def default_arm() -> ArmSpec:
    """The desk-scale 5-link / 4-joint arm bundled with the package."""
    return load_arm(config.DATA_DIR / config.DEFAULT_ARM_FILE)
