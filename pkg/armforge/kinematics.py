"""
Forward and inverse kinematics for the serial chain, plus the half-cylinder
workspace and the 12-14 in target annulus.

Every joint is revolute. Rotations compose base to tip: a driven link is
rotated about its joint axis (expressed in the parent frame) and then
translated along its own direction.
"""
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.spatial.transform import Rotation

from armforge import config
from armforge.arm_model import ArmSpec, Pose
from armforge.errors import ContractViolation, DomainError, NoSolution, Unreachable

logger = logging.getLogger(__name__)

__all__ = [
    "JointState", "Pose", "Workspace", "IkOptions", "IkResult", "ChainGeometry",
    "rodrigues", "chain_geometry", "joint_frames", "forward_kinematics",
    "jacobian", "inverse_kinematics", "inverse_kinematics_report",
    "reach_radius_from_extension", "workspace_contains",
    "target_annulus_contains", "base_interference", "reachable",
]

LIMIT_SLACK = 1e-9
MAX_DAMPING = 1e4


@dataclass(frozen=True)
class JointState:
    """
    Joint angles in radians, one per joint.

    The plain constructor only rejects non-finite angles; it knows nothing of
    the arm. Angles from a user or a file go through ``for_arm``, which also
    checks the count and every joint limit.
    """
    angles: Tuple[float, ...]

    def __post_init__(self):
        angles = tuple(float(a) for a in self.angles)
        if not all(math.isfinite(a) for a in angles):
            raise ContractViolation("joint angles must be finite", angles=list(angles))
        object.__setattr__(self, "angles", angles)

    @classmethod
    def for_arm(cls, spec: ArmSpec, angles: Sequence[float]) -> "JointState":
        """Validated constructor: angle count and limits are checked against ``spec``."""
        state = cls(tuple(angles))
        check_state(spec, state, limits=True)
        return state

    def __len__(self) -> int:
        return len(self.angles)

    def as_array(self) -> np.ndarray:
        return np.array(self.angles, dtype=float)


@dataclass(frozen=True)
class Workspace:
    reach_radius: Optional[float] = None
    sweep: float = math.pi
    annulus_inner: float = config.ANNULUS_INNER
    annulus_outer: float = config.ANNULUS_OUTER
    heading: float = math.pi / 2
    height: Optional[float] = None
    base_exclusion: float = config.BASE_EXCLUSION_RADIUS

    def __post_init__(self):
        if self.reach_radius is None:
            object.__setattr__(self, "reach_radius", reach_radius_from_extension())
        if not 0 < self.annulus_inner < self.annulus_outer <= self.reach_radius:
            raise DomainError(
                "workspace needs 0 < annulus_inner < annulus_outer <= reach_radius",
                annulus_inner=self.annulus_inner,
                annulus_outer=self.annulus_outer,
                reach_radius=self.reach_radius,
            )
        if not 0 < self.sweep <= 2 * math.pi:
            raise DomainError("sweep must lie in (0, 2*pi]", sweep=self.sweep)
        if self.height is not None and self.height <= 0:
            raise DomainError("cylinder height must be positive", height=self.height)
        if self.base_exclusion < 0:
            raise DomainError("base exclusion radius cannot be negative", base_exclusion=self.base_exclusion)

    def to_dict(self) -> dict:
        return {
            "reach_radius": self.reach_radius,
            "sweep": self.sweep,
            "annulus_inner": self.annulus_inner,
            "annulus_outer": self.annulus_outer,
            "heading": self.heading,
            "height": self.height,
            "base_exclusion": self.base_exclusion,
        }


@dataclass(frozen=True)
class IkOptions:
    tol: float = 1e-4
    max_iters: int = 500
    damping: float = 1e-3
    restarts: int = 8
    seed: int = 0


@dataclass(frozen=True)
class IkResult:
    q: JointState
    residual: float
    iters: int
    restarts_used: int

    def to_dict(self) -> dict:
        return {
            "angles": list(self.q.angles),
            "residual": self.residual,
            "iters": self.iters,
            "restarts_used": self.restarts_used,
        }


@dataclass(frozen=True)
class ChainGeometry:
    """World-frame geometry of the chain at one configuration."""
    joint_origins: Tuple[np.ndarray, ...]
    joint_axes: Tuple[np.ndarray, ...]
    link_starts: Tuple[np.ndarray, ...]
    link_ends: Tuple[np.ndarray, ...]
    tip_rotation: np.ndarray

    @property
    def tip(self) -> np.ndarray:
        return self.link_ends[-1]


# ==================== Chain ====================

def rodrigues(axis: Sequence[float], angle: float) -> np.ndarray:
    """Rotation matrix for ``angle`` about the unit ``axis``."""
    k = np.asarray(axis, dtype=float)
    K = np.array([[0.0, -k[2], k[1]],
                  [k[2], 0.0, -k[0]],
                  [-k[1], k[0], 0.0]])
    return np.eye(3) + math.sin(angle) * K + (1.0 - math.cos(angle)) * (K @ K)


def check_state(spec: ArmSpec, q: Union[JointState, Sequence[float]], limits: bool = False) -> np.ndarray:
    angles = q.as_array() if isinstance(q, JointState) else np.asarray(q, dtype=float)
    if angles.shape != (len(spec.joints),):
        raise ContractViolation(
            f"expected {len(spec.joints)} joint angles, got {angles.size}",
            expected=len(spec.joints), got=int(angles.size),
        )
    if limits:
        for joint, angle in zip(spec.joints, angles):
            lo, hi = joint.limits
            if angle < lo - LIMIT_SLACK or angle > hi + LIMIT_SLACK:
                raise ContractViolation(
                    f"joint '{joint.name}' angle {angle:.6f} outside [{lo:.6f}, {hi:.6f}]",
                    joint=joint.name, angle=float(angle),
                )
    return angles


def chain_geometry(spec: ArmSpec, q: Union[JointState, Sequence[float]]) -> ChainGeometry:
    angles = check_state(spec, q)
    R = Rotation.from_quat(spec.base_mount.orientation).as_matrix()
    p = np.array(spec.base_mount.position, dtype=float)

    origins, axes, starts, ends = [], [], [], []
    for i, link in enumerate(spec.links):
        j = spec.driving_joint(i)
        if j is not None:
            joint = spec.joints[j]
            origins.append(p.copy())
            axes.append(R @ np.asarray(joint.axis, dtype=float))
            R = R @ rodrigues(joint.axis, angles[j])
        starts.append(p.copy())
        p = p + R @ (link.length * np.asarray(link.direction, dtype=float))
        ends.append(p.copy())

    return ChainGeometry(tuple(origins), tuple(axes), tuple(starts), tuple(ends), R)


def joint_frames(spec: ArmSpec, q) -> List[Tuple[np.ndarray, np.ndarray]]:
    """(origin, unit axis) of every joint in the world frame."""
    geo = chain_geometry(spec, q)
    return list(zip(geo.joint_origins, geo.joint_axes))


def forward_kinematics(spec: ArmSpec, q) -> Pose:
    geo = chain_geometry(spec, q)
    quat = Rotation.from_matrix(geo.tip_rotation).as_quat()
    quat = quat / np.linalg.norm(quat)
    return Pose(
        position=tuple(float(c) for c in geo.tip),
        orientation=tuple(float(c) for c in quat),
    )


def jacobian(spec: ArmSpec, q) -> np.ndarray:
    """3 x n positional Jacobian: column i is axis_i x (tip - origin_i)."""
    geo = chain_geometry(spec, q)
    cols = [np.cross(a, geo.tip - o) for o, a in zip(geo.joint_origins, geo.joint_axes)]
    return np.column_stack(cols) if cols else np.zeros((3, 0))


# ==================== Inverse kinematics ====================

def _tip(spec: ArmSpec, angles: np.ndarray) -> np.ndarray:
    return chain_geometry(spec, angles).tip


def _descend(spec: ArmSpec, target: np.ndarray, start: np.ndarray,
             lo: np.ndarray, hi: np.ndarray, opts: IkOptions):
    """Levenberg-Marquardt style damped least squares with limit projection."""
    q = np.clip(start, lo, hi)
    error = target - _tip(spec, q)
    residual = float(np.linalg.norm(error))
    damping = opts.damping
    iters = 0

    while residual > opts.tol and iters < opts.max_iters:
        iters += 1
        J = jacobian(spec, q)
        JJt = J @ J.T + (damping ** 2) * np.eye(3)
        dq = J.T @ np.linalg.solve(JJt, error)
        candidate = np.clip(q + dq, lo, hi)
        cand_error = target - _tip(spec, candidate)
        cand_residual = float(np.linalg.norm(cand_error))

        if cand_residual < residual:
            q, error, residual = candidate, cand_error, cand_residual
            damping = max(damping / 10.0, opts.damping)
        else:
            damping *= 10.0
            if damping > MAX_DAMPING:
                break

    return q, residual, iters


def inverse_kinematics_report(spec: ArmSpec, target: Pose, seed: JointState,
                              opts: Optional[IkOptions] = None) -> IkResult:
    """
    Position-only IK. Starts from ``seed``, then from ``opts.restarts``
    uniform draws inside the joint limits (seeded, so reproducible).
    """
    opts = opts or IkOptions()
    if opts.tol <= 0 or opts.max_iters < 0 or opts.damping <= 0:
        raise DomainError("IK options need tol > 0, max_iters >= 0, damping > 0")

    goal = np.asarray(target.position, dtype=float)
    base = np.asarray(spec.base_mount.position, dtype=float)
    distance = float(np.linalg.norm(goal - base))
    if distance > spec.total_length:
        raise Unreachable(
            f"target is {distance:.4f} m from the base, beyond the {spec.total_length:.4f} m chain",
            distance=distance, reach=spec.total_length,
        )

    lo, hi = spec.lower_limits(), spec.upper_limits()
    start = check_state(spec, seed, limits=True)
    rng = np.random.default_rng(opts.seed)

    best_q, best_residual = start, math.inf
    total_iters = 0
    for attempt in range(opts.restarts + 1):
        if attempt > 0:
            start = rng.uniform(lo, hi)
        q, residual, iters = _descend(spec, goal, start, lo, hi, opts)
        total_iters += iters
        if residual < best_residual:
            best_q, best_residual = q, residual
        if residual <= opts.tol:
            logger.debug(f"IK converged in {total_iters} iterations after {attempt} restarts")
            return IkResult(JointState(tuple(q)), residual, total_iters, attempt)

    raise NoSolution(
        f"IK did not converge (best residual {best_residual:.3e} m)",
        residual=best_residual,
        iters=total_iters,
        best_angles=[float(a) for a in best_q],
    )


def inverse_kinematics(spec: ArmSpec, target: Pose, seed: JointState,
                       opts: Optional[IkOptions] = None) -> JointState:
    return inverse_kinematics_report(spec, target, seed, opts).q


# ==================== Workspace ====================

def reach_radius_from_extension(max_reach: float = config.MAX_REACH,
                                elevation_deg: float = config.OPERATING_ELEVATION_DEG) -> float:
    """Horizontal reach of a fully extended arm held at ``elevation_deg``."""
    return max_reach * math.cos(math.radians(elevation_deg))


def _wrap(angle: float) -> float:
    return (angle + math.pi) % (2 * math.pi) - math.pi


def _in_sector(ws: Workspace, x: float, y: float) -> bool:
    if x == 0.0 and y == 0.0:
        return True
    if ws.sweep >= 2 * math.pi:
        return True
    offset = abs(_wrap(math.atan2(y, x) - ws.heading))
    return offset <= ws.sweep / 2 + 1e-12


def _in_height(ws: Workspace, z: float) -> bool:
    return ws.height is None or 0.0 <= z <= ws.height


def workspace_contains(ws: Workspace, point: Sequence[float]) -> bool:
    x, y, z = (float(c) for c in point)
    return math.hypot(x, y) <= ws.reach_radius and _in_sector(ws, x, y) and _in_height(ws, z)


def target_annulus_contains(ws: Workspace, point: Sequence[float]) -> bool:
    """Closed interval on both radii."""
    x, y, z = (float(c) for c in point)
    r = math.hypot(x, y)
    return ws.annulus_inner <= r <= ws.annulus_outer and _in_sector(ws, x, y) and _in_height(ws, z)


def base_interference(ws: Workspace, point: Sequence[float]) -> bool:
    x, y = float(point[0]), float(point[1])
    return math.hypot(x, y) < ws.base_exclusion


def reachable(ws: Workspace, point: Sequence[float]) -> bool:
    return workspace_contains(ws, point) and not base_interference(ws, point)
