"""
Pick-and-place cycle simulator.

One cycle walks the pipeline AwaitInput -> Capture -> Localize ->
MoveToObject -> Grip -> Transit -> Place -> Release -> Home. Joints are
driven by per-joint PID controllers through a first-order motor model:
gravity is fed forward, the PID command is limited to the torque the motor
has left after holding the arm up, and the result accelerates a reflected
inertia. If gravity alone needs more torque than a motor can give, the cycle
faults with a stall.

Time is step-indexed (t = k * dt) so traces are bit-identical for the same
inputs and seed.
"""
import json
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from armforge import config
from armforge.arm_model import ArmSpec, GripperKind, Pose, motor_torque_available
from armforge.economics import Money, budget_check, to_decimal
from armforge.errors import (ArmForgeError, ConfigurationError, ContractViolation, DomainError,
                             NotVisible, StallFault)
from armforge.gripper import seal_hazard
from armforge.kinematics import (IkOptions, JointState, Workspace, chain_geometry,
                                 forward_kinematics, inverse_kinematics,
                                 target_annulus_contains, workspace_contains)
from armforge.structural import joint_holding_torques

logger = logging.getLogger(__name__)

MAX_DT = 0.05
SeedLike = Union[int, np.random.SeedSequence, np.random.Generator]


class PipelineState(str, Enum):
    AWAIT_INPUT = "AwaitInput"
    CAPTURE = "Capture"
    LOCALIZE = "Localize"
    MOVE_TO_OBJECT = "MoveToObject"
    GRIP = "Grip"
    TRANSIT = "Transit"
    PLACE = "Place"
    RELEASE = "Release"
    HOME = "Home"
    FAULT = "Fault"
    FAULT_HOLD = "FaultHold"


PIPELINE = (
    PipelineState.AWAIT_INPUT, PipelineState.CAPTURE, PipelineState.LOCALIZE,
    PipelineState.MOVE_TO_OBJECT, PipelineState.GRIP, PipelineState.TRANSIT,
    PipelineState.PLACE, PipelineState.RELEASE, PipelineState.HOME,
)


class Shape(str, Enum):
    BLOCK = "block"
    SPHERE = "sphere"


class Placement(str, Enum):
    STANDING = "standing"
    FLAT = "flat"


# ==================== Types ====================

@dataclass(frozen=True)
class SceneObject:
    id: str
    shape: Shape
    dimensions: Tuple[float, ...]
    mass: float
    color: str
    position: Tuple[float, float, float]
    orientation: Placement = Placement.FLAT

    def __post_init__(self):
        object.__setattr__(self, "shape", Shape(self.shape))
        object.__setattr__(self, "orientation", Placement(self.orientation))
        object.__setattr__(self, "position", tuple(float(c) for c in self.position))
        object.__setattr__(self, "dimensions", tuple(float(c) for c in self.dimensions))
        if not self.mass > 0:
            raise DomainError(f"object '{self.id}' needs positive mass", mass=self.mass)


@dataclass(frozen=True)
class Scene:
    objects: Tuple[SceneObject, ...]
    sort_map: Dict[str, Pose]


@dataclass(frozen=True)
class PidGains:
    kp: float = 8.0
    ki: float = 0.5
    kd: float = 0.2
    integral_limit: float = 0.05
    output_limit: float = 1.0

    def __post_init__(self):
        if min(self.kp, self.ki, self.kd) < 0:
            raise DomainError("PID gains cannot be negative")
        if self.integral_limit <= 0 or self.output_limit <= 0:
            raise DomainError("PID limits must be positive")


@dataclass(frozen=True)
class PidMemory:
    integral: float = 0.0
    previous_error: Optional[float] = None


@dataclass(frozen=True)
class SimConfig:
    reflected_inertia: float = 0.00125
    speed_fraction: float = 0.8
    settle_error: float = 1e-3
    settle_speed: float = 0.05
    grip_time: float = 0.3
    release_time: float = 0.3
    capture_latency: float = 0.05
    localize_latency: float = 0.02
    localization_noise: float = 0.001
    phase_timeout: float = 5.0
    clearance: float = 0.05
    seal_accel_threshold: float = 20.0
    estop_time: Optional[float] = None
    record_every: int = 10
    workspace: Workspace = field(default_factory=Workspace)
    ik: IkOptions = field(default_factory=IkOptions)


@dataclass(frozen=True)
class FaultRecord:
    kind: str
    state: PipelineState
    message: str
    details: Dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "state": self.state.value, "message": self.message, **self.details}


@dataclass(frozen=True)
class TraceEvent:
    t: float
    state: PipelineState
    angles: Tuple[float, ...]
    velocities: Tuple[float, ...]
    pose: Pose


@dataclass(frozen=True)
class CycleTrace:
    events: Tuple[TraceEvent, ...] = ()
    cycle_time: float = 0.0
    placement_error: float = math.nan
    succeeded: bool = False
    object_id: str = ""
    color: str = ""
    target_bin: str = ""
    placed_bin: Optional[str] = None
    fault: Optional[FaultRecord] = None
    seal_hazard: bool = False
    peak_acceleration: float = 0.0

    @property
    def states(self) -> List[PipelineState]:
        """State sequence with repeats collapsed."""
        seq = []
        for e in self.events:
            if not seq or seq[-1] != e.state:
                seq.append(e.state)
        return seq

    @property
    def stalled(self) -> bool:
        return self.fault is not None and self.fault.kind == StallFault.kind

    def summary(self) -> dict:
        return {
            "object_id": self.object_id,
            "color": self.color,
            "target_bin": self.target_bin,
            "placed_bin": self.placed_bin,
            "cycle_time": self.cycle_time,
            "placement_error": None if math.isnan(self.placement_error) else self.placement_error,
            "succeeded": self.succeeded,
            "fault": self.fault.to_dict() if self.fault else None,
            "seal_hazard": self.seal_hazard,
        }


@dataclass(frozen=True)
class Rubric:
    task: float = 1.0
    stability: float = 1.0
    speed: float = 1.0
    budget: float = 1.0
    aesthetic: float = 1.0
    cycle_limit: float = config.CYCLE_TIME_LIMIT
    budget_usd: Money = config.BUDGET_USD
    bom_total: Optional[Money] = None
    aesthetic_score: float = 0.0


@dataclass(frozen=True)
class ScoreCard:
    subscores: Dict[str, float]
    weights: Dict[str, float]
    total: float
    runs: int
    successes: int
    mean_cycle_time: Optional[float]

    def to_dict(self) -> dict:
        return {
            "subscores": self.subscores,
            "weights": self.weights,
            "total": self.total,
            "runs": self.runs,
            "successes": self.successes,
            "mean_cycle_time": self.mean_cycle_time,
        }


class _EmergencyStop(Exception):
    pass


class _PhaseFault(ArmForgeError):
    pass


class PhaseTimeout(_PhaseFault):
    kind = "Timeout"


class GripMiss(_PhaseFault):
    kind = "GripMiss"


# ==================== Building blocks ====================

def _generator(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def localize(obj: SceneObject, noise_sigma: float, seed: SeedLike = config.DEFAULT_SEED,
             workspace: Optional[Workspace] = None) -> np.ndarray:
    """
    Synthetic camera fix: true position plus planar Gaussian noise; z exact.
    Pass a Generator to draw repeatedly from one stream.
    """
    ws = workspace or Workspace()
    if not workspace_contains(ws, obj.position):
        raise NotVisible(f"object '{obj.id}' is outside the camera's workspace", object_id=obj.id)
    if noise_sigma < 0:
        raise DomainError("noise sigma cannot be negative", noise_sigma=noise_sigma)
    rng = _generator(seed)
    noise = rng.normal(0.0, noise_sigma, size=2)
    x, y, z = obj.position
    return np.array([x + noise[0], y + noise[1], z])


def pid_step(gains: PidGains, error: float, dt: float,
             memory: Optional[PidMemory] = None) -> Tuple[float, PidMemory]:
    """
    One PID update. The integral term is clamped to ``integral_limit`` and
    only accumulates while the output is not saturated in the direction of
    the error. The derivative is zero on the first call.
    """
    if dt <= 0:
        raise DomainError("dt must be positive", dt=dt)
    memory = memory or PidMemory()

    derivative = 0.0 if memory.previous_error is None else (error - memory.previous_error) / dt

    def integral_term(integral: float) -> float:
        return float(np.clip(gains.ki * integral, -gains.integral_limit, gains.integral_limit))

    candidate = memory.integral + error * dt
    if gains.ki > 0:
        bound = gains.integral_limit / gains.ki
        candidate = float(np.clip(candidate, -bound, bound))
    raw = gains.kp * error + integral_term(candidate) + gains.kd * derivative

    integral = candidate
    if abs(raw) > gains.output_limit and np.sign(raw) == np.sign(error):
        integral = memory.integral
        raw = gains.kp * error + integral_term(integral) + gains.kd * derivative

    command = float(np.clip(raw, -gains.output_limit, gains.output_limit))
    return command, PidMemory(integral, error)


# ==================== Scene ====================

def _pose_from(raw) -> Pose:
    if isinstance(raw, dict):
        return Pose(tuple(float(c) for c in raw["position"]),
                    tuple(float(c) for c in raw.get("orientation", (0.0, 0.0, 0.0, 1.0))))
    return Pose(tuple(float(c) for c in raw))


def scene_from_dict(data: dict) -> Scene:
    try:
        objects = tuple(
            SceneObject(
                id=raw["id"],
                shape=raw.get("shape", "block"),
                dimensions=tuple(raw.get("dimensions", ())),
                mass=float(raw["mass"]),
                color=raw["color"],
                position=tuple(raw["position"]),
                orientation=raw.get("orientation", "flat"),
            )
            for raw in data["objects"]
        )
        sort_map = {color: _pose_from(raw) for color, raw in data["bins"].items()}
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigurationError(f"malformed scene: {e}") from e
    return Scene(objects, sort_map)


def load_scene(path=config.DEFAULT_SCENE_FILE) -> Scene:
    resolved = config.resolve_path(path)
    if not Path(resolved).exists():
        raise ConfigurationError(f"scene file not found: {path}", path=str(path))
    with open(resolved, "r", encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"scene is not valid JSON: {e}", path=str(resolved)) from e
    return scene_from_dict(data)


def default_scene() -> Scene:
    return load_scene(config.DATA_DIR / config.DEFAULT_SCENE_FILE)


def check_scene(objects: Sequence[SceneObject], sort_map: Dict[str, Pose], ws: Workspace):
    colors = {o.color for o in objects} | set(sort_map)
    if len(colors) > config.MAX_COLOR_SIGNATURES:
        raise ContractViolation(
            f"{len(colors)} colour labels exceed the camera's {config.MAX_COLOR_SIGNATURES} signatures",
            colors=sorted(colors),
        )
    for color, pose in sort_map.items():
        if not target_annulus_contains(ws, pose.position):
            raise ContractViolation(f"bin '{color}' lies outside the target annulus", bin=color,
                                    position=list(pose.position))
    for obj in objects:
        if obj.color not in sort_map:
            raise ConfigurationError(f"no bin for colour '{obj.color}'", object_id=obj.id, color=obj.color)


# ==================== Simulator ====================

class CycleSimulator:
    """Single-threaded stepper for one pick-and-place cycle."""

    def __init__(self, spec: ArmSpec, gains, dt: float, sim: SimConfig):
        if not 0 < dt <= MAX_DT:
            raise ContractViolation(f"dt must lie in (0, {MAX_DT}]", dt=dt)
        self.spec = spec
        self.dt = dt
        self.sim = sim
        n = len(spec.joints)
        self.gains = list(gains) if isinstance(gains, (list, tuple)) else [gains] * n
        if len(self.gains) != n:
            raise ContractViolation("one PidGains per joint expected", joints=n, gains=len(self.gains))

        self.q = np.array(spec.home_angles(), dtype=float)
        self.v = np.zeros(n)
        self.lo, self.hi = spec.lower_limits(), spec.upper_limits()
        self.vmax = np.array([sim.speed_fraction * j.motor.rated_speed for j in spec.joints])
        self.k = 0
        self.state = PipelineState.AWAIT_INPUT
        self.held_mass = 0.0
        self.held_offset = np.zeros(3)
        self.events: List[TraceEvent] = []
        self.tip_history: List[np.ndarray] = []
        self.peak_acceleration = 0.0
        self.estop_step = None if sim.estop_time is None else max(0, math.ceil(sim.estop_time / dt - 1e-9))

    @property
    def t(self) -> float:
        return self.k * self.dt

    def tip(self) -> np.ndarray:
        return chain_geometry(self.spec, self.q).tip

    def _record(self, force: bool = False):
        t = self.t
        if self.events and self.events[-1].t == t:
            if not force:
                return
            self.events.pop()
        self.events.append(TraceEvent(
            t=t,
            state=self.state,
            angles=tuple(float(a) for a in self.q),
            velocities=tuple(float(v) for v in self.v),
            pose=forward_kinematics(self.spec, self.q),
        ))

    def enter(self, state: PipelineState):
        self.state = state
        logger.debug(f"t={self.t:.3f}s -> {state.value}")
        self._record(force=True)

    def _steps(self, duration: float) -> int:
        return max(1, math.ceil(duration / self.dt - 1e-9))

    def step(self, target: np.ndarray, memory: List[PidMemory]):
        if self.estop_step is not None and self.k >= self.estop_step:
            raise _EmergencyStop()

        demand = joint_holding_torques(self.spec, self.q, self.held_mass)
        accel = np.zeros_like(self.v)
        for i, joint in enumerate(self.spec.joints):
            speed = min(abs(self.v[i]), joint.motor.rated_speed)
            available = motor_torque_available(joint.motor, speed)
            if demand[i] > available:
                raise StallFault(
                    f"joint '{joint.name}' needs {demand[i]:.3f} N*m to hold but the motor gives {available:.3f}",
                    joint=joint.name, demand=float(demand[i]), available=float(available),
                )
            headroom = available - demand[i]
            command, memory[i] = pid_step(self.gains[i], float(target[i] - self.q[i]), self.dt, memory[i])
            accel[i] = float(np.clip(command, -headroom, headroom)) / self.sim.reflected_inertia

        # semi-implicit Euler
        self.v = np.clip(self.v + accel * self.dt, -self.vmax, self.vmax)
        q = self.q + self.v * self.dt
        clipped = (q < self.lo) | (q > self.hi)
        self.q = np.clip(q, self.lo, self.hi)
        self.v[clipped] = 0.0
        self.k += 1

        self._track_acceleration()
        if self.k % self.sim.record_every == 0:
            self._record()

    def _track_acceleration(self):
        if self.held_mass <= 0:
            self.tip_history.clear()
            return
        self.tip_history.append(self.tip())
        if len(self.tip_history) > 3:
            self.tip_history.pop(0)
        if len(self.tip_history) == 3:
            p0, p1, p2 = self.tip_history
            a = float(np.linalg.norm(p2 - 2 * p1 + p0)) / self.dt ** 2
            self.peak_acceleration = max(self.peak_acceleration, a)

    def _settled(self, target: np.ndarray) -> bool:
        return (np.all(np.abs(target - self.q) <= self.sim.settle_error)
                and np.all(np.abs(self.v) <= self.sim.settle_speed))

    def move_to(self, target: np.ndarray):
        memory = [PidMemory() for _ in self.spec.joints]
        start = self.k
        limit = self._steps(self.sim.phase_timeout)
        while True:
            self.step(target, memory)
            if self._settled(target):
                return
            if self.k - start >= limit:
                raise PhaseTimeout(
                    f"{self.state.value} did not settle within {self.sim.phase_timeout:.1f}s",
                    error=float(np.max(np.abs(target - self.q))),
                )

    def hold(self, duration: float):
        target = self.q.copy()
        memory = [PidMemory() for _ in self.spec.joints]
        for _ in range(self._steps(duration)):
            self.step(target, memory)

    def solve(self, point: np.ndarray) -> np.ndarray:
        seed = JointState(tuple(self.q))
        q = inverse_kinematics(self.spec, Pose(tuple(float(c) for c in point)), seed, self.sim.ik)
        return q.as_array()

    def emergency_stop(self):
        self.v[:] = 0.0
        self.state = PipelineState.FAULT_HOLD
        self._record(force=True)


def _nearest_bin(point: np.ndarray, sort_map: Dict[str, Pose]) -> str:
    return min(sort_map, key=lambda c: math.hypot(point[0] - sort_map[c].position[0],
                                                  point[1] - sort_map[c].position[1]))


def run_cycle(spec: ArmSpec, scene: Sequence[SceneObject], sort_map: Dict[str, Pose],
              gains=None, dt: float = 1e-3, seed: SeedLike = config.DEFAULT_SEED,
              sim: Optional[SimConfig] = None, object_id: Optional[str] = None) -> CycleTrace:
    """
    Simulate picking one object (the first, or ``object_id``) and dropping it
    in the bin mapped to its colour. Faults end the cycle early and are
    returned in the trace with ``succeeded=False``.
    """
    sim = sim or SimConfig()
    gains = gains or PidGains()
    if not scene:
        raise ContractViolation("scene has no objects")
    check_scene(scene, sort_map, sim.workspace)
    obj = next((o for o in scene if o.id == object_id), None) if object_id else scene[0]
    if obj is None:
        raise ConfigurationError(f"no object with id '{object_id}'", object_id=object_id)

    bin_pose = sort_map[obj.color]
    bin_point = np.array(bin_pose.position, dtype=float)
    rng = _generator(seed)
    arm = CycleSimulator(spec, gains, dt, sim)
    object_position = np.array(obj.position, dtype=float)
    fault = None

    try:
        arm.enter(PipelineState.AWAIT_INPUT)
        arm.hold(arm.dt)

        arm.enter(PipelineState.CAPTURE)
        arm.hold(sim.capture_latency)

        arm.enter(PipelineState.LOCALIZE)
        estimate = localize(obj, sim.localization_noise, rng, sim.workspace)
        arm.hold(sim.localize_latency)

        arm.enter(PipelineState.MOVE_TO_OBJECT)
        arm.move_to(arm.solve(estimate))

        arm.enter(PipelineState.GRIP)
        miss = float(np.linalg.norm(arm.tip() - object_position))
        if miss > spec.gripper.grip_tolerance:
            raise GripMiss(f"gripper is {miss * 1000:.1f} mm from the object", miss=miss)
        arm.hold(sim.grip_time)
        arm.held_mass = obj.mass
        arm.held_offset = object_position - arm.tip()

        arm.enter(PipelineState.TRANSIT)
        arm.move_to(arm.solve(bin_point + np.array([0.0, 0.0, sim.clearance])))

        arm.enter(PipelineState.PLACE)
        arm.move_to(arm.solve(bin_point))

        arm.enter(PipelineState.RELEASE)
        arm.hold(sim.release_time)
        object_position = arm.tip() + arm.held_offset
        arm.held_mass = 0.0

        arm.enter(PipelineState.HOME)
        arm.move_to(np.array(spec.home_angles(), dtype=float))
        arm._record(force=True)
    except _EmergencyStop:
        arm.emergency_stop()
        fault = FaultRecord("EmergencyStop", PipelineState.FAULT_HOLD, "emergency stop pressed", {"t": arm.t})
    except ArmForgeError as e:
        failed_in = arm.state
        logger.warning(f"⚠ Cycle fault in {failed_in.value}: {e.message}")
        fault = FaultRecord(e.kind, failed_in, e.message, dict(e.details))
        arm.state = PipelineState.FAULT
        arm._record(force=True)

    events = tuple(arm.events)
    if arm.held_mass > 0:
        object_position = arm.tip() + arm.held_offset
    placement_error = math.hypot(object_position[0] - bin_point[0], object_position[1] - bin_point[1])
    placed_bin = _nearest_bin(object_position, sort_map) if fault is None else None
    hazard = spec.gripper.kind == GripperKind.VACUUM and seal_hazard(arm.peak_acceleration, sim.seal_accel_threshold)

    return CycleTrace(
        events=events,
        cycle_time=events[-1].t - events[0].t,
        placement_error=placement_error,
        succeeded=fault is None and placed_bin == obj.color,
        object_id=obj.id,
        color=obj.color,
        target_bin=obj.color,
        placed_bin=placed_bin,
        fault=fault,
        seal_hazard=hazard,
        peak_acceleration=arm.peak_acceleration,
    )


def run_session(spec: ArmSpec, scene: Scene, gains=None, dt: float = 1e-3,
                seed: int = config.DEFAULT_SEED, sim: Optional[SimConfig] = None) -> List[CycleTrace]:
    """One cycle per scene object, each from home with its own child seed."""
    children = np.random.SeedSequence(seed).spawn(len(scene.objects))
    traces = []
    for obj, child in zip(scene.objects, children):
        trace = run_cycle(spec, scene.objects, scene.sort_map, gains, dt, child, sim, object_id=obj.id)
        traces.append(trace)
        status = "✓" if trace.succeeded else "[ERR]"
        logger.info(f"{status} {obj.id} -> {trace.placed_bin} in {trace.cycle_time:.3f}s")
    return traces


def trace_frame(trace: CycleTrace, joint_names: Optional[Sequence[str]] = None) -> pd.DataFrame:
    """Columns: t, state, q_<joint>..., v_<joint>..., x, y, z."""
    rows = []
    for e in trace.events:
        names = joint_names or [str(i) for i in range(len(e.angles))]
        row = {"t": e.t, "state": e.state.value}
        row.update({f"q_{n}": a for n, a in zip(names, e.angles)})
        row.update({f"v_{n}": v for n, v in zip(names, e.velocities)})
        row.update(dict(zip(("x", "y", "z"), e.pose.position)))
        rows.append(row)
    return pd.DataFrame(rows)


def trace_from_summary(data: dict) -> CycleTrace:
    """Rebuild the scoring-relevant part of a trace from its summary JSON."""
    try:
        fault = data.get("fault")
        return CycleTrace(
            cycle_time=float(data["cycle_time"]),
            placement_error=math.nan if data.get("placement_error") is None else float(data["placement_error"]),
            succeeded=bool(data["succeeded"]),
            object_id=data.get("object_id", ""),
            color=data.get("color", ""),
            target_bin=data.get("target_bin", ""),
            placed_bin=data.get("placed_bin"),
            fault=FaultRecord(fault["kind"], PipelineState(fault["state"]), fault.get("message", "")) if fault else None,
            seal_hazard=bool(data.get("seal_hazard", False)),
        )
    except KeyError as e:
        raise ConfigurationError(f"trace summary is missing {e}", field=str(e.args[0]))
    except (AttributeError, TypeError, ValueError) as e:
        raise ConfigurationError(f"malformed trace summary: {e}")


# ==================== Scoring ====================

def _ratio_score(value: float, bound: float) -> float:
    """10 within the bound, then linear down to 0 at twice the bound."""
    if value <= bound:
        return 10.0
    return 10.0 * max(0.0, 1.0 - (value - bound) / bound)


def score_run(traces: Sequence[CycleTrace], rubric: Optional[Rubric] = None) -> ScoreCard:
    """
    Rubric subscores out of 10:
      task       10 x success rate
      stability  10 x share of runs without a stall
      speed      mean successful cycle time against the bound (0 if none succeed)
      budget     BOM total against the budget (0 if no BOM total is given)
      aesthetic  fixed placeholder score
    """
    if not traces:
        raise DomainError("score_run needs at least one trace")
    rubric = rubric or Rubric()

    runs = len(traces)
    wins = [t for t in traces if t.succeeded]
    mean_time = float(np.mean([t.cycle_time for t in wins])) if wins else None

    subscores = {
        "task": 10.0 * len(wins) / runs,
        "stability": 10.0 * sum(not t.stalled for t in traces) / runs,
        "speed": _ratio_score(mean_time, rubric.cycle_limit) if wins else 0.0,
        "budget": 0.0,
        "aesthetic": float(rubric.aesthetic_score),
    }
    if rubric.bom_total is not None:
        total = to_decimal(rubric.bom_total)
        budget = to_decimal(rubric.budget_usd)
        subscores["budget"] = 10.0 if budget_check(total, budget).passes else _ratio_score(float(total), float(budget))

    weights = {
        "task": rubric.task,
        "stability": rubric.stability,
        "speed": rubric.speed,
        "budget": rubric.budget,
        "aesthetic": rubric.aesthetic,
    }
    total_score = math.fsum(weights[k] * subscores[k] for k in subscores)
    return ScoreCard(subscores, weights, total_score, runs, len(wins), mean_time)
