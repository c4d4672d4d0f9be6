"""
Gripper physics: gear-mesh spacing for the two-finger gripper and the
syringe-driven vacuum gripper chain (suction cup volume -> Boyle expansion ->
holding force -> payload).
"""
import logging
import math
from dataclasses import dataclass

from armforge import config
from armforge.errors import DomainError

logger = logging.getLogger(__name__)

AS_WRITTEN_MODE = "as_written"
PHYSICAL_MODE = "physical"


@dataclass(frozen=True)
class GearSpec:
    """
    Spur gear as described for the gripper fingers.

    ``circular_pitch`` is the linear parameter exactly as written in the
    pitch-diameter formula N*p/(N+2); its physical meaning is ambiguous.
    """
    teeth: int
    circular_pitch: float

    def __post_init__(self):
        if self.teeth < 3:
            raise DomainError(f"gear needs at least 3 teeth, got {self.teeth}", teeth=self.teeth)
        if self.circular_pitch <= 0:
            raise DomainError("circular pitch must be positive", circular_pitch=self.circular_pitch)


@dataclass(frozen=True)
class VacuumSpec:
    cup_radius: float
    syringe_radius: float
    plunger_travel: float
    ambient_pressure: float = config.ATMOSPHERIC_PRESSURE

    def __post_init__(self):
        for name in ("cup_radius", "syringe_radius", "ambient_pressure"):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be positive", **{name: getattr(self, name)})
        if self.plunger_travel < 0:
            raise DomainError("plunger travel cannot be negative", plunger_travel=self.plunger_travel)

    @classmethod
    def from_diameters(cls, cup_d: float, syringe_d: float, travel: float, **kwargs) -> "VacuumSpec":
        return cls(cup_radius=cup_d / 2, syringe_radius=syringe_d / 2, plunger_travel=travel, **kwargs)

    @property
    def cup_area(self) -> float:
        return math.pi * self.cup_radius ** 2


@dataclass(frozen=True)
class VacuumResult:
    v1: float
    v2: float
    vf: float
    p1: float
    p2: float
    force: float
    force_as_written: float
    force_physical: float
    payload_capacity: float
    mode: str
    zero_differential: bool

    def to_dict(self) -> dict:
        return {
            "v1": self.v1,
            "v2": self.v2,
            "vf": self.vf,
            "p1": self.p1,
            "p2": self.p2,
            "force": self.force,
            "force_as_written": self.force_as_written,
            "force_physical": self.force_physical,
            "payload_capacity": self.payload_capacity,
            "mode": self.mode,
            "zero_differential": self.zero_differential,
        }


# ==================== Gears ====================

def pitch_diameter(g: GearSpec) -> float:
    """N*p/(N+2), as written."""
    return g.teeth * g.circular_pitch / (g.teeth + 2)


def center_distance(g1: GearSpec, g2: GearSpec) -> float:
    return (pitch_diameter(g1) + pitch_diameter(g2)) / 2


# ==================== Vacuum chain ====================

def pressure_force(pressure: float, area: float) -> float:
    """F = P*A."""
    if area <= 0:
        raise DomainError("area must be positive", area=area)
    return pressure * area


def payload_from_force(force: float) -> float:
    """W = F/9.81 (the divisor is kept as written, not standard gravity)."""
    return force / config.PAYLOAD_DIVISOR


def vacuum_chain(v: VacuumSpec, physical: bool = False) -> VacuumResult:
    """
    Run the suction-gripper chain from dimensions.

    The default force multiplies the residual absolute pressure P2 by the
    cup area, as the sizing calculation was written; ``physical=True`` selects the pressure differential
    (P1 - P2) * A instead. Both forces are always reported.
    """
    v1 = (2.0 / 3.0) * math.pi * v.cup_radius ** 3
    v2 = math.pi * v.syringe_radius ** 2 * v.plunger_travel
    vf = v1 + v2
    p1 = v.ambient_pressure
    p2 = p1 * v1 / vf

    area = v.cup_area
    force_as_written = pressure_force(p2, area)
    force_physical = pressure_force(p1 - p2, area)
    force = force_physical if physical else force_as_written

    zero_differential = v.plunger_travel == 0
    if zero_differential:
        logger.warning("⚠ Plunger travel is zero: no vacuum differential is created")

    return VacuumResult(
        v1=v1,
        v2=v2,
        vf=vf,
        p1=p1,
        p2=p2,
        force=force,
        force_as_written=force_as_written,
        force_physical=force_physical,
        payload_capacity=payload_from_force(force),
        mode=PHYSICAL_MODE if physical else AS_WRITTEN_MODE,
        zero_differential=zero_differential,
    )


def payload_feasible(r: VacuumResult, object_mass: float) -> bool:
    if object_mass < 0:
        raise DomainError("object mass cannot be negative", object_mass=object_mass)
    return r.payload_capacity >= object_mass


def seal_hazard(peak_acceleration: float, threshold: float) -> bool:
    """True when motion is violent enough to risk breaking the cup seal."""
    return peak_acceleration > threshold
