"""
Simulated range sensing.

The ultrasonic sensor is modelled as time of flight with Gaussian range noise
and a per-material probability that the echo is detected at all. The passive
infrared sensor uses the same detection abstraction with an emissivity map
and no echo. Every reading draws from an explicit numpy Generator.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Sequence, Union

import numpy as np
import pandas as pd

from armforge import config
from armforge.errors import ConfigurationError, DomainError

logger = logging.getLogger(__name__)

# Synthetic defaults: smooth rigid surfaces return the strongest echo.
DEFAULT_REFLECTIVITY = {"wood": 0.95, "metal": 0.98, "plastic": 0.9, "rubber": 0.6}
DEFAULT_EMISSIVITY = {"wood": 0.9, "metal": 0.3, "plastic": 0.85, "rubber": 0.95}

BEAM_WIDTH_AT_TEN_FEET = 38 * config.INCH
TEN_FEET = 120 * config.INCH


def calibrate_half_angle(width: float, at_range: float) -> float:
    """Apex half-angle of a cone that is ``width`` across at ``at_range``."""
    if width <= 0 or at_range <= 0:
        raise DomainError("width and range must be positive", width=width, range=at_range)
    return math.atan((width / 2) / at_range)


def _check_map(name: str, values: Dict[str, float]):
    for material, p in values.items():
        if not 0.0 <= p <= 1.0:
            raise DomainError(f"{name} of '{material}' must lie in [0, 1]", material=material, value=p)


@dataclass(frozen=True)
class UltrasonicSpec:
    sound_speed: float = config.SOUND_SPEED
    frequency: float = config.ULTRASONIC_FREQUENCY
    max_range: float = 4.0
    beam_apex_half_angle: float = calibrate_half_angle(BEAM_WIDTH_AT_TEN_FEET, TEN_FEET)
    noise_sigma: float = 0.005
    material_reflectivity: Dict[str, float] = field(default_factory=lambda: dict(DEFAULT_REFLECTIVITY))

    def __post_init__(self):
        if self.sound_speed <= 0:
            raise DomainError("sound speed must be positive", sound_speed=self.sound_speed)
        if self.noise_sigma < 0 or self.max_range <= 0:
            raise DomainError("noise sigma must be >= 0 and max range > 0")
        _check_map("reflectivity", self.material_reflectivity)

    def response(self, material: str) -> float:
        if material not in self.material_reflectivity:
            raise ConfigurationError(
                f"no reflectivity configured for material '{material}'",
                material=material, known=sorted(self.material_reflectivity),
            )
        return self.material_reflectivity[material]


@dataclass(frozen=True)
class InfraredSpec:
    max_range: float = 1.5
    noise_sigma: float = 0.02
    emissivity: Dict[str, float] = field(default_factory=lambda: dict(DEFAULT_EMISSIVITY))

    def __post_init__(self):
        if self.noise_sigma < 0 or self.max_range <= 0:
            raise DomainError("noise sigma must be >= 0 and max range > 0")
        _check_map("emissivity", self.emissivity)

    def response(self, material: str) -> float:
        if material not in self.emissivity:
            raise ConfigurationError(
                f"no emissivity configured for material '{material}'",
                material=material, known=sorted(self.emissivity),
            )
        return self.emissivity[material]


SensorSpec = Union[UltrasonicSpec, InfraredSpec]


@dataclass(frozen=True)
class RangeReading:
    distance: float
    echo_time: float
    detected: bool


def echo_to_distance(echo_time: float, sound_speed: float = config.SOUND_SPEED) -> float:
    """Round trip halved."""
    if echo_time < 0:
        raise DomainError("echo time cannot be negative", echo_time=echo_time)
    return sound_speed * echo_time / 2


def beam_width_at(spec: UltrasonicSpec, at_range: float) -> float:
    if at_range < 0:
        raise DomainError("range cannot be negative", range=at_range)
    return 2 * at_range * math.tan(spec.beam_apex_half_angle)


def simulate_reading(spec: SensorSpec, true_distance: float, material: str,
                     rng: np.random.Generator) -> RangeReading:
    """
    One reading. Both random draws happen on every call, detected or not,
    so the generator advances identically regardless of the outcome.
    """
    if true_distance < 0:
        raise DomainError("true distance cannot be negative", true_distance=true_distance)
    probability = spec.response(material)

    u = rng.random()
    noise = rng.normal(0.0, spec.noise_sigma)
    detected = true_distance <= spec.max_range and u <= probability
    if not detected:
        return RangeReading(math.nan, math.nan, False)

    distance = max(true_distance + noise, 0.0)
    if isinstance(spec, UltrasonicSpec):
        echo_time = 2 * distance / spec.sound_speed
    else:
        echo_time = math.nan
    return RangeReading(distance, echo_time, True)


def distance_grid(start: float, stop: float, step: float) -> np.ndarray:
    """Inclusive grid from ``start`` to ``stop``."""
    if step <= 0 or stop < start or start < 0:
        raise DomainError("distance grid needs 0 <= start <= stop and step > 0",
                          start=start, stop=stop, step=step)
    return np.round(np.arange(start, stop + step / 2, step), 10)


def run_ranging_experiment(spec: SensorSpec, distances: Sequence[float], material: str,
                           seed: int = config.DEFAULT_SEED, trials: int = 1) -> pd.DataFrame:
    """
    Measured-vs-actual table, ``trials`` readings per distance, in input
    order. Columns: actual, measured, detected.
    """
    distances = list(distances)
    if not distances:
        raise DomainError("ranging experiment needs at least one distance")
    if trials < 1:
        raise DomainError("trials must be at least 1", trials=trials)
    spec.response(material)

    rng = np.random.default_rng(seed)
    rows = []
    for d in distances:
        for _ in range(trials):
            reading = simulate_reading(spec, float(d), material, rng)
            rows.append({"actual": float(d), "measured": reading.distance, "detected": reading.detected})
    return pd.DataFrame(rows, columns=["actual", "measured", "detected"])


def compare_sensors(materials: Iterable[str], distances: Sequence[float],
                    ultrasonic: Optional[UltrasonicSpec] = None,
                    infrared: Optional[InfraredSpec] = None,
                    seed: int = config.DEFAULT_SEED, trials: int = 20) -> pd.DataFrame:
    """
    Detection rate and mean absolute error per sensor and material. Each
    (sensor, material) pair gets its own child stream of ``seed``.
    """
    sensors = {"ultrasonic": ultrasonic or UltrasonicSpec(), "infrared": infrared or InfraredSpec()}
    materials = list(materials)
    children = np.random.SeedSequence(seed).spawn(len(sensors) * len(materials))

    rows = []
    streams = iter(children)
    for sensor_name, spec in sensors.items():
        for material in materials:
            child_seed = next(streams)
            table = run_ranging_experiment(spec, distances, material, seed=child_seed, trials=trials)
            hits = table[table["detected"]]
            error = (hits["measured"] - hits["actual"]).abs().mean() if len(hits) else math.nan
            rows.append({
                "sensor": sensor_name,
                "material": material,
                "detection_rate": float(table["detected"].mean()),
                "mean_abs_error": float(error),
            })
    return pd.DataFrame(rows)
