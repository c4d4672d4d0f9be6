"""
Configuration management for armforge
"""
import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Base directory
BASE_DIR = Path(__file__).parent.parent
DATA_DIR = Path(__file__).parent / "data"
TABLES_DIR = DATA_DIR / "tables"

# Config search path (checked after the working directory)
CONFIG_DIR = os.getenv("ARMFORGE_CONFIG_DIR", "")

# Logging
LOG_LEVEL = os.getenv("ARMFORGE_LOG_LEVEL", "WARNING").upper()

# Reproducibility
DEFAULT_SEED = int(os.getenv("ARMFORGE_SEED", 0))

# Worker processes for simulate --sweep
WORKERS = int(os.getenv("ARMFORGE_WORKERS", 2))

# Physical constants
GRAVITY = 9.80665              # m/s^2
PAYLOAD_DIVISOR = 9.81         # divisor of W = F/9.81 as written
KGCM_TO_NM = 0.0980665         # 1 kg*cm in N*m
INCH = 0.0254                  # m
DYNAMIC_FACTOR = 1.5           # static -> design torque
ATMOSPHERIC_PRESSURE = 1.035e5 # Pa, as quoted for P1
SOUND_SPEED = 340.0            # m/s
ULTRASONIC_FREQUENCY = 40000.0 # Hz

# Design criteria
MAX_REACH = 24 * INCH
OPERATING_ELEVATION_DEG = 45.0
ANNULUS_INNER = 12 * INCH
ANNULUS_OUTER = 14 * INCH
SWEEP_DEG = 180.0
BASE_EXCLUSION_RADIUS = float(os.getenv("ARMFORGE_BASE_EXCLUSION_M", 0.05))

# Economics (strings so Decimal parsing stays exact)
BUDGET_USD = os.getenv("ARMFORGE_BUDGET_USD", "250.00")
PROFIT_MARGIN = os.getenv("ARMFORGE_PROFIT_MARGIN", "0.30")
UNITS_PER_YEAR = int(os.getenv("ARMFORGE_UNITS_PER_YEAR", 500))

# Metrics
CYCLE_TIME_LIMIT = float(os.getenv("ARMFORGE_CYCLE_LIMIT_S", 10.0))
MAX_COLOR_SIGNATURES = 7

# Default fixture files
DEFAULT_ARM_FILE = "arm.json"
DEFAULT_SCENE_FILE = "scene.json"
DEFAULT_BOM_FILE = "bom.json"
BUNDLED_TABLES = {
    "gripper": "gripper.json",
    "boards": "boards.json",
    "steppers": "steppers.json",
    "servos": "servos.json",
    "materials": "materials.json",
    "sensors": "sensors.json",
}


def resolve_path(name) -> Path:
    """
    Find a config file: as given (absolute or relative to the working
    directory), then under ARMFORGE_CONFIG_DIR, then in the bundled data.
    """
    candidate = Path(name)
    if candidate.is_absolute() or candidate.exists():
        return candidate

    config_dir = os.getenv("ARMFORGE_CONFIG_DIR", CONFIG_DIR)
    search = [Path(config_dir)] if config_dir else []
    search += [DATA_DIR, TABLES_DIR]
    for directory in search:
        path = directory / candidate
        if path.exists():
            return path
    return candidate
