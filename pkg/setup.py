"""
Setup script for armforge
Checks dependencies and prepares the working directories
"""
import shutil
import sys
from pathlib import Path

BASE_DIR = Path(__file__).parent


def create_directories():
    """Create output directories used by the study runner and simulate sweeps"""
    directories = [
        BASE_DIR / "studies" / "study_logs",
        BASE_DIR / "runs",
    ]

    for directory in directories:
        directory.mkdir(parents=True, exist_ok=True)
        print(f"✓ Created directory: {directory.relative_to(BASE_DIR)}")


def check_dependencies():
    """Check if required packages are installed"""
    required_packages = {
        "numpy": "numpy",
        "scipy": "scipy",
        "pandas": "pandas",
        "dotenv": "python-dotenv",
        "pytest": "pytest",
    }

    missing_packages = []

    for module, package in required_packages.items():
        try:
            __import__(module)
        except ImportError:
            missing_packages.append(package)

    if missing_packages:
        print("\n⚠ Missing packages:")
        for package in missing_packages:
            print(f"  - {package}")
        print("\nPlease run: pip install -r requirements.txt")
        return False

    print("✓ All required packages are installed")
    return True


def check_bundled_data():
    """Make sure the default arm, scene, BOM and decision tables are present"""
    data_dir = BASE_DIR / "armforge" / "data"
    expected = ["arm.json", "scene.json", "bom.json", "tables/gripper.json", "tables/sensors.json"]
    missing = [name for name in expected if not (data_dir / name).exists()]
    if missing:
        print(f"✗ Bundled data missing: {', '.join(missing)}")
        return False
    print("✓ Bundled arm, scene, BOM and decision tables found")
    return True


def create_env_file():
    """Create .env file if it doesn't exist"""
    env_file = BASE_DIR / ".env"
    env_example = BASE_DIR / ".env.example"

    if not env_file.exists() and env_example.exists():
        shutil.copy(env_example, env_file)
        print("✓ Created .env file from template")
    elif env_file.exists():
        print("✓ .env file already exists")


def main():
    print("=" * 60)
    print("armforge Setup")
    print("=" * 60)
    print()

    print("Creating project directories...")
    create_directories()
    print()

    print("Checking dependencies...")
    if not check_dependencies():
        sys.exit(1)
    print()

    print("Checking bundled data...")
    if not check_bundled_data():
        sys.exit(1)
    print()

    print("Setting up environment...")
    create_env_file()
    print()

    print("=" * 60)
    print("✓ Setup complete!")
    print("=" * 60)
    print()
    print("Next steps:")
    print("1. Review and edit .env file if needed")
    print("2. Run the tests: pytest -m \"not slow\"")
    print("3. Try the CLI: python -m armforge dof --config arm.json")
    print("4. Run every study: python studies/run_all.py")
    print()


if __name__ == "__main__":
    main()
