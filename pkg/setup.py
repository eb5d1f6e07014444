#!/usr/bin/env python3
"""
DCC Simulator Setup Script
Helps set up the simulator environment
"""

import shutil
import subprocess
import sys
from pathlib import Path


def main():
    """Set up the DCC beaconing simulator."""

    print("DCC Simulator Setup")
    print("=" * 30)

    # Check Python version
    if sys.version_info < (3, 9):
        print("Error: Python 3.9+ is required!")
        print(f"   Current version: {sys.version}")
        sys.exit(1)

    print(f"Python version: {sys.version.split()[0]}")

    # Create .env file if it doesn't exist
    simulator_dir = Path(__file__).parent / "simulator"
    env_file = simulator_dir / ".env"
    env_example = simulator_dir / "env.example"

    if not env_file.exists() and env_example.exists():
        print("Creating .env file from template...")
        shutil.copy(env_example, env_file)
        print("   Edit simulator/.env to change log level, output directory or parallelism")
    elif env_file.exists():
        print(".env file already exists")
    else:
        print("No .env template found")

    print("Installing simulator dependencies...")
    try:
        subprocess.run(
            [sys.executable, "-m", "pip", "install", "-r", str(simulator_dir / "app" / "requirements.txt")],
            check=True,
        )
        print("Simulator dependencies installed")
    except subprocess.CalledProcessError as e:
        print(f"Failed to install dependencies: {e}")
        sys.exit(1)

    configs_dir = simulator_dir / "configs"
    if configs_dir.exists():
        print(f"Example configs found in {configs_dir}")
    else:
        print("Example config directory not found!")
        sys.exit(1)

    print("\nSetup complete!")
    print("\nNext steps:")
    print("1. cd simulator")
    print("2. python -m app.main validate-config configs/dense_reactive3.yaml")
    print("3. python -m app.main run configs/dense_reactive3.yaml --out results/demo")
    print("4. python -m app.main plot results/demo")
    print("5. python ../start_simulator.py   (default variant comparison sweep)")

    print("\nFor detailed instructions, see README.md")


if __name__ == "__main__":
    main()
