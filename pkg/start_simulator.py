#!/usr/bin/env python3
"""
DCC Simulator Startup Script
Runs the default variant comparison sweep and plots it
"""

import subprocess
import sys
from pathlib import Path


def main():
    """Run the variant comparison sweep."""

    simulator_dir = Path(__file__).parent / "simulator"
    if not simulator_dir.exists():
        print("Error: simulator directory not found!")
        sys.exit(1)

    if sys.version_info < (3, 9):
        print("Error: Python 3.9+ is required!")
        sys.exit(1)

    spec = sys.argv[1] if len(sys.argv) > 1 else "configs/sweep_variants.yaml"
    out = Path("results") / Path(spec).stem

    if not (simulator_dir / ".env").exists():
        print("Note: no simulator/.env found, using default settings.")

    print(f"Running sweep {spec} -> simulator/{out}")
    print("=" * 50)
    try:
        subprocess.run([sys.executable, "-m", "app.main", "sweep", spec, "--out", str(out)], cwd=simulator_dir, check=True)
        subprocess.run([sys.executable, "-m", "app.main", "plot", str(out)], cwd=simulator_dir, check=True)
    except KeyboardInterrupt:
        print("\nSweep stopped by user")
    except subprocess.CalledProcessError as e:
        print(f"Sweep failed: {e}")
        sys.exit(e.returncode)


if __name__ == "__main__":
    main()
