"""
dpgauss - Differentially private Gaussian estimation

Quick-start entry point for local development.

Usage:
    python main.py --config src/dpgauss/config/pure_cov.cfg --out results/
    python -m dpgauss ...   # Run as package (recommended)
    dpgauss ...             # After: pip install -e .
"""

import sys
from pathlib import Path

# Add src directory to path for module imports
sys.path.insert(0, str(Path(__file__).parent / "src"))


def main() -> int:
    from dpgauss.__main__ import main as _main
    return _main()


if __name__ == "__main__":
    sys.exit(main())
