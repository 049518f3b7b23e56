"""
dpgauss - Differentially private Gaussian estimation
Entry point for: python -m dpgauss

Usage:
    python -m dpgauss --config experiment.cfg --out results/
"""

import sys

# Allow direct execution (python src/dpgauss/__main__.py) from a checkout
if __name__ == "__main__" and (not __package__ or __package__ == ""):
    import importlib
    from pathlib import Path

    _src_dir = str(Path(__file__).resolve().parent.parent)
    if _src_dir not in sys.path:
        sys.path.insert(0, _src_dir)

    __package__ = "dpgauss"
    importlib.import_module("dpgauss")


def main(argv: list[str] | None = None) -> int:
    """
    Main command-line entry point.

    Args:
        argv: Argument list (defaults to sys.argv[1:])

    Returns:
        int: Exit code (0 success, 2 validation failure, 3 halted on all
        seeds, 4 audit verdict violated, 1 unexpected error)
    """
    from .cli.app import run_cli

    return run_cli(argv)


if __name__ == "__main__":
    sys.exit(main())
