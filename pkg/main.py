"""
Main entry point for the zeta computations.
See `python main.py --help` for the subcommands.
"""

import sys

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
