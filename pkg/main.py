"""
main.py - Entry point for the AutomaForge command line.
"""

import sys

from automaforge.harness.cli import main


if __name__ == "__main__":
    sys.exit(main())
