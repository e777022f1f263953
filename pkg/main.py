#!/usr/bin/python3
# Numerical verification of mixed moments of GL(2) and sym^2 L-functions.
# Usage: python3 main.py SUBCOMMAND [options]; python3 main.py --help lists the subcommands.
import sys

from src.cli.runner import main

if __name__ == "__main__":
    sys.exit(main())
