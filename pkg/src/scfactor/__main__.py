"""Module entry point: ``python -m scfactor`` behaves like the CLI."""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())
