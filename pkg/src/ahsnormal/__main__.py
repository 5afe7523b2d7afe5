"""Module entry point: python -m ahsnormal."""

import sys

from .cli import main

sys.exit(main())
