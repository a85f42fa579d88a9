"""Allow ``python -m kpal2d``."""
import sys

from .cli import main

sys.exit(main())
