"""Allow ``python3 -m koszul_surgery``."""

import sys

from .cli import main

sys.exit(main())
