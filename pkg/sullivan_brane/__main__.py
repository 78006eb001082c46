"""Allow python -m sullivan_brane."""

import sys

from sullivan_brane.cli import main

sys.exit(main())
