import sys

from lfgkit.cli import main

sys.exit(main())
