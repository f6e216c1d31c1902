import sys

from orbithull.cli import main

sys.exit(main())
