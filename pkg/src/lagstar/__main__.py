import sys

from lagstar.cli import main

sys.exit(main())
