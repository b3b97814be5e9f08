import sys

from polylift.cli import main

sys.exit(main())
