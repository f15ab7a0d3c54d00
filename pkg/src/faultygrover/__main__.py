import sys

from faultygrover.cli import main

sys.exit(main())
