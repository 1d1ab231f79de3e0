import sys

from pairgate.cli import main

sys.exit(main())
