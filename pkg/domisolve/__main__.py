import sys

from domisolve.cli import main

sys.exit(main())
