import sys

from su11if.cli import main

sys.exit(main())
