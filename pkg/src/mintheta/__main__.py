import sys

from mintheta.cli import main

sys.exit(main())
