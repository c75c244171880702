import sys

from dergraph.cli import main

sys.exit(main())
