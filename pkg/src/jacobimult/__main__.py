import sys

from jacobimult.cli import main

sys.exit(main())
