import sys

from symdis.cli import main

sys.exit(main())
