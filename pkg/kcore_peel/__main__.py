import sys

from kcore_peel.cli.service import main

sys.exit(main())
