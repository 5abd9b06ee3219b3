import sys

from betatw.cli import main

sys.exit(main())
