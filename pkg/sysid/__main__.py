import sys

from sysid.cli.main import main

sys.exit(main())
