import sys

from preserver_lab.cli import main

sys.exit(main())
