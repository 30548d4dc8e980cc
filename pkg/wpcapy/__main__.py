import sys

from wpcapy.cli import main

sys.exit(main())
