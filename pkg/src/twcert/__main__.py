import sys

from twcert.cli import main

sys.exit(main())
