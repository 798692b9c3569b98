import sys

from csifb.main import main

sys.exit(main())
