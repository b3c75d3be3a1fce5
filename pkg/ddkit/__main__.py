import sys

from ddkit.main import main

sys.exit(main())
