import sys

from tsirelson_lab import main

sys.exit(main())
