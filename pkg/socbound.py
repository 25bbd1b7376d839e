#!/usr/bin/env python
import sys

from socbound.cli import main

sys.exit(main())
