#!/usr/bin/env python

"""
Compute geodesic graphs and decide natural reductivity for a catalog space or a space file

geograph <solve|verdict|verify|catalog|describe> [--space NAME | --file PATH]
         [--seed N] [--samples N] [--param key=rational] [--json] [--verbose]
"""

import sys

from geograph.cli import main

if __name__ == "__main__":
    sys.exit(main())
