#!/usr/bin/env python3

import sys

from climate_front.cli import main

if __name__ == '__main__':
    sys.exit(main(sys.argv[1:]))
