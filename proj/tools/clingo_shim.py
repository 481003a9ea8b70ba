#!/usr/bin/env python3
# clingo entry point that keeps the solver's exit code (10/20/30).
# The module form `python -m clingo` always exits 0.
import sys

from clingo.__main__ import PyClingoApplication
from clingo.application import clingo_main

sys.exit(clingo_main(PyClingoApplication()))
