"""
Benchmark table over five objects
=================================

Repeat the four-finger (two per hand) roll for each bundled object and
tabulate the mean relative motion error and the success rate. Pass a
repetition count on the command line; the default is 5.
"""

import sys

from handplan.model import ContactUpdateMode
from handplan.scenarios import render_table, run_suite, benchmark_spec

reps = int(sys.argv[1]) if len(sys.argv) > 1 else 5
specs = [benchmark_spec(o) for o in ("ellipse", "sphere", "cylinder", "cone", "cube")]

print(render_table(run_suite(specs, repetitions=reps)))

# The literal contact update moves every contact by the same offset, which
# is a translation rather than a roll, so most runs fail to plan.
print(render_table(run_suite(specs, repetitions=1, mode=ContactUpdateMode.PAPER_LITERAL)))
