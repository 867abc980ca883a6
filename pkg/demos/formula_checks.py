"""
Formula verification suites
===========================

Four independent numerical cross-checks of the closed forms the solvers
lean on.  Each suite compares a formula against brute-force quadrature or
partial summation and reports its worst deviation.
"""

from gaswall import run_identity_suites

for result in run_identity_suites():
    print(result)

# the suites are also reachable one at a time, with tunable effort
from gaswall.identities import shell_suite

print()
print(shell_suite(dims=(2,), n_pairs=10))
