"""
Approximants with shrinking positive pieces
===========================================

psi_n splits each positive-slope interval of psi_{n-1} in two.  The
positive slopes blow up while the functions converge uniformly.  Every
level is extreme, which the grid oracle confirms independently.
"""

# %%
from fractions import Fraction as F

from groupcut import extremality_test, oracle_check
from groupcut.compendium import GeometricEpsParams, positive_slope, psi_n
from groupcut.pwl import merged_points

f, q = F(2, 5), F(3)
psis = [psi_n(GeometricEpsParams(f, q, n)) for n in range(6)]

# %%
# Slopes and sizes
for n, pi in enumerate(psis):
    gamma = GeometricEpsParams(f, q, n).gamma(n)
    print(n, len(pi.points), positive_slope(f, gamma))

# %%
# Uniform convergence: consecutive gaps halve
for a, b in zip(psis, psis[1:]):
    print(max(abs(a.eval(x) - b.eval(x)) for x in merged_points(a, b)))

# %%
# Engine against oracle on the first levels
for n in range(3):
    print(n, extremality_test(psis[n]).status, oracle_check(psis[n]).to_json()["runs"])
