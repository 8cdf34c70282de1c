"""
Minimality of piecewise-linear functions
========================================

Build a few functions from the catalog, check that they are minimal, and
see what a violation report looks like.
"""

# %%
# Two catalog functions
# ---------------------
from fractions import Fraction as F

from groupcut import gmic, minimality_test, rlm_dpl1_extreme_3a

pi = gmic(F(1, 5))
print(pi.points, pi.slopes)

rlm = rlm_dpl1_extreme_3a(F(1, 5))
for rec in rlm.to_records():
    print(rec)

# %%
# Both pass; the report carries the detected f
print(minimality_test(pi).is_minimal, minimality_test(rlm).f)

# %%
# Breaking minimality
# -------------------
# Halving gmic keeps subadditivity but loses pi(f) = 1.
report = minimality_test(gmic(F(1, 2)) * F(1, 2), F(1, 2))
print(report.checks_failed())
for v in report.violations:
    print(v.check, v.value, v.witness)
