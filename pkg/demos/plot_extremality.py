"""
Extreme or not
==============

The extremality test returns a verdict together with the data behind it:
covered components and solved slopes for extreme functions, an explicit
decomposition for the others.
"""

# %%
from fractions import Fraction as F
from pathlib import Path

from groupcut import combine, drlm_backward_3_slope, extremality_test, gmic, rlm_dpl1_extreme_3a
from groupcut.svg import plot_complex, plot_function

out = Path("demo_output")
out.mkdir(exist_ok=True)

# %%
# A three-slope extreme function
# ------------------------------
pi = drlm_backward_3_slope(F(1, 12), F(1, 6))
v = extremality_test(pi)
print(v.status)
print(v.components.to_json()["components"])
print({k: str(s) for k, s in v.solved_parameters.items()})
(out / "drlm_complex.svg").write_text(plot_complex(pi, title="drlm_backward_3_slope(1/12, 1/6)"))

# %%
# A discontinuous one
# -------------------
# One-sided limits enter the system as their own unknowns.
v = extremality_test(rlm_dpl1_extreme_3a(F(1, 5)))
print(v.status, {k: str(s) for k, s in v.solved_parameters.items()})

# %%
# Averaging two extreme functions
# -------------------------------
mix = combine(gmic(F(1, 5)), rlm_dpl1_extreme_3a(F(1, 5)), F(1, 2))
v = extremality_test(mix)
w = v.witness
print(v.status, "kernel dimension", v.kernel_dimension, "epsilon", w.epsilon)
svg = plot_function([mix, w.pi1, w.pi2, w.perturbation], ["pi", "pi1", "pi2", "pbar"], title="decomposition")
(out / "mixture_witness.svg").write_text(svg)
