"""
No critical point, no contribution
==================================

With the amplitude supported in [1, 2] and phi = x^2/2, grad phi never
vanishes on the support and I(lam) decays faster than the stationary terms.
"""

# %%
from pathlib import Path

import numpy as np

from stphase.oracle import oscillatory_quadrature
from stphase.problem import load_problem

bump = load_problem(Path(__file__).resolve().parent.parent / "problems" / "bump-offset.json")
x = np.linspace(0.5, 2.5, 9)
print("amplitude samples:", np.round(bump.amplitude_values([x]), 5))

# %%
# The amplitude is C^3, so integration by parts gives about lam^-5 here; a
# smooth bump would decay faster than any power.
lams = 100.0 * 2.0 ** np.arange(6)
vals = [abs(oscillatory_quadrature(bump, l).value) for l in lams]
for l, v in zip(lams, vals):
    print(f"lam={l:7.0f}  |I|={v:.3e}")
print("slope", np.polyfit(np.log(lams), np.log(vals), 1)[0])
