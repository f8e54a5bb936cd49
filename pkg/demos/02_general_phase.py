"""
A non-quadratic phase
=====================

phi = cos(x) - 1 is stationary at 0 with Hessian -1.  The expansion about 0
is only half the story: phi is also stationary at every k pi.
"""

# %%
import math

import numpy as np

from stphase.expansion import expand, prepare
from stphase.oracle import oscillatory_quadrature
from stphase.problem import general_problem

wide = general_problem("exp(-x1^2/2)", "cos(x1)-1", [0.2], order=1)
ex = prepare(wide)
print("x0 =", ex.x0, " sgn =", ex.hessian.signature, " t_1 =", ex.terms[1])

# %%
# Against brute-force quadrature the error stalls at lam^-1/2: that is the
# leading contribution of the points +-pi, where the amplitude is exp(-pi^2/2).
lams = 100.0 * 2.0 ** np.arange(6)
errs = [abs(expand(wide, l).value - oscillatory_quadrature(wide, l).value) for l in lams]
print("one point     slope", np.polyfit(np.log(lams), np.log(errs), 1)[0])

guesses = [0.2, math.pi - 0.1, -math.pi + 0.1, 2 * math.pi - 0.1, -2 * math.pi + 0.1]
errs = []
for l in lams:
    total = sum(expand(general_problem("exp(-x1^2/2)", "cos(x1)-1", [g], order=1), l).value
                for g in guesses)
    errs.append(abs(total - oscillatory_quadrature(wide, l).value))
print("all points    slope", np.polyfit(np.log(lams), np.log(errs), 1)[0])

# %%
# A narrower amplitude makes the far points negligible and the single
# expansion follows lam^-(N + 3/2).
for N in (0, 1, 2):
    narrow = general_problem("exp(-4*x1^2)", "cos(x1)-1", [0.2], order=N)
    errs = [abs(expand(narrow, l).value - oscillatory_quadrature(narrow, l).value) for l in lams]
    print(f"narrow N={N}  slope", np.polyfit(np.log(lams), np.log(errs), 1)[0])
