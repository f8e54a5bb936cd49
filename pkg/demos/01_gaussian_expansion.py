"""
Stationary phase on a Gaussian
==============================

The integral of exp(-x^2/2) exp(i lam x^2/2) has the closed form
sqrt(2 pi / (1 - i lam)), so every term of the expansion can be checked.
"""

# %%
# The correction terms t_j = A^j a(0) / j! for a = exp(-x^2/2), Q = 1.
import cmath
import math

import numpy as np

from stphase.expansion import expand, prepare
from stphase.problem import quadratic_problem

p = quadratic_problem("exp(-x1^2/2)", [[1.0]], order=4)
print("t_j:", [complex(round(t.real, 12), round(t.imag, 12)) for t in prepare(p).terms])

# %%
# Each extra term buys one power of lam.
lams = 50.0 * 2.0 ** np.arange(7)
exact = np.sqrt(2 * np.pi / (1 - 1j * lams))
for N in range(4):
    q = p.with_order(N)
    errs = np.array([abs(expand(q, l).value - e) for l, e in zip(lams, exact)])
    slope = np.polyfit(np.log(lams), np.log(errs), 1)[0]
    print(f"N={N}  slope {slope:+.3f}  predicted {-(1.5 + N):+.1f}")

# %%
# Polynomial amplitudes terminate: 1 + x^2 needs only t_0 and t_1.
poly = quadratic_problem("1+x1^2", [[1.0]], order=3)
print("1+x^2 terms:", prepare(poly).terms)
lam = 10.0
print(expand(poly, lam).value, math.sqrt(2 * math.pi / lam) * cmath.exp(1j * math.pi / 4) * (1 + 1j / lam))
