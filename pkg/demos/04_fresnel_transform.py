"""
Fresnel integral and the imaginary Gaussian
===========================================

int exp(i x^2/2) dx does not converge absolutely.  Damping by exp(-eps x^2)
and extrapolating to eps = 0 recovers sqrt(2 pi) exp(i pi/4).
"""

# %%
import cmath
import math

import numpy as np

from stphase.expansion import imaginary_gaussian_fourier
from stphase.oracle import default_eps_list, oscillatory_quadrature, QuadratureSpec, regularized_value
from stphase.problem import quadratic_problem

fresnel = quadratic_problem("1", [[1.0]])
for eps in default_eps_list(1.0, 1)[:4]:
    spec = QuadratureSpec(radius=max(8.0, math.sqrt(30 / eps)), eps=eps)
    print(f"eps={eps:.4f}  I_eps={oscillatory_quadrature(fresnel, 1.0, spec).value:.10f}")

v = regularized_value(fresnel, 1.0)
print("extrapolated", v, " exact", math.sqrt(2 * math.pi) * cmath.exp(1j * math.pi / 4))

# %%
# Fourier transform of exp(i <Qx,x>/2): unit factor over sqrt|det Q| times a chirp.
Q = np.array([[2.0, 0.5], [0.5, -1.0]])
for xi in ([0.0, 0.0], [1.0, 0.5]):
    u = imaginary_gaussian_fourier(Q, xi)
    print(xi, u, abs(u), abs(np.linalg.det(Q)) ** -0.5)
