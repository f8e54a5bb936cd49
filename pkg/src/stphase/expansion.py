"""Stationary phase expansions of ``I(lam) = int a(x) exp(i lam phi(x)) dx``.

For a non-degenerate critical point ``x0`` with Hessian ``Q``::

    I(lam) ~ exp(i lam phi(x0)) (2 pi / lam)^(n/2)
             * exp(i pi/4 sgn Q) / |det Q|^(1/2) * sum_k lam^-k t_k

with remainder ``O(lam^-(n/2 + N + 1))``.  For a quadratic phase the
coefficients are ``t_j = A^j a(x0) / j!`` where ``A = (i/2) sum_kl
(Q^-1)_kl d_k d_l``.  For a general phase the cubic-and-higher remainder
``r`` of the phase is re-expanded::

    t_k = sum_{m=0}^{2k} i^m / m! / (m+k)! * A^(m+k)[a r^m](x0)

All derivative information comes from jets at ``x0``; the jet pipeline runs
once per problem and the result is reused for every ``lam``.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMatrix, NoConvergence, OrderExceeded
from .expr import Expr, eval_jet, eval_scalar
from .jet import Jet, multi_indices
from .linalg import DEGENERACY_TOL, Eigendecomposition, as_symmetric, jacobi_eigendecompose
from .problem import General, Problem, Quadratic

_R = math.sqrt(0.5)
# exp(i pi/4 * s) for s mod 8, written out so the unit factor carries no
# trigonometric roundoff
_EIGHTH_ROOTS = (
    complex(1.0, 0.0), complex(_R, _R), complex(0.0, 1.0), complex(-_R, _R),
    complex(-1.0, 0.0), complex(-_R, -_R), complex(0.0, -1.0), complex(_R, -_R),
)


def unit_phase(signature: int) -> complex:
    """``exp(i pi/4 * signature)``."""
    return _EIGHTH_ROOTS[signature % 8]


def apply_operator_A(f: Jet, Qinv) -> Jet:
    """Jet of ``(1/2i) <Q^-1 D, D> f = (i/2) sum_kl (Q^-1)_kl d_k d_l f``.

    The result has order ``f.order - 2``.
    """
    if f.order < 2:
        raise OrderExceeded(f"operator A needs a jet of order >= 2, got {f.order}")
    Qinv = np.asarray(Qinv, dtype=float)
    n = f.dim
    first = [f.partial(k) for k in range(n)]
    acc = None
    for k in range(n):
        for l in range(n):
            w = Qinv[k, l]
            if w == 0.0:
                continue
            term = first[k].partial(l) * w
            acc = term if acc is None else acc + term
    if acc is None:
        acc = Jet.constant(0.0, f.order - 2, f.center)
    return acc * 0.5j


def operator_A_power_at_center(f: Jet, Qinv, power: int) -> complex:
    """``A^power f`` evaluated at the jet's center."""
    g = f.truncate(2 * power)
    for _ in range(power):
        g = apply_operator_A(g, Qinv)
    return complex(g.value)


# ---------------------------------------------------------------------------
# critical points
# ---------------------------------------------------------------------------

def find_critical_point(
    phi: Expr,
    guess,
    tol: float = 1e-12,
    max_iter: int = 50,
    degeneracy_tol: float = DEGENERACY_TOL,
) -> np.ndarray:
    """Newton's method on ``grad phi`` using order-2 jets.

    Converged when ``|grad phi| <= tol`` and the Newton step is below
    ``tol * (1 + |x|)``.  A Hessian whose smallest eigenvalue is below
    ``degeneracy_tol`` times ``max(1, |largest eigenvalue at the guess|)``
    raises :class:`DegenerateMatrix`.  The absolute floor catches degenerate
    points in one dimension, where a relative eigenvalue test is vacuous and
    Newton otherwise creeps linearly toward the point.
    """
    x = np.atleast_1d(np.asarray(guess, dtype=float)).copy()
    scale = None
    for _ in range(max_iter + 1):
        j = eval_jet(phi, x, 2)
        g = np.asarray(j.gradient(), dtype=float)
        eig = jacobi_eigendecompose(j.hessian(), degeneracy_tol)
        amax = float(np.max(np.abs(eig.alphas)))
        if scale is None:
            scale = max(1.0, amax)
        if np.min(np.abs(eig.alphas)) <= degeneracy_tol * scale:
            raise DegenerateMatrix(f"Hessian nearly singular at {x.tolist()}: {eig.alphas}")
        step = eig.inverse @ g
        if np.linalg.norm(g) <= tol and np.linalg.norm(step) <= tol * (1.0 + np.linalg.norm(x)):
            return x - step
        x = x - step
    raise NoConvergence(f"Newton did not converge in {max_iter} iterations (last x={x.tolist()})")


# ---------------------------------------------------------------------------
# results
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExpansionResult:
    lam: float
    prefactor: complex
    terms: tuple
    partial_sums: tuple
    value: complex
    remainder_exponent: float
    x0: tuple
    signature: int
    det: float


@dataclass(frozen=True, eq=False)
class Expansion:
    """lam-independent part of a stationary phase expansion."""

    dim: int
    order: int
    x0: tuple
    phase_value: float
    hessian: Eigendecomposition
    terms: tuple

    @property
    def remainder_exponent(self) -> float:
        return -(self.dim / 2 + self.order + 1)

    def prefactor(self, lam: float) -> complex:
        if not lam > 0:
            raise ValueError("lam must be positive")
        mag = (2.0 * math.pi / lam) ** (self.dim / 2) / math.sqrt(abs(self.hessian.det))
        unit = unit_phase(self.hessian.signature)
        if self.phase_value != 0.0:
            unit = unit * np.exp(1j * lam * self.phase_value)
        return complex(mag * unit)

    def at(self, lam: float) -> ExpansionResult:
        lam = float(lam)
        pre = self.prefactor(lam)
        sums, acc = [], 0.0j
        for j, t in enumerate(self.terms):
            acc += t * lam ** (-j)
            sums.append(pre * acc)
        return ExpansionResult(
            lam=lam,
            prefactor=pre,
            terms=self.terms,
            partial_sums=tuple(sums),
            value=sums[-1],
            remainder_exponent=self.remainder_exponent,
            x0=self.x0,
            signature=self.hessian.signature,
            det=self.hessian.det,
        )

    def value(self, lam: float) -> complex:
        return self.at(lam).value


def _quadratic_terms(a: Expr, Qinv, x0, order: int) -> tuple:
    aj = eval_jet(a, x0, 2 * order)
    # leading coefficient is a(x0); it is never cast through the A pipeline
    terms = [complex(aj.value)]
    g = aj
    for j in range(1, order + 1):
        g = apply_operator_A(g, Qinv)
        terms.append(complex(g.value) / math.factorial(j))
    return tuple(terms)


def _general_terms(a: Expr, phi_jet: Jet, Qinv, x0, order: int) -> tuple:
    K = 6 * order
    aj = eval_jet(a, x0, K)
    terms = [0.0j] * (order + 1)
    terms[0] = complex(aj.value)
    if order == 0:
        return tuple(terms)

    # cubic-and-higher part of the phase about x0
    rc = np.array(phi_jet.truncate(K).coeffs, dtype=float)
    low = [i for i, d in enumerate(multi_indices(len(x0), K)) if sum(d) <= 2]
    rc[low] = 0.0
    r = Jet(rc, K, x0)

    ar = aj  # a * r^m
    for m in range(0, 2 * order + 1):
        if m > 0:
            ar = ar * r
        kmin = (m + 1) // 2  # A^(m+k)[a r^m](x0) vanishes unless m <= 2k
        g = ar
        for j in range(1, m + order + 1):
            g = apply_operator_A(g, Qinv)
            k = j - m
            if k >= max(kmin, 1):
                coef = (1j ** m) / (math.factorial(m) * math.factorial(j))
                terms[k] += coef * complex(g.value)
    return tuple(terms)


@functools.lru_cache(maxsize=64)
def prepare(problem: Problem) -> Expansion:
    """Run the jet pipeline for ``problem``; cached per problem."""
    N = problem.order
    if isinstance(problem.phase, Quadratic):
        eig = jacobi_eigendecompose(problem.phase.Q)
        x0 = problem.phase.x0
        terms = _quadratic_terms(problem.amplitude, eig.inverse, x0, N)
        return Expansion(problem.dim, N, x0, 0.0, eig, terms)

    phase: General = problem.phase
    x0 = tuple(float(v) for v in find_critical_point(phase.phi, phase.x0_guess))
    phi_jet = eval_jet(phase.phi, x0, max(6 * N, 2))
    eig = jacobi_eigendecompose(phi_jet.hessian())
    terms = _general_terms(problem.amplitude, phi_jet, eig.inverse, x0, N)
    return Expansion(problem.dim, N, x0, float(phi_jet.value), eig, terms)


def quadratic_expansion(problem: Problem, lam: float) -> ExpansionResult:
    if not isinstance(problem.phase, Quadratic):
        raise TypeError("quadratic_expansion needs a quadratic phase")
    return prepare(problem).at(lam)


def general_expansion(problem: Problem, lam: float) -> ExpansionResult:
    if not isinstance(problem.phase, General):
        raise TypeError("general_expansion needs a phase formula")
    return prepare(problem).at(lam)


def expand(problem: Problem, lam: float) -> ExpansionResult:
    """Dispatch to the quadratic or general expansion."""
    return prepare(problem).at(lam)


# ---------------------------------------------------------------------------
# Fourier transform of an imaginary Gaussian
# ---------------------------------------------------------------------------

def imaginary_gaussian_fourier(Q, xi, sign: int = 1) -> complex:
    """Fourier transform of ``exp(sign * i <Q x, x> / 2)`` at ``xi``.

    Convention ``u_hat(xi) = (2 pi)^(-n/2) int exp(-i x.xi) u(x) dx``; the
    result is ``exp(sign i pi/4 sgn Q) / |det Q|^(1/2) *
    exp(-sign i <Q^-1 xi, xi> / 2)``.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    eig = jacobi_eigendecompose(as_symmetric(Q))
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    quad = float(xi @ eig.inverse @ xi)
    unit = unit_phase(sign * eig.signature)
    return complex(unit / math.sqrt(abs(eig.det)) * np.exp(-sign * 0.5j * quad))
