"""Brute-force reference values of oscillatory integrals.

The integrand ``a(x) exp(i lam phi(x)) exp(-eps |x|^2)`` is summed with the
trapezoid rule on a uniform grid over the box ``[-R, R]^n`` (``n <= 2``).
The step resolves the fastest local oscillation, ``lam * max |grad phi|``,
with ``points_per_period`` samples.  For smooth integrands that are
negligible at the box boundary the trapezoid rule converges faster than any
power of the step, which is what makes it a useful ground truth.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NoConvergence, TailTooLarge, TooOscillatory
from .problem import Problem, Quadratic

MAX_POINTS = 10**8
TAIL_RTOL = 1e-6
# damping exp(-eps R^2) at the box edge when the radius is chosen for eps
DAMPING_EXPONENT = 30.0
_BLOCK = 1 << 20
_SAMPLES = {1: 4001, 2: 401}


@dataclass(frozen=True)
class QuadratureSpec:
    radius: float = 8.0
    points_per_period: int = 16
    eps: float = 0.0

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        if self.points_per_period < 8:
            raise ValueError("points_per_period must be at least 8")
        if self.eps < 0:
            raise ValueError("eps must be non-negative")


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    tail: float
    step: float
    points: int

    def __complex__(self):
        return complex(self.value)


def max_gradient(problem: Problem, radius: float) -> float:
    """Sampled maximum of ``|grad phi|`` over the box."""
    n = problem.dim
    m = _SAMPLES[n]
    axis = np.linspace(-radius, radius, m)
    coords = np.meshgrid(*([axis] * n), indexing="ij")
    if isinstance(problem.phase, Quadratic):
        return float(np.max(problem.phase.gradient_norm(coords)))
    phi = np.broadcast_to(problem.phase(coords), coords[0].shape)
    grads = np.gradient(phi, axis[1] - axis[0])
    if n == 1:
        grads = [grads]
    return float(np.max(np.sqrt(sum(g * g for g in grads))))


def _grid(problem: Problem, lam: float, spec: QuadratureSpec):
    G = max_gradient(problem, spec.radius)
    h_max = 2.0 * math.pi / (spec.points_per_period * max(lam * G, 1.0))
    intervals = math.ceil(2.0 * spec.radius / h_max)
    total = (intervals + 1) ** problem.dim
    if total > MAX_POINTS:
        raise TooOscillatory(
            f"grid needs {total} points (> {MAX_POINTS}) at lam={lam}, |grad phi|<={G:.3g}"
        )
    axis = np.linspace(-spec.radius, spec.radius, intervals + 1)
    w = np.ones(intervals + 1)
    w[0] = w[-1] = 0.5
    return axis, w, 2.0 * spec.radius / intervals, total


def _integrand(problem: Problem, lam: float, eps: float, coords):
    a = problem.amplitude_values(coords)
    phase = np.broadcast_to(problem.phase(coords), coords[0].shape)
    f = a * np.exp(1j * (lam * phase))
    if eps > 0:
        f = f * np.exp(-eps * sum(c * c for c in coords))
    return f


def oscillatory_quadrature(
    problem: Problem,
    lam: float,
    spec: QuadratureSpec = QuadratureSpec(),
    check_tail: bool = True,
) -> QuadratureResult:
    """Trapezoid-rule value of ``int a exp(i lam phi) exp(-eps |x|^2)`` over the box.

    Raises :class:`TooOscillatory` if the grid would exceed ``1e8`` points and
    :class:`TailTooLarge` if ``max |integrand|`` on the boundary times the
    boundary measure exceeds ``1e-6 * |value|``.
    """
    n = problem.dim
    if n > 2:
        raise ValueError("the quadrature oracle supports n <= 2 only")
    if not lam > 0:
        raise ValueError("lam must be positive")
    axis, w, h, total = _grid(problem, lam, spec)

    if n == 1:
        partial = []
        for start in range(0, len(axis), _BLOCK):
            sl = slice(start, start + _BLOCK)
            f = _integrand(problem, lam, spec.eps, [axis[sl]])
            partial.append(np.sum(f * w[sl]))
        value = complex(np.sum(np.array(partial)) * h)
        edge = _integrand(problem, lam, spec.eps, [axis[[0, -1]]])
        tail = float(np.max(np.abs(edge))) * 2.0
    else:
        rows = max(1, _BLOCK // len(axis))
        partial = []
        for start in range(0, len(axis), rows):
            sl = slice(start, start + rows)
            X, Y = np.meshgrid(axis[sl], axis, indexing="ij")
            f = _integrand(problem, lam, spec.eps, [X, Y])
            partial.append(np.sum(f * np.outer(w[sl], w)))
        value = complex(np.sum(np.array(partial)) * h * h)
        lo, hi = np.full_like(axis, axis[0]), np.full_like(axis, axis[-1])
        edges = [
            _integrand(problem, lam, spec.eps, [x, y])
            for x, y in ((lo, axis), (hi, axis), (axis, lo), (axis, hi))
        ]
        tail = float(max(np.max(np.abs(e)) for e in edges)) * 4.0 * (2.0 * spec.radius)

    if check_tail and tail > TAIL_RTOL * abs(value):
        raise TailTooLarge(
            f"boundary estimate {tail:.3g} exceeds {TAIL_RTOL:g} * |I| = {TAIL_RTOL * abs(value):.3g}"
        )
    return QuadratureResult(value, tail, h, total)


def default_eps_list(lam: float, dim: int) -> list[float]:
    """Geometric damping ladder ``c lam 2^-k``.

    1-D: ``c = 0.2`` with 8 rungs.  2-D: ``c = 0.4`` with 5 rungs, since every
    halving of ``eps`` doubles the box area.  ``I(eps)`` is singular at
    ``|eps| ~ lam / 2``, so the top rung must stay well inside that radius.
    """
    if dim == 1:
        return [0.2 * lam * 2.0 ** (-k) for k in range(8)]
    return [0.4 * lam * 2.0 ** (-k) for k in range(5)]


def richardson_to_zero(eps: Sequence[float], values: Sequence[complex]):
    """Neville extrapolation of ``values(eps)`` to ``eps = 0``.

    Returns the estimate from all nodes and the one that omits the largest
    ``eps``.
    """
    x = np.asarray(eps, dtype=float)
    p = np.asarray(values, dtype=complex).copy()
    m = len(x)
    if m == 1:
        return p[0], p[0]
    prev_last = p[1]
    for level in range(1, m):
        # p[i] becomes the value at 0 of the interpolant through nodes i .. i+level
        for i in range(m - level):
            p[i] = (x[i + level] * p[i] - x[i] * p[i + 1]) / (x[i + level] - x[i])
        if level == m - 2:
            prev_last = p[1]
    return p[0], prev_last


def regularized_value(
    problem: Problem,
    lam: float,
    eps_list: Sequence[float] | None = None,
    spec: QuadratureSpec = QuadratureSpec(),
    rtol: float = 1e-3,
) -> complex:
    """Abel-regularized value: damp with ``exp(-eps |x|^2)`` and extrapolate to 0.

    For each ``eps`` the box radius is enlarged to ``sqrt(30 / eps)`` if
    needed so the damping has decayed to ``e^-30`` at the edge.  Raises
    :class:`NoConvergence` if the two highest-order extrapolants differ by
    more than ``rtol`` relative.
    """
    if eps_list is None:
        eps_list = default_eps_list(lam, problem.dim)
    eps_list = [float(e) for e in eps_list]
    if any(e <= 0 for e in eps_list) or any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise ValueError("eps_list must be positive and strictly decreasing")
    values = []
    for eps in eps_list:
        radius = max(spec.radius, math.sqrt(DAMPING_EXPONENT / eps))
        sub = QuadratureSpec(radius, spec.points_per_period, eps)
        values.append(oscillatory_quadrature(problem, lam, sub).value)
    best, second = richardson_to_zero(eps_list, values)
    if abs(best - second) > rtol * abs(best):
        raise NoConvergence(
            f"extrapolants disagree: {best} vs {second} (rtol {rtol:g})"
        )
    return complex(best)
