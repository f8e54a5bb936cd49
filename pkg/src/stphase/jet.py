"""Dense truncated multivariate Taylor polynomials ("jets").

A :class:`Jet` of dimension ``n`` and order ``K`` about a center ``c`` stores
the normalized Taylor coefficients ``d^delta f(c) / delta!`` for every
multi-index ``|delta| <= K``.  Coefficients are kept in a flat array in
graded-lexicographic order: first by total degree, then lexicographically
with larger leading exponents first, e.g. for ``n = 2``::

    (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ...

Jets are immutable values; every operation returns a new jet.
"""
from __future__ import annotations

import functools
import math
from typing import Sequence

import numpy as np

from .errors import DomainError, EvalError, OrderExceeded, ShapeMismatch

ELEMENTARY = ("exp", "sin", "cos", "sqrt", "log")


# ---------------------------------------------------------------------------
# multi-index bookkeeping
# ---------------------------------------------------------------------------

def _compositions(total: int, n: int):
    """Exponent tuples of length n summing to total, leading exponent first."""
    if n == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, n - 1):
            yield (first,) + rest


@functools.lru_cache(maxsize=None)
def multi_indices(n: int, order: int) -> tuple[tuple[int, ...], ...]:
    """All multi-indices with ``|delta| <= order`` in graded-lex order."""
    out = []
    for d in range(order + 1):
        out.extend(_compositions(d, n))
    return tuple(out)


@functools.lru_cache(maxsize=None)
def index_map(n: int, order: int) -> dict[tuple[int, ...], int]:
    return {a: i for i, a in enumerate(multi_indices(n, order))}


def num_coeffs(n: int, order: int) -> int:
    return math.comb(n + order, n)


@functools.lru_cache(maxsize=None)
def _degrees(n: int, order: int) -> np.ndarray:
    return np.array([sum(a) for a in multi_indices(n, order)], dtype=int)


@functools.lru_cache(maxsize=None)
def _product_table(n: int, order: int):
    """Index triples (i, j, k) with alpha_i + alpha_j = alpha_k, |alpha_k| <= order."""
    idx = multi_indices(n, order)
    lookup = index_map(n, order)
    degs = _degrees(n, order)
    ii, jj, kk = [], [], []
    for i, a in enumerate(idx):
        da = degs[i]
        for j, b in enumerate(idx):
            if da + degs[j] > order:
                # graded order: every later b has degree >= degs[j]
                break
            ii.append(i)
            jj.append(j)
            kk.append(lookup[tuple(x + y for x, y in zip(a, b))])
    return np.array(ii), np.array(jj), np.array(kk)


@functools.lru_cache(maxsize=None)
def _partial_table(n: int, order: int, axis: int):
    """Source indices and factors for d/dx_axis mapping order -> order-1."""
    src = index_map(n, order)
    src_idx, factor = [], []
    for a in multi_indices(n, order - 1):
        b = list(a)
        b[axis] += 1
        src_idx.append(src[tuple(b)])
        factor.append(float(b[axis]))
    return np.array(src_idx, dtype=int), np.array(factor)


def _factorial_weights(n: int, order: int) -> np.ndarray:
    return np.array(
        [math.prod(math.factorial(k) for k in a) for a in multi_indices(n, order)],
        dtype=float,
    )


# ---------------------------------------------------------------------------
# the Jet value type
# ---------------------------------------------------------------------------

class Jet:
    """Truncated Taylor polynomial about ``center``.

    Parameters
    ----------
    coeffs : array_like
        Normalized coefficients in graded-lex order, length
        ``binomial(n + order, n)``.  Real or complex.
    order : int
        Truncation degree ``K``.
    center : sequence of float
        Expansion point; its length fixes the dimension ``n``.
    """

    __slots__ = ("coeffs", "order", "center")

    def __init__(self, coeffs, order: int, center: Sequence[float]):
        center = tuple(float(c) for c in center)
        coeffs = np.array(coeffs)
        if coeffs.dtype.kind not in "fc":
            coeffs = coeffs.astype(float)
        if coeffs.shape != (num_coeffs(len(center), order),):
            raise ShapeMismatch(
                f"expected {num_coeffs(len(center), order)} coefficients "
                f"for n={len(center)}, K={order}, got shape {coeffs.shape}"
            )
        coeffs.setflags(write=False)
        self.coeffs = coeffs
        self.order = int(order)
        self.center = center

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, value, order: int, center: Sequence[float]) -> "Jet":
        n = len(center)
        c = np.zeros(num_coeffs(n, order), dtype=np.result_type(value, float))
        c[0] = value
        return cls(c, order, center)

    @classmethod
    def variable(cls, axis: int, order: int, center: Sequence[float]) -> "Jet":
        """Jet of the coordinate function ``x_{axis+1}`` (axis is 0-based)."""
        n = len(center)
        c = np.zeros(num_coeffs(n, order))
        c[0] = center[axis]
        if order >= 1:
            e = [0] * n
            e[axis] = 1
            c[index_map(n, order)[tuple(e)]] = 1.0
        return cls(c, order, center)

    @classmethod
    def from_dict(cls, terms: dict, order: int, center: Sequence[float]) -> "Jet":
        """Build a jet from ``{multi_index: coefficient}``; 1-D keys may be ints."""
        n = len(center)
        lookup = index_map(n, order)
        dtype = complex if any(isinstance(v, complex) for v in terms.values()) else float
        c = np.zeros(num_coeffs(n, order), dtype=dtype)
        for key, v in terms.items():
            key = (key,) if isinstance(key, int) else tuple(key)
            if sum(key) <= order:
                c[lookup[key]] = v
        return cls(c, order, center)

    # -- basic accessors ----------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def value(self):
        """Constant term, i.e. the function value at the center."""
        return self.coeffs[0]

    def coeff(self, alpha) -> complex | float:
        alpha = (alpha,) if isinstance(alpha, int) else tuple(alpha)
        if sum(alpha) > self.order:
            raise OrderExceeded(f"|alpha|={sum(alpha)} exceeds jet order {self.order}")
        return self.coeffs[index_map(self.dim, self.order)[alpha]]

    def to_dict(self, tol: float = 0.0) -> dict:
        return {
            a: c
            for a, c in zip(multi_indices(self.dim, self.order), self.coeffs)
            if abs(c) > tol
        }

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise OrderExceeded(f"cannot raise order {self.order} to {order}")
        return Jet(self.coeffs[: num_coeffs(self.dim, order)], order, self.center)

    def _check(self, other: "Jet"):
        if (self.order, self.center) != (other.order, other.center):
            raise ShapeMismatch(
                f"jets differ: order {self.order} vs {other.order}, "
                f"center {self.center} vs {other.center}"
            )

    def _lift(self, other) -> "Jet":
        if isinstance(other, Jet):
            self._check(other)
            return other
        return Jet.constant(other, self.order, self.center)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = self._lift(other)
        return Jet(self.coeffs + other.coeffs, self.order, self.center)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        return Jet(self.coeffs - other.coeffs, self.order, self.center)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return Jet(-self.coeffs, self.order, self.center)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.coeffs * other, self.order, self.center)
        self._check(other)
        i, j, k = _product_table(self.dim, self.order)
        prod = self.coeffs[i] * other.coeffs[j]
        size = len(self.coeffs)
        if np.iscomplexobj(prod):
            out = np.bincount(k, prod.real, size) + 1j * np.bincount(k, prod.imag, size)
        else:
            out = np.bincount(k, prod, size)
        return Jet(out, self.order, self.center)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.coeffs / other, self.order, self.center)
        return self * reciprocal(other)

    def __rtruediv__(self, other):
        return self._lift(other) * reciprocal(self)

    def __pow__(self, k: int):
        if not isinstance(k, (int, np.integer)) or k < 0:
            raise ValueError("jets support only non-negative integer powers")
        out = Jet.constant(1.0, self.order, self.center)
        for _ in range(int(k)):
            out = out * self
        return out

    # -- calculus -----------------------------------------------------------

    def partial(self, axis: int) -> "Jet":
        """Jet of ``d f / d x_{axis+1}``; the order drops by one."""
        if self.order < 1:
            raise OrderExceeded("cannot differentiate an order-0 jet")
        src, factor = _partial_table(self.dim, self.order, axis)
        return Jet(self.coeffs[src] * factor, self.order - 1, self.center)

    def derivatives(self) -> np.ndarray:
        """All derivatives ``d^delta f(center)`` in graded-lex order."""
        return self.coeffs * _factorial_weights(self.dim, self.order)

    def gradient(self) -> np.ndarray:
        if self.order < 1:
            raise OrderExceeded("gradient needs a jet of order >= 1")
        return np.asarray(self.coeffs[1 : 1 + self.dim])

    def hessian(self) -> np.ndarray:
        if self.order < 2:
            raise OrderExceeded("Hessian needs a jet of order >= 2")
        n = self.dim
        lookup = index_map(n, self.order)
        H = np.empty((n, n), dtype=self.coeffs.dtype)
        for a in range(n):
            for b in range(n):
                e = [0] * n
                e[a] += 1
                e[b] += 1
                H[a, b] = self.coeffs[lookup[tuple(e)]] * (2.0 if a == b else 1.0)
        return H

    def __call__(self, x: Sequence[float]):
        """Evaluate the Taylor polynomial at the point ``x``."""
        dx = np.asarray(x, dtype=float) - np.asarray(self.center)
        mons = np.array(
            [np.prod(dx ** np.array(a)) for a in multi_indices(self.dim, self.order)]
        )
        return np.dot(self.coeffs, mons)

    def __repr__(self):
        terms = ", ".join(f"{a}: {c:.6g}" for a, c in self.to_dict().items())
        return f"Jet(order={self.order}, center={self.center}, {{{terms}}})"


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------

def jet_add(a: Jet, b: Jet) -> Jet:
    if not isinstance(b, Jet):
        raise ShapeMismatch("jet_add expects two jets")
    return a + b


def jet_mul(a: Jet, b: Jet) -> Jet:
    if not isinstance(b, Jet):
        raise ShapeMismatch("jet_mul expects two jets")
    return a * b


def derivative(j: Jet, alpha) -> float | complex:
    """Recover ``d^alpha f(center)`` from a jet: ``coeffs[alpha] * alpha!``."""
    alpha = (alpha,) if isinstance(alpha, int) else tuple(alpha)
    if len(alpha) != j.dim:
        raise ShapeMismatch(f"multi-index {alpha} has wrong length for n={j.dim}")
    return j.coeff(alpha) * math.prod(math.factorial(k) for k in alpha)


def _series(fn: str, c: float, order: int) -> list:
    """Univariate Taylor coefficients of fn about c, degrees 0..order."""
    if fn == "exp":
        e = math.exp(c)
        return [e / math.factorial(k) for k in range(order + 1)]
    if fn in ("sin", "cos"):
        s, co = math.sin(c), math.cos(c)
        # d^k sin = sin(c + k pi/2); cycle through exact values
        cyc = [s, co, -s, -co] if fn == "sin" else [co, -s, -co, s]
        return [cyc[k % 4] / math.factorial(k) for k in range(order + 1)]
    if fn == "sqrt":
        if c <= 0.0:
            raise DomainError(f"sqrt is not smooth at {c!r}")
        root = math.sqrt(c)
        out, binom = [], 1.0
        for k in range(order + 1):
            out.append(root * binom / c**k)
            binom *= (0.5 - k) / (k + 1)
        return out
    if fn == "log":
        if c <= 0.0:
            raise DomainError(f"log is not defined at {c!r}")
        return [math.log(c)] + [(-1) ** (k + 1) / (k * c**k) for k in range(1, order + 1)]
    if fn == "recip":
        if c == 0.0:
            raise EvalError("division by zero")
        return [(-1) ** k / c ** (k + 1) for k in range(order + 1)]
    raise ValueError(f"unknown elementary function {fn!r}")


def jet_compose_elementary(fn: str, g: Jet) -> Jet:
    """Jet of ``fn(g)`` via the univariate series of fn about ``g(center)``.

    The series is evaluated on ``h = g - g(center)`` by Horner's rule in jet
    arithmetic; ``h`` has no constant term so degree ``K`` suffices.
    """
    c0 = g.value
    if np.iscomplexobj(g.coeffs):
        if c0.imag != 0.0:
            raise DomainError(f"{fn} of a complex jet is not supported")
        c0 = c0.real
    coefs = _series(fn, float(c0), g.order)
    h = g - g.value
    out = Jet.constant(coefs[-1], g.order, g.center)
    for ck in reversed(coefs[:-1]):
        out = out * h + ck
    return out


def reciprocal(g: Jet) -> Jet:
    return jet_compose_elementary("recip", g)


def fd_derivative(e, x: Sequence[float], alpha, h: float | None = None) -> float:
    """Central finite-difference estimate of ``d^alpha e(x)``.

    Uses a tensor product of 1-D central stencils of fourth-order accuracy;
    second order is not enough to reach 1e-5 relative at ``h = 1e-2``.
    ``e`` is an :class:`~stphase.expr.Expr` or any callable taking a point.
    Default step follows :func:`default_fd_step`.
    """
    from .expr import Expr, eval_scalar

    alpha = (alpha,) if isinstance(alpha, int) else tuple(alpha)
    x = np.asarray(x, dtype=float)
    if h is None:
        h = default_fd_step(alpha)
    if h <= 0:
        raise ValueError("finite-difference step must be positive")
    f = (lambda p: eval_scalar(e, p)) if isinstance(e, Expr) else e

    stencils = [_central_stencil(k) for k in alpha]
    total = 0.0
    for offs_weights in _tensor(stencils):
        point = x.copy()
        w = 1.0
        for axis, (off, wt) in enumerate(offs_weights):
            point[axis] += off * h
            w *= wt
        if w != 0.0:
            total += w * f(point)
    return total / h ** sum(alpha)


def default_fd_step(alpha) -> float:
    order = sum((alpha,) if isinstance(alpha, int) else alpha)
    return 1e-3 if order <= 2 else 1e-2


@functools.lru_cache(maxsize=None)
def _central_stencil(k: int) -> tuple[tuple[int, float], ...]:
    """Fourth-order central stencil for the k-th derivative, on integer offsets."""
    if k == 0:
        return ((0, 1.0),)
    half = (k + 1) // 2 + 1
    offsets = np.arange(-half, half + 1)
    # solve the moment system sum_j w_j o_j^m = k! delta_{mk}, m = 0..len-1
    V = np.vander(offsets, increasing=True).T.astype(float)
    rhs = np.zeros(len(offsets))
    rhs[k] = math.factorial(k)
    w = np.linalg.solve(V, rhs)
    return tuple((int(o), float(wi)) for o, wi in zip(offsets, w))


def _tensor(stencils):
    if not stencils:
        yield ()
        return
    for head in stencils[0]:
        for rest in _tensor(stencils[1:]):
            yield (head,) + rest
