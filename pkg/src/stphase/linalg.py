"""Symmetric eigendecomposition by cyclic Jacobi rotations.

Provides the constants that enter the stationary phase prefactor: the
signature (positive minus negative eigenvalues), the determinant and the
inverse of a non-degenerate symmetric matrix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMatrix, ShapeMismatch

SYMMETRY_RTOL = 1e-12
DEGENERACY_TOL = 1e-10
MAX_SWEEPS = 100


@dataclass(frozen=True)
class Eigendecomposition:
    """``Q = P @ diag(alphas) @ P.T`` with eigenvalues sorted descending."""

    P: np.ndarray
    alphas: np.ndarray
    signature: int
    det: float
    inverse: np.ndarray
    sweeps: int = 0

    @property
    def dim(self) -> int:
        return len(self.alphas)

    def reconstruct(self) -> np.ndarray:
        return self.P @ np.diag(self.alphas) @ self.P.T


def as_symmetric(Q) -> np.ndarray:
    """Validate and return ``Q`` as a float array; symmetric to 1e-12 relative."""
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1] or Q.shape[0] < 1:
        raise ShapeMismatch(f"expected a non-empty square matrix, got shape {Q.shape}")
    scale = max(np.max(np.abs(Q)), np.finfo(float).tiny)
    if np.max(np.abs(Q - Q.T)) > SYMMETRY_RTOL * scale:
        raise ShapeMismatch("matrix is not symmetric")
    return 0.5 * (Q + Q.T)


def jacobi_eigendecompose(Q, degeneracy_tol: float = DEGENERACY_TOL) -> Eigendecomposition:
    """Diagonalize a symmetric matrix with cyclic Jacobi sweeps.

    Sweeps stop once the largest off-diagonal entry falls below
    ``1e-14 * ||Q||_F`` or after 100 sweeps.  Raises
    :class:`DegenerateMatrix` if some eigenvalue satisfies ``|alpha_j| <= degeneracy_tol * max_k |alpha_k|``.
    """
    A = as_symmetric(Q).copy()
    n = A.shape[0]
    P = np.eye(n)
    threshold = 1e-14 * np.linalg.norm(A)

    sweeps = 0
    while _max_offdiag(A) > threshold and sweeps < MAX_SWEEPS:
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                if A[p, q] != 0.0:
                    _rotate(A, P, p, q)

    alphas = np.diag(A).copy()
    order = np.argsort(-alphas, kind="stable")
    alphas = alphas[order]
    P = P[:, order]

    amax = np.max(np.abs(alphas))
    if amax == 0.0 or np.min(np.abs(alphas)) <= degeneracy_tol * amax:
        raise DegenerateMatrix(f"eigenvalues {alphas} violate non-degeneracy")

    signature = int(np.sum(alphas > 0) - np.sum(alphas < 0))
    det = float(np.prod(alphas))
    inverse = P @ np.diag(1.0 / alphas) @ P.T
    inverse = 0.5 * (inverse + inverse.T)
    return Eigendecomposition(P, alphas, signature, det, inverse, sweeps)


def _max_offdiag(A: np.ndarray) -> float:
    n = A.shape[0]
    if n == 1:
        return 0.0
    return float(np.max(np.abs(A[~np.eye(n, dtype=bool)])))


def _rotate(A: np.ndarray, P: np.ndarray, p: int, q: int) -> None:
    """Apply the rotation that annihilates A[p, q], in place."""
    apq = A[p, q]
    theta = (A[q, q] - A[p, p]) / (2.0 * apq)
    # smaller root of t^2 + 2 theta t - 1 = 0
    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c

    G = np.eye(A.shape[0])
    G[p, p] = G[q, q] = c
    G[p, q] = s
    G[q, p] = -s
    A[:] = G.T @ A @ G
    A[p, q] = A[q, p] = 0.0
    P[:] = P @ G


def signature(Q, degeneracy_tol: float = DEGENERACY_TOL) -> int:
    return jacobi_eigendecompose(Q, degeneracy_tol).signature
