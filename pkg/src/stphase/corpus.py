"""Fixed check corpora used by ``stphase selftest`` and the test suite."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .jet import default_fd_step, derivative, fd_derivative, multi_indices
from .expr import eval_jet, parse
from .linalg import jacobi_eigendecompose

JET_EXPRESSIONS = {
    1: [
        ("exp(-x1^2/2)", [(0.0,), (0.7,)]),
        ("cos(x1)-1", [(0.0,), (-1.3,)]),
        ("sin(2*x1)*exp(x1/3)", [(0.4,), (-0.9,)]),
        ("sqrt(2+x1^2)", [(0.0,), (1.1,)]),
        ("log(3+x1)", [(0.5,), (-1.0,)]),
        ("1/(1+x1^2)", [(0.3,), (-0.6,)]),
    ],
    2: [
        ("exp(-(x1^2+x2^2)/2)", [(0.0, 0.0), (0.5, -0.3)]),
        ("x1*x2^3-2*x2", [(1.0, -0.5), (0.2, 0.7)]),
        ("cos(x1)*sin(x2)+x1^2", [(0.3, 0.4), (-1.0, 0.8)]),
        ("sqrt(1+x1^2+2*x2^2)", [(0.0, 0.0), (0.6, -0.4)]),
        ("log(2+x1*x2+x2^2)", [(0.1, 0.2), (-0.3, 0.5)]),
    ],
    3: [
        ("exp(x1*x2-x3^2)", [(0.2, -0.1, 0.3)]),
        ("sin(x1+x2*x3)", [(0.5, 0.4, -0.2)]),
    ],
}


@dataclass(frozen=True)
class JetCase:
    source: str
    point: tuple
    alpha: tuple
    jet_value: float
    fd_value: float
    step: float

    @property
    def tolerance(self) -> float:
        return max(1e-5 * abs(self.jet_value), 1e-6)

    @property
    def abs_diff(self) -> float:
        return abs(self.jet_value - self.fd_value)

    @property
    def ok(self) -> bool:
        return self.abs_diff <= self.tolerance


def jet_fd_corpus(max_order: int = 4) -> list[JetCase]:
    """Jet derivatives against finite differences for every ``|alpha| <= 4``."""
    cases = []
    for n, entries in JET_EXPRESSIONS.items():
        alphas = multi_indices(n, max_order)
        for source, points in entries:
            e = parse(source, n)
            for pt in points:
                j = eval_jet(e, pt, max_order)
                for alpha in alphas:
                    h = default_fd_step(alpha)
                    cases.append(
                        JetCase(
                            source, pt, alpha,
                            float(derivative(j, alpha)),
                            float(fd_derivative(e, pt, alpha, h)),
                            h,
                        )
                    )
    return cases


@dataclass(frozen=True)
class LinalgCase:
    index: int
    dim: int
    reconstruction_error: float
    orthogonality_error: float
    signature: int
    congruent_signature: int

    @property
    def ok(self) -> bool:
        return (
            self.reconstruction_error <= 1e-10
            and self.orthogonality_error <= 1e-12
            and self.signature == self.congruent_signature
        )


def random_nondegenerate_symmetric(rng: np.random.Generator, n: int, min_gap: float = 0.2):
    """Random symmetric matrix whose eigenvalues all satisfy |alpha| >= min_gap."""
    while True:
        A = rng.standard_normal((n, n))
        Q = A + A.T
        if np.min(np.abs(np.linalg.eigvalsh(Q))) >= min_gap:
            return Q


def linalg_corpus(cases: int = 100, seed: int = 20240607) -> list[LinalgCase]:
    """Jacobi reconstruction and Sylvester signature invariance checks."""
    rng = np.random.default_rng(seed)
    out = []
    for k in range(cases):
        n = 1 + k % 4
        Q = random_nondegenerate_symmetric(rng, n)
        S = rng.standard_normal((n, n))
        while abs(np.linalg.det(S)) < 0.1:
            S = rng.standard_normal((n, n))
        eig = jacobi_eigendecompose(Q)
        congruent = jacobi_eigendecompose(S.T @ Q @ S)
        recon = np.linalg.norm(eig.reconstruct() - Q) / np.linalg.norm(Q)
        orth = float(np.max(np.abs(eig.P.T @ eig.P - np.eye(n))))
        out.append(LinalgCase(k, n, float(recon), orth, eig.signature, congruent.signature))
    return out
