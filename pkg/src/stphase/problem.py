"""Problem description shared by the expansion engine, the oracle and the CLI.

A problem file is a JSON object::

    {
      "dim": 1,
      "amplitude": "exp(-x1^2/2)",
      "quadratic": {"Q": [1.0], "x0": [0.0]},   # or
      "phase": "cos(x1)-1", "x0_guess": [0.2],
      "order": 2
    }

Exactly one of ``quadratic`` and ``phase`` must be present.  ``Q`` is given
row-major.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np

from .errors import ProblemFileError, ShapeMismatch
from .expr import Expr, evaluate, parse
from .linalg import as_symmetric


@dataclass(frozen=True, eq=False)
class Quadratic:
    """Phase ``<Q (x - x0), x - x0> / 2``."""

    Q: np.ndarray
    x0: tuple

    def __call__(self, coords):
        d = [c - x for c, x in zip(coords, self.x0)]
        n = len(d)
        acc = 0.0
        for i in range(n):
            for j in range(n):
                if self.Q[i, j] != 0.0:
                    acc = acc + self.Q[i, j] * d[i] * d[j]
        return 0.5 * acc

    def gradient_norm(self, coords):
        d = [c - x for c, x in zip(coords, self.x0)]
        g2 = 0.0
        for i in range(len(d)):
            gi = sum(self.Q[i, j] * d[j] for j in range(len(d)))
            g2 = g2 + gi * gi
        return np.sqrt(g2)


@dataclass(frozen=True)
class General:
    """Phase given by a formula, with a starting point for Newton's method."""

    phi: Expr
    x0_guess: tuple

    def __call__(self, coords):
        return evaluate(self.phi, coords)


PhaseSpec = Union[Quadratic, General]


@dataclass(frozen=True)
class Problem:
    dim: int
    amplitude: Expr
    phase: PhaseSpec
    order: int = 0
    source: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("expansion order must be non-negative")
        if isinstance(self.phase, Quadratic):
            if self.phase.Q.shape != (self.dim, self.dim) or len(self.phase.x0) != self.dim:
                raise ShapeMismatch("quadratic phase data does not match dim")
        elif len(self.phase.x0_guess) != self.dim:
            raise ShapeMismatch("x0_guess does not match dim")

    def with_order(self, order: int) -> "Problem":
        src = dict(self.source) if self.source is not None else None
        if src is not None:
            src["order"] = order
        return Problem(self.dim, self.amplitude, self.phase, order, src)

    def amplitude_values(self, coords):
        a = evaluate(self.amplitude, coords)
        return np.broadcast_to(a, np.shape(coords[0])) if np.ndim(a) == 0 else a

    def canonical_json(self) -> str:
        """Stable text form used for cache keys."""
        if self.source is None:
            raise ValueError("problem was not built from a problem document")
        return json.dumps(self.source, sort_keys=True, separators=(",", ":"))


def quadratic_problem(amplitude: str, Q, x0=None, order: int = 0) -> Problem:
    Q = as_symmetric(Q)
    n = Q.shape[0]
    x0 = [0.0] * n if x0 is None else list(x0)
    return problem_from_dict(
        {"dim": n, "amplitude": amplitude,
         "quadratic": {"Q": Q.ravel().tolist(), "x0": x0}, "order": order}
    )


def general_problem(amplitude: str, phase: str, x0_guess, order: int = 0) -> Problem:
    x0_guess = list(np.atleast_1d(np.asarray(x0_guess, dtype=float)))
    return problem_from_dict(
        {"dim": len(x0_guess), "amplitude": amplitude, "phase": phase,
         "x0_guess": x0_guess, "order": order}
    )


def problem_from_dict(doc: dict) -> Problem:
    """Build a :class:`Problem` from a decoded problem document."""
    if not isinstance(doc, dict):
        raise ProblemFileError("problem document must be a JSON object")
    try:
        dim = int(doc["dim"])
        amp_src = doc["amplitude"]
    except KeyError as exc:
        raise ProblemFileError(f"missing field {exc.args[0]!r}") from None
    if dim < 1:
        raise ProblemFileError("dim must be positive")
    order = int(doc.get("order", 0))
    amplitude = parse(str(amp_src), dim)

    has_q, has_phi = "quadratic" in doc, "phase" in doc
    if has_q == has_phi:
        raise ProblemFileError("give exactly one of 'quadratic' and 'phase'")
    if has_q:
        quad = doc["quadratic"]
        try:
            Q = np.asarray(quad["Q"], dtype=float)
            x0 = tuple(float(v) for v in quad.get("x0", [0.0] * dim))
        except (KeyError, TypeError, ValueError) as exc:
            raise ProblemFileError(f"bad quadratic phase: {exc}") from None
        if Q.size != dim * dim:
            raise ProblemFileError(f"Q needs {dim * dim} entries, got {Q.size}")
        try:
            Q = as_symmetric(Q.reshape(dim, dim))
        except ShapeMismatch as exc:
            raise ProblemFileError(str(exc)) from None
        if len(x0) != dim:
            raise ProblemFileError("x0 length does not match dim")
        phase = Quadratic(Q, x0)
    else:
        phi = parse(str(doc["phase"]), dim)
        guess = tuple(float(v) for v in doc.get("x0_guess", [0.0] * dim))
        if len(guess) != dim:
            raise ProblemFileError("x0_guess length does not match dim")
        phase = General(phi, guess)

    source = json.loads(json.dumps(doc))
    source["order"] = order
    return Problem(dim, amplitude, phase, order, source)


def load_problem(path) -> Problem:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"{path}: invalid JSON ({exc})") from None
    return problem_from_dict(doc)
