"""Command-line front end.

Commands::

    stphase expand   PROBLEM --lambda L [--order N]
    stphase oracle   PROBLEM --lambda L [--radius R] [--ppp P] [--eps-list [E ...]]
    stphase converge PROBLEM --lambda-min A --lambda-max B --factor F [--order N] [--out CSV]
    stphase selftest [--out DIR]

Exit codes: 0 success, 2 usage error, 3 parse error, 4 numeric failure,
5 convergence FAIL.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import math
import sys
import threading
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import corpus
from .errors import (
    DegenerateMatrix,
    EvalError,
    NoConvergence,
    ParseError,
    ProblemFileError,
    ShapeMismatch,
    StphaseError,
    TailTooLarge,
    TooOscillatory,
)
from .expansion import expand
from .oracle import QuadratureSpec, default_eps_list, oscillatory_quadrature, regularized_value
from .problem import Problem, load_problem, quadratic_problem

log = logging.getLogger("stphase")

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_NUMERIC, EXIT_FAIL = 0, 2, 3, 4, 5
SLOPE_TOLERANCE = 0.3
CSV_HEADER = ["lambda", "exp_re", "exp_im", "oracle_re", "oracle_im", "abs_err", "rel_err"]
CACHE_HEADER = ["key_hash", "lambda", "re", "im", "radius", "ppp", "eps"]
NUMERIC_ERRORS = (EvalError, DegenerateMatrix, NoConvergence, TooOscillatory, TailTooLarge,
                  ShapeMismatch)


def fmt(x: float) -> str:
    """17 significant digits: round-trips every double."""
    return format(float(x), ".17g")


# ---------------------------------------------------------------------------
# oracle cache
# ---------------------------------------------------------------------------

class OracleCache:
    """Append-only CSV of oracle values keyed by a content hash."""

    def __init__(self, path):
        self.path = Path(path)
        self._lock = threading.Lock()

    @staticmethod
    def key(problem: Problem, lam: float, spec: QuadratureSpec, eps_list) -> str:
        doc = dict(problem.source)
        doc.pop("order", None)  # the oracle does not depend on N
        payload = json.dumps(
            {"problem": doc, "lambda": fmt(lam), "radius": fmt(spec.radius),
             "ppp": spec.points_per_period, "eps": _eps_text(spec, eps_list)},
            sort_keys=True, separators=(",", ":"),
        )
        return hashlib.sha256(payload.encode()).hexdigest()

    def lookup(self, key: str):
        if not self.path.exists():
            return None
        with self.path.open(newline="") as fh:
            for row in csv.DictReader(fh):
                if row["key_hash"] == key:
                    return complex(float(row["re"]), float(row["im"]))
        return None

    def append(self, key, lam, value: complex, spec: QuadratureSpec, eps_list):
        with self._lock:
            new = not self.path.exists()
            with self.path.open("a", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                if new:
                    w.writerow(CACHE_HEADER)
                w.writerow([key, fmt(lam), fmt(value.real), fmt(value.imag),
                            fmt(spec.radius), spec.points_per_period, _eps_text(spec, eps_list)])


def _eps_text(spec: QuadratureSpec, eps_list) -> str:
    if eps_list is None:
        return fmt(spec.eps)
    return ";".join(fmt(e) for e in eps_list)


def oracle_value(problem: Problem, lam: float, spec: QuadratureSpec, eps_list=None,
                 cache: OracleCache | None = None) -> complex:
    """Plain quadrature, or Richardson-regularized if ``eps_list`` is given."""
    if eps_list is not None and len(eps_list) == 0:
        eps_list = default_eps_list(lam, problem.dim)
    key = None
    if cache is not None:
        key = cache.key(problem, lam, spec, eps_list)
        hit = cache.lookup(key)
        if hit is not None:
            log.info("cache hit %s", key[:12])
            return hit
    if eps_list is None:
        value = oscillatory_quadrature(problem, lam, spec).value
    else:
        value = regularized_value(problem, lam, eps_list, spec)
    if cache is not None:
        cache.append(key, lam, value, spec, eps_list)
    return value


# ---------------------------------------------------------------------------
# convergence reports
# ---------------------------------------------------------------------------

@dataclass
class ConvergenceReport:
    rows: list
    slope: float
    predicted: float
    skipped: list

    @property
    def passed(self) -> bool:
        return math.isfinite(self.slope) and self.slope <= self.predicted + SLOPE_TOLERANCE

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in self.rows:
            w.writerow([fmt(v) for v in row])
        return buf.getvalue()

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        text = (f"{verdict} slope={self.slope:.4f} predicted={self.predicted:.4f} "
                f"tolerance=+{SLOPE_TOLERANCE} rows={len(self.rows)}")
        if self.skipped:
            text += " skipped=" + ",".join(f"{fmt(l)}({msg})" for l, msg in self.skipped)
        return text


def lambda_ladder(lam_min: float, lam_max: float, factor: float) -> list[float]:
    if not (lam_min > 0 and lam_max >= lam_min and factor > 1):
        raise ValueError("need 0 < lambda-min <= lambda-max and factor > 1")
    out, k = [], 0
    while True:
        lam = lam_min * factor**k
        if lam > lam_max * (1 + 1e-12):
            return out
        out.append(lam)
        k += 1


def fit_slope(lams, errs) -> float:
    lams, errs = np.asarray(lams, float), np.asarray(errs, float)
    keep = errs > 0
    if keep.sum() < 2:
        return math.nan
    return float(np.polyfit(np.log(lams[keep]), np.log(errs[keep]), 1)[0])


def convergence_report(problem: Problem, lams, spec: QuadratureSpec = QuadratureSpec(),
                       eps_list=None, cache=None) -> ConvergenceReport:
    """Expansion vs oracle over ``lams``; failing rows are skipped and noted."""
    rows, skipped = [], []
    for lam in sorted(lams):
        try:
            e = expand(problem, lam).value
            o = oracle_value(problem, lam, spec, eps_list, cache)
        except StphaseError as exc:
            skipped.append((lam, type(exc).__name__))
            continue
        err = abs(e - o)
        rel = err / abs(o) if o != 0 else math.inf
        rows.append((lam, e.real, e.imag, o.real, o.imag, err, rel))
    slope = fit_slope([r[0] for r in rows], [r[5] for r in rows])
    predicted = -(problem.dim / 2 + problem.order + 1)
    return ConvergenceReport(rows, slope, predicted, skipped)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _load(args) -> Problem:
    p = load_problem(args.problem)
    if getattr(args, "order", None) is not None:
        p = p.with_order(args.order)
    return p


def _spec(args) -> QuadratureSpec:
    return QuadratureSpec(args.radius, args.ppp, 0.0)


def cmd_expand(args, out) -> int:
    problem = _load(args)
    r = expand(problem, args.lam)
    print(f"lambda    {r.lam:.15g}", file=out)
    print(f"x0        {' '.join(f'{v:.15g}' for v in r.x0)}", file=out)
    print(f"signature {r.signature}", file=out)
    print(f"det       {r.det:.15g}", file=out)
    print(f"prefactor {_cfmt(r.prefactor)}", file=out)
    for j, t in enumerate(r.terms):
        print(f"t_{j:<7d} {_cfmt(t)}", file=out)
    print(f"value     {_cfmt(r.value)}", file=out)
    print(f"remainder O(lambda^{r.remainder_exponent:g})", file=out)
    return EXIT_OK


def _cfmt(z: complex) -> str:
    return f"{z.real:.15g} {z.imag:+.15g}j"


def cmd_oracle(args, out) -> int:
    problem = _load(args)
    cache = OracleCache(args.cache) if args.cache else None
    value = oracle_value(problem, args.lam, _spec(args), args.eps_list, cache)
    print(f"lambda {args.lam:.15g}", file=out)
    print(f"value  {_cfmt(value)}", file=out)
    return EXIT_OK


def cmd_converge(args, out) -> int:
    problem = _load(args)
    lams = lambda_ladder(args.lambda_min, args.lambda_max, args.factor)
    cache = OracleCache(args.cache) if args.cache else None
    report = convergence_report(problem, lams, _spec(args), args.eps_list, cache)
    text = report.to_csv()
    if args.out:
        Path(args.out).write_text(text)
    else:
        out.write(text)
    print(report.summary(), file=out if args.out else sys.stderr)
    if not report.rows or len(report.rows) < 2:
        return EXIT_NUMERIC
    return EXIT_OK if report.passed else EXIT_FAIL


def run_selftest(out_dir) -> list[tuple[str, bool, str]]:
    """Run the invariant corpus and write its CSV artifacts into ``out_dir``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    results = []

    cases = corpus.jet_fd_corpus()
    with (out_dir / "jet_fd.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["expr", "point", "alpha", "jet", "fd", "abs_diff", "tol", "ok"])
        for c in cases:
            w.writerow([c.source, " ".join(fmt(v) for v in c.point),
                        " ".join(map(str, c.alpha)), fmt(c.jet_value), fmt(c.fd_value),
                        fmt(c.abs_diff), fmt(c.tolerance), int(c.ok)])
    bad = sum(not c.ok for c in cases)
    results.append(("jet_fd", bad == 0, f"{len(cases)} cases, {bad} failures"))

    lin = corpus.linalg_corpus()
    with (out_dir / "linalg.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["case", "n", "recon_err", "orth_err", "signature", "congruent_signature", "ok"])
        for c in lin:
            w.writerow([c.index, c.dim, fmt(c.reconstruction_error), fmt(c.orthogonality_error),
                        c.signature, c.congruent_signature, int(c.ok)])
    bad = sum(not c.ok for c in lin)
    results.append(("linalg", bad == 0, f"{len(lin)} cases, {bad} failures"))

    lams = lambda_ladder(50, 3200, 2)
    for N in (0, 1, 2):
        p = quadratic_problem("exp(-x1^2/2)", [[1.0]], order=N)
        rep = convergence_report(p, lams)
        (out_dir / f"converge_gaussian_N{N}.csv").write_text(rep.to_csv())
        results.append((f"converge_gaussian_N{N}", rep.passed, rep.summary()))
    return results


def cmd_selftest(args, out) -> int:
    results = run_selftest(args.out or "selftest-out")
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}", file=out)
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_FAIL


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stphase", description=__doc__.splitlines()[0])
    parser.add_argument("-q", "--quiet", action="store_true", help="suppress log messages")
    sub = parser.add_subparsers(dest="command", required=True)

    def quad_flags(p):
        p.add_argument("--radius", type=float, default=8.0, help="box half-width R")
        p.add_argument("--ppp", type=int, default=16, help="samples per 2*pi oscillation")
        p.add_argument("--eps-list", type=float, nargs="*", default=None,
                       help="damping ladder for regularized quadrature (empty: default ladder)")
        p.add_argument("--cache", default=None, help="oracle cache CSV path")

    p = sub.add_parser("expand", help="stationary phase expansion at one lambda")
    p.add_argument("problem")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--order", type=int, default=None, help="override the file's N")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("oracle", help="brute-force quadrature value")
    p.add_argument("problem")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    quad_flags(p)
    p.set_defaults(func=cmd_oracle, cache_default="oracle-cache.csv")

    p = sub.add_parser("converge", help="error-rate report over a lambda ladder")
    p.add_argument("problem")
    p.add_argument("--lambda-min", type=float, required=True)
    p.add_argument("--lambda-max", type=float, required=True)
    p.add_argument("--factor", type=float, default=2.0)
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--out", default=None, help="CSV destination (default stdout)")
    quad_flags(p)
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("selftest", help="run the invariant corpus")
    p.add_argument("--out", default=None, help="directory for CSV artifacts")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "cache_default", None) and args.cache is None:
        args.cache = args.cache_default
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        return args.func(args, out)
    except (ParseError, ProblemFileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NUMERIC_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
