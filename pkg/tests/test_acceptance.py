"""Acceptance criteria, one test each, with a PASS/FAIL line per criterion.

Run ``pytest tests/test_acceptance.py -s`` to see the lines as they are
produced; they are also collected into the terminal summary.
"""
import cmath
import filecmp
import math
import time

import numpy as np

from conftest import ACCEPTANCE_LINES
from stphase import cli
from stphase.corpus import jet_fd_corpus, linalg_corpus, random_nondegenerate_symmetric
from stphase.expansion import expand, general_expansion, imaginary_gaussian_fourier, quadratic_expansion
from stphase.linalg import jacobi_eigendecompose
from stphase.oracle import oscillatory_quadrature, regularized_value
from stphase.problem import general_problem, load_problem, quadratic_problem

E8 = cmath.exp(1j * math.pi / 4)


def record(label, ok, detail):
    line = f"{label:<14} {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def slope(lams, values):
    return float(np.polyfit(np.log(lams), np.log(values), 1)[0])


def test_criterion_1_gaussian_closed_form():
    t = time.perf_counter()
    p = quadratic_problem("exp(-x1^2/2)", [[1.0]], order=2)
    lam = 100.0
    got = quadratic_expansion(p, lam).value
    want = cmath.sqrt(2 * math.pi / (1 - 1j * lam))
    err = abs(got - want) / abs(want)
    dt = time.perf_counter() - t
    record("criterion 1", err <= 1e-5 and dt < 1.0,
           f"rel err {err:.3e} <= 1e-5, {dt:.3f} s < 1 s")


def test_criterion_2_termination_identity():
    t = time.perf_counter()
    p = quadratic_problem("1+x1^2", [[1.0]], order=1)
    worst = 0.0
    for lam in (1.0, 10.0, 100.0):
        closed = math.sqrt(2 * math.pi / lam) * E8 * (1 + 1j / lam)
        reg = regularized_value(p, lam)
        e = expand(p, lam).value
        worst = max(worst, abs(e - reg) / abs(reg), abs(closed - reg) / abs(reg))
    dt = time.perf_counter() - t
    record("criterion 2", worst <= 1e-9 and dt < 5.0,
           f"max rel err {worst:.3e} <= 1e-9 at lam in {{1,10,100}}, {dt:.2f} s < 5 s")


def test_criterion_3_rate_fits(problems_dir, tmp_path):
    t = time.perf_counter()
    slopes, codes = [], []
    for N in (0, 1, 2):
        out = tmp_path / f"N{N}.csv"
        codes.append(cli.main(["converge", str(problems_dir / "gaussian.json"),
                               "--lambda-min", "50", "--lambda-max", "3200", "--factor", "2",
                               "--order", str(N), "--out", str(out)], out=_Sink(slopes)))
    dt = time.perf_counter() - t
    ok = codes == [0, 0, 0] and dt < 120
    record("criterion 3", ok, f"slopes {', '.join(slopes)} (limits -1.2, -2.2, -3.2), "
                              f"{dt:.1f} s < 120 s")


class _Sink:
    """Collects the slope field of converge summary lines."""

    def __init__(self, slopes):
        self.slopes = slopes

    def write(self, text):
        if "slope=" in text:
            self.slopes.append(text.split("slope=")[1].split()[0])

    def flush(self):
        pass


COS_LAMS = [100.0 * 2**k for k in range(6)]


def test_criterion_4a_general_phase_prefactor():
    p = general_problem("exp(-x1^2/2)", "cos(x1)-1", [0.2], order=0)
    worst = 0.0
    for lam in COS_LAMS:
        want = E8.conjugate() * math.sqrt(2 * math.pi / lam)
        worst = max(worst, abs(general_expansion(p, lam).value - want) / abs(want))
    record("criterion 4a", worst <= 1e-12,
           f"N=0 value vs exp(-i pi/4) sqrt(2 pi/lam): max rel err {worst:.3e}")


def test_criterion_4b_general_phase_rate():
    t = time.perf_counter()
    p = general_problem("exp(-x1^2/2)", "cos(x1)-1", [0.2], order=1)
    errs = [abs(general_expansion(p, l).value - oscillatory_quadrature(p, l).value)
            for l in COS_LAMS]
    s = slope(COS_LAMS, errs)
    dt = time.perf_counter() - t
    record("criterion 4b", s <= -2.2 and dt < 300,
           f"N=1 error slope {s:.3f} <= -2.2 over lam=100*2^0..5, {dt:.2f} s < 300 s")


def test_criterion_5_non_stationary_decay(problems_dir):
    t = time.perf_counter()
    p = load_problem(problems_dir / "bump-offset.json")
    lams = [100.0 * 2**k for k in range(6)]
    s = slope(lams, [abs(oscillatory_quadrature(p, l).value) for l in lams])
    dt = time.perf_counter() - t
    record("criterion 5", s <= -3 and dt < 300,
           f"|I| slope {s:.3f} <= -3 over lam=100*2^0..5, {dt:.2f} s < 300 s")


def test_criterion_6_imaginary_gaussian_transform():
    rng = np.random.default_rng(606)
    worst = 0.0
    for k in range(20):
        n = 1 + k % 2
        Q = random_nondegenerate_symmetric(rng, n)
        xi = rng.standard_normal(n) * 2
        want = abs(np.linalg.det(Q)) ** -0.5
        for sign in (1, -1):
            got = abs(imaginary_gaussian_fourier(Q, xi, sign))
            worst = max(worst, abs(got - want) / want)
    fresnel = regularized_value(quadratic_problem("1", [[1.0]]), 1.0) / math.sqrt(2 * math.pi)
    ferr = abs(fresnel - imaginary_gaussian_fourier([[1.0]], [0.0], 1))
    record("criterion 6", worst <= 1e-12 and ferr <= 1e-2,
           f"modulus rel err {worst:.3e} <= 1e-12 on 20 cases, Fresnel err {ferr:.3e} <= 1e-2")


def test_criterion_7_jet_correctness():
    cases = jet_fd_corpus()
    bad = [c for c in cases if not c.ok]
    assert max(sum(c.alpha) for c in cases) == 4
    worst = max(c.abs_diff / c.tolerance for c in cases)
    record("criterion 7", len(cases) >= 200 and not bad,
           f"{len(cases)} cases, {len(bad)} failures, worst diff/tol {worst:.2f}")


def test_criterion_8_linalg():
    cases = linalg_corpus()
    bad = [c for c in cases if not c.ok]
    recon = max(c.reconstruction_error for c in cases)
    # reconstruction through the returned factors, independent of the corpus helper
    rng = np.random.default_rng(8)
    Q = random_nondegenerate_symmetric(rng, 4)
    d = jacobi_eigendecompose(Q)
    direct = np.linalg.norm(d.P @ np.diag(d.alphas) @ d.P.T - Q) / np.linalg.norm(Q)
    record("criterion 8", len(cases) == 100 and not bad and recon <= 1e-10 and direct <= 1e-10,
           f"{len(cases)} congruences, {len(bad)} failures, max reconstruction {recon:.2e}")


def test_criterion_9_determinism(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    cli.run_selftest(a)
    cli.run_selftest(b)
    names = sorted(p.name for p in a.iterdir())
    match, mismatch, errors = filecmp.cmpfiles(a, b, names, shallow=False)
    record("criterion 9", names and not mismatch and not errors
           and sorted(p.name for p in b.iterdir()) == names,
           f"{len(match)} CSV artifacts byte-identical across two selftest runs")
