import cmath
import math

import numpy as np
import pytest

from stphase.errors import NoConvergence, TailTooLarge, TooOscillatory
from stphase.expansion import expand
from stphase.oracle import (
    QuadratureSpec,
    default_eps_list,
    max_gradient,
    oscillatory_quadrature,
    regularized_value,
    richardson_to_zero,
)
from stphase.problem import general_problem, load_problem, quadratic_problem

E8 = cmath.exp(1j * math.pi / 4)
GAUSS = quadratic_problem("exp(-x1^2/2)", [[1.0]])


def test_gaussian_closed_form():
    r = oscillatory_quadrature(GAUSS, 100.0, QuadratureSpec(8.0, 16))
    want = cmath.sqrt(2 * math.pi / (1 - 100j))
    assert abs(r.value - want) / abs(want) <= 1e-6
    assert r.tail < 1e-6 * abs(r.value)
    assert complex(r) == r.value


def test_step_resolves_oscillation():
    lam, p = 50.0, 16
    r = oscillatory_quadrature(GAUSS, lam, QuadratureSpec(8.0, p))
    G = max_gradient(GAUSS, 8.0)
    assert G == pytest.approx(8.0)
    assert r.step <= 2 * math.pi / (p * lam * G)


def test_cosine_phase_matches_expansion_near_origin():
    # localized amplitude: the other critical points +-pi carry exp(-4 pi^2)
    p = general_problem("exp(-4*x1^2)", "cos(x1)-1", [0.2], order=2)
    errs = [abs(oscillatory_quadrature(p, lam).value - expand(p, lam).value)
            for lam in (400.0, 800.0)]
    assert errs[0] < 1e-6
    # absolute error ~ lam^-7/2
    assert math.log2(errs[0] / errs[1]) >= 3.5 - 0.3


def test_two_dimensional_gaussian():
    p = quadratic_problem("exp(-(x1^2+x2^2))", [[1.0, 0.0], [0.0, -1.0]])
    lam = 5.0
    want = math.pi / cmath.sqrt((1 - 0.5j * lam) * (1 + 0.5j * lam))
    r = oscillatory_quadrature(p, lam, QuadratureSpec(radius=6.0))
    assert abs(r.value - want) / abs(want) <= 1e-10


SMOOTH = [
    (quadratic_problem("exp(-x1^2/2)", [[1.0]]), 100.0),
    (general_problem("exp(-x1^2/2)", "cos(x1)-1", [0.2]), 400.0),
    (general_problem("exp(-4*x1^2)", "cos(x1)-1", [0.2]), 400.0),
    (quadratic_problem("exp(-(x1^2+2*x2^2))", [[2.0, 0.5], [0.5, 1.0]]), 3.0),
]


@pytest.mark.parametrize("problem, lam", SMOOTH)
def test_grid_refinement(problem, lam):
    a = oscillatory_quadrature(problem, lam, QuadratureSpec(points_per_period=16)).value
    b = oscillatory_quadrature(problem, lam, QuadratureSpec(points_per_period=32)).value
    assert abs(a - b) <= 1e-8 * abs(a)


@pytest.mark.parametrize("problem, lam", SMOOTH)
def test_box_enlargement(problem, lam):
    a = oscillatory_quadrature(problem, lam, QuadratureSpec(radius=8.0)).value
    b = oscillatory_quadrature(problem, lam, QuadratureSpec(radius=10.0)).value
    assert abs(a - b) <= 1e-10 * abs(a)


@pytest.mark.parametrize("problem, lam", SMOOTH)
def test_bit_identical(problem, lam):
    a = oscillatory_quadrature(problem, lam)
    b = oscillatory_quadrature(problem, lam)
    assert a.value.real.hex() == b.value.real.hex()
    assert a.value.imag.hex() == b.value.imag.hex()


def test_too_oscillatory():
    with pytest.raises(TooOscillatory):
        oscillatory_quadrature(GAUSS, 1e9)
    p = quadratic_problem("exp(-(x1^2+x2^2)/2)", [[1.0, 0.0], [0.0, 1.0]])
    with pytest.raises(TooOscillatory):
        oscillatory_quadrature(p, 1e3)


def test_tail_too_large():
    with pytest.raises(TailTooLarge):
        oscillatory_quadrature(quadratic_problem("1", [[1.0]]), 1.0)
    r = oscillatory_quadrature(quadratic_problem("1", [[1.0]]), 1.0, check_tail=False)
    assert r.tail >= 2.0


def test_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(points_per_period=4)
    with pytest.raises(ValueError):
        QuadratureSpec(radius=0.0)
    with pytest.raises(ValueError):
        QuadratureSpec(eps=-1.0)
    with pytest.raises(ValueError):
        oscillatory_quadrature(
            quadratic_problem("1", np.eye(3)), 1.0
        )


def test_richardson_is_exact_on_polynomials():
    eps = [0.8, 0.4, 0.2, 0.1, 0.05]
    vals = [3 - 2j + (1 + 1j) * e - 5 * e**3 for e in eps]
    best, second = richardson_to_zero(eps, vals)
    assert best == pytest.approx(3 - 2j, abs=1e-13)
    assert second == pytest.approx(3 - 2j, abs=1e-13)


def test_fresnel():
    v = regularized_value(quadratic_problem("1", [[1.0]]), 1.0)
    assert abs(v - math.sqrt(2 * math.pi) * E8) <= 1e-4


@pytest.mark.parametrize("lam", [1.0, 10.0, 100.0])
def test_regularized_polynomial(lam):
    v = regularized_value(quadratic_problem("1+x1^2", [[1.0]]), lam)
    want = math.sqrt(2 * math.pi / lam) * E8 * (1 + 1j / lam)
    assert abs(v - want) <= 1e-4 * abs(want)


def test_regularized_negative_curvature():
    v = regularized_value(quadratic_problem("1", [[-2.0]]), 3.0)
    want = math.sqrt(2 * math.pi / 6.0) * E8.conjugate()
    assert abs(v - want) <= 1e-8


@pytest.mark.slow
def test_regularized_saddle():
    p = quadratic_problem("1", [[1.0, 0.0], [0.0, -1.0]])
    v = regularized_value(p, 1.0)
    assert abs(v - 2 * math.pi) <= 1e-3 * 2 * math.pi


def test_regularized_rejects_bad_ladder():
    with pytest.raises(ValueError):
        regularized_value(GAUSS, 1.0, [0.1, 0.2])
    with pytest.raises(ValueError):
        regularized_value(GAUSS, 1.0, [0.1, 0.0])


def test_regularized_no_convergence():
    # two rungs far from eps = 0 cannot agree
    with pytest.raises(NoConvergence):
        regularized_value(quadratic_problem("1", [[1.0]]), 1.0, [2.0, 1.0, 0.5], rtol=1e-12)


def test_default_ladder():
    one, two = default_eps_list(10.0, 1), default_eps_list(10.0, 2)
    assert len(one) == 8 and len(two) == 5
    assert all(b == a / 2 for a, b in zip(one, one[1:]))


def test_bump_decay_rate(problems_dir):
    p = load_problem(problems_dir / "bump-offset.json")
    lams = [100.0 * 2**k for k in range(6)]
    vals = [abs(oscillatory_quadrature(p, l).value) for l in lams]
    slope = np.polyfit(np.log(lams), np.log(vals), 1)[0]
    assert slope <= -3


def test_bump_amplitude_is_compactly_supported(problems_dir):
    p = load_problem(problems_dir / "bump-offset.json")
    x = np.linspace(-3, 4, 7001)
    a = p.amplitude_values([x])
    assert np.all(a[(x < 1) | (x > 2)] == 0)
    assert np.all(a[(x > 1) & (x < 2)] > 0)
