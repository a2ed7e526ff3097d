import numpy as np
import pytest

from conftest import random_combination, random_section
from e1dirac import catalog_data as cd
from e1dirac.calculus import Chart, KForm, VectorField, evaluate_many
from e1dirac.errors import ChartMismatch
from e1dirac.sampling import random_polynomial, sample_points
from e1dirac.sections import (
    E1Section,
    TMSection,
    anchor_rho,
    courant_bracket,
    extended_bracket,
    jacobiator,
    jacobiator_defect,
    leibniz_defect,
    pairing_minus,
    pairing_plus,
    t_tensor,
)
from e1dirac.symexpr import as_expr, var

R1 = Chart(["x"])
R2, R3 = cd.R2, cd.R3
x, y = var("x"), var("y")
half = as_expr(1) / 2


def sec(chart, X=None, f=0, alpha=None, g=0):
    return E1Section.build(chart, X, f, alpha, g)


def max_abs(chart, exprs, pts):
    exprs = [e for e in exprs if not e.is_zero()]
    return 0.0 if not exprs else float(np.max(np.abs(evaluate_many(chart, exprs, pts))))


def test_pairing_examples():
    e = sec(R1, R1.dd("x"), 0, R1.d("x"), 0)
    assert pairing_plus(e, e) == 1
    a = sec(R1, X=R1.dd("x"))
    b = sec(R1, alpha=R1.d("x"))
    assert pairing_plus(a, b) == half
    assert pairing_plus(sec(R1, f=1), sec(R1, g=1)) == half
    assert pairing_minus(a, b) == -half
    assert pairing_minus(b, a) == half


def test_anchor_examples():
    e = sec(R2, R2.dd("x"), 3, R2.d("y"), 5)
    assert anchor_rho(e) == R2.dd("x")
    assert anchor_rho(sec(R2, f=x, alpha=R2.d("x"), g=y)).is_zero()


def test_bracket_examples():
    X, Y = VectorField(R2, [y, x * x]), VectorField(R2, [1, x])
    br = extended_bracket(sec(R2, X=X), sec(R2, X=Y))
    assert br.f.is_zero() and br.alpha.is_zero() and br.g.is_zero()
    br = extended_bracket(sec(R1, X=R1.dd("x")), sec(R1, alpha=x * R1.d("x")))
    assert br.X.is_zero() and br.f.is_zero()
    assert br.alpha == R1.d("x").scale(half) and br.g == -x / 2
    br = extended_bracket(sec(R1, f=1), sec(R1, g=1))
    assert br.X.is_zero() and br.f.is_zero() and br.alpha.is_zero() and br.g == half


def test_bracket_is_term_by_term_formula(rng):
    """Hand-expanded components for constant-coefficient data on R^1."""
    e1 = sec(R1, R1.dd("x").scale(2), x, R1.d("x").scale(3), 1)
    e2 = sec(R1, VectorField(R1, [x]), 1, R1.d("x").scale(x), x)
    br = extended_bracket(e1, e2)
    # [2d, x d] = 2d;  X1(f2) - X2(f1) = 0 - x
    assert br.X == R1.dd("x").scale(2) and br.f == -x
    # g: X1(g2) - X2(g1) + 1/2(i_{X2}a1 - i_{X1}a2 - f2 g1 + f1 g2) = 2 + 1/2(3x - 2x - 1 + x^2)
    assert br.g == 2 + (x - 1 + x * x) / 2


def test_antisymmetry_and_pairing_symmetry(rng):
    pts = sample_points(3, 0, 20, 1)
    for _ in range(25):
        a, b = random_section(rng, R3), random_section(rng, R3)
        s = extended_bracket(a, b) + extended_bracket(b, a)
        assert max_abs(R3, s.expressions(), pts) < 1e-10
        assert max_abs(R3, [pairing_plus(a, b) - pairing_plus(b, a),
                            pairing_minus(a, b) + pairing_minus(b, a),
                            pairing_minus(a, a)], pts) < 1e-10


def test_form_only_sections_bracket(rng):
    for _ in range(10):
        a = random_section(rng, R2)
        b = random_section(rng, R2)
        a = sec(R2, alpha=a.alpha, g=a.g)
        b = sec(R2, alpha=b.alpha, g=b.g)
        br = extended_bracket(a, b)
        assert br.X.is_zero() and br.f.is_zero()


def test_leibniz_rule(rng):
    pts = sample_points(2, 0, 20, 2)
    for _ in range(25):
        a, b = random_section(rng, R2), random_section(rng, R2)
        h = random_polynomial(rng, R2.names, 2)
        assert max_abs(R2, leibniz_defect(a, b, h).expressions(), pts) < 1e-9
    a, b = random_section(rng, R2), random_section(rng, R2)
    assert leibniz_defect(a, b, as_expr(7)).is_zero()
    assert leibniz_defect(a, E1Section.zero(R2), x).is_zero()


def test_courant_bracket_examples():
    X, Y = VectorField(R2, [y, 0]), VectorField(R2, [0, x])
    from e1dirac.calculus import lie_bracket, differential

    z = KForm.zero(R2, 1)
    assert courant_bracket(TMSection(X, z), TMSection(Y, z)).X == lie_bracket(X, Y)
    r = courant_bracket(TMSection(R1.dd("x"), KForm.zero(R1, 1)), TMSection(VectorField(R1), x * R1.d("x")))
    assert r.X.is_zero() and r.alpha == R1.d("x").scale(half)
    r = courant_bracket(TMSection(VectorField(R2), differential(R2, x * y)),
                        TMSection(VectorField(R2), differential(R2, x)))
    assert r.X.is_zero() and r.alpha.is_zero()


def test_t_tensor_examples_and_paths(rng):
    pts = sample_points(3, 0, 16, 3)
    fam = cd.contact_jacobi()
    fr = fam.frame
    for i, j, k in [(0, 1, 2), (0, 1, 3), (1, 2, 3)]:
        assert max_abs(R3, [t_tensor(fr[i], fr[j], fr[k])], pts) < 1e-9
    assert t_tensor(fr[0], fr[1], E1Section.zero(R3)).is_zero()
    for fam in (cd.contact_r3(), cd.hpoisson_r3(), cd.nonjacobi_r3(), cd.lcp_r3()):
        for _ in range(5):
            a, b, c = (random_combination(rng, fam) for _ in range(3))
            d = t_tensor(a, b, c) - t_tensor(a, b, c, method="closed_form")
            assert max_abs(R3, [d], pts) < 1e-9


def test_t_tensor_totally_antisymmetric(rng):
    pts = sample_points(3, 0, 16, 4)
    fam = cd.nonjacobi_r3()
    for _ in range(5):
        a, b, c = (random_combination(rng, fam) for _ in range(3))
        base = t_tensor(a, b, c)
        for perm, sign in (((b, a, c), -1), ((a, c, b), -1), ((b, c, a), 1)):
            assert max_abs(R3, [base - sign * t_tensor(*perm)], pts) < 1e-9


def test_t_tensor_detects_non_jacobi_pair():
    from e1dirac.calculus import KVector
    from e1dirac.families import from_jacobi

    pts = sample_points(3)
    # z Dx^Dy + x Dy^Dz is a Poisson bivector, so T_L vanishes on its frame
    fam = from_jacobi(KVector(R3, 2, {(0, 1): cd.z, (1, 2): x}), VectorField(R3))
    fr = fam.frame
    assert max_abs(R3, [t_tensor(fr[0], fr[1], fr[2])], pts) < 1e-12
    # Dx^Dy + x Dx^Dz is not
    fam = from_jacobi(KVector(R3, 2, {(0, 1): 1, (0, 2): x}), VectorField(R3))
    fr = fam.frame
    assert max_abs(R3, [t_tensor(fr[0], fr[1], fr[2])], pts) > 1e-3


def test_pseudo_jacobi_identity(rng):
    pts = sample_points(3, 0, 12, 5)
    for fam in (cd.nonjacobi_r3(), cd.contact_jacobi(), cd.lcp_r3()):
        for _ in range(4):
            a, b, c = (random_combination(rng, fam) for _ in range(3))
            assert max_abs(R3, jacobiator_defect(a, b, c).expressions(), pts) < 1e-8
    fam = cd.contact_jacobi()
    a, b, c = (random_combination(rng, fam) for _ in range(3))
    assert max_abs(R3, jacobiator(a, b, c).expressions(), pts) < 1e-8
    z = sec(R2, X=R2.dd("x").scale(2), f=1)
    assert jacobiator_defect(z, sec(R2, X=R2.dd("y")), sec(R2, f=3)).is_zero()


def test_chart_mismatch():
    with pytest.raises(ChartMismatch):
        extended_bracket(E1Section.zero(R2), E1Section.zero(R3))
    with pytest.raises(ChartMismatch):
        E1Section(R2.dd("x"), 0, R3.d("x"), 0)
