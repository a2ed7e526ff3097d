"""Leaf analysis, induced structures, restriction and tracing."""

import numpy as np
import pytest

from e1dirac import catalog_data as C
from e1dirac.calculus import KVector, VectorField, lie_bracket
from e1dirac.errors import IllConditioned, RankDrop
from e1dirac.families import from_dirac_graph, from_jacobi
from e1dirac.foliation import (
    Immersion,
    LeafType,
    TraceStatus,
    analyze_point,
    bar_bracket,
    bar_distribution,
    bar_jacobiator,
    induced_structure,
    lcp_fiber,
    omega_loop_integral,
    precontact_consistency,
    precontact_fiber,
    restrict_fiber,
    restrict_to_submanifold,
    subspace_distance,
    trace_leaf,
    volume_form_value,
)
from e1dirac.sampling import random_polynomial, sample_points
from e1dirac.symexpr import var

x, y, z, t = var("x"), var("y"), var("z"), var("t")

EXPECTED = {
    # name: (rank, bar rank, leaf type) at generic points
    "contact_jacobi": (3, 4, LeafType.PRECONTACT),
    "jacobi_lcs": (2, 2, LeafType.LCP),
    "hpoisson_r2": (2, 3, LeafType.PRECONTACT),
    "hpoisson_r3": (3, 3, LeafType.LCP),
    "dirac_dxdy": (2, 2, LeafType.LCP),
    "lcp_r3": (3, 3, LeafType.LCP),
    "precontact_r2": (2, 3, LeafType.PRECONTACT),
    "contact_r3": (3, 4, LeafType.PRECONTACT),
}


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_rank_and_leaf_type(name):
    fam = getattr(C, name)()
    for p in sample_points(fam.dim, 0, 8, seed=3):
        pa = analyze_point(fam, p)
        assert (pa.rank, pa.bar_rank, pa.leaf_type) == EXPECTED[name]
        assert bar_distribution(fam, p).basis.shape[1] == pa.bar_rank


def test_ambiguous_rank_is_refused():
    R3 = C.R3
    fam = from_jacobi(KVector(R3, 2, {(0, 1): 2e-9}), R3.dd("z"))
    with pytest.raises(IllConditioned) as info:
        analyze_point(fam, [0.1, 0.2, 0.3])
    assert "singular_values" in info.value.diagnostics


def test_rank_drop_of_bivector():
    fam = from_dirac_graph(KVector(C.R2, 2, {(0, 1): x}))
    assert analyze_point(fam, [0.0, 0.4]).rank == 0
    assert analyze_point(fam, [0.5, 0.4]).rank == 2


def test_hp_induced_contact_form():
    fam = C.hpoisson_r2()
    for p in sample_points(2, 0, 6, seed=1):
        s = induced_structure(fam, p)
        assert np.allclose(s.eta, [0.0, -p[0]], atol=1e-12)


def test_contact_pair_induced_form():
    fam = C.contact_jacobi()
    for p in sample_points(3, 0, 6, seed=2):
        s = induced_structure(fam, p)
        assert np.allclose(s.eta, [p[1], 0.0, -1.0], atol=1e-12)


def test_jacobi_lcs_induced_forms():
    fam = C.jacobi_lcs()
    s = induced_structure(fam, [0.3, -0.2, 5.0])
    assert np.allclose(s.omega, [-1, 0, 0], atol=1e-12)
    assert np.allclose(s.Omega, [[0, -1, 0], [1, 0, 0], [0, 0, 0]], atol=1e-12)


def test_lcp_family_reproduces_its_data():
    fam = C.lcp_r3()
    p = np.array([0.4, 0.1, -0.3])
    s = induced_structure(fam, p)
    assert np.allclose(s.omega, [1, 0, 0], atol=1e-12)
    Om = np.zeros((3, 3))
    Om[1, 2], Om[2, 1] = np.exp(0.4), -np.exp(0.4)
    assert np.allclose(s.Omega, Om, atol=1e-12)


@pytest.mark.parametrize("name", ["contact_jacobi", "hpoisson_r2", "precontact_r2", "contact_r3"])
def test_phi_equals_d_eta(name):
    fam = getattr(C, name)()
    for p in sample_points(fam.dim, 0, 5, seed=4):
        assert precontact_consistency(fam, p) < 1e-6


@pytest.mark.parametrize("name", ["jacobi_lcs", "hpoisson_r3", "lcp_r3", "dirac_dxdy"])
def test_omega_closed_on_loops(name):
    fam = getattr(C, name)()
    for p in sample_points(fam.dim, 0, 3, seed=5):
        assert omega_loop_integral(fam, p, size=0.2) < 1e-6


def test_hp3_leaf_volume_nonzero():
    fam = C.hpoisson_r3()
    for p in sample_points(3, 0, 5, seed=6):
        assert abs(volume_form_value(induced_structure(fam, p))) > 1e-6


def test_restriction_to_x_axis():
    S = Immersion(["u"], [var("u"), 0 * var("u")])
    fib = restrict_fiber(C.dirac_dxdy(), S, [0.7])
    expected = np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 1.0]])
    assert subspace_distance(fib.image, expected) < 1e-10


def test_restriction_matches_leaf_structure():
    fam = C.jacobi_lcs()
    u, v = var("u"), var("v")
    S = Immersion(["u", "v"], [u, v, 5 + 0 * u])
    for q in sample_points(2, 0, 5, seed=7):
        fib = restrict_fiber(fam, S, q)
        s = induced_structure(fam, [q[0], q[1], 5.0])
        J = np.array([[1, 0], [0, 1], [0, 0]], dtype=float)
        model = lcp_fiber(J.T @ s.Omega @ J, J.T @ s.omega)
        assert subspace_distance(fib.image, model) < 1e-8


def test_restriction_refuses_dimension_jump():
    fam = from_dirac_graph(KVector(C.R2, 2, {(0, 1): x}))
    S = Immersion(["u"], [var("u"), 0 * var("u")])
    with pytest.raises(RankDrop):
        restrict_to_submanifold(fam, S, [[0.5], [0.0]])
    assert restrict_to_submanifold(fam, S, [[0.5], [0.2]]).constant_dimension


def test_precontact_fiber_is_lagrangian():
    rng = np.random.default_rng(0)
    Phi = rng.standard_normal((3, 3))
    Phi = Phi - Phi.T
    V = precontact_fiber(Phi, rng.standard_normal(3))
    n = 3
    P = V[n + 1:2 * n + 1].T @ V[:n] + np.outer(V[2 * n + 1], V[n])
    assert np.allclose(P + P.T, 0, atol=1e-12)


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_trace_stays_on_leaf(name):
    fam = getattr(C, name)()
    p = np.array([0.3, 0.4, 0.5])[: fam.dim]
    tr = trace_leaf(fam, p, steps=40, h=0.05)
    assert tr.status is TraceStatus.COMPLETE
    assert all(s.rank == EXPECTED[name][0] for s in tr.samples)


def test_trace_lcs_keeps_z():
    tr = trace_leaf(C.jacobi_lcs(), [0.1, 0.2, 5.0], policy="random", steps=60, seed=3)
    assert np.ptp(tr.points[:, 2]) < 1e-12


def test_trace_time_extended_conserves_t_minus_x():
    tr = trace_leaf(C.jacobi_lcs(), [0.1, 0.2, 5.0], policy="random", steps=60, seed=1, t0=0.3)
    assert np.ptp(tr.times - tr.points[:, 0]) < 1e-10


def test_trace_stops_at_rank_change():
    fam = from_jacobi(KVector(C.R3, 2, {(0, 1): 1}), VectorField(C.R3, [0, 0, x]))
    tr = trace_leaf(fam, [0.25, 0.0, 0.0], steps=40, h=0.05)
    assert tr.status is TraceStatus.REACHED_SINGULAR
    assert all(s.rank == 3 for s in tr.samples)


def test_trace_is_reproducible():
    a = trace_leaf(C.contact_r3(), [0.1, 0.1, 0.1], policy="random", seed=9, steps=20)
    b = trace_leaf(C.contact_r3(), [0.1, 0.1, 0.1], policy="random", seed=9, steps=20)
    assert np.array_equal(a.points, b.points)


def _time_dependent_section(rng, fam):
    names = list(fam.chart.names) + ["t"]
    out = None
    for i in rng.choice(len(fam.frame), size=2, replace=False):
        s = fam.frame[int(i)].scale(random_polynomial(rng, names, 1, terms=2))
        out = s if out is None else out + s
    return out


def _max_on(fam, sec, rng):
    pts = rng.uniform(-1, 1, size=(12, fam.dim))
    ts = rng.uniform(-1, 1, size=12)
    return float(np.max(np.abs(sec.values(pts, ts))))


@pytest.mark.parametrize("name", ["jacobi_lcs", "hpoisson_r2", "contact_jacobi"])
def test_bar_bracket_jacobi_identity(name, rng):
    fam = getattr(C, name)()
    for _ in range(2):
        a, b, c = (_time_dependent_section(rng, fam) for _ in range(3))
        assert _max_on(fam, bar_jacobiator(fam, a, b, c), rng) < 1e-8


def test_bar_bracket_fails_for_non_jacobi(rng):
    fam = C.nonjacobi_r3()
    worst = 0.0
    for i in range(len(fam.frame)):
        for j in range(len(fam.frame)):
            for k in range(len(fam.frame)):
                J = bar_jacobiator(fam, fam.frame[i], fam.frame[j], fam.frame[k])
                worst = max(worst, _max_on(fam, J, rng))
    assert worst > 1e-3


def test_bar_anchor_is_a_morphism(rng):
    fam = C.contact_jacobi()
    ext = fam.chart.extended()

    def lifted(e):
        return VectorField(ext, e.X.components() + [e.f])

    for _ in range(3):
        a, b = _time_dependent_section(rng, fam), _time_dependent_section(rng, fam)
        lhs = lifted(bar_bracket(fam, a, b))
        rhs = lie_bracket(lifted(a), lifted(b))
        diff = lhs - rhs
        pts = rng.uniform(-1, 1, size=(10, 4))
        from e1dirac.calculus import evaluate_many
        vals = evaluate_many(ext, diff.components(), pts)
        assert np.max(np.abs(vals)) < 1e-9
