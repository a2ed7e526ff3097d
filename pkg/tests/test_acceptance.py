"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line.

The lines are printed in the pytest terminal summary (and directly when the
module is run as a script).
"""

import time

import numpy as np
import pytest

import conftest
from conftest import random_combination, random_section
from e1dirac import catalog_data as cd
from e1dirac.calculus import evaluate_many, schouten
from e1dirac.cli.catalog import CATALOG, EXPECTED_FAILURES, get
from e1dirac.cli.main import dumps, run_catalog
from e1dirac.cli.runner import Options
from e1dirac.families import certify, model_bracket_check
from e1dirac.foliation import (
    Immersion,
    LeafType,
    TraceStatus,
    analyze_point,
    induced_structure,
    lcp_fiber,
    restrict_fiber,
    subspace_distance,
    trace_leaf,
)
from e1dirac.poissonization import (
    check_isomorphism,
    jacobi_poissonization,
    omega_tilde_check,
    sample_space_time,
    sigma_along_trace,
)
from e1dirac.sampling import random_polynomial, sample_points
from e1dirac.sections import extended_bracket, jacobiator_defect, leibniz_defect
from e1dirac.symexpr import var

TITLES = {
    1: "bracket algebra (antisymmetry, Leibniz rule, pseudo-Jacobi) < 1e-8",
    2: "integrability equivalence of T_L and structure equations",
    3: "model bracket agreement < 1e-8 on 50 pairs",
    4: "leaf type and rank constant along 200-step traces",
    5: "dimension relations r <= rbar <= r+1, rbar = r on LCP leaves",
    6: "induced structure recoveries within 1e-9",
    7: "Poissonization suite",
    8: "submanifold restriction",
    9: "byte-identical catalog reports",
}


def record(k: int, ok: bool, detail: str, t0: float) -> None:
    line = f"CRITERION {k} {'PASS' if ok else 'FAIL'}: {TITLES[k]} [{detail}; {time.time() - t0:.1f}s]"
    conftest.ACCEPTANCE_LINES[k] = line
    print(line)
    assert ok, line


def max_abs(chart, exprs, pts) -> float:
    exprs = [e for e in exprs if not e.is_zero()]
    if not exprs:
        return 0.0
    return float(np.max(np.abs(evaluate_many(chart, exprs, pts))))


def test_criterion_1_bracket_algebra():
    t0 = time.time()
    rng = np.random.default_rng(101)
    worst = {"antisymmetry": 0.0, "leibniz": 0.0, "pseudo_jacobi": 0.0}
    count = {"pairs": 0, "triples": 0}
    # 100 pairs on each of R^2 and R^3
    for chart in (cd.R2, cd.R3):
        pts = sample_points(chart.dim, 0, 24, seed=chart.dim)
        anti, leib = [], []
        for _ in range(100):
            a, b = random_section(rng, chart, 1), random_section(rng, chart, 1)
            h = random_polynomial(rng, chart.names, 2)
            anti.extend((extended_bracket(a, b) + extended_bracket(b, a)).expressions())
            leib.extend(leibniz_defect(a, b, h).expressions())
            count["pairs"] += 1
        worst["antisymmetry"] = max(worst["antisymmetry"], max_abs(chart, anti, pts))
        worst["leibniz"] = max(worst["leibniz"], max_abs(chart, leib, pts))
    # 200 isotropic triples drawn from catalog families, integrable or not
    fams = [cd.nonhomogeneous_r2(), cd.hpoisson_r2(), cd.precontact_r2(), cd.dirac_dxdy(),
            cd.nonjacobi_r3(), cd.contact_jacobi(), cd.lcp_r3(), cd.hpoisson_r3()]
    for fam in fams:
        pts = sample_points(fam.dim, 0, 24, seed=10 + fam.dim)
        exprs = []
        for _ in range(25):
            a, b, c = (random_combination(rng, fam) for _ in range(3))
            exprs.extend(jacobiator_defect(a, b, c).expressions())
            count["triples"] += 1
        worst["pseudo_jacobi"] = max(worst["pseudo_jacobi"], max_abs(fam.chart, exprs, pts))
    ok = max(worst.values()) < 1e-8 and count["pairs"] >= 200 and count["triples"] >= 200
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    record(1, ok, f"{count['pairs']} pairs, {count['triples']} triples: {detail}", t0)


def test_criterion_2_integrability_equivalence():
    t0 = time.time()
    ok = True
    notes = []
    for name in CATALOG:
        sc = get(name)
        rep = certify(sc.family(), seed=0)
        symbolic = all(rep.symbolic_zero.values())
        if symbolic != (rep.t_max < 1e-8):
            ok = False
            notes.append(f"{name} mismatch")
        if name in EXPECTED_FAILURES and not rep.t_max > 1e-3:
            ok = False
            notes.append(f"{name} T_L {rep.t_max:.1e}")
        if (sc.expect == "INTEGRABLE") != symbolic:
            ok = False
            notes.append(f"{name} unexpected verdict")
    record(2, ok, f"{len(CATALOG)} scenarios" + ("; " + ", ".join(notes) if notes else ""), t0)


def test_criterion_3_model_brackets():
    t0 = time.time()
    fams = {"lcp_r3": cd.lcp_r3(), "precontact_r2": cd.precontact_r2(), "contact_r3": cd.contact_r3(),
            "contact_jacobi": cd.contact_jacobi(), "jacobi_lcs": cd.jacobi_lcs(),
            "hpoisson_r2": cd.hpoisson_r2(), "hpoisson_r3": cd.hpoisson_r3()}
    worst = 0.0
    for k, fam in enumerate(fams.values()):
        rep = model_bracket_check(fam, n_pairs=50, seed=k)
        worst = max(worst, rep.max_residual)
    record(3, worst < 1e-8, f"{len(fams)} families x 50 pairs, max {worst:.1e}", t0)


def _catalog_traces():
    for name in CATALOG:
        sc = get(name)
        fam = sc.family()
        for p in sc.at:
            for policy in ("cycle", "random"):
                yield name, fam, p, trace_leaf(fam, p, policy=policy, steps=200, h=0.05, seed=7)


def test_criterion_4_leaf_dichotomy():
    t0 = time.time()
    ok, n = True, 0
    for name, fam, p, tr in _catalog_traces():
        n += 1
        steps = len(tr.samples) - 1
        ranks = {s.rank for s in tr.samples}
        types = {s.leaf_type for s in tr.samples}
        if steps < 200 or tr.status is not TraceStatus.COMPLETE or len(ranks) != 1 or len(types) != 1:
            ok = False
    record(4, ok, f"{n} traces of 200 steps", t0)


def test_criterion_5_dimension_relations():
    t0 = time.time()
    ok, n = True, 0
    for name in CATALOG:
        fam = get(name).family()
        for p in sample_points(fam.dim, 3, 16, seed=5):
            pa = analyze_point(fam, p)
            n += 1
            if not pa.rank <= pa.bar_rank <= pa.rank + 1:
                ok = False
            if pa.leaf_type is LeafType.LCP and pa.bar_rank != pa.rank:
                ok = False
            if pa.leaf_type is LeafType.PRECONTACT and pa.bar_rank != pa.rank + 1:
                ok = False
    record(5, ok, f"{n} points", t0)


def test_criterion_6_induced_structures():
    t0 = time.time()
    errs = {"hp eta": 0.0, "contact eta": 0.0, "lcs Omega": 0.0, "lcs omega": 0.0}
    for p in sample_points(2, 3, 20, seed=6):
        s = induced_structure(cd.hpoisson_r2(), p)
        errs["hp eta"] = max(errs["hp eta"], float(np.max(np.abs(s.eta - [0.0, -p[0]]))))
    for p in sample_points(3, 3, 20, seed=6):
        s = induced_structure(cd.contact_jacobi(), p)
        errs["contact eta"] = max(errs["contact eta"], float(np.max(np.abs(s.eta - [p[1], 0.0, -1.0]))))
        s = induced_structure(cd.jacobi_lcs(), p)
        Om = np.zeros((3, 3))
        Om[0, 1], Om[1, 0] = -1.0, 1.0
        errs["lcs Omega"] = max(errs["lcs Omega"], float(np.max(np.abs(s.Omega - Om))))
        errs["lcs omega"] = max(errs["lcs omega"], float(np.max(np.abs(s.omega - [-1.0, 0.0, 0.0]))))
    ok = max(errs.values()) < 1e-9
    record(6, ok, ", ".join(f"{k} {v:.1e}" for k, v in errs.items()), t0)


def test_criterion_7_poissonization():
    t0 = time.time()
    fam = cd.contact_jacobi()
    L = jacobi_poissonization(fam.data["Lambda"], fam.data["E"])
    S = schouten(L, L)
    poisson = max_abs(S.chart, list(S.coeffs.values()), sample_space_time(3, 100, seed=7))
    iso = 0.0
    for k, f in enumerate((cd.contact_r3(), cd.contact_jacobi(), cd.jacobi_lcs(), cd.hpoisson_r2(), cd.lcp_r3())):
        rep = check_isomorphism(f, n_pairs=6, seed=k)
        iso = max(iso, rep.anchor_residual, rep.bracket_residual)
    form = 0.0
    for p in sample_space_time(3, 50, seed=8):
        form = max(form, omega_tilde_check(cd.contact_r3(), p[:3], p[3]).residual)
    lcs = cd.jacobi_lcs()
    sigma = sigma_along_trace(lcs, [0.1, 0.2, 5.0], t0=0.3, steps=200, seed=9)
    tr = trace_leaf(lcs, [0.1, 0.2, 5.0], policy="random", steps=200, seed=9, t0=0.3)
    drift = float(np.ptp(tr.times - tr.points[:, 0]))
    ok = poisson < 1e-9 and iso < 1e-8 and form < 1e-7 and sigma < 1e-6 and drift < 1e-6
    record(7, ok, f"[L~,L~] {poisson:.1e}, morphism {iso:.1e}, leaf form {form:.1e}, "
                  f"d sigma {sigma:.1e}, t-x drift {drift:.1e}", t0)


def test_criterion_8_restriction():
    t0 = time.time()
    u = var("u")
    S = Immersion(["u"], [u, 0 * u])
    expected = np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 1.0]])
    fam = cd.dirac_dxdy()
    dist = max(subspace_distance(restrict_fiber(fam, S, [q]).image, expected)
               for q in np.linspace(-2, 2, 20))
    lcs = cd.jacobi_lcs()
    v = var("v")
    leaf = Immersion(["u", "v"], [u, v, 5 + 0 * u])
    J = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
    leaf_dist = 0.0
    for q in sample_points(2, 0, 20, seed=8):
        s = induced_structure(lcs, [q[0], q[1], 5.0])
        model = lcp_fiber(J.T @ s.Omega @ J, J.T @ s.omega)
        leaf_dist = max(leaf_dist, subspace_distance(restrict_fiber(lcs, leaf, q).image, model))
    ok = dist < 1e-10 and leaf_dist < 1e-10
    record(8, ok, f"x-axis {dist:.1e} at 20 points, leaf {{z=5}} {leaf_dist:.1e}", t0)


def test_criterion_9_determinism():
    t0 = time.time()
    opts = Options(pairs=4)
    report = run_catalog(opts)
    a = dumps(report)
    b = dumps(run_catalog(opts))
    ok = a == b and report["exit_code"] == 0
    record(9, ok, f"{len(CATALOG)} scenarios, {len(a)} bytes, all as expected: {report['exit_code'] == 0}", t0)


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(pytest.main([__file__, "-q"]))
