"""Run scenario actions and collect plain-dict results.

Every ``run_*`` function returns ``(result, passed)`` where ``result`` only
holds JSON-friendly values.  Errors from the library propagate; the command
line front end maps them to exit codes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from ..calculus import evaluate_many, schouten
from ..families import FamilyKind, certify, model_bracket_check
from ..foliation import (
    LeafType,
    analyze_point,
    induced_structure,
    precontact_consistency,
    trace_leaf,
)
from ..poissonization import (
    check_isomorphism,
    check_tilde,
    jacobi_poissonization,
    omega_tilde_check,
    sample_space_time,
    sigma_along_trace,
)
from .scenario import Scenario


@dataclass
class Options:
    """Command line overrides; ``None`` keeps the scenario value."""

    at: Optional[List[List[float]]] = None
    t0: Optional[float] = None
    steps: Optional[int] = None
    dt: Optional[float] = None
    seed: Optional[int] = None
    tol: Optional[float] = None
    points: Optional[int] = None
    policy: Optional[str] = None
    pairs: int = 50


def _pick(opt, default):
    return default if opt is None else opt


def _points(sc: Scenario, opts: Options) -> List[List[float]]:
    if opts.at:
        return opts.at
    if sc.at:
        return sc.at
    return [[0.0] * sc.chart.dim]


def run_check(sc: Scenario, opts: Options) -> Tuple[dict, bool]:
    fam = sc.family()
    tol = _pick(opts.tol, sc.tol)
    seed = _pick(opts.seed, sc.seed)
    rep = certify(fam, tol=tol, seed=seed, grid=sc.grid, n_random=_pick(opts.points, sc.points))
    out = {"certificate": rep.to_dict()}
    passed = rep.integrable and rep.isotropy_max <= tol
    if rep.integrable and fam.kind not in (FamilyKind.DIRAC_2FORM, FamilyKind.DIRAC_BIVECTOR):
        mb = model_bracket_check(fam, n_pairs=opts.pairs, seed=seed, tol=tol)
        out["model_bracket"] = mb.to_dict()
        passed = passed and mb.passed
    if sc.expect is not None:
        out["expected"] = sc.expect
        out["as_expected"] = rep.verdict == sc.expect
    return out, passed


def run_classify(sc: Scenario, opts: Options) -> Tuple[dict, bool]:
    fam = sc.family()
    rows = []
    ok = True
    for p in _points(sc, opts):
        pa = analyze_point(fam, p)
        row = pa.to_dict()
        s = induced_structure(fam, p, pa)
        row["induced"] = s.to_dict()
        if pa.leaf_type is LeafType.PRECONTACT:
            gap = precontact_consistency(fam, p)
            row["Phi_minus_d_eta"] = gap
            ok = ok and gap < 1e-6
        ok = ok and pa.rank <= pa.bar_rank <= pa.rank + 1
        if pa.leaf_type is LeafType.LCP:
            ok = ok and pa.bar_rank == pa.rank
        rows.append(row)
    return {"points": rows}, ok


def run_trace(sc: Scenario, opts: Options) -> Tuple[dict, bool]:
    fam = sc.family()
    start = _points(sc, opts)[0]
    tr = trace_leaf(fam, start, policy=_pick(opts.policy, sc.policy), steps=_pick(opts.steps, sc.steps),
                    h=_pick(opts.dt, sc.dt), seed=_pick(opts.seed, sc.seed), t0=opts.t0)
    ranks = {s.rank for s in tr.samples}
    types = {s.leaf_type for s in tr.samples}
    out = tr.to_dict()
    out["constant_rank"] = len(ranks) == 1
    out["constant_leaf_type"] = len(types) == 1
    return out, len(ranks) == 1 and len(types) == 1


def run_poissonize(sc: Scenario, opts: Options) -> Tuple[dict, bool]:
    fam = sc.family()
    tol = _pick(opts.tol, sc.tol)
    seed = _pick(opts.seed, sc.seed)
    n = _pick(opts.points, 30)
    tilde = check_tilde(fam, sample_space_time(fam.dim, n, seed), tol=tol)
    out = {"tilde": tilde.to_dict()}
    passed = tilde.is_dirac
    if not fam.is_integrable(tol):
        return out, False
    iso = check_isomorphism(fam, n_pairs=min(opts.pairs, 10), seed=seed, tol=tol)
    out["isomorphism"] = iso.to_dict()
    passed = passed and iso.passed
    if fam.kind is FamilyKind.JACOBI:
        L = jacobi_poissonization(fam.data["Lambda"], fam.data["E"], check=False)
        S = schouten(L, L)
        exprs = [c for c in S.coeffs.values() if not c.is_zero()]
        pts = sample_space_time(fam.dim, 100, seed)
        res = float(np.max(np.abs(evaluate_many(S.chart, exprs, pts)))) if exprs else 0.0
        out["poisson_residual"] = res
        passed = passed and res < 1e-9
    t0 = _pick(opts.t0, sc.t0)
    forms = []
    for p in _points(sc, opts):
        rep = omega_tilde_check(fam, p, t0)
        forms.append(rep.to_dict())
        passed = passed and rep.passed
    out["leaf_forms"] = forms
    start = _points(sc, opts)[0]
    if analyze_point(fam, start).leaf_type is LeafType.LCP:
        gap = sigma_along_trace(fam, start, t0=t0, steps=_pick(opts.steps, 100),
                                h=_pick(opts.dt, sc.dt), seed=seed)
        out["sigma_relation"] = gap
        passed = passed and gap < 1e-6
    return out, passed


ACTIONS = {
    "check": run_check,
    "classify": run_classify,
    "trace": run_trace,
    "poissonize": run_poissonize,
}
