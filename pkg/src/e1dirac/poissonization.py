"""Passage from a sub-bundle of E1(M) to a sub-bundle of T(MxR) + T*(MxR).

The map

    psi((u, l) + (a, m)) = (u + l d/dt) + e^t (a + m dt)

sends sections on ``M`` (whose coefficients may depend on ``t`` as a
parameter) to sections on the time-extended chart.  The image of a frame
of ``L`` is a frame of the Dirac structure ``L~`` on ``M x R``.  All
``t``-dependence stays symbolic so that ``d/dt`` terms are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .calculus import Chart, KForm, KVector, VectorField, evaluate_many, lift, wedge
from .errors import NotIntegrable, SingularSystem
from .families import DiracFamily
from .foliation import (
    LeafType,
    analyze_point,
    bar_bracket,
    d_eta_fd,
    induced_structure,
    numerical_rank,
    orthonormal_columns,
    trace_leaf,
)
from .sampling import random_polynomial, sample_points
from .sections import E1Section, TMSection, classical_pairing_plus, courant_bracket
from .symexpr import exp, mul, neg, var

T = var("t")
E_T = exp(T)
E_MINUS_T = exp(neg(T))


def psi_apply(e: E1Section) -> TMSection:
    """``(u + l d/dt) + e^t (a + m dt)`` on the time-extended chart."""
    ext = e.chart.extended()
    X = VectorField(ext, e.X.components() + [e.f])
    alpha = KForm.one_form(ext, [mul(E_T, c) for c in e.alpha.components()] + [mul(E_T, e.g)])
    return TMSection(X, alpha)


def psi_inverse(s: TMSection) -> E1Section:
    """Inverse of :func:`psi_apply`; the result has ``t``-dependent coefficients."""
    ext = s.chart
    if not ext.time:
        raise ValueError("psi_inverse expects a section on a time-extended chart")
    base = ext.base()
    n = base.dim
    X = s.X.components()
    a = s.alpha.components()
    return E1Section(
        VectorField(base, X[:n]), X[n],
        KForm.one_form(base, [mul(E_MINUS_T, c) for c in a[:n]]), mul(E_MINUS_T, a[n]),
    )


def sample_space_time(dim: int, n: int = 50, seed: int = 0, low: float = -1.0, high: float = 1.0):
    """Seeded points of ``M x R`` as an ``(n, dim+1)`` array."""
    return sample_points(dim + 1, 0, n, seed, low, high)


@dataclass
class TildeFrame:
    family: DiracFamily
    chart: Chart
    sections: Tuple[TMSection, ...]

    def values(self, points) -> np.ndarray:
        """Array ``(N, 2(n+1), n+1)`` at points of the time-extended chart."""
        P = np.atleast_2d(np.asarray(points, dtype=float))
        exprs = [e for s in self.sections for e in s.expressions()]
        vals = evaluate_many(self.chart, exprs, P)
        m = 2 * self.chart.dim
        return vals.reshape(len(self.sections), m, P.shape[0]).transpose(2, 1, 0)

    def isotropy_max(self, points) -> float:
        exprs = [classical_pairing_plus(a, b) for i, a in enumerate(self.sections)
                 for b in self.sections[i:]]
        return float(np.max(np.abs(evaluate_many(self.chart, exprs, points))))

    def rank_min(self, points) -> int:
        return min(numerical_rank(V)[0] for V in self.values(points))

    def closure_residual(self, points) -> float:
        """Largest least-squares distance of a frame bracket from the frame span."""
        secs = self.sections
        pairs = [(i, j) for i in range(len(secs)) for j in range(i + 1, len(secs))]
        exprs = []
        for i, j in pairs:
            exprs.extend(courant_bracket(secs[i], secs[j]).expressions())
        P = np.atleast_2d(points)
        B = evaluate_many(self.chart, exprs, P)
        m = 2 * self.chart.dim
        B = B.reshape(len(pairs), m, P.shape[0])
        V = self.values(P)
        worst = 0.0
        for k in range(P.shape[0]):
            Q = orthonormal_columns(V[k])
            R = B[:, :, k].T - Q @ (Q.T @ B[:, :, k].T)
            worst = max(worst, float(np.max(np.abs(R))) if R.size else 0.0)
        return worst


def tilde_frame(family: DiracFamily, check: bool = True, tol: float = 1e-8) -> TildeFrame:
    """``psi`` applied to the family frame; refuses families that fail certification."""
    if check and not family.is_integrable(tol):
        raise NotIntegrable(f"{family.kind.value} data do not define a Dirac structure")
    secs = tuple(psi_apply(s) for s in family.frame)
    return TildeFrame(family, family.chart.extended(), secs)


@dataclass
class TildeReport:
    kind: str
    n_points: int
    isotropy_max: float
    rank_min: int
    closure_residual: float
    tol: float
    n_rank: int = 0

    @property
    def is_dirac(self) -> bool:
        return (self.isotropy_max <= self.tol and self.closure_residual <= self.tol
                and self.rank_min == self.n_rank)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "n_points": self.n_points, "isotropy_max": self.isotropy_max,
                "rank_min": self.rank_min, "closure_residual": self.closure_residual,
                "tol": self.tol, "is_dirac": self.is_dirac}


def check_tilde(family: DiracFamily, points=None, tol: float = 1e-8, seed: int = 0) -> TildeReport:
    """Isotropy, rank and Courant closure of the image frame, for any input."""
    tf = tilde_frame(family, check=False)
    if points is None:
        points = sample_space_time(family.dim, 30, seed)
    return TildeReport(family.kind.value, len(points), tf.isotropy_max(points), tf.rank_min(points),
                       tf.closure_residual(points), tol, n_rank=family.dim + 1)


def jacobi_poissonization(Lambda: KVector, E: VectorField, check: bool = True) -> KVector:
    """``e^{-t} (Lambda + d/dt ^ E)`` on the time-extended chart."""
    if check:
        from .families import from_jacobi

        if not from_jacobi(Lambda, E).is_integrable():
            raise NotIntegrable("the pair is not a Jacobi structure")
    ext = Lambda.chart.extended()
    P = lift(Lambda, ext) + wedge(ext.dd("t"), lift(E, ext))
    return P.scale(E_MINUS_T)


def graph_of_bivector(P: KVector, point) -> np.ndarray:
    """Columns ``(#_P e_k, e_k)`` of the graph of ``P`` at a point."""
    M = P.dense(point)
    m = P.chart.dim
    # (#_P a)^j = P^{ij} a_i
    return np.vstack([M.T, np.eye(m)])


# ---------------------------------------------------------------------------
# morphism check


@dataclass
class IsomorphismReport:
    kind: str
    n_pairs: int
    n_points: int
    anchor_residual: float
    bracket_residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.anchor_residual <= self.tol and self.bracket_residual <= self.tol

    def to_dict(self) -> dict:
        return {"kind": self.kind, "n_pairs": self.n_pairs, "n_points": self.n_points,
                "anchor_residual": self.anchor_residual, "bracket_residual": self.bracket_residual,
                "tol": self.tol, "passed": self.passed}


def random_time_section(family: DiracFamily, rng: np.random.Generator, degree: int = 2) -> E1Section:
    """A frame combination whose coefficients are polynomials in the coordinates and ``t``."""
    names = list(family.chart.names) + ["t"]
    out = None
    for s in family.frame:
        c = random_polynomial(rng, names, degree, terms=2)
        term = s.scale(c)
        out = term if out is None else out + term
    return out


def check_isomorphism(family: DiracFamily, samples=None, pairs=None, n_pairs: int = 10,
                      seed: int = 0, tol: float = 1e-8) -> IsomorphismReport:
    """Compare ``psi`` of the time-extended bracket with the Courant bracket of the images."""
    if not family.is_integrable():
        raise NotIntegrable(f"{family.kind.value} data do not satisfy the structure equations")
    rng = np.random.default_rng(seed)
    if samples is None:
        samples = sample_space_time(family.dim, 20, seed)
    if pairs is None:
        pairs = [(random_time_section(family, rng), random_time_section(family, rng))
                 for _ in range(n_pairs)]
    ext = family.chart.extended()
    anchor_exprs, bracket_exprs = [], []
    for a, b in pairs:
        for e in (a, b):
            img = psi_apply(e)
            bar = VectorField(ext, e.X.components() + [e.f])
            anchor_exprs.extend((img.X - bar).components())
        lhs = psi_apply(bar_bracket(family, a, b))
        rhs = courant_bracket(psi_apply(a), psi_apply(b))
        bracket_exprs.extend((lhs - rhs).expressions())
    an = float(np.max(np.abs(evaluate_many(ext, anchor_exprs, samples))))
    br = float(np.max(np.abs(evaluate_many(ext, bracket_exprs, samples))))
    return IsomorphismReport(family.kind.value, len(pairs), len(samples), an, br, tol)


# ---------------------------------------------------------------------------
# leaf 2-forms


def omega_tilde(family: DiracFamily, x, t: float) -> Tuple[np.ndarray, np.ndarray]:
    """``Omega_F~`` at ``(x, t)`` from the image frame and the classical skew pairing.

    Returns ``(Omega, basis)``: the 2-form as an ambient ``(n+1) x (n+1)``
    matrix and an orthonormal basis of the leaf tangent space.
    """
    tf = tilde_frame(family, check=False)
    p = np.concatenate([np.ravel(x), [t]])
    V = tf.values(p)[0]
    m = family.dim + 1
    X, a = V[:m], V[m:]
    P = a.T @ X                      # P_ij = a_i(X_j)
    G = 0.5 * (P - P.T)
    Ap = np.linalg.pinv(X, rcond=1e-9)
    Om = Ap.T @ G @ Ap
    Om = 0.5 * (Om - Om.T)
    res = float(np.max(np.abs(X.T @ Om @ X - G)))
    if res > 1e-7 * max(1.0, float(np.max(np.abs(G)))):
        raise SingularSystem("the skew pairing does not descend to the leaf", {"residual": res})
    return Om, orthonormal_columns(X)


@dataclass
class OmegaTildeReport:
    case: str
    point: List[float]
    t: float
    residual: float
    sigma_residual: Optional[float]
    tol: float
    values: Dict[str, float]

    @property
    def passed(self) -> bool:
        ok = self.residual <= self.tol
        if self.sigma_residual is not None:
            ok = ok and self.sigma_residual <= self.tol
        return ok

    def to_dict(self) -> dict:
        return {"case": self.case, "point": self.point, "t": self.t, "residual": self.residual,
                "sigma_residual": self.sigma_residual, "tol": self.tol, "passed": self.passed,
                "values": self.values}


def omega_tilde_closed_form(family: DiracFamily, x, t: float) -> Tuple[str, np.ndarray]:
    """The leaf form predicted from the structure induced on the leaf of ``x``.

    Precontact leaves: ``e^t (d eta_F + dt ^ eta_F)``.  LCP leaves:
    ``e^t Omega_F`` (with ``sigma = -t``), pulled back along the projection.
    """
    x = np.asarray(x, dtype=float).ravel()
    n = family.dim
    s = induced_structure(family, x)
    out = np.zeros((n + 1, n + 1))
    if s.leaf_type is LeafType.PRECONTACT:
        U = s.tangent_basis
        P = U @ U.T
        out[:n, :n] = P @ d_eta_fd(family, x) @ P
        out[n, :n] = s.eta
        out[:n, n] = -s.eta
        return "precontact", np.exp(t) * out
    out[:n, :n] = s.Omega
    return "lcp", np.exp(t) * out


def omega_tilde_check(family: DiracFamily, x, t: float, tol: float = 1e-7) -> OmegaTildeReport:
    """Compare the image-frame leaf form with the closed form on leaf tangents."""
    x = np.asarray(x, dtype=float).ravel()
    n = family.dim
    Om, W = omega_tilde(family, x, t)
    case, closed = omega_tilde_closed_form(family, x, t)
    res = float(np.max(np.abs(W.T @ (Om - closed) @ W))) if W.size else 0.0
    sigma_res = None
    if case == "lcp":
        # d sigma = pi^* omega_F with sigma = -t: on tangents (u, l), -l = omega_F(u)
        s = induced_structure(family, x)
        sigma_res = float(np.max(np.abs(-W[n] - s.omega @ W[:n]))) if W.size else 0.0
    vals = {}
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            vals[f"{i},{j}"] = float(Om[i, j])
    return OmegaTildeReport(case, [float(v) for v in x], float(t), res, sigma_res, tol, vals)


def sigma_along_trace(family: DiracFamily, x0, t0: float = 0.0, steps: int = 100, h: float = 0.05,
                      seed: int = 0, policy: str = "random") -> float:
    """Trace the time-extended leaf and return the worst failure of ``d sigma = pi^* omega_F``.

    Along each step the change of ``-t`` is compared with the integral of
    ``omega_F`` over the projected step (midpoint rule on the RK4 chord).
    """
    tr = trace_leaf(family, x0, policy=policy, steps=steps, h=h, seed=seed, t0=t0)
    if analyze_point(family, x0).leaf_type is not LeafType.LCP:
        raise SingularSystem("the start point is not on an LCP leaf")
    pts, ts = tr.points, tr.times
    worst = 0.0
    for k in range(1, len(pts)):
        mid = 0.5 * (pts[k] + pts[k - 1])
        w = induced_structure(family, mid).omega
        worst = max(worst, abs(-(ts[k] - ts[k - 1]) - float(w @ (pts[k] - pts[k - 1]))))
    return worst
