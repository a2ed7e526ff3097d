"""The five families of Dirac structures, their frames and certification.

Each family is presented by a generating frame of ``n + 1`` sections
obtained by feeding the standard basis of its model bundle into the
family's section formula:

=====================  ===========  =========================================
kind                   model        section of L for a model section
=====================  ===========  =========================================
Dirac graph (2-form)   (X, f)       (X, 0) + (i_X Omega, f)
Dirac graph (bivector) (a, f)       (#a, 0) + (a, f)
l.c.p. (Omega, w)      (X, f)       (X, -i_X w) + (i_X Omega + f w, f)
precontact (eta)       (X, f)       (X, f) + (i_X Phi + f eta, -i_X eta)
Jacobi (L, E)          (a, f)       (#a + f E, -i_E a) + (a, f)
homogeneous (P, Z)     (a, f)       (#a - f Z, f) + (a, i_Z a)
=====================  ===========  =========================================

For the precontact family ``Phi`` defaults to ``d eta``; passing another
2-form gives the (generally non-integrable) family of the same shape.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .calculus import (
    Chart,
    KForm,
    KVector,
    VectorField,
    bivector_apply,
    check_chart,
    differential,
    directional,
    evaluate_many,
    exterior_d,
    interior,
    lie_bracket,
    lie_derivative_form,
    schouten,
    sharp,
    wedge,
)
from .errors import NotIntegrable
from .sampling import DEFAULT_GRID, DEFAULT_RANDOM, sample_points
from .sections import E1Section, extended_bracket, pairing_plus, t_tensor
from .symexpr import ZERO, Expr, add, as_expr, compile_exprs, mul

DEFAULT_TOL = 1e-8


class FamilyKind(enum.Enum):
    DIRAC_2FORM = "dirac_2form"
    DIRAC_BIVECTOR = "dirac_bivector"
    LCP = "lcp"
    PRECONTACT = "precontact"
    JACOBI = "jacobi"
    HOMOGENEOUS_POISSON = "homogeneous_poisson"


TANGENT_MODEL = {FamilyKind.DIRAC_2FORM, FamilyKind.LCP, FamilyKind.PRECONTACT}


@dataclass(frozen=True)
class ModelSection:
    """A section of the model bundle: ``(X, f)`` or ``(a, f)``."""

    part: object  # VectorField for tangent models, 1-form for cotangent ones
    f: Expr

    @property
    def chart(self) -> Chart:
        return self.part.chart


class DiracFamily:
    """A family member together with its generating frame."""

    def __init__(self, kind: FamilyKind, chart: Chart, data: Dict[str, object]):
        self.kind = kind
        self.chart = chart
        self.data = dict(data)
        n = chart.dim
        basis = []
        labels = []
        for i in range(n):
            if kind in TANGENT_MODEL:
                basis.append(ModelSection(chart.dd(i), ZERO))
                labels.append(f"(d/d{chart.names[i]}, 0)")
            else:
                basis.append(ModelSection(chart.d(i), ZERO))
                labels.append(f"(d{chart.names[i]}, 0)")
        zero_part = VectorField(chart) if kind in TANGENT_MODEL else KForm.zero(chart, 1)
        basis.append(ModelSection(zero_part, as_expr(1)))
        labels.append("(0, 1)")
        self.model_basis: Tuple[ModelSection, ...] = tuple(basis)
        self.labels: Tuple[str, ...] = tuple(labels)
        self.frame: Tuple[E1Section, ...] = tuple(self.model_map(b) for b in basis)
        self._compiled = None
        self._certificate = {}

    # -- basic data --------------------------------------------------------
    @property
    def dim(self) -> int:
        return self.chart.dim

    @property
    def phi(self) -> List[Expr]:
        """Values of the 1-cocycle on the frame (the scalar ``f`` of each section)."""
        return [s.f for s in self.frame]

    @property
    def model(self) -> str:
        return "tangent" if self.kind in TANGENT_MODEL else "cotangent"

    def __repr__(self) -> str:
        return f"DiracFamily({self.kind.value}, {list(self.chart.names)})"

    def frame_values(self, points, t=None) -> np.ndarray:
        """Array ``(N, 2n+2, n+1)``: the frame at each point, sections as columns."""
        if self._compiled is None:
            exprs = [e for s in self.frame for e in s.expressions()]
            self._compiled = compile_exprs(exprs, self.chart.variables)
        P = np.atleast_2d(np.asarray(points, dtype=float))
        if not self.chart.time:
            tcol = np.zeros((P.shape[0], 1)) if t is None else np.broadcast_to(
                np.reshape(np.asarray(t, dtype=float), (-1, 1)), (P.shape[0], 1))
            P = np.hstack([P, tcol])
        vals = self._compiled(P)
        m = 2 * self.dim + 2
        return vals.reshape(self.dim + 1, m, P.shape[0]).transpose(2, 1, 0)

    # -- model presentation ----------------------------------------------
    def model_map(self, s: ModelSection) -> E1Section:
        """Image of a model section in the sub-bundle."""
        k = self.kind
        f = as_expr(s.f)
        d = self.data
        if k is FamilyKind.DIRAC_2FORM:
            return E1Section(s.part, ZERO, interior(s.part, d["Omega"]), f)
        if k is FamilyKind.LCP:
            X, om, w = s.part, d["Omega"], d["omega"]
            return E1Section(X, mul(-1, interior(X, w)), interior(X, om) + w.scale(f), f)
        if k is FamilyKind.PRECONTACT:
            X, Phi, eta = s.part, d["Phi"], d["eta"]
            return E1Section(X, f, interior(X, Phi) + eta.scale(f), mul(-1, interior(X, eta)))
        if k is FamilyKind.DIRAC_BIVECTOR:
            return E1Section(sharp(d["Lambda"], s.part), ZERO, s.part, f)
        if k is FamilyKind.JACOBI:
            a, L, E = s.part, d["Lambda"], d["E"]
            return E1Section(sharp(L, a) + E.scale(f), mul(-1, interior(E, a)), a, f)
        a, P, Z = s.part, d["Pi"], d["Z"]
        return E1Section(sharp(P, a) - Z.scale(f), f, a, interior(Z, a))

    def model_bracket(self, s1: ModelSection, s2: ModelSection) -> ModelSection:
        """The bracket of the model Lie algebroid."""
        c = check_chart(s1, s2)
        k = self.kind
        d = self.data
        f, g = as_expr(s1.f), as_expr(s2.f)
        if k in (FamilyKind.DIRAC_2FORM, FamilyKind.LCP):
            X, Y = s1.part, s2.part
            om = d["Omega"]
            w = d.get("omega", KForm.zero(c, 1))
            scalar = add(
                interior(Y, interior(X, om)),
                directional(X, g), mul(-1, g, interior(X, w)),
                mul(-1, directional(Y, f)), mul(f, interior(Y, w)),
            )
            return ModelSection(lie_bracket(X, Y), scalar)
        if k is FamilyKind.PRECONTACT:
            X, Y = s1.part, s2.part
            return ModelSection(lie_bracket(X, Y), add(directional(X, g), mul(-1, directional(Y, f))))
        a, b = s1.part, s2.part
        if k in (FamilyKind.JACOBI, FamilyKind.DIRAC_BIVECTOR):
            L = d["Lambda"]
            E = d.get("E", VectorField(c))
            sa, sb = sharp(L, a), sharp(L, b)
            form = (
                lie_derivative_form(sa, b) - lie_derivative_form(sb, a)
                - differential(c, bivector_apply(L, a, b))
                + lie_derivative_form(E, b).scale(f) - lie_derivative_form(E, a).scale(g)
                - interior(E, wedge(a, b))
            )
            scalar = add(
                bivector_apply(L, b, a), directional(sa, g), mul(-1, directional(sb, f)),
                mul(f, directional(E, g)), mul(-1, g, directional(E, f)),
            )
            return ModelSection(form, scalar)
        P, Z = d["Pi"], d["Z"]
        sa, sb = sharp(P, a), sharp(P, b)
        form = (
            lie_derivative_form(sa, b) - lie_derivative_form(sb, a)
            - differential(c, bivector_apply(P, a, b))
            - (lie_derivative_form(Z, b) - b).scale(f)
            + (lie_derivative_form(Z, a) - a).scale(g)
        )
        scalar = add(directional(sa, g), mul(-1, directional(sb, f)),
                     mul(g, directional(Z, f)), mul(-1, f, directional(Z, g)))
        return ModelSection(form, scalar)

    def model_anchor(self, s: ModelSection) -> VectorField:
        return self.model_map(s).X

    # -- structure equations ----------------------------------------------
    def structure_residuals(self) -> Dict[str, object]:
        """Named tensors that vanish exactly when the data satisfy the family equations."""
        d = self.data
        k = self.kind
        if k is FamilyKind.DIRAC_2FORM:
            return {"dOmega": exterior_d(d["Omega"])}
        if k is FamilyKind.DIRAC_BIVECTOR:
            return {"[Lambda,Lambda]": schouten(d["Lambda"], d["Lambda"])}
        if k is FamilyKind.LCP:
            om, w = d["Omega"], d["omega"]
            return {"domega": exterior_d(w), "dOmega-omega^Omega": exterior_d(om) - wedge(w, om)}
        if k is FamilyKind.PRECONTACT:
            return {"Phi-deta": d["Phi"] - exterior_d(d["eta"])}
        if k is FamilyKind.JACOBI:
            L, E = d["Lambda"], d["E"]
            return {"[E,Lambda]": schouten(E, L),
                    "[Lambda,Lambda]-2E^Lambda": schouten(L, L) - wedge(E, L).scale(2)}
        P, Z = d["Pi"], d["Z"]
        return {"[Z,Pi]+Pi": schouten(Z, P) + P, "[Pi,Pi]": schouten(P, P)}

    def certify(self, points=None, tol: float = DEFAULT_TOL, seed: int = 0,
                grid: int = DEFAULT_GRID, n_random: int = DEFAULT_RANDOM) -> "CertificationReport":
        return certify(self, points=points, tol=tol, seed=seed, grid=grid, n_random=n_random)

    def is_integrable(self, tol: float = DEFAULT_TOL) -> bool:
        key = tol
        if key not in self._certificate:
            self._certificate[key] = self.certify(tol=tol).integrable
        return self._certificate[key]


# -- constructors -----------------------------------------------------------


def _need(obj, cls, degree: int, what: str):
    if not isinstance(obj, cls) or obj.degree != degree:
        raise TypeError(f"{what} must be a {cls.__name__} of degree {degree}")


def from_dirac_graph(data) -> DiracFamily:
    """Lift the graph of a 2-form or of a bivector."""
    if isinstance(data, KForm):
        _need(data, KForm, 2, "Omega")
        return DiracFamily(FamilyKind.DIRAC_2FORM, data.chart, {"Omega": data})
    if isinstance(data, KVector):
        _need(data, KVector, 2, "Lambda")
        return DiracFamily(FamilyKind.DIRAC_BIVECTOR, data.chart, {"Lambda": data})
    raise TypeError("a Dirac graph needs a 2-form or a bivector")


def from_lcp(Omega: KForm, omega: KForm) -> DiracFamily:
    _need(Omega, KForm, 2, "Omega")
    _need(omega, KForm, 1, "omega")
    chart = check_chart(Omega, omega)
    return DiracFamily(FamilyKind.LCP, chart, {"Omega": Omega, "omega": omega})


def from_precontact(eta: KForm, Phi: Optional[KForm] = None) -> DiracFamily:
    _need(eta, KForm, 1, "eta")
    if Phi is None:
        Phi = exterior_d(eta)
    _need(Phi, KForm, 2, "Phi")
    chart = check_chart(eta, Phi)
    return DiracFamily(FamilyKind.PRECONTACT, chart, {"eta": eta, "Phi": Phi})


def from_jacobi(Lambda: KVector, E: VectorField) -> DiracFamily:
    _need(Lambda, KVector, 2, "Lambda")
    _need(E, KVector, 1, "E")
    chart = check_chart(Lambda, E)
    return DiracFamily(FamilyKind.JACOBI, chart, {"Lambda": Lambda, "E": E})


def from_homogeneous_poisson(Pi: KVector, Z: VectorField) -> DiracFamily:
    _need(Pi, KVector, 2, "Pi")
    _need(Z, KVector, 1, "Z")
    chart = check_chart(Pi, Z)
    return DiracFamily(FamilyKind.HOMOGENEOUS_POISSON, chart, {"Pi": Pi, "Z": Z})


# -- certification ------------------------------------------------------------


@dataclass
class CertificationReport:
    kind: str
    n_points: int
    tol: float
    isotropy_max: float
    frame_rank_min: int
    t_max: float
    t_closed_form_gap: float
    residuals: Dict[str, float]
    symbolic_zero: Dict[str, bool]
    failing: List[str] = field(default_factory=list)

    @property
    def integrable(self) -> bool:
        return not self.failing

    @property
    def verdict(self) -> str:
        return "INTEGRABLE" if self.integrable else "NOT_INTEGRABLE"

    @property
    def consistent(self) -> bool:
        """Sampled T_L agrees with the structure equations."""
        return (self.t_max <= self.tol) == self.integrable

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "verdict": self.verdict,
            "n_points": self.n_points,
            "tol": self.tol,
            "isotropy_max": self.isotropy_max,
            "frame_rank_min": self.frame_rank_min,
            "t_max": self.t_max,
            "t_closed_form_gap": self.t_closed_form_gap,
            "residuals": dict(sorted(self.residuals.items())),
            "symbolic_zero": dict(sorted(self.symbolic_zero.items())),
            "failing": list(self.failing),
            "consistent": self.consistent,
        }


def _max_abs(chart: Chart, exprs: Sequence[Expr], points) -> float:
    exprs = [e for e in exprs if not e.is_zero()]
    if not exprs:
        return 0.0
    return float(np.max(np.abs(evaluate_many(chart, exprs, points))))


def frame_triples(family: DiracFamily):
    return list(combinations(range(len(family.frame)), 3))


def certify(family: DiracFamily, points=None, tol: float = DEFAULT_TOL, seed: int = 0,
            grid: int = DEFAULT_GRID, n_random: int = DEFAULT_RANDOM) -> CertificationReport:
    """Sample isotropy and T_L on the frame and evaluate the structure equations."""
    chart = family.chart
    if points is None:
        points = sample_points(chart.dim, grid, n_random, seed)
    points = np.atleast_2d(np.asarray(points, dtype=float))
    fr = family.frame
    iso = [pairing_plus(fr[i], fr[j]) for i in range(len(fr)) for j in range(i, len(fr))]
    iso_max = _max_abs(chart, iso, points)

    vals = family.frame_values(points)
    ranks = [int(np.linalg.matrix_rank(v, tol=1e-9 * max(1.0, np.abs(v).max()))) for v in vals]

    t_def, t_gap = [], []
    for i, j, k in frame_triples(family):
        a = t_tensor(fr[i], fr[j], fr[k])
        b = t_tensor(fr[i], fr[j], fr[k], method="closed_form")
        t_def.append(a)
        t_gap.append(add(a, mul(-1, b)))
    t_max = _max_abs(chart, t_def, points)
    gap = _max_abs(chart, t_gap, points)

    residuals, symbolic = {}, {}
    for name, tensor in family.structure_residuals().items():
        keys, exprs = tensor.expressions()
        symbolic[name] = not exprs
        residuals[name] = _max_abs(chart, exprs, points)
    failing = sorted(name for name, r in residuals.items() if r > tol)
    return CertificationReport(
        kind=family.kind.value,
        n_points=int(points.shape[0]),
        tol=tol,
        isotropy_max=iso_max,
        frame_rank_min=min(ranks) if ranks else 0,
        t_max=t_max,
        t_closed_form_gap=gap,
        residuals=residuals,
        symbolic_zero=symbolic,
        failing=failing,
    )


# -- model bracket comparison -------------------------------------------------


def random_model_section(family: DiracFamily, rng: np.random.Generator, degree: int = 2) -> ModelSection:
    from .sampling import random_one_form, random_polynomial, random_vector_field

    c = family.chart
    part = random_vector_field(rng, c, degree) if family.model == "tangent" else random_one_form(rng, c, degree)
    return ModelSection(part, random_polynomial(rng, c.names, degree))


@dataclass
class ModelBracketReport:
    kind: str
    n_pairs: int
    n_points: int
    max_residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol

    def to_dict(self) -> dict:
        return {"kind": self.kind, "n_pairs": self.n_pairs, "n_points": self.n_points,
                "max_residual": self.max_residual, "tol": self.tol, "passed": self.passed}


def model_bracket_residual(family: DiracFamily, s1: ModelSection, s2: ModelSection) -> E1Section:
    """``map(model bracket) - extended bracket of mapped sections``."""
    lhs = family.model_map(family.model_bracket(s1, s2))
    rhs = extended_bracket(family.model_map(s1), family.model_map(s2))
    return lhs - rhs


def model_bracket_check(family: DiracFamily, samples=None, pairs=None, n_pairs: int = 50,
                        seed: int = 0, tol: float = DEFAULT_TOL) -> ModelBracketReport:
    """Compare the model bracket with the extended bracket on random pairs."""
    if not family.is_integrable():
        raise NotIntegrable(f"{family.kind.value} data do not satisfy the structure equations")
    rng = np.random.default_rng(seed)
    if samples is None:
        samples = sample_points(family.dim, 0, 16, seed)
    if pairs is None:
        pairs = [(random_model_section(family, rng), random_model_section(family, rng)) for _ in range(n_pairs)]
    exprs = []
    for s1, s2 in pairs:
        exprs.extend(model_bracket_residual(family, s1, s2).expressions())
    worst = _max_abs(family.chart, exprs, samples)
    return ModelBracketReport(family.kind.value, len(pairs), int(np.atleast_2d(samples).shape[0]), worst, tol)
