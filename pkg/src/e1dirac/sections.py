"""Sections of (TM x R) + (T*M x R), their pairings and brackets.

A section is written ``(X, f) + (alpha, g)``.  The symmetric and skew
pairings are

    <e1, e2>_+ = 1/2 (i_{X2} a1 + f2 g1 + i_{X1} a2 + f1 g2)
    <e1, e2>_- = 1/2 (i_{X2} a1 + f2 g1 - i_{X1} a2 - f1 g2)

and the bracket is the extension of the Courant bracket that adds the
scalar components (see :func:`extended_bracket`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .calculus import (
    Chart,
    KForm,
    VectorField,
    check_chart,
    differential,
    directional,
    evaluate_many,
    interior,
    lie_bracket,
    lie_derivative_form,
)
from .errors import ChartMismatch
from .symexpr import ZERO, Expr, add, as_expr, mul

HALF = as_expr(1) / 2


@dataclass(frozen=True, eq=False)
class E1Section:
    """The section ``(X, f) + (alpha, g)``."""

    X: VectorField
    f: Expr
    alpha: KForm
    g: Expr

    def __post_init__(self):
        if self.X.chart != self.alpha.chart:
            raise ChartMismatch("vector and form parts live on different charts")
        if self.alpha.degree != 1:
            raise ValueError("the form part must be a 1-form")
        object.__setattr__(self, "f", as_expr(self.f))
        object.__setattr__(self, "g", as_expr(self.g))

    @property
    def chart(self) -> Chart:
        return self.X.chart

    @classmethod
    def zero(cls, chart: Chart) -> "E1Section":
        return cls(VectorField(chart), ZERO, KForm.zero(chart, 1), ZERO)

    @classmethod
    def build(cls, chart: Chart, X=None, f=0, alpha=None, g=0) -> "E1Section":
        return cls(
            X if X is not None else VectorField(chart),
            f,
            alpha if alpha is not None else KForm.zero(chart, 1),
            g,
        )

    def __add__(self, other: "E1Section") -> "E1Section":
        check_chart(self, other)
        return E1Section(self.X + other.X, add(self.f, other.f), self.alpha + other.alpha, add(self.g, other.g))

    def __sub__(self, other: "E1Section") -> "E1Section":
        return self + other.scale(-1)

    def __neg__(self) -> "E1Section":
        return self.scale(-1)

    def scale(self, h) -> "E1Section":
        h = as_expr(h)
        return E1Section(self.X.scale(h), mul(h, self.f), self.alpha.scale(h), mul(h, self.g))

    def __rmul__(self, h):
        return self.scale(h)

    def expressions(self) -> list:
        """Flat list ``[X^1..X^n, f, a_1..a_n, g]``."""
        return self.X.components() + [self.f] + self.alpha.components() + [self.g]

    def values(self, points, t=None) -> np.ndarray:
        """Array of shape ``(2n+2, N)`` with the flattened section at each point."""
        return evaluate_many(self.chart, self.expressions(), points, t)

    def is_zero(self) -> bool:
        return self.X.is_zero() and self.f.is_zero() and self.alpha.is_zero() and self.g.is_zero()

    def __str__(self) -> str:
        return f"(({self.X}), {self.f}) + (({self.alpha}), {self.g})"


@dataclass(frozen=True, eq=False)
class TMSection:
    """The section ``X + alpha`` of the generalized tangent bundle."""

    X: VectorField
    alpha: KForm

    def __post_init__(self):
        if self.X.chart != self.alpha.chart:
            raise ChartMismatch("vector and form parts live on different charts")

    @property
    def chart(self) -> Chart:
        return self.X.chart

    @classmethod
    def zero(cls, chart: Chart) -> "TMSection":
        return cls(VectorField(chart), KForm.zero(chart, 1))

    def __add__(self, other: "TMSection") -> "TMSection":
        check_chart(self, other)
        return TMSection(self.X + other.X, self.alpha + other.alpha)

    def __sub__(self, other: "TMSection") -> "TMSection":
        return self + other.scale(-1)

    def scale(self, h) -> "TMSection":
        return TMSection(self.X.scale(h), self.alpha.scale(h))

    def __rmul__(self, h):
        return self.scale(h)

    def expressions(self) -> list:
        return self.X.components() + self.alpha.components()

    def values(self, points, t=None) -> np.ndarray:
        return evaluate_many(self.chart, self.expressions(), points, t)


def pairing_plus(e1: E1Section, e2: E1Section) -> Expr:
    check_chart(e1, e2)
    return mul(HALF, add(interior(e2.X, e1.alpha), mul(e2.f, e1.g),
                         interior(e1.X, e2.alpha), mul(e1.f, e2.g)))


def pairing_minus(e1: E1Section, e2: E1Section) -> Expr:
    check_chart(e1, e2)
    return mul(HALF, add(interior(e2.X, e1.alpha), mul(e2.f, e1.g),
                         mul(-1, interior(e1.X, e2.alpha)), mul(-1, e1.f, e2.g)))


def anchor_rho(e: E1Section) -> VectorField:
    return e.X


def phi_of(e: E1Section) -> Expr:
    """The canonical 1-cocycle reads off the scalar ``f``."""
    return e.f


def extended_bracket(e1: E1Section, e2: E1Section) -> E1Section:
    chart = check_chart(e1, e2)
    X1, f1, a1, g1 = e1.X, e1.f, e1.alpha, e1.g
    X2, f2, a2, g2 = e2.X, e2.f, e2.alpha, e2.g
    i21 = interior(X2, a1)
    i12 = interior(X1, a2)
    X = lie_bracket(X1, X2)
    f = add(directional(X1, f2), mul(-1, directional(X2, f1)))
    df1, df2 = differential(chart, f1), differential(chart, f2)
    dg1, dg2 = differential(chart, g1), differential(chart, g2)
    alpha = (
        lie_derivative_form(X1, a2)
        - lie_derivative_form(X2, a1)
        + differential(chart, add(i21, mul(-1, i12))).scale(HALF)
        + a2.scale(f1)
        - a1.scale(f2)
        + (df1.scale(g2) - df2.scale(g1) - dg2.scale(f1) + dg1.scale(f2)).scale(HALF)
    )
    g = add(
        directional(X1, g2),
        mul(-1, directional(X2, g1)),
        mul(HALF, add(i21, mul(-1, i12), mul(-1, f2, g1), mul(f1, g2))),
    )
    return E1Section(X, f, alpha, g)


def leibniz_defect(e1: E1Section, e2: E1Section, h) -> E1Section:
    """``[e1, h e2] - h [e1, e2] - X1(h) e2 + <e1, e2>_+ (0, 0) + (dh, 0)``."""
    chart = check_chart(e1, e2)
    h = as_expr(h)
    dh = E1Section.build(chart, alpha=differential(chart, h))
    return (
        extended_bracket(e1, e2.scale(h))
        - extended_bracket(e1, e2).scale(h)
        - e2.scale(directional(e1.X, h))
        + dh.scale(pairing_plus(e1, e2))
    )


def courant_bracket(s1: TMSection, s2: TMSection) -> TMSection:
    """``[X1, X2] + (L_{X1} a2 - L_{X2} a1 + 1/2 d(i_{X2} a1 - i_{X1} a2))``."""
    chart = check_chart(s1, s2)
    X = lie_bracket(s1.X, s2.X)
    alpha = (
        lie_derivative_form(s1.X, s2.alpha)
        - lie_derivative_form(s2.X, s1.alpha)
        + differential(chart, add(interior(s2.X, s1.alpha), mul(-1, interior(s1.X, s2.alpha)))).scale(HALF)
    )
    return TMSection(X, alpha)


def classical_pairing_plus(s1: TMSection, s2: TMSection) -> Expr:
    return mul(HALF, add(interior(s2.X, s1.alpha), interior(s1.X, s2.alpha)))


def classical_pairing_minus(s1: TMSection, s2: TMSection) -> Expr:
    return mul(HALF, add(interior(s2.X, s1.alpha), mul(-1, interior(s1.X, s2.alpha))))


def _cuentita_term(e1: E1Section, e2: E1Section, e3: E1Section) -> Expr:
    inner = add(interior(e2.X, e1.alpha), mul(e2.f, e1.g))
    return add(
        interior(lie_bracket(e1.X, e2.X), e3.alpha),
        mul(e3.g, add(directional(e1.X, e2.f), mul(-1, directional(e2.X, e1.f)))),
        directional(e3.X, inner),
        mul(e3.f, inner),
    )


def t_tensor(e1: E1Section, e2: E1Section, e3: E1Section, method: str = "definition") -> Expr:
    """``T_L(e1, e2, e3) = <[e1, e2], e3>_+``.

    ``method="closed_form"`` uses the cyclic-sum expansion, which is only
    valid when the three sections are pairwise isotropic at the point of
    evaluation.
    """
    if method == "definition":
        return pairing_plus(extended_bracket(e1, e2), e3)
    if method == "closed_form":
        check_chart(e1, e2, e3)
        return mul(HALF, add(
            _cuentita_term(e1, e2, e3),
            _cuentita_term(e2, e3, e1),
            _cuentita_term(e3, e1, e2),
        ))
    raise ValueError(f"unknown method {method!r}")


def jacobiator(e1: E1Section, e2: E1Section, e3: E1Section) -> E1Section:
    br = extended_bracket
    return br(br(e1, e2), e3) + br(br(e2, e3), e1) + br(br(e3, e1), e2)


def jacobiator_defect(e1: E1Section, e2: E1Section, e3: E1Section) -> E1Section:
    """Cyclic sum of double brackets minus ``(0, 0) + (dT, T)``.

    Vanishes for pairwise isotropic triples.
    """
    chart = check_chart(e1, e2, e3)
    T = t_tensor(e1, e2, e3)
    return jacobiator(e1, e2, e3) - E1Section.build(chart, alpha=differential(chart, T), g=T)


def stack_values(sections: Sequence, point, t=None) -> np.ndarray:
    """Matrix whose columns are the flattened sections at one point."""
    cols = [s.values(np.atleast_2d(point), t)[:, 0] for s in sections]
    return np.stack(cols, axis=1)
