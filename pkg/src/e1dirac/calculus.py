"""Coordinate tensor calculus on a single chart.

Forms and multivector fields are stored as dictionaries mapping strictly
increasing index tuples to scalar expressions; absent keys are zero.  The
conventions are the usual ones:

* ``(dx^i ^ dx^j)(d_k, d_l) = delta^i_k delta^j_l - delta^i_l delta^j_k``,
* ``i_X`` contracts the first slot,
* a bivector ``L`` has components ``L^{ij} = L(dx^i, dx^j)`` and
  ``(#_L a)^j = L^{ij} a_i``.

The Schouten bracket is the graded super-commutator of the odd-variable
calculus, normalised so that ``[X, P]`` is the Lie derivative ``L_X P`` and
``[L, L] = 2 E ^ L`` is the Jacobi condition for the contact pair
``((d_x + y d_z) ^ d_y, d_z)``.
"""

from __future__ import annotations

from itertools import combinations
from typing import Dict, Mapping, Sequence, Tuple, Union

import numpy as np

from .errors import ChartMismatch, UnsupportedDegree
from .symexpr import (
    TIME,
    ZERO,
    Expr,
    add,
    as_expr,
    compile_exprs,
    mul,
    parse_expr,
    partial,
)

MAX_DEGREE = 3
Index = Tuple[int, ...]


class Chart:
    """An open subset of R^n with named coordinates.

    The name ``t`` is reserved for the auxiliary time variable.  On a plain
    chart it may still appear in coefficients as a parameter that is never
    differentiated by ``d``; on a time-extended chart (``time=True``) it is
    the last coordinate.
    """

    __slots__ = ("names", "time")

    def __init__(self, names: Sequence[str], time: bool = False):
        names = tuple(names)
        if not names:
            raise ValueError("a chart needs at least one coordinate")
        if len(set(names)) != len(names):
            raise ValueError(f"coordinate names must be distinct: {names}")
        for nm in names:
            if not nm.isidentifier():
                raise ValueError(f"invalid coordinate name {nm!r}")
        if time:
            if names[-1] != TIME or TIME in names[:-1]:
                raise ValueError("a time-extended chart ends with the coordinate 't'")
        elif TIME in names:
            raise ValueError("'t' is reserved for the time variable")
        self.names = names
        self.time = time

    @property
    def dim(self) -> int:
        return len(self.names)

    @property
    def variables(self) -> Tuple[str, ...]:
        """Every name a coefficient may use (coordinates plus ``t``)."""
        return self.names if self.time else self.names + (TIME,)

    def index(self, name: Union[str, int]) -> int:
        if isinstance(name, int):
            if not 0 <= name < self.dim:
                raise IndexError(f"coordinate index {name} out of range")
            return name
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown coordinate {name!r}") from None

    def extended(self) -> "Chart":
        if self.time:
            raise ValueError("chart is already time-extended")
        return Chart(self.names + (TIME,), time=True)

    def base(self) -> "Chart":
        if not self.time:
            return self
        return Chart(self.names[:-1])

    def parse(self, text: str) -> Expr:
        return parse_expr(text, self.variables)

    def coord(self, name: Union[str, int]) -> Expr:
        from .symexpr import var

        return var(self.names[self.index(name)])

    # basis objects --------------------------------------------------------
    def d(self, name: Union[str, int]) -> "KForm":
        return KForm(self, 1, {(self.index(name),): 1})

    def dd(self, name: Union[str, int]) -> "VectorField":
        comps = [ZERO] * self.dim
        comps[self.index(name)] = as_expr(1)
        return VectorField(self, comps)

    def point_env(self, point, t: float = 0.0) -> Dict[str, float]:
        p = [float(v) for v in np.ravel(point)]
        if len(p) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(p)}")
        env = dict(zip(self.names, p))
        env.setdefault(TIME, float(t))
        return env

    def __eq__(self, other) -> bool:
        return isinstance(other, Chart) and self.names == other.names and self.time == other.time

    def __hash__(self) -> int:
        return hash((self.names, self.time))

    def __repr__(self) -> str:
        flag = ", time=True" if self.time else ""
        return f"Chart({list(self.names)}{flag})"


def check_chart(*objs) -> Chart:
    charts = [o.chart for o in objs if hasattr(o, "chart")]
    if not charts:
        raise ChartMismatch("no chart among the arguments")
    c0 = charts[0]
    for c in charts[1:]:
        if c != c0:
            raise ChartMismatch(f"objects live on different charts: {c0} vs {c}")
    return c0


def _sort_sign(idx: Sequence[int]) -> Tuple[int, Index]:
    """Sign of the sorting permutation and the sorted tuple (sign 0 on repeats)."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, ()
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return sign, tuple(idx)


class _Alternating:
    """Shared storage for forms and multivector fields."""

    kind = "alternating"

    def __init__(self, chart: Chart, degree: int, coeffs: Mapping = None):
        if not 0 <= degree <= MAX_DEGREE:
            raise UnsupportedDegree(f"degree {degree} exceeds the supported range 0..{MAX_DEGREE}")
        self.chart = chart
        self.degree = degree
        table: Dict[Index, Expr] = {}
        for key, val in (coeffs or {}).items():
            if isinstance(key, (int, str)):
                key = (key,)
            key = tuple(chart.index(k) for k in key)
            if len(key) != degree:
                raise ValueError(f"index {key} does not have {degree} entries")
            sign, skey = _sort_sign(key)
            if sign == 0:
                continue
            if tuple(key) != skey:
                raise ValueError(f"components must be given on increasing index tuples, got {key}")
            val = as_expr(val) if not isinstance(val, str) else chart.parse(val)
            if not val.is_zero():
                table[skey] = add(table.get(skey, ZERO), val)
        self.coeffs = {k: v for k, v in table.items() if not v.is_zero()}

    def _new(self, degree: int, coeffs: Mapping) -> "_Alternating":
        cls = type(self)
        if cls is VectorField and degree != 1:
            cls = KVector
        elif cls is KVector and degree == 1:
            cls = VectorField
        out = object.__new__(cls)
        out.chart = self.chart
        out.degree = degree
        out.coeffs = {k: v for k, v in coeffs.items() if not v.is_zero()}
        return out

    def __getitem__(self, idx) -> Expr:
        if isinstance(idx, (int, str)):
            idx = (idx,)
        idx = tuple(self.chart.index(i) for i in idx)
        sign, key = _sort_sign(idx)
        if sign == 0:
            return ZERO
        v = self.coeffs.get(key, ZERO)
        return v if sign > 0 else mul(-1, v)

    def items(self):
        return sorted(self.coeffs.items())

    def is_zero(self) -> bool:
        return not self.coeffs

    def _same(self, other) -> None:
        if type(other).kind != type(self).kind:
            raise TypeError(f"cannot combine a {type(self).kind} with a {type(other).kind}")
        check_chart(self, other)
        if other.degree != self.degree:
            raise UnsupportedDegree("degrees differ")

    def __add__(self, other):
        self._same(other)
        keys = set(self.coeffs) | set(other.coeffs)
        return self._new(
            self.degree,
            {k: add(self.coeffs.get(k, ZERO), other.coeffs.get(k, ZERO)) for k in keys},
        )

    def __sub__(self, other):
        return self + (-1) * other

    def __neg__(self):
        return (-1) * self

    def scale(self, f) -> "_Alternating":
        f = as_expr(f)
        return self._new(self.degree, {k: mul(f, v) for k, v in self.coeffs.items()})

    def __rmul__(self, f):
        if isinstance(f, _Alternating):
            return NotImplemented
        return self.scale(f)

    def __mul__(self, f):
        if isinstance(f, _Alternating):
            return NotImplemented
        return self.scale(f)

    def map(self, fn) -> "_Alternating":
        return self._new(self.degree, {k: fn(v) for k, v in self.coeffs.items()})

    def expressions(self) -> Tuple[list, list]:
        keys = sorted(self.coeffs)
        return keys, [self.coeffs[k] for k in keys]

    def dense(self, point, t: float = 0.0) -> np.ndarray:
        """Full antisymmetric array of the components at one point."""
        n = self.chart.dim
        out = np.zeros((n,) * self.degree)
        if self.degree == 0:
            v = self.coeffs.get((), ZERO)
            return np.array(_eval_at(self.chart, [v], point, t)[0])
        keys, exprs = self.expressions()
        if not keys:
            return out
        vals = _eval_at(self.chart, exprs, point, t)
        for key, val in zip(keys, vals):
            for perm in _perms(key):
                sign, _ = _sort_sign(perm)
                out[perm] = sign * val
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, _Alternating):
            return NotImplemented
        return (
            type(self).kind == type(other).kind
            and self.chart == other.chart
            and self.degree == other.degree
            and self.coeffs == other.coeffs
        )

    __hash__ = None

    def _symbol(self, key: Index) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for key, v in self.items():
            parts.append(f"({v})*{self._symbol(key)}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"{type(self).__name__}[{self.degree}]({self})"


def _perms(key: Index):
    from itertools import permutations

    return permutations(key)


def _eval_at(chart: Chart, exprs: Sequence[Expr], point, t: float = 0.0) -> np.ndarray:
    env = chart.point_env(point, t)
    fn = compile_exprs(exprs, list(env))
    return fn(np.array([list(env.values())]))[:, 0]


class KForm(_Alternating):
    """A differential form of degree 0..3."""

    kind = "form"

    def _symbol(self, key):
        return "^".join(f"d{self.chart.names[i]}" for i in key) or "1"

    @classmethod
    def one_form(cls, chart: Chart, comps: Sequence) -> "KForm":
        if len(comps) != chart.dim:
            raise ValueError(f"expected {chart.dim} components, got {len(comps)}")
        return cls(chart, 1, {(i,): c for i, c in enumerate(comps)})

    @classmethod
    def zero(cls, chart: Chart, degree: int) -> "KForm":
        return cls(chart, degree, {})

    def components(self) -> list:
        """Components of a 1-form as a list."""
        if self.degree != 1:
            raise UnsupportedDegree("components() is defined for 1-forms")
        return [self.coeffs.get((i,), ZERO) for i in range(self.chart.dim)]


class KVector(_Alternating):
    """A multivector field of degree 1..3."""

    kind = "multivector"

    def _symbol(self, key):
        return "^".join(f"D{self.chart.names[i]}" for i in key) or "1"

    @classmethod
    def zero(cls, chart: Chart, degree: int) -> "KVector":
        return cls(chart, degree, {})


class VectorField(KVector):
    """A vector field, the degree-one multivector."""

    def __init__(self, chart: Chart, comps: Sequence = None):
        if comps is None:
            comps = [ZERO] * chart.dim
        if isinstance(comps, Mapping):
            super().__init__(chart, 1, comps)
            return
        if len(comps) != chart.dim:
            raise ValueError(f"expected {chart.dim} components, got {len(comps)}")
        super().__init__(chart, 1, {(i,): c for i, c in enumerate(comps)})

    def components(self) -> list:
        return [self.coeffs.get((i,), ZERO) for i in range(self.chart.dim)]

    def __call__(self, f) -> Expr:
        return directional(self, f)


def as_vector_field(P: KVector) -> VectorField:
    if isinstance(P, VectorField):
        return P
    if P.degree != 1:
        raise UnsupportedDegree("not a vector field")
    return VectorField(P.chart, P.coeffs)


def _coord_partial(chart: Chart, e: Expr, i: int) -> Expr:
    return partial(e, chart.names[i])


def directional(X: VectorField, f) -> Expr:
    """The derivative ``X(f)``."""
    f = as_expr(f)
    chart = X.chart
    return add(*[mul(c, _coord_partial(chart, f, k[0])) for k, c in X.coeffs.items()])


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    chart = check_chart(X, Y)
    comps = []
    for i in range(chart.dim):
        comps.append(add(directional(X, Y[i]), mul(-1, directional(Y, X[i]))))
    return VectorField(chart, comps)


def exterior_d(theta) -> KForm:
    """Exterior derivative of a function or of a form of degree at most 2."""
    if isinstance(theta, _Alternating) and not isinstance(theta, KForm):
        raise TypeError("exterior_d takes a form")
    if not isinstance(theta, KForm):
        raise TypeError("exterior_d of a function needs a chart: use differential(chart, f)")
    if theta.degree >= MAX_DEGREE:
        raise UnsupportedDegree(f"d of a {theta.degree}-form is not supported")
    chart = theta.chart
    acc: Dict[Index, list] = {}
    for key, c in theta.coeffs.items():
        for i in range(chart.dim):
            if chart.names[i] not in c.free_symbols:
                continue
            sign, skey = _sort_sign((i,) + key)
            if sign == 0:
                continue
            acc.setdefault(skey, []).append(mul(sign, _coord_partial(chart, c, i)))
    return KForm(chart, theta.degree + 1, {k: add(*v) for k, v in acc.items()})


def differential(chart: Chart, f) -> KForm:
    """``df`` for a scalar expression ``f``."""
    f = as_expr(f)
    return KForm(chart, 1, {(i,): _coord_partial(chart, f, i) for i in range(chart.dim)})


def interior(X: VectorField, theta: KForm):
    """``i_X theta``; returns an expression when ``theta`` is a 1-form."""
    chart = check_chart(X, theta)
    if theta.degree < 1:
        raise UnsupportedDegree("interior product of a function")
    acc: Dict[Index, list] = {}
    for key, c in theta.coeffs.items():
        for pos, i in enumerate(key):
            xi = X.coeffs.get((i,))
            if xi is None:
                continue
            rest = key[:pos] + key[pos + 1:]
            acc.setdefault(rest, []).append(mul((-1) ** pos, xi, c))
    if theta.degree == 1:
        return add(*acc.get((), []))
    return KForm(chart, theta.degree - 1, {k: add(*v) for k, v in acc.items()})


def pair(alpha: KForm, X: VectorField) -> Expr:
    """``alpha(X)`` for a 1-form."""
    return interior(X, alpha)


def lie_derivative_form(X: VectorField, theta) -> Union[KForm, Expr]:
    """``L_X theta = i_X d theta + d i_X theta`` (Cartan's formula)."""
    if not isinstance(theta, KForm):
        return directional(X, theta)
    chart = check_chart(X, theta)
    if theta.degree == 0:
        return directional(X, theta.coeffs.get((), ZERO))
    first = interior(X, exterior_d(theta))
    inner = interior(X, theta)
    if theta.degree == 1:
        return first + differential(chart, inner)
    return first + exterior_d(inner)


def lie_derivative_multivector(X: VectorField, P: KVector) -> KVector:
    """``L_X P`` computed directly from the tensor transformation law."""
    chart = check_chart(X, P)
    out: Dict[Index, list] = {}
    for key in combinations(range(chart.dim), P.degree):
        terms = [directional(X, P.coeffs.get(key, ZERO))]
        for pos in range(P.degree):
            for j in range(chart.dim):
                src = key[:pos] + (j,) + key[pos + 1:]
                pv = P[src]
                if pv.is_zero():
                    continue
                terms.append(mul(-1, pv, _coord_partial(chart, X[key[pos]], j)))
        out[key] = [add(*terms)]
    coeffs = {k: add(*v) for k, v in out.items()}
    return VectorField(chart, coeffs) if P.degree == 1 else KVector(chart, P.degree, coeffs)


def wedge(a, b):
    """Graded product of two forms or of two multivector fields."""
    if not isinstance(a, _Alternating):
        return b.scale(a)
    if not isinstance(b, _Alternating):
        return a.scale(b)
    if type(a).kind != type(b).kind:
        raise TypeError("cannot wedge a form with a multivector")
    chart = check_chart(a, b)
    deg = a.degree + b.degree
    if deg > MAX_DEGREE:
        raise UnsupportedDegree(f"wedge product of degree {deg} exceeds {MAX_DEGREE}")
    acc: Dict[Index, list] = {}
    for ka, ca in a.coeffs.items():
        for kb, cb in b.coeffs.items():
            sign, key = _sort_sign(ka + kb)
            if sign:
                acc.setdefault(key, []).append(mul(sign, ca, cb))
    coeffs = {k: add(*v) for k, v in acc.items()}
    if a.kind == "form":
        return KForm(chart, deg, coeffs)
    return VectorField(chart, coeffs) if deg == 1 else KVector(chart, deg, coeffs)


def _right_derivatives(key: Index):
    """Yield ``(i, sign, rest)`` with d^R/d zeta_i zeta_key = sign * zeta_rest."""
    k = len(key)
    for m, i in enumerate(key):
        yield i, (-1) ** (k - 1 - m), key[:m] + key[m + 1:]


def _schouten_half(chart: Chart, P: KVector, Q: KVector) -> Dict[Index, list]:
    acc: Dict[Index, list] = {}
    for kp, cp in P.coeffs.items():
        for i, s, rest in _right_derivatives(kp):
            name = chart.names[i]
            for kq, cq in Q.coeffs.items():
                if name not in cq.free_symbols:
                    continue
                sign, key = _sort_sign(rest + kq)
                if sign:
                    acc.setdefault(key, []).append(mul(s * sign, cp, partial(cq, name)))
    return acc


def schouten(P: KVector, Q: KVector) -> KVector:
    """Schouten-Nijenhuis bracket for degrees (1,1), (1,2), (2,1) and (2,2)."""
    chart = check_chart(P, Q)
    p, q = P.degree, Q.degree
    if p < 1 or q < 1 or p + q - 1 > MAX_DEGREE or max(p, q) > 2:
        raise UnsupportedDegree(f"Schouten bracket of degrees ({p}, {q}) is not supported")
    eps = (-1) ** ((p - 1) * (q - 1))
    first = _schouten_half(chart, P, Q)
    second = _schouten_half(chart, Q, P)
    keys = set(first) | set(second)
    coeffs = {}
    for k in keys:
        # overall factor eps: the super-commutator itself would give
        # [L, L] = -2 E ^ L for Jacobi pairs in the sharp convention above
        coeffs[k] = add(mul(eps, add(*first.get(k, []))), mul(-1, add(*second.get(k, []))))
    deg = p + q - 1
    if deg == 1:
        return VectorField(chart, coeffs)
    return KVector(chart, deg, coeffs)


def sharp(L: KVector, alpha: KForm) -> VectorField:
    """``(#_L alpha)^j = L^{ij} alpha_i``."""
    chart = check_chart(L, alpha)
    if L.degree != 2 or alpha.degree != 1:
        raise UnsupportedDegree("sharp needs a bivector and a 1-form")
    comps = []
    for j in range(chart.dim):
        comps.append(add(*[mul(L[i, j], c) for (i,), c in alpha.coeffs.items()]))
    return VectorField(chart, comps)


def flat(Omega: KForm, X: VectorField) -> KForm:
    """``X -> i_X Omega`` for a 2-form."""
    return interior(X, Omega)


def bivector_apply(L: KVector, alpha: KForm, beta: KForm) -> Expr:
    """``L(alpha, beta) = L^{ij} alpha_i beta_j``."""
    return pair(beta, sharp(L, alpha))


def form_apply(theta: KForm, *vectors: VectorField) -> Expr:
    """``theta(X_1, ..., X_k)``."""
    if len(vectors) != theta.degree:
        raise ValueError("wrong number of arguments for the form")
    out = theta
    for X in vectors:
        out = interior(X, out)
    return out


def lift(obj, chart: Chart):
    """View a tensor of the base chart as a tensor on its time extension."""
    if isinstance(obj, Expr):
        return obj
    if chart.base() != obj.chart:
        raise ChartMismatch(f"{chart} does not extend {obj.chart}")
    if isinstance(obj, VectorField):
        return VectorField(chart, obj.coeffs)
    return type(obj)(chart, obj.degree, obj.coeffs)


def restrict_coefficients(obj, chart: Chart):
    """Move a tensor from a time-extended chart back to its base.

    Only components not involving the time direction are kept; the
    coefficients may still depend on ``t`` as a parameter.
    """
    base = chart
    n = base.dim
    coeffs = {k: v for k, v in obj.coeffs.items() if all(i < n for i in k)}
    if isinstance(obj, VectorField):
        return VectorField(base, coeffs)
    return type(obj)(base, obj.degree, coeffs)


def evaluate_many(chart: Chart, exprs: Sequence[Expr], points, t=None) -> np.ndarray:
    """Evaluate expressions at an array of chart points (t given or zero)."""
    P = np.atleast_2d(np.asarray(points, dtype=float))
    if P.shape[1] != chart.dim:
        raise ValueError(f"expected points with {chart.dim} coordinates")
    if not chart.time:
        tcol = np.zeros((P.shape[0], 1)) if t is None else np.broadcast_to(
            np.reshape(np.asarray(t, dtype=float), (-1, 1)), (P.shape[0], 1))
        P = np.hstack([P, tcol])
    return compile_exprs(list(exprs), chart.variables)(P)
