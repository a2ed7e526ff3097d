"""Numeric evaluation: a reference scalar interpreter and a numpy code generator."""

from __future__ import annotations

import math
from typing import Callable, Mapping, Sequence

import numpy as np

from ..errors import DomainError
from .core import Const, Expr, Func, Mul, Var, _apply, as_expr


def evaluate(e, env: Mapping[str, float]) -> float:
    """Evaluate ``e`` at the point ``env`` (variable name -> value).

    Raises :class:`DomainError` naming the first singular subexpression met
    in a fixed left-to-right traversal.
    """
    memo: dict = {}

    def go(x: Expr) -> float:
        r = memo.get(x)
        if r is not None:
            return r
        if isinstance(x, Const):
            r = float(x.value)
        elif isinstance(x, Var):
            try:
                r = float(env[x.name])
            except KeyError:
                raise KeyError(f"no value for variable '{x.name}'") from None
        elif isinstance(x, Func):
            r = _apply(x.name, go(x.arg), x)
        elif isinstance(x, Mul):
            r = 1.0
            for b, k in x.factors:
                v = go(b)
                if k < 0:
                    if v == 0.0:
                        raise DomainError("division by zero", b)
                    r *= 1.0 / v ** (-k)
                else:
                    r *= v ** k
        else:
            r = float(x.const)
            for t, c in x.terms:
                r += float(c) * go(t)
        if math.isinf(r) and not isinstance(x, Const):
            raise DomainError("overflow", x)
        memo[x] = r
        return r

    return go(as_expr(e))


def _lit(v) -> str:
    f = float(v)
    return repr(f)


class CompiledExprs:
    """Vectorized evaluator for a fixed list of expressions.

    Calling it with an array of shape ``(N, len(variables))`` returns an
    array of shape ``(len(exprs), N)``.  Shared subexpressions are computed
    once.  Non-finite results trigger the scalar interpreter at the first
    offending point so the raised :class:`DomainError` names the culprit.
    """

    def __init__(self, exprs: Sequence, variables: Sequence[str]):
        self.exprs = [as_expr(e) for e in exprs]
        self.variables = tuple(variables)
        self.source = self._generate()
        namespace = {"np": np}
        exec(compile(self.source, "<e1dirac-compiled>", "exec"), namespace)
        self._fn: Callable = namespace["_kernel"]

    def _generate(self) -> str:
        names: dict = {}
        lines = []
        index = {v: i for i, v in enumerate(self.variables)}

        def emit(x: Expr) -> str:
            got = names.get(x)
            if got is not None:
                return got
            if isinstance(x, Const):
                return f"({_lit(x.value)})"
            if isinstance(x, Var):
                if x.name not in index:
                    raise KeyError(f"no value for variable '{x.name}'")
                code = f"P[:, {index[x.name]}]"
            elif isinstance(x, Func):
                code = f"np.{x.name}({emit(x.arg)})"
            elif isinstance(x, Mul):
                num, den = [], []
                for b, k in x.factors:
                    s = emit(b)
                    p = abs(k)
                    s = s if p == 1 else f"{s}**{p}"
                    (num if k > 0 else den).append(s)
                code = "*".join(num) if num else "1.0"
                if den:
                    code = f"{code}/({'*'.join(den)})"
            else:
                parts = []
                if x.const != 0:
                    parts.append(_lit(x.const))
                for t, c in x.terms:
                    s = emit(t)
                    parts.append(s if c == 1 else f"{_lit(c)}*{s}")
                code = " + ".join(parts)
            name = f"v{len(names)}"
            names[x] = name
            lines.append(f"    {name} = {code}")
            return name

        outs = [emit(e) for e in self.exprs]
        body = "\n".join(lines)
        ret = ", ".join(f"np.broadcast_to({o}, (n,))" for o in outs)
        return (
            "def _kernel(P):\n"
            "    n = P.shape[0]\n"
            f"{body}\n"
            f"    return [{ret}]\n"
        )

    def __call__(self, points) -> np.ndarray:
        P = np.atleast_2d(np.asarray(points, dtype=float))
        if P.shape[1] != len(self.variables):
            raise ValueError(
                f"expected points with {len(self.variables)} coordinates, got {P.shape[1]}"
            )
        if not self.exprs:
            return np.zeros((0, P.shape[0]))
        with np.errstate(all="ignore"):
            out = np.array(self._fn(P), dtype=float).reshape(len(self.exprs), P.shape[0])
        if not np.all(np.isfinite(out)):
            bad = np.argwhere(~np.isfinite(out))[0]
            env = dict(zip(self.variables, P[bad[1]]))
            evaluate(self.exprs[bad[0]], env)
            raise DomainError("non-finite value", self.exprs[bad[0]])
        return out


def compile_exprs(exprs: Sequence, variables: Sequence[str]) -> CompiledExprs:
    return CompiledExprs(exprs, variables)
