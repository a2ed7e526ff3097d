"""Text rendering that the parser reads back to an equal expression."""

from __future__ import annotations

from fractions import Fraction

from .core import Add, Const, Expr, Func, Mul, Var


def _num(v, *, as_factor: bool = False) -> str:
    """Render a non-negative number."""
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return str(v.numerator)
        return f"{v.numerator}/{v.denominator}"
    return repr(float(v))


def _base(e: Expr) -> str:
    s = to_string(e)
    if isinstance(e, (Add, Mul)) or (isinstance(e, Const) and not _plain_const(e)):
        return f"({s})"
    return s


def _plain_const(e: Const) -> bool:
    v = e.value
    return v >= 0 and (not isinstance(v, Fraction) or v.denominator == 1)


def _mul(e: Mul) -> str:
    num = []
    den = []
    for b, k in e.factors:
        text = _base(b)
        if k > 0:
            num.append(text if k == 1 else f"{text}^{k}")
        else:
            den.append(text if k == -1 else f"{text}^{-k}")
    out = "*".join(num) if num else "1"
    for d in den:
        out += "/" + d
    return out


def _term(t: Expr, c) -> tuple:
    """Return (negative, text) for ``c * t``."""
    neg = c < 0
    a = -c if neg else c
    body = _mul(t) if isinstance(t, Mul) else _base(t) if isinstance(t, Add) else to_string(t)
    if a == 1:
        return neg, body
    return neg, f"{_num(a)}*{body}"


def to_string(e: Expr) -> str:
    if isinstance(e, Const):
        v = e.value
        return ("-" + _num(-v)) if v < 0 else _num(v)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Func):
        return f"{e.name}({to_string(e.arg)})"
    if isinstance(e, Mul):
        return _mul(e)
    parts = [_term(t, c) for t, c in e.terms]
    if e.const != 0:
        parts.append((e.const < 0, _num(abs(e.const))))
    neg0, first = parts[0]
    out = ("-" if neg0 else "") + first
    for neg, text in parts[1:]:
        out += (" - " if neg else " + ") + text
    return out
