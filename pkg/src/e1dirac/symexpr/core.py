"""Expression nodes, smart constructors and exact differentiation.

Every node is immutable and hashable.  Construction goes through the smart
constructors (:func:`add`, :func:`mul`, :func:`power`, :func:`func`), which
keep trees in a light normal form:

* sums are flat, carry one numeric constant and one coefficient per distinct
  term (like terms are collected);
* products are flat, carry no numeric coefficient (that lives in the
  enclosing sum) and map each base to an integer exponent; sums raised to a
  positive power are distributed;
* products of ``exp`` factors are merged into a single ``exp``.

The normal form is not canonical, it only keeps expressions small.
"""

from __future__ import annotations

import math
import zlib
from fractions import Fraction
from typing import Iterable, Mapping, Union

from ..errors import DomainError

Number = Union[Fraction, float]

_MASK = (1 << 61) - 1
FUNCTIONS = ("exp", "log", "sin", "cos")
TIME = "t"


def _shash(text: str) -> int:
    return zlib.crc32(text.encode())


def _mix(*parts: int) -> int:
    h = 0x345678
    for p in parts:
        h = ((h ^ p) * 1000003 + 0x9E3779B1) & _MASK
    return h


_num_hash_cache: dict = {}


def _num_hash(v: Number) -> int:
    # keyed by type so that equal Fraction and float constants keep distinct hashes
    key = (type(v), v)
    h = _num_hash_cache.get(key)
    if h is None:
        if isinstance(v, Fraction):
            h = _shash(f"{v.numerator}/{v.denominator}")
        else:
            h = _shash(float(v).hex())
        if len(_num_hash_cache) < 65536:
            _num_hash_cache[key] = h
    return h


def as_number(v) -> Number:
    if isinstance(v, bool):
        raise TypeError("booleans are not expression constants")
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        return v
    raise TypeError(f"cannot use {type(v).__name__} as a numeric constant")


def _operand(o) -> bool:
    return isinstance(o, (Expr, int, float, Fraction)) and not isinstance(o, bool)


class Expr:
    """Base class of all scalar expression nodes."""

    __slots__ = ("_h", "_free", "_dcache", "_str", "__weakref__")
    _rank = -1

    def _init(self, h: int, free: frozenset) -> None:
        self._h = h
        self._free = free
        self._dcache = None
        self._str = None

    # identity -------------------------------------------------------------
    def __hash__(self) -> int:
        return self._h

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Expr):
            if isinstance(other, (int, float, Fraction)) and not isinstance(other, bool):
                return isinstance(self, Const) and self.value == other
            return NotImplemented
        return (
            self._h == other._h
            and type(self) is type(other)
            and self._args() == other._args()
        )

    def __ne__(self, other) -> bool:
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def _args(self) -> tuple:
        raise NotImplementedError

    @property
    def free_symbols(self) -> frozenset:
        return self._free

    def is_zero(self) -> bool:
        return isinstance(self, Const) and self.value == 0

    def is_constant(self) -> bool:
        return not self._free

    # arithmetic sugar -----------------------------------------------------
    def __add__(self, o):
        if not _operand(o):
            return NotImplemented
        return add(self, o)

    def __radd__(self, o):
        if not _operand(o):
            return NotImplemented
        return add(o, self)

    def __sub__(self, o):
        if not _operand(o):
            return NotImplemented
        return add(self, mul(-1, o))

    def __rsub__(self, o):
        if not _operand(o):
            return NotImplemented
        return add(o, mul(-1, self))

    def __mul__(self, o):
        if not _operand(o):
            return NotImplemented
        return mul(self, o)

    def __rmul__(self, o):
        if not _operand(o):
            return NotImplemented
        return mul(o, self)

    def __truediv__(self, o):
        if not _operand(o):
            return NotImplemented
        return mul(self, power(o, -1))

    def __rtruediv__(self, o):
        if not _operand(o):
            return NotImplemented
        return mul(o, power(self, -1))

    def __neg__(self):
        return mul(-1, self)

    def __pos__(self):
        return self

    def __pow__(self, k):
        if not isinstance(k, int) or isinstance(k, bool):
            raise TypeError("only integer exponents are supported")
        return power(self, k)

    def __str__(self) -> str:
        if self._str is None:
            from .printing import to_string

            self._str = to_string(self)
        return self._str

    def __repr__(self) -> str:
        return f"Expr({str(self)!r})"


class Const(Expr):
    __slots__ = ("value",)
    _rank = 0

    def __init__(self, value: Number):
        self.value = as_number(value)
        self._init(_mix(0, _num_hash(self.value), 1 if isinstance(self.value, float) else 0), frozenset())

    def _args(self):
        return (type(self.value), self.value)


class Var(Expr):
    __slots__ = ("name",)
    _rank = 1

    def __init__(self, name: str):
        self.name = name
        self._init(_mix(1, _shash(name)), frozenset((name,)))

    def _args(self):
        return (self.name,)


class Func(Expr):
    __slots__ = ("name", "arg")
    _rank = 2

    def __init__(self, name: str, arg: Expr):
        self.name = name
        self.arg = arg
        self._init(_mix(2, _shash(name), arg._h), arg._free)

    def _args(self):
        return (self.name, self.arg)


class Mul(Expr):
    """Product of bases raised to nonzero integer exponents."""

    __slots__ = ("factors",)
    _rank = 3

    def __init__(self, factors: tuple):
        self.factors = factors
        parts = [3]
        free = set()
        for b, e in factors:
            parts.append(b._h)
            parts.append(e & _MASK)
            free |= b._free
        self._init(_mix(*parts), frozenset(free))

    def _args(self):
        return self.factors


class Add(Expr):
    """``const + sum(coeff * term)``."""

    __slots__ = ("const", "terms")
    _rank = 4

    def __init__(self, const: Number, terms: tuple):
        self.const = const
        self.terms = terms
        parts = [4, _num_hash(const)]
        free = set()
        for t, c in terms:
            parts.append(t._h)
            parts.append(_num_hash(c))
            free |= t._free
        self._init(_mix(*parts), frozenset(free))

    def _args(self):
        return (self.const, self.terms)


ZERO = Const(0)
ONE = Const(1)
_var_cache: dict = {}


def _order(e: Expr):
    return (e._rank, e._h)


def const(v) -> Const:
    v = as_number(v)
    if isinstance(v, Fraction):
        if v == 0:
            return ZERO
        if v == 1:
            return ONE
    return Const(v)


def var(name: str) -> Var:
    v = _var_cache.get(name)
    if v is None:
        v = _var_cache.setdefault(name, Var(name))
    return v


def as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, str):
        raise TypeError("use parse_expr() to build expressions from text")
    return const(x)


# ---------------------------------------------------------------------------
# sums

def _make_add(c: Number, terms: dict) -> Expr:
    items = [(t, k) for t, k in terms.items() if k != 0]
    if not items:
        return const(c)
    if c == 0 and len(items) == 1 and items[0][1] == 1:
        return items[0][0]
    items.sort(key=lambda tk: _order(tk[0]))
    if c == 0:
        c = Fraction(0)
    return Add(c, tuple(items))


def add(*args) -> Expr:
    c: Number = Fraction(0)
    terms: dict = {}
    for a in args:
        a = as_expr(a)
        if isinstance(a, Const):
            c = c + a.value
        elif isinstance(a, Add):
            c = c + a.const
            for t, k in a.terms:
                terms[t] = terms.get(t, 0) + k
        else:
            terms[a] = terms.get(a, 0) + 1
    return _make_add(c, terms)


def sum_exprs(items: Iterable) -> Expr:
    return add(*items)


# ---------------------------------------------------------------------------
# products

def _num_pow(v: Number, k: int, base: Expr) -> Number:
    if k < 0 and v == 0:
        raise DomainError("division by zero", base)
    return v ** k


def _mul_core(pairs: Iterable) -> Expr:
    """Multiply ``base**exp`` for each ``(base, exp)`` pair."""
    coeff: Number = Fraction(1)
    powers: dict = {}
    sums: list = []
    stack = [(as_expr(b), k) for b, k in pairs]
    stack.reverse()
    while stack:
        a, k = stack.pop()
        if k == 0:
            continue
        if isinstance(a, Const):
            coeff = coeff * _num_pow(a.value, k, a)
        elif isinstance(a, Mul):
            for b, e in reversed(a.factors):
                stack.append((b, e * k))
        elif isinstance(a, Add):
            if a.const == 0 and len(a.terms) == 1:
                t, c = a.terms[0]
                coeff = coeff * _num_pow(c, k, a)
                stack.append((t, k))
            elif k > 0:
                sums.extend([a] * k)
            else:
                powers[a] = powers.get(a, 0) + k
        else:
            powers[a] = powers.get(a, 0) + k
    if coeff == 0:
        return ZERO

    # cancel a distributed sum against the same sum in a denominator
    kept = []
    for s in sums:
        e = powers.get(s)
        if e is not None and e < 0:
            powers[s] = e + 1
        else:
            kept.append(s)
    sums = kept

    # merge exponentials
    exp_args = []
    for b in [b for b in powers if isinstance(b, Func) and b.name == "exp"]:
        e = powers.pop(b)
        if e:
            exp_args.append(mul(e, b.arg) if e != 1 else b.arg)
    if exp_args:
        merged = func("exp", add(*exp_args))
        if isinstance(merged, Const):
            coeff = coeff * merged.value
        else:
            powers[merged] = powers.get(merged, 0) + 1

    factors = []
    for b, e in powers.items():
        if e == 0:
            continue
        if isinstance(b, Add) and e > 0:
            sums.extend([b] * e)
        else:
            factors.append((b, e))
    factors.sort(key=lambda be: _order(be[0]))
    if not factors:
        mono = None
    elif len(factors) == 1 and factors[0][1] == 1:
        mono = factors[0][0]
    else:
        mono = Mul(tuple(factors))

    if not sums:
        if mono is None:
            return const(coeff)
        if coeff == 1:
            return mono
        return Add(Fraction(0), ((mono, coeff),))

    # distribute: running list of (coefficient, monomial-or-None)
    acc = [(coeff, mono)]
    for s in sums:
        nxt = []
        for c, m in acc:
            if s.const != 0:
                nxt.append((c * s.const, m))
            for t, tc in s.terms:
                nxt.append((c * tc, t if m is None else _mul_core(((m, 1), (t, 1)))))
        acc = nxt
    return add(*[mul_num(c, m) for c, m in acc])


def mul_num(c: Number, m) -> Expr:
    """``c * m`` for a number ``c`` and a monomial ``m`` (``None`` means 1)."""
    if m is None:
        return const(c)
    if c == 1:
        return m
    if c == 0:
        return ZERO
    if isinstance(m, (Add, Const)):
        return _mul_core(((const(c), 1), (m, 1)))
    return Add(Fraction(0), ((m, c),))


def mul(*args) -> Expr:
    return _mul_core((a, 1) for a in args)


def power(a, k: int) -> Expr:
    if k == 0:
        return ONE
    if k == 1:
        return as_expr(a)
    return _mul_core(((a, k),))


def neg(a) -> Expr:
    return mul(-1, a)


def sub(a, b) -> Expr:
    return add(a, mul(-1, b))


def div(a, b) -> Expr:
    return mul(a, power(b, -1))


# ---------------------------------------------------------------------------
# elementary functions

_EXACT = {
    ("exp", Fraction(0)): Fraction(1),
    ("log", Fraction(1)): Fraction(0),
    ("sin", Fraction(0)): Fraction(0),
    ("cos", Fraction(0)): Fraction(1),
}


def func(name: str, arg) -> Expr:
    if name not in FUNCTIONS:
        raise ValueError(f"unknown function {name!r}")
    arg = as_expr(arg)
    if isinstance(arg, Const):
        exact = _EXACT.get((name, arg.value)) if isinstance(arg.value, Fraction) else None
        if exact is not None:
            return const(exact)
        if isinstance(arg.value, float):
            try:
                return const(_apply(name, arg.value, arg))
            except DomainError:
                pass
    if name == "log" and isinstance(arg, Func) and arg.name == "exp":
        return arg.arg
    return Func(name, arg)


def exp(a) -> Expr:
    return func("exp", a)


def log(a) -> Expr:
    return func("log", a)


def sin(a) -> Expr:
    return func("sin", a)


def cos(a) -> Expr:
    return func("cos", a)


def _apply(name: str, v: float, node: Expr) -> float:
    if name == "exp":
        try:
            return math.exp(v)
        except OverflowError:
            raise DomainError("exp overflow", node) from None
    if name == "log":
        if v <= 0:
            raise DomainError("log of a non-positive value", node)
        return math.log(v)
    if name == "sin":
        return math.sin(v)
    return math.cos(v)


# ---------------------------------------------------------------------------
# differentiation

def partial(e, v: str) -> Expr:
    """Exact partial derivative of ``e`` with respect to the variable ``v``."""
    e = as_expr(e)
    if v not in e._free:
        return ZERO
    cache = e._dcache
    if cache is None:
        cache = e._dcache = {}
    d = cache.get(v)
    if d is None:
        d = cache[v] = _diff(e, v)
    return d


def _diff(e: Expr, v: str) -> Expr:
    if isinstance(e, Var):
        return ONE
    if isinstance(e, Add):
        return add(*[mul(c, partial(t, v)) for t, c in e.terms if v in t._free])
    if isinstance(e, Mul):
        out = []
        fs = e.factors
        for i, (b, k) in enumerate(fs):
            if v not in b._free:
                continue
            pairs = [(const(k), 1), (partial(b, v), 1)]
            for j, (bj, kj) in enumerate(fs):
                ej = kj - 1 if j == i else kj
                if ej:
                    pairs.append((bj, ej))
            out.append(_mul_core(pairs))
        return add(*out)
    if isinstance(e, Func):
        da = partial(e.arg, v)
        if e.name == "exp":
            return mul(e, da)
        if e.name == "log":
            return mul(da, power(e.arg, -1))
        if e.name == "sin":
            return mul(cos(e.arg), da)
        return mul(-1, sin(e.arg), da)
    raise TypeError(f"cannot differentiate {type(e).__name__}")


def simplify(e) -> Expr:
    """Rebuild ``e`` bottom-up through the smart constructors.

    Idempotent and value-preserving wherever ``e`` is defined.
    """
    memo: dict = {}

    def go(x: Expr) -> Expr:
        r = memo.get(x)
        if r is not None:
            return r
        if isinstance(x, (Const, Var)):
            r = x
        elif isinstance(x, Func):
            r = func(x.name, go(x.arg))
        elif isinstance(x, Mul):
            r = _mul_core([(go(b), k) for b, k in x.factors])
        else:
            r = add(const(x.const), *[mul(c, go(t)) for t, c in x.terms])
        memo[x] = r
        return r

    return go(as_expr(e))


def substitute(e, values: Mapping[str, object]) -> Expr:
    """Replace variables by expressions (or numbers)."""
    repl = {k: as_expr(v) for k, v in values.items()}
    memo: dict = {}

    def go(x: Expr) -> Expr:
        if not (x._free & repl.keys()):
            return x
        r = memo.get(x)
        if r is not None:
            return r
        if isinstance(x, Var):
            r = repl[x.name]
        elif isinstance(x, Func):
            r = func(x.name, go(x.arg))
        elif isinstance(x, Mul):
            r = _mul_core([(go(b), k) for b, k in x.factors])
        else:
            r = add(const(x.const), *[mul(c, go(t)) for t, c in x.terms])
        memo[x] = r
        return r

    return go(as_expr(e))


def count_nodes(e) -> int:
    seen = set()
    stack = [as_expr(e)]
    while stack:
        x = stack.pop()
        if id(x) in seen:
            continue
        seen.add(id(x))
        if isinstance(x, Func):
            stack.append(x.arg)
        elif isinstance(x, Mul):
            stack.extend(b for b, _ in x.factors)
        elif isinstance(x, Add):
            stack.extend(t for t, _ in x.terms)
    return len(seen)
