"""Exact scalar expressions over named coordinates."""

from ..errors import DomainError, ExprSyntaxError, UnknownIdentifier
from .compile import CompiledExprs, compile_exprs, evaluate
from .core import (
    FUNCTIONS,
    ONE,
    TIME,
    ZERO,
    Add,
    Const,
    Expr,
    Func,
    Mul,
    Var,
    add,
    as_expr,
    const,
    cos,
    count_nodes,
    div,
    exp,
    func,
    log,
    mul,
    neg,
    partial,
    power,
    simplify,
    sin,
    sub,
    substitute,
    sum_exprs,
    var,
)
from .parser import parse_expr
from .printing import to_string

__all__ = [
    "Add", "CompiledExprs", "Const", "DomainError", "Expr", "ExprSyntaxError",
    "FUNCTIONS", "Func", "Mul", "ONE", "TIME", "UnknownIdentifier", "Var",
    "ZERO", "add", "as_expr", "compile_exprs", "const", "cos", "count_nodes",
    "div", "evaluate", "exp", "func", "log", "mul", "neg", "parse_expr",
    "partial", "power", "simplify", "sin", "sub", "substitute", "sum_exprs",
    "to_string", "var",
]
