"""Scenario files: a line-oriented ``key = value`` description of one structure.

Example::

    # contact Jacobi pair on R^3
    name   = contact_jacobi
    coords = [x, y, z]
    kind   = jacobi
    Lambda = [(x, y): 1, (y, z): -y]
    E      = [0, 0, 1]
    at     = [[0, 0, 0], [0.5, -0.25, 1]]

Blank lines and text after ``#`` are ignored.  A value that opens a bracket
may continue on the following lines until the bracket closes.  See
``docs/scenario-format.md`` for the full grammar.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ..calculus import Chart, KForm, KVector, VectorField
from ..errors import DimensionMismatch, ExprSyntaxError, ParseError, UnknownCoordinate, UnknownIdentifier
from ..families import (
    DiracFamily,
    from_dirac_graph,
    from_homogeneous_poisson,
    from_jacobi,
    from_lcp,
    from_precontact,
)
from ..symexpr import Expr, parse_expr

# kind -> (required components, optional components)
KINDS: Dict[str, Tuple[Tuple[str, ...], Tuple[str, ...]]] = {
    "dirac_2form": (("Omega",), ()),
    "dirac_bivector": (("Lambda",), ()),
    "lcp": (("Omega", "omega"), ()),
    "precontact": (("eta",), ("Phi",)),
    "jacobi": (("Lambda", "E"), ()),
    "homogeneous_poisson": (("Pi", "Z"), ()),
}
TENSOR_KEYS = {"Omega", "Lambda", "Pi", "Phi"}
LIST_KEYS = {"omega", "eta", "E", "Z"}
SETTINGS = {"name", "description", "coords", "kind", "seed", "grid", "points", "tol", "at",
            "t0", "steps", "dt", "policy", "expect"}
VERDICTS = ("INTEGRABLE", "NOT_INTEGRABLE")


@dataclass
class Located:
    """A value string with the file position of each of its characters."""

    text: str
    pos: List[Tuple[int, int]]

    def at(self, i: int) -> Tuple[int, int]:
        if not self.pos:
            return (0, 0)
        return self.pos[min(max(i, 0), len(self.pos) - 1)]

    def sub(self, i: int, j: int) -> "Located":
        return Located(self.text[i:j], self.pos[i:j])

    def strip(self) -> "Located":
        i, j = 0, len(self.text)
        while i < j and self.text[i].isspace():
            i += 1
        while j > i and self.text[j - 1].isspace():
            j -= 1
        return self.sub(i, j)


@dataclass
class Scenario:
    name: str
    chart: Chart
    kind: str
    components: Dict[str, object]
    description: str = ""
    seed: int = 0
    grid: int = 3
    points: int = 64
    tol: float = 1e-8
    at: List[List[float]] = field(default_factory=list)
    t0: float = 0.0
    steps: int = 200
    dt: float = 0.05
    policy: str = "cycle"
    expect: Optional[str] = None
    source: str = ""

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.source.encode("utf-8")).hexdigest()

    def family(self) -> DiracFamily:
        c = self.components
        k = self.kind
        if k in ("dirac_2form", "dirac_bivector"):
            return from_dirac_graph(c["Omega"] if k == "dirac_2form" else c["Lambda"])
        if k == "lcp":
            return from_lcp(c["Omega"], c["omega"])
        if k == "precontact":
            return from_precontact(c["eta"], c.get("Phi"))
        if k == "jacobi":
            return from_jacobi(c["Lambda"], c["E"])
        return from_homogeneous_poisson(c["Pi"], c["Z"])


# ---------------------------------------------------------------------------
# low-level splitting


def _logical_lines(text: str):
    """Yield ``(key, Located value, line, column of key)`` joining bracket continuations."""
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        raw = lines[i].split("#", 1)[0]
        lineno = i + 1
        i += 1
        if not raw.strip():
            continue
        if "=" not in raw:
            col = len(raw) - len(raw.lstrip()) + 1
            raise ParseError("expected 'key = value'", lineno, col)
        eq = raw.index("=")
        key = raw[:eq].strip()
        kcol = len(raw) - len(raw.lstrip()) + 1
        if not key.isidentifier():
            raise ParseError(f"invalid key {key!r}", lineno, kcol)
        chars = list(raw[eq + 1:])
        pos = [(lineno, eq + 2 + k) for k in range(len(chars))]
        depth = _depth(raw[eq + 1:])
        while depth > 0 and i < len(lines):
            nxt = lines[i].split("#", 1)[0]
            chars.append(" ")
            pos.append((i + 1, 0))
            chars.extend(nxt)
            pos.extend((i + 1, k + 1) for k in range(len(nxt)))
            depth += _depth(nxt)
            i += 1
        if depth > 0:
            raise ParseError("unclosed bracket", lineno, eq + 2)
        yield key, Located("".join(chars), pos).strip(), lineno, kcol


def _depth(s: str) -> int:
    return sum(1 for ch in s if ch in "[(") - sum(1 for ch in s if ch in "])")


def _split_top(v: Located, sep: str = ",") -> List[Located]:
    parts, depth, start = [], 0, 0
    for k, ch in enumerate(v.text):
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced {ch!r}", *v.at(k))
        elif ch == sep and depth == 0:
            parts.append(v.sub(start, k).strip())
            start = k + 1
    last = v.sub(start, len(v.text)).strip()
    if last.text or parts:
        parts.append(last)
    return parts


def _unbracket(v: Located, what: str) -> Located:
    if not (v.text.startswith("[") and v.text.endswith("]")):
        raise ParseError(f"{what} must be a bracketed list", *v.at(0))
    return v.sub(1, len(v.text) - 1).strip()


def _expr(v: Located, variables: Sequence[str]) -> Expr:
    if not v.text:
        raise ParseError("empty expression", *v.at(0))
    try:
        return parse_expr(v.text, variables)
    except UnknownIdentifier as exc:
        line, col = v.at(exc.column - 1)
        raise UnknownCoordinate(f"unknown coordinate or identifier {exc.name!r}", line, col) from None
    except ExprSyntaxError as exc:
        line, col = v.at(exc.column - 1)
        raise ParseError(str(exc).rsplit(" at column", 1)[0], line, col) from None


def _number(v: Located, kind=float):
    try:
        return kind(v.text)
    except ValueError:
        raise ParseError(f"expected {'an integer' if kind is int else 'a number'}, got {v.text!r}",
                         *v.at(0)) from None


# ---------------------------------------------------------------------------
# value parsers


def _parse_list(v: Located, chart: Chart, what: str) -> List[Expr]:
    items = _split_top(_unbracket(v, what))
    if len(items) != chart.dim:
        raise DimensionMismatch(f"{what} needs {chart.dim} components, got {len(items)}", *v.at(0))
    return [_expr(it, chart.names) for it in items]


def _parse_tensor(v: Located, chart: Chart, what: str) -> Dict[Tuple[int, int], Expr]:
    out: Dict[Tuple[int, int], Expr] = {}
    for item in _split_top(_unbracket(v, what)):
        if ":" not in item.text:
            raise ParseError("tensor entries look like '(a, b): expr'", *item.at(0))
        c = item.text.index(":")
        key = item.sub(0, c).strip()
        if not (key.text.startswith("(") and key.text.endswith(")")):
            raise ParseError("tensor index must be a parenthesised coordinate pair", *key.at(0))
        names = _split_top(key.sub(1, len(key.text) - 1))
        if len(names) != 2:
            raise DimensionMismatch(f"{what} entries take two indices", *key.at(0))
        idx = []
        for nm in names:
            if nm.text not in chart.names:
                raise UnknownCoordinate(f"unknown coordinate {nm.text!r}", *nm.at(0))
            idx.append(chart.index(nm.text))
        if idx[0] >= idx[1]:
            raise DimensionMismatch(
                f"{what} entries must use increasing pairs, got ({names[0].text}, {names[1].text})",
                *key.at(0))
        pair = (idx[0], idx[1])
        if pair in out:
            raise ParseError(f"duplicate entry {key.text}", *key.at(0))
        out[pair] = _expr(item.sub(c + 1, len(item.text)).strip(), chart.names)
    return out


def _parse_points(v: Located, dim: int) -> List[List[float]]:
    body = _unbracket(v, "at")
    rows = _split_top(body)
    if rows and not rows[0].text.startswith("["):
        rows = [v]  # a single point written as [a, b, c]
    pts = []
    for r in rows:
        vals = [_number(c) for c in _split_top(_unbracket(r, "a point"))]
        if len(vals) != dim:
            raise DimensionMismatch(f"points need {dim} coordinates, got {len(vals)}", *r.at(0))
        pts.append(vals)
    return pts


def parse_scenario(text: str) -> Scenario:
    """Parse and validate a scenario; errors carry 1-based line and column."""
    entries: Dict[str, Tuple[Located, int, int]] = {}
    for key, val, line, col in _logical_lines(text):
        if key in entries:
            raise ParseError(f"duplicate key {key!r}", line, col)
        if key not in SETTINGS and key not in TENSOR_KEYS and key not in LIST_KEYS:
            raise ParseError(f"unknown key {key!r}", line, col)
        entries[key] = (val, line, col)
    for req in ("coords", "kind"):
        if req not in entries:
            raise ParseError(f"missing required key {req!r}", 0, 0)
    cval = entries["coords"][0]
    names = [n.text for n in _split_top(_unbracket(cval, "coords"))]
    for n, loc in zip(names, _split_top(_unbracket(cval, "coords"))):
        if not n.isidentifier() or n == "t":
            raise ParseError(f"invalid coordinate name {n!r}", *loc.at(0))
    try:
        chart = Chart(names)
    except ValueError as exc:
        raise ParseError(str(exc), *cval.at(0)) from None
    kval = entries["kind"][0]
    kind = kval.text
    if kind not in KINDS:
        raise ParseError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}", *kval.at(0))
    required, optional = KINDS[kind]
    comps: Dict[str, object] = {}
    for key in TENSOR_KEYS | LIST_KEYS:
        if key in entries and key not in required + optional:
            _, line, col = entries[key]
            raise ParseError(f"key {key!r} does not belong to kind {kind!r}", line, col)
    for key in required:
        if key not in entries:
            raise ParseError(f"kind {kind!r} needs the key {key!r}", *kval.at(0))
    for key in required + optional:
        if key not in entries:
            continue
        val = entries[key][0]
        if key in TENSOR_KEYS:
            coeffs = _parse_tensor(val, chart, key)
            comps[key] = KForm(chart, 2, coeffs) if key in ("Omega", "Phi") else KVector(chart, 2, coeffs)
        else:
            vals = _parse_list(val, chart, key)
            comps[key] = KForm.one_form(chart, vals) if key in ("omega", "eta") else VectorField(chart, vals)

    def setting(key, conv, default):
        if key not in entries:
            return default
        return conv(entries[key][0])

    sc = Scenario(
        name=setting("name", lambda v: v.text, "scenario"),
        chart=chart, kind=kind, components=comps,
        description=setting("description", lambda v: v.text, ""),
        seed=setting("seed", lambda v: _number(v, int), 0),
        grid=setting("grid", lambda v: _number(v, int), 3),
        points=setting("points", lambda v: _number(v, int), 64),
        tol=setting("tol", _number, 1e-8),
        at=setting("at", lambda v: _parse_points(v, chart.dim), []),
        t0=setting("t0", _number, 0.0),
        steps=setting("steps", lambda v: _number(v, int), 200),
        dt=setting("dt", _number, 0.05),
        policy=setting("policy", lambda v: v.text, "cycle"),
        expect=setting("expect", lambda v: v.text, None),
        source=text,
    )
    if sc.policy not in ("cycle", "random"):
        raise ParseError(f"policy must be 'cycle' or 'random', got {sc.policy!r}", *entries["policy"][0].at(0))
    if sc.expect is not None and sc.expect not in VERDICTS:
        raise ParseError(f"expect must be one of {', '.join(VERDICTS)}", *entries["expect"][0].at(0))
    return sc
