"""Shared seeded generators for the test-suite."""

from __future__ import annotations

import numpy as np
import pytest

from e1dirac.symexpr import add, cos, exp, log, mul, power, sin, var


def random_expr(rng: np.random.Generator, names, depth: int = 3):
    """A random expression that is finite on the whole cube [-2, 2]^n."""
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.3:
            return add(int(rng.integers(-3, 4)))
        return var(str(rng.choice(names)))
    kind = int(rng.integers(0, 8))
    a = random_expr(rng, names, depth - 1)
    b = random_expr(rng, names, depth - 1)
    if kind in (0, 1):
        return add(a, mul(int(rng.integers(-2, 3)), b))
    if kind in (2, 3):
        return mul(a, b)
    if kind == 4:
        return power(a, int(rng.integers(2, 4)))
    if kind == 5:
        # denominator bounded away from zero
        return mul(a, power(add(3, sin(b)), -1))
    if kind == 6:
        return sin(a) if rng.random() < 0.5 else cos(a)
    # keep exp arguments bounded and log arguments positive
    if rng.random() < 0.5:
        return exp(sin(a))
    return log(add(1, power(a, 2)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_poly(rng: np.random.Generator, names, degree: int = 2, terms: int = 3):
    """A random integer polynomial as a (library expression, sympy expression) pair."""
    import sympy

    syms = sympy.symbols(names)
    ours = add(0)
    theirs = sympy.Integer(0)
    for _ in range(terms):
        c = int(rng.integers(-3, 4))
        powers = [0] * len(names)
        for _ in range(int(rng.integers(0, degree + 1))):
            powers[int(rng.integers(0, len(names)))] += 1
        m_ours = add(c)
        m_theirs = sympy.Integer(c)
        for nm, s, k in zip(names, syms, powers):
            if k:
                m_ours = mul(m_ours, power(var(nm), k))
                m_theirs = m_theirs * s**k
        ours = add(ours, m_ours)
        theirs = theirs + m_theirs
    return ours, theirs


def random_section(rng, chart, degree: int = 2):
    from e1dirac.sampling import random_one_form, random_polynomial, random_vector_field
    from e1dirac.sections import E1Section

    return E1Section(
        random_vector_field(rng, chart, degree),
        random_polynomial(rng, chart.names, degree),
        random_one_form(rng, chart, degree),
        random_polynomial(rng, chart.names, degree),
    )


def random_combination(rng, family, degree: int = 1, terms: int = 2):
    """A section of L: a random function combination of two frame sections."""
    from e1dirac.sampling import random_polynomial

    idx = rng.choice(len(family.frame), size=terms, replace=False)
    out = None
    for i in idx:
        s = family.frame[int(i)].scale(random_polynomial(rng, family.chart.names, degree, terms=2))
        out = s if out is None else out + s
    return out


# -- acceptance summary ------------------------------------------------------

ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
