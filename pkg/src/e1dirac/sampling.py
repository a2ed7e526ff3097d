"""Seeded sample points and random test data."""

from __future__ import annotations

import itertools

import numpy as np

from .calculus import Chart, KForm, VectorField
from .symexpr import add, mul, var

DEFAULT_GRID = 3
DEFAULT_RANDOM = 64


def sample_points(dim: int, grid: int = DEFAULT_GRID, n_random: int = DEFAULT_RANDOM,
                  seed: int = 0, low: float = -1.0, high: float = 1.0) -> np.ndarray:
    """A ``grid**dim`` lattice on ``[low, high]^dim`` followed by seeded uniform points."""
    parts = []
    if grid > 0:
        axis = np.linspace(low, high, grid) if grid > 1 else np.array([(low + high) / 2])
        parts.append(np.array(list(itertools.product(axis, repeat=dim)), dtype=float))
    if n_random > 0:
        rng = np.random.default_rng(seed)
        parts.append(rng.uniform(low, high, size=(n_random, dim)))
    if not parts:
        return np.zeros((0, dim))
    return np.vstack(parts)


def random_polynomial(rng: np.random.Generator, names, degree: int = 2, terms: int = 3):
    """Random integer-coefficient polynomial in the given variables."""
    out = add(0)
    for _ in range(terms):
        m = add(int(rng.integers(-3, 4)))
        for _ in range(int(rng.integers(0, degree + 1))):
            m = mul(m, var(str(rng.choice(list(names)))))
        out = add(out, m)
    return out


def random_vector_field(rng, chart: Chart, degree: int = 2) -> VectorField:
    return VectorField(chart, [random_polynomial(rng, chart.names, degree) for _ in range(chart.dim)])


def random_one_form(rng, chart: Chart, degree: int = 2) -> KForm:
    return KForm.one_form(chart, [random_polynomial(rng, chart.names, degree) for _ in range(chart.dim)])
