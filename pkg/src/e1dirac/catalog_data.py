"""Closed-form data of the built-in examples, shared by the catalog and tests."""

from __future__ import annotations

from .calculus import Chart, KForm, KVector, VectorField
from .families import (
    from_dirac_graph,
    from_homogeneous_poisson,
    from_jacobi,
    from_lcp,
    from_precontact,
)
from .symexpr import exp, var

R2 = Chart(["x", "y"])
R3 = Chart(["x", "y", "z"])
x, y, z = var("x"), var("y"), var("z")


def contact_jacobi():
    """``((d_x + y d_z) ^ d_y, d_z)``: the Jacobi pair of the contact form ``dz - y dx``."""
    return from_jacobi(KVector(R3, 2, {(0, 1): 1, (1, 2): -y}), R3.dd("z"))


def jacobi_lcs():
    return from_jacobi(KVector(R3, 2, {(0, 1): 1}), R3.dd("y"))


def hpoisson_r2():
    return from_homogeneous_poisson(KVector(R2, 2, {(0, 1): 1}), VectorField(R2, [x, 0]))


def hpoisson_r3():
    return from_homogeneous_poisson(KVector(R3, 2, {(0, 1): 1}), VectorField(R3, [x, 0, 1]))


def dirac_dxdy():
    return from_dirac_graph(KForm(R2, 2, {(0, 1): 1}))


def lcp_r3():
    return from_lcp(KForm(R3, 2, {(1, 2): exp(x)}), R3.d("x"))


def precontact_r2():
    return from_precontact(x * R2.d("y"))


def contact_r3():
    return from_precontact(R3.d("z") - y * R3.d("x"))


def nonjacobi_r3():
    return from_jacobi(KVector(R3, 2, {(0, 1): 1}), R3.dd("z"))


def nonhomogeneous_r2():
    return from_homogeneous_poisson(KVector(R2, 2, {(0, 1): 1}), VectorField(R2, [x, y]))
