"""Built-in scenarios.

Each entry is plain scenario text, so ``e1dirac catalog --dump DIR`` writes
files that can be edited and fed back to the other commands.
"""

from __future__ import annotations

from typing import Dict, List

from .scenario import Scenario, parse_scenario

CATALOG: Dict[str, str] = {
    "zero_2form_r2": """\
name = zero_2form_r2
description = graph of the zero 2-form: L = (TM x R) + (0 x R)
coords = [x, y]
kind = dirac_2form
Omega = []
expect = INTEGRABLE
at = [[0, 0], [0.5, -0.5]]
""",
    "zero_jacobi_r2": """\
name = zero_jacobi_r2
description = the zero Jacobi pair: L = (0 x R) + (T*M x 0) up to the scalar frame
coords = [x, y]
kind = jacobi
Lambda = []
E = [0, 0]
expect = INTEGRABLE
at = [[0, 0], [0.5, -0.5]]
""",
    "dirac_dxdy_r2": """\
name = dirac_dxdy_r2
description = graph of dx^dy on R^2
coords = [x, y]
kind = dirac_2form
Omega = [(x, y): 1]
expect = INTEGRABLE
at = [[0, 0], [0.3, 0.4]]
""",
    "lcp_r3": """\
name = lcp_r3
description = locally conformal presymplectic pair (e^x dy^dz, dx)
coords = [x, y, z]
kind = lcp
Omega = [(y, z): exp(x)]
omega = [1, 0, 0]
expect = INTEGRABLE
at = [[0, 0, 0], [0.4, 0.1, -0.3]]
""",
    "precontact_r2": """\
name = precontact_r2
description = precontact form x dy on R^2
coords = [x, y]
kind = precontact
eta = [0, x]
expect = INTEGRABLE
at = [[0, 0], [0.3, 0.4]]
""",
    "contact_r3": """\
name = contact_r3
description = contact form dz - y dx on R^3
coords = [x, y, z]
kind = precontact
eta = [-y, 0, 1]
expect = INTEGRABLE
at = [[0, 0, 0], [0.3, 0.4, 0.5]]
""",
    "contact_jacobi_r3": """\
name = contact_jacobi_r3
description = Jacobi pair of the contact form dz - y dx
coords = [x, y, z]
kind = jacobi
Lambda = [(x, y): 1, (y, z): -y]
E = [0, 0, 1]
expect = INTEGRABLE
at = [[0, 0, 0], [0.3, 0.4, 0.5]]
""",
    "jacobi_lcs_r3": """\
name = jacobi_lcs_r3
description = Jacobi pair (d/dx ^ d/dy, d/dy) with leaves z = const
coords = [x, y, z]
kind = jacobi
Lambda = [(x, y): 1]
E = [0, 1, 0]
expect = INTEGRABLE
at = [[0.1, 0.2, 5], [0, 0, 0]]
t0 = 0.3
""",
    "hpoisson_r2": """\
name = hpoisson_r2
description = homogeneous Poisson (d/dx ^ d/dy, x d/dx)
coords = [x, y]
kind = homogeneous_poisson
Pi = [(x, y): 1]
Z = [x, 0]
expect = INTEGRABLE
at = [[0, 0], [1, 1]]
""",
    "hpoisson_r3": """\
name = hpoisson_r3
description = homogeneous Poisson (d/dx ^ d/dy, x d/dx + d/dz) with a 3-dimensional leaf
coords = [x, y, z]
kind = homogeneous_poisson
Pi = [(x, y): 1]
Z = [x, 0, 1]
expect = INTEGRABLE
at = [[0.3, 0.2, 0.1], [0, 0, 0]]
""",
    "nonjacobi_r3": """\
name = nonjacobi_r3
description = (d/dx ^ d/dy, d/dz) violates [Lambda, Lambda] = 2 E ^ Lambda
coords = [x, y, z]
kind = jacobi
Lambda = [(x, y): 1]
E = [0, 0, 1]
expect = NOT_INTEGRABLE
at = [[0, 0, 0]]
""",
    "nonhomogeneous_r2": """\
name = nonhomogeneous_r2
description = (d/dx ^ d/dy, x d/dx + y d/dy) violates [Z, Pi] = -Pi
coords = [x, y]
kind = homogeneous_poisson
Pi = [(x, y): 1]
Z = [x, y]
expect = NOT_INTEGRABLE
at = [[0.5, 0.5]]
""",
}

# residual expected to be nonzero for each non-integrable entry
EXPECTED_FAILURES = {
    "nonjacobi_r3": "[Lambda,Lambda]-2E^Lambda",
    "nonhomogeneous_r2": "[Z,Pi]+Pi",
}


def catalog() -> List[Scenario]:
    return [parse_scenario(text) for text in CATALOG.values()]


def catalog_names() -> List[str]:
    return list(CATALOG)


def get(name: str) -> Scenario:
    try:
        return parse_scenario(CATALOG[name])
    except KeyError:
        raise KeyError(f"no catalog scenario named {name!r}") from None
