"""Pointwise leaf analysis, induced leaf structures and leaf tracing.

At a point ``x`` the frame gives a ``(2n+2) x (n+1)`` matrix whose columns
are the generating sections.  Its first ``n`` rows form the anchor matrix
``A``; row ``n`` holds the cocycle values ``phi``.  Everything here is
linear algebra on these matrices:

* the leaf dimension is ``rank A``;
* the leaf is locally conformal presymplectic (LCP) when ``phi`` kills
  ``ker A`` and precontact otherwise;
* the time-extended distribution is the column space of ``[A; phi]``.

Ranks use a relative threshold ``tau * sigma_max`` (``tau = 1e-9``).  A
singular value within a factor of ten of the threshold makes the rank
ambiguous and raises :class:`IllConditioned` instead of guessing.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np

from .errors import DomainError, IllConditioned, RankDrop, SingularSystem, StepFailure
from .families import DiracFamily
from .sections import E1Section, extended_bracket
from .symexpr import Expr, compile_exprs, partial

RANK_TAU = 1e-9
GAP_FACTOR = 10.0
SOLVE_TOL = 1e-9


class LeafType(enum.Enum):
    PRECONTACT = "Precontact"
    LCP = "LCP"


def numerical_rank(M: np.ndarray, tau: float = RANK_TAU, what: str = "matrix"):
    """Rank of ``M`` with the relative threshold, plus SVD pieces and a gap diagnostic.

    Returns ``(rank, s, Vt, gap)`` where ``gap`` is the smallest factor by
    which any singular value clears the threshold (``inf`` when all are
    exactly zero or the matrix is empty).
    """
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.size == 0:
        return 0, np.zeros(0), np.eye(M.shape[1]), float("inf")
    U, s, Vt = np.linalg.svd(M)
    smax = float(s[0]) if s.size else 0.0
    if smax == 0.0:
        return 0, s, Vt, float("inf")
    thr = tau * smax
    nonzero = s[s > 0]
    ratios = np.maximum(nonzero / thr, thr / nonzero)
    gap = float(np.min(ratios)) if ratios.size else float("inf")
    if gap < GAP_FACTOR:
        raise IllConditioned(
            f"rank of the {what} is ambiguous: a singular value lies within a factor "
            f"{GAP_FACTOR:g} of the threshold",
            {"singular_values": s.tolist(), "threshold": thr, "gap": gap},
        )
    return int(np.sum(s > thr)), s, Vt, gap


def orthonormal_columns(M: np.ndarray, tau: float = RANK_TAU) -> np.ndarray:
    """Orthonormal basis of the column space of ``M``."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.size == 0 or not np.any(M):
        return np.zeros((M.shape[0], 0))
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    r = int(np.sum(s > tau * s[0]))
    return U[:, :r]


def null_space(M: np.ndarray, tau: float = RANK_TAU) -> np.ndarray:
    """Orthonormal basis (as columns) of the kernel of ``M``."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if not np.any(M):
        return np.eye(M.shape[1])
    _, s, Vt = np.linalg.svd(M)
    r = int(np.sum(s > tau * s[0]))
    return Vt[r:].T


def subspace_distance(A: np.ndarray, B: np.ndarray) -> float:
    """Spectral norm of the difference of the orthogonal projectors onto two column spaces."""
    Qa, Qb = orthonormal_columns(A), orthonormal_columns(B)
    Pa = Qa @ Qa.T
    Pb = Qb @ Qb.T
    return float(np.linalg.norm(Pa - Pb, 2))


# ---------------------------------------------------------------------------
# point analysis


@dataclass
class PointAnalysis:
    point: np.ndarray
    anchor: np.ndarray          # n x (n+1), anchor images of the frame as columns
    phi: np.ndarray             # n+1 cocycle values on the frame
    singular_values: np.ndarray
    rank: int
    kernel: np.ndarray          # (n+1) x k, orthonormal kernel of the anchor matrix
    phi_on_kernel: float
    leaf_type: LeafType
    bar_rank: int
    gap: float
    frame: np.ndarray = field(repr=False, default=None)  # (2n+2) x (n+1)

    @property
    def tangent_basis(self) -> np.ndarray:
        return orthonormal_columns(self.anchor)

    def to_dict(self) -> dict:
        return {
            "point": [float(v) for v in self.point],
            "rank": self.rank,
            "bar_rank": self.bar_rank,
            "kernel_dim": int(self.kernel.shape[1]),
            "leaf_type": self.leaf_type.value,
            "phi_on_kernel": float(self.phi_on_kernel),
            "conditioning_gap": _finite(self.gap),
        }


def _finite(v: float):
    return None if not np.isfinite(v) else float(v)


def frame_at(family: DiracFamily, x, t: Optional[float] = None) -> np.ndarray:
    try:
        return family.frame_values(np.atleast_2d(np.asarray(x, dtype=float)), t)[0]
    except DomainError:
        raise
    except FloatingPointError as exc:  # pragma: no cover - numpy configured to ignore
        raise DomainError(str(exc)) from None


def analyze_point(family: DiracFamily, x, tau: float = RANK_TAU) -> PointAnalysis:
    """Leaf dimension, kernel of the anchor, cocycle test and leaf type at ``x``."""
    x = np.asarray(x, dtype=float).ravel()
    n = family.dim
    V = frame_at(family, x)
    A = V[:n, :]
    phi = V[n, :]
    r, s, Vt, gap = numerical_rank(A, tau, "anchor matrix")
    K = Vt[r:].T
    scale = max(float(s[0]) if s.size else 0.0, float(np.max(np.abs(phi))) if phi.size else 0.0)
    m = float(np.max(np.abs(phi @ K))) if K.size else 0.0
    if scale == 0.0 or m == 0.0:
        lcp = True
    else:
        thr = tau * scale
        if max(m / thr, thr / m) < GAP_FACTOR:
            raise IllConditioned(
                "cannot decide whether the cocycle vanishes on the anchor kernel",
                {"phi_on_kernel": m, "threshold": thr},
            )
        lcp = m <= thr
    rb, _, _, gap_bar = numerical_rank(np.vstack([A, phi]), tau, "extended anchor matrix")
    return PointAnalysis(
        point=x, anchor=A, phi=phi, singular_values=s, rank=r, kernel=K,
        phi_on_kernel=m, leaf_type=LeafType.LCP if lcp else LeafType.PRECONTACT,
        bar_rank=rb, gap=min(gap, gap_bar), frame=V,
    )


def skew_matrix(V: np.ndarray, n: int) -> np.ndarray:
    """``G_ij = <s_i, s_j>_-`` for frame values ``V`` (columns)."""
    X, f, a, g = V[:n], V[n], V[n + 1:2 * n + 1], V[2 * n + 1]
    P = a.T @ X + np.outer(g, f)  # P_ij = a_i(X_j) + f_j g_i
    return 0.5 * (P - P.T)


@dataclass
class BarDistribution:
    point: np.ndarray
    t: float
    rank: int
    bar_rank: int
    basis: np.ndarray           # (n+1) x bar_rank, orthonormal
    leaf_type: LeafType

    def to_dict(self) -> dict:
        return {"point": [float(v) for v in self.point], "t": float(self.t),
                "rank": self.rank, "bar_rank": self.bar_rank, "leaf_type": self.leaf_type.value}


def bar_distribution(family: DiracFamily, x, t: float = 0.0) -> BarDistribution:
    """Span of ``rho(s) + phi(s) d/dt`` over the frame at ``(x, t)``."""
    pa = analyze_point(family, x)
    W = np.vstack([pa.anchor, pa.phi])
    return BarDistribution(pa.point, float(t), pa.rank, pa.bar_rank, orthonormal_columns(W), pa.leaf_type)


# ---------------------------------------------------------------------------
# induced structures


def _solve_gram(M: np.ndarray, G: np.ndarray, what: str) -> np.ndarray:
    """Min-norm antisymmetric ``B`` with ``M^T B M = G``; refuses inconsistent systems."""
    Mp = np.linalg.pinv(M, rcond=RANK_TAU)
    B = Mp.T @ G @ Mp
    B = 0.5 * (B - B.T)
    res = float(np.max(np.abs(M.T @ B @ M - G))) if G.size else 0.0
    scale = max(1.0, float(np.max(np.abs(G))) if G.size else 0.0)
    if res > SOLVE_TOL * scale * 1e2:
        raise SingularSystem(f"no 2-form reproduces the pairing on the {what}",
                             {"residual": res})
    return B


@dataclass
class InducedLeafStructure:
    leaf_type: LeafType
    point: np.ndarray
    tangent_basis: np.ndarray       # n x r orthonormal
    eta: Optional[np.ndarray] = None    # ambient covector, precontact leaves
    Phi: Optional[np.ndarray] = None    # ambient 2-form matrix, precontact leaves
    Omega: Optional[np.ndarray] = None  # ambient 2-form matrix, LCP leaves
    omega: Optional[np.ndarray] = None  # ambient covector, LCP leaves
    residual: float = 0.0

    def on_leaf(self, name: str) -> np.ndarray:
        """Components of a stored form on the orthonormal leaf basis."""
        U = self.tangent_basis
        val = getattr(self, name)
        if val is None:
            raise AttributeError(f"{name} is not defined on a {self.leaf_type.value} leaf")
        return U.T @ val if val.ndim == 1 else U.T @ val @ U

    def to_dict(self) -> dict:
        out = {"leaf_type": self.leaf_type.value, "point": [float(v) for v in self.point],
               "leaf_dim": int(self.tangent_basis.shape[1]), "solve_residual": float(self.residual)}
        for name in ("eta", "Phi", "Omega", "omega"):
            val = getattr(self, name)
            if val is not None:
                out[name] = np.round(val, 12).tolist()
        return out


def induced_structure(family: DiracFamily, x, pa: Optional[PointAnalysis] = None) -> InducedLeafStructure:
    """Sample the induced leaf structure at ``x``.

    Precontact leaves: the pairing form on the image of ``(rho, phi)`` is
    split as ``Phi_F(u1,u2) + l1 eta_F(u2) - l2 eta_F(u1)``.  LCP leaves:
    ``Omega_F`` reproduces the pairing on anchor images and ``omega_F``
    satisfies ``omega_F(rho e) = -phi(e)``.  Forms are returned as ambient
    arrays that vanish on the orthogonal complement of the leaf.
    """
    if pa is None:
        pa = analyze_point(family, x)
    n = family.dim
    G = skew_matrix(pa.frame, n)
    U = pa.tangent_basis
    if pa.leaf_type is LeafType.PRECONTACT:
        W = np.vstack([pa.anchor, pa.phi])
        B = _solve_gram(W, G, "image of (rho, phi)")
        res = float(np.max(np.abs(W.T @ B @ W - G))) if G.size else 0.0
        eta = B[n, :n].copy()
        Phi = B[:n, :n].copy()
        # keep only the leaf part
        P = U @ U.T
        return InducedLeafStructure(pa.leaf_type, pa.point, U, eta=P @ eta, Phi=P @ Phi @ P, residual=res)
    A = pa.anchor
    Om = _solve_gram(A, G, "leaf tangent space")
    Ap = np.linalg.pinv(A, rcond=RANK_TAU)
    w = -(Ap.T @ pa.phi)
    wres = float(np.max(np.abs(A.T @ w + pa.phi))) if pa.phi.size else 0.0
    if wres > SOLVE_TOL * max(1.0, float(np.max(np.abs(pa.phi)))) * 1e2:
        raise SingularSystem("the cocycle does not factor through the anchor", {"residual": wres})
    res = max(float(np.max(np.abs(A.T @ Om @ A - G))) if G.size else 0.0, wres)
    return InducedLeafStructure(pa.leaf_type, pa.point, U, Omega=Om, omega=w, residual=res)


def eta_field(family: DiracFamily) -> Callable[[np.ndarray], np.ndarray]:
    """The ambient extension ``x -> eta_F(x)`` used for finite differences."""
    def fn(x):
        s = induced_structure(family, x)
        if s.eta is None:
            raise SingularSystem("point is not on a precontact leaf")
        return s.eta
    return fn


def d_eta_fd(family: DiracFamily, x, h: float = 1e-5) -> np.ndarray:
    """``d eta_F`` at ``x`` by central differences of the ambient extension."""
    x = np.asarray(x, dtype=float)
    n = family.dim
    fn = eta_field(family)
    J = np.zeros((n, n))  # J[i, j] = d_i eta_j
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        J[i] = (fn(x + e) - fn(x - e)) / (2 * h)
    return J - J.T


def precontact_consistency(family: DiracFamily, x, h: float = 1e-5) -> float:
    """``|Phi_F - d eta_F|`` on the leaf tangent space at ``x``."""
    s = induced_structure(family, x)
    if s.leaf_type is not LeafType.PRECONTACT:
        raise SingularSystem("point is not on a precontact leaf")
    U = s.tangent_basis
    D = d_eta_fd(family, x, h)
    return float(np.max(np.abs(U.T @ (s.Phi - D) @ U))) if U.size else 0.0


def omega_loop_integral(family: DiracFamily, x, size: float = 0.1, nodes: int = 16) -> float:
    """Line integral of ``omega_F`` around a small rectangle in the leaf through ``x``.

    The rectangle is spanned by the first two leaf tangent directions at
    ``x``; this stays inside the leaf when the leaf is an affine subspace.
    """
    base = induced_structure(family, x)
    if base.leaf_type is not LeafType.LCP:
        raise SingularSystem("point is not on an LCP leaf")
    U = base.tangent_basis
    if U.shape[1] < 2:
        return 0.0
    u1, u2 = U[:, 0] * size, U[:, 1] * size
    corners = [np.asarray(x, float), x + u1, x + u1 + u2, x + u2]
    gl_x, gl_w = np.polynomial.legendre.leggauss(nodes)
    total = 0.0
    for k in range(4):
        a, b = corners[k], corners[(k + 1) % 4]
        for s, w in zip(gl_x, gl_w):
            p = a + (s + 1) / 2 * (b - a)
            om = induced_structure(family, p).omega
            total += w / 2 * float(om @ (b - a))
    return abs(total)


def volume_form_value(structure: InducedLeafStructure) -> float:
    """``(omega_F ^ Omega_F^k)`` on the orthonormal leaf basis, leaf dimension ``2k+1`` (k <= 1)."""
    U = structure.tangent_basis
    r = U.shape[1]
    if structure.leaf_type is not LeafType.LCP:
        raise SingularSystem("volume form is defined for LCP leaves")
    w = U.T @ structure.omega
    Om = U.T @ structure.Omega @ U
    if r == 1:
        return float(w[0])
    if r == 3:
        return float(w[0] * Om[1, 2] - w[1] * Om[0, 2] + w[2] * Om[0, 1])
    raise ValueError("volume check implemented for leaves of dimension 1 or 3")


# ---------------------------------------------------------------------------
# numeric fibers of the model families


def lcp_fiber(Omega: np.ndarray, omega: np.ndarray) -> np.ndarray:
    """Columns ``(X, -w(X)) + (i_X Omega + f w, f)`` over the standard basis of ``(X, f)``."""
    k = omega.shape[0]
    cols = []
    for i in range(k):
        X = np.eye(k)[i]
        cols.append(np.concatenate([X, [-omega @ X], X @ Omega, [0.0]]))
    cols.append(np.concatenate([np.zeros(k), [0.0], omega, [1.0]]))
    return np.stack(cols, axis=1)


def precontact_fiber(Phi: np.ndarray, eta: np.ndarray) -> np.ndarray:
    """Columns ``(X, f) + (i_X Phi + f eta, -eta(X))`` over the standard basis of ``(X, f)``."""
    k = eta.shape[0]
    cols = []
    for i in range(k):
        X = np.eye(k)[i]
        cols.append(np.concatenate([X, [0.0], X @ Phi, [-eta @ X]]))
    cols.append(np.concatenate([np.zeros(k), [1.0], eta, [0.0]]))
    return np.stack(cols, axis=1)


# ---------------------------------------------------------------------------
# restriction to submanifolds


@dataclass
class Immersion:
    """A parametrised submanifold ``u -> x(u)`` given by expressions in ``params``."""

    params: Sequence[str]
    components: Sequence[Expr]

    def __post_init__(self):
        self.params = tuple(self.params)
        comps = list(self.components)
        jac = [partial(c, p) for c in comps for p in self.params]
        self._fn = compile_exprs(comps + jac, self.params)

    @property
    def dim(self) -> int:
        return len(self.params)

    def evaluate(self, u):
        u = np.atleast_2d(np.asarray(u, dtype=float))
        vals = self._fn(u)[:, 0]
        n = len(self.components)
        return vals[:n], vals[n:].reshape(n, self.dim)


@dataclass
class RestrictedFiber:
    point: np.ndarray
    intersection_dim: int
    kernel_dim: int
    image: np.ndarray            # (2k+2) x (k+1) basis of (L_S)_x
    intersection: np.ndarray     # (n+1) x m frame coefficients

    def to_dict(self) -> dict:
        return {"point": [float(v) for v in self.point], "intersection_dim": self.intersection_dim,
                "kernel_dim": self.kernel_dim, "image_dim": int(self.image.shape[1])}


def restrict_fiber(family: DiracFamily, S: Immersion, u) -> RestrictedFiber:
    """The fiber of the induced structure on ``S`` at the parameter point ``u``."""
    n = family.dim
    k = S.dim
    x, J = S.evaluate(u)
    if np.linalg.matrix_rank(J, tol=1e-10) != k:
        raise RankDrop("the immersion is not regular at the requested parameter")
    V = frame_at(family, x)
    A, f, a, g = V[:n], V[n], V[n + 1:2 * n + 1], V[2 * n + 1]
    Q = orthonormal_columns(J)
    perp = np.eye(n) - Q @ Q.T
    C = null_space(perp @ A)                      # coefficient space of the intersection
    if C.shape[1] == 0:
        raise RankDrop("empty intersection")
    kern = null_space(np.vstack([A @ C, f @ C, g @ C, J.T @ a @ C]))
    Jp = np.linalg.pinv(J)
    img = np.vstack([Jp @ A @ C, f @ C, J.T @ a @ C, g @ C])
    basis = orthonormal_columns(img)
    if basis.shape[1] != k + 1:
        raise RankDrop(f"induced fiber has dimension {basis.shape[1]}, expected {k + 1}")
    return RestrictedFiber(np.asarray(x), int(C.shape[1]), int(kern.shape[1]), basis, C)


@dataclass
class RestrictionReport:
    fibers: List[RestrictedFiber]
    constant_dimension: bool

    def to_dict(self) -> dict:
        return {"constant_dimension": self.constant_dimension,
                "fibers": [f.to_dict() for f in self.fibers]}


def restrict_to_submanifold(family: DiracFamily, S: Immersion, samples) -> RestrictionReport:
    """Restrict at each parameter sample; refuses when the intersection dimension jumps."""
    fibers = [restrict_fiber(family, S, u) for u in np.atleast_2d(samples)]
    dims = {f.intersection_dim for f in fibers}
    if len(dims) > 1:
        raise RankDrop(f"intersection dimension varies along the submanifold: {sorted(dims)}")
    return RestrictionReport(fibers, True)


# ---------------------------------------------------------------------------
# time-extended algebroid


def time_derivative(e: E1Section) -> E1Section:
    return E1Section(
        e.X.map(lambda c: partial(c, "t")), partial(e.f, "t"),
        e.alpha.map(lambda c: partial(c, "t")), partial(e.g, "t"),
    )


def bar_bracket(family: DiracFamily, Xb: E1Section, Yb: E1Section) -> E1Section:
    """Bracket of time-dependent sections: frozen bracket plus the ``d/dt`` corrections."""
    frozen = extended_bracket(Xb, Yb)
    return frozen + time_derivative(Yb).scale(Xb.f) - time_derivative(Xb).scale(Yb.f)


def bar_anchor(e: E1Section):
    """``rho(e) + phi(e) d/dt`` as ``(vector field, d/dt coefficient)``."""
    return e.X, e.f


# ---------------------------------------------------------------------------
# tracing


class TraceStatus(enum.Enum):
    COMPLETE = "COMPLETE"
    REACHED_SINGULAR = "REACHED_SINGULAR"


@dataclass
class TracePoint:
    step: int
    point: np.ndarray
    rank: int
    leaf_type: LeafType
    gap: float
    t: Optional[float] = None

    def to_dict(self) -> dict:
        out = {"step": self.step, "point": [float(v) for v in self.point], "rank": self.rank,
               "leaf_type": self.leaf_type.value, "conditioning_gap": _finite(self.gap)}
        if self.t is not None:
            out["t"] = float(self.t)
        return out


@dataclass
class LeafTrace:
    samples: List[TracePoint]
    h: float
    policy: str
    status: TraceStatus
    message: str = ""

    @property
    def points(self) -> np.ndarray:
        return np.array([s.point for s in self.samples])

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.samples], dtype=float)

    def to_dict(self) -> dict:
        return {"policy": self.policy, "h": self.h, "status": self.status.value,
                "message": self.message, "steps": len(self.samples) - 1,
                "samples": [s.to_dict() for s in self.samples]}


def _rk4(vel: Callable[[np.ndarray], np.ndarray], y: np.ndarray, h: float) -> np.ndarray:
    k1 = vel(y)
    k2 = vel(y + 0.5 * h * k1)
    k3 = vel(y + 0.5 * h * k2)
    k4 = vel(y + h * k3)
    return y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def trace_leaf(family: DiracFamily, x0, policy: str = "cycle", steps: int = 200, h: float = 0.05,
               seed: int = 0, t0: Optional[float] = None) -> LeafTrace:
    """Integrate anchor images of frame combinations, staying on one leaf.

    ``policy="cycle"`` walks the frame sections whose anchor image at ``x0``
    is nonzero, one per step; ``policy="random"`` draws a fresh unit
    combination per step.  With ``t0`` given, the trace runs in the
    time-extended space along ``rho(s) + phi(s) d/dt``.  A step that changes
    the rank or the leaf type (or lands on an ill-conditioned point) is
    rejected and ends the trace with ``REACHED_SINGULAR``.
    """
    if policy not in ("cycle", "random"):
        raise ValueError(f"unknown policy {policy!r}")
    n = family.dim
    x0 = np.asarray(x0, dtype=float).ravel()
    pa0 = analyze_point(family, x0)
    timed = t0 is not None
    norms = np.linalg.norm(np.vstack([pa0.anchor, pa0.phi]) if timed else pa0.anchor, axis=0)
    active = [i for i in range(n + 1) if norms[i] > RANK_TAU * max(1.0, norms.max())]
    rng = np.random.default_rng(seed)
    y = np.concatenate([x0, [t0]]) if timed else x0.copy()
    samples = [TracePoint(0, x0.copy(), pa0.rank, pa0.leaf_type, pa0.gap, t0)]
    status, message = TraceStatus.COMPLETE, ""

    def velocity(c):
        def vel(state):
            try:
                V = frame_at(family, state[:n])
            except DomainError as exc:
                raise StepFailure(f"frame evaluation failed: {exc}") from None
            v = V[:n] @ c
            if timed:
                v = np.concatenate([v, [V[n] @ c]])
            return v
        return vel

    for k in range(1, steps + 1):
        if not active:
            c = np.zeros(n + 1)
        elif policy == "cycle":
            c = np.zeros(n + 1)
            c[active[(k - 1) % len(active)]] = 1.0
        else:
            c = rng.standard_normal(n + 1)
            c /= np.linalg.norm(c)
        y_new = _rk4(velocity(c), y, h)
        if not np.all(np.isfinite(y_new)):
            raise StepFailure(f"non-finite state at step {k}")
        try:
            pa = analyze_point(family, y_new[:n])
        except IllConditioned as exc:
            status, message = TraceStatus.REACHED_SINGULAR, f"step {k}: {exc}"
            break
        if pa.rank != pa0.rank or pa.leaf_type is not pa0.leaf_type:
            status = TraceStatus.REACHED_SINGULAR
            message = f"step {k}: rank {pa.rank} / {pa.leaf_type.value} differs from the start"
            break
        y = y_new
        samples.append(TracePoint(k, y[:n].copy(), pa.rank, pa.leaf_type, pa.gap,
                                  float(y[n]) if timed else None))
    return LeafTrace(samples, h, policy, status, message)


def bar_jacobiator(family: DiracFamily, a: E1Section, b: E1Section, c: E1Section) -> E1Section:
    br = lambda u, v: bar_bracket(family, u, v)  # noqa: E731
    return br(br(a, b), c) + br(br(b, c), a) + br(br(c, a), b)
