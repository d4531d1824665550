"""Polytopes in halfspace form, LP redundancy checks, vertex enumeration.

The LP backend is scipy's HiGHS interface.  Vertex enumeration goes
through qhull's halfspace intersection seeded with a Chebyshev-center
interior point; a combinatorial active-set sweep serves as a fallback
when qhull rejects a degenerate instance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import HalfspaceIntersection, QhullError

from .config import DEFAULT_TOLS, VERTEX_DIM_CAP, Tolerances
from .errors import LpError, UnboundedPolytopeError


@dataclass(frozen=True)
class Polytope:
    """{x : G x <= h} with an optional vertex list."""

    G: np.ndarray
    h: np.ndarray
    vertices: np.ndarray | None = None

    def __post_init__(self):
        G = np.atleast_2d(np.asarray(self.G, dtype=float))
        h = np.atleast_1d(np.asarray(self.h, dtype=float))
        if G.ndim != 2 or h.ndim != 1 or G.shape[0] != h.shape[0]:
            raise ValueError(f"inconsistent halfspace data: G {G.shape}, h {h.shape}")
        if not (np.all(np.isfinite(G)) and np.all(np.isfinite(h))):
            raise ValueError("halfspace data must be finite")
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "h", h)
        if self.vertices is not None:
            V = np.atleast_2d(np.asarray(self.vertices, dtype=float))
            object.__setattr__(self, "vertices", V)

    @property
    def dim(self) -> int:
        return self.G.shape[1]

    @property
    def nrows(self) -> int:
        return self.G.shape[0]

    def contains(self, x, tol: float = 1e-9) -> bool:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return bool(np.all(self.G @ x <= self.h + tol))

    def with_rows(self, G_new, h_new) -> "Polytope":
        G_new = np.atleast_2d(np.asarray(G_new, dtype=float))
        h_new = np.atleast_1d(np.asarray(h_new, dtype=float))
        return Polytope(np.vstack([self.G, G_new]), np.concatenate([self.h, h_new]))


@dataclass(frozen=True)
class LpOutcome:
    status: str  # "optimal" | "unbounded" | "infeasible"
    optimum: float | None = None
    argmax: np.ndarray | None = None
    dual: np.ndarray | None = None


def _highs_options(tols: Tolerances) -> dict:
    return {
        "primal_feasibility_tolerance": tols.lp_feasibility,
        "dual_feasibility_tolerance": tols.lp_feasibility,
    }


def lp_maximize(c, poly: Polytope, tols: Tolerances = DEFAULT_TOLS) -> LpOutcome:
    """Maximize c.x over the polytope, classifying the outcome."""
    c = np.atleast_1d(np.asarray(c, dtype=float))
    if c.shape != (poly.dim,):
        raise ValueError(f"objective has length {c.size}, polytope dimension is {poly.dim}")
    if poly.nrows == 0:
        raise ValueError("polytope has no inequalities")
    res = linprog(
        -c,
        A_ub=poly.G,
        b_ub=poly.h,
        bounds=(None, None),
        method="highs",
        options=_highs_options(tols),
    )
    if res.status != 0:
        # HiGHS presolve can report "infeasible" for unbounded instances;
        # the simplex classification without presolve is trustworthy.
        res = linprog(
            -c,
            A_ub=poly.G,
            b_ub=poly.h,
            bounds=(None, None),
            method="highs",
            options={**_highs_options(tols), "presolve": False},
        )
    if res.status == 0:
        return LpOutcome(
            status="optimal",
            optimum=float(-res.fun),
            argmax=np.asarray(res.x, dtype=float),
            dual=-np.asarray(res.ineqlin.marginals, dtype=float),
        )
    if res.status == 2:
        return LpOutcome(status="infeasible")
    if res.status == 3:
        return LpOutcome(status="unbounded")
    raise LpError(f"LP solver failed (status {res.status}): {res.message}")


def is_redundant(row, rhs: float, poly: Polytope, tols: Tolerances = DEFAULT_TOLS) -> bool:
    """True when adding {row . x <= rhs} would not cut the polytope.

    Certified by maximizing the row over the current polytope; an
    unbounded maximum means the row does cut, an infeasible polytope is
    reported as an error.
    """
    row = np.atleast_1d(np.asarray(row, dtype=float))
    if np.linalg.norm(row) < tols.zero_row:
        if rhs >= -tols.redundancy:
            return True
        raise LpError("all-zero row with negative bound: polytope is empty")
    out = lp_maximize(row, poly, tols=tols)
    if out.status == "unbounded":
        return False
    if out.status == "infeasible":
        raise LpError("redundancy check against an empty polytope")
    return out.optimum <= rhs + tols.redundancy


def chebyshev_center(poly: Polytope, tols: Tolerances = DEFAULT_TOLS) -> tuple[np.ndarray, float]:
    """Center and radius of the largest inscribed ball."""
    norms = np.linalg.norm(poly.G, axis=1)
    d = poly.dim
    A_ub = np.hstack([poly.G, norms[:, None]])
    c = np.zeros(d + 1)
    c[-1] = -1.0  # maximize the radius
    res = linprog(
        c,
        A_ub=A_ub,
        b_ub=poly.h,
        bounds=[(None, None)] * d + [(0, None)],
        method="highs",
        options=_highs_options(tols),
    )
    if res.status == 3:
        raise UnboundedPolytopeError("polytope has unbounded inscribed balls")
    if res.status != 0:
        raise LpError(f"Chebyshev-center LP failed (status {res.status}): {res.message}")
    return np.asarray(res.x[:d], dtype=float), float(res.x[-1])


def bounding_box(poly: Polytope, tols: Tolerances = DEFAULT_TOLS) -> tuple[np.ndarray, np.ndarray]:
    """Componentwise (lower, upper) bounds; raises if any direction is unbounded."""
    d = poly.dim
    lo = np.empty(d)
    hi = np.empty(d)
    e = np.zeros(d)
    for i in range(d):
        e[:] = 0.0
        e[i] = 1.0
        up = lp_maximize(e, poly, tols=tols)
        down = lp_maximize(-e, poly, tols=tols)
        if up.status == "infeasible" or down.status == "infeasible":
            raise UnboundedPolytopeError("polytope is empty")
        if up.status == "unbounded" or down.status == "unbounded":
            raise UnboundedPolytopeError(f"polytope is unbounded along coordinate {i}")
        hi[i] = up.optimum
        lo[i] = -down.optimum
    return lo, hi


def _dedupe(points: np.ndarray, tol: float) -> np.ndarray:
    kept: list[np.ndarray] = []
    for p in points:
        if all(np.linalg.norm(p - k) > tol for k in kept):
            kept.append(p)
    return np.array(kept)


def _drop_zero_rows(poly: Polytope, tols: Tolerances) -> Polytope:
    norms = np.linalg.norm(poly.G, axis=1)
    zero = norms < tols.zero_row
    if not zero.any():
        return poly
    if np.any(poly.h[zero] < -tols.redundancy):
        raise UnboundedPolytopeError("zero row with negative bound: polytope is empty")
    return Polytope(poly.G[~zero], poly.h[~zero])


def _brute_force_vertices(poly: Polytope, tols: Tolerances) -> np.ndarray:
    """Enumerate basic feasible points over all d-subsets of active rows.

    Exponential in the row count; used as a fallback for small systems
    that qhull rejects (degenerate geometry, near-parallel planes).
    """
    G, h, d = poly.G, poly.h, poly.dim
    k = G.shape[0]
    n_combos = 1
    for idx in range(d):
        n_combos = n_combos * (k - idx) // (idx + 1)
    if n_combos > 2_000_000:
        raise UnboundedPolytopeError(
            f"vertex enumeration fallback would need {n_combos} subsets; instance too degenerate"
        )
    combos = np.array(list(itertools.combinations(range(k), d)), dtype=int)
    sub_G = G[combos]  # (n_combos, d, d)
    dets = np.abs(np.linalg.det(sub_G))
    ok = dets > 1e-12 * np.maximum(1.0, np.abs(sub_G).max(axis=(1, 2)) ** d)
    points = []
    if ok.any():
        sols = np.linalg.solve(sub_G[ok], h[combos[ok]][..., None])[..., 0]
        feas = np.all(G @ sols.T <= h[:, None] + tols.vertex_feasibility, axis=0)
        points = sols[feas]
    if len(points) == 0:
        return np.empty((0, d))
    return _dedupe(np.asarray(points), tols.vertex_dedup)


def enumerate_vertices(
    poly: Polytope,
    dim_cap: int = VERTEX_DIM_CAP,
    tols: Tolerances = DEFAULT_TOLS,
) -> Polytope:
    """Convert a bounded halfspace description to its vertex set.

    Returns a copy of the polytope with `vertices` filled in
    (deduplicated, each verified feasible).  Raises
    UnboundedPolytopeError for unbounded or empty input and ValueError
    above the dimension cap.
    """
    d = poly.dim
    if d > dim_cap:
        raise ValueError(f"dimension {d} exceeds the vertex-enumeration cap {dim_cap}")
    work = _drop_zero_rows(poly, tols)
    lo, hi = bounding_box(work, tols=tols)  # also certifies boundedness
    if d == 1:
        verts = np.array([[lo[0]], [hi[0]]])
        verts = _dedupe(verts, tols.vertex_dedup)
        return Polytope(poly.G, poly.h, vertices=verts)

    # Normalize rows for qhull conditioning; the feasible set is unchanged.
    norms = np.linalg.norm(work.G, axis=1)
    Gn = work.G / norms[:, None]
    hn = work.h / norms
    center, radius = chebyshev_center(Polytope(Gn, hn), tols=tols)
    if radius <= 1e-10 * max(1.0, np.max(np.abs(hi - lo))):
        raise UnboundedPolytopeError(
            "polytope is not full-dimensional within tolerance; no interior point found"
        )
    halfspaces = np.hstack([Gn, -hn[:, None]])
    try:
        inter = HalfspaceIntersection(halfspaces, center)
        verts = np.asarray(inter.intersections, dtype=float)
    except QhullError:
        verts = _brute_force_vertices(work, tols)
    verts = verts[np.all(np.isfinite(verts), axis=1)]
    if verts.size == 0:
        raise UnboundedPolytopeError("vertex enumeration produced no finite vertices")
    verts = _dedupe(verts, tols.vertex_dedup)
    # Guard against qhull round-off escaping the feasible set.
    slack = work.G @ verts.T - work.h[:, None]
    if np.max(slack) > tols.vertex_feasibility:
        verts = _brute_force_vertices(work, tols)
        if verts.size == 0:
            raise UnboundedPolytopeError("vertex enumeration failed feasibility screening")
    return Polytope(poly.G, poly.h, vertices=verts)
