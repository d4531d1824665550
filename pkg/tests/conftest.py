"""Shared test helpers: independent oracles and random-instance factories."""

import itertools

import numpy as np
import pytest

from masbound import LtiSystem, OutputBox


def random_stable_matrix(rng, n, rho_max=0.95):
    """Dense matrix with spectral radius scaled below rho_max."""
    A = rng.standard_normal((n, n))
    rho = np.max(np.abs(np.linalg.eigvals(A)))
    target = rng.uniform(0.2, rho_max)
    return A * (target / rho)


def random_spd_matrix(rng, n):
    M = rng.standard_normal((n, n))
    return M @ M.T + n * np.eye(n)


def scalar_interval_t_star(a, c, y_l, y_u, tol=1e-9, cap=10_000):
    """Interval-intersection oracle for the scalar admissibility index.

    Tracks O_t = intersection of {x : c a^t x in [-y_l, y_u]} and stops at
    the first t whose step-(t+1) interval already contains O_t, using the
    same redundancy slack as the LP-based implementation.
    """

    def interval(w):
        if w > 0:
            return (-y_l / w, y_u / w)
        if w < 0:
            return (y_u / w, -y_l / w)
        return (-np.inf, np.inf)

    def redundant(w, lo, hi):
        # max(w x) over [lo, hi] <= bound, for both signed rows
        return max(w * lo, w * hi) <= y_u + tol and max(-w * lo, -w * hi) <= y_l + tol

    w = float(c)
    lo, hi = interval(w)
    for t in range(cap):
        w_next = w * a
        if redundant(w_next, lo, hi):
            return t
        lo2, hi2 = interval(w_next)
        lo, hi = max(lo, lo2), min(hi, hi2)
        w = w_next
    raise AssertionError("oracle did not terminate")


def brute_force_vertices(G, h, feas_tol=1e-6, dedup_tol=1e-6):
    """Solve every d-subset of rows; keep feasible, deduplicated solutions."""
    G = np.asarray(G, dtype=float)
    h = np.asarray(h, dtype=float)
    k, d = G.shape
    points = []
    for combo in itertools.combinations(range(k), d):
        sub = G[list(combo)]
        if abs(np.linalg.det(sub)) < 1e-10:
            continue
        x = np.linalg.solve(sub, h[list(combo)])
        if np.all(G @ x <= h + feas_tol):
            points.append(x)
    kept = []
    for p in points:
        if all(np.linalg.norm(p - q) > dedup_tol for q in kept):
            kept.append(p)
    return np.array(kept) if kept else np.empty((0, d))


def match_point_sets(P1, P2, tol):
    """True when the two point sets coincide up to tol (as sets)."""
    if len(P1) != len(P2):
        return False
    for p in P1:
        if np.min(np.linalg.norm(P2 - p, axis=1)) > tol:
            return False
    for p in P2:
        if np.min(np.linalg.norm(P1 - p, axis=1)) > tol:
            return False
    return True


def random_bounded_polytope(rng, d, k):
    """Random halfspaces around a box, guaranteed bounded with the origin inside."""
    G = [np.eye(d), -np.eye(d)]
    h = [np.full(d, rng.uniform(0.5, 2.0)), np.full(d, rng.uniform(0.5, 2.0))]
    extra = max(0, k - 2 * d)
    if extra:
        rows = rng.standard_normal((extra, d))
        rows /= np.linalg.norm(rows, axis=1)[:, None]
        G.append(rows)
        h.append(rng.uniform(0.3, 2.0, size=extra))
    return np.vstack(G), np.concatenate(h)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def make_siso(a, b=None, c=1.0, d=None):
    """Scalar state helper used across modules."""
    return LtiSystem(
        A=[[float(a)]],
        B=None if b is None else [[float(b)]],
        C=[[float(c)]],
        D=None if d is None else [[float(d)]],
    )


def unit_box(q=1):
    return OutputBox(np.ones(q), np.ones(q))
