"""Lyapunov level-set upper bound on the admissibility index (Method 2).

Two ellipsoidal level sets of V(x) = x'Px are computed: the largest one
inscribed in the state-space constraint set and the smallest one
circumscribing the n-step admissible prefix set.  The worst-case decay
factor of V along trajectories converts the ratio of their levels into
an upper bound on the admissibility index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLS, VERTEX_DIM_CAP, Tolerances
from .errors import NumericalError
from .geometry import Polytope, enumerate_vertices
from .linalg import solve_discrete_lyapunov, spectral_radius, sym_eig_extremes
from .model import LtiSystem, OutputBox, dc_gain
from .results import BoundReport

SIGMA_MODES = ("eq25", "paper")


@dataclass(frozen=True)
class LevelSetPair:
    """Lyapunov data (P, Q), decay factor sigma, and level radii r1 <= r2."""

    P: np.ndarray
    Q: np.ndarray
    sigma: float
    r1: float
    r2: float

    def __post_init__(self):
        if self.r2 < self.r1 - 1e-9 * max(1.0, abs(self.r1)):
            raise NumericalError(
                f"circumscribing level {self.r2:.6g} fell below inscribed level "
                f"{self.r1:.6g}; vertex enumeration or the Lyapunov solve is suspect"
            )


def build_O_prefix(sys: LtiSystem, box: OutputBox, horizon: int) -> Polytope:
    """Halfspace form of {x : C A^t x inside the box for t = 0..horizon}.

    Row order: for each t, rows +C_j A^t <= y_upper[j] then -C_j A^t <=
    y_lower[j], outputs in order.
    """
    if horizon < 0:
        raise ValueError(f"horizon must be >= 0, got {horizon}")
    if box.q != sys.q:
        raise ValueError(f"box has {box.q} outputs but system has {sys.q}")
    rows = []
    rhs = []
    M = sys.C
    for _ in range(horizon + 1):
        rows.append(M)
        rows.append(-M)
        rhs.append(box.y_upper)
        rhs.append(box.y_lower)
        M = M @ sys.A
    return Polytope(np.vstack(rows), np.concatenate(rhs))


def build_O_prefix_forced(
    sys: LtiSystem, box: OutputBox, epsilon: float, horizon: int
) -> Polytope:
    """Prefix set in (z, u) coordinates with the tightened steady-state rows.

    Output rows are [C_j A^t, H0_j] against the box for t = 0..horizon;
    the steady-state rows constrain H0 u to (1 - epsilon) times the box.
    """
    if not sys.has_input:
        raise ValueError("forced prefix set requires a system with an input channel (B)")
    if not 0.0 < epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in (0, 1], got {epsilon}")
    if horizon < 0:
        raise ValueError(f"horizon must be >= 0, got {horizon}")
    if box.q != sys.q:
        raise ValueError(f"box has {box.q} outputs but system has {sys.q}")
    H0 = dc_gain(sys)
    zero_z = np.zeros((sys.q, sys.n))
    rows = [np.hstack([zero_z, H0]), np.hstack([zero_z, -H0])]
    rhs = [(1.0 - epsilon) * box.y_upper, (1.0 - epsilon) * box.y_lower]
    M = sys.C
    for _ in range(horizon + 1):
        block = np.hstack([M, H0])
        rows.append(block)
        rows.append(-block)
        rhs.append(box.y_upper)
        rhs.append(box.y_lower)
        M = M @ sys.A
    return Polytope(np.vstack(rows), np.concatenate(rhs))


def compute_r1(P, C, box: OutputBox, scale: float = 1.0) -> float:
    """Largest level r with {x'Px <= r} inside the (scaled) output constraint.

    r1 = min_j (scale * min(y_lower[j], y_upper[j]))^2 / (c_j P^{-1} c_j').
    """
    P = np.atleast_2d(np.asarray(P, dtype=float))
    C = np.atleast_2d(np.asarray(C, dtype=float))
    if not 0.0 < scale <= 1.0:
        raise ValueError(f"scale must lie in (0, 1], got {scale}")
    if box.q != C.shape[0]:
        raise ValueError(f"box has {box.q} outputs but C has {C.shape[0]} rows")
    bounds = scale * np.minimum(box.y_lower, box.y_upper)
    sol = np.linalg.solve(P, C.T)  # P^{-1} C'
    denoms = np.einsum("ij,ji->i", C, sol)
    if np.any(denoms < 0.0):
        raise NumericalError("quadratic form c P^{-1} c' came out negative; P is not positive definite")
    with np.errstate(divide="ignore"):
        levels = np.where(denoms > 0.0, bounds**2 / denoms, np.inf)
    r1 = float(np.min(levels))
    if not np.isfinite(r1):
        raise ValueError("every output row of C is zero; inscribed level is unbounded")
    return r1


def compute_r2(P, vertices, proj_dim: int | None = None) -> float:
    """Smallest level r with every (projected) vertex inside {x'Px <= r}."""
    P = np.atleast_2d(np.asarray(P, dtype=float))
    V = np.atleast_2d(np.asarray(vertices, dtype=float))
    if V.size == 0:
        raise ValueError("empty vertex list")
    if proj_dim is not None:
        if not 0 < proj_dim <= V.shape[1]:
            raise ValueError(f"projection dimension {proj_dim} out of range for {V.shape[1]}-vectors")
        V = V[:, :proj_dim]
    if V.shape[1] != P.shape[0]:
        raise ValueError(f"vertices have dimension {V.shape[1]} but P is {P.shape[0]}x{P.shape[0]}")
    return float(np.max(np.einsum("ij,jk,ik->i", V, P, V)))


def compute_sigma(A, P, Q, mode: str = "eq25") -> float:
    """Per-step decay factor of V(x) = x'Px along x(t+1) = A x(t).

    mode "eq25" uses 1 - lambda_min(Q)/lambda_max(P), which the decay
    chain proves for every A.  mode "paper" uses the spectral-radius
    square rho(A)^2 (exact for normal A, optimistic for non-normal A).
    """
    if mode not in SIGMA_MODES:
        raise ValueError(f"unknown sigma mode {mode!r}; expected one of {SIGMA_MODES}")
    if mode == "paper":
        sigma = spectral_radius(A) ** 2
    else:
        lam_min_q, _ = sym_eig_extremes(Q)
        _, lam_max_p = sym_eig_extremes(P)
        if lam_min_q <= 0.0 or lam_max_p <= 0.0:
            raise NumericalError("Lyapunov pair lost positive definiteness")
        sigma = 1.0 - lam_min_q / lam_max_p
    if sigma >= 1.0:
        raise NumericalError(f"decay factor {sigma:.6g} >= 1; Lyapunov data is inconsistent")
    return max(sigma, 0.0)


def bound_m2(r1: float, r2: float, sigma: float) -> int:
    """floor(log(r1/r2) / log(sigma)), clamped to be a valid nonnegative bound."""
    if r1 <= 0.0 or r2 <= 0.0:
        raise ValueError(f"levels must be positive, got r1={r1}, r2={r2}")
    if not 0.0 <= sigma < 1.0:
        raise ValueError(f"sigma must lie in [0, 1), got {sigma}")
    if sigma == 0.0 or r1 >= r2:
        return 0
    return max(0, math.floor(math.log(r1 / r2) / math.log(sigma)))


def _compose_report(sys, P, sigma, sigma_mode, r1, r2, regime, epsilon=None) -> BoundReport:
    m = bound_m2(r1, r2, sigma)
    pair = LevelSetPair(P=P, Q=np.eye(sys.n), sigma=sigma, r1=r1, r2=r2)
    boundary = False
    if 0.0 < sigma < 1.0 and r1 < r2:
        ratio = math.log(r1 / r2) / math.log(sigma)
        boundary = abs(ratio - round(ratio)) < 1e-9
    diagnostics = {
        "sigma": sigma,
        "sigma_mode": sigma_mode,
        "r1": r1,
        "r2": r2,
        "level_set": pair,
        "boundary_integer": boundary,
    }
    if epsilon is not None:
        diagnostics["epsilon"] = epsilon
    return BoundReport(method="lyapunov", regime=regime, m=m, diagnostics=diagnostics)


def _lyapunov_pieces(sys: LtiSystem, sigma_mode: str, tols: Tolerances):
    rho = spectral_radius(sys.A)
    if rho >= 1.0:
        raise ValueError(f"level-set bound requires spectral radius < 1, got {rho:.6g}")
    Q = np.eye(sys.n)
    P = solve_discrete_lyapunov(sys.A, Q, tols=tols)
    sigma = compute_sigma(sys.A, P, Q, mode=sigma_mode)
    return P, sigma


def bound_m2_unforced(
    sys: LtiSystem,
    box: OutputBox,
    sigma_mode: str = "eq25",
    dim_cap: int = VERTEX_DIM_CAP,
    tols: Tolerances = DEFAULT_TOLS,
) -> BoundReport:
    """Level-set upper bound for the autonomous system (Q = I)."""
    P, sigma = _lyapunov_pieces(sys, sigma_mode, tols)
    r1 = compute_r1(P, sys.C, box, scale=1.0)
    prefix = build_O_prefix(sys, box, horizon=sys.n - 1)
    verts = enumerate_vertices(prefix, dim_cap=dim_cap, tols=tols).vertices
    r2 = compute_r2(P, verts)
    return _compose_report(sys, P, sigma, sigma_mode, r1, r2, regime="unforced")


def bound_m2_forced(
    sys: LtiSystem,
    box: OutputBox,
    epsilon: float,
    sigma_mode: str = "eq25",
    dim_cap: int = VERTEX_DIM_CAP,
    tols: Tolerances = DEFAULT_TOLS,
) -> BoundReport:
    """Level-set upper bound for the constant-input system.

    At epsilon = 1 the steady-state tightening pins H0 u to zero, the
    prefix set degenerates to the unforced one in the z-slice, and the
    bound coincides exactly with the unforced computation.
    """
    if not sys.has_input:
        raise ValueError("forced bound requires a system with an input channel (B)")
    if not 0.0 < epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in (0, 1], got {epsilon}")
    P, sigma = _lyapunov_pieces(sys, sigma_mode, tols)
    if epsilon == 1.0:
        r1 = compute_r1(P, sys.C, box, scale=1.0)
        prefix = build_O_prefix(sys, box, horizon=sys.n - 1)
        verts = enumerate_vertices(prefix, dim_cap=dim_cap, tols=tols).vertices
        r2 = compute_r2(P, verts)
        return _compose_report(sys, P, sigma, sigma_mode, r1, r2, regime="forced", epsilon=epsilon)
    if sys.n + sys.m_in > dim_cap:
        raise ValueError(
            f"joint state-input dimension {sys.n + sys.m_in} exceeds the "
            f"vertex-enumeration cap {dim_cap}"
        )
    r1 = compute_r1(P, sys.C, box, scale=epsilon)
    prefix = build_O_prefix_forced(sys, box, epsilon, horizon=sys.n - 1)
    verts = enumerate_vertices(prefix, dim_cap=dim_cap, tols=tols).vertices
    r2 = compute_r2(P, verts, proj_dim=sys.n)
    return _compose_report(sys, P, sigma, sigma_mode, r1, r2, regime="forced", epsilon=epsilon)
