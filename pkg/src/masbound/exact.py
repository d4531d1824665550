"""Exact admissibility index and maximal admissible set.

Implements the classical iterative construction (Gilbert and Tan, 1991):
add the output constraints one time step at a time and stop as soon as
every newly generated inequality is redundant with respect to the set
built so far.  The step at which that first happens is the admissibility
index t*; the accumulated non-redundant inequalities describe the set.

For the constant-input case the computation runs in the shifted
coordinates (z0, u) where z0 = x0 - (I - A)^{-1} B u, the output rows
read C A^t z0 + H0 u, and the steady-state output H0 u is tightened to
(1 - epsilon) times the box to restore finite determination.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLS, EXACT_STEP_CAP, Tolerances
from .errors import IterationCapError, LpError
from .geometry import Polytope, is_redundant
from .linalg import spectral_radius
from .model import LtiSystem, OutputBox, dc_gain


@dataclass(frozen=True)
class MasResult:
    """Admissibility index plus the pruned halfspace description.

    For the forced regime the polytope lives in (z0, u) coordinates; add
    (I - A)^{-1} B u to the first n components to recover x0.
    """

    t_star: int
    polytope: Polytope
    regime: str
    epsilon: float | None = None


def _prune(poly: Polytope, tols: Tolerances) -> Polytope:
    """Drop rows that are implied by the remaining ones, one at a time."""
    G, h = poly.G, poly.h
    keep = list(range(G.shape[0]))
    i = 0
    while i < len(keep):
        others = keep[:i] + keep[i + 1 :]
        if len(others) == 0:
            break
        idx = keep[i]
        if is_redundant(G[idx], h[idx], Polytope(G[others], h[others]), tols=tols):
            keep.pop(i)
        else:
            i += 1
    return Polytope(G[keep], h[keep])


def _iterate(block_at, first_poly: Polytope, step_cap: int, tols: Tolerances):
    """Shared constraint-addition loop.

    block_at(t) yields the (rows, rhs) pair for time step t; the loop
    starts from first_poly (time step 0 included) and returns (t_star,
    pruned polytope).
    """
    poly = first_poly
    for t in range(step_cap + 1):
        rows, rhs = block_at(t + 1)
        fresh_rows = []
        fresh_rhs = []
        for row, bound in zip(rows, rhs):
            if np.linalg.norm(row) < tols.zero_row:
                if bound >= -tols.redundancy:
                    continue
                raise LpError("zero constraint row with negative bound: empty constraint set")
            if not is_redundant(row, bound, poly, tols=tols):
                fresh_rows.append(row)
                fresh_rhs.append(bound)
        if not fresh_rows:
            return t, _prune(poly, tols)
        poly = poly.with_rows(np.array(fresh_rows), np.array(fresh_rhs))
    raise IterationCapError(
        f"admissibility index not determined within {step_cap} steps",
        cap=step_cap,
    )


def exact_t_star_unforced(
    sys: LtiSystem,
    box: OutputBox,
    step_cap: int = EXACT_STEP_CAP,
    tols: Tolerances = DEFAULT_TOLS,
) -> MasResult:
    """Exact admissibility index of the autonomous system.

    Requires a strictly stable A; with an observable pair the iteration
    is guaranteed to terminate.
    """
    rho = spectral_radius(sys.A)
    if rho >= 1.0:
        raise ValueError(f"exact computation requires spectral radius < 1, got {rho:.6g}")
    if box.q != sys.q:
        raise ValueError(f"box has {box.q} outputs but system has {sys.q}")

    powers = {0: sys.C}

    def output_block(t: int):
        top = max(powers)
        while top < t:
            powers[top + 1] = powers[top] @ sys.A
            top += 1
        M = powers[t]
        return np.vstack([M, -M]), np.concatenate([box.y_upper, box.y_lower])

    G0, h0 = output_block(0)
    t_star, poly = _iterate(output_block, Polytope(G0, h0), step_cap, tols)
    return MasResult(t_star=t_star, polytope=poly, regime="unforced")


def exact_t_star_forced(
    sys: LtiSystem,
    box: OutputBox,
    epsilon: float,
    step_cap: int = EXACT_STEP_CAP,
    tols: Tolerances = DEFAULT_TOLS,
) -> MasResult:
    """Exact admissibility index of the epsilon-tightened constant-input set.

    Decision variables are (z0, u).  epsilon = 1 is accepted; the
    steady-state rows then force H0 u = 0 and the index matches the
    unforced one.
    """
    if not sys.has_input:
        raise ValueError("forced computation requires a system with an input channel (B)")
    if not 0.0 < epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in (0, 1], got {epsilon}")
    rho = spectral_radius(sys.A)
    if rho >= 1.0:
        raise ValueError(f"exact computation requires spectral radius < 1, got {rho:.6g}")
    if box.q != sys.q:
        raise ValueError(f"box has {box.q} outputs but system has {sys.q}")

    H0 = dc_gain(sys)
    zero_z = np.zeros((sys.q, sys.n))
    powers = {0: sys.C}

    def output_block(t: int):
        top = max(powers)
        while top < t:
            powers[top + 1] = powers[top] @ sys.A
            top += 1
        block = np.hstack([powers[t], H0])
        return np.vstack([block, -block]), np.concatenate([box.y_upper, box.y_lower])

    ss_rows = np.vstack([np.hstack([zero_z, H0]), np.hstack([zero_z, -H0])])
    ss_rhs = np.concatenate(
        [(1.0 - epsilon) * box.y_upper, (1.0 - epsilon) * box.y_lower]
    )
    G0, h0 = output_block(0)
    first = Polytope(np.vstack([ss_rows, G0]), np.concatenate([ss_rhs, h0]))
    t_star, poly = _iterate(output_block, first, step_cap, tols)
    return MasResult(t_star=t_star, polytope=poly, regime="forced", epsilon=epsilon)
