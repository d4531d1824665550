"""Power-series upper bound on the admissibility index (Method 1).

Any matrix power A^t with t >= n expands as sum_i beta_i(t) A^i over the
first n powers; the coefficient vector beta(t) obeys a companion-form
recursion driven by the characteristic polynomial and decays to zero for
stable A.  Once the coefficients are small enough (in a weighted sense
that accounts for constraint asymmetry), every output constraint beyond
that step is implied by the earlier ones, which yields an upper bound on
the admissibility index without solving any LPs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLS, POWER_SERIES_STEP_CAP, Tolerances
from .errors import IterationCapError, NumericalError
from .linalg import char_poly_coeffs, spectral_radius
from .model import LtiSystem, OutputBox, gamma
from .results import BoundReport


@dataclass(frozen=True)
class BetaState:
    """Coefficients beta_0(t) ... beta_{n-1}(t) of the expansion of A^t."""

    t: int
    beta: np.ndarray


def beta_init(c) -> BetaState:
    """Initial coefficient vector beta(n) = -c for A^n."""
    c = np.atleast_1d(np.asarray(c, dtype=float))
    if c.size == 0:
        raise ValueError("empty coefficient vector")
    return BetaState(t=c.size, beta=-c.copy())


def beta_step(state: BetaState, c) -> BetaState:
    """Advance beta(t) -> beta(t+1) via the companion recursion.

    beta_0(t+1) = -c_0 beta_{n-1}(t);
    beta_i(t+1) = beta_{i-1}(t) - c_i beta_{n-1}(t) for i >= 1.
    """
    c = np.atleast_1d(np.asarray(c, dtype=float))
    b = state.beta
    if b.shape != c.shape:
        raise ValueError(f"state has {b.size} coefficients but c has {c.size}")
    last = b[-1]
    nxt = np.empty_like(b)
    nxt[0] = -c[0] * last
    if b.size > 1:
        nxt[1:] = b[:-1] - c[1:] * last
    return BetaState(t=state.t + 1, beta=nxt)


def _split_sums(beta: np.ndarray) -> tuple[float, float]:
    pos = float(beta[beta > 0.0].sum())
    neg = float(beta[beta < 0.0].sum())
    return pos, neg


def condition_unforced(beta, g: float, margin: float = 0.0) -> bool:
    """Stop rule: sum of positive coefficients minus g times the sum of
    negative ones must not exceed 1."""
    if g < 1.0:
        raise ValueError(f"asymmetry ratio must be >= 1, got {g}")
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    pos, neg = _split_sums(beta)
    return pos - g * neg <= 1.0 - margin


def condition_forced(beta, g: float, epsilon: float, margin: float = 0.0) -> bool:
    """Tightened stop rule for the constant-input case.

    (1 + g(1-eps)) * pos_sum - (g + (1-eps)) * neg_sum <= eps.
    At epsilon = 1 this reduces exactly to the unforced rule.
    """
    if g < 1.0:
        raise ValueError(f"asymmetry ratio must be >= 1, got {g}")
    if not 0.0 < epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in (0, 1], got {epsilon}")
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    pos, neg = _split_sums(beta)
    lhs = (1.0 + g * (1.0 - epsilon)) * pos - (g + (1.0 - epsilon)) * neg
    return lhs <= epsilon - margin


def _run_recursion(sys: LtiSystem, box: OutputBox, predicate, step_cap, tols: Tolerances):
    rho = spectral_radius(sys.A)
    if rho >= 1.0:
        raise ValueError(
            f"power-series bound requires spectral radius < 1, got {rho:.6g}"
        )
    if box.q != sys.q:
        raise ValueError(f"box has {box.q} outputs but system has {sys.q}")
    c = char_poly_coeffs(sys.A)
    state = beta_init(c)
    steps = 0
    while not predicate(state.beta):
        if steps >= step_cap:
            raise IterationCapError(
                f"stop rule not met after {step_cap} steps (spectral radius {rho:.6g}); "
                "raise the cap or reconsider the system",
                cap=step_cap,
                last_state=state,
            )
        state = beta_step(state, c)
        steps += 1
        if np.max(np.abs(state.beta)) > tols.beta_growth_limit:
            raise NumericalError(
                f"coefficient recursion diverged (||beta({state.t})||_inf > "
                f"{tols.beta_growth_limit:.1e}) despite spectral radius {rho:.6g} < 1"
            )
    return state, c, rho


def bound_m1_unforced(
    sys: LtiSystem,
    box: OutputBox,
    step_cap: int = POWER_SERIES_STEP_CAP,
    margin: float = 0.0,
    tols: Tolerances = DEFAULT_TOLS,
) -> BoundReport:
    """Upper bound m on the admissibility index for the autonomous system.

    Runs the coefficient recursion from t = n and returns m = t - 1 for
    the first t at which the weighted-sum stop rule holds.
    """
    g = gamma(box)
    state, _, rho = _run_recursion(
        sys, box, lambda b: condition_unforced(b, g, margin), step_cap, tols
    )
    return BoundReport(
        method="power-series",
        regime="unforced",
        m=state.t - 1,
        iterations=state.t - sys.n,
        diagnostics={"stop_t": state.t, "gamma": g, "rho": rho},
    )


def bound_m1_forced(
    sys: LtiSystem,
    box: OutputBox,
    epsilon: float,
    step_cap: int = POWER_SERIES_STEP_CAP,
    margin: float = 0.0,
    tols: Tolerances = DEFAULT_TOLS,
) -> BoundReport:
    """Upper bound for the constant-input system with steady-state margin epsilon.

    epsilon = 1 is accepted and reproduces the unforced bound (the
    steady-state tightening then forces u = 0).
    """
    if not sys.has_input:
        raise ValueError("forced bound requires a system with an input channel (B)")
    if not 0.0 < epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in (0, 1], got {epsilon}")
    g = gamma(box)
    state, _, rho = _run_recursion(
        sys, box, lambda b: condition_forced(b, g, epsilon, margin), step_cap, tols
    )
    return BoundReport(
        method="power-series",
        regime="forced",
        m=state.t - 1,
        iterations=state.t - sys.n,
        diagnostics={"stop_t": state.t, "gamma": g, "rho": rho, "epsilon": epsilon},
    )
