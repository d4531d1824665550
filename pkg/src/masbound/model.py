"""System and constraint data model.

Holds the LTI system description (autonomous or with a constant input
channel), the box output constraint, validation against the stability
and observability rejection thresholds, and the equilibrium shift used
by the constant-input computations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOLS, Tolerances
from .linalg import min_singular_value, spectral_radius


@dataclass(frozen=True)
class LtiSystem:
    """x(t+1) = A x(t) [+ B u],  y(t) = C x(t) [+ D u].

    B and D are None for an autonomous system.  If B is given and D is
    not, D defaults to zeros.
    """

    A: np.ndarray
    C: np.ndarray
    B: np.ndarray | None = None
    D: np.ndarray | None = None

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        C = np.atleast_2d(np.asarray(self.C, dtype=float))
        if A.shape[0] != A.shape[1]:
            raise ValueError(f"A must be square, got shape {A.shape}")
        if C.shape[1] != A.shape[0]:
            raise ValueError(f"C has {C.shape[1]} columns but A is {A.shape[0]}x{A.shape[0]}")
        B = self.B
        D = self.D
        if B is None:
            if D is not None:
                raise ValueError("D given without B (no input channel)")
        else:
            B = np.asarray(B, dtype=float)
            if B.ndim == 1:
                B = B.reshape(-1, 1)
            if B.shape[0] != A.shape[0]:
                raise ValueError(f"B has {B.shape[0]} rows but A is {A.shape[0]}x{A.shape[0]}")
            if D is None:
                D = np.zeros((C.shape[0], B.shape[1]))
            else:
                D = np.asarray(D, dtype=float)
                if D.ndim == 1:
                    D = D.reshape(C.shape[0], -1)
                if D.shape != (C.shape[0], B.shape[1]):
                    raise ValueError(
                        f"D must be {C.shape[0]}x{B.shape[1]}, got {D.shape}"
                    )
        for name, M in (("A", A), ("B", B), ("C", C), ("D", D)):
            if M is not None and not np.all(np.isfinite(M)):
                raise ValueError(f"{name} has non-finite entries")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "D", D)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def q(self) -> int:
        return self.C.shape[0]

    @property
    def m_in(self) -> int:
        return 0 if self.B is None else self.B.shape[1]

    @property
    def has_input(self) -> bool:
        return self.B is not None


@dataclass(frozen=True)
class OutputBox:
    """Per-output limits: -y_lower[j] <= y_j <= y_upper[j], all limits > 0."""

    y_lower: np.ndarray
    y_upper: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.y_lower, dtype=float))
        hi = np.atleast_1d(np.asarray(self.y_upper, dtype=float))
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValueError(f"y_lower/y_upper must be equal-length vectors, got {lo.shape}, {hi.shape}")
        if not (np.all(lo > 0.0) and np.all(hi > 0.0)):
            raise ValueError("all box limits must be strictly positive (origin interior)")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise ValueError("box limits must be finite")
        object.__setattr__(self, "y_lower", lo)
        object.__setattr__(self, "y_upper", hi)

    @property
    def q(self) -> int:
        return self.y_lower.shape[0]

    def scaled(self, k: float) -> "OutputBox":
        return OutputBox(k * self.y_lower, k * self.y_upper)


@dataclass(frozen=True)
class ValidationReport:
    spectral_radius: float
    min_obsv_singular_value: float
    stable: bool
    observable: bool

    @property
    def ok(self) -> bool:
        return self.stable and self.observable


def observability_matrix(sys: LtiSystem) -> np.ndarray:
    """Stacked [C; CA; ...; CA^{n-1}]."""
    blocks = []
    M = sys.C
    for _ in range(sys.n):
        blocks.append(M)
        M = M @ sys.A
    return np.vstack(blocks)


def validate(
    sys: LtiSystem,
    box: OutputBox,
    stability_threshold: float | None = None,
    observability_threshold: float | None = None,
    tols: Tolerances = DEFAULT_TOLS,
) -> ValidationReport:
    """Check the rejection rules: spectral radius and observability margin.

    Flags a system unstable when rho(A) >= stability_threshold and
    unobservable when the smallest singular value of the observability
    matrix falls below observability_threshold.
    """
    if stability_threshold is None:
        stability_threshold = tols.stability_threshold
    if observability_threshold is None:
        observability_threshold = tols.observability_threshold
    if box.q != sys.q:
        raise ValueError(f"box has {box.q} outputs but system has {sys.q}")
    rho = spectral_radius(sys.A)
    sigma_min = min_singular_value(observability_matrix(sys))
    return ValidationReport(
        spectral_radius=rho,
        min_obsv_singular_value=sigma_min,
        stable=bool(rho < stability_threshold),
        observable=bool(sigma_min >= observability_threshold),
    )


def gamma(box: OutputBox) -> float:
    """Largest asymmetry ratio of the box, max_j max(u_j/l_j, l_j/u_j) >= 1."""
    ratios = np.maximum(box.y_upper / box.y_lower, box.y_lower / box.y_upper)
    return float(np.max(ratios))


def dc_gain(sys: LtiSystem) -> np.ndarray:
    """Steady-state gain C (I - A)^{-1} B + D from the constant input to the output."""
    if not sys.has_input:
        raise ValueError("dc_gain requires a system with an input channel (B)")
    rho = spectral_radius(sys.A)
    if rho >= 1.0:
        raise ValueError(f"dc_gain requires spectral radius < 1, got {rho:.6g}")
    X = np.linalg.solve(np.eye(sys.n) - sys.A, sys.B)
    return sys.C @ X + sys.D


def shift_to_equilibrium(sys: LtiSystem, u) -> tuple[np.ndarray, np.ndarray]:
    """Equilibrium (x_eq, y_eq) for constant input u.

    x_eq = (I - A)^{-1} B u and y_eq = C x_eq + D u; the shifted state
    z = x - x_eq evolves autonomously with output y = C z + y_eq.
    """
    if not sys.has_input:
        raise ValueError("shift_to_equilibrium requires a system with an input channel (B)")
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if u.shape != (sys.m_in,):
        raise ValueError(f"u must have length {sys.m_in}, got shape {u.shape}")
    x_eq = np.linalg.solve(np.eye(sys.n) - sys.A, sys.B @ u)
    y_eq = sys.C @ x_eq + sys.D @ u
    return x_eq, y_eq


# ---------------------------------------------------------------------------
# JSON system description (consumed by the CLI)
# ---------------------------------------------------------------------------

def _matrix_from_json(obj, key, optional=False):
    if key not in obj:
        if optional:
            return None
        raise ValueError(f"key '{key}': missing")
    raw = obj[key]
    if not isinstance(raw, list) or not raw:
        raise ValueError(f"key '{key}': must be a non-empty array of arrays")
    if not all(isinstance(row, list) and row for row in raw):
        raise ValueError(f"key '{key}': every row must be a non-empty array")
    width = len(raw[0])
    if any(len(row) != width for row in raw):
        raise ValueError(f"key '{key}': ragged rows")
    try:
        M = np.array(raw, dtype=float)
    except (TypeError, ValueError):
        raise ValueError(f"key '{key}': entries must be numbers") from None
    if not np.all(np.isfinite(M)):
        raise ValueError(f"key '{key}': entries must be finite")
    return M


def _vector_from_json(obj, key):
    if key not in obj:
        raise ValueError(f"key '{key}': missing")
    raw = obj[key]
    if not isinstance(raw, list) or not raw:
        raise ValueError(f"key '{key}': must be a non-empty array of numbers")
    try:
        v = np.array(raw, dtype=float)
    except (TypeError, ValueError):
        raise ValueError(f"key '{key}': entries must be numbers") from None
    if v.ndim != 1:
        raise ValueError(f"key '{key}': must be a flat array")
    return v


def system_from_dict(obj: dict) -> tuple[LtiSystem, OutputBox, float | None]:
    """Build (system, box, epsilon) from the JSON description.

    Keys: "A" (n x n), optional "B" (n x m), "C" (q x n), optional "D"
    (q x m), "y_lower", "y_upper" (length q), optional "epsilon".
    """
    if not isinstance(obj, dict):
        raise ValueError("system description must be a JSON object")
    A = _matrix_from_json(obj, "A")
    B = _matrix_from_json(obj, "B", optional=True)
    C = _matrix_from_json(obj, "C")
    D = _matrix_from_json(obj, "D", optional=True)
    y_lower = _vector_from_json(obj, "y_lower")
    y_upper = _vector_from_json(obj, "y_upper")
    epsilon = obj.get("epsilon")
    if epsilon is not None:
        if not isinstance(epsilon, (int, float)) or isinstance(epsilon, bool):
            raise ValueError("key 'epsilon': must be a number")
        epsilon = float(epsilon)
    try:
        sys = LtiSystem(A=A, B=B, C=C, D=D)
    except ValueError as exc:
        raise ValueError(f"inconsistent system matrices: {exc}") from exc
    try:
        box = OutputBox(y_lower=y_lower, y_upper=y_upper)
    except ValueError as exc:
        raise ValueError(f"invalid constraint box: {exc}") from exc
    if box.q != sys.q:
        raise ValueError(
            f"key 'y_lower': length {box.q} does not match the {sys.q} output rows of 'C'"
        )
    return sys, box, epsilon


def load_system(path) -> tuple[LtiSystem, OutputBox, float | None]:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    return system_from_dict(obj)
