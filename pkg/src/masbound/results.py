"""Result records shared by the two bound methods."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class BoundReport:
    """Upper bound on the admissibility index, with method diagnostics.

    method is "power-series" or "lyapunov"; regime is "unforced" or
    "forced".  diagnostics carries method-specific extras (for the
    power-series method the stopping step, for the level-set method
    sigma, r1, r2 and the Lyapunov matrix).
    """

    method: str
    regime: str
    m: int
    iterations: int | None = None
    diagnostics: dict = field(default_factory=dict)
