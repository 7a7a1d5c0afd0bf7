from __future__ import annotations

from dataclasses import dataclass, field, replace

from .boundary import DEFAULT_N, MAX_N, SNAP_TOL
from .errors import InvalidInput
from .poly import GCD_TOL


def _default_tolerances():
    return {
        "membership": 1e-6,
        "factorization": 1e-6,
        "mate": 1e-8,
        "gcdTol": GCD_TOL,
        "snapTol": SNAP_TOL,
    }


@dataclass(frozen=True)
class RunConfig:
    gridSize: int = DEFAULT_N
    tolerances: dict = field(default_factory=_default_tolerances)
    adaptive: bool = False
    outputPath: str | None = None
    loosen: float | None = None  # a user --tol; thresholds become max(default, loosen)

    def __post_init__(self):
        n = self.gridSize
        if not isinstance(n, int) or n < 64 or n > MAX_N or n & (n - 1):
            raise InvalidInput(f"grid size must be a power of two in [64, {MAX_N}], got {n}")
        for name, val in self.tolerances.items():
            if not val > 0:
                raise InvalidInput(f"tolerance {name} must be positive")
        if self.loosen is not None and not self.loosen > 0:
            raise InvalidInput("--tol must be positive")

    def with_tol(self, tol):
        tols = dict(self.tolerances)
        for key in ("membership", "factorization", "mate"):
            tols[key] = max(tols[key], tol)
        return replace(self, tolerances=tols, loosen=tol)

    def threshold(self, default):
        """Acceptance threshold: the stated default unless a looser --tol was given."""
        return default if self.loosen is None else max(default, self.loosen)
