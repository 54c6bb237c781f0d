"""Solver configuration shared by the overlap and hull-measure drivers."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import ValidationError


@dataclass(frozen=True)
class SolverConfig:
    """Budgets and tolerances for the hull search.

    direction_samples: random witness directions drawn in the sampling phase.
    refine_steps: pattern-search iterations spent polishing the best direction.
    restarts: random see-saw starts per support-function evaluation.
    seed: master seed; every random draw derives from it deterministically.
    tol_ratio: two tangent ratios closer than this are considered tied.
    dims: optional subsystem dimensions; when set, inputs must match.
    normalize: optional positive constant the reported degree is divided by.
    """

    direction_samples: int = 4096
    refine_steps: int = 200
    restarts: int = 32
    seed: int = 0
    tol_ratio: float = 1e-6
    dims: tuple[int, ...] | None = None
    seesaw_tol: float = 1e-12
    seesaw_max_iters: int = 500
    normalize: float | None = None

    def __post_init__(self):
        for name in ("direction_samples", "refine_steps", "restarts", "seesaw_max_iters"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ValidationError(f"{name} must be an integer >= 1, got {value!r}")
        for name in ("tol_ratio", "seesaw_tol"):
            value = getattr(self, name)
            if not value > 0:
                raise ValidationError(f"{name} must be positive, got {value!r}")
        if self.normalize is not None and not self.normalize > 0:
            raise ValidationError(f"normalize must be positive, got {self.normalize!r}")
        if self.dims is not None:
            object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))

    def with_(self, **kwargs) -> "SolverConfig":
        return replace(self, **kwargs)
