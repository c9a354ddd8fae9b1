"""Uniform 1D sample axes."""

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

__all__ = ["Grid1D"]


@dataclass(frozen=True)
class Grid1D:
    """Uniform, strictly increasing sample axis.

    Used for the log-radius coordinate, its conjugate momentum and the two
    phase-space axes of a Wigner grid.

    Parameters
    ----------
    min : float
        First sample point.
    max : float
        Last sample point; must exceed ``min``.
    n_points : int
        Number of samples, at least 2.
    """

    min: float
    max: float
    n_points: int

    def __post_init__(self):
        if self.n_points < 2:
            raise ValidationError("Grid1D needs n_points >= 2")
        if not (np.isfinite(self.min) and np.isfinite(self.max)):
            raise ValidationError("Grid1D bounds must be finite")
        if self.max <= self.min:
            raise ValidationError("Grid1D needs max > min")
        object.__setattr__(
            self, "_points", np.linspace(self.min, self.max, self.n_points)
        )

    @property
    def spacing(self) -> float:
        return (self.max - self.min) / (self.n_points - 1)

    @property
    def points(self) -> np.ndarray:
        """Sample locations as a read-only array."""
        pts = self._points
        pts.flags.writeable = False
        return pts

    def __len__(self) -> int:
        return self.n_points
