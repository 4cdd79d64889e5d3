"""Uniform space/time grids and the two-level solution state."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SpaceTimeGrid:
    """Node-based uniform mesh: ``nx`` nodes spanning [x_min, x_max] and ``nt``
    time steps of size ``h`` reaching ``t_end``.  Both endpoints are nodes."""

    x_min: float
    x_max: float
    nx: int
    l: float
    t_end: float
    nt: int
    h: float

    def node(self, i: int) -> float:
        return self.x_min + i * self.l

    def time(self, n: int) -> float:
        return n * self.h

    def nodes(self) -> np.ndarray:
        return self.x_min + self.l * np.arange(self.nx)

    def times(self) -> np.ndarray:
        return self.h * np.arange(self.nt + 1)


def make_uniform_grid(x_min: float, x_max: float, nx: int, t_end: float, nt: int) -> SpaceTimeGrid:
    """Build a uniform grid with l = (x_max - x_min)/(nx - 1) and h = t_end/nt."""
    if not x_max > x_min:
        raise ValueError(f"x_max must exceed x_min, got [{x_min}, {x_max}]")
    if nx < 3:
        raise ValueError(f"nx must be at least 3, got {nx}")
    if not t_end > 0:
        raise ValueError(f"t_end must be positive, got {t_end}")
    if nt < 2:
        raise ValueError(f"nt must be at least 2, got {nt}")
    l = (x_max - x_min) / (nx - 1)
    h = t_end / nt
    return SpaceTimeGrid(float(x_min), float(x_max), int(nx), l, float(t_end), int(nt), h)


@dataclass
class FieldState:
    """Solution vector at time level ``level`` plus the level below it.

    Two levels are all any scheme in this package ever needs, so the memory
    footprint is independent of how far the run has advanced.
    """

    current: np.ndarray
    previous: np.ndarray
    level: int

    def __post_init__(self):
        self.current = np.asarray(self.current, dtype=float)
        self.previous = np.asarray(self.previous, dtype=float)
        if self.current.shape != self.previous.shape:
            raise ValueError("current and previous must have the same shape")
        if self.level < 0:
            raise ValueError(f"level must be nonnegative, got {self.level}")

    @property
    def is_finite(self) -> bool:
        """False as soon as any entry is NaN or infinite (hard error state)."""
        return bool(np.isfinite(self.current).all() and np.isfinite(self.previous).all())
