"""Spatial right-hand sides (forward-difference advection, centered-difference
diffusion) and Dirichlet boundary handling."""

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .mesh import SpaceTimeGrid

# Right-edge closures for the advection stencil.
COPY_INWARD = "copy_inward"
ZERO = "zero"


@dataclass(frozen=True)
class BoundarySpec:
    """Dirichlet data to re-impose after each time level.

    ``left``/``right`` may each be a callable t -> value, the string "zero"
    for homogeneous Dirichlet, or None to leave the node to the stencil
    ("copy_inward" on the right means the same: the advection edge closure
    owns that node).
    """

    left: Callable[[float], float] | str | None = None
    right: Callable[[float], float] | str | None = None


def advection_rhs(u, l: float, c: float, right_closure: str = COPY_INWARD) -> np.ndarray:
    """F_i = c*(u_{i+1} - u_i)/l, closed at the right edge per ``right_closure``
    (default: copy the last interior value inward)."""
    u = np.asarray(u, dtype=float)
    if u.ndim != 1 or u.size < 2:
        raise ValueError(f"advection_rhs needs a vector of length >= 2, got shape {u.shape}")
    if not l > 0:
        raise ValueError(f"l must be positive, got {l}")
    if right_closure not in (COPY_INWARD, ZERO):
        raise ValueError(f"unknown right_closure {right_closure!r}")
    f = np.empty_like(u)
    f[:-1] = c * (u[1:] - u[:-1]) / l
    f[-1] = f[-2] if right_closure == COPY_INWARD else 0.0
    return f


def diffusion_rhs(u, l: float, d: float) -> np.ndarray:
    """F_i = d*(u_{i+1} - 2u_i + u_{i-1})/l^2 at interior nodes, 0 at the two
    boundary nodes (their values are re-imposed after each step)."""
    u = np.asarray(u, dtype=float)
    if u.ndim != 1 or u.size < 3:
        raise ValueError(f"diffusion_rhs needs a vector of length >= 3, got shape {u.shape}")
    if not l > 0:
        raise ValueError(f"l must be positive, got {l}")
    f = np.zeros_like(u)
    f[1:-1] = d * (u[2:] - 2.0 * u[1:-1] + u[:-2]) / (l * l)
    return f


def apply_boundary(u, t: float, bc: BoundarySpec, grid: SpaceTimeGrid) -> np.ndarray:
    """Overwrite the boundary entries of ``u`` with the Dirichlet values at
    time ``t``; interior entries pass through untouched.  Returns a new array."""
    u = np.asarray(u, dtype=float)
    if u.shape != (grid.nx,):
        raise ValueError(f"u must have length {grid.nx}, got {u.shape}")
    out = u.copy()
    if callable(bc.left):
        out[0] = bc.left(t)
    elif bc.left == ZERO:
        out[0] = 0.0
    if callable(bc.right):
        out[-1] = bc.right(t)
    elif bc.right == ZERO:
        out[-1] = 0.0
    return out
