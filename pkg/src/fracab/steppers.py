"""Time advancement: the classical two-step Adams-Bashforth update, its
Caputo-fractional counterpart with level-dependent weights, the first-step
bootstrap, and a generic two-level time loop over an abstract right-hand side.
"""

from collections.abc import Callable, Iterator
from dataclasses import dataclass

import numpy as np

from .mesh import FieldState, SpaceTimeGrid
from .weights import _check_alpha, delta_weights, gamma_fn

CLASSICAL_AB2 = "classical_ab2"
FRACTIONAL_AB2 = "fractional_ab2"

# Maps (solution vector at level n, level index n) -> F_n, same length.
RhsEvaluator = Callable[[np.ndarray, int], np.ndarray]


class InstabilityError(RuntimeError):
    """The advancing solution produced NaN/Inf entries at ``level``.

    This is the instability detector: blow-up terminates the run as a
    first-class outcome rather than being swallowed.
    """

    def __init__(self, level: int):
        super().__init__(f"non-finite solution entries at time level {level}")
        self.level = level


@dataclass(frozen=True)
class SchemeKind:
    """Which two-step update to run; alpha is fixed to 1 for the classical one."""

    tag: str
    alpha: float = 1.0

    def __post_init__(self):
        if self.tag not in (CLASSICAL_AB2, FRACTIONAL_AB2):
            raise ValueError(f"unknown scheme tag {self.tag!r}")
        if self.tag == CLASSICAL_AB2 and self.alpha != 1.0:
            raise ValueError("classical_ab2 fixes alpha = 1")
        _check_alpha(self.alpha)

    @staticmethod
    def classical() -> "SchemeKind":
        return SchemeKind(CLASSICAL_AB2, 1.0)

    @staticmethod
    def fractional(alpha: float) -> "SchemeKind":
        return SchemeKind(FRACTIONAL_AB2, alpha)


def _step_arrays(u_n, f_n, f_prev, h: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    u_n = np.asarray(u_n, dtype=float)
    f_n = np.asarray(f_n, dtype=float)
    f_prev = np.asarray(f_prev, dtype=float)
    if not (u_n.shape == f_n.shape == f_prev.shape):
        raise ValueError(
            f"length mismatch: u {u_n.shape}, F_n {f_n.shape}, F_prev {f_prev.shape}"
        )
    if not h > 0:
        raise ValueError(f"h must be positive, got {h}")
    for name, arr in (("u_n", u_n), ("F_n", f_n), ("F_prev", f_prev)):
        if not np.isfinite(arr).all():
            raise ValueError(f"non-finite input in {name}")
    return u_n, f_n, f_prev


def ab2_step(u_n, f_n, f_prev, h: float) -> np.ndarray:
    """u_n + h*(3/2 F_n - 1/2 F_{n-1}), elementwise."""
    u_n, f_n, f_prev = _step_arrays(u_n, f_n, f_prev, h)
    return u_n + h * (1.5 * f_n - 0.5 * f_prev)


def fab2_step(u_n, f_n, f_prev, h: float, alpha: float, n: int) -> np.ndarray:
    """u_n + (h^alpha/Gamma(alpha)) * (delta_n F_n - delta_n' F_{n-1}).

    The weight pair depends only on (alpha, n) and is computed once per call,
    shared by every entry of the vectors.  At alpha = 1 this is ab2_step.
    """
    u_n, f_n, f_prev = _step_arrays(u_n, f_n, f_prev, h)
    w = delta_weights(alpha, n)
    scale = h**alpha / gamma_fn(alpha)
    return u_n + scale * (w.delta * f_n - w.delta_prev * f_prev)


def bootstrap_step(u_0, f_0, h: float, scheme: SchemeKind) -> np.ndarray:
    """First step of a two-step run, built from the n = 0 update with
    F_prev := F_0.

    Classical: forward Euler.  Fractional: since delta_0 - delta_0' = 1/alpha,
    this equals u_0 + (h^alpha/Gamma(alpha+1)) F_0, the fractional Euler update.
    """
    if scheme.tag == CLASSICAL_AB2:
        u_0, f_0, _ = _step_arrays(u_0, f_0, f_0, h)
        return u_0 + h * f_0
    return fab2_step(u_0, f_0, f_0, h, scheme.alpha, 0)


def advance(
    ic,
    rhs: RhsEvaluator,
    grid: SpaceTimeGrid,
    scheme: SchemeKind,
    *,
    post_step: Callable[[np.ndarray, int], np.ndarray] | None = None,
) -> Iterator[FieldState]:
    """Yield FieldStates at levels 1..nt.

    Level 1 comes from the bootstrap, later levels from the two-step update.
    Only the two most recent levels (and one stored F) are ever held, so the
    memory footprint does not grow with nt.  ``post_step``, when given, is
    applied to each newly computed level (used to re-impose Dirichlet data).
    Raises :class:`InstabilityError` as soon as a level stops being finite;
    states yielded before that are valid.
    """
    u_prev = np.asarray(ic, dtype=float)
    if u_prev.shape != (grid.nx,):
        raise ValueError(f"initial condition must have length {grid.nx}, got {u_prev.shape}")
    if not np.isfinite(u_prev).all():
        raise ValueError("non-finite initial condition")

    f_prev = np.asarray(rhs(u_prev, 0), dtype=float)
    u_cur = bootstrap_step(u_prev, f_prev, grid.h, scheme)
    if post_step is not None:
        u_cur = np.asarray(post_step(u_cur, 1), dtype=float)
    if not np.isfinite(u_cur).all():
        raise InstabilityError(1)
    yield FieldState(u_cur.copy(), u_prev.copy(), 1)

    for n in range(1, grid.nt):
        f_n = np.asarray(rhs(u_cur, n), dtype=float)
        if not np.isfinite(f_n).all():
            # overflow in the RHS of a still-finite state is the same blow-up
            raise InstabilityError(n + 1)
        if scheme.tag == CLASSICAL_AB2:
            u_next = ab2_step(u_cur, f_n, f_prev, grid.h)
        else:
            u_next = fab2_step(u_cur, f_n, f_prev, grid.h, scheme.alpha, n)
        if post_step is not None:
            u_next = np.asarray(post_step(u_next, n + 1), dtype=float)
        if not np.isfinite(u_next).all():
            raise InstabilityError(n + 1)
        yield FieldState(u_next.copy(), u_cur.copy(), n + 1)
        u_prev, u_cur, f_prev = u_cur, u_next, f_n
