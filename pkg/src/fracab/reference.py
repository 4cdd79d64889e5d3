"""Independent oracles: exact advection solutions, the Mittag-Leffler function,
the separable exact mode of the fractional diffusion equation, and an L1
full-history Caputo integrator used to cross-validate the two-step scheme.
"""

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from scipy import special

from .weights import gamma_fn

_ML_MAX_TERMS = 10_000
_ML_REL_TOL = 1e-16
_ML_Z_LIMIT = 50.0


@dataclass(frozen=True)
class OracleSolution:
    """Exact solution u(x, t) with metadata.  The evaluator accepts scalar or
    array x together with a scalar t and is finite on the declared domain."""

    name: str
    domain: str
    func: Callable

    def __call__(self, x, t: float):
        return self.func(x, t)


def exact_advection(ic_kind: str, c: float) -> OracleSolution:
    """u(x, t) = exp(x + ct) or cos(x + ct): exact solutions of u_t = c u_x
    with initial data exp(x)/cos(x) and matching left Dirichlet data."""
    if not c > 0:
        raise ValueError(f"c must be positive, got {c}")
    if ic_kind == "exp":
        return OracleSolution(
            "advection-exp", "x real, t >= 0", lambda x, t: np.exp(np.asarray(x, dtype=float) + c * t)
        )
    if ic_kind == "cos":
        return OracleSolution(
            "advection-cos", "x real, t >= 0", lambda x, t: np.cos(np.asarray(x, dtype=float) + c * t)
        )
    raise ValueError(f"unknown ic_kind {ic_kind!r} (expected 'exp' or 'cos')")


def mittag_leffler(alpha: float, z: float) -> float:
    """E_alpha(z) = sum_j z^j / Gamma(alpha*j + 1) by direct series.

    Terms are evaluated in log space, and summation stops once a term falls
    below 1e-16 of the partial sum.  Arguments are guarded to |z| <= 50, the
    range where the series is meaningful at working precision; failure to
    converge within 10000 terms (or a term overflowing) raises RuntimeError.
    Any alpha > 0 is accepted: E_1 = exp, E_2(-z^2) = cos(z).
    """
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if abs(z) > _ML_Z_LIMIT:
        raise ValueError(f"|z| must not exceed {_ML_Z_LIMIT}, got {z}")
    if z == 0.0:
        return 1.0
    log_abs_z = math.log(abs(z))
    total = 0.0
    for j in range(_ML_MAX_TERMS):
        log_term = j * log_abs_z - float(special.gammaln(alpha * j + 1.0))
        if log_term > 700.0:
            raise RuntimeError(
                f"Mittag-Leffler series term overflow at j={j} (alpha={alpha}, z={z})"
            )
        term = math.exp(log_term)
        if z < 0.0 and j % 2 == 1:
            term = -term
        total += term
        if abs(term) <= _ML_REL_TOL * abs(total):
            return total
    raise RuntimeError(
        f"Mittag-Leffler series did not converge in {_ML_MAX_TERMS} terms "
        f"(alpha={alpha}, z={z})"
    )


def exact_fractional_diffusion_mode(alpha: float, d: float, k: float) -> OracleSolution:
    """u(x, t) = sin(kx) * E_alpha(-d k^2 t^alpha): the separable exact
    solution of D_t^alpha u = d u_xx with u(x, 0) = sin(kx) and zero Dirichlet
    data at x in {0, pi/k}."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    if d < 0:
        raise ValueError(f"d must be nonnegative, got {d}")
    if not k > 0:
        raise ValueError(f"k must be positive, got {k}")

    def func(x, t: float):
        decay = mittag_leffler(alpha, -d * k * k * t**alpha)
        return np.sin(k * np.asarray(x, dtype=float)) * decay

    return OracleSolution(
        f"fractional-diffusion-mode-k{k:g}", f"x in [0, {math.pi / k:g}], t >= 0", func
    )


def l1_fractional_ode_solve(lam: float, alpha: float, u0: float, h: float, nt: int) -> np.ndarray:
    """Solve D^alpha u = lam*u with the standard full-history L1 scheme.

    Uses the weights b_j = (j+1)^(1-alpha) - j^(1-alpha) and the implicit
    update; returns u at levels 0..nt.  Exists purely as an independent
    cross-check of the fractional time discretization (O(n^2) work, scalar
    only), so it deliberately keeps the whole history the two-step scheme
    avoids.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if not h > 0:
        raise ValueError(f"h must be positive, got {h}")
    if nt < 1:
        raise ValueError(f"nt must be at least 1, got {nt}")
    j = np.arange(nt + 1, dtype=float)
    b = j[1:] ** (1.0 - alpha) - j[:-1] ** (1.0 - alpha)
    mu = gamma_fn(2.0 - alpha) * h**alpha
    denom = 1.0 - mu * lam
    u = np.empty(nt + 1)
    u[0] = float(u0)
    for n in range(1, nt + 1):
        history = float(np.dot(b[1:n][::-1], np.diff(u[:n]))) if n > 1 else 0.0
        u[n] = (u[n - 1] - history) / denom
    return u
