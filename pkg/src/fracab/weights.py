"""Gamma evaluation and the level-dependent weight pair of the fractional
two-step scheme, plus a quadrature oracle that recomputes the pair from the
defining kernel-moment integrals instead of the closed-form algebra.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special


@dataclass(frozen=True)
class StepWeights:
    """Coefficients of the two-step update at level ``n``.

    ``delta`` multiplies F_n; ``delta_prev`` multiplies F_{n-1} (the stepper
    applies the minus sign).  At alpha = 1 the pair is (3/2, 1/2) for every n.
    """

    delta: float
    delta_prev: float
    n: int
    alpha: float


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")


def gamma_fn(x: float) -> float:
    """Gamma(x) for x > 0."""
    if not x > 0:
        raise ValueError(f"gamma_fn requires x > 0, got {x}")
    return float(special.gamma(x))


def _forward_power_difference(n: float, p: float) -> float:
    # (n+1)**p - n**p, cancellation-safe for large n
    if n == 0:
        return 1.0
    return n**p * math.expm1(p * math.log1p(1.0 / n))


def delta_weights(alpha: float, n: int) -> StepWeights:
    """Weight pair of the fractional two-step update:

        delta      = (2(n+1)^a - n^a)/a + (n^{a+1} - (n+1)^{a+1})/(a+1)
        delta_prev = (n+1)^a/a          + (n^{a+1} - (n+1)^{a+1})/(a+1)

    evaluated in a regrouped form that avoids differencing large powers, so
    the identity delta - delta_prev = ((n+1)^a - n^a)/a holds to rounding for
    any n.  n = 0 is well defined (0^a = 0) and feeds the bootstrap step.
    """
    _check_alpha(alpha)
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    a_step = _forward_power_difference(n, alpha)
    b_step = _forward_power_difference(n, alpha + 1.0)
    delta_prev = (n + 1.0) ** alpha / alpha - b_step / (alpha + 1.0)
    delta = delta_prev + a_step / alpha
    return StepWeights(delta, delta_prev, int(n), float(alpha))


def delta_weight_table(alpha: float, n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized delta_weights: (delta, delta_prev) arrays for n = 0..n_max."""
    _check_alpha(alpha)
    if n_max < 0:
        raise ValueError(f"n_max must be nonnegative, got {n_max}")
    n = np.arange(n_max + 1, dtype=float)
    a_step = np.ones(n_max + 1)
    b_step = np.ones(n_max + 1)
    pos = n > 0
    npos = n[pos]
    a_step[pos] = npos**alpha * np.expm1(alpha * np.log1p(1.0 / npos))
    b_step[pos] = npos ** (alpha + 1.0) * np.expm1((alpha + 1.0) * np.log1p(1.0 / npos))
    delta_prev = (n + 1.0) ** alpha / alpha - b_step / (alpha + 1.0)
    delta = delta_prev + a_step / alpha
    return delta, delta_prev


def _singular_moment(b: float, c0: float, c1: float, alpha: float, quad_tol: float) -> float:
    """integral over [0, b] of (b - t)^(alpha-1) * (c0 + c1*t) dt.

    Substituting y = b - t moves the weak singularity to the origin, where it
    is handed to QAWS as the algebraic weight y^(alpha-1).
    """
    if b <= 0.0:
        return 0.0
    result = integrate.quad(
        lambda y: c0 + c1 * (b - y),
        0.0,
        b,
        weight="alg",
        wvar=(alpha - 1.0, 0.0),
        epsabs=quad_tol,
        epsrel=quad_tol,
        limit=200,
        full_output=True,
    )
    if len(result) > 3:
        raise RuntimeError(f"kernel moment quadrature did not converge: {result[3]}")
    return float(result[0])


def kernel_moment_oracle(alpha: float, n: int, quad_tol: float) -> StepWeights:
    """Recompute the weight pair by adaptive quadrature, independently of the
    closed forms in :func:`delta_weights`.

    With h = 1 and t_j = j, the update coefficient of F_n is the difference of
    the memory-kernel moments of the linear basis function t - (n-1), taken
    against (n+1-t)^(alpha-1) on [0, n+1] and (n-t)^(alpha-1) on [0, n]; the
    coefficient of F_{n-1} uses the basis function t - n.
    """
    _check_alpha(alpha)
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if not quad_tol > 0:
        raise ValueError(f"quad_tol must be positive, got {quad_tol}")
    c0_n = 1.0 - n
    c0_prev = -float(n)
    delta = _singular_moment(n + 1.0, c0_n, 1.0, alpha, quad_tol) - _singular_moment(
        float(n), c0_n, 1.0, alpha, quad_tol
    )
    delta_prev = _singular_moment(n + 1.0, c0_prev, 1.0, alpha, quad_tol) - _singular_moment(
        float(n), c0_prev, 1.0, alpha, quad_tol
    )
    return StepWeights(delta, delta_prev, int(n), float(alpha))
