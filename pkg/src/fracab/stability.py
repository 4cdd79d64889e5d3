"""Stability margins for the two schemes, an empirical Fourier amplification
probe for their two-term recurrences, and the truncation-residual bound.

The margins implement the derivation-chain inequalities: 3hc/(4l) < 1 for the
classical advection scheme and 2 h^a d delta_n / (l^2 Gamma(a)) < 1 for the
fractional diffusion scheme.  Both are heuristic criteria (the fractional
induction argument behind the latter needs delta_n = delta_n', which is false),
so the probe below is the operative assessment: it iterates the actual
amplification recurrence and reports the observed growth.
"""

import math
from dataclasses import dataclass

import numpy as np

from .steppers import CLASSICAL_AB2, SchemeKind
from .weights import _check_alpha, delta_weight_table, gamma_fn

# Above this ratio a probe trace stops iterating; the mode has clearly blown up.
_PROBE_BLOWUP_CAP = 1e100


@dataclass(frozen=True)
class StabilityMargin:
    """Dimensionless margin; the criterion calls the scheme stable below 1.
    For the fractional scheme the weights grow with the level, so the margin
    is the maximum over the run and ``n_at_max`` records where it peaked."""

    value: float
    kind: str
    n_at_max: int | None = None


@dataclass
class AmplificationTrace:
    """|u_hat_n| / |u_hat_0| along the two-term recurrence for one Fourier
    angle theta = f*l.  a1/a2 are the first-step coefficient magnitudes
    (the classical coefficients are complex; magnitudes are recorded)."""

    theta: float
    ratios: np.ndarray
    a1: float
    a2: float


def classical_margin(h: float, l: float, c: float) -> StabilityMargin:
    """3hc/(4l); below 1 is the stable regime of the advection criterion."""
    for name, v in (("h", h), ("l", l), ("c", c)):
        if not v > 0:
            raise ValueError(f"{name} must be positive, got {v}")
    return StabilityMargin(3.0 * h * c / (4.0 * l), "classical")


def fractional_margin(h: float, l: float, d: float, alpha: float, n_max: int) -> StabilityMargin:
    """max over n <= n_max of 2 h^a d delta_n / (l^2 Gamma(a))."""
    for name, v in (("h", h), ("l", l)):
        if not v > 0:
            raise ValueError(f"{name} must be positive, got {v}")
    if d < 0:
        raise ValueError(f"d must be nonnegative, got {d}")
    _check_alpha(alpha)
    if n_max < 0:
        raise ValueError(f"n_max must be nonnegative, got {n_max}")
    delta, _ = delta_weight_table(alpha, n_max)
    values = 2.0 * h**alpha * d * delta / (l * l * gamma_fn(alpha))
    n_at_max = int(np.argmax(values))
    return StabilityMargin(float(values[n_at_max]), "fractional", n_at_max)


def amplification_probe(
    scheme: SchemeKind,
    h: float,
    l: float,
    coefficient: float,
    theta_samples: int,
    n_steps: int,
) -> list[AmplificationTrace]:
    """Iterate u_hat_{n+1} = A1(theta, n) u_hat_n + A2(theta, n) u_hat_{n-1}
    for theta sampled uniformly in (0, pi], recording |u_hat_n|/|u_hat_0|.

    ``coefficient`` is the advection speed c (classical) or the diffusivity d
    (fractional).  Fractional: A1 = 1 - g delta_n, A2 = g delta_n' with
    g = 2 h^a d (1 - cos theta)/(l^2 Gamma(a)).  Classical: the complex pair
    A1 = 1 - (3hc/2l)(1 - e^{i theta}), A2 = (hc/2l)(1 - e^{i theta}).
    u_hat_0 = 1 and u_hat_1 comes from the bootstrap rule (F_prev := F_0), so
    u_hat_1 = (A1(theta, 0) + A2(theta, 0)).  A trace stops early once its
    ratio passes 1e100; the mode has blown up and further products overflow.
    """
    for name, v in (("h", h), ("l", l)):
        if not v > 0:
            raise ValueError(f"{name} must be positive, got {v}")
    if coefficient < 0:
        raise ValueError(f"coefficient must be nonnegative, got {coefficient}")
    if theta_samples < 1:
        raise ValueError(f"theta_samples must be at least 1, got {theta_samples}")
    if n_steps < 2:
        raise ValueError(f"n_steps must be at least 2, got {n_steps}")

    if scheme.tag == CLASSICAL_AB2:
        nu = h * coefficient / l
    else:
        delta, delta_prev = delta_weight_table(scheme.alpha, n_steps - 1)
        base = 2.0 * h**scheme.alpha * coefficient / (l * l * gamma_fn(scheme.alpha))

    traces = []
    for k in range(1, theta_samples + 1):
        theta = math.pi * k / theta_samples
        if scheme.tag == CLASSICAL_AB2:
            z = nu * (1.0 - complex(math.cos(theta), math.sin(theta)))
            a1 = np.full(n_steps, 1.0 - 1.5 * z)
            a2 = np.full(n_steps, 0.5 * z)
        else:
            g = base * (1.0 - math.cos(theta))
            a1 = 1.0 - g * delta
            a2 = g * delta_prev

        u_prev = 1.0 + 0.0j
        u_cur = (a1[0] + a2[0]) * u_prev
        ratios = [1.0, abs(u_cur)]
        for n in range(1, n_steps):
            u_next = a1[n] * u_cur + a2[n] * u_prev
            r = abs(u_next)
            ratios.append(r)
            if not math.isfinite(r) or r > _PROBE_BLOWUP_CAP:
                break
            u_prev, u_cur = u_cur, u_next
        traces.append(
            AmplificationTrace(theta, np.array(ratios), float(abs(a1[0])), float(abs(a2[0])))
        )
    return traces


def residual_bound(h: float, alpha: float, n: int, m2: float) -> float:
    """h^(2+a) * m2 * ((n+1)^a + n^a) / (8 Gamma(a+1)).

    ``m2`` bounds |F''| over the window (supplied, or estimated from the
    trajectory with :func:`max_second_time_difference`).
    """
    if not h > 0:
        raise ValueError(f"h must be positive, got {h}")
    _check_alpha(alpha)
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if m2 < 0:
        raise ValueError(f"m2 must be nonnegative, got {m2}")
    return h ** (2.0 + alpha) * m2 * ((n + 1.0) ** alpha + float(n) ** alpha) / (
        8.0 * gamma_fn(alpha + 1.0)
    )


def max_second_time_difference(f_levels, h: float) -> float:
    """max over nodes and interior levels of |F_{k+1} - 2F_k + F_{k-1}| / h^2,
    the central-difference estimate of max |F''| along a trajectory."""
    if not h > 0:
        raise ValueError(f"h must be positive, got {h}")
    f = [np.asarray(level, dtype=float) for level in f_levels]
    if len(f) < 3:
        raise ValueError(f"need at least 3 levels of F, got {len(f)}")
    worst = 0.0
    for a, b, c in zip(f[:-2], f[1:-1], f[2:]):
        worst = max(worst, float(np.max(np.abs(c - 2.0 * b + a))))
    return worst / (h * h)
