"""Experiment front end: flat key=value configs, simulation drivers against
the exact-solution oracles, and CSV emission.

Subcommands:
    run <config>                 one simulation, CSV + report
    converge <config> --levels N joint space/time refinement study
    sweep <config> --margins a,b rescale h to each margin, probe + full run
    check <config>               stability margin and residual bound only

Exit codes: 0 success, 1 validation error, 2 instability halt (the run still
writes its partial CSV and report).
"""

import argparse
import math
import sys
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .mesh import make_uniform_grid
from .reference import exact_advection, exact_fractional_diffusion_mode, mittag_leffler
from .spatial import BoundarySpec, advection_rhs, apply_boundary, diffusion_rhs
from .stability import (
    StabilityMargin,
    amplification_probe,
    classical_margin,
    fractional_margin,
    max_second_time_difference,
    residual_bound,
)
from .steppers import InstabilityError, SchemeKind, advance
from .weights import delta_weight_table, gamma_fn

PROBLEMS = ("advection", "fractional_diffusion", "ode_caputo")
IC_KINDS = ("exp", "cos", "sin", "zero")

_SWEEP_THETA_SAMPLES = 64


class ConfigError(ValueError):
    """Invalid configuration text or value combination."""


@dataclass
class RunConfig:
    problem: str
    x_min: float
    x_max: float
    nx: int
    t_end: float
    nt: int
    alpha: float = 1.0
    c: float | None = None
    d: float | None = None
    ic: str = "exp"
    output_path: str = "out.csv"
    emit_exact: bool = True


@dataclass
class RunReport:
    """Outcome of one simulation; produced even when the run halts unstable."""

    max_abs_error_final: float | None
    error_by_level: list[float]
    stability_margin: StabilityMargin
    residual_bound_final: float
    halted_unstable_at: int | None
    notes: list[str]


@dataclass(frozen=True)
class ConvergenceRow:
    level: int
    h: float
    l: float
    max_abs_error: float | None
    ratio: float | None  # previous error / this error; None when not applicable
    halted_level: int | None


@dataclass(frozen=True)
class SweepRow:
    margin: float
    h: float
    max_amplification: float
    halted_level: int | None


def _parse_bool(text: str) -> bool:
    lowered = text.lower()
    if lowered in ("true", "1", "yes", "on"):
        return True
    if lowered in ("false", "0", "no", "off"):
        return False
    raise ValueError("expected a boolean")


_KEY_PARSERS = {
    "problem": str,
    "alpha": float,
    "c": float,
    "d": float,
    "ic": str,
    "x_min": float,
    "x_max": float,
    "nx": int,
    "t_end": float,
    "nt": int,
    "output_path": str,
    "emit_exact": _parse_bool,
}

_BASE_REQUIRED = ("problem", "x_min", "x_max", "nx", "t_end", "nt")


def _required_keys(problem: str | None) -> tuple[str, ...]:
    extra = {"advection": ("c",), "fractional_diffusion": ("d",)}.get(problem or "", ())
    return _BASE_REQUIRED + extra


def _validate_config(cfg: RunConfig) -> None:
    if cfg.problem not in PROBLEMS:
        raise ConfigError(f"problem must be one of {PROBLEMS}, got {cfg.problem!r}")
    if not cfg.x_max > cfg.x_min:
        raise ConfigError(f"x_max must exceed x_min, got [{cfg.x_min}, {cfg.x_max}]")
    if cfg.nx < 3:
        raise ConfigError(f"nx must be at least 3, got {cfg.nx}")
    if not cfg.t_end > 0:
        raise ConfigError(f"t_end must be positive, got {cfg.t_end}")
    if cfg.nt < 2:
        raise ConfigError(f"nt must be at least 2, got {cfg.nt}")
    if not 0.0 < cfg.alpha <= 1.0:
        raise ConfigError(f"alpha must lie in (0, 1], got {cfg.alpha}")
    if cfg.ic not in IC_KINDS:
        raise ConfigError(f"ic must be one of {IC_KINDS}, got {cfg.ic!r}")
    if cfg.problem == "advection":
        if cfg.c is None or not cfg.c > 0:
            raise ConfigError(f"advection requires c > 0, got {cfg.c}")
        if cfg.alpha != 1.0:
            raise ConfigError("advection is the integer-order scheme; alpha must be 1")
        if cfg.ic not in ("exp", "cos"):
            raise ConfigError(f"advection supports ic in ('exp', 'cos'), got {cfg.ic!r}")
    elif cfg.problem == "fractional_diffusion":
        if cfg.d is None or cfg.d < 0:
            raise ConfigError(f"fractional_diffusion requires d >= 0, got {cfg.d}")
        if cfg.ic not in ("sin", "zero"):
            raise ConfigError(
                f"fractional_diffusion supports ic in ('sin', 'zero'), got {cfg.ic!r}"
            )


def parse_config(source: str) -> RunConfig:
    """Parse flat ``key = value`` text ('#' starts a comment) into a RunConfig.

    Unknown keys, duplicates and unparsable values report their line number;
    missing required keys are reported by name.
    """
    values: dict = {}
    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _KEY_PARSERS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            values[key] = _KEY_PARSERS[key](value)
        except ValueError as exc:
            raise ConfigError(
                f"line {lineno}: bad value for {key!r}: {value!r} ({exc})"
            ) from None
    missing = [k for k in _required_keys(values.get("problem")) if k not in values]
    if missing:
        raise ConfigError(f"missing required key(s): {', '.join(missing)}")
    cfg = RunConfig(**values)
    _validate_config(cfg)
    return cfg


def _initial_profile(cfg: RunConfig, xs: np.ndarray) -> np.ndarray:
    if cfg.ic == "exp":
        return np.exp(xs)
    if cfg.ic == "cos":
        return np.cos(xs)
    if cfg.ic == "sin":
        k = math.pi / (cfg.x_max - cfg.x_min)
        return np.sin(k * (xs - cfg.x_min))
    return np.zeros_like(xs)


def _build_problem(cfg: RunConfig):
    """Assemble grid, scheme, RHS, boundary spec, exact evaluator and margin."""
    grid = make_uniform_grid(cfg.x_min, cfg.x_max, cfg.nx, cfg.t_end, cfg.nt)
    notes: list[str] = []

    if cfg.problem == "advection":
        c = float(cfg.c)
        scheme = SchemeKind.classical()
        rhs = lambda u, n: advection_rhs(u, grid.l, c)
        oracle = exact_advection(cfg.ic, c)
        bc = BoundarySpec(left=lambda t: float(oracle(cfg.x_min, t)), right=None)
        exact_eval = oracle.func
        margin = classical_margin(grid.h, grid.l, c)
        notes.append("advection right-edge closure: copy_inward")
        notes.append(
            f"classical margin 3hc/(4l) = {margin.value:.6g}; "
            f"equivalent mesh-ratio form: h/l < 4/(3c) = {4.0 / (3.0 * c):.6g}"
        )
    elif cfg.problem == "fractional_diffusion":
        d = float(cfg.d)
        scheme = SchemeKind.fractional(cfg.alpha)
        rhs = lambda u, n: diffusion_rhs(u, grid.l, d)
        bc = BoundarySpec(left="zero", right="zero")
        if cfg.ic == "sin":
            k = math.pi / (cfg.x_max - cfg.x_min)
            mode = exact_fractional_diffusion_mode(cfg.alpha, d, k)
            exact_eval = lambda x, t: mode(np.asarray(x, dtype=float) - cfg.x_min, t)
        else:
            exact_eval = lambda x, t: np.zeros_like(np.asarray(x, dtype=float))
        margin = fractional_margin(grid.h, grid.l, d, cfg.alpha, grid.nt)
    else:  # ode_caputo: D^alpha u = -u at every node, no spatial coupling
        scheme = SchemeKind.fractional(cfg.alpha)
        rhs = lambda u, n: -u
        bc = None
        profile = lambda x: _initial_profile(cfg, np.asarray(x, dtype=float))
        exact_eval = lambda x, t: profile(x) * mittag_leffler(cfg.alpha, -(t**cfg.alpha))
        delta, _ = delta_weight_table(cfg.alpha, grid.nt)
        values = grid.h**cfg.alpha * delta / gamma_fn(cfg.alpha)
        n_at_max = int(np.argmax(values))
        margin = StabilityMargin(float(values[n_at_max]), "fractional", n_at_max)
        notes.append("ode margin is max_n h^a delta_n / Gamma(a) (update-coefficient size)")

    return grid, scheme, rhs, bc, exact_eval, margin, notes


class _RhsRecorder:
    """Wrap an RHS evaluator, tracking max |second time-difference of F|/h^2."""

    def __init__(self, rhs, h: float):
        self._rhs = rhs
        self._h = h
        self._window: list[np.ndarray] = []
        self.m2_estimate = 0.0

    def __call__(self, u, n: int) -> np.ndarray:
        f = np.asarray(self._rhs(u, n), dtype=float)
        self._window.append(f)
        if len(self._window) > 3:
            self._window.pop(0)
        if len(self._window) == 3 and all(np.isfinite(g).all() for g in self._window):
            self.m2_estimate = max(
                self.m2_estimate, max_second_time_difference(self._window, self._h)
            )
        return f


def _format_value(v: float) -> str:
    return repr(float(v))


def _write_csv(path: str, rows: list[tuple], emit_exact: bool) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("x,t,u_numeric,u_exact,abs_err\n")
        for x, t, u, exact in rows:
            if emit_exact:
                err = abs(u - exact)
                tail = f"{_format_value(exact)},{_format_value(err)}"
            else:
                tail = ","
            fh.write(f"{_format_value(x)},{_format_value(t)},{_format_value(u)},{tail}\n")


def run_simulation(cfg: RunConfig) -> RunReport:
    """Assemble the configured problem, advance it, compare against the exact
    oracle, and write the CSV (levels sampled about every nt/50 steps).

    A stability margin at or above 1 warns but does not refuse; an unstable
    blow-up is recorded in the report (partial CSV still written) rather than
    raised.
    """
    _validate_config(cfg)
    grid, scheme, rhs, bc, exact_eval, margin, notes = _build_problem(cfg)
    if margin.value >= 1.0:
        message = f"stability margin {margin.value:.6g} >= 1; run may blow up"
        warnings.warn(message, stacklevel=2)
        notes.append(message)

    xs = grid.nodes()
    u0 = _initial_profile(cfg, xs)
    if bc is not None:
        u0 = apply_boundary(u0, 0.0, bc, grid)

    recorder = _RhsRecorder(rhs, grid.h)
    post = None
    if bc is not None:
        post = lambda u, n: apply_boundary(u, grid.time(n), bc, grid)

    stride = max(1, grid.nt // 50)
    sampled = set(range(0, grid.nt + 1, stride))
    sampled.add(grid.nt)

    rows: list[tuple] = []
    errors: list[float] = []
    halted: int | None = None

    def record(level: int, u: np.ndarray) -> None:
        t = grid.time(level)
        exact = None
        if cfg.emit_exact:
            exact = np.asarray(exact_eval(xs, t), dtype=float)
            errors.append(float(np.max(np.abs(u - exact))))
        if level in sampled:
            for i in range(grid.nx):
                rows.append((xs[i], t, u[i], exact[i] if exact is not None else None))

    record(0, u0)
    try:
        for state in advance(u0, recorder, grid, scheme, post_step=post):
            record(state.level, state.current)
    except InstabilityError as exc:
        halted = exc.level
        notes.append(f"instability halt at level {exc.level}")

    last_step_index = max(grid.nt - 1, 0) if halted is None else max(halted - 1, 0)
    bound = residual_bound(grid.h, scheme.alpha, last_step_index, recorder.m2_estimate)

    if cfg.output_path:
        _write_csv(cfg.output_path, rows, cfg.emit_exact)

    final_error = errors[-1] if (errors and cfg.emit_exact) else None
    return RunReport(final_error, errors, margin, bound, halted, notes)


def convergence_study(cfg: RunConfig, levels: int) -> list[ConvergenceRow]:
    """Halve h and l together ``levels`` times from the base config, recording
    the final-time max error and pairwise error ratios (previous/current)."""
    if levels < 3:
        raise ConfigError(f"levels must be at least 3, got {levels}")
    _validate_config(cfg)
    rows: list[ConvergenceRow] = []
    previous_error: float | None = None
    for k in range(levels):
        sub = replace(
            cfg,
            nx=(cfg.nx - 1) * 2**k + 1,
            nt=cfg.nt * 2**k,
            output_path="",
            emit_exact=True,
        )
        grid = make_uniform_grid(sub.x_min, sub.x_max, sub.nx, sub.t_end, sub.nt)
        report = run_simulation(sub)
        err = report.max_abs_error_final
        ratio = None
        if previous_error is not None and err is not None and err > 0.0:
            ratio = previous_error / err
        rows.append(
            ConvergenceRow(k, grid.h, grid.l, err, ratio, report.halted_unstable_at)
        )
        previous_error = err
    return rows


def _margin_to_h(cfg: RunConfig, margin: float) -> float:
    """Time step hitting the requested margin at the config's spatial spacing.

    For advection the sweep margin is the mesh ratio hc/l; for the fractional
    diffusion scheme it is the margin formula itself, solved for h with the
    weight maximum taken over the configured number of steps.
    """
    if not margin > 0:
        raise ConfigError(f"sweep margins must be positive, got {margin}")
    l = (cfg.x_max - cfg.x_min) / (cfg.nx - 1)
    if cfg.problem == "advection":
        return margin * l / float(cfg.c)
    if cfg.problem == "fractional_diffusion":
        if not cfg.d or cfg.d <= 0:
            raise ConfigError("sweep needs d > 0 to rescale h to a margin")
        delta, _ = delta_weight_table(cfg.alpha, cfg.nt)
        delta_max = float(delta.max())
        target = margin * l * l * gamma_fn(cfg.alpha) / (2.0 * cfg.d * delta_max)
        return target ** (1.0 / cfg.alpha)
    raise ConfigError("stability sweep requires a spatial scheme (advection or diffusion)")


def stability_sweep(cfg: RunConfig, margin_values: list[float]) -> list[SweepRow]:
    """For each requested margin, rescale h to hit it (t_end follows, nt and l
    fixed), run the Fourier amplification probe and a full simulation, and
    tabulate the observed growth and any instability halt."""
    if not margin_values:
        raise ConfigError("margin_values must be nonempty")
    _validate_config(cfg)
    rows: list[SweepRow] = []
    for margin in margin_values:
        h = _margin_to_h(cfg, margin)
        sub = replace(cfg, t_end=h * cfg.nt, output_path="", emit_exact=False)
        grid, scheme, rhs, bc, _, _, _ = _build_problem(sub)
        coefficient = float(sub.c if sub.problem == "advection" else sub.d)
        traces = amplification_probe(
            scheme, grid.h, grid.l, coefficient, _SWEEP_THETA_SAMPLES, grid.nt
        )
        max_amp = max(float(tr.ratios.max()) for tr in traces)

        xs = grid.nodes()
        u0 = _initial_profile(sub, xs)
        post = None
        if bc is not None:
            u0 = apply_boundary(u0, 0.0, bc, grid)
            post = lambda u, n: apply_boundary(u, grid.time(n), bc, grid)
        halted = None
        try:
            for _ in advance(u0, rhs, grid, scheme, post_step=post):
                pass
        except InstabilityError as exc:
            halted = exc.level
        rows.append(SweepRow(float(margin), grid.h, max_amp, halted))
    return rows


def _print_report(cfg: RunConfig, report: RunReport) -> None:
    margin = report.stability_margin
    print(f"problem:             {cfg.problem}")
    print(
        f"grid:                nx={cfg.nx}, nt={cfg.nt}, t_end={cfg.t_end:g}, "
        f"alpha={cfg.alpha:g}"
    )
    peak = "" if margin.n_at_max is None else f" (peak at n={margin.n_at_max})"
    verdict = "stable-by-criterion" if margin.value < 1.0 else "UNSTABLE-by-criterion"
    print(f"stability margin:    {margin.value:.6g} [{margin.kind}] {verdict}{peak}")
    print(f"residual bound:      {report.residual_bound_final:.6g} (estimated max |F''|)")
    if report.max_abs_error_final is not None:
        print(f"final max abs error: {report.max_abs_error_final:.6g}")
    else:
        print("final max abs error: n/a (emit_exact=false or no levels completed)")
    if report.halted_unstable_at is not None:
        print(f"halted unstable at:  level {report.halted_unstable_at}")
    if cfg.output_path:
        print(f"csv:                 {cfg.output_path}")
    for note in report.notes:
        print(f"note: {note}")


def _print_convergence(rows: list[ConvergenceRow]) -> None:
    print(f"{'level':>5} {'h':>12} {'l':>12} {'max_abs_error':>14} {'ratio':>8} {'halted':>7}")
    for row in rows:
        err = "n/a" if row.max_abs_error is None else f"{row.max_abs_error:.6e}"
        ratio = "n/a" if row.ratio is None else f"{row.ratio:.3f}"
        halted = "-" if row.halted_level is None else str(row.halted_level)
        print(f"{row.level:>5} {row.h:>12.6g} {row.l:>12.6g} {err:>14} {ratio:>8} {halted:>7}")


def _print_sweep(rows: list[SweepRow]) -> None:
    print(f"{'margin':>8} {'h':>12} {'max_amplification':>18} {'halted':>7}")
    for row in rows:
        halted = "-" if row.halted_level is None else str(row.halted_level)
        print(f"{row.margin:>8.4g} {row.h:>12.6g} {row.max_amplification:>18.6g} {halted:>7}")


def _cmd_check(cfg: RunConfig) -> int:
    grid, scheme, _, _, _, margin, notes = _build_problem(cfg)
    peak = "" if margin.n_at_max is None else f" (peak at n={margin.n_at_max})"
    verdict = "stable-by-criterion" if margin.value < 1.0 else "UNSTABLE-by-criterion"
    print(f"stability margin:    {margin.value:.6g} [{margin.kind}] {verdict}{peak}")
    bound = residual_bound(grid.h, scheme.alpha, max(grid.nt - 1, 0), 1.0)
    print(f"residual bound:      {bound:.6g} per unit max |F''| (final step)")
    for note in notes:
        print(f"note: {note}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fracab",
        description="Two-step explicit time stepping for classical and "
        "Caputo-fractional PDEs, with stability checks and CSV output.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run one simulation, write CSV, print report")
    p_run.add_argument("config", help="path to a key=value config file")
    p_conv = sub.add_parser("converge", help="joint space/time refinement study")
    p_conv.add_argument("config")
    p_conv.add_argument("--levels", type=int, default=3, help="refinement levels (>= 3)")
    p_sweep = sub.add_parser("sweep", help="stability sweep over margin settings")
    p_sweep.add_argument("config")
    p_sweep.add_argument("--margins", required=True, help="comma-separated margins")
    p_check = sub.add_parser("check", help="margins and residual bound only (no time loop)")
    p_check.add_argument("config")
    args = parser.parse_args(argv)

    try:
        with open(args.config, encoding="utf-8") as fh:
            cfg = parse_config(fh.read())
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 1
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    try:
        if args.command == "run":
            report = run_simulation(cfg)
            _print_report(cfg, report)
            return 2 if report.halted_unstable_at is not None else 0
        if args.command == "converge":
            _print_convergence(convergence_study(cfg, args.levels))
            return 0
        if args.command == "sweep":
            try:
                margins = [float(m) for m in args.margins.split(",") if m.strip()]
            except ValueError:
                print(f"error: bad --margins value {args.margins!r}", file=sys.stderr)
                return 1
            _print_sweep(stability_sweep(cfg, margins))
            return 0
        return _cmd_check(cfg)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
