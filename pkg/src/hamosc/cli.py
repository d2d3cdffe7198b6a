"""Command-line driver.

Subcommands mirror the experiment catalogue: ``solve`` (one run with
per-order table), ``sweep`` (control-parameter grid), ``iterate``
(restarted passes), ``continue`` (coupling continuation from a JSON
plan), ``perturb`` (perturbative baseline), ``oracle`` (direct banded
diagonalization).  Reports are CSV or JSON; ``--plot`` renders a PNG next
to the delimited output.

A JSON config file may supply any flag (keys are the long flag names,
hyphens or underscores); explicit flags override the file.  Decimal
values in config files and plans are read as strings so they never pass
through binary floats.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from mpmath import mpf

from . import driver
from .acceleration import pade_table
from .basis import BasisSpec, WaveVector, evaluate_wavefunction
from .errors import ConfigurationError, NumericalError, StageFailureError
from .ham import HamConfig, run_ham
from .perturbation import perturb_solve
from .precision import DEFAULT_DIGITS, format_scalar, make_context

SOLVE_COLUMNS = ("order", "e_hat", "residual")
SWEEP_COLUMNS = ("c0", "order", "residual", "e_hat")
ITERATE_COLUMNS = ("pass", "e_hat", "residual")
CONTINUE_COLUMNS = ("beta", "e_hat", "c0", "ns", "residual", "passes")
ORACLE_COLUMNS = ("index", "eigenvalue")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hamosc",
        description="High-precision eigensolver for the quartic anharmonic oscillator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, *, beta=True) -> None:
        p.add_argument("--config", help="JSON file supplying any flag; flags override it")
        p.add_argument("--digits", type=int, help=f"significant digits (default {DEFAULT_DIGITS})")
        p.add_argument("--ns", type=int, help="basis truncation order (default 40)")
        if beta:
            p.add_argument("--beta", help="quartic coupling, decimal string")
        p.add_argument("--out", help="output path; omit to print the report to stdout")
        p.add_argument("--format", choices=("csv", "json"), help="report format (default csv)")
        p.add_argument(
            "--plot",
            action="store_true",
            default=None,
            help="render a PNG figure next to --out",
        )

    p = sub.add_parser("solve", help="one homotopy run; CSV columns order,e_hat,residual")
    common(p)
    p.add_argument("--n", type=int, help="target eigenstate index (default 0)")
    p.add_argument("--c0", help="convergence-control parameter, decimal string")
    p.add_argument("--order", type=int, help="series truncation order (default 40)")
    p.add_argument("--residual-mode", choices=("truncated", "extended"))
    p.add_argument(
        "--pade",
        action="store_true",
        default=None,
        help="include the diagonal Pade table (CSV gets a *_pade.csv sibling)",
    )

    p = sub.add_parser("sweep", help="grid over c0; CSV columns c0,order,residual,e_hat")
    common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--c0-start", help="grid start, decimal string")
    p.add_argument("--c0-end", help="grid end, decimal string")
    p.add_argument("--c0-step", help="grid step, decimal string")
    p.add_argument("--orders", help="comma list of sampled orders (default 1,2,3,4,5)")
    p.add_argument("--residual-mode", choices=("truncated", "extended"))

    p = sub.add_parser("iterate", help="restarted passes; CSV columns pass,e_hat,residual")
    common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--c0")
    p.add_argument("--m", type=int, help="order per pass")
    p.add_argument("--passes", type=int, help="maximum passes")
    p.add_argument("--digits-wanted", type=int, help="stop once residual < 10^(-2*w)")
    p.add_argument("--residual-mode", choices=("truncated", "extended"))

    p = sub.add_parser(
        "continue",
        help="coupling continuation; CSV columns beta,e_hat,c0,ns,residual,passes",
    )
    common(p, beta=False)
    p.add_argument("--n", type=int)
    p.add_argument("--plan", help="JSON plan: [{beta,c0,ns,order,passes[,target]},...]")
    p.add_argument("--digits-wanted", type=int, help="default stage target 10^(-2*w) (default 10)")
    p.add_argument("--residual-mode", choices=("truncated", "extended"))

    p = sub.add_parser("perturb", help="perturbative baseline; CSV columns order,e_hat,residual")
    common(p)
    p.add_argument("--n", type=int)
    p.add_argument("--order", type=int, help="perturbation order (default 30)")

    p = sub.add_parser("oracle", help="banded diagonalization; CSV columns index,eigenvalue")
    common(p)
    p.add_argument("--count", type=int, help="how many lowest eigenvalues (default 1)")

    return parser


DEFAULTS = {
    "digits": DEFAULT_DIGITS,
    "ns": 40,
    "n": 0,
    "order": None,  # per-command below
    "format": "csv",
    "orders": "1,2,3,4,5",
    "passes": 10,
    "digits_wanted": None,
    "count": 1,
    "residual_mode": "truncated",
    "plot": False,
    "pade": False,
}
COMMAND_DEFAULTS = {
    "solve": {"order": 40},
    "perturb": {"order": 30},
    "continue": {"digits_wanted": 10},
}


def merge_options(args: argparse.Namespace) -> dict:
    """Layer defaults, config-file values, then explicit flags."""
    options = dict(vars(args))
    command = options.pop("command")
    config_path = options.pop("config", None)
    file_values = {}
    if config_path:
        try:
            with open(config_path, "r", encoding="utf-8") as handle:
                raw = json.load(handle, parse_float=str)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"config file {config_path}: {exc}")
        if not isinstance(raw, dict):
            raise ConfigurationError(f"config file {config_path} must hold a JSON object")
        for key, value in raw.items():
            file_values[key.replace("-", "_")] = value
        unknown = set(file_values) - set(options)
        if unknown:
            raise ConfigurationError(
                f"config file {config_path} has keys not valid for '{command}': {sorted(unknown)}"
            )
    merged = {}
    for key, cli_value in options.items():
        if cli_value is not None:
            merged[key] = cli_value
        elif key in file_values:
            merged[key] = file_values[key]
        elif key in COMMAND_DEFAULTS.get(command, {}):
            merged[key] = COMMAND_DEFAULTS[command][key]
        else:
            merged[key] = DEFAULTS.get(key)
    merged["command"] = command
    return merged


def require(options: dict, *names: str) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if options.get(n) is None]
    if missing:
        raise ConfigurationError(f"missing required option(s): {', '.join(missing)}")


def figure_path(options: dict) -> str | None:
    if not options.get("plot"):
        return None
    out = options.get("out")
    if not out:
        raise ConfigurationError("--plot derives its file name from --out; supply --out")
    return str(Path(out).with_suffix(".png"))


def finish(report: driver.SolveReport, options: dict, summary: str) -> int:
    text = driver.emit_report(report, options["format"], options.get("out"))
    if options.get("out"):
        print(summary)
        print(f"wrote {options['out']}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_solve(options: dict) -> int:
    require(options, "beta", "c0")
    ctx = make_context(options["digits"])
    spec = BasisSpec(n_s=options["ns"], beta=ctx.real(options["beta"]))
    config = HamConfig(
        state_index=options["n"],
        c0=ctx.real(options["c0"]),
        order=options["order"],
        spec=spec,
        residual_mode=options["residual_mode"],
    )
    started = time.perf_counter()
    state = run_ham(config, None, ctx)
    pade_rows = []
    if options.get("pade"):
        pade_rows = [
            {"m": r.m, "value": format_scalar(r.value, ctx.digits), "degenerate": r.degenerate}
            for r in pade_table(state.e_terms, ctx)
        ]
    wall = time.perf_counter() - started
    raw = [
        (k, state.e_partials[k], state.residual_history[k])
        for k in range(1, config.order + 1)
    ]
    report = driver.SolveReport(
        command="solve",
        config=echo_config(
            options, "n", "beta", "c0", "order", "ns", "digits", "residual_mode"
        ),
        columns=SOLVE_COLUMNS,
        rows=driver.format_rows(SOLVE_COLUMNS, raw, ctx.digits),
        pade=pade_rows,
        final_e_hat=format_scalar(state.e_hat, ctx.digits),
        wallclock_seconds=wall,
    )
    png = figure_path(options)
    if png:
        with ctx.activate():
            xs = [mpf(i) / 15 - 4 for i in range(121)]
            ys = [evaluate_wavefunction(state.psi_hat, x) for x in xs]
        from .plotting import save_convergence_figure

        save_convergence_figure(
            [r[0] for r in raw],
            [r[1] for r in raw],
            [r[2] for r in raw],
            png,
            wavefunction=(xs, ys),
            title=f"state {options['n']}, coupling {options['beta']}, c0 {options['c0']}",
        )
    summary = (
        f"E{options['n']} = {format_scalar(state.e_hat, min(20, ctx.digits))}"
        f"  residual = {format_scalar(state.residual_history[-1], 2)}"
        f"  ({config.order} orders, {wall:.2f} s)"
    )
    return finish(report, options, summary)


def cmd_sweep(options: dict) -> int:
    require(options, "beta", "c0_start", "c0_end", "c0_step")
    ctx = make_context(options["digits"])
    orders = parse_orders(options["orders"])
    with ctx.activate():
        grid = driver.SweepGrid(
            start=ctx.real(options["c0_start"]),
            end=ctx.real(options["c0_end"]),
            step=ctx.real(options["c0_step"]),
            orders=orders,
        )
    spec = BasisSpec(n_s=options["ns"], beta=ctx.real(options["beta"]))
    base = HamConfig(
        state_index=options["n"],
        c0=grid.start if grid.start != 0 else ctx.real("-1"),
        order=max(orders),
        spec=spec,
        residual_mode=options["residual_mode"],
    )
    started = time.perf_counter()
    result = driver.sweep_c0(base, grid, None, ctx)
    wall = time.perf_counter() - started
    report = driver.SolveReport(
        command="sweep",
        config=echo_config(options, "n", "beta", "ns", "digits", "orders", "residual_mode"),
        columns=SWEEP_COLUMNS,
        rows=driver.format_rows(SWEEP_COLUMNS, result.rows, ctx.digits),
        wallclock_seconds=wall,
        flags={"best_c0": format_scalar(result.best_c0, ctx.digits)},
    )
    png = figure_path(options)
    if png:
        from .plotting import save_sweep_figure

        save_sweep_figure(result.rows, png, title=f"coupling {options['beta']}")
    summary = f"best c0 = {format_scalar(result.best_c0, 6)} ({wall:.2f} s)"
    return finish(report, options, summary)


def cmd_iterate(options: dict) -> int:
    require(options, "beta", "c0", "m")
    ctx = make_context(options["digits"])
    spec = BasisSpec(n_s=options["ns"], beta=ctx.real(options["beta"]))
    base = HamConfig(
        state_index=options["n"],
        c0=ctx.real(options["c0"]),
        order=options["m"],
        spec=spec,
        residual_mode=options["residual_mode"],
    )
    target = None
    if options.get("digits_wanted"):
        with ctx.activate():
            target = mpf(10) ** (-2 * options["digits_wanted"])
    started = time.perf_counter()
    result = driver.iterate(base, options["m"], options["passes"], None, ctx, target=target)
    wall = time.perf_counter() - started
    report = driver.SolveReport(
        command="iterate",
        config=echo_config(options, "n", "beta", "c0", "m", "passes", "ns", "digits"),
        columns=ITERATE_COLUMNS,
        rows=driver.format_rows(ITERATE_COLUMNS, result.rows, ctx.digits),
        final_e_hat=format_scalar(result.state.e_hat, ctx.digits),
        wallclock_seconds=wall,
        flags={"converged": result.converged},
    )
    png = figure_path(options)
    if png:
        from .plotting import save_iteration_figure

        save_iteration_figure(result.rows, png, title=f"coupling {options['beta']}")
    summary = (
        f"E{options['n']} = {format_scalar(result.state.e_hat, min(20, ctx.digits))}"
        f"  residual = {format_scalar(result.final_residual, 2)}"
        f"  ({len(result.rows)} passes, {wall:.2f} s)"
    )
    return finish(report, options, summary)


def cmd_continue(options: dict) -> int:
    require(options, "plan")
    ctx = make_context(options["digits"])
    with ctx.activate():
        default_target = mpf(10) ** (-2 * options["digits_wanted"])
    try:
        with open(options["plan"], "r", encoding="utf-8") as handle:
            data = json.load(handle, parse_float=str)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"plan file {options['plan']}: {exc}")
    plan = driver.ContinuationPlan.from_json(data, ctx, default_target=default_target)
    started = time.perf_counter()
    result = driver.continuation(plan, options["n"], ctx, options["residual_mode"])
    wall = time.perf_counter() - started
    raw = [row[:6] for row in result.rows]
    report = driver.SolveReport(
        command="continue",
        config=echo_config(options, "n", "plan", "digits", "digits_wanted", "residual_mode"),
        columns=CONTINUE_COLUMNS,
        rows=driver.format_rows(CONTINUE_COLUMNS, raw, ctx.digits),
        final_e_hat=format_scalar(result.final_state.e_hat, ctx.digits),
        wallclock_seconds=wall,
    )
    png = figure_path(options)
    if png:
        from .plotting import save_continuation_figure

        save_continuation_figure(result.rows, png)
    summary = (
        f"{len(result.rows)} stages, final E{options['n']} = "
        f"{format_scalar(result.final_state.e_hat, min(20, ctx.digits))} ({wall:.2f} s)"
    )
    return finish(report, options, summary)


def cmd_perturb(options: dict) -> int:
    require(options, "beta")
    ctx = make_context(options["digits"])
    started = time.perf_counter()
    state = perturb_solve(
        options["n"], options["beta"], options["order"], options["ns"], ctx
    )
    wall = time.perf_counter() - started
    raw = [
        (k, state.e_partials[k], state.residual_history[k])
        for k in range(1, options["order"] + 1)
    ]
    report = driver.SolveReport(
        command="perturb",
        config=echo_config(options, "n", "beta", "order", "ns", "digits"),
        columns=SOLVE_COLUMNS,
        rows=driver.format_rows(SOLVE_COLUMNS, raw, ctx.digits),
        final_e_hat=format_scalar(state.e_hat, ctx.digits),
        wallclock_seconds=wall,
    )
    png = figure_path(options)
    if png:
        from .plotting import save_convergence_figure

        save_convergence_figure(
            [r[0] for r in raw], [r[1] for r in raw], [r[2] for r in raw], png,
            title=f"perturbative, coupling {options['beta']}",
        )
    summary = (
        f"E{options['n']} ~ {format_scalar(state.e_hat, 8)}"
        f"  residual = {format_scalar(state.residual_history[-1], 2)}"
        f"  (order {options['order']}, {wall:.2f} s)"
    )
    return finish(report, options, summary)


def cmd_oracle(options: dict) -> int:
    require(options, "beta")
    ctx = make_context(options["digits"])
    spec = BasisSpec(n_s=options["ns"], beta=ctx.real(options["beta"]))
    started = time.perf_counter()
    values = driver.diagonalize_oracle(spec, options["count"], ctx)
    wall = time.perf_counter() - started
    raw = list(enumerate(values))
    report = driver.SolveReport(
        command="oracle",
        config=echo_config(options, "beta", "ns", "digits", "count"),
        columns=ORACLE_COLUMNS,
        rows=driver.format_rows(ORACLE_COLUMNS, raw, ctx.digits),
        final_e_hat=format_scalar(values[0], ctx.digits),
        wallclock_seconds=wall,
    )
    png = figure_path(options)
    if png:
        from .plotting import save_spectrum_figure

        save_spectrum_figure(values, png, title=f"coupling {options['beta']}")
    summary = f"lowest = {format_scalar(values[0], min(20, ctx.digits))} ({wall:.2f} s)"
    return finish(report, options, summary)


def echo_config(options: dict, *keys: str) -> dict:
    return {k: options[k] for k in keys if options.get(k) is not None}


def parse_orders(text) -> tuple[int, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(int(t) for t in text)
    try:
        return tuple(int(t) for t in str(text).split(",") if t.strip())
    except ValueError:
        raise ConfigurationError(f"orders must be a comma list of integers, got {text!r}")


COMMANDS = {
    "solve": cmd_solve,
    "sweep": cmd_sweep,
    "iterate": cmd_iterate,
    "continue": cmd_continue,
    "perturb": cmd_perturb,
    "oracle": cmd_oracle,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        options = merge_options(args)
        return COMMANDS[options["command"]](options)
    except StageFailureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        if exc.partial_rows:
            print(f"completed {len(exc.partial_rows)} stage(s) before failing", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
