"""Experiment orchestration: control-parameter sweeps, iterative restarts,
coupling continuation, the diagonalization oracle, and report emission.

Each experiment returns plain result records; the CLI formats them into
reports.  Rows are sorted by their keys before emission so output is
deterministic regardless of how the work was executed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Sequence

from mpmath import mpf

from .basis import BasisSpec, WaveVector, build_hamiltonian
from .errors import ConfigurationError, LostStateError, StageFailureError
from .eigen import band_eigenvalues
from .ham import HamConfig, HamState, run_ham
from .precision import PrecisionContext, format_scalar, to_real


@dataclass(frozen=True)
class SweepGrid:
    """Control-parameter grid and the orders at which residuals are sampled."""

    start: mpf
    end: mpf
    step: mpf
    orders: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.step <= 0:
            raise ConfigurationError("sweep step must be positive")
        if self.end < self.start:
            raise ConfigurationError("sweep end must not precede start")
        if not self.orders or any(o < 1 for o in self.orders):
            raise ConfigurationError("sweep orders must be positive integers")
        if any(p == 0 for p in self.points()):
            raise ConfigurationError("sweep grid must not contain zero (c0 = 0 is forbidden)")

    def points(self) -> list[mpf]:
        values = []
        p = self.start
        # half-step slack absorbs representation error in the endpoint
        while p <= self.end + self.step / 2:
            values.append(p)
            p = p + self.step
        return values


@dataclass
class SweepResult:
    rows: list  # (c0, order, residual, e_hat)
    best_c0: mpf  # argmin of the residual at the highest sampled order


def sweep_c0(
    base: HamConfig,
    grid: SweepGrid,
    guess: WaveVector | None = None,
    ctx: PrecisionContext = PrecisionContext(),
) -> SweepResult:
    """Run one solve per grid point and tabulate residuals at the sampled orders."""
    with ctx.activate():
        top_order = max(grid.orders)
        rows = []
        best = None
        for c0 in grid.points():
            config = replace(base, c0=c0, order=top_order)
            state = run_ham(config, guess, ctx)
            for order in sorted(grid.orders):
                rows.append(
                    (c0, order, state.residual_history[order], state.e_partials[order])
                )
            final = state.residual_history[top_order]
            if best is None or final < best[0]:
                best = (final, c0)
        rows.sort(key=lambda r: (r[0], r[1]))
        return SweepResult(rows=rows, best_c0=best[1])


@dataclass
class IterationResult:
    """Final state of an iterated solve plus the per-pass trace."""

    state: HamState
    rows: list  # (pass_index, e_hat, residual)
    converged: bool = True

    @property
    def final_residual(self) -> mpf:
        return self.rows[-1][2]


def iterate(
    base: HamConfig,
    order_per_pass: int,
    passes: int,
    guess: WaveVector | None = None,
    ctx: PrecisionContext = PrecisionContext(),
    target: mpf | None = None,
) -> IterationResult:
    """Restarted solve: each pass runs ``order_per_pass`` orders, rescales the
    partial sum to unit overlap with the target basis state, and feeds it
    back as the next initial guess.

    Stops early once the recorded residual drops below ``target`` (when
    given).  The rescaling is mathematically neutral (the zeroth-order
    energy is scale invariant) but prevents magnitude drift across passes.
    """
    if order_per_pass < 1 or passes < 1:
        raise ConfigurationError("iteration needs order >= 1 and passes >= 1")
    with ctx.activate():
        n = base.state_index
        config = replace(base, order=order_per_pass)
        if guess is None:
            guess = WaveVector.basis_state(n, base.spec.dim)
        rows = []
        state = None
        for index in range(1, passes + 1):
            overlap = guess[n]
            if abs(overlap) < ctx.epsilon:
                raise LostStateError(
                    f"pass {index}: overlap with state {n} underflowed; iteration lost the state"
                )
            guess = guess.scaled(1 / overlap)
            state = run_ham(config, guess, ctx)
            residual = state.residual_history[-1]
            rows.append((index, state.e_hat, residual))
            guess = state.psi_hat
            if target is not None and residual < target:
                return IterationResult(state=state, rows=rows, converged=True)
        return IterationResult(state=state, rows=rows, converged=target is None)


@dataclass(frozen=True)
class ContinuationStage:
    """One continuation stage: coupling, control parameter, truncation,
    order per pass, pass budget, and an optional per-stage residual target."""

    beta: mpf
    c0: mpf
    n_s: int
    order: int
    passes: int
    target: mpf | None = None


@dataclass(frozen=True)
class ContinuationPlan:
    """Ordered stages with strictly increasing coupling and non-shrinking basis."""

    stages: tuple[ContinuationStage, ...]

    def __post_init__(self) -> None:
        if not self.stages:
            raise ConfigurationError("continuation plan has no stages")
        for prev, cur in zip(self.stages, self.stages[1:]):
            if cur.beta <= prev.beta:
                raise ConfigurationError("continuation couplings must be strictly increasing")
            if cur.n_s < prev.n_s:
                raise ConfigurationError(
                    "continuation must not shrink the basis (vectors are only zero-padded upward)"
                )

    @classmethod
    def from_json(cls, data, ctx: PrecisionContext, default_target: mpf | None = None):
        """Build a plan from a parsed JSON array of stage objects.

        Decimal fields may be strings to avoid binary-float rounding.
        """
        stages = []
        with ctx.activate():
            for entry in data:
                try:
                    target = entry.get("target", default_target)
                    stages.append(
                        ContinuationStage(
                            beta=to_real(entry["beta"]),
                            c0=to_real(entry["c0"]),
                            n_s=int(entry["ns"]),
                            order=int(entry["order"]),
                            passes=int(entry["passes"]),
                            target=to_real(target) if target is not None else None,
                        )
                    )
                except KeyError as missing:
                    raise ConfigurationError(f"continuation stage missing field {missing}")
        return cls(stages=tuple(stages))


@dataclass
class ContinuationResult:
    rows: list  # (beta, e_hat, c0, n_s, residual, passes_used)
    final_state: HamState


def continuation(
    plan: ContinuationPlan,
    state_index: int,
    ctx: PrecisionContext = PrecisionContext(),
    residual_mode: str = "truncated",
) -> ContinuationResult:
    """Walk the plan, seeding each stage with the previous converged
    eigenfunction (zero-padded when the basis grows).

    A stage that exhausts its pass budget above its residual target raises
    a stage failure carrying the rows completed so far.
    """
    with ctx.activate():
        rows = []
        guess = None
        state = None
        for number, stage in enumerate(plan.stages, start=1):
            spec = BasisSpec(n_s=stage.n_s, beta=stage.beta)
            config = HamConfig(
                state_index=state_index,
                c0=stage.c0,
                order=stage.order,
                spec=spec,
                residual_mode=residual_mode,
            )
            if guess is not None:
                guess = guess.padded(spec.dim)
            result = iterate(
                config, stage.order, stage.passes, guess, ctx, target=stage.target
            )
            residual = result.final_residual
            if stage.target is not None and not residual < stage.target:
                raise StageFailureError(
                    f"stage {number} (coupling {stage.beta}) stopped at residual {residual}, "
                    f"above its target {stage.target}",
                    partial_rows=rows,
                )
            state = result.state
            rows.append(
                (stage.beta, state.e_hat, stage.c0, stage.n_s, residual, len(result.rows))
            )
            guess = state.psi_hat
        return ContinuationResult(rows=rows, final_state=state)


def diagonalize_oracle(
    spec: BasisSpec, how_many: int, ctx: PrecisionContext = PrecisionContext()
) -> list[mpf]:
    """Lowest eigenvalues of the truncated Hamiltonian by Sturm bisection.

    Independent of the homotopy recursion; used to close the loop on every
    solver result.
    """
    if how_many < 1 or how_many > spec.dim:
        raise ConfigurationError(f"eigenvalue count {how_many} outside 1..{spec.dim}")
    with ctx.activate():
        operator = build_hamiltonian(spec)
        diagonals = {0: operator.diag0, 2: operator.diag2, 4: operator.diag4}
        return band_eigenvalues(diagonals, spec.dim, how_many)


@dataclass
class SolveReport:
    """Serializable result of one CLI command.

    Numeric fields are pre-formatted decimal strings at the configured
    precision, so CSV and JSON carry identical digits and survive
    round-trips exactly.
    """

    command: str
    config: dict
    columns: tuple
    rows: list
    pade: list = field(default_factory=list)
    final_e_hat: str | None = None
    wallclock_seconds: float = 0.0
    flags: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "command": self.command,
            "config": self.config,
            "columns": list(self.columns),
            "rows": self.rows,
            "pade": self.pade,
            "final_e_hat": self.final_e_hat,
            "wallclock_seconds": self.wallclock_seconds,
            "flags": self.flags,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "SolveReport":
        return cls(
            command=data["command"],
            config=data["config"],
            columns=tuple(data["columns"]),
            rows=data["rows"],
            pade=data["pade"],
            final_e_hat=data["final_e_hat"],
            wallclock_seconds=data["wallclock_seconds"],
            flags=data["flags"],
        )


def format_rows(
    columns: Sequence[str], raw_rows: Sequence[Sequence], digits: int
) -> list[dict]:
    """Format one table: reals through the scalar formatter, ints as-is."""
    rows = []
    for raw in raw_rows:
        row = {}
        for name, value in zip(columns, raw):
            if isinstance(value, bool) or isinstance(value, int):
                row[name] = value
            elif isinstance(value, str):
                row[name] = value
            else:
                row[name] = format_scalar(value, digits)
        rows.append(row)
    return rows


def render_csv(report: SolveReport) -> str:
    lines = [",".join(report.columns)]
    for row in report.rows:
        lines.append(",".join(str(row[c]) for c in report.columns))
    return "\n".join(lines) + "\n"


def render_pade_csv(report: SolveReport) -> str:
    lines = ["m,value,degenerate"]
    for row in report.pade:
        lines.append(f"{row['m']},{row['value']},{str(row['degenerate']).lower()}")
    return "\n".join(lines) + "\n"


def emit_report(report: SolveReport, format: str = "csv", path=None) -> str:
    """Serialize a report to CSV or JSON; write to ``path`` when given.

    Returns the rendered text either way.  CSV carries the main table;
    a report with an acceleration table gets a sibling ``*_pade.csv``.
    JSON mirrors every report field.
    """
    if format == "csv":
        text = render_csv(report)
    elif format == "json":
        text = json.dumps(report.to_json_dict(), indent=2) + "\n"
    else:
        raise ConfigurationError(f"unknown report format {format!r}")
    if path is not None:
        path = str(path)
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        if format == "csv" and report.pade:
            sibling = _pade_sibling(path)
            with open(sibling, "w", encoding="utf-8", newline="") as handle:
                handle.write(render_pade_csv(report))
    return text


def _pade_sibling(path: str) -> str:
    stem, dot, suffix = path.rpartition(".")
    if not dot:
        return path + "_pade"
    return f"{stem}_pade.{suffix}"
