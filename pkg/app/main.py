from __future__ import annotations

from pathlib import Path
from typing import Any, Dict, NoReturn, Optional

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from app.audit import RunAudit
from app.box import BoxFormatError, check_no_signaling, read_box, reference_box, write_box
from app.channel import NoConvergence, channels_from_box
from app.config import RunConfig, load_run_config
from app.evaluation import run_verification, write_report
from app.geometry import build_q_delta, dump_polytope, enumerate_vertices
from app.monogamy import StrictModeInapplicable, monogamy_lhs
from app.schemas.core import BoxCheckReport, VerificationReport, VerifyTarget
from app.strength import curve as strength_curve
from app.strength import delta_grid, write_curve_csv

EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_NO_CONVERGENCE = 3

INPUT_ERRORS = (BoxFormatError, ValidationError, ValueError, FileNotFoundError)


class SignalRuntime:
    """Settings plus audit ledger for one CLI invocation."""

    def __init__(self, settings: RunConfig) -> None:
        self.settings = settings
        self.audit = RunAudit(settings)

    def record(self, command: str, action: str, payload: Dict[str, Any]) -> None:
        self.audit.log(command, action, payload)


def _runtime(config: Optional[Path], **overrides: Any) -> SignalRuntime:
    try:
        return SignalRuntime(load_run_config(config, **overrides))
    except (ValidationError, ValueError, FileNotFoundError) as exc:
        _fail(f'invalid configuration: {exc}', EXIT_INPUT)


def _fail(message: str, code: int) -> NoReturn:
    typer.echo(message, err=True)
    raise typer.Exit(code=code)


def check_box(path: Path, settings: RunConfig, relaxed: bool = False) -> BoxCheckReport:
    box = read_box(path)
    monogamy = None
    monogamy_error = None
    try:
        monogamy = monogamy_lhs(box, relaxed=relaxed, tol=settings.VIOLATION_TOL)
    except StrictModeInapplicable as exc:
        monogamy_error = str(exc)
    return BoxCheckReport(
        path=str(path),
        m=box.m,
        relaxed=relaxed,
        no_signaling=check_no_signaling(box, tol=settings.NORM_TOL),
        monogamy=monogamy,
        monogamy_error=monogamy_error,
        channels=channels_from_box(box, relaxed=relaxed, eps=settings.CAPACITY_EPS),
    )


def render_verification(report: VerificationReport) -> Table:
    table = Table(title=f'verify {report.target}')
    for column in ('check', 'expected', 'computed', 'tolerance', 'status'):
        table.add_column(column)
    for row in report.checks:
        table.add_row(
            row.name,
            row.expected,
            row.computed,
            '' if row.tolerance is None else f'{row.tolerance:g}',
            '[green]pass[/green]' if row.passed else '[red]FAIL[/red]',
        )
    return table


cli = typer.Typer(help='Monogamy violations and the signaling they force')


@cli.command('check-box')
def check_box_command(
    path: Path = typer.Argument(..., help='Box JSON file'),
    relaxed: bool = typer.Option(False, '--relaxed', help='Condition <B0E> on each A setting'),
    config: Optional[Path] = typer.Option(None, '--config', help='key=value settings file'),
):
    "Validate a box and report no-signaling, monogamy violation and channel capacities."
    runtime = _runtime(config)
    try:
        report = check_box(path, runtime.settings, relaxed=relaxed)
    except INPUT_ERRORS as exc:
        runtime.record('check-box', 'rejected', {'path': str(path), 'error': str(exc)})
        _fail(str(exc), EXIT_INPUT)
    runtime.record(
        'check-box',
        'checked',
        {'path': str(path), 'max_capacity': report.channels.max_capacity},
    )
    typer.echo(report.model_dump_json(indent=2))


@cli.command('curve')
def curve_command(
    m: int = typer.Option(2, '--m', help='Settings per party'),
    step: Optional[float] = typer.Option(None, '--step', help='Delta spacing on [0, 2]'),
    tol: Optional[float] = typer.Option(None, '--tol', help='Solver gap tolerance'),
    workers: Optional[int] = typer.Option(None, '--workers', help='Rows computed in parallel'),
    relaxed: bool = typer.Option(False, '--relaxed', help='Condition <B0E> on each A setting'),
    out: Optional[Path] = typer.Option(None, '--out', help='CSV path'),
    config: Optional[Path] = typer.Option(None, '--config', help='key=value settings file'),
):
    "Compute the communication strength on a delta grid and write it as CSV."
    runtime = _runtime(config, curve_step=step, solver_tol=tol, workers=workers)
    settings = runtime.settings
    try:
        deltas = delta_grid(settings.CURVE_STEP)
        result = strength_curve(
            m,
            deltas,
            tol=settings.SOLVER_TOL,
            max_iter=settings.SOLVER_MAX_ITER,
            workers=settings.WORKERS,
            relaxed=relaxed,
        )
    except ValueError as exc:
        _fail(str(exc), EXIT_INPUT)
    suffix = '_relaxed' if relaxed else ''
    path = write_curve_csv(result, out or settings.REPORTS_DIR / f'curve_m{m}{suffix}.csv')
    failed = [row.delta for row in result.failed_rows]
    runtime.record(
        'curve',
        'failed' if failed else 'written',
        {
            'm': m,
            'relaxed': relaxed,
            'rows': len(result.rows),
            'path': str(path),
            'failed': failed,
        },
    )
    typer.echo(f'wrote {len(result.rows)} rows to {path} (monotone={result.monotone})')
    if result.conjectured:
        typer.echo('c_delta is a conjectured lower bound for m >= 3')
    if failed:
        _fail(f'solver did not converge for delta in {failed}', EXIT_NO_CONVERGENCE)


@cli.command('verify')
def verify_command(
    target: str = typer.Argument(..., help='appendix-a, appendix-b, minimal-set or properties'),
    seed: Optional[int] = typer.Option(None, '--seed', help='Seed for the property suites'),
    tol: Optional[float] = typer.Option(None, '--tol', help='Solver gap tolerance'),
    drop_constraint: Optional[int] = typer.Option(
        None, '--drop-constraint', help='Negative control for appendix-a'
    ),
    config: Optional[Path] = typer.Option(None, '--config', help='key=value settings file'),
):
    "Run a verification target and print expected against computed values."
    runtime = _runtime(config, seed=seed, solver_tol=tol)
    if target not in ('appendix-a', 'appendix-b', 'minimal-set', 'properties'):
        _fail(f'unknown verification target {target!r}', EXIT_INPUT)
    verify_target: VerifyTarget = target  # type: ignore[assignment]
    try:
        report = run_verification(verify_target, runtime.settings, drop_constraint=drop_constraint)
    except NoConvergence as exc:
        runtime.record('verify', 'no_convergence', {'target': target, 'best': exc.best})
        _fail(str(exc), EXIT_NO_CONVERGENCE)
    path = write_report(report, runtime.settings)
    runtime.record(
        'verify',
        'passed' if report.passed else 'failed',
        {'target': target, 'report': str(path)},
    )
    Console().print(render_verification(report))
    if not report.passed:
        raise typer.Exit(code=EXIT_FAILED)


@cli.command('polytope')
def polytope_command(
    m: int = typer.Option(2, '--m', help='Settings per party'),
    delta: float = typer.Option(..., '--delta', help='Monogamy violation in [0, 2]'),
    relaxed: bool = typer.Option(False, '--relaxed', help='Add the x_a0/y_a0 coordinates'),
    vertices: bool = typer.Option(False, '--vertices', help='Also enumerate vertices'),
    out: Optional[Path] = typer.Option(None, '--out', help='Output file'),
    config: Optional[Path] = typer.Option(None, '--config', help='key=value settings file'),
):
    "Dump the correlator polytope for a violation delta."
    runtime = _runtime(config)
    try:
        poly = build_q_delta(m, delta, relaxed=relaxed)
        text = dump_polytope(poly, list(enumerate_vertices(poly)) if vertices else None)
    except ValueError as exc:
        _fail(str(exc), EXIT_INPUT)
    runtime.record('polytope', 'dumped', {'m': m, 'delta': delta, 'relaxed': relaxed})
    if out is None:
        typer.echo(text, nl=False)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding='utf-8')
    typer.echo(f'wrote {out}')


@cli.command('reference-box')
def reference_box_command(
    delta: float = typer.Option(2.0, '--delta', help='Monogamy violation in [0, 2]'),
    x: float = typer.Option(..., '--x', help='Free correlator in [-1, 1]'),
    out: Path = typer.Option(..., '--out', help='Box JSON path'),
    config: Optional[Path] = typer.Option(None, '--config', help='key=value settings file'),
):
    "Write the two-setting box with PR correlations that violates monogamy by delta."
    runtime = _runtime(config)
    try:
        box = reference_box(delta, x)
    except ValueError as exc:
        _fail(str(exc), EXIT_INPUT)
    path = write_box(box, out)
    runtime.record('reference-box', 'written', {'delta': delta, 'x': x, 'path': str(path)})
    typer.echo(f'wrote {path}')


if __name__ == '__main__':
    cli()
