# cli/app.py
"""
divisi command line.

Reports go to stdout, logs and failure envelopes to stderr.
Exit codes: 0 success, 1 unexpected failure, 2 usage or parse error,
3 domain validation failure.
"""

import json
import logging
from pathlib import Path

import click
from pydantic import ValidationError

from configurations.config import get_settings
from configurations.logging_config import configure_logging
from core.errors import DimensionMismatch, DivisiError, FormatError, UnknownScenarioError, ValidationFailure
from core.run_config import RunConfig
from core.verdicts import Metric, Mode, ScenarioName
from executors.analyze import AnalyzeExecutor
from executors.base import BaseExecutor
from executors.scenario import ExportExecutor, ScenarioExecutor
from executors.sweep import SweepExecutor
from executors.validate import ValidateExecutor
from executors.witness import WitnessExecutor
from services.codec import dump_json

logger = logging.getLogger("divisi.cli")

EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_VALIDATION = 3

scenario_executor = ScenarioExecutor()
export_executor = ExportExecutor()
analyze_executor = AnalyzeExecutor()
witness_executor = WitnessExecutor()
validate_executor = ValidateExecutor()
sweep_executor = SweepExecutor()


# -----------------------------
# Failure envelopes
# -----------------------------
def _envelope(exc: Exception) -> tuple[dict, int]:
    if isinstance(exc, (FormatError, UnknownScenarioError)):
        return {"error": {"type": exc.code, "message": str(exc)}}, EXIT_USAGE

    if isinstance(exc, ValidationFailure):
        error = {"type": exc.code, "message": str(exc), "invariant": exc.invariant}
        if exc.deviation is not None:
            error["deviation"] = exc.deviation
        return {"error": error}, EXIT_VALIDATION

    if isinstance(exc, DimensionMismatch):
        return {"error": {"type": exc.code, "message": str(exc)}}, EXIT_VALIDATION

    if isinstance(exc, ValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        where = ".".join(str(p) for p in first.get("loc", ()))
        message = f"{where}: {first.get('msg', str(exc))}" if where else first.get("msg", str(exc))
        return {"error": {"type": "validation_failure", "message": message}}, EXIT_VALIDATION

    if isinstance(exc, DivisiError):
        return {"error": {"type": exc.code, "message": str(exc)}}, EXIT_FAILURE

    return {"error": {"type": "unexpected_error", "message": "An unexpected error occurred"}}, EXIT_FAILURE


def _usage_envelope(exc: ValidationError) -> dict:
    first = exc.errors()[0] if exc.errors() else {}
    where = ".".join(str(p) for p in first.get("loc", ()))
    message = first.get("msg", str(exc))
    return {"error": {"type": FormatError.code, "message": f"{where}: {message}" if where else message}}


def _fail(ctx: click.Context, command: str | None, envelope: dict, code: int) -> None:
    logger.info(f"[CLI_ERROR] command={command} type={envelope['error']['type']}")
    click.echo(json.dumps(envelope), err=True)
    ctx.exit(code)


def _run(ctx: click.Context, executor: BaseExecutor, **options) -> None:
    command = options.get("command")

    # out-of-range flag values are usage errors
    try:
        config = RunConfig(**options)
    except ValidationError as e:
        _fail(ctx, command, _usage_envelope(e), EXIT_USAGE)
    except DivisiError as e:
        _fail(ctx, command, *_envelope(e))

    try:
        response = executor.execute(config)
    except Exception as e:
        envelope, code = _envelope(e)
        if code == EXIT_FAILURE:
            logger.exception(f"[UNHANDLED_ERROR] command={command} exception={e}")
            click.echo(json.dumps(envelope), err=True)
            ctx.exit(code)
        _fail(ctx, command, envelope, code)

    if config.format == "json":
        click.echo(dump_json(response["data"]), nl=False)
    else:
        click.echo(response["text"], nl=False)


# -----------------------------
# Shared options
# -----------------------------
_path = click.Path(path_type=Path, dir_okay=False)


def _format_option(default: str):
    return click.option(
        "--format",
        "format_",
        type=click.Choice(["table", "json"]),
        default=default,
        show_default=True,
    )


def _metric_option(f):
    return click.option(
        "--metric",
        type=click.Choice([m.value for m in Metric]),
        default=Metric.TRACE_NORM.value,
        show_default=True,
    )(f)


def _mode_option(f):
    return click.option(
        "--mode",
        type=click.Choice([m.value for m in Mode]),
        default=Mode.EXACT.value,
        show_default=True,
    )(f)


def _split_options(f):
    f = click.option("--system", default=None, help="System qubit indices, e.g. 0,2")(f)
    f = click.option("--split", default=None, help="System:environment sizes, e.g. 2:1")(f)
    return f


_scenario_argument = click.argument("name", type=click.Choice([s.value for s in ScenarioName]))


# -----------------------------
# Commands
# -----------------------------
@click.group()
@click.option("--log-level", default=None, help="Overrides DIVISI_LOG_LEVEL")
@click.option("--log-json/--log-text", default=None, help="Overrides DIVISI_LOG_JSON")
def cli(log_level: str | None, log_json: bool | None) -> None:
    """One-step P-divisibility analysis of system-environment unitaries."""
    settings = get_settings()
    configure_logging(
        level=log_level or settings.log_level,
        json_output=settings.log_json if log_json is None else log_json,
    )


@cli.command()
@_scenario_argument
@_mode_option
@_metric_option
@_format_option("table")
@click.option("--tol", type=float, default=None, help="Verdict tolerance")
@click.pass_context
def scenario(ctx, name, mode, metric, format_, tol):
    """Run a built-in Bell, GHZ or W experiment."""
    _run(
        ctx,
        scenario_executor,
        command="scenario",
        scenario=name,
        mode=mode,
        metric=metric,
        format=format_,
        verdict_tol=tol,
    )


@cli.command()
@click.option("--unitary", type=_path, required=True)
@click.option("--state1", type=_path, required=True)
@click.option("--state2", type=_path, required=True)
@_split_options
@_metric_option
@_format_option("table")
@click.option("--tol", type=float, default=None, help="Verdict tolerance")
@click.option("--repair-polar", is_flag=True, help="Replace U by its nearest unitary first")
@click.option("--lenient", is_flag=True, help="Accept truncated constants (trace within 5e-3)")
@click.pass_context
def analyze(ctx, unitary, state1, state2, split, system, metric, format_, tol, repair_polar, lenient):
    """Analyze a unitary file on a pair of joint input states."""
    _run(
        ctx,
        analyze_executor,
        command="analyze",
        unitary_path=unitary,
        state1_path=state1,
        state2_path=state2,
        split=split,
        system=system,
        metric=metric,
        format=format_,
        verdict_tol=tol,
        repair_polar=repair_polar,
        lenient=lenient,
    )


@cli.command()
@click.option("--unitary", type=_path, required=True)
@_split_options
@click.option("--correlated", is_flag=True, help="Search joint pure inputs instead of product inputs")
@click.option("--restarts", type=int, default=8, show_default=True)
@click.option("--iters", type=int, default=400, show_default=True)
@click.option("--step", type=float, default=0.25, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--start1", type=_path, default=None, help="Pure state seeding restart 0")
@click.option("--start2", type=_path, default=None)
@click.option("--repair-polar", is_flag=True)
@_format_option("json")
@click.pass_context
def witness(ctx, unitary, split, system, correlated, restarts, iters, step, seed, start1, start2, repair_polar, format_):
    """Search for an input pair whose system distance grows."""
    _run(
        ctx,
        witness_executor,
        command="witness",
        unitary_path=unitary,
        split=split,
        system=system,
        correlated=correlated,
        restarts=restarts,
        iters=iters,
        step=step,
        seed=seed,
        start1_path=start1,
        start2_path=start2,
        repair_polar=repair_polar,
        format=format_,
    )


@cli.command()
@click.option("--unitary", type=_path, default=None)
@click.option("--state", type=_path, default=None)
@click.option("--kraus", type=_path, default=None)
@click.option("--lenient", is_flag=True)
@_format_option("table")
@click.pass_context
def validate(ctx, unitary, state, kraus, lenient, format_):
    """Check a unitary, state or Kraus file."""
    _run(
        ctx,
        validate_executor,
        command="validate",
        unitary_path=unitary,
        state_path=state,
        kraus_path=kraus,
        lenient=lenient,
        format=format_,
    )


@cli.command()
@_scenario_argument
@click.option("--outdir", type=click.Path(path_type=Path, file_okay=False), required=True)
@_mode_option
@_format_option("table")
@click.pass_context
def export(ctx, name, outdir, mode, format_):
    """Write a built-in scenario as unitary and state files."""
    _run(
        ctx,
        export_executor,
        command="export",
        scenario=name,
        outdir=outdir,
        mode=mode,
        format=format_,
    )


@cli.command()
@click.option("--instances", type=int, default=500, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@_format_option("table")
@click.pass_context
def sweep(ctx, instances, seed, format_):
    """Count subsystem exclusivity and Theorem-2 outcomes on random instances."""
    _run(
        ctx,
        sweep_executor,
        command="sweep",
        instances=instances,
        seed=seed,
        format=format_,
    )


def main() -> None:
    cli(prog_name="divisi")
