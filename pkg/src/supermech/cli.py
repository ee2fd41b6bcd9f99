from __future__ import annotations

from pathlib import Path

import typer
from rich.console import Console
from rich.table import Table

from . import __version__
from .atlasfile import atlas_report, bundled_atlases, parse_atlas
from .config_store import default_document, get_config_path, write_raw_toml
from .errors import ConfigError, ModelError, ParityError
from .logging import get_logger, setup_logging
from .modelfile import bundled_models, parse_model
from .render import render_atlas_report, render_checklist, render_report
from .report import analyze
from .schemas import Checklist, encode_kv
from .settings import SupermechSettings, find_config_root, load_settings
from .verify import SUITES, VerifyOptions, run_suites

logger = get_logger(__name__)

EXIT_CONFIG = 1
EXIT_PARSE = 2
EXIT_DEGENERATE = 3
EXIT_FAILED = 4

console = Console()


def _print_version_and_exit() -> None:
    typer.echo(__version__)
    raise typer.Exit()


def _version_callback(value: bool) -> None:
    if value:
        _print_version_and_exit()


def _settings() -> SupermechSettings:
    try:
        return load_settings(find_config_root())
    except ConfigError as e:
        typer.echo(f"error: {e}", err=True)
        raise typer.Exit(code=EXIT_CONFIG)


def _emit(payload: str, out: Path | None) -> None:
    if out is None:
        typer.echo(payload, nl=False)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(payload, encoding="utf-8")
    typer.echo(f"✓ Report written to {out}", err=True)


app = typer.Typer(
    add_completion=False,
    invoke_without_command=True,
    help="Symbolic supermechanics: super-Lagrangians, Cartan forms and the super-Legendre map.",
)
atlas_app = typer.Typer(help="Check atlases of coordinate superdomains.")
app.add_typer(atlas_app, name="atlas")


@app.callback()
def app_main(
    ctx: typer.Context,
    version: bool = typer.Option(
        False,
        "--version",
        help="Show the version and exit.",
        callback=_version_callback,
        is_eager=True,
    ),
    debug: bool = typer.Option(
        False,
        "--debug/--no-debug",
        help="Log every pipeline step to stderr.",
    ),
) -> None:
    """supermech CLI - analyze super-Lagrangians and verify the geometry behind them."""
    setup_logging(debug=debug)
    if ctx.invoked_subcommand is None:
        typer.echo(ctx.get_help())
        raise typer.Exit()


@app.command("analyze", help="Analyze the model in FILE and print its report.")
def analyze_command(
    file: Path = typer.Argument(..., help="Model file to analyze."),
    format: str = typer.Option(
        None,
        "--format",
        "-f",
        help="Report format: text or kv (defaults to the config value).",
    ),
    out: Path = typer.Option(
        None,
        "--out",
        "-o",
        help="Write the report to this path instead of stdout.",
    ),
    timing: bool = typer.Option(
        None,
        "--timing/--no-timing",
        help="Include elapsed seconds in the report.",
    ),
) -> None:
    """Exit codes: 0 ok, 2 parse error, 3 degenerate Lagrangian, 4 failed check."""
    settings = _settings()
    report_format = format or settings.report.format
    if report_format not in ("text", "kv"):
        typer.echo(f"error: unknown format {report_format!r} (use text or kv)", err=True)
        raise typer.Exit(code=EXIT_PARSE)

    try:
        spec = parse_model(file)
    except (ModelError, ParityError) as e:
        typer.echo(f"error: {file}: {e}", err=True)
        raise typer.Exit(code=EXIT_PARSE)

    report = analyze(spec, timing=settings.report.timing if timing is None else timing)
    if report_format == "kv":
        _emit(encode_kv(report).decode(), out)
    else:
        _emit(render_report(report), out)

    if not report.regular:
        raise typer.Exit(code=EXIT_DEGENERATE)
    if not all(check.passed for check in report.checks):
        raise typer.Exit(code=EXIT_FAILED)


def _summary_table(checklists: list[Checklist]) -> Table:
    table = Table(title="Verification", show_header=True)
    table.add_column("Suite", style="cyan")
    table.add_column("Checks", justify="right")
    table.add_column("Failed", justify="right")
    table.add_column("Status")
    for checklist in checklists:
        failed = len(checklist.failures)
        status = "[green]✓ passed[/green]" if checklist.passed else "[red]✗ failed[/red]"
        table.add_row(checklist.suite, str(len(checklist.checks)), str(failed), status)
    return table


@app.command("verify", help="Run the built-in verification suites.")
def verify_command(
    suite: str = typer.Option(
        "all",
        "--suite",
        "-s",
        help=f"Suite to run: {', '.join(SUITES)} or all.",
    ),
    seed: int = typer.Option(
        None,
        "--seed",
        min=0,
        help="Seed for randomized cases (defaults to the config value).",
    ),
    jobs: int = typer.Option(
        None,
        "--jobs",
        "-j",
        min=1,
        help="Worker threads for independent cases.",
    ),
) -> None:
    if suite != "all" and suite not in SUITES:
        typer.echo(f"error: unknown suite {suite!r}; known: {', '.join(SUITES)}, all", err=True)
        raise typer.Exit(code=EXIT_PARSE)
    options = VerifyOptions.from_settings(_settings(), seed=seed, jobs=jobs)
    checklists = run_suites(None if suite == "all" else [suite], options)
    for checklist in checklists:
        typer.echo(render_checklist(checklist))
    console.print(_summary_table(checklists))
    if not all(checklist.passed for checklist in checklists):
        raise typer.Exit(code=EXIT_FAILED)


@atlas_app.command("check", help="Check the transitions of the atlas in FILE.")
def atlas_check_command(
    file: Path = typer.Argument(..., help="Atlas file to check."),
    format: str = typer.Option("text", "--format", "-f", help="Report format: text or kv."),
) -> None:
    settings = _settings()
    try:
        atlas = parse_atlas(file)
    except ModelError as e:
        typer.echo(f"error: {file}: {e}", err=True)
        raise typer.Exit(code=EXIT_PARSE)

    report = atlas_report(
        atlas,
        samples=settings.verify.sample_points,
        seed=settings.seed,
        tolerance=settings.verify.tolerance,
    )
    if format == "kv":
        typer.echo(encode_kv(report).decode(), nl=False)
    else:
        typer.echo(render_atlas_report(report), nl=False)
    if not report.passed:
        raise typer.Exit(code=EXIT_FAILED)


@app.command("init", help="Write a default supermech.toml in the current directory.")
def init_command(
    force: bool = typer.Option(False, "--force", help="Overwrite an existing file."),
    seed: int = typer.Option(0, "--seed", min=0, help="Default verification seed."),
) -> None:
    path = get_config_path(Path.cwd())
    if path.exists() and not force:
        typer.echo(f"error: {path} already exists (use --force to overwrite)", err=True)
        raise typer.Exit(code=EXIT_CONFIG)
    write_raw_toml(default_document(seed=seed), path)
    logger.info("config.written", path=str(path))
    typer.echo(f"✓ Config saved to {path}")


@app.command("examples", help="List bundled models and atlases, or print NAME.")
def examples_command(
    name: str = typer.Argument(None, help="Bundled model or atlas to print."),
) -> None:
    models, atlases = bundled_models(), bundled_atlases()
    if name is None:
        table = Table(title="Bundled examples", show_header=True)
        table.add_column("Name", style="cyan")
        table.add_column("Kind")
        for model in models:
            table.add_row(model, "model")
        for atlas in atlases:
            table.add_row(atlas, "atlas")
        console.print(table)
        return

    entry = models.get(name) or atlases.get(name)
    if entry is None:
        typer.echo(f"error: no bundled example {name!r}", err=True)
        raise typer.Exit(code=EXIT_PARSE)
    typer.echo(entry.read_text(encoding="utf-8"), nl=False)


def main() -> None:
    app()


if __name__ == "__main__":
    main()
