# ABOUTME: CLI interface for qkdgain using Typer framework
# ABOUTME: Provides commands for rate, sweep, bounds, pns-verify and scenarios
import io
import logging
from collections.abc import Sequence
from enum import Enum
from pathlib import Path
from typing import Annotated, NoReturn

import numpy as np
import typer

from qkdgain.channel_model import click_model
from qkdgain.config import get_config
from qkdgain.exceptions import (
    InvalidSweepConfigError,
    NoClicksError,
    NumericalError,
    QkdGainError,
    RootFindingError,
    ScenarioNotFoundError,
)
from qkdgain.finite_size import finite_size_gain
from qkdgain.key_rate import EcModel, ec_model
from qkdgain.logging_config import setup_logging
from qkdgain.optimize import (
    SweepConfig,
    evaluate_operating_point,
    loss_bounds,
    optimize_operating_point,
    sweep,
)
from qkdgain.photon_sources import (
    Source,
    mean_photon_number,
    photon_stats,
    source_kind,
    with_mean_photon_number,
)
from qkdgain.pns_fock import MAX_PHOTONS, verify_pns
from qkdgain.report import (
    BOUNDS_COLUMNS,
    FINITE_SIZE_COLUMNS,
    PNS_COLUMNS,
    RATE_COLUMNS,
    SWEEP_COLUMNS,
    OutputFormat,
    Record,
    bounds_record,
    pns_records,
    rate_record,
    sweep_records,
    write_records,
)
from qkdgain.scenarios import Scenario, build_source, get_scenario, list_scenarios

__all__ = ["cli"]

EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_NUMERICAL_ERROR = 3

DEFAULT_SCENARIO = "KTH15"

app = typer.Typer(
    help="qkdgain - secure key rates of BB84 over lossy fiber\n\n"
    "Evaluate gains for weak coherent, downconversion and single-photon sources, "
    "sweep them over distance and verify the photon-number-splitting transformation."
)


class SourceChoice(str, Enum):
    wcp = "wcp"
    pdc = "pdc"
    single = "single"


class EcChoice(str, Enum):
    shannon = "shannon"
    table = "table"


class FormatChoice(str, Enum):
    csv = "csv"
    json = "json"


ScenarioOption = Annotated[
    str,
    typer.Option("--scenario", "-s", help="Preset name (see 'qkdgain scenarios') or file path"),
]
SourceOption = Annotated[
    SourceChoice | None,
    typer.Option("--source", help="Signal source, defaults to the scenario's source"),
]
MuOption = Annotated[float | None, typer.Option("--mu", help="Mean photon number")]
ChiOption = Annotated[float | None, typer.Option("--chi", help="Squeezing parameter (pdc)")]
EtaAOption = Annotated[
    float | None, typer.Option("--eta-a", help="Trigger detector efficiency (pdc)")
]
DarkAOption = Annotated[
    float | None, typer.Option("--dark-a", help="Trigger dark-count probability (pdc)")
]
EtaCOption = Annotated[
    float | None, typer.Option("--eta-c", help="Fiber coupling efficiency (pdc)")
]
EcOption = Annotated[
    EcChoice | None,
    typer.Option("--ec", help="Error-correction cost: shannon limit or tabulated protocol"),
]
FormatOption = Annotated[FormatChoice, typer.Option("--format", help="Output format")]
OutputOption = Annotated[
    Path | None, typer.Option("--output", "-o", help="Write records to a file instead of stdout")
]


def version_callback(value: bool) -> None:
    """Print version and exit."""
    if value:
        from importlib.metadata import version

        typer.echo(f"qkdgain {version('qkd-gain')}")
        raise typer.Exit()


def format_error_with_help(error: QkdGainError, context: str = "") -> str:
    """Format error message with helpful suggestions

    Args:
        error: The exception that occurred
        context: Command name (e.g., 'rate', 'sweep')

    Returns:
        Formatted error message with suggestions
    """
    message = f"Error: {error}\n"

    if isinstance(error, ScenarioNotFoundError):
        message += "\nAvailable scenarios:\n"
        for scenario in list_scenarios():
            message += f"   {scenario.name}\n"
        message += "\nPass a preset name or the path of a key = value scenario file.\n"

    elif isinstance(error, NoClicksError):
        message += "\nTry a shorter --distance or a scenario with nonzero dark counts.\n"

    elif isinstance(error, InvalidSweepConfigError) and context == "sweep":
        message += "\nCheck --l-min <= --l-max and --steps >= 1.\n"

    return message.rstrip()


def _exit_code(error: QkdGainError) -> int:
    if isinstance(error, (NumericalError, RootFindingError, NoClicksError)):
        return EXIT_NUMERICAL_ERROR
    return EXIT_INPUT_ERROR


def _fail(error: QkdGainError, context: str) -> NoReturn:
    typer.echo(format_error_with_help(error, context=context), err=True)
    raise SystemExit(_exit_code(error))


def _resolve_source(
    scenario: Scenario,
    kind: SourceChoice | None,
    mu: float | None,
    chi: float | None,
    eta_a: float | None,
    dark_a: float | None,
    eta_c: float | None,
) -> Source:
    """Scenario source with command-line overrides applied"""
    if kind is None and all(v is None for v in (mu, chi, eta_a, dark_a, eta_c)):
        return scenario.source

    base = scenario.source
    chosen = kind.value if kind is not None else source_kind(base)
    if mu is None and chi is None and source_kind(base) == chosen:
        mu = mean_photon_number(base)
    return build_source(chosen, mu=mu, chi=chi, eta_a=eta_a, dark_a=dark_a, eta_c=eta_c)


def _resolve_ec(ec: EcChoice | None) -> EcModel:
    return ec_model(ec.value if ec is not None else get_config().ec_mode)


def _distances(l_min: float, l_max: float, steps: int) -> tuple[float, ...]:
    if l_min > l_max:
        raise InvalidSweepConfigError(f"l_min = {l_min} exceeds l_max = {l_max}")
    if steps < 1:
        raise InvalidSweepConfigError(f"steps must be >= 1, got {steps}")
    if steps == 1 or l_min == l_max:
        return (l_min,)
    return tuple(float(x) for x in np.linspace(l_min, l_max, steps))


def _emit(
    records: Sequence[Record],
    columns: Sequence[str],
    fmt: FormatChoice,
    output: Path | None,
) -> None:
    digits = get_config().csv_digits
    out_fmt: OutputFormat = "json" if fmt == FormatChoice.json else "csv"
    if output is None:
        buffer = io.StringIO()
        write_records(records, columns, buffer, out_fmt, digits)
        typer.echo(buffer.getvalue(), nl=False)
        return
    output.parent.mkdir(parents=True, exist_ok=True)
    with output.open("w", newline="") as stream:
        write_records(records, columns, stream, out_fmt, digits)
    typer.echo(f"✓ Wrote {len(records)} record(s) to {output}", err=True)


@app.callback()
def main(
    verbose: Annotated[
        bool, typer.Option("--verbose", "-v", help="Enable verbose logging")
    ] = False,
    log_file: Annotated[Path | None, typer.Option("--log-file", help="Write logs to file")] = None,
    version: Annotated[
        bool | None,
        typer.Option("--version", callback=version_callback, is_eager=True),
    ] = None,
) -> None:
    """qkdgain - secure key rates of BB84 over lossy fiber"""
    level = logging.getLevelName(get_config().log_level)
    if verbose or not isinstance(level, int):
        level = logging.DEBUG if verbose else logging.INFO
    setup_logging(level=level, log_file=log_file)


@app.command()
def rate(
    scenario: ScenarioOption = DEFAULT_SCENARIO,
    source: SourceOption = None,
    mu: MuOption = None,
    chi: ChiOption = None,
    eta_a: EtaAOption = None,
    dark_a: DarkAOption = None,
    eta_c: EtaCOption = None,
    distance: Annotated[float, typer.Option("--distance", "-d", help="Fiber length in km")] = 0.0,
    ec: EcOption = None,
    optimize: Annotated[
        bool, typer.Option("--optimize", help="Choose the mean photon number maximizing the gain")
    ] = False,
    n_tot: Annotated[
        float | None,
        typer.Option("--n-tot", help="Signals in the run; adds the finite-size gain"),
    ] = None,
    confidence: Annotated[
        float, typer.Option("--confidence", help="Confidence of the multi-photon bound")
    ] = 0.99,
    fmt: FormatOption = FormatChoice.csv,
    output: OutputOption = None,
) -> None:
    """Gain at one distance for a scenario"""
    try:
        resolved = get_scenario(scenario)
        src = _resolve_source(resolved, source, mu, chi, eta_a, dark_a, eta_c)
        link = resolved.link(distance)
        model = _resolve_ec(ec)

        if optimize:
            config = get_config()
            point = optimize_operating_point(
                src, link, model, (config.mu_min, config.mu_max), config.prescan_points
            )
            if point.mu is not None:
                src = with_mean_photon_number(src, point.mu)
            result = point.rate
        else:
            result = evaluate_operating_point(src, link, model)

        record = rate_record(
            resolved.name, source_kind(src), distance, mean_photon_number(src), result
        )
        columns: tuple[str, ...] = RATE_COLUMNS
        if n_tot is not None:
            delta, finite = finite_size_gain(
                photon_stats(src), click_model(src, link), model, n_tot, confidence
            )
            record.update(
                {
                    "n_tot": n_tot,
                    "confidence": confidence,
                    "delta": delta,
                    "gain_finite": finite.gain,
                }
            )
            columns += FINITE_SIZE_COLUMNS
    except QkdGainError as e:
        _fail(e, context="rate")

    _emit([record], columns, fmt, output)


@app.command("sweep")
def sweep_cmd(
    scenario: ScenarioOption = DEFAULT_SCENARIO,
    source: SourceOption = None,
    mu: MuOption = None,
    chi: ChiOption = None,
    eta_a: EtaAOption = None,
    dark_a: DarkAOption = None,
    eta_c: EtaCOption = None,
    l_min: Annotated[float, typer.Option("--l-min", help="First distance in km")] = 0.0,
    l_max: Annotated[float, typer.Option("--l-max", help="Last distance in km")] = 100.0,
    steps: Annotated[int, typer.Option("--steps", help="Number of distances")] = 101,
    bounds: Annotated[bool, typer.Option("--bounds", help="Add bound1..bound3 columns")] = False,
    optimize: Annotated[
        bool,
        typer.Option(
            "--optimize/--fixed-mu",
            help="Re-optimize the mean photon number at every distance",
        ),
    ] = True,
    ec: EcOption = None,
    workers: Annotated[
        int | None, typer.Option("--workers", help="Points evaluated concurrently")
    ] = None,
    fmt: FormatOption = FormatChoice.csv,
    output: OutputOption = None,
) -> None:
    """Gain over a range of distances"""
    try:
        resolved = get_scenario(scenario)
        config = get_config()
        sweep_config = SweepConfig(
            source=_resolve_source(resolved, source, mu, chi, eta_a, dark_a, eta_c),
            link=resolved.link(),
            lengths=_distances(l_min, l_max, steps),
            mu_search=(config.mu_min, config.mu_max),
            ec=_resolve_ec(ec),
            optimize_mu=optimize,
            with_bounds=bounds,
            workers=workers if workers is not None else config.workers,
            prescan_points=config.prescan_points,
        )
        result = sweep(sweep_config)
    except QkdGainError as e:
        _fail(e, context="sweep")

    _emit(sweep_records(result), SWEEP_COLUMNS, fmt, output)


@app.command("bounds")
def bounds_cmd(
    scenario: ScenarioOption = DEFAULT_SCENARIO,
    source: SourceOption = None,
    l_min: Annotated[float, typer.Option("--l-min", help="First distance in km")] = 0.0,
    l_max: Annotated[float, typer.Option("--l-max", help="Last distance in km")] = 100.0,
    steps: Annotated[int, typer.Option("--steps", help="Number of distances")] = 11,
    fmt: FormatOption = FormatChoice.csv,
    output: OutputOption = None,
) -> None:
    """Bounds 1-3 and their optimal mean photon numbers over distance"""
    try:
        resolved = get_scenario(scenario)
        kind = source.value if source is not None else source_kind(resolved.source)
        records = [
            bounds_record(length, loss_bounds(kind, resolved.link(length)))
            for length in _distances(l_min, l_max, steps)
        ]
    except QkdGainError as e:
        _fail(e, context="bounds")

    _emit(records, BOUNDS_COLUMNS, fmt, output)


@app.command("pns-verify")
def pns_verify(
    n_max: Annotated[
        int,
        typer.Option("--n-max", min=1, max=MAX_PHOTONS, help="Largest photon number to check"),
    ] = 4,
    random: Annotated[
        int, typer.Option("--random", min=0, help="Random polarizations per photon number")
    ] = 0,
    seed: Annotated[int, typer.Option("--seed", help="Seed of the random polarizations")] = 0,
    fmt: FormatOption = FormatChoice.csv,
    output: OutputOption = None,
) -> None:
    """Verify the photon-number-splitting transformation in both BB84 bases"""
    try:
        results = verify_pns(n_max=n_max, random_per_n=random, seed=seed)
    except QkdGainError as e:
        _fail(e, context="pns-verify")

    _emit(pns_records(results), PNS_COLUMNS, fmt, output)
    if not all(r.passed for r in results):
        raise SystemExit(EXIT_CHECK_FAILED)


@app.command("scenarios")
def scenarios_cmd() -> None:
    """List the compiled scenario presets"""
    typer.echo("Available scenarios:")
    for s in list_scenarios():
        typer.echo(f"   {s.name:<6} {s.description}")
        typer.echo(
            f"          alpha={s.alpha} dB/km  L_c={s.receiver_loss} dB  c={s.c_align}  "
            f"d_B={s.dark_b}  eta_B={s.eta_b}"
        )


# Entry point for pyproject.toml scripts
cli = app
