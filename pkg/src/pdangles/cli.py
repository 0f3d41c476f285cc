# this_file: src/pdangles/cli.py
"""Command-line interface for pdangles.

Commands and the CSV columns they write:

    angles       family,n,k,r,m,cos_theta_closed,cos_theta_numeric,abs_diff
    sweep        family,n,k,r,m,cos_theta_closed,cos_theta_numeric,abs_diff
    asymptotics  family,n,k,slope,expected,rel_err
    mesh-hodge   degree,index,cosine,angle
    mesh-dtn     degree,index,abs_eigenvalue,cosine_squared,discrepancy
    verify       suite,name,residual,tolerance,passed

JSON is written instead when ``--format json`` is given or the output ends in
``.json``. Every report gets a ``.provenance.json`` sidecar. Errors print one
``ERROR <module>:<code> <message>`` line on stderr; the exit code is 2 for invalid
input, 3 for a failed invariant in ``verify`` and 1 for any other failure.
"""

from __future__ import annotations

import sys
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any

import fire
import numpy as np
from loguru import logger
from rich.console import Console
from rich.panel import Panel
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

from . import __version__
from .cohom1 import (
    EXPONENT_COLUMNS,
    SWEEP_COLUMNS,
    Family,
    FamilyParams,
    closed_form_angle,
    default_radii,
    exponent_study,
    normalization_constants,
    numeric_angle,
    parameter_grid,
    sweep as run_sweep,
)
from .config import DEFAULT_TOLERANCES, Tolerances
from .dtn import DtNSolver, dtn_report
from .errors import (
    DegreeError,
    InvariantError,
    MeshValidationError,
    OffParseError,
    ParameterError,
    PdAnglesError,
)
from .forms import DiscreteForms
from .hodge import HodgeDecomposition
from .mesh import GeneratorSpec, MeshSource, betti_numbers
from .serialization import ReportSaver, write_cochain_csv
from .verify import CHECK_COLUMNS, run_verification

console = Console()

MESH_ANGLE_COLUMNS = ("degree", "index", "cosine", "angle")
T_SQUARED_COLUMNS = ("degree", "index", "abs_eigenvalue", "cosine_squared", "discrepancy")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID = 2
EXIT_INVARIANT = 3

INVALID_INPUT = (ParameterError, MeshValidationError, OffParseError, DegreeError)

GENERATOR_OPTIONS = ("n_radial", "n_angular", "r_in", "r_out", "divisions", "hole", "n_rings", "n_sectors", "radius")


class Command(Enum):
    ANGLES = "angles"
    SWEEP = "sweep"
    ASYMPTOTICS = "asymptotics"
    MESH_HODGE = "mesh-hodge"
    MESH_DTN = "mesh-dtn"
    VERIFY = "verify"

    @property
    def needs_mesh(self) -> bool:
        return self in (Command.MESH_HODGE, Command.MESH_DTN)


class OutputFormat(Enum):
    CSV = "csv"
    JSON = "json"


@dataclass
class RunConfig:
    """Everything one command needs.

    Attributes:
        command: Which command to run
        family, n, k, r, m: One family member (``angles``)
        families, ns, rs, ms: Sweep and exponent grids
        r_min, r_max, points: Radius range of the exponent fit
        mesh: Mesh source for the mesh commands
        degree: Single degree for the mesh commands, all degrees when None
        suite: Verification suite
        tolerances: Numerical tolerances
        output: Report path; a summary is printed when None
        format: Report format, inferred from the output suffix when None
        cochains: Directory for harmonic-field cochain CSV files
        workers: Process count of parallel sweeps
        seed: Seed of random test vectors
        verbose: Enable debug logging
    """

    command: Command
    family: str = "cpn"
    n: int = 2
    k: int = 1
    r: float = 0.7853981633974483
    m: int = 1
    families: tuple[str, ...] = ("cpn", "grassmann")
    ns: tuple[int, ...] = (2, 3, 4)
    rs: tuple[float, ...] = (0.1, 0.3, 0.7, 1.2)
    ms: tuple[int, ...] = (1,)
    r_min: float = 1e-3
    r_max: float = 0.1
    points: int = 9
    mesh: MeshSource | None = None
    degree: int | None = None
    suite: str = "all"
    tolerances: Tolerances = DEFAULT_TOLERANCES
    output: Path | None = None
    format: OutputFormat | None = None
    cochains: Path | None = None
    workers: int | None = None
    seed: int = 0
    verbose: bool = False

    def __post_init__(self) -> None:
        if isinstance(self.command, str):
            self.command = Command(self.command)
        if isinstance(self.format, str):
            try:
                self.format = OutputFormat(self.format.lower())
            except ValueError:
                raise ParameterError(f"unknown format '{self.format}' (choose csv or json)", module="cli") from None
        if self.output is not None:
            self.output = Path(self.output)
        if self.cochains is not None:
            self.cochains = Path(self.cochains)

    @property
    def resolved_format(self) -> OutputFormat:
        if self.format is not None:
            return self.format
        if self.output is not None and self.output.suffix.lower() == ".json":
            return OutputFormat.JSON
        return OutputFormat.CSV

    def validate(self) -> list[str]:
        """Return configuration problems (empty when valid)."""
        problems = []
        if self.command.needs_mesh and self.mesh is None:
            problems.append(f"{self.command.value} needs --path or --generator")
        if not self.command.needs_mesh and (self.mesh is not None or self.cochains is not None):
            problems.append(f"{self.command.value} takes no mesh options")
        if self.degree is not None and self.degree < 0:
            problems.append(f"degree must be non-negative, got {self.degree}")
        if self.workers is not None and self.workers < 1:
            problems.append(f"workers must be at least 1, got {self.workers}")
        return problems

    def parameters(self) -> dict[str, Any]:
        """The parameters the command depends on, for the provenance sidecar."""
        common = {"seed": self.seed}
        if self.command is Command.ANGLES:
            return {"family": self.family, "n": self.n, "k": self.k, "r": self.r, "m": self.m}
        if self.command is Command.SWEEP:
            return {"families": list(self.families), "ns": list(self.ns), "rs": list(self.rs), "ms": list(self.ms)}
        if self.command is Command.ASYMPTOTICS:
            return {
                "families": list(self.families),
                "ns": list(self.ns),
                "r_min": self.r_min,
                "r_max": self.r_max,
                "points": self.points,
            }
        if self.command is Command.VERIFY:
            return {"suite": self.suite, **common}
        return {"mesh": self.mesh.to_dict() if self.mesh else None, "degree": self.degree, **common}


@dataclass
class Outcome:
    """What a command produced: the JSON report and its CSV rendering."""

    report: Any
    rows: list[dict] = field(default_factory=list)
    columns: tuple[str, ...] = ()
    failed: list[str] = field(default_factory=list)


# ----- command bodies ----------------------------------------------------------


def _angles(config: RunConfig) -> Outcome:
    params = FamilyParams(config.family, config.n, config.k, config.r, config.m)
    closed = closed_form_angle(params)
    numeric = numeric_angle(params, config.tolerances)
    row = {
        **params.to_dict(),
        "cos_theta_closed": closed.cos_theta,
        "cos_theta_numeric": numeric.cos_theta,
        "abs_diff": abs(closed.cos_theta - numeric.cos_theta),
    }
    report = {
        "closed_form": closed.to_dict(),
        "numeric": numeric.to_dict(),
        "abs_diff": row["abs_diff"],
        "normalization": normalization_constants(params),
    }
    return Outcome(report, [row], SWEEP_COLUMNS)


def _families(config: RunConfig) -> list[Family]:
    return [Family.from_string(name) for name in config.families]


def _sweep(config: RunConfig) -> Outcome:
    grid = parameter_grid(_families(config), config.ns, config.rs, config.ms)
    rows = run_sweep(grid, config.tolerances, config.workers)
    return Outcome({"columns": list(SWEEP_COLUMNS), "rows": rows}, rows, SWEEP_COLUMNS)


def _asymptotics(config: RunConfig) -> Outcome:
    if not 0 < config.r_min < config.r_max:
        raise ParameterError(f"need 0 < r_min < r_max, got {config.r_min}, {config.r_max}", module="cohom1")
    radii = default_radii(config.points, config.r_min, config.r_max)
    closing = [float(u) for u in np.geomspace(1e-3, 1e-2, max(config.points, 5))]
    fits = exponent_study(_families(config), config.ns, radii, closing)
    return Outcome(
        {"r_grid": radii, "u_grid": closing, "fits": [fit.to_dict() for fit in fits]},
        [fit.row() for fit in fits],
        EXPONENT_COLUMNS,
    )


def _build_mesh(config: RunConfig) -> tuple[DiscreteForms, HodgeDecomposition]:
    complex_, geometry = config.mesh.build()
    forms = DiscreteForms(complex_, geometry, config.tolerances)
    return forms, HodgeDecomposition(forms)


def _degrees(config: RunConfig, top: int) -> list[int]:
    if config.degree is None:
        return list(range(top + 1))
    if config.degree > top:
        raise DegreeError(f"degree {config.degree} outside 0..{top}", module="cli")
    return [config.degree]


def dump_harmonic_fields(hodge: HodgeDecomposition, directory: Path, degrees: Iterable[int]) -> list[Path]:
    """Write every basis field of H^p_N and H^p_D as ``h_n_<p>_<i>.csv`` / ``h_d_<p>_<i>.csv``."""
    written = []
    for p in degrees:
        for label, basis in (("h_n", hodge.harmonic_neumann_fields(p)), ("h_d", hodge.harmonic_dirichlet_fields(p))):
            for i, cochain in enumerate(basis.cochains()):
                written.append(write_cochain_csv(cochain, directory / f"{label}_{p}_{i}.csv"))
    logger.info(f"Wrote {len(written)} harmonic-field cochains to {directory}")
    return written


def _mesh_summary(forms: DiscreteForms, config: RunConfig) -> dict:
    return {
        "source": config.mesh.to_dict(),
        "dimension": forms.dim,
        "counts": list(forms.complex.counts),
        "betti": list(betti_numbers(forms.complex)),
        "closed": forms.is_closed,
    }


def _mesh_hodge(config: RunConfig) -> Outcome:
    forms, hodge = _build_mesh(config)
    degrees = _degrees(config, forms.dim)
    reports = [hodge.report(p, config.seed) for p in degrees]
    if config.cochains is not None:
        dump_harmonic_fields(hodge, config.cochains, degrees)
    rows = [
        {"degree": item["degree"], "index": i, "cosine": cosine, "angle": angle}
        for item in reports
        for i, (cosine, angle) in enumerate(zip(item["cosines"], item["angles"], strict=True))
    ]
    return Outcome({"mesh": _mesh_summary(forms, config), "degrees": reports}, rows, MESH_ANGLE_COLUMNS)


def _mesh_dtn(config: RunConfig) -> Outcome:
    forms, hodge = _build_mesh(config)
    solver = DtNSolver(forms)
    degrees = _degrees(config, forms.dim - 1)
    reports = [dtn_report(solver, hodge, p, config.seed) for p in degrees]
    if config.cochains is not None:
        dump_harmonic_fields(hodge, config.cochains, degrees)
    rows = []
    for item in reports:
        spectrum = item.get("t_squared")
        if spectrum is None:
            continue
        for i, (value, target, miss) in enumerate(
            zip(spectrum["abs_eigenvalues"], spectrum["cosines_squared"], spectrum["discrepancies"], strict=True)
        ):
            rows.append(
                {"degree": item["degree"], "index": i, "abs_eigenvalue": value, "cosine_squared": target, "discrepancy": miss}
            )
    return Outcome({"mesh": _mesh_summary(forms, config), "degrees": reports}, rows, T_SQUARED_COLUMNS)


def _verify(config: RunConfig) -> Outcome:
    result = run_verification(config.suite, config.tolerances, config.workers)
    rows = [{key: value for key, value in check.to_dict().items() if key != "detail"} for check in result.checks]
    return Outcome(result.to_dict(), rows, CHECK_COLUMNS, failed=[f"{c.suite}/{c.name}" for c in result.failures])


HANDLERS: dict[Command, Callable[[RunConfig], Outcome]] = {
    Command.ANGLES: _angles,
    Command.SWEEP: _sweep,
    Command.ASYMPTOTICS: _asymptotics,
    Command.MESH_HODGE: _mesh_hodge,
    Command.MESH_DTN: _mesh_dtn,
    Command.VERIFY: _verify,
}


# ----- running and reporting -----------------------------------------------------


def _configure_logging(verbose: bool) -> None:
    logger.remove()
    logger.add(console.print, format="{message}", level="DEBUG" if verbose else "INFO")


def _print_rows(title: str, rows: list[dict], columns: tuple[str, ...], limit: int = 40) -> None:
    table = Table(title=title)
    for column in columns:
        table.add_column(column)
    for row in rows[:limit]:
        table.add_row(*(f"{row[c]:.12g}" if isinstance(row[c], float) else str(row[c]) for c in columns))
    console.print(table)
    if len(rows) > limit:
        console.print(f"[dim]... {len(rows) - limit} more rows; use --output to save all[/dim]")


def _write(config: RunConfig, outcome: Outcome) -> Path:
    saver = ReportSaver()
    if config.resolved_format is OutputFormat.CSV:
        path = saver.save_csv(outcome.rows, outcome.columns, config.output)
    else:
        path = saver.save_json(outcome.report, config.output)
    saver.save_provenance(
        path,
        command=config.command.value,
        parameters=config.parameters(),
        tolerances=config.tolerances.to_dict(),
        version=__version__,
    )
    return path


def _report_error(error: Exception, line: str, verbose: bool) -> None:
    console.print(f"\n[bold red]✗ Error:[/bold red] {error!s}")
    print(line, file=sys.stderr)
    if verbose:
        console.print_exception()


def run(config: RunConfig) -> int:
    """Run one command and return its exit code.

    Args:
        config: Command and parameters

    Returns:
        0 on success, 2 on invalid input, 3 when ``verify`` finds a failed invariant,
        1 on any other failure
    """
    _configure_logging(config.verbose)
    try:
        problems = config.validate()
        if problems:
            raise ParameterError("; ".join(problems), module="cli")
        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            console=console,
            transient=True,
        ) as progress:
            task = progress.add_task(f"Running {config.command.value}...", total=None)
            outcome = HANDLERS[config.command](config)
            progress.update(task, completed=True)

        if config.output is not None:
            path = _write(config, outcome)
            console.print(f"\n[bold green]✓[/bold green] Wrote {config.command.value} report to '{path}'")
        else:
            _print_rows(config.command.value, outcome.rows, outcome.columns)

        if outcome.failed:
            raise InvariantError(f"{len(outcome.failed)} invariant(s) failed: {', '.join(outcome.failed)}")
    except InvariantError as e:
        _report_error(e, e.format_line(), config.verbose)
        return EXIT_INVARIANT
    except INVALID_INPUT as e:
        _report_error(e, e.format_line(), config.verbose)
        return EXIT_INVALID
    except PdAnglesError as e:
        _report_error(e, e.format_line(), config.verbose)
        return EXIT_FAILURE
    except OSError as e:
        _report_error(e, f"ERROR io:{type(e).__name__} {e}", config.verbose)
        return EXIT_INVALID
    return EXIT_OK


# ----- fire entry points -----------------------------------------------------------


def _as_tuple(value: Any, cast: Callable[[Any], Any]) -> tuple:
    """Accept ``2,3,4`` as parsed by fire (a tuple) or as a plain string."""
    if isinstance(value, str):
        items = [item for item in value.replace(" ", "").split(",") if item]
    elif isinstance(value, Iterable):
        items = list(value)
    else:
        items = [value]
    return tuple(cast(item) for item in items)


def _tolerances(overrides: dict | None) -> Tolerances:
    return DEFAULT_TOLERANCES.with_overrides(**(overrides or {}))


def _mesh_source(path: str | None, generator: str | None, options: dict[str, Any]) -> MeshSource:
    params = {name: value for name, value in options.items() if value is not None}
    if generator is None:
        if params:
            raise MeshValidationError(f"generator options given without --generator: {', '.join(params)}")
        return MeshSource(path=Path(path) if path is not None else None)
    return MeshSource(path=Path(path) if path is not None else None, generator=GeneratorSpec(generator, params))


def _finish(config_factory: Callable[[], RunConfig], verbose: bool) -> None:
    try:
        config = config_factory()
    except PdAnglesError as e:
        _configure_logging(verbose)
        _report_error(e, e.format_line(), verbose)
        raise SystemExit(EXIT_INVALID) from None
    code = run(config)
    if code != EXIT_OK:
        raise SystemExit(code)


def version():
    """Display version information."""
    console.print(
        Panel.fit(
            f"[bold cyan]pdangles[/bold cyan] version [bold green]{__version__}[/bold green]",
            title="Version Info",
        )
    )


def angles(
    family: str = "cpn",
    n: int = 2,
    k: int = 1,
    r: float = 0.7853981633974483,
    m: int = 1,
    output: str | None = None,
    format: str | None = None,
    tol: dict | None = None,
    verbose: bool = False,
):
    """Duality angle of one family member, in closed form and by shooting.

    Args:
        family: cpn, lens or grassmann
        n: Dimension parameter, at least 2
        k: Degree index in 1..n-1 (the angle lives in degree 2k)
        r: Tube radius in (0, pi/2)
        m: Euler class of the lens bundle (lens only)
        output: Report path (CSV columns family,n,k,r,m,cos_theta_closed,cos_theta_numeric,abs_diff)
        format: csv or json
        tol: Tolerance overrides, e.g. "{ode_rtol: 1e-11}"
        verbose: Enable verbose logging
    """
    _finish(
        lambda: RunConfig(
            Command.ANGLES, family=family, n=n, k=k, r=r, m=m, output=output, format=format,
            tolerances=_tolerances(tol), verbose=verbose,
        ),
        verbose,
    )


def sweep(
    families: Any = "cpn,grassmann",
    ns: Any = "2,3,4,5,6",
    rs: Any = "0.1,0.3,0.7,1.2",
    ms: Any = "1",
    workers: int | None = None,
    output: str | None = None,
    format: str | None = None,
    tol: dict | None = None,
    verbose: bool = False,
):
    """Closed form against shooting over a parameter grid, k running over 1..n-1.

    Args:
        families: Comma-separated families
        ns: Comma-separated n values
        rs: Comma-separated radii
        ms: Comma-separated lens Euler classes (lens only)
        workers: Process count (1 runs serially)
        output: Report path (CSV columns family,n,k,r,m,cos_theta_closed,cos_theta_numeric,abs_diff)
        format: csv or json
        tol: Tolerance overrides
        verbose: Enable verbose logging
    """
    _finish(
        lambda: RunConfig(
            Command.SWEEP, families=_as_tuple(families, str), ns=_as_tuple(ns, int),
            rs=_as_tuple(rs, float), ms=_as_tuple(ms, int), workers=workers, output=output,
            format=format, tolerances=_tolerances(tol), verbose=verbose,
        ),
        verbose,
    )


def asymptotics(
    families: Any = "cpn,grassmann",
    ns: Any = "2,3,4",
    r_min: float = 1e-3,
    r_max: float = 0.1,
    points: int = 9,
    output: str | None = None,
    format: str | None = None,
    verbose: bool = False,
):
    """Decay exponent of 1 - cos(theta) as the tube shrinks, and the closing exponent.

    Args:
        families: Comma-separated families
        ns: Comma-separated n values
        r_min: Smallest radius of the log-spaced grid
        r_max: Largest radius, at most 0.1
        points: Grid size, at least 5
        output: Report path (CSV columns family,n,k,slope,expected,rel_err)
        format: csv or json
        verbose: Enable verbose logging
    """
    _finish(
        lambda: RunConfig(
            Command.ASYMPTOTICS, families=_as_tuple(families, str), ns=_as_tuple(ns, int),
            r_min=r_min, r_max=r_max, points=points, output=output, format=format, verbose=verbose,
        ),
        verbose,
    )


def _mesh_command(
    command: Command,
    path: str | None,
    generator: str | None,
    options: dict[str, Any],
    degree: int | None,
    cochains: str | None,
    seed: int,
    output: str | None,
    format: str | None,
    tol: dict | None,
    verbose: bool,
) -> None:
    _finish(
        lambda: RunConfig(
            command, mesh=_mesh_source(path, generator, options), degree=degree, cochains=cochains,
            seed=seed, output=output, format=format, tolerances=_tolerances(tol), verbose=verbose,
        ),
        verbose,
    )


def mesh_hodge(
    path: str | None = None,
    generator: str | None = None,
    degree: int | None = None,
    n_radial: int | None = None,
    n_angular: int | None = None,
    r_in: float | None = None,
    r_out: float | None = None,
    divisions: int | None = None,
    hole: int | None = None,
    n_rings: int | None = None,
    n_sectors: int | None = None,
    radius: float | None = None,
    cochains: str | None = None,
    seed: int = 0,
    output: str | None = None,
    format: str | None = None,
    tol: dict | None = None,
    verbose: bool = False,
):
    """Harmonic fields, their splits and the Poincare duality angles of a mesh.

    Args:
        path: OFF file (exclusive with generator)
        generator: annulus, punctured-torus, flat-torus or disk
        degree: Single degree; all degrees when omitted
        n_radial, n_angular, r_in, r_out: Annulus parameters
        divisions, hole: Torus parameters
        n_rings, n_sectors, radius: Disk parameters
        cochains: Directory for harmonic-field cochain CSV files
        seed: Seed of the random orthogonality test vectors
        output: Report path (CSV columns degree,index,cosine,angle)
        format: csv or json
        tol: Tolerance overrides
        verbose: Enable verbose logging
    """
    options = {name: value for name, value in locals().items() if name in GENERATOR_OPTIONS}
    _mesh_command(Command.MESH_HODGE, path, generator, options, degree, cochains, seed, output, format, tol, verbose)


def mesh_dtn(
    path: str | None = None,
    generator: str | None = None,
    degree: int | None = None,
    n_radial: int | None = None,
    n_angular: int | None = None,
    r_in: float | None = None,
    r_out: float | None = None,
    divisions: int | None = None,
    hole: int | None = None,
    n_rings: int | None = None,
    n_sectors: int | None = None,
    radius: float | None = None,
    cochains: str | None = None,
    seed: int = 0,
    output: str | None = None,
    format: str | None = None,
    tol: dict | None = None,
    verbose: bool = False,
):
    """Dirichlet-to-Neumann operators, the T^2 spectrum and cup-product residuals.

    Args:
        path: OFF file (exclusive with generator)
        generator: annulus, punctured-torus or disk (the mesh needs a boundary)
        degree: Single boundary degree; all of 0..n-1 when omitted
        n_radial, n_angular, r_in, r_out: Annulus parameters
        divisions, hole: Torus parameters
        n_rings, n_sectors, radius: Disk parameters
        cochains: Directory for harmonic-field cochain CSV files
        seed: Seed of the random test vectors
        output: Report path (CSV columns degree,index,abs_eigenvalue,cosine_squared,discrepancy)
        format: csv or json
        tol: Tolerance overrides
        verbose: Enable verbose logging
    """
    options = {name: value for name, value in locals().items() if name in GENERATOR_OPTIONS}
    _mesh_command(Command.MESH_DTN, path, generator, options, degree, cochains, seed, output, format, tol, verbose)


def verify(
    suite: str = "all",
    workers: int | None = None,
    output: str | None = None,
    format: str | None = None,
    tol: dict | None = None,
    verbose: bool = False,
):
    """Run the invariant battery; exits with 3 when any invariant fails.

    Args:
        suite: all, cohom1 or mesh
        workers: Process count of the parameter sweep
        output: Report path (CSV columns suite,name,residual,tolerance,passed)
        format: csv or json
        tol: Tolerance overrides
        verbose: Enable verbose logging
    """
    _finish(
        lambda: RunConfig(
            Command.VERIFY, suite=suite, workers=workers, output=output, format=format,
            tolerances=_tolerances(tol), verbose=verbose,
        ),
        verbose,
    )


def main():
    """Main entry point for the CLI."""
    fire.Fire(
        {
            "version": version,
            "angles": angles,
            "sweep": sweep,
            "asymptotics": asymptotics,
            "mesh-hodge": mesh_hodge,
            "mesh-dtn": mesh_dtn,
            "verify": verify,
        }
    )


if __name__ == "__main__":
    main()
