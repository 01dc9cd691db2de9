# -*- coding: utf-8 -*-
#
# Copyright (C) 2026 FASLab contributors.
#
# FASLab is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""FASLab command line interface.

Exit codes: 0 success, 1 configuration error, 2 numerical non-convergence,
3 validation failure. Logs go to standard error; data goes to standard
output unless ``--out`` names a file.
"""

import functools
import time

import click

from .bler_bounds import UnionWeightMode
from .channel_models import SINC_CONVENTIONS
from .errors import (
    ConfigurationError,
    ConvergenceError,
    DegenerateGridError,
    DomainError,
    FASLabError,
    ModelError,
    NumericalInconsistencyError,
    ValidationFailure,
)
from .logging import Logger
from .output import write_output, write_report
from .schemas import load_spec, load_spec_file
from .sweep import Experiment, run_sweep, validate

EXIT_OK = 0
EXIT_CONFIGURATION = 1
EXIT_NUMERICAL = 2
EXIT_VALIDATION = 3

EXIT_CODES = (
    (ValidationFailure, EXIT_VALIDATION),
    (ConvergenceError, EXIT_NUMERICAL),
    (NumericalInconsistencyError, EXIT_NUMERICAL),
    (ConfigurationError, EXIT_CONFIGURATION),
    (DomainError, EXIT_CONFIGURATION),
    (DegenerateGridError, EXIT_CONFIGURATION),
    (ModelError, EXIT_NUMERICAL),
)
"""Exit status of each error, first match wins."""

BLER_EXPERIMENTS = tuple(
    e for e in Experiment if e not in (Experiment.DIST_CURVES, Experiment.VALIDATE)
)


def exit_code(error):
    """Exit status for a library error."""
    for error_cls, code in EXIT_CODES:
        if isinstance(error, error_cls):
            return code
    return EXIT_NUMERICAL


def experiment_options(f):
    """Options shared by every experiment command."""
    options = [
        click.option(
            "-c",
            "--config",
            "config_path",
            type=click.Path(dir_okay=False),
            help="JSON experiment configuration.",
        ),
        click.option(
            "--set",
            "assignments",
            multiple=True,
            metavar="KEY=VALUE",
            help="Override a configuration field (repeatable, dotted keys).",
        ),
        click.option("-o", "--out", help="Output path, '-' for standard output."),
        click.option(
            "-f",
            "--format",
            "output_format",
            type=click.Choice(["csv", "json"]),
            help="Output format.",
        ),
        click.option("--seed", type=click.IntRange(0, 2**64 - 1), help="Base seed."),
        click.option("--threads", type=click.IntRange(min=1), help="Worker threads."),
        click.option(
            "--sinc",
            type=click.Choice(SINC_CONVENTIONS),
            help="Sinc convention of the fully correlated model.",
        ),
        click.option(
            "--union-weight",
            type=click.Choice([mode.value for mode in UnionWeightMode]),
            help="Union-bound weight of the conditional bound.",
        ),
        click.option(
            "--log-level",
            type=click.Choice(
                ["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False
            ),
            default="INFO",
            show_default=True,
            help="Verbosity of the log on standard error.",
        ),
        click.option(
            "--log-file",
            type=click.Path(dir_okay=False),
            help="Also append the log to this file.",
        ),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def handle_errors(f):
    """Map library errors onto exit codes."""

    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return f(*args, **kwargs)
        except FASLabError as e:
            Logger.get_logger().error(e.description)
            ctx.exit(exit_code(e))

    return wrapper


def _resolve_spec(default_experiment, config_path, assignments, **flags):
    """Load the configuration with ``--set`` and flag overrides applied."""
    overrides = list(assignments)
    fields = {
        "seed": flags.get("seed"),
        "threads": flags.get("threads"),
        "sinc": flags.get("sinc"),
        "union_weight": flags.get("union_weight"),
        "output.path": flags.get("out"),
        "output.format": flags.get("output_format"),
    }
    overrides.extend(
        (key, value) for key, value in fields.items() if value is not None
    )
    if config_path:
        return load_spec_file(config_path, overrides)
    return load_spec({"experiment": default_experiment.value}, overrides)


def _require(spec, experiments, command):
    if spec.experiment not in experiments:
        raise ConfigurationError(
            f"'faslab {command}' cannot run a '{spec.experiment.value}' experiment",
            field="experiment",
        )


@click.group()
@click.version_option(package_name="faslab")
def faslab():
    """Finite-blocklength BLER bounds of fluid antenna systems."""


@faslab.command("dist")
@experiment_options
@handle_errors
def dist(config_path, assignments, log_level, log_file, **flags):
    """Analytic and empirical law of the best-port amplitude."""
    Logger.initialize(log_level, log_file)
    spec = _resolve_spec(Experiment.DIST_CURVES, config_path, assignments, **flags)
    _require(spec, (Experiment.DIST_CURVES,), "dist")
    start = time.perf_counter()
    tables = run_sweep(spec)
    write_output(tables, spec.output_path, spec.output_format)
    Logger.get_logger().info("Done in %.1f s", time.perf_counter() - start)


@faslab.command("bler")
@experiment_options
@handle_errors
def bler(config_path, assignments, log_level, log_file, **flags):
    """BLER curves of a parameter sweep."""
    Logger.initialize(log_level, log_file)
    spec = _resolve_spec(Experiment.BLER_VS_SNR, config_path, assignments, **flags)
    _require(spec, BLER_EXPERIMENTS, "bler")
    start = time.perf_counter()
    curves = run_sweep(spec)
    write_output(curves, spec.output_path, spec.output_format)
    Logger.get_logger().info(
        "%d curves in %.1f s", len(curves), time.perf_counter() - start
    )


@faslab.command("validate")
@experiment_options
@handle_errors
def validate_command(config_path, assignments, log_level, log_file, **flags):
    """Cross-check the analytic law and bound against Monte Carlo."""
    Logger.initialize(log_level, log_file)
    spec = _resolve_spec(Experiment.VALIDATE, config_path, assignments, **flags)
    _require(spec, (Experiment.VALIDATE,), "validate")
    report = validate(spec)
    write_report(report, spec.output_path, spec.output_format)
    if not report.passed:
        raise ValidationFailure(report)
