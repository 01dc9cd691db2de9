# -*- coding: utf-8 -*-
#
# Copyright (C) 2026 FASLab contributors.
#
# FASLab is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Experiment sweeps.

A :class:`SweepSpec` names an experiment, the correlation models and
methods to evaluate, the fixed link parameters and one swept axis. Every
grid point of every curve is an independent task whose seed is derived
from the base seed and the task's grid ordinal; tasks run on a thread pool
and are collected in grid order, so the output does not depend on the
number of workers.

.. code-block:: python

    spec = load_spec(orjson.loads(config), ["seed=7"])
    curves = run_sweep(spec, threads=4)
    write_output(curves, "fig2.csv", "csv")
"""

import enum
import functools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .bler_bounds import (
    BenchmarkConfig,
    BlerMethod,
    ClampMode,
    SystemConfig,
    UnionWeightMode,
    analytic_bler_bound,
    conventional_bler_result,
    empirical_bler_bound,
    sample_fas_amplitudes,
)
from .channel_models import CorrelationModel, CorrelationSpec, PortGrid, derive_seed
from .config import (
    FASLAB_DEFAULT_SEED,
    FASLAB_DEFAULT_SIGMA,
    FASLAB_DEFAULT_SINC,
    FASLAB_DEFAULT_THREADS,
    FASLAB_DIST_GRID_POINTS,
    FASLAB_MC_MIN_SAMPLES,
    FASLAB_VALIDATION_THRESHOLDS,
)
from .errors import ConfigurationError, DomainError
from .fas_statistics import (
    AmplitudeDistribution,
    EmpiricalDistribution,
    distribution_table,
    ks_distance,
    pdf_normalization_residual,
)
from .logging import Logger


class Experiment(enum.Enum):
    """Experiments a sweep can run."""

    DIST_CURVES = "dist"
    BLER_VS_SNR = "bler_vs_snr"
    BLER_VS_N = "bler_vs_n"
    BLER_VS_W = "bler_vs_w"
    BLER_VS_U = "bler_vs_u"
    MODEL_COMPARISON = "model_comparison"
    VALIDATE = "validate"


AXIS_BY_EXPERIMENT = {
    Experiment.DIST_CURVES: "r",
    Experiment.BLER_VS_SNR: "snr_db",
    Experiment.BLER_VS_N: "port_count",
    Experiment.BLER_VS_W: "aperture",
    Experiment.BLER_VS_U: "users",
    Experiment.MODEL_COMPARISON: "port_count",
    Experiment.VALIDATE: "snr_db",
}
"""Name of the swept axis of each experiment."""

INTEGER_AXES = ("port_count", "users")

OPTIONAL_AXIS = (Experiment.DIST_CURVES, Experiment.VALIDATE)


@dataclass(frozen=True)
class SweepSpec:
    """A validated experiment definition."""

    experiment: Experiment
    models: tuple = (CorrelationModel.SIMPLE_REFERENCE,)
    methods: tuple = (BlerMethod.ANALYTIC_INTEGRAL,)
    port_counts: tuple = (10,)
    aperture: float = 2.0
    users: int = 20
    blocklength: int = 400
    snr_db: float = -15.0
    sigma: float = FASLAB_DEFAULT_SIGMA
    antennas: tuple = ()
    axis: tuple = ()
    mc_samples: int = 100000
    seed: int = FASLAB_DEFAULT_SEED
    threads: int = FASLAB_DEFAULT_THREADS
    sinc: str = FASLAB_DEFAULT_SINC
    union_weight_modes: tuple = (UnionWeightMode.PAPER_SUM,)
    clamp_mode: ClampMode = ClampMode.POINTWISE
    sampler_aperture: float = None
    output_path: str = "-"
    output_format: str = "csv"

    def __post_init__(self):
        """Coerce the enumerations and check the experiment is runnable."""
        set_ = functools.partial(object.__setattr__, self)
        set_("experiment", Experiment(self.experiment))
        set_("models", tuple(CorrelationModel(m) for m in self.models))
        set_("methods", tuple(BlerMethod(m) for m in self.methods))
        set_(
            "union_weight_modes",
            tuple(UnionWeightMode(m) for m in self.union_weight_modes),
        )
        set_("clamp_mode", ClampMode(self.clamp_mode))
        set_("port_counts", tuple(int(n) for n in self.port_counts))
        set_("antennas", tuple(int(L) for L in self.antennas))
        set_("axis", tuple(float(v) for v in self.axis))

        if not self.models:
            raise ConfigurationError("at least one model is required", field="models")
        if not self.port_counts or min(self.port_counts) < 1:
            raise ConfigurationError("port counts must be >= 1", field="port_counts")
        if not self.axis and self.experiment not in OPTIONAL_AXIS:
            raise ConfigurationError("the swept axis grid is empty", field="axis")
        if np.any(np.diff(self.axis) <= 0):
            raise ConfigurationError(
                "the swept axis grid must be strictly increasing", field="axis"
            )
        if self.axis_name in INTEGER_AXES and any(
            v != int(v) or v < 1 for v in self.axis
        ):
            raise ConfigurationError(
                f"'{self.axis_name}' takes integers >= 1", field="axis"
            )
        if self.experiment in (Experiment.DIST_CURVES, Experiment.VALIDATE):
            if not self.models[0].has_reference_port:
                raise ConfigurationError(
                    f"'{self.experiment.value}' needs a reference model first",
                    field="models",
                )
        if self.needs_samples and self.mc_samples < FASLAB_MC_MIN_SAMPLES:
            raise ConfigurationError(
                f"mc_samples must be >= {FASLAB_MC_MIN_SAMPLES}", field="mc_samples"
            )
        analytic = BlerMethod.ANALYTIC_INTEGRAL in self.methods
        if analytic and self.experiment not in OPTIONAL_AXIS:
            for model in self.models:
                if not model.has_reference_port:
                    raise ConfigurationError(
                        f"the analytic method is not available for model "
                        f"'{model.value}'; use 'empirical'",
                        field="methods",
                    )
        if self.output_format not in ("csv", "json"):
            raise ConfigurationError(
                f"unknown output format '{self.output_format}'", field="format"
            )

    @property
    def axis_name(self):
        """Name of the swept parameter."""
        return AXIS_BY_EXPERIMENT[self.experiment]

    @property
    def needs_samples(self):
        """Whether any Monte Carlo sampling is requested."""
        return (
            BlerMethod.MONTE_CARLO in self.methods
            or self.experiment in OPTIONAL_AXIS
        )

    def system(self, **overrides):
        """Link parameters, with swept values in ``overrides``."""
        params = dict(
            users=self.users,
            blocklength=self.blocklength,
            snr_db=self.snr_db,
            sigma=self.sigma,
            union_weight_mode=self.union_weight_modes[0],
            clamp_mode=self.clamp_mode,
        )
        params.update(overrides)
        return SystemConfig(**params)


@dataclass(frozen=True)
class BlerCurve:
    """A labelled BLER curve over the swept axis."""

    label: str
    axis: tuple
    bler: tuple
    std_err: tuple
    methods: tuple

    def __post_init__(self):
        """Check the columns line up and hold probabilities."""
        lengths = {len(self.axis), len(self.bler), len(self.std_err), len(self.methods)}
        if len(lengths) != 1:
            raise DomainError("curve", self.label, "columns of equal length")
        if any(not 0.0 <= b <= 1.0 for b in self.bler):
            raise DomainError("bler", self.label, "values in [0, 1]")
        if any(not e >= 0.0 for e in self.std_err):
            raise DomainError("std_err", self.label, "values >= 0")

    def __len__(self):
        """Number of points."""
        return len(self.axis)


@dataclass(frozen=True)
class DistributionTable:
    """Analytic and empirical law of |g_FAS| on a grid of amplitudes."""

    label: str
    columns: dict


@dataclass(frozen=True)
class _CurvePlan:
    label: str
    model: CorrelationModel = None
    method: BlerMethod = BlerMethod.CLOSED_FORM
    port_count: int = None
    antennas: int = None
    union_weight_mode: UnionWeightMode = UnionWeightMode.PAPER_SUM


@functools.lru_cache(maxsize=256)
def _correlation(model, port_count, aperture, sigma, sinc):
    return CorrelationSpec.build(model, PortGrid(port_count, aperture), sigma, sinc)


def _fmt(value):
    return f"{value:g}"


def curve_label(model, method, port_count=None, aperture=None, union_weight=None):
    """Label ``<model>-<method>-N<N>`` (``-W<W>`` when N is swept)."""
    label = f"{CorrelationModel(model).value}-{BlerMethod(method).value}"
    label += f"-N{port_count}" if port_count is not None else f"-W{_fmt(aperture)}"
    if union_weight is not None:
        mode = UnionWeightMode(union_weight)
        if mode is not UnionWeightMode.PAPER_SUM:
            label += f"-{mode.value}"
    return label


def benchmark_label(antennas):
    """Label ``conventional-L<L>``."""
    return f"conventional-L{antennas}"


def _plan_curves(spec):
    sweeps_ports = spec.axis_name == "port_count"
    plans = []
    for model in spec.models:
        for method in spec.methods:
            for mode in spec.union_weight_modes:
                for port_count in (None,) if sweeps_ports else spec.port_counts:
                    plans.append(
                        _CurvePlan(
                            label=curve_label(
                                model,
                                method,
                                port_count,
                                spec.aperture,
                                mode if len(spec.union_weight_modes) > 1 else None,
                            ),
                            model=model,
                            method=method,
                            port_count=port_count,
                            union_weight_mode=mode,
                        )
                    )
    for antennas in spec.antennas:
        plans.append(_CurvePlan(label=benchmark_label(antennas), antennas=antennas))
    return plans


def _evaluate(spec, plan, value, task_seed):
    """BLER of one curve at one grid point."""
    name = spec.axis_name
    overrides = {"union_weight_mode": plan.union_weight_mode}
    if name == "snr_db":
        overrides["snr_db"] = value
    elif name == "users":
        overrides["users"] = int(value)
    cfg = spec.system(**overrides)

    if plan.antennas is not None:
        return conventional_bler_result(BenchmarkConfig(plan.antennas, cfg))

    port_count = int(value) if name == "port_count" else plan.port_count
    aperture = value if name == "aperture" else spec.aperture
    correlation = _correlation(plan.model, port_count, aperture, spec.sigma, spec.sinc)
    if plan.method is BlerMethod.ANALYTIC_INTEGRAL:
        return analytic_bler_bound(cfg, AmplitudeDistribution.from_spec(correlation))
    return empirical_bler_bound(cfg, correlation, spec.mc_samples, task_seed)


def _run_tasks(function, tasks, threads):
    """Map ``function`` over ``tasks`` keeping the task order."""
    if threads > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            return list(executor.map(function, tasks))
    return [function(task) for task in tasks]


def run_sweep(spec, threads=None):
    """Run a BLER experiment (or the distribution experiment).

    Returns one :class:`BlerCurve` per (model, method, N) and one per
    benchmark antenna count; the distribution experiment returns a single
    :class:`DistributionTable`.
    """
    if spec.experiment is Experiment.DIST_CURVES:
        return [run_distribution(spec)]
    if spec.experiment is Experiment.VALIDATE:
        raise ConfigurationError("use validate() for validation experiments")
    threads = spec.threads if threads is None else threads
    logger = Logger.get_logger()

    plans = _plan_curves(spec)
    tasks = [
        (ordinal, plan, value)
        for ordinal, (plan, value) in enumerate(
            (plan, value) for plan in plans for value in spec.axis
        )
    ]
    logger.info(
        "Running %s: %d curves x %d points on %d threads",
        spec.experiment.value,
        len(plans),
        len(spec.axis),
        threads,
    )

    def run(task):
        ordinal, plan, value = task
        result = _evaluate(spec, plan, value, derive_seed(spec.seed, ordinal))
        logger.debug("%s %s=%g: %.6e", plan.label, spec.axis_name, value, result.value)
        return result

    results = _run_tasks(run, tasks, threads)

    curves = []
    points = len(spec.axis)
    for index, plan in enumerate(plans):
        chunk = results[index * points : (index + 1) * points]
        curves.append(
            BlerCurve(
                label=plan.label,
                axis=spec.axis,
                bler=tuple(r.value for r in chunk),
                std_err=tuple(r.error for r in chunk),
                methods=tuple(r.method.value for r in chunk),
            )
        )
    return curves


def _reference_law(spec, aperture=None):
    correlation = _correlation(
        spec.models[0],
        spec.port_counts[0],
        spec.aperture if aperture is None else aperture,
        spec.sigma,
        spec.sinc,
    )
    return correlation, AmplitudeDistribution.from_spec(correlation)


def _sampler(spec):
    aperture = spec.aperture if spec.sampler_aperture is None else spec.sampler_aperture
    correlation, _ = _reference_law(spec, aperture)
    samples = sample_fas_amplitudes(
        correlation, spec.mc_samples, derive_seed(spec.seed, 0)
    )
    return EmpiricalDistribution.from_samples(samples)


def run_distribution(spec):
    """Analytic CDF/PDF of the first model against Monte Carlo samples."""
    _, dist = _reference_law(spec)
    samples = _sampler(spec)
    r_values = (
        np.asarray(spec.axis)
        if spec.axis
        else np.linspace(0.0, dist.upper_support(), FASLAB_DIST_GRID_POINTS)
    )
    Logger.get_logger().info(
        "Distribution of %s N=%d W=%g on %d points",
        spec.models[0].value,
        spec.port_counts[0],
        spec.aperture,
        r_values.size,
    )
    label = f"{spec.models[0].value}-N{spec.port_counts[0]}-W{_fmt(spec.aperture)}"
    return DistributionTable(
        label=label, columns=distribution_table(dist, samples, r_values)
    )


@dataclass
class ValidationReport:
    """Agreement of the analytic law and bound with Monte Carlo."""

    ks_distance: float
    pdf_normalization: float
    bler_deviation: float = None
    points: list = field(default_factory=list)
    thresholds: dict = field(
        default_factory=lambda: dict(FASLAB_VALIDATION_THRESHOLDS)
    )

    def values(self):
        """Check name to measured value, None where the check was not run."""
        return {
            "ks_distance": self.ks_distance,
            "pdf_normalization": self.pdf_normalization,
            "bler_deviation": self.bler_deviation,
        }

    def not_evaluated(self):
        """Names of the checks that were not run."""
        return [name for name, value in self.values().items() if value is None]

    def failed_checks(self):
        """Names of the evaluated checks exceeding their thresholds."""
        return [
            name
            for name, value in self.values().items()
            if value is not None and not value <= self.thresholds[name]
        ]

    @property
    def passed(self):
        """Whether every evaluated check is within its threshold."""
        return not self.failed_checks()

    def to_dict(self):
        """Plain representation for JSON output."""
        return {
            "ks_distance": self.ks_distance,
            "pdf_normalization": self.pdf_normalization,
            "bler_deviation": self.bler_deviation,
            "thresholds": self.thresholds,
            "passed": self.passed,
            "failed": self.failed_checks(),
            "not_evaluated": self.not_evaluated(),
            "points": self.points,
        }


def _deviation(analytic, empirical):
    """|analytic - empirical| in units of their combined error."""
    gap = abs(analytic.value - empirical.value)
    combined = analytic.combined_error(empirical)
    if combined == 0.0:
        return 0.0 if gap == 0.0 else math.inf
    return gap / combined


def validate(spec, threads=None):
    """Check the analytic law and bound of the first model against Monte Carlo.

    The samples come from ``spec.sampler_aperture`` when it is set, which
    turns the check into a negative control.
    """
    if spec.experiment is not Experiment.VALIDATE:
        raise ConfigurationError(
            f"'{spec.experiment.value}' is not a validation experiment",
            field="experiment",
        )
    threads = spec.threads if threads is None else threads
    logger = Logger.get_logger()
    correlation, dist = _reference_law(spec)

    ks = ks_distance(_sampler(spec), dist)
    residual = pdf_normalization_residual(dist)
    logger.info("KS distance %.3e, PDF normalisation residual %.3e", ks, residual)

    def run(task):
        ordinal, snr_db = task
        cfg = spec.system(snr_db=snr_db)
        analytic = analytic_bler_bound(cfg, dist)
        empirical = empirical_bler_bound(
            cfg, correlation, spec.mc_samples, derive_seed(spec.seed, ordinal)
        )
        return {
            "snr_db": snr_db,
            "analytic": analytic.value,
            "empirical": empirical.value,
            "combined_error": analytic.combined_error(empirical),
            "deviation": _deviation(analytic, empirical),
        }

    points = _run_tasks(run, list(enumerate(spec.axis, start=1)), threads)
    deviation = max((p["deviation"] for p in points), default=None)
    if deviation is None:
        logger.info("No SNR axis, the bound check is not evaluated")
    report = ValidationReport(
        ks_distance=ks,
        pdf_normalization=residual,
        bler_deviation=deviation,
        points=points,
    )
    if report.passed:
        logger.info("Validation passed")
    else:
        logger.warning("Validation failed: %s", ", ".join(report.failed_checks()))
    return report
