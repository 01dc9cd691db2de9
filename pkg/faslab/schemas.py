# -*- coding: utf-8 -*-
#
# Copyright (C) 2026 FASLab contributors.
#
# FASLab is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""Experiment configuration schemas.

A configuration is a single JSON document, for example::

    {
        "experiment": "bler_vs_snr",
        "models": ["simple"],
        "methods": ["analytic", "empirical"],
        "port_counts": [5, 25],
        "aperture": 2,
        "users": 20,
        "blocklength": 400,
        "antennas": [1, 3, 5, 10],
        "axis": {"start": -25, "stop": 0, "step": 1},
        "mc_samples": 100000,
        "seed": 1
    }
"""

import copy

import orjson
from marshmallow import (
    RAISE,
    Schema,
    ValidationError,
    fields,
    post_load,
    validate,
    validates,
    validates_schema,
)

from .bler_bounds import BlerMethod, ClampMode, UnionWeightMode
from .channel_models import SINC_CONVENTIONS, CorrelationModel
from .config import (
    FASLAB_DEFAULT_SEED,
    FASLAB_DEFAULT_SIGMA,
    FASLAB_DEFAULT_SINC,
    FASLAB_DEFAULT_THREADS,
    FASLAB_MC_MIN_SAMPLES,
)
from .errors import ConfigurationError, FASLabError
from .sweep import Experiment, SweepSpec

AXIS_DECIMALS = 12
"""Generated grid points are rounded to this many decimals."""


def _choices(enum_cls):
    return validate.OneOf([member.value for member in enum_cls])


class AxisSchema(Schema):
    """Swept grid, either explicit or as an inclusive arithmetic range."""

    class Meta:
        """Reject unknown fields."""

        unknown = RAISE

    grid = fields.List(fields.Float(allow_nan=False))
    start = fields.Float(allow_nan=False)
    stop = fields.Float(allow_nan=False)
    step = fields.Float(
        allow_nan=False, validate=validate.Range(min=0, min_inclusive=False)
    )

    @validates_schema
    def validate_form(self, data, **kwargs):
        """Exactly one of ``grid`` and ``start/stop/step``."""
        ranged = {"start", "stop", "step"} & set(data)
        if "grid" in data and ranged:
            raise ValidationError("give either 'grid' or 'start/stop/step'")
        if "grid" not in data and ranged != {"start", "stop", "step"}:
            raise ValidationError("'start', 'stop' and 'step' go together")

    @post_load
    def expand(self, data, **kwargs):
        """Return the grid as a list of values."""
        if "grid" in data:
            return data["grid"]
        count = int(round((data["stop"] - data["start"]) / data["step"])) + 1
        return [
            round(data["start"] + i * data["step"], AXIS_DECIMALS)
            for i in range(max(count, 0))
        ]


class OutputSchema(Schema):
    """Where results go."""

    class Meta:
        """Reject unknown fields."""

        unknown = RAISE

    path = fields.String(load_default="-")
    format = fields.String(
        load_default="csv", validate=validate.OneOf(["csv", "json"])
    )


class SweepSchema(Schema):
    """Experiment definition, loaded into a :class:`~faslab.sweep.SweepSpec`."""

    class Meta:
        """Reject unknown fields."""

        unknown = RAISE

    experiment = fields.String(required=True, validate=_choices(Experiment))
    models = fields.List(
        fields.String(validate=_choices(CorrelationModel)),
        load_default=lambda: [CorrelationModel.SIMPLE_REFERENCE.value],
    )
    methods = fields.List(
        fields.String(
            validate=validate.OneOf(
                [BlerMethod.ANALYTIC_INTEGRAL.value, BlerMethod.MONTE_CARLO.value]
            )
        ),
        load_default=lambda: [BlerMethod.ANALYTIC_INTEGRAL.value],
    )
    port_counts = fields.List(
        fields.Integer(validate=validate.Range(min=1)), load_default=lambda: [10]
    )
    aperture = fields.Float(
        load_default=2.0, validate=validate.Range(min=0, min_inclusive=False)
    )
    users = fields.Integer(load_default=20, validate=validate.Range(min=1))
    blocklength = fields.Integer(load_default=400, validate=validate.Range(min=1))
    snr_db = fields.Float(load_default=-15.0, allow_nan=False)
    sigma = fields.Float(
        load_default=FASLAB_DEFAULT_SIGMA,
        validate=validate.Range(min=0, min_inclusive=False),
    )
    antennas = fields.List(
        fields.Integer(validate=validate.Range(min=1)), load_default=list
    )
    axis = fields.Nested(AxisSchema, load_default=None, allow_none=True)
    mc_samples = fields.Integer(
        load_default=100000, validate=validate.Range(min=FASLAB_MC_MIN_SAMPLES)
    )
    seed = fields.Integer(
        load_default=FASLAB_DEFAULT_SEED,
        validate=validate.Range(min=0, max=2**64 - 1),
    )
    threads = fields.Integer(
        load_default=FASLAB_DEFAULT_THREADS, validate=validate.Range(min=1)
    )
    sinc = fields.String(
        load_default=FASLAB_DEFAULT_SINC, validate=validate.OneOf(SINC_CONVENTIONS)
    )
    union_weight = fields.Raw(load_default=UnionWeightMode.PAPER_SUM.value)
    clamp = fields.String(
        load_default=ClampMode.POINTWISE.value, validate=_choices(ClampMode)
    )
    sampler_aperture = fields.Float(
        load_default=None,
        allow_none=True,
        validate=validate.Range(min=0, min_inclusive=False),
    )
    output = fields.Nested(OutputSchema, load_default=dict)

    @validates("union_weight")
    def validate_union_weight(self, value, **kwargs):
        """A mode name or a non-empty list of mode names."""
        modes = value if isinstance(value, list) else [value]
        allowed = {mode.value for mode in UnionWeightMode}
        if not modes or any(mode not in allowed for mode in modes):
            raise ValidationError(f"must be one or more of {sorted(allowed)}")

    @post_load
    def make_spec(self, data, **kwargs):
        """Build the sweep spec."""
        union_weight = data["union_weight"]
        output = data["output"] or {}
        if data["axis"] is not None and not data["axis"]:
            raise ValidationError("the swept axis grid is empty", field_name="axis")
        try:
            return SweepSpec(
                experiment=data["experiment"],
                models=tuple(data["models"]),
                methods=tuple(data["methods"]),
                port_counts=tuple(data["port_counts"]),
                aperture=data["aperture"],
                users=data["users"],
                blocklength=data["blocklength"],
                snr_db=data["snr_db"],
                sigma=data["sigma"],
                antennas=tuple(data["antennas"]),
                axis=tuple(data["axis"] or ()),
                mc_samples=data["mc_samples"],
                seed=data["seed"],
                threads=data["threads"],
                sinc=data["sinc"],
                union_weight_modes=tuple(
                    union_weight if isinstance(union_weight, list) else [union_weight]
                ),
                clamp_mode=data["clamp"],
                sampler_aperture=data["sampler_aperture"],
                output_path=output.get("path", "-"),
                output_format=output.get("format", "csv"),
            )
        except FASLabError as e:
            field_name = getattr(e, "field", None) or "_schema"
            raise ValidationError(
                getattr(e, "reason", e.description), field_name=field_name
            )


def parse_override(assignment):
    """Split ``key=value``; the value is parsed as JSON when it is valid JSON."""
    key, sep, raw = assignment.partition("=")
    if not sep or not key:
        raise ConfigurationError(
            f"expected key=value, got '{assignment}'", field="--set"
        )
    try:
        value = orjson.loads(raw)
    except orjson.JSONDecodeError:
        value = raw
    return key.strip(), value


def apply_overrides(document, assignments):
    """Apply ``key=value`` assignments (dotted keys reach nested objects).

    Assignments are strings or already parsed ``(key, value)`` pairs.
    """
    document = copy.deepcopy(document)
    for assignment in assignments:
        if isinstance(assignment, str):
            key, value = parse_override(assignment)
        else:
            key, value = assignment
        *parents, leaf = key.split(".")
        node = document
        for parent in parents:
            node = node.setdefault(parent, {})
            if not isinstance(node, dict):
                raise ConfigurationError(f"'{parent}' is not an object", field=key)
        node[leaf] = value
    return document


def _flatten_messages(messages, prefix=""):
    if isinstance(messages, dict):
        for key, value in messages.items():
            if key == "_schema":
                name = prefix
            else:
                name = f"{prefix}.{key}" if prefix else str(key)
            yield from _flatten_messages(value, name)
    elif isinstance(messages, list):
        for message in messages:
            yield from _flatten_messages(message, prefix)
    else:
        yield f"{prefix}: {messages}" if prefix else str(messages)


def load_spec(document, assignments=()):
    """Validate a configuration document into a :class:`~faslab.sweep.SweepSpec`.

    :param document: the parsed JSON configuration.
    :param assignments: ``key=value`` overrides applied before validation.
    :raises ConfigurationError: on any schema or consistency error.
    """
    if not isinstance(document, dict):
        raise ConfigurationError("the configuration must be a JSON object")
    document = apply_overrides(document, assignments)
    try:
        return SweepSchema().load(document)
    except ValidationError as e:
        raise ConfigurationError("; ".join(_flatten_messages(e.messages)))


def load_spec_file(path, assignments=()):
    """Read and validate a JSON configuration file."""
    try:
        with open(path, "rb") as fp:
            document = orjson.loads(fp.read())
    except OSError as e:
        raise ConfigurationError(
            f"cannot read '{path}': {e.strerror}", field="--config"
        )
    except orjson.JSONDecodeError as e:
        raise ConfigurationError(
            f"'{path}' is not valid JSON: {e}", field="--config"
        )
    return load_spec(document, assignments)
