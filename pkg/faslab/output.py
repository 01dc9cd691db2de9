# -*- coding: utf-8 -*-
#
# Copyright (C) 2026 FASLab contributors.
#
# FASLab is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""CSV and JSON output of sweep results.

Floats are written with 17 significant digits in CSV and as shortest
round-trip representations in JSON, so both formats re-read bit-exactly.
A path of ``-`` writes to standard output.
"""

import csv
import io

import click
import orjson

from .config import FASLAB_CSV_HEADER, FASLAB_DIST_HEADER, FASLAB_FLOAT_FORMAT
from .errors import ConfigurationError
from .sweep import BlerCurve, DistributionTable

FORMATS = ("csv", "json")


def format_float(value):
    """Serialize a float with 17 significant digits."""
    return format(float(value), FASLAB_FLOAT_FORMAT)


def _curve_rows(curves):
    for curve in curves:
        for axis, bler, std_err, method in zip(
            curve.axis, curve.bler, curve.std_err, curve.methods
        ):
            yield (
                format_float(axis),
                curve.label,
                format_float(bler),
                format_float(std_err),
                method,
            )


def _distribution_rows(table):
    columns = [table.columns[name] for name in FASLAB_DIST_HEADER]
    for row in zip(*columns):
        yield tuple(format_float(value) for value in row)


def curves_to_csv(curves):
    """Render curves as CSV text."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(FASLAB_CSV_HEADER)
    writer.writerows(_curve_rows(curves))
    return buffer.getvalue()


def curves_to_json(curves):
    """Render curves as a JSON array of curve objects."""
    return orjson.dumps(
        [
            {
                "label": curve.label,
                "axis": [float(v) for v in curve.axis],
                "bler": [float(v) for v in curve.bler],
                "std_err": [float(v) for v in curve.std_err],
                "method": list(curve.methods),
            }
            for curve in curves
        ],
        option=orjson.OPT_INDENT_2 | orjson.OPT_APPEND_NEWLINE,
    )


def distribution_to_csv(table):
    """Render a distribution table as CSV text."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(FASLAB_DIST_HEADER)
    writer.writerows(_distribution_rows(table))
    return buffer.getvalue()


def distribution_to_json(table):
    """Render a distribution table as a JSON object of columns."""
    return orjson.dumps(
        {
            "label": table.label,
            "columns": {
                name: [float(v) for v in table.columns[name]]
                for name in FASLAB_DIST_HEADER
            },
        },
        option=orjson.OPT_INDENT_2 | orjson.OPT_APPEND_NEWLINE,
    )


def _write(payload, path):
    """Write text or bytes to ``path`` (``-`` is standard output)."""
    data = payload.encode("utf-8") if isinstance(payload, str) else payload
    atomic = path != "-"
    with click.open_file(path, "wb", atomic=atomic) as fp:
        fp.write(data)


def _check_format(format):
    if format not in FORMATS:
        raise ConfigurationError(f"unknown output format '{format}'", field="format")


def write_distribution(table, path, format="csv"):
    """Write a :class:`~faslab.sweep.DistributionTable`."""
    _check_format(format)
    render = distribution_to_csv if format == "csv" else distribution_to_json
    _write(render(table), path)


def write_output(curves, path, format="csv"):
    """Write sweep results.

    :param curves: list of :class:`~faslab.sweep.BlerCurve`, or a list with
        a single :class:`~faslab.sweep.DistributionTable`.
    :param path: file path, ``-`` for standard output.
    :param format: ``csv`` or ``json``.
    """
    _check_format(format)
    if len(curves) == 1 and isinstance(curves[0], DistributionTable):
        return write_distribution(curves[0], path, format)
    render = curves_to_csv if format == "csv" else curves_to_json
    _write(render(curves), path)


def curves_from_json(data):
    """Parse curves written by :func:`curves_to_json`."""
    return [
        BlerCurve(
            label=item["label"],
            axis=tuple(item["axis"]),
            bler=tuple(item["bler"]),
            std_err=tuple(item["std_err"]),
            methods=tuple(item["method"]),
        )
        for item in orjson.loads(data)
    ]


def curves_from_csv(text):
    """Parse curves written by :func:`curves_to_csv`, keeping label order."""
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != FASLAB_CSV_HEADER:
        raise ConfigurationError(f"unexpected CSV header {reader.fieldnames}")
    columns = {}
    for row in reader:
        curve = columns.setdefault(row["label"], ([], [], [], []))
        curve[0].append(float(row["axis"]))
        curve[1].append(float(row["bler"]))
        curve[2].append(float(row["std_err"]))
        curve[3].append(row["method"])
    return [
        BlerCurve(
            label=label,
            axis=tuple(axis),
            bler=tuple(bler),
            std_err=tuple(std_err),
            methods=tuple(methods),
        )
        for label, (axis, bler, std_err, methods) in columns.items()
    ]


def read_output(path, format="csv"):
    """Read curves back from a file written by :func:`write_output`."""
    _check_format(format)
    with open(path, "rb") as fp:
        data = fp.read()
    if format == "json":
        return curves_from_json(data)
    return curves_from_csv(data.decode("utf-8"))


def report_to_csv(report):
    """Render a validation report as ``check,value,threshold,passed`` rows."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(("check", "value", "threshold", "passed"))
    failed = set(report.failed_checks())
    for name, value in report.values().items():
        if value is None:
            value, passed = "", "skipped"
        else:
            value = format_float(value)
            passed = "false" if name in failed else "true"
        writer.writerow((name, value, format_float(report.thresholds[name]), passed))
    return buffer.getvalue()


def write_report(report, path, format="csv"):
    """Write a :class:`~faslab.sweep.ValidationReport`."""
    _check_format(format)
    if format == "csv":
        payload = report_to_csv(report)
    else:
        payload = orjson.dumps(
            report.to_dict(), option=orjson.OPT_INDENT_2 | orjson.OPT_APPEND_NEWLINE
        )
    _write(payload, path)
