# -*- coding: utf-8 -*-
#
# Copyright (C) 2026 FASLab contributors.
#
# FASLab is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""CSV and JSON output tests."""

import csv
import io
import math

import numpy as np
import orjson
import pytest

from faslab.config import FASLAB_CSV_HEADER, FASLAB_DIST_HEADER
from faslab.errors import ConfigurationError
from faslab.output import (
    curves_from_csv,
    curves_to_csv,
    curves_to_json,
    distribution_to_csv,
    format_float,
    read_output,
    report_to_csv,
    write_output,
    write_report,
)
from faslab.sweep import BlerCurve, DistributionTable, ValidationReport

from .conftest import DATA_DIR


@pytest.fixture(scope="module")
def golden_curves():
    """Curves written to the golden CSV file."""
    return [
        BlerCurve(
            label="simple-analytic-N5",
            axis=(-10.0, 0.0),
            bler=(0.5, 0.1),
            std_err=(0.125, 0.0),
            methods=("analytic", "analytic"),
        ),
        BlerCurve(
            label="conventional-L1",
            axis=(-10.0,),
            bler=(0.25,),
            std_err=(0.0,),
            methods=("closed_form",),
        ),
    ]


@pytest.fixture(scope="module")
def awkward_curves():
    """Curves whose values have no short decimal representation."""
    rng = np.random.default_rng(9)
    axis = tuple(np.linspace(-25.0, 0.0, 7).tolist())
    return [
        BlerCurve(
            label=f"simple-empirical-N{n}",
            axis=axis,
            bler=tuple(rng.uniform(0, 1, 7).tolist()),
            std_err=tuple((rng.uniform(0, 1e-3, 7) / 3).tolist()),
            methods=("empirical",) * 7,
        )
        for n in (5, 25)
    ] + [
        BlerCurve(
            label="conventional-L3",
            axis=axis,
            bler=tuple(math.exp(-k / 3) for k in range(7)),
            std_err=(0.0,) * 7,
            methods=("closed_form",) * 7,
        )
    ]


def test_format_float():
    """Seventeen significant digits, shortest form for exact values."""
    assert format_float(-10.0) == "-10"
    assert format_float(0.1) == "0.10000000000000001"
    assert format_float(np.float64(0.25)) == "0.25"
    assert float(format_float(1 / 3)) == 1 / 3


def test_curves_csv_matches_golden_file(golden_curves):
    """CSV layout is stable."""
    expected = (DATA_DIR / "curves.csv").read_text()
    assert curves_to_csv(golden_curves) == expected


def test_single_curve_csv():
    """Header plus one row per point."""
    curve = BlerCurve(
        label="full-empirical-W5",
        axis=(5.0, 10.0),
        bler=(0.5, 0.25),
        std_err=(0.01, 0.02),
        methods=("empirical", "empirical"),
    )
    lines = curves_to_csv([curve]).splitlines()
    assert lines[0] == ",".join(FASLAB_CSV_HEADER)
    assert lines[1:] == [
        "5,full-empirical-W5,0.5,0.01,empirical",
        "10,full-empirical-W5,0.25,0.02,empirical",
    ]


def test_csv_round_trip(awkward_curves):
    """Curves re-read from CSV are bit-identical."""
    assert curves_from_csv(curves_to_csv(awkward_curves)) == awkward_curves


def test_json_layout(golden_curves):
    """JSON output is an array of curve objects."""
    document = orjson.loads(curves_to_json(golden_curves))
    assert document[1] == {
        "label": "conventional-L1",
        "axis": [-10.0],
        "bler": [0.25],
        "std_err": [0.0],
        "method": ["closed_form"],
    }


@pytest.mark.parametrize("format", ["csv", "json"])
def test_file_round_trip(tmp_path, awkward_curves, format):
    """write_output and read_output are inverse for both formats."""
    path = tmp_path / f"curves.{format}"
    write_output(awkward_curves, str(path), format)
    assert read_output(str(path), format) == awkward_curves


def test_write_to_standard_output(capsysbinary, golden_curves):
    """A path of '-' writes to standard output."""
    write_output(golden_curves, "-", "csv")
    assert capsysbinary.readouterr().out == (DATA_DIR / "curves.csv").read_bytes()


def test_unknown_format(tmp_path, golden_curves):
    """Only csv and json are written."""
    with pytest.raises(ConfigurationError):
        write_output(golden_curves, str(tmp_path / "curves.xml"), "xml")


def test_csv_header_is_checked():
    """Foreign CSV files are rejected."""
    with pytest.raises(ConfigurationError):
        curves_from_csv("x,y\n1,2\n")


def test_distribution_output(tmp_path):
    """Distribution tables have one column per quantity."""
    columns = {
        name: np.array([0.0, 0.5 + i]) for i, name in enumerate(FASLAB_DIST_HEADER)
    }
    table = DistributionTable(label="simple-N10-W0.5", columns=columns)
    rows = list(csv.reader(io.StringIO(distribution_to_csv(table))))
    assert tuple(rows[0]) == FASLAB_DIST_HEADER
    assert rows[2] == ["0.5", "1.5", "2.5", "3.5", "4.5"]

    path = tmp_path / "dist.json"
    write_output([table], str(path), "json")
    document = orjson.loads(path.read_bytes())
    assert document["label"] == "simple-N10-W0.5"
    assert document["columns"]["analytic_pdf"] == [0.0, 3.5]


def test_report_output(tmp_path):
    """Validation reports list every check with its threshold."""
    report = ValidationReport(
        ks_distance=0.02, pdf_normalization=1e-9, bler_deviation=1.5
    )
    rows = list(csv.DictReader(io.StringIO(report_to_csv(report))))
    assert [row["check"] for row in rows] == [
        "ks_distance",
        "pdf_normalization",
        "bler_deviation",
    ]
    assert [row["passed"] for row in rows] == ["false", "true", "true"]
    assert float(rows[0]["value"]) == 0.02
    assert float(rows[0]["threshold"]) == 0.01

    path = tmp_path / "report.json"
    write_report(report, str(path), "json")
    document = orjson.loads(path.read_bytes())
    assert document["passed"] is False
    assert document["failed"] == ["ks_distance"]


def test_report_output_marks_skipped_checks(tmp_path):
    """A check that was not run is written as skipped, not as passed."""
    report = ValidationReport(ks_distance=0.004, pdf_normalization=1e-9)
    rows = list(csv.DictReader(io.StringIO(report_to_csv(report))))
    assert rows[2] == {
        "check": "bler_deviation",
        "value": "",
        "threshold": "3",
        "passed": "skipped",
    }

    path = tmp_path / "report.json"
    write_report(report, str(path), "json")
    document = orjson.loads(path.read_bytes())
    assert document["bler_deviation"] is None
    assert document["not_evaluated"] == ["bler_deviation"]
    assert document["passed"] is True
