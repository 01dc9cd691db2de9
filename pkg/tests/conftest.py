# -*- coding: utf-8 -*-
#
# Copyright (C) 2026 FASLab contributors.
#
# FASLab is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""FASLab tests configuration."""

import logging
from pathlib import Path

import pytest
from click.testing import CliRunner

from faslab.bler_bounds import SystemConfig
from faslab.channel_models import CorrelationSpec, PortGrid
from faslab.fas_statistics import AmplitudeDistribution
from faslab.logging import Logger

CONFIGS_DIR = Path(__file__).parent.parent / "configs"

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="module")
def fig1_spec():
    """Simple reference model with N=10 ports on W=0.5 wavelengths."""
    return CorrelationSpec.build("simple", PortGrid(10, 0.5))


@pytest.fixture(scope="module")
def fig1_law(fig1_spec):
    """Analytic amplitude law of the N=10, W=0.5 grid."""
    return AmplitudeDistribution.from_spec(fig1_spec)


@pytest.fixture(scope="module")
def small_spec():
    """Simple reference model with N=5 ports on W=2 wavelengths."""
    return CorrelationSpec.build("simple", PortGrid(5, 2.0))


@pytest.fixture(scope="module")
def small_law(small_spec):
    """Analytic amplitude law of the N=5, W=2 grid."""
    return AmplitudeDistribution.from_spec(small_spec)


@pytest.fixture(scope="module")
def link():
    """U=20 codewords, M=400 channel uses, SNR of -15 dB."""
    return SystemConfig(users=20, blocklength=400, snr_db=-15.0)


@pytest.fixture(scope="module")
def sweep_document():
    """Small SNR sweep with both methods and two benchmarks."""
    return {
        "experiment": "bler_vs_snr",
        "models": ["simple"],
        "methods": ["analytic", "empirical"],
        "port_counts": [2],
        "aperture": 0.5,
        "users": 20,
        "blocklength": 400,
        "antennas": [1, 3],
        "axis": {"grid": [-10, 0]},
        "mc_samples": 2000,
        "seed": 7,
    }


@pytest.fixture(scope="function")
def runner():
    """Click test runner."""
    return CliRunner()


@pytest.fixture(autouse=True)
def reset_logger():
    """Detach the handlers the CLI installs on the package logger."""
    yield
    logger = Logger.get_logger()
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()
    logger.setLevel(logging.NOTSET)
    logger.propagate = True
