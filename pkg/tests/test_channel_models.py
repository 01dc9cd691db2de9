# -*- coding: utf-8 -*-
#
# Copyright (C) 2026 FASLab contributors.
#
# FASLab is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Correlation model and channel sampling tests."""

import math

import mpmath
import numpy as np
import pytest
from scipy.stats import kstest, rayleigh

from faslab.channel_models import (
    ChannelSample,
    CorrelationModel,
    CorrelationSpec,
    PortGrid,
    covariance_matrix,
    derive_rng,
    derive_seed,
    draw_latent,
    fas_amplitude,
    fas_amplitudes,
    mu_modified,
    mu_simple,
    reference_gains,
    sample_gain_block,
    sample_gains,
    sinc_generator,
    spectral_factor,
)
from faslab.errors import DegenerateGridError, DomainError, ModelError


def test_port_grid_displacements():
    """Ports are evenly spread over the aperture."""
    grid = PortGrid(5, 2.0)
    np.testing.assert_allclose(grid.displacements(), [0.0, 0.5, 1.0, 1.5, 2.0])
    assert PortGrid(1, 2.0).displacements().tolist() == [0.0]


@pytest.mark.parametrize(
    "port_count,aperture",
    [(0, 1.0), (2.5, 1.0), (3, 0.0), (3, -1.0), (3, math.inf)],
)
def test_port_grid_validation(port_count, aperture):
    """Invalid geometries are rejected."""
    with pytest.raises(DomainError):
        PortGrid(port_count, aperture)


#
# Simple reference model
#
def test_mu_simple_first_port_is_the_reference():
    """mu_1 = 1 for any grid."""
    assert mu_simple(1, PortGrid(10, 0.5)) == 1.0


def test_mu_simple_values():
    """mu_k = J0(2 pi (k - 1) W / (N - 1))."""
    grid = PortGrid(3, 1.0)
    assert mu_simple(2, grid) == pytest.approx(float(mpmath.besselj(0, math.pi)))
    assert mu_simple(3, grid) == pytest.approx(float(mpmath.besselj(0, 2 * math.pi)))


def test_mu_simple_follows_displacements():
    """mu_k is J0 of 2 pi times the displacement of port k."""
    grid = PortGrid(7, 2.5)
    expected = [
        float(mpmath.besselj(0, 2 * mpmath.pi * d)) for d in grid.displacements()
    ]
    spec = CorrelationSpec.build("simple", grid)
    np.testing.assert_allclose(spec.mu_vector(), expected, rtol=1e-12, atol=1e-15)


def test_mu_simple_bounded():
    """All correlation parameters lie in [-1, 1]."""
    spec = CorrelationSpec.build("simple", PortGrid(200, 10.0))
    mu = spec.mu_vector()
    assert mu[0] == 1.0
    assert np.all(np.abs(mu) <= 1.0)


def test_mu_simple_errors():
    """Single-port grids and out-of-range indices raise."""
    with pytest.raises(DegenerateGridError):
        mu_simple(1, PortGrid(1, 1.0))
    with pytest.raises(DomainError):
        mu_simple(0, PortGrid(4, 1.0))
    with pytest.raises(DomainError):
        mu_simple(5, PortGrid(4, 1.0))


#
# Modified reference model
#
@pytest.mark.parametrize("W", [0.1, 0.5, 2.0, 3.2, 5.0, 7.5, 10.0, 12.0])
def test_mu_modified_against_high_precision(W):
    """The unified correlation against an extended-precision evaluation."""
    with mpmath.workdps(50):
        x = 2 * mpmath.pi * W
        radicand = mpmath.hyp1f2(0.5, 1, 1.5, -((mpmath.pi * W) ** 2))
        radicand -= mpmath.besselj(1, x) / x
        oracle = float(mpmath.sqrt(2) * mpmath.sqrt(radicand))
    assert mu_modified(PortGrid(10, W)) == pytest.approx(oracle, rel=1e-8)


def test_mu_modified_limits():
    """The unified correlation tends to 1 for a vanishing aperture."""
    assert mu_modified(PortGrid(10, 1e-6)) == pytest.approx(1.0, abs=1e-9)
    assert 0.0 <= mu_modified(PortGrid(10, 10.0)) < 1.0


def test_mu_modified_on_wide_apertures():
    """The unified correlation stays in [0, 1) for apertures in (3, 12]."""
    apertures = np.linspace(3.0, 12.0, 451)[1:]
    values = np.array([mu_modified(PortGrid(10, W)) for W in apertures])
    assert np.all(values >= 0.0)
    assert np.all(values < 1.0)
    # mu decays like sqrt(2 / (2 pi W)) on wide apertures
    assert values.max() < 0.5


def test_modified_spec_keeps_the_reference():
    """mu_1 = 1 and every other port shares one parameter."""
    mu = CorrelationSpec.build("modified", PortGrid(6, 2.0)).mu_vector()
    assert mu[0] == 1.0
    assert len(set(mu[1:].tolist())) == 1


#
# Fully correlated model
#
def test_covariance_two_ports():
    """Two ports a quarter wavelength apart correlate by 2/pi."""
    cov = covariance_matrix(PortGrid(2, 0.25))
    np.testing.assert_allclose(np.diag(cov), [1.0, 1.0])
    assert cov[0, 1] == pytest.approx(2.0 / math.pi, rel=1e-14)
    assert cov[1, 0] == cov[0, 1]


def test_sinc_conventions():
    """The normalised convention is sin(pi x) / (pi x) of the same argument."""
    grid = PortGrid(2, 0.25)
    x = math.pi / 2
    assert sinc_generator(1, grid, "normalized") == pytest.approx(
        math.sin(math.pi * x) / (math.pi * x)
    )
    with pytest.raises(DomainError):
        sinc_generator(1, grid, "cardinal")


@pytest.mark.parametrize("port_count,aperture", [(5, 0.5), (25, 2.0), (100, 5.0)])
def test_spectral_factor_reconstruction(port_count, aperture):
    """F F^T reconstructs Sigma and preserves its trace."""
    cov = covariance_matrix(PortGrid(port_count, aperture))
    factor = spectral_factor(cov)
    rebuilt = factor @ factor.T
    residual = np.linalg.norm(rebuilt - cov) / np.linalg.norm(cov)
    assert residual < 1e-8
    assert np.trace(rebuilt) == pytest.approx(np.trace(cov), rel=1e-10)


def test_spectral_factor_rejects_indefinite_matrix():
    """A matrix with a large negative eigenvalue is not a covariance."""
    with pytest.raises(ModelError):
        spectral_factor([[1.0, 2.0], [2.0, 1.0]])


@pytest.mark.parametrize(
    "matrix", [np.ones((2, 3)), np.array([[1.0, 0.5], [0.2, 1.0]])]
)
def test_spectral_factor_rejects_malformed_matrix(matrix):
    """Non-square and asymmetric matrices are rejected."""
    with pytest.raises(DomainError):
        spectral_factor(matrix)


def test_full_model_has_no_reference_port():
    """mu_vector is only defined for reference models."""
    spec = CorrelationSpec.build("full", PortGrid(4, 1.0))
    assert not spec.model.has_reference_port
    with pytest.raises(ModelError):
        spec.mu_vector()


@pytest.mark.parametrize("model", list(CorrelationModel))
def test_single_port_collapse(model):
    """Every model reduces to a single Rayleigh port when N = 1."""
    spec = CorrelationSpec.build(model, PortGrid(1, 3.0))
    assert spec.mu_vector().tolist() == [1.0]
    np.testing.assert_array_equal(spec.covariance(), [[1.0]])


def test_build_validation():
    """Unknown models, bad sigmas and bad sinc conventions raise."""
    grid = PortGrid(3, 1.0)
    with pytest.raises(ValueError):
        CorrelationSpec.build("diagonal", grid)
    with pytest.raises(DomainError):
        CorrelationSpec.build("simple", grid, sigma=0.0)
    with pytest.raises(DomainError):
        CorrelationSpec.build("full", grid, sinc="cardinal")


#
# Sampling
#
@pytest.mark.parametrize("model", ["simple", "modified", "full"])
def test_sample_covariance(model):
    """Sample covariance of the gains matches the model covariance."""
    sigma = 1.5
    spec = CorrelationSpec.build(model, PortGrid(4, 0.5), sigma=sigma)
    gains = sample_gain_block(spec, derive_rng(11, 0), 200000)
    empirical = (gains.T @ gains.conj()).real / len(gains) / sigma**2
    np.testing.assert_allclose(empirical, spec.covariance(), atol=0.02)


def test_reference_model_first_port_is_rayleigh():
    """|g_1|^2 is exponential with mean sigma^2."""
    spec = CorrelationSpec.build("simple", PortGrid(8, 2.0), sigma=2.0)
    gains = sample_gain_block(spec, derive_rng(3, 0), 200000)
    power = np.abs(gains[:, 0]) ** 2
    assert power.mean() == pytest.approx(4.0, rel=0.01)
    assert np.mean(power > 4.0) == pytest.approx(math.exp(-1), abs=0.005)


@pytest.mark.parametrize("model", ["simple", "modified", "full"])
def test_every_port_is_rayleigh(model):
    """Each |g_k| follows the Rayleigh law of scale sigma / sqrt(2)."""
    sigma = 1.5
    spec = CorrelationSpec.build(model, PortGrid(8, 2.0), sigma=sigma)
    gains = sample_gain_block(spec, derive_rng(17, 0), 100000)
    law = rayleigh(scale=sigma / math.sqrt(2))
    for k in range(spec.port_count):
        statistic, _ = kstest(np.abs(gains[:, k]), law.cdf)
        assert statistic < 0.01, (model, k + 1)


@pytest.mark.parametrize("model", ["simple", "modified"])
def test_appending_a_port_never_lowers_the_amplitude(model):
    """On the same latent draws the best-port amplitude grows with N."""
    spec = CorrelationSpec.build(model, PortGrid(10, 1.0))
    latent = draw_latent(derive_rng(23, 0), 5000, spec.port_count)
    mu = spec.mu_vector()
    previous = np.zeros(len(latent))
    for n in range(1, spec.port_count + 1):
        current = fas_amplitudes(reference_gains(mu[:n], latent[:, :, :n]))
        assert np.all(current >= previous)
        previous = current


def test_appending_a_port_to_a_correlated_draw():
    """Column prefixes of a fully correlated draw have growing maxima."""
    spec = CorrelationSpec.build("full", PortGrid(10, 1.0))
    gains = sample_gain_block(spec, derive_rng(29, 0), 5000)
    amplitudes = np.array(
        [fas_amplitudes(gains[:, :n]) for n in range(1, spec.port_count + 1)]
    )
    assert np.all(np.diff(amplitudes, axis=0) >= 0.0)


def test_sigma_scales_the_draws_not_the_factor():
    """The spectral factor is unit-variance and sigma enters at sampling."""
    grid = PortGrid(6, 1.0)
    unit = CorrelationSpec.build("full", grid)
    scaled = CorrelationSpec.build("full", grid, sigma=2.5)
    np.testing.assert_array_equal(unit.factor, scaled.factor)
    np.testing.assert_allclose(
        sample_gain_block(scaled, derive_rng(5, 0), 50),
        2.5 * sample_gain_block(unit, derive_rng(5, 0), 50),
        rtol=1e-12,
        atol=1e-14,
    )


def test_sampling_is_reproducible():
    """The same seed and ordinal give the same draws."""
    spec = CorrelationSpec.build("simple", PortGrid(5, 1.0))
    first = sample_gain_block(spec, derive_rng(42, 7), 10)
    second = sample_gain_block(spec, derive_rng(42, 7), 10)
    other = sample_gain_block(spec, derive_rng(42, 8), 10)
    np.testing.assert_array_equal(first, second)
    assert not np.array_equal(first, other)


def test_derive_seed():
    """Derived seeds are deterministic 64-bit integers unique per ordinal."""
    seeds = [derive_seed(1, ordinal) for ordinal in range(100)]
    assert seeds == [derive_seed(1, ordinal) for ordinal in range(100)]
    assert len(set(seeds)) == 100
    assert all(0 <= seed < 2**64 for seed in seeds)
    assert derive_seed(2, 0) != derive_seed(1, 0)
    with pytest.raises(DomainError):
        derive_seed(-1, 0)


def test_fas_amplitude():
    """The best port wins."""
    sample = ChannelSample(gains=np.array([0.1 + 0.1j, -3.0 + 4.0j, 2.0j]))
    assert fas_amplitude(sample) == 5.0
    assert fas_amplitude([1.0, -2.0]) == 2.0
    block = np.array([[1.0, 3.0j], [-4.0, 0.5]])
    assert fas_amplitudes(block).tolist() == [3.0, 4.0]


def test_sample_gains_single_realisation():
    """A single draw has one gain per port."""
    spec = CorrelationSpec.build("full", PortGrid(6, 1.0))
    sample = sample_gains(spec, derive_rng(0, 0))
    assert sample.gains.shape == (6,)
    assert fas_amplitude(sample) > 0


def test_channel_sample_validation():
    """Empty and non-finite gain vectors are rejected."""
    with pytest.raises(DomainError):
        ChannelSample(gains=np.array([], dtype=complex))
    with pytest.raises(DomainError):
        ChannelSample(gains=np.array([1.0, np.nan]))
