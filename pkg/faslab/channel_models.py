# -*- coding: utf-8 -*-
#
# Copyright (C) 2026 FASLab contributors.
#
# FASLab is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Port geometry, spatial correlation models and channel sampling.

Three correlation models are available for N ports spread evenly over an
aperture of W wavelengths:

* ``simple``: every port is correlated with the first one only, through
  ``mu_k = J0(2 pi (k - 1) W / (N - 1))``.
* ``modified``: same construction with a single correlation parameter
  ``mu`` shared by all ports.
* ``full``: Toeplitz covariance with sinc generator, sampled through its
  eigen-decomposition.

.. code-block:: python

    spec = CorrelationSpec.build("simple", PortGrid(10, 0.5))
    rng = derive_rng(seed=1, ordinal=0)
    amplitude = fas_amplitude(sample_gains(spec, rng))
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .config import (
    FASLAB_DEFAULT_SIGMA,
    FASLAB_DEFAULT_SINC,
    FASLAB_EIGEN_CLAMP_EPS,
    FASLAB_EIGEN_CLAMPED_MASS_LIMIT,
    FASLAB_MU_BOUNDARY_TOL,
)
from .errors import (
    DegenerateGridError,
    DomainError,
    ModelError,
    NumericalInconsistencyError,
)
from .logging import Logger
from .special_functions import bessel_j0, bessel_j1, hyp1f2_term

SINC_CONVENTIONS = ("unnormalized", "normalized")


class CorrelationModel(enum.Enum):
    """Spatial correlation model of the ports."""

    SIMPLE_REFERENCE = "simple"
    MODIFIED_REFERENCE = "modified"
    FULLY_CORRELATED = "full"

    @property
    def has_reference_port(self):
        """True for the models built around the first port."""
        return self is not CorrelationModel.FULLY_CORRELATED


@dataclass(frozen=True)
class PortGrid:
    """N ports evenly spread over an aperture of W wavelengths."""

    port_count: int
    aperture: float

    def __post_init__(self):
        """Validate the geometry."""
        if int(self.port_count) != self.port_count or self.port_count < 1:
            raise DomainError("port_count", self.port_count, "an integer >= 1")
        if not (math.isfinite(self.aperture) and self.aperture > 0):
            raise DomainError("aperture", self.aperture, "a finite real > 0")

    @property
    def is_single_port(self):
        """True when the grid degenerates to one port at the origin."""
        return self.port_count == 1

    def displacements(self):
        """Displacement of every port from the first one, in wavelengths."""
        if self.is_single_port:
            return np.zeros(1)
        k = np.arange(self.port_count)
        return k / (self.port_count - 1) * self.aperture


def mu_simple(k, grid):
    """Correlation of port ``k`` (1-based) with the first port."""
    if grid.is_single_port:
        raise DegenerateGridError(grid.port_count)
    if int(k) != k or not 1 <= k <= grid.port_count:
        raise DomainError("k", k, f"a port index in 1..{grid.port_count}")
    return bessel_j0(2.0 * math.pi * grid.displacements()[int(k) - 1])


def mu_modified(grid):
    """Unified correlation parameter of the modified reference model.

    mu = sqrt(2) * sqrt(1F2(1/2; 1, 3/2; -pi^2 W^2) - J1(2 pi W) / (2 pi W))
    """
    x = 2.0 * math.pi * grid.aperture
    radicand = hyp1f2_term(grid.aperture) - bessel_j1(x) / x
    if radicand < -FASLAB_MU_BOUNDARY_TOL:
        raise NumericalInconsistencyError("modified-model radicand", radicand)
    mu = math.sqrt(2.0) * math.sqrt(max(radicand, 0.0))
    if mu > 1.0 + FASLAB_MU_BOUNDARY_TOL:
        raise NumericalInconsistencyError("modified-model correlation", mu)
    return min(mu, 1.0)


def sinc_generator(n, grid, sinc=FASLAB_DEFAULT_SINC):
    """Toeplitz generator a(n) = sinc(2 pi n W / (N - 1))."""
    if sinc not in SINC_CONVENTIONS:
        raise DomainError("sinc", sinc, " or ".join(SINC_CONVENTIONS))
    n = np.asarray(n, dtype=float)
    if grid.is_single_port:
        return np.ones_like(n)
    x = 2.0 * math.pi * n * grid.aperture / (grid.port_count - 1)
    # numpy's sinc is the normalised sin(pi x) / (pi x)
    if sinc == "unnormalized":
        return np.sinc(x / math.pi)
    return np.sinc(x)


def covariance_matrix(grid, sinc=FASLAB_DEFAULT_SINC):
    """Toeplitz spatial correlation matrix of the fully correlated model."""
    return linalg.toeplitz(sinc_generator(np.arange(grid.port_count), grid, sinc))


def spectral_factor(sigma_matrix):
    """Eigenvalue-based factor F = Q Lambda^(1/2) with F F^H = Sigma.

    Eigenvalues below ``eps * lambda_max`` (round-off negatives included)
    are clamped to zero; more than a 1e-6 share of the trace clamped away
    means the matrix is not a covariance and raises
    :class:`~faslab.errors.ModelError`.
    """
    sigma_matrix = np.asarray(sigma_matrix, dtype=float)
    if sigma_matrix.ndim != 2 or sigma_matrix.shape[0] != sigma_matrix.shape[1]:
        raise DomainError("sigma_matrix", sigma_matrix.shape, "a square matrix")
    if not np.allclose(sigma_matrix, sigma_matrix.T, rtol=0.0, atol=1e-12):
        raise DomainError("sigma_matrix", "asymmetric", "a symmetric matrix")

    try:
        eigenvalues, eigenvectors = linalg.eigh(sigma_matrix)
    except (linalg.LinAlgError, ValueError) as e:
        raise ModelError(f"eigen-decomposition failed: {e}")

    lambda_max = eigenvalues.max()
    if lambda_max <= 0:
        raise ModelError("covariance has no positive eigenvalue")
    clamped = eigenvalues < FASLAB_EIGEN_CLAMP_EPS * lambda_max
    clamped_mass = np.abs(eigenvalues[clamped]).sum()
    trace = np.trace(sigma_matrix)
    if clamped_mass > FASLAB_EIGEN_CLAMPED_MASS_LIMIT * trace:
        raise ModelError(
            f"clamped eigenvalue mass {clamped_mass:.3e} exceeds "
            f"{FASLAB_EIGEN_CLAMPED_MASS_LIMIT:g} of the trace {trace:.3e}"
        )
    if clamped.any():
        Logger.get_logger().debug(
            "Clamped %d eigenvalues (mass %.3e)", clamped.sum(), clamped_mass
        )
    eigenvalues = np.where(clamped, 0.0, eigenvalues)
    return eigenvectors * np.sqrt(eigenvalues)[None, :]


@dataclass(frozen=True, eq=False)
class CorrelationSpec:
    """Correlation model of a port grid with its derived payload.

    ``mu`` (mu_1..mu_N, mu_1 = 1) is set for the reference models and
    ``factor`` for the fully correlated one.
    """

    model: CorrelationModel
    grid: PortGrid
    sigma: float = FASLAB_DEFAULT_SIGMA
    sinc: str = FASLAB_DEFAULT_SINC
    mu: np.ndarray = field(default=None, repr=False)
    factor: np.ndarray = field(default=None, repr=False)

    @classmethod
    def build(cls, model, grid, sigma=FASLAB_DEFAULT_SIGMA, sinc=FASLAB_DEFAULT_SINC):
        """Compute the derived payload of ``model`` on ``grid``."""
        model = CorrelationModel(model)
        if not (math.isfinite(sigma) and sigma > 0):
            raise DomainError("sigma", sigma, "a finite real > 0")
        if sinc not in SINC_CONVENTIONS:
            raise DomainError("sinc", sinc, " or ".join(SINC_CONVENTIONS))

        mu = None
        factor = None
        if grid.is_single_port:
            # all models collapse to one circularly symmetric Gaussian
            mu = np.ones(1)
        elif model is CorrelationModel.SIMPLE_REFERENCE:
            mu = np.array(
                [mu_simple(k, grid) for k in range(1, grid.port_count + 1)]
            )
        elif model is CorrelationModel.MODIFIED_REFERENCE:
            mu = np.full(grid.port_count, mu_modified(grid))
            mu[0] = 1.0
        else:
            factor = spectral_factor(covariance_matrix(grid, sinc))
        return cls(model=model, grid=grid, sigma=sigma, sinc=sinc, mu=mu, factor=factor)

    @property
    def port_count(self):
        """Number of ports."""
        return self.grid.port_count

    def mu_vector(self):
        """Correlation parameters mu_1..mu_N of a reference model."""
        if self.mu is None:
            raise ModelError(f"model '{self.model.value}' has no reference port")
        return self.mu.copy()

    def covariance(self):
        """Covariance of the gain vector divided by sigma^2."""
        if self.factor is not None:
            return self.factor @ self.factor.T
        mu = self.mu
        cov = np.outer(mu, mu)
        np.fill_diagonal(cov, 1.0)
        return cov


@dataclass(frozen=True, eq=False)
class ChannelSample:
    """Complex gains g_1..g_N of one channel realisation."""

    gains: np.ndarray

    def __post_init__(self):
        """Validate the gains."""
        if self.gains.ndim != 1 or self.gains.size == 0:
            raise DomainError("gains", self.gains.shape, "a non-empty vector")
        if not np.all(np.isfinite(self.gains)):
            raise DomainError("gains", "non-finite entries", "finite entries")


def _seed_sequence(seed, ordinal):
    if seed < 0 or ordinal < 0:
        raise DomainError("seed", (seed, ordinal), "non-negative integers")
    return np.random.SeedSequence([int(seed), int(ordinal)])


def derive_seed(seed, ordinal):
    """64-bit mix of a base seed and a task ordinal."""
    return int(_seed_sequence(seed, ordinal).generate_state(1, np.uint64)[0])


def derive_rng(seed, ordinal=0):
    """Independent random stream for task ``ordinal`` of base ``seed``."""
    return np.random.default_rng(_seed_sequence(seed, ordinal))


def draw_latent(rng, size, port_count):
    """I.i.d. N(0, 1/2) latent Gaussians, shape ``(size, 2, N)``.

    ``[:, 0, :]`` are the real parts and ``[:, 1, :]`` the imaginary parts.
    """
    return rng.standard_normal((size, 2, port_count)) * math.sqrt(0.5)


def reference_gains(mu, latent, sigma=FASLAB_DEFAULT_SIGMA):
    """Reference-model gains from the latent Gaussians.

    g_k = sigma (sqrt(1 - mu_k^2) x_k + mu_k x_0) + j sigma (sqrt(1 - mu_k^2) y_k
    + mu_k y_0), with mu_1 = 1 making g_1 = sigma (x_0 + j y_0).
    """
    mu = np.asarray(mu, dtype=float)
    x, y = latent[:, 0, :], latent[:, 1, :]
    spread = np.sqrt(np.clip(1.0 - mu * mu, 0.0, None))
    real = spread * x + mu * x[:, :1]
    imag = spread * y + mu * y[:, :1]
    return sigma * (real + 1j * imag)


def sample_gain_block(spec, rng, size):
    """Draw ``size`` channel realisations as a ``(size, N)`` complex array."""
    latent = draw_latent(rng, size, spec.port_count)
    if spec.factor is None:
        return reference_gains(spec.mu, latent, spec.sigma)
    g0 = spec.sigma * (latent[:, 0, :] + 1j * latent[:, 1, :])
    return g0 @ spec.factor.T


def sample_gains(spec, rng):
    """Draw one channel realisation."""
    return ChannelSample(gains=sample_gain_block(spec, rng, 1)[0])


def fas_amplitude(sample):
    """Amplitude after switching to the strongest port, max_k |g_k|."""
    gains = sample.gains if isinstance(sample, ChannelSample) else np.asarray(sample)
    if gains.size == 0:
        raise DomainError("sample", "empty", "a non-empty gain vector")
    return float(np.abs(gains).max())


def fas_amplitudes(gains):
    """Row-wise best-port amplitude of a ``(size, N)`` gain block."""
    return np.abs(gains).max(axis=-1)
