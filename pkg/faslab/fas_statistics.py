# -*- coding: utf-8 -*-
#
# Copyright (C) 2026 FASLab contributors.
#
# FASLab is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Law of the best-port amplitude |g_FAS| under a reference correlation model.

Conditioned on the reference port, |g_1|^2 = sigma^2 t with t ~ Exp(1), and
every other port is Rician, so that

    P(|g_k| <= r | t) = 1 - Q1(alpha_k sqrt(t), beta_k r),
    alpha_k = sqrt(2 mu_k^2 / (1 - mu_k^2)),
    beta_k = sqrt(2 / (sigma^2 (1 - mu_k^2))).

The CDF integrates the product of these factors over t in [0, r^2 / sigma^2];
the PDF follows by differentiating under the integral sign. Both evaluate the
Marcum factors once per (port, node) and combine them in the log domain.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.special import i0e

from .channel_models import CorrelationModel
from .config import (
    FASLAB_DUPLICATE_PORT_TOL,
    FASLAB_KS_EXACT_POINTS,
    FASLAB_KS_GRID_POINTS,
    FASLAB_OUTER_QUADRATURE_ABS_TOL,
    FASLAB_OUTER_QUADRATURE_REL_TOL,
    FASLAB_TAIL_MASS,
)
from .errors import ConfigurationError, DomainError
from .logging import Logger
from .special_functions import (
    DEFAULT_QUADRATURE,
    QuadratureSpec,
    integrate,
    integrate_fixed,
    log_marcum_q1_complement,
)

OUTER_QUADRATURE = QuadratureSpec(
    absolute_tolerance=FASLAB_OUTER_QUADRATURE_ABS_TOL,
    relative_tolerance=FASLAB_OUTER_QUADRATURE_REL_TOL,
)
"""Accuracy of integrals over the amplitude r."""


@dataclass(frozen=True, eq=False)
class AmplitudeDistribution:
    """Analytic law of |g_FAS|.

    ``mu`` holds mu_2..mu_N; mu_1 = 1 is implicit, so an empty ``mu`` is the
    single-port Rayleigh law.
    """

    sigma: float
    mu: np.ndarray = field(default_factory=lambda: np.zeros(0))
    quadrature: QuadratureSpec = DEFAULT_QUADRATURE

    def __post_init__(self):
        """Validate the law and precompute the Marcum scale factors."""
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise DomainError("sigma", self.sigma, "a finite real > 0")
        mu = np.atleast_1d(np.asarray(self.mu, dtype=float))
        if mu.ndim != 1:
            raise DomainError("mu", mu.shape, "a vector")
        if np.any(np.abs(mu) > 1.0 - FASLAB_DUPLICATE_PORT_TOL):
            raise DomainError(
                "mu", mu, f"|mu_k| <= 1 - {FASLAB_DUPLICATE_PORT_TOL:g} for k >= 2"
            )
        spread = 1.0 - mu * mu
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "_alpha", np.sqrt(2.0 * mu * mu / spread))
        object.__setattr__(self, "_beta", np.sqrt(2.0 / (self.sigma**2 * spread)))

    @classmethod
    def from_spec(cls, spec, quadrature=DEFAULT_QUADRATURE):
        """Law of a reference-model :class:`~faslab.channel_models.CorrelationSpec`.

        Ports that duplicate the reference port (|mu_k| close to 1) cannot
        change the maximum and are dropped.
        """
        if spec.model is CorrelationModel.FULLY_CORRELATED:
            raise ConfigurationError(
                "no analytic amplitude law exists for the fully correlated model",
                field="model",
            )
        mu = spec.mu_vector()[1:]
        duplicated = np.abs(mu) > 1.0 - FASLAB_DUPLICATE_PORT_TOL
        if duplicated.any():
            Logger.get_logger().warning(
                "Dropping %d ports duplicating the reference port", duplicated.sum()
            )
        return cls(sigma=spec.sigma, mu=mu[~duplicated], quadrature=quadrature)

    @classmethod
    def iid(cls, port_count, sigma=1.0, quadrature=DEFAULT_QUADRATURE):
        """Law of the maximum of ``port_count`` independent Rayleigh amplitudes."""
        return cls(sigma=sigma, mu=np.zeros(port_count - 1), quadrature=quadrature)

    @property
    def port_count(self):
        """Number of ports, reference port included."""
        return self.mu.size + 1

    def upper_support(self, tail_mass=FASLAB_TAIL_MASS):
        """Amplitude beyond which N * exp(-r^2 / sigma^2) < ``tail_mass``."""
        return self.sigma * math.sqrt(math.log(self.port_count / tail_mass))

    def log_factors(self, t, r):
        """log P(|g_k| <= r | t) for every node t (rows) and port k >= 2."""
        t = np.asarray(t, dtype=float)[:, None]
        return log_marcum_q1_complement(self._alpha * np.sqrt(t), self._beta * r)

    def log_factor_derivatives(self, t, r):
        """log of d/dr P(|g_k| <= r | t) for every node t (rows) and port k >= 2."""
        t = np.asarray(t, dtype=float)[:, None]
        a = self._alpha * np.sqrt(t)
        b = self._beta * r
        with np.errstate(divide="ignore"):
            return (
                np.log(self._beta * self._beta * r)
                - 0.5 * (a - b) ** 2
                + np.log(i0e(a * b))
            )


def _check_r(r):
    r = float(r)
    if not (math.isfinite(r) and r >= 0):
        raise DomainError("r", r, "a finite real >= 0")
    return r


def _rayleigh_cdf(r, sigma):
    return -math.expm1(-((r / sigma) ** 2))


def _rayleigh_pdf(r, sigma):
    return 2.0 * r / sigma**2 * math.exp(-((r / sigma) ** 2))


def cdf_gfas(r, dist):
    """CDF of |g_FAS|: P(|g_1| <= r, ..., |g_N| <= r)."""
    r = _check_r(r)
    if r == 0.0:
        return 0.0
    if dist.mu.size == 0:
        return _rayleigh_cdf(r, dist.sigma)

    def integrand(t):
        return np.exp(-t + dist.log_factors(t, r).sum(axis=1))

    value, _ = integrate_fixed(integrand, 0.0, (r / dist.sigma) ** 2, dist.quadrature)
    return min(max(value, 0.0), 1.0)


def _leave_one_out(log_factors):
    """log prod_{k != i} F_k for every column i, -inf where a remaining factor is 0."""
    is_zero = np.isneginf(log_factors)
    finite = np.where(is_zero, 0.0, log_factors)
    others = finite.sum(axis=1, keepdims=True) - finite
    zeros_elsewhere = is_zero.sum(axis=1, keepdims=True) - is_zero
    return np.where(zeros_elsewhere > 0, -np.inf, others)


def pdf_gfas(r, dist):
    """PDF of |g_FAS|.

    Boundary term (upper limit t = r^2 / sigma^2 of the CDF integral) plus,
    for every port i >= 2, the integral of its factor derivative times the
    product of the remaining factors.
    """
    r = _check_r(r)
    if dist.mu.size == 0:
        return _rayleigh_pdf(r, dist.sigma)
    if r == 0.0:
        return 0.0

    upper = (r / dist.sigma) ** 2
    log_boundary = dist.log_factors(np.array([upper]), r).sum()
    boundary = _rayleigh_pdf(r, dist.sigma) * math.exp(log_boundary)

    def integrand(t):
        log_terms = (
            -t[:, None] + _leave_one_out(dist.log_factors(t, r))
        ) + dist.log_factor_derivatives(t, r)
        with np.errstate(under="ignore"):
            return np.exp(log_terms).sum(axis=1)

    value, _ = integrate_fixed(integrand, 0.0, upper, dist.quadrature)
    return max(boundary + value, 0.0)


def pdf_normalization_residual(dist, quadrature=OUTER_QUADRATURE):
    """|int_0^r_max pdf_gfas(r) dr - 1|."""
    value, _ = integrate(
        lambda r: pdf_gfas(r, dist), 0.0, dist.upper_support(), quadrature
    )
    return abs(value - 1.0)


@dataclass(frozen=True, eq=False)
class EmpiricalDistribution:
    """Sorted Monte Carlo samples of an amplitude."""

    sorted_samples: np.ndarray

    def __post_init__(self):
        """Validate the samples."""
        samples = np.asarray(self.sorted_samples, dtype=float)
        if samples.ndim != 1 or samples.size == 0:
            raise DomainError("samples", samples.shape, "a non-empty vector")
        if np.any(samples < 0) or not np.all(np.isfinite(samples)):
            raise DomainError("samples", "negative or non-finite", "values >= 0")
        if np.any(np.diff(samples) < 0):
            raise DomainError("samples", "unsorted", "non-decreasing order")
        object.__setattr__(self, "sorted_samples", samples)

    @classmethod
    def from_samples(cls, values):
        """Sort raw samples."""
        return cls(sorted_samples=np.sort(np.asarray(values, dtype=float).ravel()))

    @property
    def size(self):
        """Number of samples."""
        return self.sorted_samples.size


def empirical_cdf(samples, r):
    """Fraction of samples <= r (right-continuous)."""
    index = np.searchsorted(samples.sorted_samples, r, side="right")
    return index / samples.size


def cdf_gfas_grid(r_values, dist):
    """Evaluate :func:`cdf_gfas` on every point of ``r_values``."""
    return np.array([cdf_gfas(r, dist) for r in np.asarray(r_values, dtype=float)])


def pdf_gfas_grid(r_values, dist):
    """Evaluate :func:`pdf_gfas` on every point of ``r_values``."""
    return np.array([pdf_gfas(r, dist) for r in np.asarray(r_values, dtype=float)])


def _cdf_at(points, dist, samples):
    """Analytic CDF at the distinct sample points.

    Large samples use a monotone interpolant through quantile knots instead
    of one quadrature per point.
    """
    if points.size <= FASLAB_KS_EXACT_POINTS:
        return cdf_gfas_grid(points, dist)
    knots = np.quantile(
        samples.sorted_samples, np.linspace(0.0, 1.0, FASLAB_KS_GRID_POINTS)
    )
    knots = np.unique(np.concatenate([[0.0], knots]))
    interpolant = PchipInterpolator(knots, cdf_gfas_grid(knots, dist))
    return np.clip(interpolant(points), 0.0, 1.0)


def ks_distance(samples, dist):
    """Kolmogorov-Smirnov distance between the samples and the analytic law.

    The supremum is taken over both edges of every step of the empirical
    CDF.
    """
    points, counts = np.unique(samples.sorted_samples, return_counts=True)
    right = np.cumsum(counts) / samples.size
    left = right - counts / samples.size
    analytic = _cdf_at(points, dist, samples)
    return float(max(np.max(right - analytic), np.max(analytic - left)))


def histogram_pdf(samples, bins="fd"):
    """Density histogram with Freedman-Diaconis bins: ``(centres, density, edges)``."""
    density, edges = np.histogram(samples.sorted_samples, bins=bins, density=True)
    centres = 0.5 * (edges[:-1] + edges[1:])
    return centres, density, edges


def histogram_density_at(r_values, density, edges):
    """Histogram density at arbitrary points (0 outside the binned range)."""
    r_values = np.asarray(r_values, dtype=float)
    index = np.searchsorted(edges, r_values, side="right") - 1
    inside = (index >= 0) & (index < density.size)
    # the last edge closes the last bin
    closing = r_values == edges[-1]
    index = np.where(closing, density.size - 1, index)
    inside |= closing
    return np.where(inside, density[np.clip(index, 0, density.size - 1)], 0.0)


def distribution_table(dist, samples, r_values):
    """Analytic and empirical CDF/PDF columns on ``r_values``."""
    _, density, edges = histogram_pdf(samples)
    return {
        "r": np.asarray(r_values, dtype=float),
        "analytic_cdf": cdf_gfas_grid(r_values, dist),
        "empirical_cdf": np.array([empirical_cdf(samples, r) for r in r_values]),
        "analytic_pdf": pdf_gfas_grid(r_values, dist),
        "histogram_pdf": histogram_density_at(r_values, density, edges),
    }
