# -*- coding: utf-8 -*-
#
# Copyright (C) 2026 FASLab contributors.
#
# FASLab is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""BLER bounds of finite-blocklength fluid antenna systems.

* :func:`conditional_bler_bound`: Chernoff/union bound given |g_FAS| = r,

      sum_{U'=1}^{U} (U'/U) exp(L' - M log(1 + 0.25 M sigma_eta'^2 / sigma_eta^2)),
      sigma_eta'^2 = 2 U' sigma_c^2 r^2,

  whose exponent comes from the Chernoff parameter lambda = 0.5 M / sigma_eta^2.
* :func:`analytic_bler_bound`: the conditional bound averaged over the
  analytic amplitude law.
* :func:`empirical_bler_bound`: the same average over sampled channels,
  valid for every correlation model.
* :func:`conventional_bler`: normal approximation of an L-antenna MRC
  receiver.
"""

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp

from .channel_models import derive_rng, fas_amplitudes, sample_gain_block
from .config import (
    FASLAB_DEFAULT_SIGMA,
    FASLAB_DEFAULT_THREADS,
    FASLAB_MC_BLOCK_SIZE,
    FASLAB_MC_MIN_SAMPLES,
)
from .errors import DomainError
from .fas_statistics import pdf_gfas
from .logging import Logger
from .special_functions import QuadratureSpec, gaussian_q, integrate

BLER_QUADRATURE = QuadratureSpec(absolute_tolerance=1e-300, relative_tolerance=1e-8)
"""Accuracy of the r-integral of the analytic bound (relative to its value)."""


class UnionWeightMode(enum.Enum):
    """How the union-bound weight log C(U, U')^2 is evaluated."""

    PAPER_SUM = "paper"
    EXACT_LOG_BINOMIAL = "exact"


class ClampMode(enum.Enum):
    """Where the bound is clamped to 1 when averaging over the channel."""

    POINTWISE = "pointwise"
    OUTER = "outer"


class BlerMethod(enum.Enum):
    """How a BLER value was obtained."""

    ANALYTIC_INTEGRAL = "analytic"
    MONTE_CARLO = "empirical"
    CLOSED_FORM = "closed_form"


@dataclass(frozen=True)
class SystemConfig:
    """Finite-blocklength link parameters."""

    users: int
    blocklength: int
    snr_db: float
    sigma: float = FASLAB_DEFAULT_SIGMA
    union_weight_mode: UnionWeightMode = UnionWeightMode.PAPER_SUM
    clamp_mode: ClampMode = ClampMode.POINTWISE

    def __post_init__(self):
        """Validate the link parameters."""
        if int(self.users) != self.users or self.users < 1:
            raise DomainError("users", self.users, "an integer >= 1")
        if int(self.blocklength) != self.blocklength or self.blocklength < 1:
            raise DomainError("blocklength", self.blocklength, "an integer >= 1")
        if not math.isfinite(self.snr_db):
            raise DomainError("snr_db", self.snr_db, "a finite real")
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise DomainError("sigma", self.sigma, "a finite real > 0")
        object.__setattr__(
            self, "union_weight_mode", UnionWeightMode(self.union_weight_mode)
        )
        object.__setattr__(self, "clamp_mode", ClampMode(self.clamp_mode))

    @property
    def snr(self):
        """Linear SNR sigma^2 / sigma_eta^2."""
        return 10.0 ** (self.snr_db / 10.0)

    @property
    def sigma_eta_sq(self):
        """Noise power sigma_eta^2 = sigma^2 / SNR."""
        return self.sigma**2 / self.snr

    @property
    def sigma_c_sq(self):
        """Codeword element variance 1/M (unit-norm codewords)."""
        return 1.0 / self.blocklength

    @property
    def chernoff_lambda(self):
        """Chernoff parameter 0.5 M / sigma_eta^2."""
        return 0.5 * self.blocklength / self.sigma_eta_sq


@dataclass(frozen=True)
class BenchmarkConfig:
    """Conventional L-antenna receiver on the same link."""

    antennas: int
    system: SystemConfig

    def __post_init__(self):
        """Validate the antenna count."""
        if int(self.antennas) != self.antennas or self.antennas < 1:
            raise DomainError("antennas", self.antennas, "an integer >= 1")


@dataclass(frozen=True)
class BlerResult:
    """A BLER value with its provenance and uncertainty."""

    value: float
    method: BlerMethod
    mc_std_error: float = 0.0
    samples_used: int = 0
    quadrature_error: float = 0.0

    def __post_init__(self):
        """Validate the range."""
        if not 0.0 <= self.value <= 1.0:
            raise DomainError("value", self.value, "a probability in [0, 1]")
        if not self.mc_std_error >= 0.0:
            raise DomainError("mc_std_error", self.mc_std_error, ">= 0")

    @property
    def error(self):
        """Total uncertainty of the value."""
        return self.mc_std_error + self.quadrature_error

    def combined_error(self, other):
        """Uncertainty of the difference with another result."""
        return self.error + other.error


def log_union_weight(users, users_in_error, mode=UnionWeightMode.PAPER_SUM):
    """Log of the union-bound weight of ``users_in_error`` erroneous detections.

    ``paper`` sums 2 log((U - i) / (U' - i)) over i = 1..U'-1 (the i = 0
    factor of the binomial is left out); ``exact`` is 2 log C(U, U').
    """
    U, U_prime = int(users), int(users_in_error)
    if U != users or U_prime != users_in_error or U < 1 or not 0 <= U_prime <= U:
        raise DomainError("U'", users_in_error, f"an integer in 0..{users}")
    mode = UnionWeightMode(mode)
    if mode is UnionWeightMode.EXACT_LOG_BINOMIAL:
        log_binomial = gammaln(U + 1) - gammaln(U_prime + 1) - gammaln(U - U_prime + 1)
        return 2.0 * float(log_binomial)
    i = np.arange(1, U_prime)
    return float(2.0 * np.log((U - i) / (U_prime - i)).sum())


def _log_terms(cfg, r, mode):
    """Per-U' log summands for U' = 1..U, shape ``r.shape + (U,)``."""
    r = np.asarray(r, dtype=float)
    U = cfg.users
    U_prime = np.arange(1, U + 1, dtype=float)
    log_weights = np.array([log_union_weight(U, k, mode) for k in range(1, U + 1)])
    sigma_eta_prime_sq = 2.0 * U_prime * cfg.sigma_c_sq * r[..., None] ** 2
    # 0.25 M sigma_eta'^2 / sigma_eta^2 = lambda sigma_eta'^2 / 2
    exponent = cfg.blocklength * np.log1p(
        0.5 * cfg.chernoff_lambda * sigma_eta_prime_sq
    )
    return np.log(U_prime / U) + log_weights - exponent


def log_conditional_bler_bound(cfg, r, mode=None):
    """Log of the unclamped conditional bound (array-capable)."""
    mode = cfg.union_weight_mode if mode is None else UnionWeightMode(mode)
    return logsumexp(_log_terms(cfg, r, mode), axis=-1)


def conditional_bler_bound_raw(cfg, r, mode=None):
    """Unclamped conditional bound given |g_FAS| = r (array-capable)."""
    return np.exp(log_conditional_bler_bound(cfg, r, mode))


def conditional_bler_bound(cfg, r, mode=None):
    """BLER bound given |g_FAS| = r, clamped to 1.

    The U' = 0 event has zero prefactor and does not contribute.
    """
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0) or not np.all(np.isfinite(r_arr)):
        raise DomainError("r", r, "finite amplitudes >= 0")
    value = np.minimum(1.0, conditional_bler_bound_raw(cfg, r_arr, mode))
    return float(value) if np.ndim(value) == 0 else value


def _averaged_bound(cfg):
    """Function of r averaged over the channel, according to the clamp mode."""
    if cfg.clamp_mode is ClampMode.POINTWISE:
        return lambda r: conditional_bler_bound(cfg, r)
    return lambda r: conditional_bler_bound_raw(cfg, r)


def _geometric_breakpoints(upper, levels=40):
    return [upper * 2.0**-k for k in range(levels, 0, -1)]


def analytic_bler_bound(cfg, dist, quadrature=BLER_QUADRATURE):
    """Conditional bound integrated against the analytic PDF of |g_FAS|.

    The integral runs over [0, r_max] with r_max past the 1e-12 tail mass
    of the amplitude law; geometric breakpoints towards r = 0 resolve the
    steep decay of the conditional bound at high SNR.
    """
    bound = _averaged_bound(cfg)
    upper = dist.upper_support()

    def integrand(r):
        density = pdf_gfas(r, dist)
        if density == 0.0:
            return 0.0
        return density * float(bound(r))

    value, error = integrate(
        integrand,
        0.0,
        upper,
        quadrature,
        breakpoints=_geometric_breakpoints(upper),
    )
    Logger.get_logger().debug(
        "Analytic bound U=%d M=%d SNR=%g dB: %.6e (+/- %.1e)",
        cfg.users,
        cfg.blocklength,
        cfg.snr_db,
        value,
        error,
    )
    return BlerResult(
        value=min(max(value, 0.0), 1.0),
        method=BlerMethod.ANALYTIC_INTEGRAL,
        quadrature_error=error,
    )


@dataclass(frozen=True)
class RunningMoments:
    """Count, mean and sum of squared deviations of a stream of values."""

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0

    @classmethod
    def from_values(cls, values):
        """Moments of one block of values."""
        values = np.asarray(values, dtype=float)
        if values.size == 0:
            return cls()
        mean = float(values.mean())
        return cls(
            count=values.size, mean=mean, m2=float(((values - mean) ** 2).sum())
        )

    def merge(self, other):
        """Combine with the moments of a disjoint block."""
        if other.count == 0:
            return self
        if self.count == 0:
            return other
        count = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * other.count / count
        m2 = self.m2 + other.m2 + delta * delta * self.count * other.count / count
        return RunningMoments(count=count, mean=mean, m2=m2)

    @property
    def variance(self):
        """Unbiased sample variance."""
        return self.m2 / (self.count - 1) if self.count > 1 else 0.0

    @property
    def std_error(self):
        """Standard error of the mean."""
        return math.sqrt(self.variance / self.count) if self.count else 0.0


def _block_sizes(n_samples, block_size):
    full, rest = divmod(n_samples, block_size)
    return [block_size] * full + ([rest] if rest else [])


def _base_seed(rng):
    if isinstance(rng, np.random.Generator):
        return int(rng.integers(0, 2**63 - 1))
    return int(rng)


def sample_fas_amplitudes(spec, n_samples, rng, block_size=FASLAB_MC_BLOCK_SIZE):
    """Draw ``n_samples`` best-port amplitudes with the block seeding scheme."""
    seed = _base_seed(rng)
    blocks = [
        fas_amplitudes(sample_gain_block(spec, derive_rng(seed, ordinal), size))
        for ordinal, size in enumerate(_block_sizes(n_samples, block_size))
    ]
    return np.concatenate(blocks)


def empirical_bler_bound(
    cfg,
    spec,
    n_samples,
    rng,
    threads=FASLAB_DEFAULT_THREADS,
    block_size=FASLAB_MC_BLOCK_SIZE,
):
    """Monte Carlo average of the conditional bound over sampled channels.

    ``rng`` is a base seed or a ``numpy.random.Generator`` (one integer is
    drawn from it). Draws are split in blocks of ``block_size``; block
    ``b`` uses the stream derived from (seed, b) and the block moments are
    merged in block order, so the result does not depend on ``threads``.
    """
    if int(n_samples) != n_samples or n_samples < FASLAB_MC_MIN_SAMPLES:
        raise DomainError(
            "n_samples", n_samples, f"an integer >= {FASLAB_MC_MIN_SAMPLES}"
        )
    seed = _base_seed(rng)
    bound = _averaged_bound(cfg)

    def run_block(task):
        ordinal, size = task
        gains = sample_gain_block(spec, derive_rng(seed, ordinal), size)
        return RunningMoments.from_values(bound(fas_amplitudes(gains)))

    tasks = list(enumerate(_block_sizes(int(n_samples), block_size)))
    if threads > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            moments = list(executor.map(run_block, tasks))
    else:
        moments = [run_block(task) for task in tasks]

    total = RunningMoments()
    for block in moments:
        total = total.merge(block)
    return BlerResult(
        value=min(max(total.mean, 0.0), 1.0),
        method=BlerMethod.MONTE_CARLO,
        mc_std_error=total.std_error,
        samples_used=total.count,
    )


#
# Conventional L-antenna benchmark
#
def conventional_sinr(bench):
    """Maximum SINR after maximal ratio combining over L antennas.

    4 L^3 sigma^2 / (pi (U - 1) sigma^2 + 4 L^2 sigma_eta^2)
    """
    L = bench.antennas
    cfg = bench.system
    sigma_sq = cfg.sigma**2
    return (4.0 * L**3 * sigma_sq) / (
        math.pi * (cfg.users - 1) * sigma_sq + 4.0 * L**2 * cfg.sigma_eta_sq
    )


def conventional_capacity(sinr):
    """Averaged capacity 0.5 log2(1 + SINR), bits per channel use."""
    return 0.5 * math.log2(1.0 + sinr)


def conventional_dispersion(sinr):
    """Channel dispersion (SINR / 2)(SINR + 2) / (SINR + 1)^2 log2(e)^2."""
    return 0.5 * sinr * (sinr + 2.0) / (sinr + 1.0) ** 2 * math.log2(math.e) ** 2


def code_rate(users, blocklength):
    """Code rate log2(U) / M."""
    return math.log2(users) / blocklength


def conventional_bler(bench):
    """Normal approximation Q((C - R_c) / sqrt(V_dis / M)) of the L-antenna BLER.

    Zero SINR has zero dispersion: the limit is 1 for a positive code rate
    and 1/2 for U = 1.
    """
    cfg = bench.system
    sinr = conventional_sinr(bench)
    rate = code_rate(cfg.users, cfg.blocklength)
    if sinr == 0.0:
        return 1.0 if rate > 0 else 0.5
    capacity = conventional_capacity(sinr)
    dispersion = conventional_dispersion(sinr)
    return gaussian_q((capacity - rate) / math.sqrt(dispersion / cfg.blocklength))


def conventional_bler_result(bench):
    """:func:`conventional_bler` as a :class:`BlerResult`."""
    return BlerResult(value=conventional_bler(bench), method=BlerMethod.CLOSED_FORM)
