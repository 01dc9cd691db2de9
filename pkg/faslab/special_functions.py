# -*- coding: utf-8 -*-
#
# Copyright (C) 2026 FASLab contributors.
#
# FASLab is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Special functions and quadrature.

Scalar entry points validate their arguments and raise
:class:`~faslab.errors.DomainError`; the ``*_complement`` helpers are
array-capable and meant for the hot loops of the amplitude law.
"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate as sp_integrate
from scipy import special
from scipy.stats import ncx2

from .config import (
    FASLAB_HYP1F2_SERIES_LIMIT,
    FASLAB_HYP1F2_SERIES_MAX_TERMS,
    FASLAB_MARCUM_ASYMPTOTIC_THRESHOLD,
    FASLAB_MARCUM_PAIR_TOLERANCE,
    FASLAB_QUADRATURE_ABS_TOL,
    FASLAB_QUADRATURE_FIXED_NODES,
    FASLAB_QUADRATURE_MAX_SUBDIVISIONS,
    FASLAB_QUADRATURE_REL_TOL,
)
from .errors import ConvergenceError, DomainError
from .logging import Logger

_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class QuadratureSpec:
    """Accuracy and budget of a numerical integral."""

    absolute_tolerance: float = FASLAB_QUADRATURE_ABS_TOL
    relative_tolerance: float = FASLAB_QUADRATURE_REL_TOL
    max_subdivisions: int = FASLAB_QUADRATURE_MAX_SUBDIVISIONS
    fixed_node_count: int = FASLAB_QUADRATURE_FIXED_NODES

    def __post_init__(self):
        """Validate the tolerances and budgets."""
        if not self.absolute_tolerance > 0:
            raise DomainError("absolute_tolerance", self.absolute_tolerance, "> 0")
        if not self.relative_tolerance > 0:
            raise DomainError("relative_tolerance", self.relative_tolerance, "> 0")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions", self.max_subdivisions, ">= 1")
        if self.fixed_node_count < 2:
            raise DomainError("fixed_node_count", self.fixed_node_count, ">= 2")

    def tolerance(self, value):
        """Error target for an integral of magnitude ``value``."""
        return max(self.absolute_tolerance, self.relative_tolerance * abs(value))

    def tightened(self, factor=0.5):
        """Copy with both tolerances scaled by ``factor``."""
        return QuadratureSpec(
            absolute_tolerance=self.absolute_tolerance * factor,
            relative_tolerance=self.relative_tolerance * factor,
            max_subdivisions=self.max_subdivisions,
            fixed_node_count=self.fixed_node_count,
        )


DEFAULT_QUADRATURE = QuadratureSpec()
"""Default quadrature accuracy."""


def _finite(name, x):
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(name, x, "a finite real number")
    return x


def _non_negative(name, x):
    x = _finite(name, x)
    if x < 0:
        raise DomainError(name, x, "a finite real number >= 0")
    return x


#
# Bessel functions
#
def bessel_j0(x):
    """Zero-order Bessel function of the first kind."""
    return float(special.j0(_finite("x", x)))


def bessel_j1(x):
    """First-order Bessel function of the first kind."""
    return float(special.j1(_finite("x", x)))


def bessel_i0_scaled(x):
    """Exponentially scaled modified Bessel function ``exp(-x) * I0(x)``."""
    return float(special.i0e(_non_negative("x", x)))


#
# Marcum Q-function
#
def _marcum_asymptotic(a, b):
    """Large a*b expansion of Q1 and of its complement.

    Q1(a, b) ~ Q(c) + phi(c) / (2a) - c phi(c) / (8 a^2) with c = b - a.
    """
    c = b - a
    phi = np.exp(-0.5 * c * c) / _SQRT_2PI
    correction = phi / (2.0 * a) - c * phi / (8.0 * a * a)
    upper = special.ndtr(-c) + correction
    lower = special.ndtr(c) - correction
    return np.clip(upper, 0.0, 1.0), np.clip(lower, 0.0, 1.0)


def _marcum_pair(a, b):
    """Return ``(Q1(a, b), 1 - Q1(a, b))`` for broadcastable arrays.

    Both halves come from the non-central chi-square law. Past
    a*b > FASLAB_MARCUM_ASYMPTOTIC_THRESHOLD the erfc expansion replaces
    pairs that are not finite or do not add up to one.
    """
    a, b = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    upper = np.empty(a.shape)
    lower = np.empty(a.shape)

    at_zero_b = b == 0.0
    at_zero_a = (a == 0.0) & ~at_zero_b
    regular = ~(at_zero_b | at_zero_a)

    upper[at_zero_b] = 1.0
    lower[at_zero_b] = 0.0

    half_b2 = 0.5 * b[at_zero_a] ** 2
    upper[at_zero_a] = np.exp(-half_b2)
    lower[at_zero_a] = -np.expm1(-half_b2)

    if regular.any():
        x = b[regular] ** 2
        nc = a[regular] ** 2
        with np.errstate(all="ignore"):
            upper[regular] = ncx2.sf(x, 2.0, nc)
            lower[regular] = ncx2.cdf(x, 2.0, nc)

    with np.errstate(invalid="ignore"):
        consistent = np.abs(upper + lower - 1.0) <= FASLAB_MARCUM_PAIR_TOLERANCE
    broken = regular & ~consistent
    broken &= a * b > FASLAB_MARCUM_ASYMPTOTIC_THRESHOLD
    if broken.any():
        Logger.get_logger().debug(
            "Marcum Q1 falls back to the erfc expansion at %d points", broken.sum()
        )
        upper[broken], lower[broken] = _marcum_asymptotic(a[broken], b[broken])

    return np.clip(upper, 0.0, 1.0), np.clip(lower, 0.0, 1.0)


def marcum_q1(a, b):
    """First-order Marcum Q-function.

    Q1(a, b) = int_b^inf x exp(-(x^2 + a^2) / 2) I0(a x) dx, evaluated as the
    tail of a non-central chi-square law with two degrees of freedom,
    P[chi'^2_2(a^2) > b^2].
    """
    a = _non_negative("a", a)
    b = _non_negative("b", b)
    upper, _ = _marcum_pair(a, b)
    return float(upper)


def marcum_q1_complement(a, b):
    """``1 - Q1(a, b)`` without cancellation (array-capable)."""
    _, lower = _marcum_pair(a, b)
    return lower


def log_marcum_q1_complement(a, b):
    """``log(1 - Q1(a, b))``, ``-inf`` where the complement vanishes."""
    with np.errstate(divide="ignore"):
        return np.log(marcum_q1_complement(a, b))


#
# Hypergeometric term of the modified reference model
#
def hyp1f2_series(W):
    """Sum ``1F2(1/2; 1, 3/2; -pi^2 W^2)`` term by term.

    Only stable while 2*pi*W stays moderate: the terms grow like
    (pi W)^(2k) / k!^2 before they decay.
    """
    W = _non_negative("W", W)
    z = -((math.pi * W) ** 2)
    term = 1.0
    terms = [term]
    for k in range(FASLAB_HYP1F2_SERIES_MAX_TERMS):
        term *= (k + 0.5) / ((k + 1.0) * (k + 1.5)) * z / (k + 1.0)
        terms.append(term)
        if abs(term) < 1e-18 * abs(math.fsum(terms)):
            break
    return math.fsum(terms)


def integral_j0(x):
    """``int_0^x J0(t) dt`` through Struve functions.

    x J0(x) + (pi x / 2) (J1(x) H0(x) - J0(x) H1(x)).
    """
    x = _finite("x", x)
    j0, j1 = special.j0(x), special.j1(x)
    struve = special.struve(0, x) * j1 - special.struve(1, x) * j0
    return float(x * j0 + 0.5 * math.pi * x * struve)


def hyp1f2_integral(W):
    """Evaluate ``1F2(1/2; 1, 3/2; -pi^2 W^2)`` as the mean of J0 over [0, 2 pi W]."""
    W = _finite("W", W)
    if W <= 0:
        raise DomainError("W", W, "> 0")
    x = 2.0 * math.pi * W
    return integral_j0(x) / x


def hyp1f2_term(W):
    """Generalised hypergeometric term ``1F2(1/2; 1, 3/2; -pi^2 W^2)``."""
    W = _finite("W", W)
    if W <= 0:
        raise DomainError("W", W, "> 0")
    if 2.0 * math.pi * W > FASLAB_HYP1F2_SERIES_LIMIT:
        return hyp1f2_integral(W)
    return hyp1f2_series(W)


#
# Gaussian tail
#
def gaussian_q(x):
    """Standard Gaussian tail ``Q(x) = erfc(x / sqrt(2)) / 2``."""
    x = _finite("x", x)
    return float(0.5 * special.erfc(x / math.sqrt(2.0)))


#
# Quadrature
#
def _check_bounds(lower, upper):
    lower = float(lower)
    upper = float(upper)
    if math.isnan(lower) or math.isnan(upper) or lower > upper:
        raise DomainError("bounds", (lower, upper), "lower <= upper")
    return lower, upper


def integrate(f, lower, upper, spec=None, mode="adaptive", breakpoints=None):
    """Integrate ``f`` over ``[lower, upper]``.

    ``mode="adaptive"`` runs QUADPACK's Gauss-Kronrod subdivision on a scalar
    integrand; ``mode="fixed"`` runs :func:`integrate_fixed` on a vectorised
    one. ``breakpoints`` (adaptive mode only) are interior points where the
    integrand changes scale. Returns ``(value, error_estimate)`` and raises
    :class:`~faslab.errors.ConvergenceError` (carrying the best estimate)
    when the requested accuracy is not reached.
    """
    spec = spec or DEFAULT_QUADRATURE
    if mode == "fixed":
        return integrate_fixed(f, lower, upper, spec)
    if mode != "adaptive":
        raise DomainError("mode", mode, "'adaptive' or 'fixed'")

    lower, upper = _check_bounds(lower, upper)
    if lower == upper:
        return 0.0, 0.0

    points = None
    if breakpoints is not None:
        points = sorted(p for p in breakpoints if lower < p < upper) or None
    limit = spec.max_subdivisions
    if points:
        limit = max(limit, 2 * len(points))

    result = sp_integrate.quad(
        f,
        lower,
        upper,
        epsabs=spec.absolute_tolerance,
        epsrel=spec.relative_tolerance,
        limit=limit,
        full_output=1,
        points=points,
    )
    value, error = float(result[0]), float(result[1])
    if len(result) > 3:
        # QUADPACK flagged a problem; keep the estimate if it still meets
        # the requested accuracy (round-off warnings near the tolerance floor)
        if not math.isfinite(value) or error > spec.tolerance(value):
            raise ConvergenceError(value, error, result[3])
        Logger.get_logger().debug("Quadrature warning accepted: %s", result[3])
    return value, error


def integrate_fixed(f, lower, upper, spec=None):
    """Gauss-Legendre panels with local panel splitting.

    ``f`` must accept and return numpy arrays. Every panel is compared with
    the sum over its two halves; panels that disagree by more than their
    share of the tolerance are split, until all panels agree or the panel
    budget ``spec.max_subdivisions`` is spent.
    """
    spec = spec or DEFAULT_QUADRATURE
    lower, upper = _check_bounds(lower, upper)
    if lower == upper:
        return 0.0, 0.0

    nodes, weights = leggauss(spec.fixed_node_count)
    length = upper - lower

    def _panels(a, b):
        half = 0.5 * (b - a)
        mid = 0.5 * (b + a)
        x = mid[:, None] + half[:, None] * nodes[None, :]
        y = np.asarray(f(x.ravel()), dtype=float)
        y = np.broadcast_to(y, (x.size,)).reshape(x.shape)
        return half * (y @ weights)

    a = np.array([lower])
    b = np.array([upper])
    whole = _panels(a, b)
    accepted_value = 0.0
    accepted_error = 0.0
    panel_count = 1

    while True:
        mid = 0.5 * (a + b)
        left = _panels(a, mid)
        right = _panels(mid, b)
        refined = left + right
        diff = np.abs(refined - whole)

        estimate = accepted_value + refined.sum()
        budget = spec.tolerance(estimate) * (b - a) / length
        done = diff <= budget
        accepted_value += refined[done].sum()
        accepted_error += diff[done].sum()

        if done.all():
            value = float(accepted_value)
            if not math.isfinite(value):
                raise ConvergenceError(value, float(accepted_error), "non-finite")
            return value, float(accepted_error)

        panel_count += int((~done).sum())
        if panel_count > spec.max_subdivisions:
            value = float(accepted_value + refined[~done].sum())
            error = float(accepted_error + diff[~done].sum())
            raise ConvergenceError(value, error, "panel budget exhausted")

        keep = ~done
        a, mid, b = a[keep], mid[keep], b[keep]
        a, b = np.concatenate([a, mid]), np.concatenate([mid, b])
        whole = np.concatenate([left[keep], right[keep]])
