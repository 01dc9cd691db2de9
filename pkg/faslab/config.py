# -*- coding: utf-8 -*-
#
# Copyright (C) 2026 FASLab contributors.
#
# FASLab is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""FASLab default configuration."""

#
# Quadrature
#
FASLAB_QUADRATURE_ABS_TOL = 1e-12
"""Absolute tolerance of the adaptive quadrature."""

FASLAB_QUADRATURE_REL_TOL = 1e-10
"""Relative tolerance of the adaptive quadrature."""

FASLAB_QUADRATURE_MAX_SUBDIVISIONS = 2000
"""Maximum number of subintervals (adaptive) or panels (fixed-node)."""

FASLAB_QUADRATURE_FIXED_NODES = 64
"""Gauss-Legendre nodes per panel of the fixed-node quadrature."""

#
# Special functions
#
FASLAB_MARCUM_ASYMPTOTIC_THRESHOLD = 700.0
"""Above this value of a*b the erfc expansion backs up the chi-square evaluation."""

FASLAB_MARCUM_PAIR_TOLERANCE = 1e-9
"""Largest |Q1 + (1 - Q1) - 1| accepted from the chi-square evaluation."""

FASLAB_HYP1F2_SERIES_LIMIT = 10.0
"""Largest 2*pi*W for which 1F2(1/2; 1, 3/2; -pi^2 W^2) is summed as a series."""

FASLAB_HYP1F2_SERIES_MAX_TERMS = 500
"""Hard cap on the number of series terms."""

#
# Channel models
#
FASLAB_EIGEN_CLAMP_EPS = 1e-12
"""Eigenvalues below eps * lambda_max are clamped to zero."""

FASLAB_EIGEN_CLAMPED_MASS_LIMIT = 1e-6
"""Largest clamped (negative) eigenvalue mass, relative to the trace."""

FASLAB_MU_BOUNDARY_TOL = 1e-12
"""Tolerance for clamping the modified-model correlation onto [0, 1]."""

FASLAB_DEFAULT_SIGMA = 1.0
"""Default per-port channel scale (E|g|^2 = sigma^2)."""

FASLAB_DEFAULT_SINC = "unnormalized"
"""Convention of the sinc generator of the fully correlated model."""

#
# Amplitude law
#
FASLAB_DUPLICATE_PORT_TOL = 1e-9
"""Ports with |mu_k| > 1 - tol duplicate the reference port and are dropped."""

FASLAB_TAIL_MASS = 1e-12
"""Upper truncation of r: N * exp(-r^2 / sigma^2) below this mass."""

#
# Monte Carlo
#
FASLAB_MC_BLOCK_SIZE = 10000
"""Channel draws per Monte Carlo block (one derived seed per block)."""

FASLAB_MC_MIN_SAMPLES = 100
"""Smallest accepted number of Monte Carlo draws."""

FASLAB_DEFAULT_SEED = 20250101
"""Base seed used when neither the config nor the CLI sets one."""

FASLAB_DEFAULT_THREADS = 1
"""Worker threads used for sweeps and Monte Carlo blocks."""

#
# Validation
#
FASLAB_VALIDATION_THRESHOLDS = {
    "ks_distance": 0.01,
    "pdf_normalization": 1e-6,
    "bler_deviation": 3.0,
}
"""Pass thresholds of the validation report."""

#
# Output
#
FASLAB_FLOAT_FORMAT = ".17g"
"""Format of floats written to CSV (17 significant digits round-trip)."""

FASLAB_CSV_HEADER = ("axis", "label", "bler", "std_err", "method")
"""Column order of BLER curve CSV files."""

FASLAB_DIST_HEADER = (
    "r",
    "analytic_cdf",
    "empirical_cdf",
    "analytic_pdf",
    "histogram_pdf",
)
"""Column order of distribution CSV files."""

FASLAB_DIST_GRID_POINTS = 200
"""Number of r points of a distribution table."""

#
# Outer integrals over r
#
FASLAB_OUTER_QUADRATURE_ABS_TOL = 1e-13
"""Absolute tolerance of integrals over the amplitude r."""

FASLAB_OUTER_QUADRATURE_REL_TOL = 1e-9
"""Relative tolerance of integrals over the amplitude r."""

FASLAB_KS_EXACT_POINTS = 4000
"""Up to this many distinct samples the KS distance evaluates the CDF at each."""

FASLAB_KS_GRID_POINTS = 2000
"""Quantile knots of the monotone CDF interpolant used for larger samples."""
