# -*- coding: utf-8 -*-
#
# Copyright (C) 2026 FASLab contributors.
#
# FASLab is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""FASLab error classes."""


class FASLabError(Exception):
    """Base exception for FASLab errors."""

    @property
    def description(self):
        """Exception's description."""
        return super().__str__()

    def __str__(self):
        """Render the description."""
        return self.description


class DomainError(FASLabError, ValueError):
    """Argument outside the domain of a function."""

    def __init__(self, name, value, expected):
        """Initialise error."""
        super().__init__(name, value, expected)
        self.name = name
        self.value = value
        self.expected = expected

    @property
    def description(self):
        """Exception's description."""
        return f"Invalid {self.name}={self.value!r}: expected {self.expected}"


class ConvergenceError(FASLabError):
    """Numerical quadrature did not reach the requested tolerance."""

    def __init__(self, value, error_estimate, reason=None):
        """Initialise error with the best available estimate."""
        super().__init__(value, error_estimate, reason)
        self.value = value
        self.error_estimate = error_estimate
        self.reason = reason

    @property
    def description(self):
        """Exception's description."""
        msg = (
            f"Quadrature did not converge: best estimate {self.value!r} "
            f"with error estimate {self.error_estimate!r}"
        )
        if self.reason:
            msg += f" ({self.reason})"
        return msg


class DegenerateGridError(FASLabError):
    """Port grid with a single port where the correlation parameters need two."""

    def __init__(self, port_count):
        """Initialise error."""
        super().__init__(port_count)
        self.port_count = port_count

    @property
    def description(self):
        """Exception's description."""
        return (
            f"Correlation parameters need at least 2 ports, got {self.port_count}; "
            "a single port is an uncorrelated Rayleigh channel."
        )


class NumericalInconsistencyError(FASLabError):
    """A quantity that must be non-negative came out clearly negative."""

    def __init__(self, quantity, value):
        """Initialise error."""
        super().__init__(quantity, value)
        self.quantity = quantity
        self.value = value

    @property
    def description(self):
        """Exception's description."""
        return f"Numerically inconsistent {self.quantity}: {self.value!r}"


class ModelError(FASLabError):
    """Correlation model cannot be realised (e.g. covariance not factorisable)."""

    def __init__(self, reason):
        """Initialise error."""
        super().__init__(reason)
        self.reason = reason

    @property
    def description(self):
        """Exception's description."""
        return f"Invalid correlation model: {self.reason}"


class ConfigurationError(FASLabError):
    """Invalid experiment configuration."""

    def __init__(self, reason, field=None):
        """Initialise error."""
        super().__init__(reason, field)
        self.reason = reason
        self.field = field

    @property
    def description(self):
        """Exception's description."""
        if self.field:
            return f"Invalid configuration for '{self.field}': {self.reason}"
        return f"Invalid configuration: {self.reason}"


class ValidationFailure(FASLabError):
    """A cross-validation metric exceeded its threshold."""

    def __init__(self, report):
        """Initialise error."""
        super().__init__(report)
        self.report = report

    @property
    def description(self):
        """Exception's description."""
        failed = ", ".join(self.report.failed_checks())
        return f"Validation failed: {failed}"
