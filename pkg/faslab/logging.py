# -*- coding: utf-8 -*-
#
# Copyright (C) 2026 FASLab contributors.
#
# FASLab is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""FASLab logging."""

import logging
import sys


class Logger:
    """Process-wide logger holder.

    Components fetch the logger with ``Logger.get_logger()``; the CLI calls
    ``Logger.initialize`` once. Records always go to standard error so that
    standard output stays reserved for data.
    """

    name = "faslab"

    @classmethod
    def initialize(cls, level=logging.INFO, log_file=None):
        """Attach handlers to the package logger."""
        logger = logging.getLogger(cls.name)
        for handler in list(logger.handlers):
            logger.removeHandler(handler)
            handler.close()

        formatter = logging.Formatter(
            "%(asctime)s %(levelname)s [%(name)s] %(message)s"
        )
        stream_handler = logging.StreamHandler(sys.stderr)
        stream_handler.setFormatter(formatter)
        logger.addHandler(stream_handler)
        if log_file:
            file_handler = logging.FileHandler(log_file)
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)

        if isinstance(level, str):
            level = logging.getLevelName(level.upper())
        logger.setLevel(level)
        logger.propagate = False
        return logger

    @classmethod
    def get_logger(cls):
        """Get the package logger."""
        return logging.getLogger(cls.name)
