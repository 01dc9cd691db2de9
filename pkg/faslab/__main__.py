# -*- coding: utf-8 -*-
#
# Copyright (C) 2026 FASLab contributors.
#
# FASLab is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""Run the command line interface with ``python -m faslab``."""

from .cli import faslab

if __name__ == "__main__":
    faslab(prog_name="faslab")
