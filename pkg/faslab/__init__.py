# -*- coding: utf-8 -*-
#
# Copyright (C) 2026 FASLab contributors.
#
# FASLab is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.
"""Universal BLER bound toolkit for finite-blocklength fluid antenna systems."""

__version__ = "1.0.0"
