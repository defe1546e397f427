# SPDX-License-Identifier: Apache-2.0
"""Mirror-source radio channel toolkit for rectangular rooms."""

from ._mirrorroom import *  # noqa: F401,F403
from ._mirrorroom import __doc__  # noqa: F401

__version__ = "0.1.0"
