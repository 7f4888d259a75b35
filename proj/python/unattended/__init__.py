# Copyright (c) 2026 The Unattended Authors
# SPDX-License-Identifier: Apache-2.0
"""Firmware extraction and analysis toolkit.

Thin package wrapper around the native core. See the project README for the
CLI and the end-to-end case-study walkthroughs.
"""

from ._unattended import *  # noqa: F401,F403
from ._unattended import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
