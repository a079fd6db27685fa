"""Exact construction and certification of zigzag sum/product configurations.

The package builds, at finite scale and in exact integer/rational
arithmetic, block systems whose induced sum subsystems land every zigzag
finite sum and every zigzag (arbitrary-order) product inside a
rotation-recurrence membership set, and emits self-contained JSON
certificates that an independent verifier can re-check from scratch.
"""

from __future__ import annotations

__version__ = "0.1.0"

from . import cli, configurations, kernel, oracles, weakring

__all__ = ["cli", "configurations", "kernel", "oracles", "weakring", "__version__"]
