"""Enumeration, sampling and split decomposition of cactus graphs."""

from __future__ import annotations

__version__ = "0.1.0"
