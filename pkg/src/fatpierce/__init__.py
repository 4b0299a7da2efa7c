"""Piercing r-fat families in the plane, with certified disk covers and an exact oracle."""
from __future__ import annotations

__version__ = "0.1.0"
