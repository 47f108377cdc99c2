"""Majorization-based witnesses of uncertainty, coherence and Bell nonlocality."""

__version__ = "1.0.0"
