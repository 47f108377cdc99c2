"""Utility modules for the quantumness witness toolkit."""

from quantum_witness.utils.logger import configure_logging, get_logger

__all__ = ["configure_logging", "get_logger"]
