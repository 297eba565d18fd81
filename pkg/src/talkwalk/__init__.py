"""Predict conference talk attendance from contact and interest networks."""

__version__ = "0.1.0"
