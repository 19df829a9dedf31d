"""Hereditarily finite sets, a first-order language over them, finite
constructible levels, and Cohen-style forcing at finite scale."""

__version__ = "0.1.0"
