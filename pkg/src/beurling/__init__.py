"""Extremal one-sided approximations in homogeneous de Branges spaces."""

__version__ = "0.1.0"
