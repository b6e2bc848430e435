"""Utility functions: logging, errors, configuration, validation and formatting."""
