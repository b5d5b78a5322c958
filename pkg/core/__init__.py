"""Core configuration and errors."""

__version__ = "0.1.0"
