"""API layer."""

