"""Pydantic schemas for command output."""

