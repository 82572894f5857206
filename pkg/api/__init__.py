"""Command-line interface."""

from api.cli import main

__all__ = ['main']
