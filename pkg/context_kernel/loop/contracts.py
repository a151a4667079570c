"""Typed contracts shared by the CLI and the orchestrator.

``RunConfig`` lives in orchestrator.py next to the code that consumes it;
this module re-exports it together with the exit-code table.
"""
from __future__ import annotations

from context_kernel.loop.orchestrator import EXIT_CODES, ConfigError, RunConfig

__all__ = ["EXIT_CODES", "ConfigError", "RunConfig"]
