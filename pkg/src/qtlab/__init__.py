"""Exact dense-time temporal logic workbench."""

__all__ = ["intervals", "signals", "formulas", "semantics", "oracle", "lab", "cli"]
