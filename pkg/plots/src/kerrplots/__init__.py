"""Deterministic figures for kerrcircuit CSV data."""

from .render import FigureSpec, SchemaError, load_spec_file, main, render
