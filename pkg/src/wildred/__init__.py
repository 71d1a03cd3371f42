"""Exact-arithmetic engine for wild genus-zero de Rham spaces."""

__version__ = "0.1.0"
