"""Elliptic surfaces over Q(T) of high rank: construction and verification."""

__version__ = "0.1.0"
