"""Toolkit for measuring political coverage and tonality imbalance in news archives."""

__version__ = "0.1.0"
