"""Access to data files bundled with the package."""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def data_text(name: str) -> str:
    """Return the contents of a bundled data file as text."""
    return resources.files("newsbalance.data").joinpath(name).read_text(encoding="utf-8")


def data_path(name: str) -> Path:
    """Return a filesystem path to a bundled data file.

    Works for regular installs and editable installs; the package is never
    shipped zipped.
    """
    return Path(str(resources.files("newsbalance.data").joinpath(name)))
