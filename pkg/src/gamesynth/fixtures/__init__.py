"""Bundled example documents."""

from importlib import resources


def fixture_path(name: str):
    return resources.files(__name__) / name
