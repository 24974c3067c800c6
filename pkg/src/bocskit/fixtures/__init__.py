"""Bundled JSON fixtures (regenerate with scripts/make_fixtures.py)."""

import json
from importlib import resources


def path(name: str):
    return resources.files(__name__).joinpath(name)


def load(name: str):
    return json.loads(path(name).read_text())


def algebra_names() -> list[str]:
    return sorted(p.name[:-5] for p in path("algebras").iterdir() if p.name.endswith(".json"))
