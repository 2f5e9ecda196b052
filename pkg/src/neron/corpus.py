"""The worked problems shipped with the package."""

from importlib import resources
from typing import List

from .cli_io import ProblemFile, parse_problem

DVR = ("example1", "example2", "example4", "example5")
ARTINIAN = ("buletin1", "buletin2")


def names() -> List[str]:
    return list(DVR + ARTINIAN)


def path(name: str):
    return resources.files("neron") / "data" / f"{name}.json"


def text(name: str) -> str:
    return path(name).read_text(encoding="utf-8")


def load(name: str) -> ProblemFile:
    return parse_problem(text(name), name=name)
