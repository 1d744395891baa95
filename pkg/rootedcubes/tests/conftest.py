"""Test configuration, large and shared fixtures.
"""
import json

from pathlib import Path
from typing import Any, Callable, Dict, List

import pytest

from rootedcubes.setfamily import Family, family_to_json


####################################################################################################
# NAMED FAMILIES
####################################################################################################


@pytest.fixture(scope="session")
def F1():
    """Circle over [3] that contains the empty set but is not simply rooted."""
    return Family.from_sets(3, [[], [1], [2], [1, 3], [2, 3], [1, 2, 3]])


@pytest.fixture(scope="session")
def F2():
    """Hexagon over [3], simply rooted but missing the empty set."""
    return Family.from_sets(3, [[1], [2], [3], [1, 2], [1, 3], [2, 3]])


@pytest.fixture(scope="session")
def F3():
    """Simply rooted with the empty set: a square with a pendant edge."""
    return Family.from_sets(3, [[], [1], [2], [3], [1, 3]])


@pytest.fixture(scope="session")
def power_set_3():
    """All of 2^[3], the solid cube."""
    return Family.power_set(3)


@pytest.fixture(scope="session")
def only_empty():
    """The single vertex {∅} over [1]."""
    return Family.from_sets(1, [[]])


####################################################################################################
# FAMILY FILES
####################################################################################################


@pytest.fixture
def family_file(tmp_path) -> Callable[..., Path]:
    """Factory writing a family, or raw text, to a JSON file in ``tmp_path``."""

    def _write(content: Any, name: str = "family.json") -> Path:
        location = tmp_path / name
        if isinstance(content, Family):
            content = family_to_json(content)
        text = content if isinstance(content, str) else json.dumps(content)
        with open(location, "w", encoding="utf-8") as fstream:
            fstream.write(text)
        return location

    return _write


@pytest.fixture
def batch_file(tmp_path, F1, F2, F3) -> Path:
    """Batch file with one family per line, blank lines ignored."""
    location = tmp_path / "batch.jsonl"
    lines: List[Dict[str, Any]] = [family_to_json(f) for f in (F1, F2, F3)]
    with open(location, "w", encoding="utf-8") as fstream:
        fstream.write("\n".join(json.dumps(line) for line in lines[:2]))
        fstream.write("\n\n" + json.dumps(lines[2]) + "\n")
    return location
