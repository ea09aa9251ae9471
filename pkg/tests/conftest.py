from __future__ import annotations

from importlib import resources
from pathlib import Path

import pytest

TESTS = Path(__file__).parent


@pytest.fixture
def bundled() -> Path:
    return Path(str(resources.files("chainprint") / "data"))


@pytest.fixture
def synthetic_profiles() -> Path:
    return TESTS / "data" / "synthetic_profiles.csv"


@pytest.fixture
def write_csv(tmp_path):
    """Write ``text`` to a fresh CSV file under tmp_path and return its path."""
    counter = iter(range(10_000))

    def _write(text: str, name: str | None = None) -> Path:
        path = tmp_path / (name or f"f{next(counter)}.csv")
        path.write_text(text, encoding="utf-8")
        return path

    return _write
