"""Ensure the project root is importable and keep preferences out of ~."""
from __future__ import annotations

import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))


@pytest.fixture(autouse=True)
def isolated_prefs(tmp_path, monkeypatch):
    monkeypatch.setenv('TRISPEC_HOME', str(tmp_path / 'trispec-home'))
    monkeypatch.delenv('TRISPEC_SEED', raising=False)
    yield tmp_path / 'trispec-home'
