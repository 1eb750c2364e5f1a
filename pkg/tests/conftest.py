# tests/conftest.py
import sys
from pathlib import Path

# ---------------------------------------------------------
# Ensure project root is on PYTHONPATH BEFORE package imports
# ---------------------------------------------------------
PROJECT_ROOT = Path(__file__).resolve().parents[1]
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

import numpy as np
import pytest


@pytest.fixture(autouse=True)
def clean_divisi_env(monkeypatch):
    """No DIVISI_* override from the developer's shell leaks into a test."""
    for key in ("DIVISI_TOL", "DIVISI_PAPER_TOL", "DIVISI_EIGENSOLVER", "DIVISI_LOG_LEVEL", "DIVISI_LOG_JSON"):
        monkeypatch.delenv(key, raising=False)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
