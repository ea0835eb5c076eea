import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from analogykit.alphabet import Alphabet, load_alphabet

DATA = Path(__file__).resolve().parent.parent / "data"

CASE_LETTERS_SPEC = {
    "features_dim": 5,
    "symbols": [
        {"name": "a", "features": [1, 0, 0, 1, 0]},
        {"name": "b", "features": [0, 1, 0, 1, 0]},
        {"name": "c", "features": [0, 0, 1, 1, 0]},
        {"name": "A", "features": [1, 0, 0, 0, 1]},
        {"name": "B", "features": [0, 1, 0, 0, 1]},
        {"name": "C", "features": [0, 0, 1, 0, 1]},
    ],
}


@pytest.fixture(scope="session")
def case_letters() -> Alphabet:
    """Six letters in two case variants over five binary features."""
    return load_alphabet(CASE_LETTERS_SPEC)


@pytest.fixture(scope="session")
def sub_alphabet() -> Alphabet:
    """Three-symbol restriction used by the exhaustive sequence checks."""
    spec = dict(CASE_LETTERS_SPEC)
    spec["symbols"] = [s for s in CASE_LETTERS_SPEC["symbols"]
                       if s["name"] in ("a", "b", "A")]
    return load_alphabet(spec)


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA
