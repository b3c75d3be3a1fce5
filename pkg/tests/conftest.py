import json

import pytest

from ddkit.core.finitebath import random_hamiltonian
from ddkit.core.stateprotect import random_protected_system
from ddkit.database import make_session_factory


@pytest.fixture
def pure_dephasing_h():
    return random_hamiltonian(dim=4, alpha=1.0, beta=0.5, seed=11, pure_dephasing=True)


@pytest.fixture
def general_h():
    return random_hamiltonian(dim=4, alpha=1.0, beta=0.5, seed=12)


@pytest.fixture
def protected_system():
    return random_protected_system(dim=6, seed=5)


@pytest.fixture
def ledger():
    SessionLocal = make_session_factory("sqlite://")
    db = SessionLocal()
    try:
        yield db
    finally:
        db.close()


@pytest.fixture
def write_config(tmp_path):
    """Write an experiment config into tmp_path and return its path."""

    def _write(payload, name="experiment.json"):
        path = tmp_path / name
        path.write_text(json.dumps(payload))
        return path

    return _write


@pytest.fixture
def finitebath_config():
    return {
        "engine": "finitebath",
        "sequence": {"family": "udd", "n": 3},
        "bath": {"dim": 4, "alpha": 1.0, "beta": 0.5, "seed": 3, "pure_dephasing": True},
        "sweep": {"t_max": 0.4, "points": 12},
        "fit": {"metric": "dephasing_error", "claimed_order": 4},
        "output": {"csv": "out/sweep.csv", "report": "out/report.json"},
    }
