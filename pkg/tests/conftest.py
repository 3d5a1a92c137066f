from pathlib import Path
from typing import Callable

import numpy as np
import pytest

from sysid.models.system import NoiseModel, SystemSpec
from sysid.simulation.composite import random_stable_system
from sysid.simulation.rng import stream

WriteConfig = Callable[..., Path]


@pytest.fixture
def rng() -> np.random.Generator:
    return stream(1234)


@pytest.fixture
def stable_system() -> SystemSpec:
    return random_stable_system(d=3, rho_max=0.9, seed=7)


@pytest.fixture
def gaussian() -> NoiseModel:
    return NoiseModel.gaussian()


@pytest.fixture
def write_config(tmp_path: Path) -> WriteConfig:
    def write(text: str, name: str = "config.toml") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return write


@pytest.fixture(autouse=True)
def single_thread(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("SYSID_THREADS", "1")
