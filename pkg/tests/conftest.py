import pytest

from orbithull.lib.haar import SamplerState

# (weights, antisymmetric, nilpotent) of the gallery tori, all at v = (1, ..., 1)
TORUS_FIXTURES = [
    (((1,), (2,)), True, True),
    (((1,), (-1,)), False, False),
    (((1, 0), (-1, 0), (0, 1)), False, False),
    (((1, 1), (1, -1)), True, True),
    (((2, -1), (-1, 2)), True, True),
]


@pytest.fixture
def state() -> SamplerState:
    return SamplerState(seed=20240917)


@pytest.fixture(autouse=True)
def _threads(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("ORBITHULL_THREADS", "2")
