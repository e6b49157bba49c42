import pytest

from gridnc import engine
from gridnc.topology import build_grid

_CACHE = {}


@pytest.fixture(scope="session")
def coeff_run():
    """Shared coeff-mode runs; strict, so a finished run proves zero violations."""

    def get(d, K, slots=None, trace=False):
        slots = slots if slots is not None else K + 2 * d + 10
        key = (d, K, slots, trace)
        if key not in _CACHE:
            state = engine.init(build_grid(d, K), trace=trace)
            summary = engine.run(state, slots)
            _CACHE[key] = (state, summary)
        return _CACHE[key]

    return get
