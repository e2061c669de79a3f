import hypothesis.strategies as st
import pytest
from hypothesis import settings

from photodevice.model import DeviceParams

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

FIG2A = dict(z=1.0, U=1.0, nu=100.0, V=1.0)


@st.composite
def device_params(draw, **fixed):
    values = dict(
        z=draw(st.floats(0.0, 1.0)),
        U=draw(st.floats(0.0, 2.5)),
        nu=draw(st.floats(0.0, 100.0)),
        V=draw(st.floats(0.0, 5.0)),
        mu=draw(st.floats(-0.5, 0.5)),
        Gamma=draw(st.floats(0.1, 3.0)),
    )
    values.update(fixed)
    return DeviceParams(**values)


@pytest.fixture
def fig2a():
    return DeviceParams(**FIG2A)


@pytest.fixture(scope="session")
def presets():
    from photodevice.sweep import PRESET_NAMES, run_preset

    return {name: run_preset(name, jobs=1) for name in PRESET_NAMES}
