import math
import warnings

import numpy as np
import pytest

from chiralwg.model import Drive, Emitter, EmitterChain

ACCEPTANCE_LINES = []

PI = math.pi


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def antisym_chain(delta, k1_rate, k2_rate, phi, gamma=0.0):
    return EmitterChain([
        Emitter.from_rates(delta, gamma, k1_rate, k2_rate, 0.0),
        Emitter.from_rates(-delta, gamma, k1_rate, k2_rate, phi),
    ])


def single_chain(delta=0.0, gamma=0.0, k1_rate=1.2, k2_rate=0.8):
    return EmitterChain([Emitter.from_rates(delta, gamma, k1_rate, k2_rate)])


def quiet_chain(atoms):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return EmitterChain(atoms)


def forward(p):
    return Drive.forward_power(p)
