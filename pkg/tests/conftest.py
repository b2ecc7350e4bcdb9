"""Shared fixtures for the circuit and estimator test suites."""

import pytest

from catshor.revsim import Circuit, Simulator


@pytest.fixture
def fresh():
    """Factory for connected Circuit/Simulator pairs."""

    def make(note_handler=None):
        sim = Simulator(note_handler)
        circ = Circuit(sim)
        return circ, sim

    return make
