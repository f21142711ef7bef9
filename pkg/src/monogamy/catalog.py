"""Catalog of named three-qubit states used as CLI inputs and test anchors."""

from __future__ import annotations

import numpy as np

from .statekit import PureState

NAMED_STATE_NAMES = ("ghz", "w", "w-paper", "product", "bell-pair-embedded")


def named_state(name: str) -> PureState:
    """Build a catalog state by name.

    - ``ghz``: (|000> + |111>) / sqrt(2), all pairwise entanglement zero;
    - ``w``: (|100> + |010> + |001>) / sqrt(3), the symmetric W state;
    - ``w-paper``: sqrt(1/2)|100> + (|010> + |001>) / 2, the W-type state
      that maximizes the pairwise EF sum (qubit 0 maximally mixed);
    - ``product``: |000>, every measure zero;
    - ``bell-pair-embedded``: a Bell pair on qubits (0, 1) with qubit 2 in
      |0>, so all entanglement sits in one pair.
    """
    amps = np.zeros(8, dtype=complex)
    if name == "ghz":
        amps[0b000] = amps[0b111] = 1.0 / np.sqrt(2.0)
    elif name == "w":
        amps[0b100] = amps[0b010] = amps[0b001] = 1.0 / np.sqrt(3.0)
    elif name == "w-paper":
        amps[0b100] = np.sqrt(0.5)
        amps[0b010] = amps[0b001] = 0.5
    elif name == "product":
        amps[0b000] = 1.0
    elif name == "bell-pair-embedded":
        amps[0b000] = amps[0b110] = 1.0 / np.sqrt(2.0)
    else:
        raise ValueError(f"unknown named state {name!r}; choose from {NAMED_STATE_NAMES}")
    return PureState(3, amps)
