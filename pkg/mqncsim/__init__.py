# -*- coding: utf-8 -*-

# Copyright (c) mqncsim Development Team.
# Distributed under the terms of the Modified BSD License.

from ._version import __version__

from .analysis import (
    CHSH_FIDELITY_THRESHOLD,
    chsh_s,
    concurrence,
    correlation_matrix,
    fidelity,
    tomography,
    werner_s,
    werner_state,
)
from .circuit import Circuit, Gate, GateKind, Measurement, MeasurementBasis
from .exception import ConfigError, EmbeddingError, OutcomeError, QnetError, WidthError
from .graphstate import GraphState, graph_from_edges, measure_vertex
from .noise import NoiseModel, NoisyCircuit, depolarize, instrument, run_density, run_trajectories
from .protocols import (
    Mode,
    ProtocolInstance,
    build_linear_mbqc,
    build_mqnc,
    build_swapping,
    byproduct_correction,
    classical_butterfly,
    validate_embedding,
)
from .quantum import DensityMatrix, PauliString, PureState, apply_gate, expectation, init_state, measure, partial_trace
from .sweep import SweepResult, epsilon_crit, epsilon_sweep
from .topology import DeviceTopology, PRESETS
