# -*- coding: utf-8 -*-

# Copyright (c) mqncsim Development Team.
# Distributed under the terms of the Modified BSD License.

import os

import numpy as np
from traitlets import Bool, CaselessStrEnum, Float, Int, List, Unicode
from traitlets.config import Configurable

from .exception import ConfigError
from .noise import NoiseModel
from .protocols import Mode, ProtocolKind
from .quantum import WidthLimits
from .topology import PRESETS

__all__ = ["ExperimentConfig", "NoiseConfig", "SimulatorConfig"]


def _traitValues(obj):
    return dict((name, getattr(obj, name)) for name in sorted(obj.trait_names(config=True)))


class SimulatorConfig(Configurable):
    """Register width limits of the dense simulator"""

    max_pure_qubits = Int(20, help="Widest register simulated as a state vector.").tag(config=True)
    max_density_qubits = Int(10, help="Widest register simulated as a density matrix.").tag(config=True)

    def validate(self):
        if self.max_pure_qubits < 1 or self.max_density_qubits < 1:
            raise ConfigError("width limits must be positive.", max_pure_qubits=self.max_pure_qubits, max_density_qubits=self.max_density_qubits)
        return self

    def limits(self):
        return WidthLimits(pure=self.max_pure_qubits, density=self.max_density_qubits)

    def to_dict(self):
        return _traitValues(self)


class NoiseConfig(Configurable):
    epsilon = Float(0.0, help="Depolarizing rate after every gate, per involved qubit.").tag(config=True)
    noisy_measurement = Bool(False, help="Also depolarize each qubit right before it is measured.").tag(config=True)

    def validate(self):
        if not 0 <= self.epsilon <= 1:
            raise ConfigError("NoiseConfig.epsilon must lie in [0, 1].", epsilon=self.epsilon)
        return self

    def to_model(self, epsilon=None, noisy_measurement=None):
        return NoiseModel(
            self.epsilon if epsilon is None else epsilon,
            self.noisy_measurement if noisy_measurement is None else noisy_measurement,
        )

    def to_dict(self):
        return _traitValues(self)


class ExperimentConfig(Configurable):
    """Declares what an experiment runs and where its results go"""

    kind = CaselessStrEnum(["protocol", "sweep", "tomography", "chsh", "scaling"], default_value="protocol", help="Experiment kind.").tag(config=True)
    protocol = CaselessStrEnum([k.value for k in ProtocolKind], default_value=ProtocolKind.MQNC_STEP2.value, help="Protocol to build.").tag(config=True)
    chain_length = Int(4, help="Number of qubits of the linear cluster.").tag(config=True)
    chain_lengths = List(Int(), default_value=[2, 3, 4, 5], help="Cluster sizes prepared by cluster-scaling runs.").tag(config=True)
    embedding = List(Int(), help="Physical qubit per protocol role; empty uses the protocol default.").tag(config=True)
    topology = Unicode("tokyo", help="Name of a topology preset.").tag(config=True)
    topology_file = Unicode("", help="Topology file; overrides the preset when given.").tag(config=True)
    mode = CaselessStrEnum([m.value for m in Mode], default_value=Mode.POST_SELECT.value, help="Post-selection or feed-forward corrections.").tag(config=True)
    pattern = Unicode("", help="Post-selected outcome pattern; empty uses the protocol default.").tag(config=True)
    transpile_cz = Bool(True, help="Compile CZ into H CX H before noise is inserted.").tag(config=True)
    estimator = CaselessStrEnum(["exact", "shot-sampled"], default_value="exact", help="Density-matrix evaluation or trajectory sampling.").tag(config=True)
    shots = Int(8192, help="Shots per trial (per tomography setting / CHSH term).").tag(config=True)
    trials = Int(5, help="Independent trials of a shot-sampled protocol or tomography run.").tag(config=True)
    repeats = Int(10, help="Trajectory batches per sweep point.").tag(config=True)
    seed = Int(0, help="Root seed of every random stream.").tag(config=True)
    grid = List(Float(), help="Explicit error-rate grid; empty uses grid_start/grid_stop/grid_points.").tag(config=True)
    grid_start = Float(0.0).tag(config=True)
    grid_stop = Float(0.05).tag(config=True)
    grid_points = Int(21).tag(config=True)
    fixture = Unicode("", help="State for chsh/tomography runs: phi+, g2, mixed or werner:<F>; empty uses the protocol.").tag(config=True)
    sensitivity = Bool(True, help="Sweeps also report epsilon_crit with the noisy-measurement flag flipped.").tag(config=True)
    cross_pairs = Bool(False, help="CHSH runs also score terminals that share no pair; these should give S near 0.").tag(config=True)
    workers = Int(1, help="Threads used for trajectories and sweep points.").tag(config=True)
    stamp_time = Bool(False, help="Record a timestamp in the provenance (breaks byte-identical reruns).").tag(config=True)
    output_json = Unicode("", help="Path of the JSON result file.").tag(config=True)
    output_csv = Unicode("", help="Path of the CSV result file.").tag(config=True)
    output_hdf5 = Unicode("", help="Path of the HDF5 result file.").tag(config=True)

    def epsilon_grid(self):
        if self.grid:
            return list(self.grid)
        return [float(e) for e in np.linspace(self.grid_start, self.grid_stop, self.grid_points)]

    def validate(self):
        if self.shots < 1:
            raise ConfigError("ExperimentConfig.shots must be at least 1.", shots=self.shots)
        if self.trials < 1:
            raise ConfigError("ExperimentConfig.trials must be at least 1.", trials=self.trials)
        if self.repeats < 1:
            raise ConfigError("ExperimentConfig.repeats must be at least 1.", repeats=self.repeats)
        if self.workers < 1:
            raise ConfigError("ExperimentConfig.workers must be at least 1.", workers=self.workers)
        if self.protocol == ProtocolKind.LINEAR_MBQC.value and self.chain_length < 2:
            raise ConfigError("ExperimentConfig.chain_length must be at least 2.", chain_length=self.chain_length)
        if self.pattern and any(c not in "01" for c in self.pattern):
            raise ConfigError("ExperimentConfig.pattern may only contain '0' and '1'.", pattern=self.pattern)
        if self.topology_file:
            if not os.path.exists(self.topology_file):
                raise ConfigError("ExperimentConfig.topology_file does not exist.", topology_file=self.topology_file)
        elif self.topology not in PRESETS:
            raise ConfigError("ExperimentConfig.topology names no known preset.", topology=self.topology, presets=sorted(PRESETS))

        if self.kind == "scaling" and (not self.chain_lengths or min(self.chain_lengths) < 2):
            raise ConfigError("ExperimentConfig.chain_lengths must list sizes of at least 2.", chain_lengths=self.chain_lengths)

        if self.kind in ("sweep", "scaling"):
            grid = self.epsilon_grid()
            if not grid:
                raise ConfigError("ExperimentConfig.grid must not be empty for sweeps.")
            if any(b <= a for a, b in zip(grid, grid[1:])) or grid[0] < 0 or grid[-1] > 1:
                raise ConfigError("ExperimentConfig.grid must be strictly increasing within [0, 1].", grid=grid)
            if not self.grid and self.grid_points < 1:
                raise ConfigError("ExperimentConfig.grid_points must be at least 1.", grid_points=self.grid_points)

        if self.fixture and self.fixture not in ("phi+", "g2", "mixed") and not self.fixture.startswith("werner:"):
            raise ConfigError("ExperimentConfig.fixture is not a known state.", fixture=self.fixture)
        if self.fixture.startswith("werner:"):
            try:
                F = float(self.fixture.split(":", 1)[1])
            except ValueError:
                raise ConfigError("ExperimentConfig.fixture werner:<F> needs a number.", fixture=self.fixture)
            if not 0.25 <= F <= 1:
                raise ConfigError("ExperimentConfig.fixture Werner fidelity must lie in [1/4, 1].", fixture=self.fixture)
        return self

    def to_dict(self):
        return _traitValues(self)
