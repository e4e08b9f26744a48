# -*- coding: utf-8 -*-

# Copyright (c) mqncsim Development Team.
# Distributed under the terms of the Modified BSD License.

import os
import traceback

import numpy as np
import simplejson
from traitlets import Unicode
from traitlets.config import Application

from ._version import __version__
from .analysis import werner_state
from .config import ExperimentConfig, NoiseConfig, SimulatorConfig
from .exception import ConfigError, ExperimentFailure, QnetError
from .protocols import build_protocol, run_instance, transpile_cz
from .quantum import DensityMatrix, bell_state, g2_state, width_limits
from .record import ResultRecord, emit
from .topology import get_topology
from .util import jsonize

__all__ = ["QnetBaseApp", "QnetBaseManager", "fixtureState"]

EXIT_FAILURE = 1
EXIT_UNEXPECTED = 2


def fixtureState(name):
    """(state, target, needs Bell transform) of a named 2-qubit fixture"""
    if name == "phi+":
        return bell_state().density(), bell_state(), False
    if name == "g2":
        return g2_state().density(), g2_state(), True
    if name == "mixed":
        return DensityMatrix.maximally_mixed(2), bell_state(), False
    if name.startswith("werner:"):
        return werner_state(float(name.split(":", 1)[1])), g2_state(), True
    raise ConfigError("ExperimentConfig.fixture is not a known state.", fixture=name)


## manager
class QnetBaseManager:
    """Base class for running one kind of experiment"""

    kind = None

    def __init__(self, log, experiment, noise, simulator):
        self.log = log
        self.experiment = experiment
        self.noise = noise
        self.simulator = simulator

    def configEcho(self):
        return dict(
            (
                ("ExperimentConfig", self.experiment.to_dict()),
                ("NoiseConfig", self.noise.to_dict()),
                ("SimulatorConfig", self.simulator.to_dict()),
            )
        )

    def newRecord(self):
        return ResultRecord(self.kind, self.configEcho(), self.experiment.seed)

    def topology(self):
        return get_topology(self.experiment.topology, self.experiment.topology_file or None)

    def protocol(self, enforce=True):
        exp = self.experiment
        p = build_protocol(
            exp.protocol,
            chain_length=exp.chain_length,
            embedding=tuple(exp.embedding) or None,
            mode=exp.mode,
            pattern=exp.pattern or None,
            topology=self.topology() if enforce else None,
        )
        if exp.transpile_cz:
            p = p.with_circuit(transpile_cz(p.circuit))
        return p

    def pairSubjects(self):
        """(label, state, target, needs Bell transform) for the fixture or every protocol pair"""
        exp = self.experiment
        if exp.fixture:
            state, target, transform = fixtureState(exp.fixture)
            return [(exp.fixture, state, target, transform)]

        p, run = self.protocolRun()
        return [(pair.label, run.pair_state(pair), pair.target, pair.bell_transform) for pair in p.pairs]

    def protocolRun(self):
        exp = self.experiment
        p = self.protocol()
        return p, run_instance(p, self.noise.to_model(), exp.estimator, shots=exp.shots, seed=exp.seed, workers=exp.workers)

    def trialSeeds(self, count):
        return [int(s) for s in np.random.SeedSequence(self.experiment.seed & 0xFFFFFFFFFFFFFFFF).generate_state(count, np.uint64)]

    def _run(self):
        raise NotImplementedError

    def _emit(self, record):
        exp = self.experiment
        outputs = (("json", exp.output_json), ("csv", exp.output_csv), ("hdf5", exp.output_hdf5))
        return [emit(record, fmt, path) for fmt, path in outputs if path]

    def run(self):
        def _handleErr(code, msg, **debugVars):
            extra = dict((("kind", self.kind),), **debugVars)

            if isinstance(msg, dict):
                # config echo rides along with the debug vars
                msg["debugVars"] = {**msg.get("debugVars", {}), **extra, "config": self.configEcho()}
                msg = simplejson.loads(simplejson.dumps(jsonize(msg), ignore_nan=True))
                text = simplejson.dumps(msg, ignore_nan=True, sort_keys=True)
            else:
                text = "\n".join((msg, ", ".join(f"{key}: {val}" for key, val in extra.items())))
                msg = dict((("message", msg), ("debugVars", extra)))

            self.log.error(text)
            raise ExperimentFailure(code, msg)

        self.log.info("starting %s experiment (seed %s)", self.kind, self.experiment.seed)
        try:
            self.experiment.validate()
            self.noise.validate()
            self.simulator.validate()

            with width_limits(self.simulator.limits()):
                record = self._run()
            if self.experiment.stamp_time:
                record.stamp()
            written = self._emit(record)
        except QnetError as e:
            msg = e.args[0]
            msg["traceback"] = traceback.format_exc()
            msg["type"] = type(e).__name__
            _handleErr(EXIT_FAILURE, msg)
        except Exception as e:
            msg = f"Unexpected error while running the experiment.\n" f"Error: {traceback.format_exc()}"
            _handleErr(EXIT_UNEXPECTED, msg, error=repr(e), type=type(e).__name__)

        for path in written:
            self.log.info("wrote %s", path)
        self.log.info("finished %s experiment", self.kind)
        return record


## application
class QnetBaseApp(Application):
    """Base class for experiment subcommands"""

    version = __version__
    managerClass = None
    experimentKind = None

    config_file = Unicode("", help="JSON config file with ExperimentConfig/NoiseConfig/SimulatorConfig sections.").tag(config=True)

    aliases = dict(
        (
            ("config", "QnetBaseApp.config_file"),
            ("log-level", "Application.log_level"),
            ("seed", "ExperimentConfig.seed"),
            ("epsilon", "NoiseConfig.epsilon"),
            ("protocol", "ExperimentConfig.protocol"),
            ("mode", "ExperimentConfig.mode"),
            ("pattern", "ExperimentConfig.pattern"),
            ("estimator", "ExperimentConfig.estimator"),
            ("shots", "ExperimentConfig.shots"),
            ("topology", "ExperimentConfig.topology"),
            ("topology-file", "ExperimentConfig.topology_file"),
            ("fixture", "ExperimentConfig.fixture"),
            ("output-json", "ExperimentConfig.output_json"),
            ("output-csv", "ExperimentConfig.output_csv"),
            ("output-hdf5", "ExperimentConfig.output_hdf5"),
        )
    )

    flags = dict(
        (
            ("noisy-measurement", ({"NoiseConfig": {"noisy_measurement": True}}, "Depolarize qubits before measurement.")),
            ("feed-forward", ({"ExperimentConfig": {"mode": "feed-forward"}}, "Apply byproduct corrections for every outcome.")),
        )
    )

    classes = [ExperimentConfig, NoiseConfig, SimulatorConfig]

    def initialize(self, argv=None):
        self.parse_command_line(argv)
        if self.config_file:
            self.loadConfigFile(self.config_file)

    def loadConfigFile(self, path):
        if not os.path.exists(path):
            self.log.error(simplejson.dumps(dict((("message", "config file does not exist."), ("debugVars", dict((("config_file", path),))))), sort_keys=True))
            self.exit(EXIT_FAILURE)
        self.load_config_file(os.path.basename(path), path=os.path.dirname(os.path.abspath(path)))
        # command line wins over the file
        self.update_config(self.cli_config)

    def configurables(self):
        experiment = ExperimentConfig(parent=self)
        if self.experimentKind is not None:
            experiment.kind = self.experimentKind
        return experiment, NoiseConfig(parent=self), SimulatorConfig(parent=self)

    def start(self):
        experiment, noise, simulator = self.configurables()
        manager = self.managerClass(log=self.log, experiment=experiment, noise=noise, simulator=simulator)
        try:
            record = manager.run()
        except ExperimentFailure as e:
            self.exit(e.code)
        return record
