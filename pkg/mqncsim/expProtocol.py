# -*- coding: utf-8 -*-

# Copyright (c) mqncsim Development Team.
# Distributed under the terms of the Modified BSD License.

import numpy as np

from .analysis import bell_transform, correlation_matrix, fidelity, pair_metrics
from .baseManager import QnetBaseApp, QnetBaseManager
from .protocols import TARGET_LABEL, run_instance
from .quantum import partial_trace
from .util import standardError

__all__ = ["ProtocolManager", "RunProtocolApp", "terminalCorrelations"]


def terminalCorrelations(p, state, shots=None, rng=None):
    """<Z_i Z_j> between the terminals after each pair's Bell transform, in
    ascending physical order
    """
    for pair in p.pairs:
        if pair.bell_transform:
            state = bell_transform(state, pair.positions)
    order = sorted(range(len(p.terminals)), key=lambda i: p.physical(p.terminals[i]))
    labels = [str(p.physical(p.terminals[i])) for i in order]
    return correlation_matrix(partial_trace(state, order), labels=labels, shots=shots, rng=rng)


## manager
class ProtocolManager(QnetBaseManager):
    """Builds a protocol, evaluates it under the configured noise and scores its pairs"""

    kind = "protocol"

    def _run(self):
        exp = self.experiment
        p = self.protocol()
        model = self.noise.to_model()
        record = self.newRecord()
        record.details["protocol"] = p
        record.details["noise"] = model

        if exp.estimator == "exact":
            runs = [run_instance(p, model, "exact")]
        else:
            runs = [run_instance(p, model, "shot-sampled", shots=exp.shots, seed=s, workers=exp.workers) for s in self.trialSeeds(exp.trials)]
        sampled = exp.estimator != "exact"

        def add(name, values):
            values = np.asarray(values, dtype=float)
            record.add_metric(name, float(values.mean()), exp.estimator, standardError(values) if sampled else None)

        add("acceptance", [run.acceptance for run in runs])

        if runs[0].state is not None:
            add("F_target", [fidelity(run.state, p.target) for run in runs])
        else:
            add("F_target", [np.mean(run.fidelity_samples[TARGET_LABEL]) for run in runs])

        for pair in p.pairs:
            metrics = [pair_metrics(run.pair_state(pair), pair.target, pair.bell_transform) for run in runs]
            for key in ("F", "S", "C", "werner_deviation"):
                add(f"{key}[{pair.label}]", [m[key] for m in metrics])
            if sampled:
                samples = np.concatenate([run.fidelity_samples[pair.label] for run in runs])
                record.add_metric(f"F_shots[{pair.label}]", float(samples.mean()), exp.estimator, standardError(samples), shots=int(samples.size))

        if len(p.terminals) == 4 and len(p.pairs) == 2:
            rng = np.random.default_rng(self.trialSeeds(1)[0])
            state = runs[0].state
            record.details["correlation"] = terminalCorrelations(p, state, shots=exp.shots if sampled else None, rng=rng)

        if not sampled:
            record.details["branches"] = runs[0].branches
        else:
            record.details["counts"] = [run.counts.counts for run in runs]

        self.log.info("F_target = %.6f", record.metrics["F_target"]["value"])
        return record


## application
class RunProtocolApp(QnetBaseApp):
    name = "mqncsim run-protocol"
    description = "Build and evaluate one entanglement-distribution protocol."
    managerClass = ProtocolManager
    experimentKind = "protocol"
