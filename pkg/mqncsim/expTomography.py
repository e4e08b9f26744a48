# -*- coding: utf-8 -*-

# Copyright (c) mqncsim Development Team.
# Distributed under the terms of the Modified BSD License.

import numpy as np

from .analysis import fidelity, sample_tomography_counts, tomography, tomography_probabilities, trace_distance
from .baseManager import QnetBaseApp, QnetBaseManager
from .exception import QnetError
from .util import standardError

__all__ = ["RunTomographyApp", "TomographyManager"]


## manager
class TomographyManager(QnetBaseManager):
    """Reconstructs pair states from exact or sampled Pauli-setting data"""

    kind = "tomography"

    def _run(self):
        exp = self.experiment
        record = self.newRecord()
        subjects = self.pairSubjects()
        if not subjects:
            raise QnetError("nothing to reconstruct: the protocol distributes no pairs.", protocol=exp.protocol)

        estimates = {}
        for label, state, target, _ in subjects:
            if exp.estimator == "exact":
                est = tomography(tomography_probabilities(state))
                record.add_metric(f"F[{label}]", fidelity(est.rho, target), est.method)
                record.add_metric(f"trace_distance[{label}]", trace_distance(est.rho, state), est.method)
                estimates[label] = est
                continue

            Fs, dists = [], []
            for seed in self.trialSeeds(exp.trials):
                est = tomography(sample_tomography_counts(state, exp.shots, np.random.default_rng(seed)))
                Fs.append(fidelity(est.rho, target))
                dists.append(trace_distance(est.rho, state))
            record.add_metric(f"F[{label}]", float(np.mean(Fs)), est.method, standardError(Fs), shots=exp.shots, trials=exp.trials)
            record.add_metric(f"trace_distance[{label}]", float(np.mean(dists)), est.method, standardError(dists), shots=exp.shots, trials=exp.trials)
            estimates[label] = est

        record.details["estimates"] = estimates
        return record


## application
class RunTomographyApp(QnetBaseApp):
    name = "mqncsim run-tomography"
    description = "Reconstruct distributed pairs (or a fixture state) by Pauli tomography."
    managerClass = TomographyManager
    experimentKind = "tomography"
