# -*- coding: utf-8 -*-

# Copyright (c) mqncsim Development Team.
# Distributed under the terms of the Modified BSD License.

import itertools

import numpy as np

from .analysis import CHSH_FIDELITY_THRESHOLD, bell_transform, chsh_s, chsh_s_sampled, fidelity, werner_s
from .baseManager import QnetBaseApp, QnetBaseManager
from .exception import QnetError
from .quantum import partial_trace
from .util import pairLabel

__all__ = ["ChshManager", "RunChshApp", "crossSubjects"]


def crossSubjects(p, run):
    """(label, state) for every terminal pair that is not one of p's pairs"""
    paired = set(frozenset(pair.positions) for pair in p.pairs)
    subjects = []
    for i, j in itertools.combinations(range(len(p.terminals)), 2):
        if frozenset((i, j)) in paired:
            continue
        label = pairLabel(p.physical(p.terminals[i]), p.physical(p.terminals[j]))
        subjects.append((label, partial_trace(run.state, (i, j))))
    return sorted(subjects, key=lambda s: s[0])


## manager
class ChshManager(QnetBaseManager):
    """CHSH value of every distributed pair (or a fixture state), and optionally
    of the terminal pairs that should carry no correlation at all
    """

    kind = "chsh"

    def _subjects(self):
        exp = self.experiment
        if exp.fixture or not exp.cross_pairs:
            return self.pairSubjects(), []
        p, run = self.protocolRun()
        pairs = [(pair.label, run.pair_state(pair), pair.target, pair.bell_transform) for pair in p.pairs]
        return pairs, crossSubjects(p, run)

    def _chsh(self, record, label, rho):
        exp = self.experiment
        if exp.estimator == "exact":
            record.add_metric(f"S[{label}]", chsh_s(rho), "exact")
            return

        values, errors = [], []
        for seed in self.trialSeeds(exp.trials):
            S, err = chsh_s_sampled(rho, exp.shots, np.random.default_rng(seed))
            values.append(S)
            errors.append(err)
        # trials are independent: combine their standard errors
        stderr = float(np.sqrt(np.sum(np.square(errors))) / len(errors))
        record.add_metric(f"S[{label}]", float(np.mean(values)), "shot-sampled", stderr, shots=exp.shots, trials=exp.trials)

    def _run(self):
        exp = self.experiment
        record = self.newRecord()
        subjects, cross = self._subjects()
        if not subjects:
            raise QnetError("no pair to test: the protocol distributes no pairs.", protocol=exp.protocol)

        record.details["threshold_fidelity"] = CHSH_FIDELITY_THRESHOLD
        for label, state, target, transform in subjects:
            F = fidelity(state, target)
            record.add_metric(f"F[{label}]", F, "exact")
            record.add_metric(f"S_werner[{label}]", werner_s(max(F, 0.25)), "exact")
            self._chsh(record, label, bell_transform(state) if transform else state)

        if cross:
            record.details["cross_pairs"] = [label for label, _ in cross]
        for label, state in cross:
            self._chsh(record, label, state)
            self.log.info("cross pair %s: S = %s", label, record.metrics[f"S[{label}]"]["value"])
        return record


## application
class RunChshApp(QnetBaseApp):
    name = "mqncsim run-chsh"
    description = "Evaluate the CHSH value of distributed pairs or fixture states."
    managerClass = ChshManager
    experimentKind = "chsh"
