# -*- coding: utf-8 -*-

# Copyright (c) mqncsim Development Team.
# Distributed under the terms of the Modified BSD License.

from .baseManager import QnetBaseApp, QnetBaseManager
from .sweep import epsilon_sweep

__all__ = ["RunSweepApp", "SweepManager"]


## manager
class SweepManager(QnetBaseManager):
    """Sweeps the depolarizing rate and extracts the critical rate per pair"""

    kind = "sweep"

    def _sweep(self, p, noisy_measurement):
        exp = self.experiment
        return epsilon_sweep(
            p,
            exp.epsilon_grid(),
            estimator=exp.estimator,
            shots=exp.shots,
            repeats=exp.repeats,
            seed=exp.seed,
            noisy_measurement=noisy_measurement,
            workers=exp.workers,
        )

    def _run(self):
        p = self.protocol()
        record = self.newRecord()
        record.details["protocol"] = p

        sweep = self._sweep(p, self.noise.noisy_measurement)
        record.sweep = sweep
        record.add_metric("epsilon_crit", sweep.epsilon_crit, sweep.estimator)
        for pair, report in sorted(sweep.crit.items()):
            record.add_metric(f"epsilon_crit[{pair}]", report.value, sweep.estimator, interval=report.interval, reason=report.reason, smoothed=report.smoothed)

        if self.experiment.sensitivity:
            flipped = self._sweep(p, not self.noise.noisy_measurement)
            record.details["sensitivity"] = dict(
                (
                    ("noisy_measurement", not self.noise.noisy_measurement),
                    ("epsilon_crit", flipped.epsilon_crit),
                    ("crit", flipped.crit),
                )
            )
            self.log.info("epsilon_crit = %s (noisy_measurement flipped: %s)", sweep.epsilon_crit, flipped.epsilon_crit)
        else:
            self.log.info("epsilon_crit = %s", sweep.epsilon_crit)
        return record


## application
class RunSweepApp(QnetBaseApp):
    name = "mqncsim run-sweep"
    description = "Sweep the depolarizing rate and report F, S and epsilon_crit."
    managerClass = SweepManager
    experimentKind = "sweep"
