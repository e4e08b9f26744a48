# -*- coding: utf-8 -*-

# Copyright (c) mqncsim Development Team.
# Distributed under the terms of the Modified BSD License.

from .baseManager import QnetBaseApp, QnetBaseManager
from .scaling import cluster_scaling

__all__ = ["ClusterScalingManager", "RunClusterScalingApp"]


## manager
class ClusterScalingManager(QnetBaseManager):
    """Prepares |G_n> for each chain length and sweeps the depolarizing rate"""

    kind = "scaling"

    def _run(self):
        exp = self.experiment
        record = self.newRecord()

        scaling = cluster_scaling(
            exp.chain_lengths,
            exp.epsilon_grid(),
            estimator=exp.estimator,
            shots=exp.shots,
            repeats=exp.trials,
            seed=exp.seed,
            noisy_measurement=self.noise.noisy_measurement,
            embedding=tuple(exp.embedding) or None,
            topology=self.topology(),
            transpile=exp.transpile_cz,
        )
        record.scaling = scaling
        for n in scaling.lengths:
            last = scaling.series(n)[-1]
            record.add_metric(f"F[G{n}]", last.F, scaling.estimator, stderr=last.F_stderr if scaling.estimator != "exact" else None, epsilon=last.epsilon)
            self.log.info("F(G_%s) = %.4f at epsilon %s", n, last.F, last.epsilon)
        return record


## application
class RunClusterScalingApp(QnetBaseApp):
    name = "mqncsim run-cluster-scaling"
    description = "Fidelity of n-qubit linear cluster states over the depolarizing rate."
    managerClass = ClusterScalingManager
    experimentKind = "scaling"
