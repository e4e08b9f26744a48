# -*- coding: utf-8 -*-

# Copyright (c) mqncsim Development Team.
# Distributed under the terms of the Modified BSD License.

"""Fidelity of freshly prepared linear cluster states as the chain grows."""

import logging
from dataclasses import dataclass
from typing import List

import numpy as np

from .analysis import fidelity
from .exception import QnetError
from .graphstate import graph_from_edges
from .noise import NoiseModel, instrument, run_density, run_trajectories
from .protocols import build_linear_mbqc, transpile_cz
from .util import standardError

__all__ = ["SCALING_CSV_COLUMNS", "ScalingPoint", "ScalingResult", "cluster_scaling", "linear_cluster"]

log = logging.getLogger(__name__)

SCALING_CSV_COLUMNS = ("n", "epsilon", "F", "F_stderr", "seed")
CLUSTER_LABEL = "cluster"


@dataclass(frozen=True)
class ScalingPoint:
    n: int
    epsilon: float
    F: float
    F_stderr: float = 0.0


@dataclass
class ScalingResult:
    points: List[ScalingPoint]
    estimator: str = "exact"
    seed: int = 0

    @property
    def lengths(self):
        return sorted(set(p.n for p in self.points))

    def series(self, n):
        return sorted((p for p in self.points if p.n == n), key=lambda p: p.epsilon)

    def toDict(self):
        return dict((("estimator", self.estimator), ("seed", self.seed), ("points", self.points)))


def linear_cluster(n, embedding=None, topology=None, transpile=True):
    """(preparation circuit, |G_n>) of an n-qubit linear cluster, with no measurements"""
    p = build_linear_mbqc(n, embedding=embedding, topology=topology)
    circuit = p.circuit.without_measurements()
    if transpile:
        circuit = transpile_cz(circuit)
    return circuit, graph_from_edges([(q, q + 1) for q in range(n - 1)], vertices=range(n)).to_statevector()


def _subSeed(seed, n, index, repeat):
    return int(np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, n, index, repeat]).generate_state(1, np.uint64)[0])


def cluster_scaling(lengths, grid, estimator="exact", shots=8192, repeats=5, seed=0, noisy_measurement=False, embedding=None, topology=None, transpile=True):
    """F(rho, |G_n>) for every chain length and error rate.

    `embedding` lists physical qubits along the longest chain; shorter chains
    use its prefix. shot-sampled averages per-shot fidelities over `repeats`
    batches of `shots` trajectories.
    """
    lengths = [int(n) for n in lengths]
    if not lengths or min(lengths) < 2:
        raise QnetError("cluster scaling needs chain lengths of at least two.", lengths=lengths)
    if estimator not in ("exact", "shot-sampled"):
        raise QnetError("unknown estimator.", estimator=estimator)
    grid = [float(e) for e in grid]
    if not grid:
        raise QnetError("cluster scaling needs a non-empty grid.")

    points = []
    for n in lengths:
        circuit, target = linear_cluster(n, None if embedding is None else tuple(embedding)[:n], topology, transpile)
        log.debug("cluster of %s qubits: %s", n, circuit.census())
        for index, epsilon in enumerate(grid):
            nc = instrument(circuit, NoiseModel(epsilon, noisy_measurement))
            if estimator == "exact":
                rho, _ = run_density(nc)
                points.append(ScalingPoint(n, epsilon, fidelity(rho, target)))
                continue

            means = []
            for r in range(repeats):
                result = run_trajectories(nc, shots, _subSeed(seed, n, index, r), pairs=dict(((CLUSTER_LABEL, (tuple(range(n)), target)),)))
                means.append(float(np.mean(result.fidelities[CLUSTER_LABEL])))
            points.append(ScalingPoint(n, epsilon, float(np.mean(means)), standardError(means)))
    return ScalingResult(points, estimator, seed)
