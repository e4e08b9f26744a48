# -*- coding: utf-8 -*-

# Copyright (c) mqncsim Development Team.
# Distributed under the terms of the Modified BSD License.

"""Single-qubit depolarizing noise, exact density evolution and Monte Carlo
trajectories.

The depolarizing channel of rate eps is used in its Pauli-mixture form
(1 - 3eps/4) rho + eps/4 (X rho X + Y rho Y + Z rho Z), which both the exact and
the trajectory evaluators share.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .circuit import PAULI_MATRICES, Circuit, Gate, Measurement
from .exception import QnetError, WidthError
from .quantum import (
    MIN_BRANCH_PROBABILITY,
    DensityMatrix,
    apply_gate,
    apply_unitary,
    init_state,
    measure,
    project,
    reduced_density,
    width_limit,
    with_current_limits,
)
from .util import bitsToPattern

__all__ = ["Branch", "NoiseModel", "NoisyCircuit", "TrajectoryResult", "depolarize", "instrument", "run_density", "run_trajectories", "shotGenerator"]

log = logging.getLogger(__name__)

TWO_QUBIT_RULE = "independent error on each involved qubit"

# shots are summed in fixed-size chunks so aggregates do not depend on the worker count
_CHUNK = 256


def _checkEpsilon(epsilon):
    epsilon = float(epsilon)
    if not 0 <= epsilon <= 1:
        raise QnetError("depolarizing rate must lie in [0, 1].", epsilon=epsilon)
    return epsilon


## noise model
@dataclass(frozen=True)
class NoiseModel:
    epsilon: float = 0.0
    noisy_measurement: bool = False

    def __post_init__(self):
        object.__setattr__(self, "epsilon", _checkEpsilon(self.epsilon))

    @property
    def two_qubit_rule(self):
        return TWO_QUBIT_RULE

    def pauli_weights(self):
        e = self.epsilon
        return dict((("I", 1 - 3 * e / 4), ("X", e / 4), ("Y", e / 4), ("Z", e / 4)))

    def sample_pauli(self, rng, epsilon=None):
        e = self.epsilon if epsilon is None else epsilon
        r = rng.random()
        if r < 1 - 3 * e / 4:
            return "I"
        return "XYZ"[min(int((r - (1 - 3 * e / 4)) / (e / 4)), 2)]

    def toDict(self):
        return dict((("epsilon", self.epsilon), ("noisy_measurement", self.noisy_measurement), ("two_qubit_rule", TWO_QUBIT_RULE)))


@dataclass
class NoisyCircuit:
    """A circuit plus depolarizing insertions. An insertion (position, qubit, eps)
    acts before base.ops[position]; position len(base.ops) is the very end.
    """

    base: Circuit
    insertions: List[Tuple[int, int, float]] = field(default_factory=list)

    def __post_init__(self):
        for position, qubit, epsilon in self.insertions:
            if not 0 <= position <= len(self.base.ops):
                raise QnetError("noise insertion references a step outside of the circuit.", position=position, steps=len(self.base.ops))
            if not 0 <= qubit < self.base.width:
                raise QnetError("noise insertion acts outside of the circuit register.", qubit=qubit, width=self.base.width)
            _checkEpsilon(epsilon)

    @property
    def width(self):
        return self.base.width

    def insertions_at(self):
        """Insertions grouped by position"""
        grouped = dict((p, []) for p in range(len(self.base.ops) + 1))
        for position, qubit, epsilon in self.insertions:
            if epsilon > 0:
                grouped[position].append((qubit, epsilon))
        return grouped

    def census(self):
        census = self.base.census()
        census["insertions"] = len(self.insertions)
        return census


def instrument(circuit, model):
    """One insertion after every 1-qubit gate, one per involved qubit after every
    2-qubit gate, and with noisy_measurement one before each measurement.
    """
    insertions = []
    for i, op in enumerate(circuit.ops):
        if isinstance(op, Gate):
            for q in op.targets:
                insertions.append((i + 1, q, model.epsilon))
        elif isinstance(op, Measurement) and model.noisy_measurement:
            insertions.append((i, op.qubit, model.epsilon))
    return NoisyCircuit(circuit, insertions)


## channel
def depolarize(rho, q, epsilon):
    epsilon = _checkEpsilon(epsilon)
    if epsilon == 0:
        return rho
    out = rho.matrix * (1 - 3 * epsilon / 4)
    for letter in "XYZ":
        out = out + apply_unitary(rho, PAULI_MATRICES[letter], (q,)).matrix * (epsilon / 4)
    return DensityMatrix(rho.n, out)


## exact evaluation
@dataclass(frozen=True)
class Branch:
    """One measurement record: its probability and the normalized conditional state"""

    probability: float
    state: DensityMatrix


def run_density(nc, initial=None):
    """Exact mixed-state evolution.

    Returns the non-selective output state and the branch table, a dict mapping
    each outcome pattern (measurements in program order) to its Branch.
    Branches of probability below 1e-12 are dropped.
    """
    n = nc.width
    if n > width_limit("density"):
        raise WidthError("circuit is too wide for density-matrix evaluation.", n=n, limit=width_limit("density"))

    grouped = nc.insertions_at()
    branches = dict((("", initial if initial is not None else init_state(n, density=True)),))

    for position, op in enumerate(nc.base.ops):
        for qubit, epsilon in grouped[position]:
            branches = dict((k, depolarize(rho, qubit, epsilon)) for k, rho in branches.items())

        if isinstance(op, Gate):
            branches = dict((k, apply_gate(rho, op)) for k, rho in branches.items())
            continue

        split = {}
        for pattern, rho in branches.items():
            for outcome in (0, 1):
                part = project(rho, op.qubit, op.basis, outcome)
                if part.trace >= MIN_BRANCH_PROBABILITY:
                    split[pattern + str(outcome)] = part
        branches = split

    for qubit, epsilon in grouped[len(nc.base.ops)]:
        branches = dict((k, depolarize(rho, qubit, epsilon)) for k, rho in branches.items())

    total = None
    table = {}
    for pattern in sorted(branches):
        rho = branches[pattern]
        total = rho if total is None else total + rho
        table[pattern] = Branch(rho.trace, rho.normalized())

    return total, table


## trajectories
def shotGenerator(seed, shot):
    """Counter-based stream for one shot: independent of evaluation order"""
    key = ((int(seed) & 0xFFFFFFFFFFFFFFFF) << 64) | int(shot)
    return np.random.Generator(np.random.Philox(key=key))


@dataclass
class TrajectoryResult:
    shots: int
    counts: Dict[str, int]
    accepted: int = 0
    reduced: Optional[DensityMatrix] = None
    fidelities: Dict[str, np.ndarray] = field(default_factory=dict)

    def toDict(self):
        return dict(
            (
                ("shots", self.shots),
                ("accepted", self.accepted),
                ("counts", dict(sorted(self.counts.items()))),
                ("fidelity_mean", dict((k, float(np.mean(v)) if len(v) else None) for k, v in self.fidelities.items())),
            )
        )


def _runShot(nc, grouped, seed, shot, model):
    rng = shotGenerator(seed, shot)
    state = init_state(nc.width)
    bits = []
    for position, op in enumerate(nc.base.ops):
        for qubit, epsilon in grouped[position]:
            letter = model.sample_pauli(rng, epsilon)
            if letter != "I":
                state = apply_unitary(state, PAULI_MATRICES[letter], (qubit,))
        if isinstance(op, Gate):
            state = apply_gate(state, op)
        else:
            outcome, state, _ = measure(state, op.qubit, op.basis, rng=rng)
            bits.append(outcome)
    for qubit, epsilon in grouped[len(nc.base.ops)]:
        letter = model.sample_pauli(rng, epsilon)
        if letter != "I":
            state = apply_unitary(state, PAULI_MATRICES[letter], (qubit,))
    return bitsToPattern(bits), state


def _runChunk(nc, grouped, seed, shots, keep, correct, pairs, select):
    model = NoiseModel()
    counts = {}
    accepted = 0
    acc = None
    fids = dict((label, []) for label in pairs)

    for shot in shots:
        pattern, state = _runShot(nc, grouped, seed, shot, model)
        counts[pattern] = counts.get(pattern, 0) + 1
        if select is not None and pattern != select:
            continue
        accepted += 1

        if correct is not None:
            for matrix, qubits in correct(pattern):
                state = apply_unitary(state, matrix, qubits)

        if keep:
            reduced = reduced_density(state, keep).matrix
            acc = reduced if acc is None else acc + reduced

        for label, (qubits, target) in pairs.items():
            if tuple(qubits) == tuple(range(state.n)):
                fids[label].append(float(abs(np.vdot(target.amplitudes, state.amplitudes)) ** 2))
                continue
            rho = reduced_density(state, qubits).matrix
            fids[label].append(float(np.vdot(target.amplitudes, rho @ target.amplitudes).real))

    return counts, accepted, acc, fids


def run_trajectories(nc, shots, seed, keep=None, correct=None, pairs=None, select=None, workers=1):
    """Sample `shots` pure-state trajectories of a noisy circuit.

    Each insertion draws a Pauli with weights (1 - 3eps/4, eps/4, eps/4, eps/4)
    from the shot's own counter-based stream, so results depend only on
    (seed, shot index). Optional arguments:

    - keep: qubits whose reduced state is averaged over accepted shots
    - correct: callable pattern -> [(unitary, qubits)] applied before reduction
    - pairs: label -> (qubits, target PureState) for per-shot fidelity samples
    - select: keep only shots with this outcome pattern (post-selection)
    """
    shots = int(shots)
    if shots < 1:
        raise QnetError("trajectory sampling needs at least one shot.", shots=shots)
    if nc.width > width_limit("pure"):
        raise WidthError("circuit is too wide for state-vector trajectories.", n=nc.width, limit=width_limit("pure"))

    keep = tuple(keep) if keep else ()
    pairs = pairs or {}
    grouped = nc.insertions_at()
    chunks = [range(start, min(start + _CHUNK, shots)) for start in range(0, shots, _CHUNK)]

    def work(chunk):
        return _runChunk(nc, grouped, seed, chunk, keep, correct, pairs, select)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(with_current_limits(work), chunks))
    else:
        results = [work(chunk) for chunk in chunks]

    counts = {}
    accepted = 0
    acc = None
    fids = dict((label, []) for label in pairs)
    for chunkCounts, chunkAccepted, chunkAcc, chunkFids in results:
        for pattern, count in chunkCounts.items():
            counts[pattern] = counts.get(pattern, 0) + count
        accepted += chunkAccepted
        if chunkAcc is not None:
            acc = chunkAcc if acc is None else acc + chunkAcc
        for label, values in chunkFids.items():
            fids[label].extend(values)

    if select is not None and accepted == 0:
        log.warning("no trajectory matched the post-selection pattern %s", select)

    reduced = DensityMatrix(len(keep), acc / accepted) if acc is not None else None
    return TrajectoryResult(shots, dict(sorted(counts.items())), accepted, reduced, dict((k, np.asarray(v)) for k, v in fids.items()))
