# -*- coding: utf-8 -*-

# Copyright (c) mqncsim Development Team.
# Distributed under the terms of the Modified BSD License.

"""Entanglement-distribution protocols.

Every builder returns a ProtocolInstance whose circuit acts on local qubit
indices 0..width-1; `embedding[q]` is the physical device qubit hosting local
qubit q. Outcome patterns list measurement outcomes in circuit order.
"""

import enum
import logging
from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Tuple

import networkx as nx
import numpy as np
from networkx.algorithms import isomorphism

from .circuit import PAULI_MATRICES, Circuit, Gate, GateKind, MeasurementBasis
from .exception import EmbeddingError, OutcomeError, QnetError
from .graphstate import GraphState, adapted_basis, graph_from_edges, local_complement, measure_vertex
from .noise import instrument, run_density, run_trajectories
from .quantum import DensityMatrix, PauliString, PureState, apply_unitary, bell_state, g2_state, partial_trace, tensor_states
from .util import bitsToPattern, pairLabel, parsePattern

__all__ = [
    "CountsTable",
    "Correction",
    "EmbeddingReport",
    "Mode",
    "PairSpec",
    "ProtocolInstance",
    "ProtocolKind",
    "ProtocolRun",
    "build_linear_mbqc",
    "build_mqnc",
    "build_protocol",
    "build_swapping",
    "byproduct_correction",
    "classical_butterfly",
    "find_embedding",
    "interaction_graph",
    "oracle_state",
    "run_instance",
    "transpile_cz",
    "validate_embedding",
]

log = logging.getLogger(__name__)

TARGET_LABEL = "target"


class ProtocolKind(str, enum.Enum):
    SWAPPING = "swapping"
    LINEAR_MBQC = "linear-mbqc"
    MQNC_STEP1 = "mqnc-step1"
    MQNC_STEP2 = "mqnc-step2-onward"
    MQNC_FULL = "mqnc-full"


class Mode(str, enum.Enum):
    POST_SELECT = "post-select"
    FEED_FORWARD = "feed-forward"


@dataclass(frozen=True)
class PairSpec:
    """One distributed pair. `qubits` are local indices, `positions` their place
    among the instance's terminals, `physical` the device qubits.
    """

    label: str
    qubits: Tuple[int, int]
    positions: Tuple[int, int]
    physical: Tuple[int, int]
    target: PureState
    bell_transform: bool

    def toDict(self):
        return dict((("label", self.label), ("qubits", self.qubits), ("physical", self.physical), ("bell_transform", self.bell_transform)))


@dataclass(frozen=True)
class ProtocolInstance:
    kind: ProtocolKind
    embedding: Tuple[int, ...]
    roles: Tuple[str, ...]
    mode: Mode
    pattern: Tuple[int, ...]
    circuit: Circuit
    terminals: Tuple[int, ...]
    target: PureState
    pairs: Tuple[PairSpec, ...] = ()
    graph: Optional[GraphState] = field(default=None, compare=False)
    chain_length: Optional[int] = None

    def __post_init__(self):
        if len(set(self.embedding)) != len(self.embedding):
            raise EmbeddingError("embedding must map roles to distinct physical qubits.", embedding=self.embedding)
        if len(self.embedding) != self.circuit.width:
            raise EmbeddingError("embedding size does not match the protocol width.", embedding=self.embedding, width=self.circuit.width)
        parsePattern(self.pattern, length=len(self.circuit.measurements))

    @property
    def width(self):
        return self.circuit.width

    @property
    def pattern_text(self):
        return bitsToPattern(self.pattern)

    def physical(self, q):
        return self.embedding[q]

    def role_map(self):
        return dict(zip(self.roles, self.embedding))

    def with_circuit(self, circuit):
        return replace(self, circuit=circuit)

    def toDict(self):
        return dict(
            (
                ("kind", self.kind),
                ("chain_length", self.chain_length),
                ("embedding", self.role_map()),
                ("mode", self.mode),
                ("pattern", self.pattern_text if self.mode == Mode.POST_SELECT else None),
                ("circuit", str(self.circuit)),
                ("census", self.circuit.census()),
                ("pairs", self.pairs),
            )
        )


@dataclass
class CountsTable:
    counts: Dict[str, int]
    total: int = 0

    def __post_init__(self):
        if any(c < 0 for c in self.counts.values()):
            raise QnetError("counts must be non-negative.", counts=self.counts)
        total = sum(self.counts.values())
        if self.total and self.total != total:
            raise QnetError("counts do not sum to the total number of shots.", total=self.total, counted=total)
        self.total = total

    @classmethod
    def sample(cls, probabilities, shots, rng):
        """Multinomial sample of `shots` outcomes from a pattern -> probability map"""
        patterns = sorted(probabilities)
        p = np.clip(np.array([probabilities[k] for k in patterns], dtype=float), 0, None)
        drawn = rng.multinomial(int(shots), p / p.sum())
        return cls(dict((k, int(c)) for k, c in zip(patterns, drawn) if c))

    def probability(self, pattern):
        return self.counts.get(pattern, 0) / self.total if self.total else 0.0

    def marginal(self, indices):
        out = {}
        for pattern, count in self.counts.items():
            key = "".join(pattern[i] for i in indices)
            out[key] = out.get(key, 0) + count
        return CountsTable(dict(sorted(out.items())))


## embedding validation
@dataclass
class EmbeddingReport:
    topology: str
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def toDict(self):
        return dict((("topology", self.topology), ("ok", self.ok), ("violations", self.violations)))


def validate_embedding(t, p):
    """List every 2-qubit gate of p whose physical pair is not coupled on t"""
    report = EmbeddingReport(t.name)
    for q in p.embedding:
        if not 0 <= q < t.n_qubits:
            report.violations.append(dict((("qubit", q), ("reason", "not a device qubit"))))

    seen = set()
    for g in p.circuit.gates:
        if g.kind.arity != 2:
            continue
        pair = tuple(p.physical(q) for q in g.targets)
        if not t.coupled(*pair) and pairLabel(*pair) not in seen:
            seen.add(pairLabel(*pair))
            report.violations.append(dict((("gate", str(g)), ("pair", pairLabel(*pair)), ("reason", "not coupled"))))
    return report


def interaction_graph(circuit):
    """Local qubits joined wherever the circuit has a 2-qubit gate"""
    g = nx.Graph()
    g.add_nodes_from(range(circuit.width))
    g.add_edges_from(tuple(gate.targets) for gate in circuit.gates if gate.kind.arity == 2)
    return g


def find_embedding(t, p):
    """Witness that p fits t: a placement of p's local qubits that puts every
    2-qubit gate on a coupled pair, indexed by local qubit; None when p cannot be
    placed on t at all. Protocols are never moved onto the witness automatically.
    """
    matcher = isomorphism.GraphMatcher(t.graph(), interaction_graph(p.circuit))
    for mapping in matcher.subgraph_monomorphisms_iter():
        placement = dict((local, physical) for physical, local in mapping.items())
        log.debug("embedding of %s on %s: %s", p.kind.value, t.name, placement)
        return tuple(placement[q] for q in range(p.width))
    return None


def _enforce(p, topology):
    if topology is None:
        return p
    report = validate_embedding(topology, p)
    if not report.ok:
        raise EmbeddingError("embedding violates the device coupling map.", report=report, topology=topology.name, violations=report.violations)
    return p


def transpile_cz(circuit):
    """Compile CZ(a, b) into H(b) CX(a, b) H(b) for a CX-native device"""
    out = Circuit(circuit.width)
    for op in circuit.ops:
        if isinstance(op, Gate) and op.kind == GateKind.CZ:
            a, b = op.targets
            out.h(b).cx(a, b).h(b)
        else:
            out.append(op)
    return out


## builders
def _pattern(pattern, default, circuit):
    return parsePattern(default if pattern is None else pattern, length=len(circuit.measurements))


def _pairs(terminalPairs, terminals, embedding, target, bellTransform):
    pairs = []
    for a, b in terminalPairs:
        physical = (embedding[a], embedding[b])
        pairs.append(PairSpec(pairLabel(*physical), (a, b), (terminals.index(a), terminals.index(b)), physical, target, bellTransform))
    return tuple(pairs)


SWAPPING_EMBEDDING = (0, 5, 6, 11)


def build_swapping(embedding=SWAPPING_EMBEDDING, mode=Mode.POST_SELECT, pattern=None, topology=None):
    """Two Bell pairs (0,1) and (2,3), Bell measurement on (1,2); target |Phi+> on (0,3)"""
    embedding = tuple(int(q) for q in embedding)
    if len(embedding) != 4:
        raise EmbeddingError("entanglement swapping needs four qubits.", embedding=embedding)

    c = Circuit(4)
    c.h(0).cx(0, 1).h(2).cx(2, 3)
    c.cx(1, 2).h(1)
    c.measure(1).measure(2)

    terminals = (0, 3)
    p = ProtocolInstance(
        ProtocolKind.SWAPPING,
        embedding,
        ("a", "b1", "b2", "c"),
        Mode(mode),
        _pattern(pattern, "00", c),
        c,
        terminals,
        bell_state(),
        _pairs((terminals,), terminals, embedding, bell_state(), False),
    )
    return _enforce(p, topology)


LINEAR_EMBEDDING = (0, 5, 10, 15, 16)


def build_linear_mbqc(n=4, embedding=None, mode=Mode.POST_SELECT, pattern=None, topology=None):
    """Linear cluster |G_n> with X measurements on the interior; target |G_2> on the endpoints"""
    n = int(n)
    if n < 2:
        raise QnetError("a linear cluster needs at least two qubits.", chain_length=n)
    if embedding is None:
        if n > len(LINEAR_EMBEDDING):
            raise EmbeddingError("no default embedding for chains this long; give one explicitly.", chain_length=n)
        embedding = LINEAR_EMBEDDING[:n]
    embedding = tuple(int(q) for q in embedding)
    if len(embedding) != n:
        raise EmbeddingError("embedding length does not match the chain length.", embedding=embedding, chain_length=n)

    c = Circuit(n)
    for q in range(n):
        c.h(q)
    for q in range(n - 1):
        c.cz(q, q + 1)
    for q in range(1, n - 1):
        c.measure(q, MeasurementBasis.X)

    terminals = (0, n - 1)
    p = ProtocolInstance(
        ProtocolKind.LINEAR_MBQC,
        embedding,
        tuple(f"q{i}" for i in range(n)),
        Mode(mode),
        _pattern(pattern, "1" * (n - 2), c),
        c,
        terminals,
        g2_state(),
        _pairs((terminals,), terminals, embedding, g2_state(), True),
        graph_from_edges([(q, q + 1) for q in range(n - 1)], vertices=range(n)),
        n,
    )
    return _enforce(p, topology)


# six-qubit butterfly: sources s1 s2, bottleneck r1 r2, targets t1 t2
MQNC_ROLES = ("s1", "s2", "r1", "r2", "t1", "t2")
MQNC_EMBEDDING = (0, 10, 5, 6, 11, 1)
# CZ order; the second qubit of each edge is the CX target after transpilation
MQNC_EDGES = ((3, 2), (0, 2), (3, 4), (1, 2), (3, 5), (5, 0), (4, 1))

# fourteen-qubit layout: each node keeps one qubit and shares Bell pairs with its neighbours
MQNC_FULL_ROLES = ("s1", "s1~t2", "s2", "s2~t1", "r1", "r1~s2", "r1~r2", "r2", "r2~t1", "r2~t2", "t1", "t1~s2", "t2", "t2~s1")
MQNC_FULL_PAIRS = ((0, 4), (2, 5), (6, 7), (8, 10), (9, 12), (1, 13), (3, 11))
MQNC_FULL_STARS = ((0, 1), (2, 3), (4, 5), (4, 6), (7, 8), (7, 9), (10, 11), (12, 13))
MQNC_FULL_LINKS = (5, 6, 8, 9, 1, 13, 3, 11)
MQNC_FULL_BOTTLENECK = (4, 7)


def _mqncStep2(embedding, mode, pattern):
    embedding = tuple(int(q) for q in (MQNC_EMBEDDING if embedding is None else embedding))
    if len(embedding) != 6:
        raise EmbeddingError("the six-qubit network coding circuit needs six qubits.", embedding=embedding)

    c = Circuit(6)
    for q in range(6):
        c.h(q)
    for a, b in MQNC_EDGES:
        c.cz(a, b)
    c.measure(2, MeasurementBasis.X).measure(3, MeasurementBasis.X)

    terminals = (0, 4, 1, 5)
    target = tensor_states(g2_state(), g2_state())
    return ProtocolInstance(
        ProtocolKind.MQNC_STEP2,
        embedding,
        MQNC_ROLES,
        Mode(mode),
        _pattern(pattern, "11", c),
        c,
        terminals,
        target,
        _pairs(((0, 4), (1, 5)), terminals, embedding, g2_state(), True),
        graph_from_edges(MQNC_EDGES, vertices=range(6)),
    )


def _mqncFullPreparation():
    c = Circuit(14)
    for a, b in MQNC_FULL_PAIRS:
        c.h(a).cx(a, b).h(b)
    for a, b in MQNC_FULL_STARS:
        c.cz(a, b)
    return c, graph_from_edges(MQNC_FULL_PAIRS + MQNC_FULL_STARS, vertices=range(14))


def _mqncFullBases(graph):
    """Physical bases of the link and bottleneck measurements.

    Link qubits are measured as Y in the current graph frame one after another;
    both bottleneck qubits are measured as X in the frame reached after the links.
    """
    bases = []
    g = graph
    for v in MQNC_FULL_LINKS:
        basis = adapted_basis(g, v, MeasurementBasis.Y)
        bases.append((v, basis))
        g = measure_vertex(g, v, basis, 0)

    for v in MQNC_FULL_BOTTLENECK:
        bases.append((v, adapted_basis(g, v, MeasurementBasis.X)))
    return bases


def build_mqnc(stage="step2-onward", embedding=None, mode=Mode.POST_SELECT, pattern=None, topology=None):
    """Network coding over the butterfly. Stages: step1 (14-qubit graph after the
    intra-node CZs), step2-onward (six-qubit cluster, X on the bottleneck) and full
    (Bell pairs, intra-node CZs, link and bottleneck measurements).
    """
    stage = stage.replace("mqnc-", "")
    if stage == "step2-onward":
        return _enforce(_mqncStep2(embedding, mode, pattern), topology)
    if stage not in ("step1", "full"):
        raise QnetError("unknown network coding stage.", stage=stage, stages=("step1", "step2-onward", "full"))

    embedding = tuple(int(q) for q in (range(14) if embedding is None else embedding))
    if len(embedding) != 14:
        raise EmbeddingError("the fourteen-qubit network coding layout needs fourteen qubits.", embedding=embedding)

    c, graph = _mqncFullPreparation()

    if stage == "step1":
        terminals = tuple(range(14))
        p = ProtocolInstance(ProtocolKind.MQNC_STEP1, embedding, MQNC_FULL_ROLES, Mode(mode), (), c, terminals, graph.to_statevector(), (), graph)
        return _enforce(p, topology)

    for v, basis in _mqncFullBases(graph):
        c.measure(v, basis)

    terminals = (0, 10, 2, 12)
    p = ProtocolInstance(
        ProtocolKind.MQNC_FULL,
        embedding,
        MQNC_FULL_ROLES,
        Mode(mode),
        _pattern(pattern, "0" * len(c.measurements), c),
        c,
        terminals,
        tensor_states(g2_state(), g2_state()),
        _pairs(((0, 10), (2, 12)), terminals, embedding, g2_state(), True),
        graph,
    )
    return _enforce(p, topology)


def build_protocol(kind, chain_length=4, embedding=None, mode=Mode.POST_SELECT, pattern=None, topology=None):
    kind = ProtocolKind(kind)
    if kind == ProtocolKind.SWAPPING:
        return build_swapping(SWAPPING_EMBEDDING if embedding is None else embedding, mode, pattern, topology)
    if kind == ProtocolKind.LINEAR_MBQC:
        return build_linear_mbqc(chain_length, embedding, mode, pattern, topology)
    return build_mqnc(kind.value, embedding, mode, pattern, topology)


## byproducts
@dataclass(frozen=True)
class Correction:
    """Single-qubit unitaries on local qubits that map the conditional state onto the target"""

    unitaries: Dict[int, np.ndarray]

    def ops(self):
        return [(u, (q,)) for q, u in sorted(self.unitaries.items())]

    def apply(self, state):
        for u, qubits in self.ops():
            state = apply_unitary(state, u, qubits)
        return state

    def paulis(self, qubits):
        """The correction as a Pauli string over `qubits`, or None if it is not Pauli"""
        letters = []
        for q in qubits:
            u = self.unitaries.get(q, PAULI_MATRICES["I"])
            for letter, p in PAULI_MATRICES.items():
                if abs(abs(np.vdot(p, u)) - 2) < 1e-9:
                    letters.append(letter)
                    break
            else:
                return None
        return PauliString("".join(letters))


def _checkOutcomes(p, outcomes):
    try:
        return parsePattern(outcomes, length=len(p.circuit.measurements))
    except QnetError as e:
        raise OutcomeError("outcome record does not cover every measurement.", outcomes=outcomes, expected=len(p.circuit.measurements)) from e


def _swappingCorrection(bits):
    m1, m2 = bits
    unitaries = {}
    if m1:
        unitaries[0] = PAULI_MATRICES["Z"]
    if m2:
        unitaries[3] = PAULI_MATRICES["X"]
    return Correction(unitaries)


def oracle_state(p, outcomes):
    """Graph-state rewrite of p's measurements with the given outcome record"""
    g = p.graph
    for m, bit in zip(p.circuit.measurements, outcomes):
        g = measure_vertex(g, m.qubit, m.basis, bit)
    return g


def _normalizePairFrames(g, pairs):
    # every pair leaves with a Clifford frame on its first qubit so all pairs see the same noise projection
    for pair in pairs:
        s = pair.qubits[0]
        if g.has_pauli_frame(s):
            g = local_complement(g, s)
    return g


def byproduct_correction(p, outcomes):
    bits = _checkOutcomes(p, outcomes)
    if p.kind == ProtocolKind.SWAPPING:
        return _swappingCorrection(bits)
    if p.kind == ProtocolKind.MQNC_STEP1:
        return Correction({})

    g = oracle_state(p, bits)
    expected = sorted(tuple(sorted(pair.qubits)) for pair in p.pairs)
    if g.edges() != expected:
        raise QnetError("measurement rewrite did not end in the expected pairs.", edges=g.edges(), expected=expected)
    g = _normalizePairFrames(g, p.pairs)
    return Correction(dict((t, g.frame(t).conj().T) for t in p.terminals))


## execution
@dataclass
class ProtocolRun:
    """Terminal state of one protocol evaluation. `acceptance` is the
    post-selection probability (1 for feed-forward).
    """

    estimator: str
    state: Optional[DensityMatrix]
    acceptance: float
    branches: Dict[str, float] = field(default_factory=dict)
    counts: Optional[CountsTable] = None
    fidelity_samples: Dict[str, np.ndarray] = field(default_factory=dict)

    def pair_state(self, pair):
        return partial_trace(self.state, pair.positions)


def _exact(p, nc):
    _, table = run_density(nc)
    branches = dict((k, b.probability) for k, b in table.items())

    if p.mode == Mode.POST_SELECT:
        key = p.pattern_text
        if key not in table:
            raise OutcomeError("post-selected pattern has zero probability.", pattern=key)
        b = table[key]
        rho = byproduct_correction(p, p.pattern).apply(b.state)
        return ProtocolRun("exact", partial_trace(rho, p.terminals), b.probability, branches)

    total = None
    for key, b in table.items():
        rho = byproduct_correction(p, key).apply(b.state).scaled(b.probability)
        total = rho if total is None else total + rho
    return ProtocolRun("exact", partial_trace(total.normalized(), p.terminals), 1.0, branches)


def _sampled(p, nc, shots, seed, workers):
    cache = {}

    def correct(pattern):
        if pattern not in cache:
            cache[pattern] = byproduct_correction(p, pattern).ops()
        return cache[pattern]

    pairs = dict((pair.label, (pair.qubits, pair.target)) for pair in p.pairs)
    keep = p.terminals
    if not pairs:
        # whole-register targets are scored per shot instead of averaged
        pairs = dict(((TARGET_LABEL, (p.terminals, p.target)),))
        keep = None
    select = p.pattern_text if p.mode == Mode.POST_SELECT else None
    result = run_trajectories(nc, shots, seed, keep=keep, correct=correct, pairs=pairs, select=select, workers=workers)
    if result.accepted == 0:
        raise OutcomeError("no trajectory matched the post-selected pattern.", pattern=select, shots=shots)

    return ProtocolRun("shot-sampled", result.reduced, result.accepted / result.shots, {}, CountsTable(result.counts), result.fidelities)


def run_instance(p, model, estimator="exact", shots=8192, seed=0, workers=1):
    """Evaluate p under a noise model. exact uses density matrices and the branch
    table; shot-sampled averages trajectories.
    """
    nc = instrument(p.circuit, model)
    log.debug("evaluating %s (%s) with %s insertions", p.kind.value, estimator, len(nc.insertions))
    if estimator == "exact":
        return _exact(p, nc)
    if estimator == "shot-sampled":
        return _sampled(p, nc, shots, seed, workers)
    raise QnetError("unknown estimator.", estimator=estimator, estimators=("exact", "shot-sampled"))


## classical baseline
def classical_butterfly(x, y):
    """XOR network coding: the bottleneck carries x^y and each sink decodes with its side bit"""
    for bit in (x, y):
        if bit not in (0, 1):
            raise QnetError("butterfly inputs must be bits.", x=x, y=y)
    bottleneck = x ^ y
    return bottleneck ^ y, bottleneck ^ x
