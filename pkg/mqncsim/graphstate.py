# -*- coding: utf-8 -*-

# Copyright (c) mqncsim Development Team.
# Distributed under the terms of the Modified BSD License.

"""Graph states with a local Clifford frame.

A GraphState stands for the physical state (prod_v C_v)|G>, where |G> is the
graph state of `graph` and C_v a single-qubit Clifford unitary stored per
vertex. Pauli measurements are rewritten on the graph with the standard Z / Y /
X rules; every outcome-dependent byproduct lands in the frame.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Tuple

import networkx as nx
import numpy as np
import scipy.linalg

from .circuit import GATE_MATRICES, PAULI_MATRICES, GateKind, MeasurementBasis
from .exception import OutcomeError, QnetError
from .quantum import PauliString, PureState, apply_unitary, init_state

__all__ = ["GraphState", "StabilizerTableau", "adapted_basis", "graph_from_edges", "local_complement", "measure_vertex"]

log = logging.getLogger(__name__)

_S = GATE_MATRICES[GateKind.S]
_SDG = GATE_MATRICES[GateKind.SDG]
_Z = PAULI_MATRICES["Z"]

# exp(-i pi/4 X) and exp(+i pi/4 Z)
_LC_CENTER = scipy.linalg.expm(-0.25j * np.pi * PAULI_MATRICES["X"])
_LC_NEIGHBOR = scipy.linalg.expm(0.25j * np.pi * PAULI_MATRICES["Z"])


## frame helpers
def _conjugatePauli(c, letter, dagger_first=True):
    """Return (sign, letter) with C^dag P C = sign * P' (or C P C^dag when dagger_first is False)"""
    p = PAULI_MATRICES[letter]
    m = c.conj().T @ p @ c if dagger_first else c @ p @ c.conj().T
    for other in "XYZ":
        for sign in (1, -1):
            if np.allclose(m, sign * PAULI_MATRICES[other], atol=1e-9):
                return sign, other
    raise QnetError("frame entry is not a single-qubit Clifford.", pauli=letter)


@dataclass(frozen=True)
class GraphState:
    graph: nx.Graph
    frames: Dict[int, np.ndarray]

    @property
    def vertices(self):
        return tuple(sorted(self.graph.nodes))

    def neighbors(self, v):
        return tuple(sorted(self.graph.neighbors(v)))

    def edges(self):
        return sorted(tuple(sorted(e)) for e in self.graph.edges)

    def adjacency_matrix(self):
        return nx.to_numpy_array(self.graph, nodelist=self.vertices, dtype=int)

    def frame(self, v):
        return self.frames[v]

    def copy(self):
        return GraphState(self.graph.copy(), dict((v, c.copy()) for v, c in self.frames.items()))

    def has_pauli_frame(self, v):
        """True when the frame on v maps X and Z to themselves up to sign"""
        return all(_conjugatePauli(self.frames[v], letter)[1] == letter for letter in "XZ")

    def effective_pauli(self, v, basis):
        """(sign, letter) of the graph-frame Pauli that physical `basis` on v measures"""
        return _conjugatePauli(self.frames[v], MeasurementBasis(basis).value)

    def to_statevector(self):
        """Dense state; vertex vertices[i] becomes qubit i"""
        vertices = self.vertices
        index = dict((v, i) for i, v in enumerate(vertices))
        state = init_state(len(vertices), fill="all-plus")
        for a, b in self.edges():
            state = apply_unitary(state, GATE_MATRICES[GateKind.CZ], (index[a], index[b]))
        for v in vertices:
            state = apply_unitary(state, self.frames[v], (index[v],))
        return state

    def tableau(self):
        """Stabilizer generators C K_v C^dag of the physical state, in vertex order"""
        vertices = self.vertices
        index = dict((v, i) for i, v in enumerate(vertices))
        rows = []
        for v in vertices:
            letters = ["I"] * len(vertices)
            letters[index[v]] = "X"
            for b in self.neighbors(v):
                letters[index[b]] = "Z"

            phase = 1
            for q, letter in enumerate(letters):
                if letter != "I":
                    sign, letters[q] = _conjugatePauli(self.frames[vertices[q]], letter, dagger_first=False)
                    phase *= sign
            rows.append(PauliString("".join(letters), phase))
        return StabilizerTableau(tuple(rows))


@dataclass(frozen=True)
class StabilizerTableau:
    rows: Tuple[PauliString, ...]

    @property
    def n(self):
        return len(self.rows)

    def _symplectic(self):
        m = np.zeros((self.n, 2 * self.n), dtype=np.uint8)
        for i, row in enumerate(self.rows):
            for q, letter in enumerate(row.letters):
                m[i, q] = letter in "XY"
                m[i, self.n + q] = letter in "ZY"
        return m

    def validate(self):
        for i, a in enumerate(self.rows):
            for b in self.rows[i + 1 :]:
                if not a.commutes(b):
                    raise QnetError("stabilizer generators do not commute.", left=str(a), right=str(b))

        # rank over GF(2)
        m = self._symplectic()
        rank = 0
        for col in range(m.shape[1]):
            pivots = np.nonzero(m[rank:, col])[0]
            if pivots.size == 0:
                continue
            p = rank + pivots[0]
            m[[rank, p]] = m[[p, rank]]
            for r in range(m.shape[0]):
                if r != rank and m[r, col]:
                    m[r] ^= m[rank]
            rank += 1
            if rank == m.shape[0]:
                break
        if rank != self.n:
            raise QnetError("stabilizer generators are not independent.", rank=rank, n=self.n)
        return self

    def stabilizes(self, state, tol=1e-9):
        return all(abs(np.vdot(state.amplitudes, row.apply(state).amplitudes) - 1) <= tol for row in self.rows)


## construction
def graph_from_edges(edges, vertices=None):
    """Graph state CZ_E|+>^V with identity frames. `vertices` adds isolated vertices."""
    graph = nx.Graph()
    if vertices is not None:
        graph.add_nodes_from(int(v) for v in vertices)

    for a, b in edges:
        a, b = int(a), int(b)
        if a == b:
            raise QnetError("graph states have no self-loops.", vertex=a)
        if vertices is not None and not (graph.has_node(a) and graph.has_node(b)):
            raise QnetError("edge references a vertex outside of the vertex set.", edge=(a, b))
        graph.add_edge(a, b)

    return GraphState(graph, dict((v, np.eye(2, dtype=complex)) for v in graph.nodes))


## rewrite rules
def _checkVertex(g, v):
    if not g.graph.has_node(v):
        raise QnetError("vertex is not part of the graph state.", vertex=v, vertices=g.vertices)


def local_complement(g, v):
    """Complement the neighbourhood of v; frames absorb the local Clifford so the physical state is unchanged"""
    _checkVertex(g, v)
    out = g.copy()
    nbrs = g.neighbors(v)
    for i, a in enumerate(nbrs):
        for b in nbrs[i + 1 :]:
            if out.graph.has_edge(a, b):
                out.graph.remove_edge(a, b)
            else:
                out.graph.add_edge(a, b)

    out.frames[v] = out.frames[v] @ _LC_CENTER
    for b in nbrs:
        out.frames[b] = out.frames[b] @ _LC_NEIGHBOR
    return out


def _measureZ(g, v, outcome):
    out = g.copy()
    if outcome:
        for b in g.neighbors(v):
            out.frames[b] = out.frames[b] @ _Z
    out.graph.remove_node(v)
    del out.frames[v]
    return out


def _measureY(g, v, outcome):
    nbrs = g.neighbors(v)
    out = g.copy()
    for i, a in enumerate(nbrs):
        for b in nbrs[i + 1 :]:
            if out.graph.has_edge(a, b):
                out.graph.remove_edge(a, b)
            else:
                out.graph.add_edge(a, b)

    byproduct = _SDG if outcome else _S
    for b in nbrs:
        out.frames[b] = out.frames[b] @ byproduct
    out.graph.remove_node(v)
    del out.frames[v]
    return out


def measure_vertex(g, v, basis, outcome):
    """Measure vertex v in the physical Pauli `basis` with the given outcome and
    remove it. Raises OutcomeError when the outcome has zero probability.
    """
    _checkVertex(g, v)
    outcome = int(outcome)
    if outcome not in (0, 1):
        raise QnetError("measurement outcome must be 0 or 1.", outcome=outcome)

    sign, letter = g.effective_pauli(v, basis)
    effective = outcome ^ (sign == -1)

    if letter == "Z":
        return _measureZ(g, v, effective)
    if letter == "Y":
        return _measureY(g, v, effective)

    nbrs = g.neighbors(v)
    if not nbrs:
        # an isolated vertex is a |+> up to its frame
        if effective:
            raise OutcomeError("outcome has zero probability on an isolated vertex.", vertex=v, basis=MeasurementBasis(basis).value, outcome=outcome)
        out = g.copy()
        out.graph.remove_node(v)
        del out.frames[v]
        return out

    # X on v becomes Y after complementing about its lowest neighbour
    rotated = local_complement(g, nbrs[0])
    log.debug("X measurement of vertex %s via local complementation about %s", v, nbrs[0])
    return measure_vertex(rotated, v, basis, outcome)


def adapted_basis(g, v, effective):
    """Physical basis that measures the graph-frame Pauli `effective` on v, up to sign.

    Only the Clifford class of the frame matters, so the answer does not depend
    on earlier outcomes.
    """
    _checkVertex(g, v)
    effective = MeasurementBasis(effective).value
    for basis in MeasurementBasis:
        if g.effective_pauli(v, basis)[1] == effective:
            return basis
    raise QnetError("no Pauli basis realizes the requested effective measurement.", vertex=v, effective=effective)
