# -*- coding: utf-8 -*-

# Copyright (c) mqncsim Development Team.
# Distributed under the terms of the Modified BSD License.

"""Device coupling maps.

A topology file is plain text: a `name <label>` header, an optional
`qubits <count>` line, then one coupled pair `i j` per line. Blank lines and
lines starting with `#` are ignored.
"""

import os
from dataclasses import dataclass
from typing import FrozenSet, Tuple

import networkx as nx

from .exception import ConfigError, QnetError

__all__ = ["DeviceTopology", "PRESETS", "get_topology", "load_topology_file"]


@dataclass(frozen=True)
class DeviceTopology:
    name: str
    n_qubits: int
    edges: FrozenSet[Tuple[int, int]]

    def __post_init__(self):
        edges = set()
        for a, b in self.edges:
            a, b = int(a), int(b)
            if a == b:
                raise QnetError("coupling maps have no self-loops.", topology=self.name, qubit=a)
            if not (0 <= a < self.n_qubits and 0 <= b < self.n_qubits):
                raise QnetError("coupling edge references a qubit outside of the device.", topology=self.name, edge=(a, b), n_qubits=self.n_qubits)
            edges.add((min(a, b), max(a, b)))
        object.__setattr__(self, "edges", frozenset(edges))

    def coupled(self, a, b):
        return (min(a, b), max(a, b)) in self.edges

    def graph(self):
        g = nx.Graph(name=self.name)
        g.add_nodes_from(range(self.n_qubits))
        g.add_edges_from(self.edges)
        return g

    def is_path(self, qubits):
        return all(self.coupled(a, b) for a, b in zip(qubits, qubits[1:]))

    def summary(self):
        return dict((("name", self.name), ("qubits", self.n_qubits), ("edges", len(self.edges))))

    def toDict(self):
        return dict((("name", self.name), ("qubits", self.n_qubits), ("edges", sorted(self.edges))))


# subgraph of the 20-qubit Tokyo device covering the qubits used by the shipped protocols
_TOKYO_EDGES = (
    (0, 1),
    (0, 5),
    (1, 6),
    (5, 6),
    (5, 10),
    (5, 11),
    (6, 10),
    (6, 11),
    (10, 11),
    (10, 15),
    (11, 16),
    (15, 16),
)

# the 20-qubit Poughkeepsie device: four rows of five qubits joined by short rungs
_POUGHKEEPSIE_EDGES = (
    (0, 1),
    (1, 2),
    (2, 3),
    (3, 4),
    (0, 5),
    (4, 9),
    (5, 6),
    (6, 7),
    (7, 8),
    (8, 9),
    (5, 10),
    (7, 12),
    (9, 14),
    (10, 11),
    (11, 12),
    (12, 13),
    (13, 14),
    (10, 15),
    (14, 19),
    (15, 16),
    (16, 17),
    (17, 18),
    (18, 19),
)

# Step-0 pair edges plus the intra-node star edges of the 14-qubit encoding
_BUTTERFLY_EDGES = (
    (0, 4),
    (2, 5),
    (6, 7),
    (8, 10),
    (9, 12),
    (1, 13),
    (3, 11),
    (0, 1),
    (2, 3),
    (4, 5),
    (4, 6),
    (7, 8),
    (7, 9),
    (10, 11),
    (12, 13),
)

PRESETS = dict(
    (
        ("tokyo", DeviceTopology("tokyo", 20, frozenset(_TOKYO_EDGES))),
        ("poughkeepsie", DeviceTopology("poughkeepsie", 20, frozenset(_POUGHKEEPSIE_EDGES))),
        ("butterfly-14", DeviceTopology("butterfly-14", 14, frozenset(_BUTTERFLY_EDGES))),
    )
)


def load_topology_file(path):
    if not os.path.exists(path):
        raise ConfigError("topology file does not exist.", topology_file=path)

    name = None
    nQubits = None
    edges = []
    with open(path) as f:
        for lineno, raw in enumerate(f, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue

            key, _, rest = line.partition(" ")
            if key == "name":
                name = rest.strip()
                continue
            if key == "qubits":
                nQubits = int(rest)
                continue

            parts = line.split()
            if len(parts) != 2 or not all(p.isdigit() for p in parts):
                raise ConfigError("malformed topology line; expected 'i j'.", topology_file=path, line=lineno, text=line)
            edges.append((int(parts[0]), int(parts[1])))

    if not name:
        raise ConfigError("topology file is missing its 'name' header.", topology_file=path)
    if nQubits is None:
        nQubits = max((max(e) for e in edges), default=-1) + 1

    return DeviceTopology(name, nQubits, frozenset(edges))


def get_topology(name=None, topology_file=None):
    if topology_file:
        return load_topology_file(topology_file)
    if name not in PRESETS:
        raise ConfigError("unknown topology preset.", topology=name, presets=sorted(PRESETS))
    return PRESETS[name]
