# -*- coding: utf-8 -*-

# Copyright (c) mqncsim Development Team.
# Distributed under the terms of the Modified BSD License.

"""Gate and circuit descriptions.

Qubit 0 is the least-significant bit of an amplitude index. Two-qubit gate
matrices are written in the basis |x_a x_b> of their targets (a, b), with the
first target as the more significant bit, so that CX(a, b) has control a.
"""

import enum
from dataclasses import dataclass, field
from typing import List, Tuple, Union

import numpy as np

from .exception import QnetError

__all__ = ["GATE_MATRICES", "Circuit", "Gate", "GateKind", "Measurement", "MeasurementBasis", "PAULI_MATRICES"]

_SQ2 = 1 / np.sqrt(2)

PAULI_MATRICES = dict(
    (
        ("I", np.eye(2, dtype=complex)),
        ("X", np.array([[0, 1], [1, 0]], dtype=complex)),
        ("Y", np.array([[0, -1j], [1j, 0]], dtype=complex)),
        ("Z", np.array([[1, 0], [0, -1]], dtype=complex)),
    )
)


class GateKind(str, enum.Enum):
    H = "H"
    X = "X"
    Y = "Y"
    Z = "Z"
    S = "S"
    SDG = "SDG"
    CX = "CX"
    CZ = "CZ"
    SWAP = "SWAP"

    @property
    def arity(self):
        return 2 if self in (GateKind.CX, GateKind.CZ, GateKind.SWAP) else 1


GATE_MATRICES = dict(
    (
        (GateKind.H, np.array([[1, 1], [1, -1]], dtype=complex) * _SQ2),
        (GateKind.X, PAULI_MATRICES["X"]),
        (GateKind.Y, PAULI_MATRICES["Y"]),
        (GateKind.Z, PAULI_MATRICES["Z"]),
        (GateKind.S, np.diag([1, 1j]).astype(complex)),
        (GateKind.SDG, np.diag([1, -1j]).astype(complex)),
        (GateKind.CX, np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)),
        (GateKind.CZ, np.diag([1, 1, 1, -1]).astype(complex)),
        (GateKind.SWAP, np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)),
    )
)


class MeasurementBasis(str, enum.Enum):
    X = "X"
    Y = "Y"
    Z = "Z"

    @property
    def change(self):
        """Gates rotating this basis onto the computational one, in application order"""
        return dict(((MeasurementBasis.X, (GateKind.H,)), (MeasurementBasis.Y, (GateKind.SDG, GateKind.H)), (MeasurementBasis.Z, ())))[self]


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    targets: Tuple[int, ...]

    def __post_init__(self):
        kind = GateKind(self.kind)
        targets = tuple(int(t) for t in self.targets)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "targets", targets)

        if len(targets) != kind.arity:
            raise QnetError("gate target count does not match its arity.", gate=kind.value, targets=targets)
        if any(t < 0 for t in targets):
            raise QnetError("gate targets must be non-negative qubit indices.", gate=kind.value, targets=targets)
        if len(set(targets)) != len(targets):
            raise QnetError("two-qubit gate targets must be distinct.", gate=kind.value, targets=targets)

    @property
    def matrix(self):
        return GATE_MATRICES[self.kind]

    def __str__(self):
        return f"{self.kind.value}({','.join(map(str, self.targets))})"


@dataclass(frozen=True)
class Measurement:
    qubit: int
    basis: MeasurementBasis = MeasurementBasis.Z

    def __post_init__(self):
        object.__setattr__(self, "basis", MeasurementBasis(self.basis))
        if self.qubit < 0:
            raise QnetError("measured qubit must be a non-negative index.", qubit=self.qubit)

    def __str__(self):
        return f"M{self.basis.value}({self.qubit})"


Operation = Union[Gate, Measurement]


@dataclass
class Circuit:
    """Ordered program of gates and single-qubit measurements on `width` qubits.
    Outcome records list measurement outcomes in program order.
    """

    width: int
    ops: List[Operation] = field(default_factory=list)

    def __post_init__(self):
        if self.width < 1:
            raise QnetError("a circuit needs at least one qubit.", width=self.width)
        for op in self.ops:
            self._check(op)

    def _check(self, op):
        qubits = op.targets if isinstance(op, Gate) else (op.qubit,)
        if any(q >= self.width for q in qubits):
            raise QnetError("operation acts outside of the circuit register.", op=str(op), width=self.width)

    def append(self, op):
        self._check(op)
        self.ops.append(op)
        return self

    def gate(self, kind, *targets):
        return self.append(Gate(kind, targets))

    def h(self, q):
        return self.gate(GateKind.H, q)

    def cx(self, control, target):
        return self.gate(GateKind.CX, control, target)

    def cz(self, a, b):
        return self.gate(GateKind.CZ, a, b)

    def measure(self, q, basis=MeasurementBasis.Z):
        return self.append(Measurement(q, basis))

    @property
    def gates(self):
        return [op for op in self.ops if isinstance(op, Gate)]

    @property
    def measurements(self):
        return [op for op in self.ops if isinstance(op, Measurement)]

    @property
    def measured_qubits(self):
        return tuple(m.qubit for m in self.measurements)

    def census(self):
        gates = self.gates
        return dict(
            (
                ("one_qubit", sum(1 for g in gates if g.kind.arity == 1)),
                ("two_qubit", sum(1 for g in gates if g.kind.arity == 2)),
                ("measurements", len(self.measurements)),
            )
        )

    def without_measurements(self):
        return Circuit(self.width, [op for op in self.ops if isinstance(op, Gate)])

    def __str__(self):
        return " ".join(str(op) for op in self.ops)
