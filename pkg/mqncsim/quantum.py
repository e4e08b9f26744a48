# -*- coding: utf-8 -*-

# Copyright (c) mqncsim Development Team.
# Distributed under the terms of the Modified BSD License.

"""Dense simulation of pure states and density matrices.

Qubit q lives on tensor axis n-1-q of the (2,)*n reshaped amplitude vector, i.e.
qubit 0 is the least-significant bit of an amplitude index.
"""

import contextlib
import contextvars
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .circuit import GATE_MATRICES, PAULI_MATRICES, Gate, GateKind, MeasurementBasis
from .exception import OutcomeError, QnetError, WidthError

__all__ = [
    "DensityMatrix",
    "PauliString",
    "PureState",
    "WidthLimits",
    "apply_gate",
    "apply_unitary",
    "bell_state",
    "expectation",
    "g2_state",
    "init_state",
    "measure",
    "partial_trace",
    "reduced_density",
    "tensor_states",
    "width_limit",
    "width_limits",
    "with_current_limits",
]

TOL = 1e-10
EIG_TOL = 1e-8
MIN_BRANCH_PROBABILITY = 1e-12


@dataclass(frozen=True)
class WidthLimits:
    """Widest registers simulated as state vectors and as density matrices"""

    pure: int = 20
    density: int = 10


_ACTIVE_LIMITS = contextvars.ContextVar("mqncsim_width_limits", default=WidthLimits())


## width limits
@contextlib.contextmanager
def width_limits(limits):
    """Run the enclosed block under `limits`; the previous limits come back on exit"""
    token = _ACTIVE_LIMITS.set(limits)
    try:
        yield limits
    finally:
        _ACTIVE_LIMITS.reset(token)


def width_limit(kind):
    return getattr(_ACTIVE_LIMITS.get(), kind)


def with_current_limits(fn):
    """Wrap fn so it runs under the caller's limits, e.g. inside a worker thread"""
    limits = _ACTIVE_LIMITS.get()

    def wrapped(*args, **kwargs):
        with width_limits(limits):
            return fn(*args, **kwargs)

    return wrapped


def _checkWidth(n, kind):
    if n < 1:
        raise WidthError("a register needs at least one qubit.", n=n)
    limit = width_limit(kind)
    if n > limit:
        raise WidthError(f"register width exceeds the configured {kind} limit.", n=n, limit=limit)


## states
@dataclass(frozen=True)
class PureState:
    n: int
    amplitudes: np.ndarray

    @classmethod
    def from_amplitudes(cls, amplitudes, normalize=False):
        amplitudes = np.asarray(amplitudes, dtype=complex).ravel()
        n = int(np.log2(amplitudes.size))
        if amplitudes.size != 2**n:
            raise QnetError("amplitude vector length must be a power of two.", size=amplitudes.size)
        _checkWidth(n, "pure")
        if normalize:
            amplitudes = amplitudes / np.linalg.norm(amplitudes)
        state = cls(n, amplitudes)
        state.validate()
        return state

    def validate(self):
        norm = float(np.vdot(self.amplitudes, self.amplitudes).real)
        if abs(norm - 1) > TOL:
            raise QnetError("pure state is not normalized.", norm=norm)
        return self

    def tensor(self):
        return self.amplitudes.reshape((2,) * self.n)

    def density(self):
        _checkWidth(self.n, "density")
        return DensityMatrix(self.n, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    n: int
    matrix: np.ndarray

    @classmethod
    def from_matrix(cls, matrix):
        matrix = np.asarray(matrix, dtype=complex)
        n = int(np.log2(matrix.shape[0]))
        if matrix.shape != (2**n, 2**n):
            raise QnetError("density matrix must be square with a power-of-two dimension.", shape=matrix.shape)
        _checkWidth(n, "density")
        rho = cls(n, matrix)
        rho.validate()
        return rho

    @classmethod
    def from_pure(cls, state):
        return state.density()

    @classmethod
    def maximally_mixed(cls, n):
        _checkWidth(n, "density")
        return cls(n, np.eye(2**n, dtype=complex) / 2**n)

    def validate(self):
        m = self.matrix
        herm = float(np.max(np.abs(m - m.conj().T)))
        if herm > TOL:
            raise QnetError("density matrix is not Hermitian.", deviation=herm)
        trace = complex(np.trace(m))
        if abs(trace - 1) > TOL:
            raise QnetError("density matrix does not have unit trace.", trace=trace)
        lowest = float(np.linalg.eigvalsh(m).min())
        if lowest < -EIG_TOL:
            raise QnetError("density matrix has a negative eigenvalue.", eigenvalue=lowest)
        return self

    @property
    def trace(self):
        return float(np.trace(self.matrix).real)

    def tensor(self):
        return self.matrix.reshape((2,) * (2 * self.n))

    def scaled(self, factor):
        return DensityMatrix(self.n, self.matrix * factor)

    def normalized(self):
        return DensityMatrix(self.n, self.matrix / np.trace(self.matrix).real)

    def __add__(self, other):
        return DensityMatrix(self.n, self.matrix + other.matrix)


State = Union[PureState, DensityMatrix]


def init_state(n, fill="all-zero", density=False):
    """|0>^n or |+>^n, as a pure state or (density=True) a density matrix"""
    _checkWidth(n, "density" if density else "pure")

    if fill == "all-zero":
        amps = np.zeros(2**n, dtype=complex)
        amps[0] = 1
    elif fill == "all-plus":
        amps = np.full(2**n, 2 ** (-n / 2), dtype=complex)
    else:
        raise QnetError("unknown initial fill; expected 'all-zero' or 'all-plus'.", fill=fill)

    state = PureState(n, amps)
    return state.density() if density else state


def bell_state():
    """|Phi+> = (|00> + |11>)/sqrt(2)"""
    return PureState(2, np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2))


def g2_state():
    """|G_2> = CZ|++> = (|0+> + |1->)/sqrt(2)"""
    return PureState(2, np.array([1, 1, 1, -1], dtype=complex) / 2)


def tensor_states(*states):
    """Tensor product where the first state occupies the lowest qubit indices"""
    if all(isinstance(s, PureState) for s in states):
        amps = np.ones(1, dtype=complex)
        for s in states:
            amps = np.kron(s.amplitudes, amps)
        return PureState(sum(s.n for s in states), amps)

    mats = np.ones((1, 1), dtype=complex)
    for s in states:
        m = s.density().matrix if isinstance(s, PureState) else s.matrix
        mats = np.kron(m, mats)
    n = sum(s.n for s in states)
    _checkWidth(n, "density")
    return DensityMatrix(n, mats)


## unitary application
def _applyToAxes(tensor, matrix, axes):
    k = len(axes)
    op = matrix.reshape((2,) * (2 * k))
    out = np.tensordot(op, tensor, axes=(list(range(k, 2 * k)), list(axes)))
    return np.moveaxis(out, list(range(k)), list(axes))


def _checkQubits(n, qubits):
    for q in qubits:
        if not 0 <= q < n:
            raise QnetError("qubit index out of range for the register.", qubit=q, width=n)
    if len(set(qubits)) != len(qubits):
        raise QnetError("duplicate qubit indices.", qubits=tuple(qubits))


def apply_unitary(state, matrix, qubits):
    """Apply a 2^k x 2^k unitary to the ordered qubits, the first being the most
    significant bit of the matrix basis.
    """
    qubits = tuple(int(q) for q in qubits)
    _checkQubits(state.n, qubits)
    n = state.n

    if isinstance(state, PureState):
        out = _applyToAxes(state.tensor(), matrix, [n - 1 - q for q in qubits])
        return PureState(n, out.reshape(2**n))

    t = _applyToAxes(state.tensor(), matrix, [n - 1 - q for q in qubits])
    t = _applyToAxes(t, matrix.conj(), [2 * n - 1 - q for q in qubits])
    return DensityMatrix(n, t.reshape(2**n, 2**n))


def apply_gate(state, g):
    return apply_unitary(state, GATE_MATRICES[g.kind], g.targets)


## measurement
def _rotate(state, q, kinds):
    for kind in kinds:
        state = apply_unitary(state, GATE_MATRICES[kind], (q,))
    return state


def _undoRotation(state, q, kinds):
    for kind in reversed(kinds):
        state = apply_unitary(state, GATE_MATRICES[kind].conj().T, (q,))
    return state


def measure(state, q, basis=MeasurementBasis.Z, rng=None, outcome=None):
    """Measure qubit q in a Pauli basis.

    The outcome is sampled from `rng` unless `outcome` forces a branch. Returns
    (outcome, collapsed state, probability); the collapsed qubit is left in the
    eigenstate of the measured Pauli, outcome 0 being the +1 eigenvalue.
    """
    basis = MeasurementBasis(basis)
    _checkQubits(state.n, (q,))
    n = state.n
    kinds = basis.change
    rotated = _rotate(state, q, kinds)

    if isinstance(rotated, PureState):
        t = rotated.tensor()
        branches = [np.take(t, b, axis=n - 1 - q) for b in (0, 1)]
        probs = [float(np.vdot(b, b).real) for b in branches]
    else:
        t = rotated.tensor()
        diag = [np.take(np.take(t, b, axis=n - 1 - q), b, axis=2 * n - 2 - q) for b in (0, 1)]
        probs = [float(np.trace(d.reshape(2 ** (n - 1), 2 ** (n - 1))).real) for d in diag]

    total = sum(probs)
    probs = [p / total for p in probs]

    if outcome is None:
        if rng is None:
            raise QnetError("measure needs either a random generator or a forced outcome.", qubit=q)
        outcome = int(rng.random() >= probs[0])
    else:
        outcome = int(outcome)
        if outcome not in (0, 1):
            raise QnetError("forced outcome must be 0 or 1.", outcome=outcome)

    probability = probs[outcome]
    if probability < MIN_BRANCH_PROBABILITY:
        raise OutcomeError("requested measurement branch has zero probability.", qubit=q, basis=basis.value, outcome=outcome, probability=probability)

    projector = np.zeros((2, 2), dtype=complex)
    projector[outcome, outcome] = 1
    collapsed = apply_unitary(rotated, projector, (q,))

    if isinstance(collapsed, PureState):
        collapsed = PureState(n, collapsed.amplitudes / np.sqrt(probability * total))
    else:
        collapsed = DensityMatrix(n, collapsed.matrix / (probability * total))

    return outcome, _undoRotation(collapsed, q, kinds), probability


def project(state, q, basis, outcome):
    """Unnormalized projection of a density matrix onto one measurement branch"""
    basis = MeasurementBasis(basis)
    kinds = basis.change
    projector = np.zeros((2, 2), dtype=complex)
    projector[outcome, outcome] = 1
    rotated = apply_unitary(_rotate(state, q, kinds), projector, (q,))
    return _undoRotation(rotated, q, kinds)


## reduced states
def _checkKeep(n, keep):
    keep = tuple(int(q) for q in keep)
    if not keep:
        raise QnetError("partial trace needs at least one kept qubit.")
    _checkQubits(n, keep)
    return keep


def reduced_density(state, keep):
    """Reduced state of a pure state over `keep`; keep[i] becomes qubit i"""
    keep = _checkKeep(state.n, keep)
    n, k = state.n, len(keep)
    _checkWidth(k, "density")

    kept = [n - 1 - keep[i] for i in reversed(range(k))]
    rest = [a for a in range(n) if a not in kept]
    m = np.transpose(state.tensor(), kept + rest).reshape(2**k, -1)
    return DensityMatrix(k, m @ m.conj().T)


def partial_trace(rho, keep):
    """Reduced state over `keep`, in the given order; keep[i] becomes qubit i"""
    if isinstance(rho, PureState):
        return reduced_density(rho, keep)

    keep = _checkKeep(rho.n, keep)
    n, k = rho.n, len(keep)
    keepSet = set(keep)

    inSub = [q for q in reversed(range(n))] + [n + q if q in keepSet else q for q in reversed(range(n))]
    outSub = [keep[i] for i in reversed(range(k))] + [n + keep[i] for i in reversed(range(k))]
    out = np.einsum(rho.tensor(), inSub, outSub)
    return DensityMatrix(k, out.reshape(2**k, 2**k))


## pauli strings and expectation values
_PAULI_PRODUCT = {
    ("X", "Y"): (1j, "Z"),
    ("Y", "Z"): (1j, "X"),
    ("Z", "X"): (1j, "Y"),
    ("Y", "X"): (-1j, "Z"),
    ("Z", "Y"): (-1j, "X"),
    ("X", "Z"): (-1j, "Y"),
}

_PHASES = {"+": 1, "-": -1, "+i": 1j, "-i": -1j, "i": 1j, "": 1}


def _letterProduct(a, b):
    if a == "I":
        return 1, b
    if b == "I":
        return 1, a
    if a == b:
        return 1, "I"
    return _PAULI_PRODUCT[(a, b)]


@dataclass(frozen=True)
class PauliString:
    """Tensor product of Paulis; letters[q] acts on qubit q"""

    letters: str
    phase: complex = 1

    def __post_init__(self):
        letters = self.letters.upper()
        if not letters or any(c not in "IXYZ" for c in letters):
            raise QnetError("Pauli string letters must be drawn from I, X, Y, Z.", letters=self.letters)
        if complex(self.phase) not in (1, -1, 1j, -1j):
            raise QnetError("Pauli string phase must be one of +1, -1, +i, -i.", phase=self.phase)
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "phase", complex(self.phase))

    @classmethod
    def parse(cls, text):
        """Parse labels like "XZ", "-XZ" or "+iYI" (qubit 0 first)"""
        text = text.strip()
        i = 0
        while i < len(text) and text[i] in "+-i":
            i += 1
        sign = text[:i]
        if sign not in _PHASES:
            raise QnetError("malformed Pauli string phase.", text=text)
        return cls(text[i:], _PHASES[sign])

    @property
    def n(self):
        return len(self.letters)

    def __mul__(self, other):
        if self.n != other.n:
            raise QnetError("Pauli string widths differ.", left=self.n, right=other.n)
        phase = self.phase * other.phase
        letters = []
        for a, b in zip(self.letters, other.letters):
            p, c = _letterProduct(a, b)
            phase *= p
            letters.append(c)
        return PauliString("".join(letters), phase)

    def commutes(self, other):
        anti = sum(1 for a, b in zip(self.letters, other.letters) if "I" not in (a, b) and a != b)
        return anti % 2 == 0

    def to_matrix(self):
        m = np.ones((1, 1), dtype=complex)
        for letter in self.letters:
            m = np.kron(PAULI_MATRICES[letter], m)
        return self.phase * m

    def apply(self, state):
        for q, letter in enumerate(self.letters):
            if letter != "I":
                state = apply_unitary(state, PAULI_MATRICES[letter], (q,))
        if isinstance(state, PureState):
            return PureState(state.n, state.amplitudes * self.phase)
        return state

    def __str__(self):
        sign = dict(((1, "+"), (-1, "-"), (1j, "+i"), (-1j, "-i")))[self.phase]
        return sign + self.letters


def expectation(state, obs):
    """Tr(O rho) for a Pauli string or a Hermitian matrix"""
    if isinstance(obs, str):
        obs = PauliString.parse(obs)

    if isinstance(obs, PauliString):
        if obs.n != state.n:
            raise QnetError("observable width does not match the state.", observable=obs.n, state=state.n)
        if isinstance(state, PureState):
            return float(np.vdot(state.amplitudes, obs.apply(state).amplitudes).real)
        acted = state
        n = state.n
        t = acted.tensor()
        for q, letter in enumerate(obs.letters):
            if letter != "I":
                t = _applyToAxes(t, PAULI_MATRICES[letter], [n - 1 - q])
        return float((obs.phase * np.trace(t.reshape(2**n, 2**n))).real)

    obs = np.asarray(obs, dtype=complex)
    if obs.shape != (2**state.n, 2**state.n):
        raise QnetError("observable width does not match the state.", shape=obs.shape, state=state.n)
    if isinstance(state, PureState):
        return float(np.vdot(state.amplitudes, obs @ state.amplitudes).real)
    return float(np.trace(obs @ state.matrix).real)
