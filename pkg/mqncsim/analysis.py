# -*- coding: utf-8 -*-

# Copyright (c) mqncsim Development Team.
# Distributed under the terms of the Modified BSD License.

"""Figures of merit for distributed pairs: fidelity, tomography, concurrence,
CHSH, correlation matrices and the Werner model.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np
import scipy.linalg

from .circuit import GATE_MATRICES, PAULI_MATRICES, GateKind
from .exception import QnetError
from .quantum import DensityMatrix, PauliString, PureState, apply_unitary, expectation, g2_state

__all__ = [
    "CHSH_FIDELITY_THRESHOLD",
    "ChshSettings",
    "CorrelationMatrix",
    "TomographyEstimate",
    "bell_transform",
    "chsh_s",
    "chsh_s_sampled",
    "concurrence",
    "correlation_matrix",
    "fidelity",
    "pair_metrics",
    "sample_tomography_counts",
    "tomography",
    "tomography_probabilities",
    "trace_distance",
    "werner_fidelity_to",
    "werner_s",
    "werner_state",
]

log = logging.getLogger(__name__)

EIG_TOL = 1e-8
# eigenvalues below this are rounding noise of a rank-deficient product
SPECTRUM_FLOOR = 1e-14
MIN_CORRELATION_SHOTS = 100

# a Werner pair violates CHSH above this fidelity (quoted as 0.78)
CHSH_FIDELITY_THRESHOLD = (1 + 3 / np.sqrt(2)) / 4

_H = GATE_MATRICES[GateKind.H]
_YY = np.kron(PAULI_MATRICES["Y"], PAULI_MATRICES["Y"])

# rotation taking each Pauli eigenbasis onto the computational basis
_BASIS_CHANGE = dict(
    (
        ("X", _H),
        ("Y", _H @ GATE_MATRICES[GateKind.SDG]),
        ("Z", PAULI_MATRICES["I"]),
    )
)


def _asMatrix(state):
    if isinstance(state, PureState):
        return np.outer(state.amplitudes, state.amplitudes.conj())
    return state.matrix


def _checkPsd(m, what):
    lowest = float(np.linalg.eigvalsh(m).min())
    if lowest < -EIG_TOL:
        raise QnetError(f"{what} is not positive semidefinite.", eigenvalue=lowest)


def _sqrtPsd(m):
    vals, vecs = scipy.linalg.eigh(m)
    return (vecs * np.sqrt(np.clip(vals, 0, None))) @ vecs.conj().T


## fidelity
def fidelity(rho, sigma):
    """Uhlmann fidelity [Tr sqrt(sqrt(rho) sigma sqrt(rho))]^2; <psi|rho|psi> when one side is pure"""
    if rho.n != sigma.n:
        raise QnetError("fidelity needs states of equal width.", left=rho.n, right=sigma.n)

    if isinstance(rho, PureState) and isinstance(sigma, PureState):
        return float(min(abs(np.vdot(rho.amplitudes, sigma.amplitudes)) ** 2, 1.0))
    if isinstance(rho, PureState):
        rho, sigma = sigma, rho
    if isinstance(sigma, PureState):
        _checkPsd(rho.matrix, "state")
        value = np.vdot(sigma.amplitudes, rho.matrix @ sigma.amplitudes).real
        return float(np.clip(value, 0, 1))

    _checkPsd(rho.matrix, "state")
    _checkPsd(sigma.matrix, "state")
    root = _sqrtPsd(rho.matrix)
    inner = scipy.linalg.eigvalsh(root @ sigma.matrix @ root)
    inner[inner < SPECTRUM_FLOOR] = 0
    return float(np.clip(np.sum(np.sqrt(np.clip(inner, 0, None))) ** 2, 0, 1))


def trace_distance(rho, sigma):
    diff = _asMatrix(rho) - _asMatrix(sigma)
    return float(0.5 * np.sum(np.abs(scipy.linalg.eigvalsh(diff))))


## werner model
def _checkWernerF(F):
    if not 0.25 - 1e-12 <= F <= 1 + 1e-12:
        raise QnetError("Werner fidelity must lie in [1/4, 1].", F=F)


def werner_state(F):
    """(4F-1)/3 |G2><G2| + (1-F)/3 I"""
    _checkWernerF(F)
    g2 = g2_state().amplitudes
    m = (4 * F - 1) / 3 * np.outer(g2, g2.conj()) + (1 - F) / 3 * np.eye(4)
    return DensityMatrix(2, m.astype(complex))


def werner_s(F):
    """CHSH value of the Bell-transformed Werner state at default settings"""
    _checkWernerF(F)
    return 2 * np.sqrt(2) * (4 * F - 1) / 3


def werner_fidelity_to(rho, target=None):
    """Fidelity of a pair state with the Werner state of its own pair fidelity"""
    F = fidelity(rho, target or g2_state())
    return fidelity(rho, werner_state(max(F, 0.25)))


## concurrence
def concurrence(rho, method="product"):
    """max(0, l1 - l2 - l3 - l4) over the decreasing square roots of the spectrum
    of rho (Y x Y) rho* (Y x Y). method="sqrtm" evaluates the nested square-root form.
    """
    if rho.n != 2:
        raise QnetError("concurrence is defined for two-qubit states.", n=rho.n)
    m = _asMatrix(rho)
    _checkPsd(m, "state")
    tilde = _YY @ m.conj() @ _YY

    if method == "product":
        evals = np.abs(np.real(np.linalg.eigvals(m @ tilde)))
        evals[evals < SPECTRUM_FLOOR] = 0
        lambdas = np.sort(np.sqrt(evals))[::-1]
    elif method == "sqrtm":
        root = scipy.linalg.sqrtm(m)
        lambdas = np.sort(np.abs(np.real(np.linalg.eigvals(scipy.linalg.sqrtm(root @ tilde @ root)))))[::-1]
    else:
        raise QnetError("unknown concurrence method.", method=method)

    return float(max(0.0, lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]))


## chsh
@dataclass(frozen=True)
class ChshSettings:
    """A and A' act on the first qubit of the pair, B and B' on the second"""

    A: np.ndarray = field(default_factory=lambda: PAULI_MATRICES["X"])
    A2: np.ndarray = field(default_factory=lambda: PAULI_MATRICES["Z"])
    B: np.ndarray = field(default_factory=lambda: _H)
    B2: np.ndarray = field(default_factory=lambda: PAULI_MATRICES["Z"] @ _H @ PAULI_MATRICES["Z"])

    def __post_init__(self):
        for name in ("A", "A2", "B", "B2"):
            m = np.asarray(getattr(self, name), dtype=complex)
            if m.shape != (2, 2) or not np.allclose(m, m.conj().T, atol=1e-10):
                raise QnetError("CHSH observables must be Hermitian 2x2 matrices.", observable=name)
            if not np.allclose(np.sort(np.linalg.eigvalsh(m)), (-1, 1), atol=1e-10):
                raise QnetError("CHSH observables must have eigenvalues +1 and -1.", observable=name)
            object.__setattr__(self, name, m)

    def terms(self):
        """(sign, first-qubit observable, second-qubit observable) of S"""
        return ((1, self.A, self.B), (-1, self.A, self.B2), (1, self.A2, self.B), (1, self.A2, self.B2))


def _checkPair(rho):
    if rho.n != 2:
        raise QnetError("CHSH values are defined for two-qubit states.", n=rho.n)


def chsh_s(rho, settings=None):
    """S = <AB> - <AB'> + <A'B> + <A'B'>"""
    _checkPair(rho)
    settings = settings or ChshSettings()
    # qubit 0 is the least significant factor
    return float(sum(sign * expectation(rho, np.kron(b, a)) for sign, a, b in settings.terms()))


def chsh_s_sampled(rho, shots, rng, settings=None):
    """Estimate S from `shots` samples per term in the observables' eigenbases.
    Returns (S, standard error).
    """
    _checkPair(rho)
    if shots < 1:
        raise QnetError("CHSH sampling needs at least one shot per term.", shots=shots)
    settings = settings or ChshSettings()
    m = _asMatrix(rho)

    total = 0.0
    variance = 0.0
    for sign, a, b in settings.terms():
        va, ua = np.linalg.eigh(a)
        vb, ub = np.linalg.eigh(b)
        basis = np.kron(ub, ua)
        probs = np.clip(np.real(np.einsum("ij,ik,kj->j", basis.conj(), m, basis)), 0, None)
        drawn = rng.multinomial(int(shots), probs / probs.sum())
        values = np.kron(vb, va)
        e = float(np.dot(values, drawn) / shots)
        total += sign * e
        variance += (1 - e**2) / shots
    return total, float(np.sqrt(variance))


def bell_transform(rho, pair=(0, 1)):
    """Hadamard on the pair's second qubit, taking |G2> onto |Phi+>"""
    return apply_unitary(rho, _H, (pair[1],))


## tomography
@dataclass
class TomographyEstimate:
    rho: DensityMatrix
    method: str
    shots: Optional[int] = None
    projected: bool = False

    def toDict(self):
        return dict((("method", self.method), ("shots", self.shots), ("projected", self.projected), ("rho", self.rho.matrix)))


def _settings(k):
    return ["".join(s) for s in itertools.product("XYZ", repeat=k)]


def tomography_probabilities(rho):
    """Outcome distribution of every Pauli setting. Setting character i and
    bitstring character i both refer to qubit i.
    """
    k = rho.n
    data = {}
    for setting in _settings(k):
        rotated = rho
        for q, letter in enumerate(setting):
            rotated = apply_unitary(rotated, _BASIS_CHANGE[letter], (q,))
        diag = np.clip(np.real(np.diag(_asMatrix(rotated))), 0, None)
        data[setting] = dict(("".join(str((idx >> q) & 1) for q in range(k)), float(p)) for idx, p in enumerate(diag))
    return data


def sample_tomography_counts(rho, shots, rng):
    data = {}
    for setting, probs in tomography_probabilities(rho).items():
        keys = sorted(probs)
        p = np.array([probs[key] for key in keys])
        drawn = rng.multinomial(int(shots), p / p.sum())
        data[setting] = dict((key, int(c)) for key, c in zip(keys, drawn))
    return data


def _pauliExpectation(pauli, data):
    """Average of <P> over every setting that measures P's non-identity letters"""
    support = [q for q, letter in enumerate(pauli) if letter != "I"]
    values = []
    for setting, outcomes in data.items():
        if any(setting[q] != pauli[q] for q in support):
            continue
        total = sum(outcomes.values())
        values.append(sum(w * (-1) ** sum(int(bits[q]) for q in support) for bits, w in outcomes.items()) / total)
    return float(np.mean(values))


def _isExpectationData(data):
    return all(np.isscalar(v) and not isinstance(v, (str, bytes)) for v in data.values())


def _fromExpectations(data):
    k = len(next(iter(data)))
    if not 1 <= k <= 4:
        raise QnetError("tomography supports one to four qubits.", k=k)
    bad = sorted(p for p in data if len(p) != k or any(c not in "IXYZ" for c in p))
    if bad:
        raise QnetError("expectation keys must be Pauli strings over IXYZ of one length.", keys=bad)

    identity = "I" * k
    if identity in data and abs(data[identity] - 1) > EIG_TOL:
        raise QnetError("the identity expectation must be 1.", value=data[identity])
    paulis = ["".join(letters) for letters in itertools.product("IXYZ", repeat=k)]
    missing = [p for p in paulis if p != identity and p not in data]
    if missing:
        raise QnetError("tomography data is missing Pauli expectations.", missing=missing)
    outside = dict((p, float(v)) for p, v in data.items() if abs(float(np.real(v))) > 1 + EIG_TOL)
    if outside:
        raise QnetError("Pauli expectations must lie within [-1, 1].", values=outside)

    rho = np.zeros((2**k, 2**k), dtype=complex)
    for pauli in paulis:
        value = 1.0 if pauli == identity else float(np.real(data[pauli]))
        rho += value * PauliString(pauli).to_matrix()
    return rho / 2**k, k


def tomography(data):
    """Linear inversion rho = 2^-k sum_P <P> P.

    `data` either maps each of the 3^k settings (e.g. "XZ") to integer counts or
    probabilities keyed by bitstrings, or maps Pauli strings over IXYZ (e.g.
    "XI", "ZZ") straight to their expectation values. Integer counts and
    expectation values may come from an experiment, so those estimates are
    projected onto the PSD cone by eigenvalue clipping when needed.
    """
    if not data:
        raise QnetError("tomography needs measurement data.")

    shots = None
    if _isExpectationData(data):
        rho, k = _fromExpectations(data)
        method, floor = "pauli-expectation", -EIG_TOL
    else:
        k = len(next(iter(data)))
        if not 1 <= k <= 4:
            raise QnetError("tomography supports one to four qubits.", k=k)

        missing = sorted(set(_settings(k)) - set(data))
        if missing:
            raise QnetError("tomography data is missing Pauli settings.", missing=missing)

        shotSampled = all(isinstance(c, (int, np.integer)) for outcomes in data.values() for c in outcomes.values())
        if shotSampled:
            perSetting = [sum(outcomes.values()) for outcomes in data.values()]
            if min(perSetting) == 0:
                raise QnetError("tomography data has settings without shots.", settings=[s for s, o in data.items() if sum(o.values()) == 0])
            shots = int(min(perSetting))

        rho = np.zeros((2**k, 2**k), dtype=complex)
        for letters in itertools.product("IXYZ", repeat=k):
            pauli = "".join(letters)
            value = 1.0 if set(pauli) == {"I"} else _pauliExpectation(pauli, data)
            rho += value * PauliString(pauli).to_matrix()
        rho /= 2**k
        method, floor = ("shot-sampled", 0.0) if shotSampled else ("exact-expectation", None)
    rho = (rho + rho.conj().T) / 2

    projected = False
    if floor is not None:
        vals, vecs = np.linalg.eigh(rho)
        if vals.min() < floor:
            vals = np.clip(vals, 0, None)
            vals /= vals.sum()
            rho = (vecs * vals) @ vecs.conj().T
            projected = True
            log.debug("tomography estimate clipped onto the PSD cone")

    return TomographyEstimate(DensityMatrix(k, rho), method, shots, projected)


## correlation matrix
@dataclass
class CorrelationMatrix:
    labels: Tuple[str, ...]
    matrix: np.ndarray
    stderr: np.ndarray
    shots: Optional[int] = None
    insufficient: bool = False

    def toDict(self):
        return dict((("labels", self.labels), ("matrix", self.matrix), ("stderr", self.stderr), ("shots", self.shots), ("insufficient", self.insufficient)))


def _zSample(rho, shots, rng):
    probs = np.clip(np.real(np.diag(_asMatrix(rho))), 0, None)
    drawn = rng.multinomial(int(shots), probs / probs.sum())
    return dict(("".join(str((idx >> q) & 1) for q in range(rho.n)), int(c)) for idx, c in enumerate(drawn) if c)


def correlation_matrix(source, labels=None, shots=None, rng=None):
    """<Z_i Z_j> over the terminal qubits of a Bell-transformed state.

    `source` is a state (exact, or sampled in the computational basis when
    `shots` is given) or a dict of bitstring counts.
    """
    if isinstance(source, (PureState, DensityMatrix)):
        if shots is None:
            k = source.n
            m = np.eye(k)
            for i, j in itertools.combinations(range(k), 2):
                letters = ["I"] * k
                letters[i] = letters[j] = "Z"
                m[i, j] = m[j, i] = expectation(source, PauliString("".join(letters)))
            return CorrelationMatrix(tuple(labels or map(str, range(k))), m, np.zeros((k, k)))
        source = _zSample(source, shots, rng)

    total = sum(source.values())
    k = len(next(iter(source)))
    m = np.eye(k)
    err = np.zeros((k, k))
    for i, j in itertools.combinations(range(k), 2):
        e = sum(c * (1 if bits[i] == bits[j] else -1) for bits, c in source.items()) / total
        m[i, j] = m[j, i] = e
        err[i, j] = err[j, i] = np.sqrt(max(1 - e**2, 0) / total)

    insufficient = total < MIN_CORRELATION_SHOTS
    if insufficient:
        log.warning("correlation matrix estimated from only %s shots", total)
    return CorrelationMatrix(tuple(labels or map(str, range(k))), m, err, total, insufficient)


## per-pair summary
def pair_metrics(rho, target=None, transform=True):
    """F, S, concurrence and Werner deviation of one distributed pair"""
    target = target or g2_state()
    F = fidelity(rho, target)
    S = chsh_s(bell_transform(rho) if transform else rho)
    return dict(
        (
            ("F", F),
            ("S", S),
            ("C", concurrence(rho)),
            ("werner_deviation", abs(S - werner_s(max(F, 0.25)))),
        )
    )
