# -*- coding: utf-8 -*-

# Copyright (c) mqncsim Development Team.
# Distributed under the terms of the Modified BSD License.

import dataclasses
import enum
import re
import numpy as np

from .exception import QnetError

__all__ = ["bitsToPattern", "jsonize", "pairLabel", "parsePattern", "patternToBits", "standardError"]

## outcome pattern handling
_patternRe = re.compile(r"^[01]*$")


def parsePattern(pattern, length=None):
    """Validate an outcome pattern such as "01" and return it as a tuple of
    bits. Character i is the outcome of the i-th measurement of a circuit.
    """
    if isinstance(pattern, (tuple, list)):
        pattern = bitsToPattern(pattern)

    if not _patternRe.match(pattern):
        raise QnetError("malformed outcome pattern: only the characters '0' and '1' are allowed.", pattern=pattern)
    if length is not None and len(pattern) != length:
        raise QnetError("outcome pattern length does not match the number of measurements.", pattern=pattern, expected=length)

    return patternToBits(pattern)


def patternToBits(pattern):
    return tuple(int(c) for c in pattern)


def bitsToPattern(bits):
    return "".join(str(int(b)) for b in bits)


def pairLabel(a, b):
    """Label of a qubit pair by its physical indices, lowest first"""
    lo, hi = sorted((a, b))
    return f"{lo}-{hi}"


## statistics
def standardError(samples):
    samples = np.asarray(samples, dtype=float)
    if samples.size < 2:
        return 0.0
    return float(np.std(samples, ddof=1) / np.sqrt(samples.size))


## json handling
def jsonize(v):
    """Turns a value into a JSON serializable version"""
    if isinstance(v, bytes):
        return v.decode()
    if isinstance(v, enum.Enum):
        return v.value
    if dataclasses.is_dataclass(v) and not isinstance(v, type):
        if hasattr(v, "toDict"):
            return jsonize(v.toDict())
        return {f.name: jsonize(getattr(v, f.name)) for f in dataclasses.fields(v)}
    if isinstance(v, dict):
        return {str(k): jsonize(v) for k, v in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonize(i) for i in v]
    if isinstance(v, np.ndarray) and np.iscomplexobj(v):
        return jsonize(np.stack((v.real, v.imag), axis=-1))
    if isinstance(v, np.generic) or isinstance(v, np.ndarray):
        return jsonize(v.tolist())
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v
