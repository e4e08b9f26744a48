"""Helpers for tests"""

import contextlib
import io
import os
import shutil
import tempfile
import unittest

import numpy as np
import simplejson

from mqncsim.app import MqncApp, main, _subcommandDict
from mqncsim.quantum import DensityMatrix, PureState


def randomPure(rng, n):
    return PureState.from_amplitudes(rng.normal(size=2**n) + 1j * rng.normal(size=2**n), normalize=True)


def randomMixed(rng, n, rank=None):
    rank = rank or 2**n
    a = rng.normal(size=(2**n, rank)) + 1j * rng.normal(size=(2**n, rank))
    m = a @ a.conj().T
    return DensityMatrix(n, m / np.trace(m).real)


class QnetTest(unittest.TestCase):
    """Base test case with a scratch directory, a seeded generator and a CLI runner"""

    seed = 12345

    def setUp(self):
        super(QnetTest, self).setUp()
        self.tmpdir = tempfile.mkdtemp(prefix="mqncsim-test-")
        self.rng = np.random.default_rng(self.seed)

    def tearDown(self):
        shutil.rmtree(self.tmpdir, ignore_errors=True)
        super(QnetTest, self).tearDown()

    def path(self, name):
        return os.path.join(self.tmpdir, name)

    def writeJson(self, name, obj):
        path = self.path(name)
        with open(path, "w") as f:
            simplejson.dump(obj, f)
        return path

    def readJson(self, path):
        with open(path) as f:
            return simplejson.load(f)

    @staticmethod
    def _clearInstances():
        for cls in (MqncApp, *_subcommandDict.values()):
            cls.clear_instance()

    def run_app(self, argv):
        """Run the CLI in-process; returns (exit code, stdout)"""
        self._clearInstances()
        out = io.StringIO()
        code = 0
        try:
            with contextlib.redirect_stdout(out):
                main(argv)
        except SystemExit as e:
            code = e.code or 0
        finally:
            self._clearInstances()
        return code, out.getvalue()
