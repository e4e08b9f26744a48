import numpy as np
import pytest

from mqncsim.analysis import fidelity
from mqncsim.circuit import GateKind
from mqncsim.exception import EmbeddingError, QnetError
from mqncsim.noise import NoiseModel, instrument, run_density
from mqncsim.quantum import g2_state
from mqncsim.scaling import ScalingResult, cluster_scaling, linear_cluster
from mqncsim.topology import PRESETS
from mqncsim.tests.utils import QnetTest

LENGTHS = [2, 3, 4, 5]
GRID = [0.0, 0.01, 0.03, 0.05]


class TestLinearCluster(QnetTest):
    def test_two_qubit_cluster(self):
        circuit, target = linear_cluster(2)
        rho, _ = run_density(instrument(circuit, NoiseModel()))

        assert circuit.measurements == []
        assert fidelity(target, g2_state()) == pytest.approx(1)
        assert fidelity(rho, target) == pytest.approx(1)

    def test_transpiled(self):
        circuit, _ = linear_cluster(4)
        raw, _ = linear_cluster(4, transpile=False)

        assert all(g.kind != GateKind.CZ for g in circuit.gates)
        assert sum(g.kind == GateKind.CZ for g in raw.gates) == 3

    def test_poughkeepsie_chain(self):
        circuit, _ = linear_cluster(5, embedding=(5, 0, 1, 2, 3), topology=PRESETS["poughkeepsie"])

        assert circuit.width == 5
        with pytest.raises(EmbeddingError):
            linear_cluster(5, embedding=(0, 1, 2, 3, 9), topology=PRESETS["poughkeepsie"])


class TestClusterScaling(QnetTest):
    def test_exact(self):
        result = cluster_scaling(LENGTHS, GRID)

        assert result.lengths == LENGTHS
        assert len(result.points) == len(LENGTHS) * len(GRID)
        for n in LENGTHS:
            pts = result.series(n)
            assert [pt.epsilon for pt in pts] == GRID
            assert pts[0].F == pytest.approx(1, abs=1e-9)
            assert all(a.F > b.F for a, b in zip(pts, pts[1:]))
            assert all(pt.F_stderr == 0 for pt in pts)

    def test_longer_chains_lose_more(self):
        result = cluster_scaling(LENGTHS, [0.03])
        values = [result.series(n)[0].F for n in LENGTHS]

        assert all(a > b for a, b in zip(values, values[1:]))

    def test_measurement_noise_is_unused(self):
        # nothing is measured, so the flag changes no insertion
        quiet = cluster_scaling([3], [0.02])
        noisy = cluster_scaling([3], [0.02], noisy_measurement=True)

        assert noisy.points == quiet.points

    def test_sampled_agrees_with_exact(self):
        exact = cluster_scaling([3], [0.03])
        sampled = cluster_scaling([3], [0.03], "shot-sampled", shots=500, repeats=4, seed=5)
        point = sampled.points[0]

        assert point.F_stderr > 0
        assert abs(point.F - exact.points[0].F) <= 5 * point.F_stderr + 0.02

    def test_sampled_is_reproducible(self):
        a = cluster_scaling([2, 3], [0.02], "shot-sampled", shots=64, repeats=2, seed=9)
        b = cluster_scaling([2, 3], [0.02], "shot-sampled", shots=64, repeats=2, seed=9)

        assert a.points == b.points

    def test_invalid_arguments(self):
        with pytest.raises(QnetError):
            cluster_scaling([1, 2], GRID)
        with pytest.raises(QnetError):
            cluster_scaling([], GRID)
        with pytest.raises(QnetError):
            cluster_scaling([2], [])
        with pytest.raises(QnetError):
            cluster_scaling([2], GRID, estimator="magic")

    def test_empty_result(self):
        result = ScalingResult([])

        assert result.lengths == []
        assert result.toDict()["points"] == []
