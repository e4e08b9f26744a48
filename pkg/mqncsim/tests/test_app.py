import csv
import logging

import h5py
import numpy as np
import pytest
import simplejson

from mqncsim.baseManager import QnetBaseManager
from mqncsim.config import ExperimentConfig, NoiseConfig, SimulatorConfig
from mqncsim.exception import ExperimentFailure, QnetError
from mqncsim.expConfig import ConfigManager
from mqncsim.quantum import width_limit
from mqncsim.record import ResultRecord, emit, toJson
from mqncsim.tests.utils import QnetTest

TSIRELSON = 2 * np.sqrt(2)


class TestRecord(QnetTest):
    def setUp(self):
        super().setUp()
        self.record = ResultRecord("protocol", dict((("ExperimentConfig", dict((("seed", 3),))),)), 3)
        self.record.add_metric("F_target", 0.9, "shot-sampled", 0.01, shots=100)

    def test_metric_fields(self):
        metric = self.record.metrics["F_target"]

        assert metric == dict(value=0.9, estimator="shot-sampled", stderr=0.01, shots=100)

    def test_json(self):
        payload = simplejson.loads(toJson(self.record))

        assert payload["provenance"] == dict(seed=3, version=self.record.version)
        assert payload["metrics"]["F_target"]["value"] == 0.9

    def test_timestamp(self):
        payload = simplejson.loads(toJson(self.record.stamp()))

        assert "timestamp" in payload["provenance"]

    def test_nan_is_null(self):
        self.record.add_metric("epsilon_crit", float("nan"), "exact")

        assert simplejson.loads(toJson(self.record))["metrics"]["epsilon_crit"]["value"] is None

    def test_csv(self):
        path = emit(self.record, "csv", self.path("record.csv"))
        with open(path, newline="") as f:
            rows = list(csv.DictReader(f))

        assert rows == [dict(metric="F_target", value="0.9", stderr="0.01", estimator="shot-sampled", seed="3")]

    def test_hdf5(self):
        path = emit(self.record, "hdf5", self.path("record.h5"))
        with h5py.File(path, "r") as f:
            assert f.attrs["kind"] == "protocol"
            assert f["metrics/F_target"][()] == 0.9
            assert f["metrics/F_target"].attrs["estimator"] == "shot-sampled"

    def test_unknown_format(self):
        with pytest.raises(QnetError):
            emit(self.record, "xml", self.path("record.xml"))

    def test_unwritable_path(self):
        with pytest.raises(QnetError):
            emit(self.record, "json", self.path("missing/record.json"))


class TestCli(QnetTest):
    def test_no_subcommand(self):
        code, _ = self.run_app([])

        assert code == 1

    def test_list_topologies(self):
        code, out = self.run_app(["list-topologies"])

        assert code == 0
        assert sorted(t["name"] for t in simplejson.loads(out)) == ["butterfly-14", "poughkeepsie", "tokyo"]

    def test_validate_config(self):
        config = self.writeJson("config.json", dict((("ExperimentConfig", dict((("seed", 3), ("shots", 100)))),)))
        code, out = self.run_app(["validate-config", f"--config={config}", "--seed=5"])
        echo = simplejson.loads(out)

        assert code == 0
        # command line wins over the file
        assert echo["ExperimentConfig"]["seed"] == 5
        assert echo["ExperimentConfig"]["shots"] == 100

    def test_missing_config_file(self):
        code, _ = self.run_app(["run-protocol", f"--config={self.path('nothing.json')}"])

        assert code == 1

    def test_invalid_config(self):
        code, _ = self.run_app(["run-protocol", "--shots=0"])

        assert code == 1

    def test_embedding_violation(self):
        config = self.writeJson("config.json", dict((("ExperimentConfig", dict((("protocol", "swapping"), ("embedding", [0, 5, 6, 12])))),)))
        code, _ = self.run_app(["run-protocol", f"--config={config}"])

        assert code == 1

    def test_run_chsh(self):
        out = self.path("chsh.json")
        code, _ = self.run_app(["run-chsh", "--fixture=phi+", f"--output-json={out}"])
        payload = self.readJson(out)

        assert code == 0
        assert payload["kind"] == "chsh"
        assert payload["metrics"]["S[phi+]"]["value"] == pytest.approx(TSIRELSON, abs=1e-9)

    def test_run_chsh_cross_pairs(self):
        out = self.path("chsh.json")
        code, _ = self.run_app(["run-chsh", "--ExperimentConfig.cross_pairs=True", f"--output-json={out}"])
        payload = self.readJson(out)
        metrics = payload["metrics"]

        assert code == 0
        assert payload["details"]["cross_pairs"] == ["0-1", "0-10", "1-11", "10-11"]
        for label in ("0-11", "1-10"):
            assert metrics[f"S[{label}]"]["value"] == pytest.approx(TSIRELSON, abs=1e-9)
        for label in payload["details"]["cross_pairs"]:
            assert metrics[f"S[{label}]"]["value"] == pytest.approx(0, abs=1e-9)
            assert f"F[{label}]" not in metrics

    def test_run_chsh_cross_pairs_noisy(self):
        out = self.path("chsh.json")
        code, _ = self.run_app(["run-chsh", "--ExperimentConfig.cross_pairs=True", "--epsilon=0.03", f"--output-json={out}"])
        metrics = self.readJson(out)["metrics"]

        assert code == 0
        for label in ("0-1", "0-10", "1-11", "10-11"):
            assert abs(metrics[f"S[{label}]"]["value"]) < metrics["S[0-11]"]["value"]

    def test_run_chsh_sampled(self):
        out = self.path("chsh.json")
        code, _ = self.run_app(["run-chsh", "--fixture=phi+", "--estimator=shot-sampled", "--shots=2000", f"--output-json={out}"])
        metric = self.readJson(out)["metrics"]["S[phi+]"]

        assert code == 0
        assert abs(metric["value"] - TSIRELSON) <= 5 * metric["stderr"]

    def test_run_tomography(self):
        out = self.path("tomography.json")
        code, _ = self.run_app(["run-tomography", "--fixture=werner:0.7", f"--output-json={out}"])
        metrics = self.readJson(out)["metrics"]

        assert code == 0
        assert metrics["F[werner:0.7]"]["value"] == pytest.approx(0.7, abs=1e-9)
        assert metrics["trace_distance[werner:0.7]"]["value"] == pytest.approx(0, abs=1e-9)

    def test_run_protocol(self):
        out = self.path("protocol.json")
        code, _ = self.run_app(["run-protocol", "--epsilon=0", f"--output-json={out}"])
        payload = self.readJson(out)

        assert code == 0
        assert payload["metrics"]["F_target"]["value"] == pytest.approx(1, abs=1e-9)
        assert payload["metrics"]["acceptance"]["value"] == pytest.approx(0.25)
        assert payload["details"]["correlation"]["labels"] == ["0", "1", "10", "11"]

    def test_rerun_is_identical(self):
        out = self.path("protocol.json")
        argv = ["run-protocol", "--epsilon=0.02", "--estimator=shot-sampled", "--shots=256", "--ExperimentConfig.trials=2", f"--output-json={out}"]

        self.run_app(argv)
        with open(out, "rb") as f:
            first = f.read()
        self.run_app(argv)
        with open(out, "rb") as f:
            second = f.read()

        assert first == second

    def test_run_sweep(self):
        outCsv, outJson, outHdf5 = self.path("sweep.csv"), self.path("sweep.json"), self.path("sweep.h5")
        code, _ = self.run_app(["run-sweep", "--ExperimentConfig.grid_points=11", f"--output-csv={outCsv}", f"--output-json={outJson}", f"--output-hdf5={outHdf5}"])

        assert code == 0
        with open(outCsv, newline="") as f:
            rows = list(csv.DictReader(f))
        assert len(rows) == 2 * 11
        assert sorted(set(row["pair"] for row in rows)) == ["0-11", "1-10"]

        payload = self.readJson(outJson)
        assert "epsilon_crit" in payload["metrics"]
        assert payload["sweep"]["epsilon_crit"] == payload["metrics"]["epsilon_crit"]["value"]

        with h5py.File(outHdf5, "r") as f:
            assert f.attrs["kind"] == "sweep"
            assert f["sweep/0-11/epsilon"].shape == (11,)

    def test_run_cluster_scaling(self):
        outCsv, outJson, outHdf5 = self.path("scaling.csv"), self.path("scaling.json"), self.path("scaling.h5")
        argv = ["run-cluster-scaling", "--ExperimentConfig.grid_points=6", f"--output-csv={outCsv}", f"--output-json={outJson}", f"--output-hdf5={outHdf5}"]
        code, _ = self.run_app(argv)

        assert code == 0
        with open(outCsv, newline="") as f:
            rows = list(csv.DictReader(f))
        assert len(rows) == 4 * 6
        assert sorted(set(int(row["n"]) for row in rows)) == [2, 3, 4, 5]

        payload = self.readJson(outJson)
        assert payload["kind"] == "scaling"
        assert payload["metrics"]["F[G2]"]["value"] > payload["metrics"]["F[G5]"]["value"]

        with h5py.File(outHdf5, "r") as f:
            assert f.attrs["kind"] == "scaling"
            assert f["scaling/G5"].attrs["n"] == 5
            assert f["scaling/G3/F"].shape == (6,)
            assert f["scaling/G3/F"][0] == pytest.approx(1)

    def test_cluster_scaling_on_poughkeepsie(self):
        out = self.path("scaling.json")
        config = self.writeJson("config.json", dict((("ExperimentConfig", dict((("embedding", [5, 0, 1, 2, 3]), ("grid", [0.0, 0.02])))),)))
        code, _ = self.run_app(["run-cluster-scaling", "--topology=poughkeepsie", f"--config={config}", f"--output-json={out}"])

        assert code == 0
        assert self.readJson(out)["metrics"]["F[G5]"]["epsilon"] == 0.02

    def test_cluster_scaling_rejects_short_chains(self):
        config = self.writeJson("config.json", dict((("ExperimentConfig", dict((("chain_lengths", [1, 2]),))),)))
        code, _ = self.run_app(["run-cluster-scaling", f"--config={config}"])

        assert code == 1

    def test_butterfly_off_poughkeepsie(self):
        code, _ = self.run_app(["validate-config", "--topology=poughkeepsie"])

        assert code == 1

    def test_sweep_reports_sensitivity(self):
        out = self.path("sweep.json")
        code, _ = self.run_app(["run-sweep", "--ExperimentConfig.grid_points=11", f"--output-json={out}"])

        assert code == 0
        payload = self.readJson(out)
        quiet = payload["metrics"]["epsilon_crit"]["value"]
        sensitivity = payload["details"]["sensitivity"]
        assert sensitivity["noisy_measurement"] is True
        assert quiet is not None and sensitivity["epsilon_crit"] is not None
        assert sensitivity["epsilon_crit"] <= quiet

    def test_sweep_sensitivity_off(self):
        out = self.path("sweep.json")
        code, _ = self.run_app(["run-sweep", "--ExperimentConfig.grid_points=5", "--ExperimentConfig.sensitivity=False", f"--output-json={out}"])

        assert code == 0
        assert "sensitivity" not in self.readJson(out)["details"]

    def test_sweep_hdf5_rerun_is_identical(self):
        out = self.path("sweep.h5")
        argv = ["run-sweep", "--ExperimentConfig.grid_points=5", f"--output-hdf5={out}"]

        self.run_app(argv)
        with open(out, "rb") as f:
            first = f.read()
        self.run_app(argv)
        with open(out, "rb") as f:
            second = f.read()

        assert first == second


class FailingManager(QnetBaseManager):
    kind = "protocol"

    def _run(self):
        raise RuntimeError("lost the register")


class TestManager(QnetTest):
    def test_unexpected_error_keeps_cause(self):
        manager = FailingManager(logging.getLogger("mqncsim.test"), ExperimentConfig(), NoiseConfig(), SimulatorConfig())

        with pytest.raises(ExperimentFailure) as info:
            manager.run()
        assert info.value.code == 2
        assert info.value.payload["debugVars"]["type"] == "RuntimeError"
        assert "lost the register" in info.value.payload["debugVars"]["error"]

    def test_width_limits_stay_with_the_run(self):
        code, _ = self.run_app(["run-protocol", "--SimulatorConfig.max_density_qubits=4"])

        assert code == 1
        assert width_limit("density") == 10
        code, _ = self.run_app(["run-protocol", "--protocol=swapping"])
        assert code == 0

    def test_misplaced_butterfly_is_embeddable_on_tokyo(self):
        exp = ExperimentConfig(embedding=[10, 0, 5, 6, 11, 1])
        manager = ConfigManager(logging.getLogger("mqncsim.test"), exp, NoiseConfig(), SimulatorConfig())

        with pytest.raises(ExperimentFailure) as info:
            manager.run()
        assert info.value.code == 1
        assert info.value.payload["debugVars"]["embeddable"] is True

    def test_butterfly_never_fits_poughkeepsie(self):
        exp = ExperimentConfig(topology="poughkeepsie")
        manager = ConfigManager(logging.getLogger("mqncsim.test"), exp, NoiseConfig(), SimulatorConfig())

        with pytest.raises(ExperimentFailure) as info:
            manager.run()
        assert info.value.payload["type"] == "EmbeddingError"
        assert info.value.payload["debugVars"]["embeddable"] is False
