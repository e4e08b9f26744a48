import pytest

from mqncsim.exception import ConfigError, QnetError
from mqncsim.topology import PRESETS, DeviceTopology, get_topology, load_topology_file
from mqncsim.tests.utils import QnetTest

LINE_FILE = """# a three-qubit line
name line-3
qubits 4
0 1
1 2
"""


class TestTopology(QnetTest):
    def test_tokyo_preset(self):
        t = PRESETS["tokyo"]

        assert t.n_qubits == 20
        assert t.coupled(5, 0) and t.coupled(6, 11)
        assert not t.coupled(6, 12)

    def test_butterfly_preset(self):
        t = get_topology("butterfly-14")

        assert t.summary() == dict(name="butterfly-14", qubits=14, edges=15)

    def test_poughkeepsie_preset(self):
        t = get_topology("poughkeepsie")

        assert t.summary() == dict(name="poughkeepsie", qubits=20, edges=23)
        assert t.is_path((5, 0, 1, 2, 3))
        assert not t.coupled(0, 6)

    def test_path(self):
        assert PRESETS["tokyo"].is_path((0, 5, 10, 15, 16))
        assert not PRESETS["tokyo"].is_path((0, 5, 16))

    def test_self_loop(self):
        with pytest.raises(QnetError):
            DeviceTopology("bad", 2, frozenset([(1, 1)]))

    def test_edge_outside_device(self):
        with pytest.raises(QnetError):
            DeviceTopology("bad", 2, frozenset([(0, 2)]))

    def test_unknown_preset(self):
        with pytest.raises(ConfigError):
            get_topology("melbourne")

    def test_load_file(self):
        path = self.path("line.txt")
        with open(path, "w") as f:
            f.write(LINE_FILE)
        t = get_topology("tokyo", path)

        assert t.name == "line-3"
        assert t.n_qubits == 4
        assert t.edges == frozenset([(0, 1), (1, 2)])
        assert t.graph().number_of_nodes() == 4

    def test_file_without_name(self):
        path = self.path("anon.txt")
        with open(path, "w") as f:
            f.write("0 1\n")

        with pytest.raises(ConfigError):
            load_topology_file(path)

    def test_malformed_line(self):
        path = self.path("bad.txt")
        with open(path, "w") as f:
            f.write("name bad\n0-1\n")

        with pytest.raises(ConfigError):
            load_topology_file(path)

    def test_missing_file(self):
        with pytest.raises(ConfigError):
            load_topology_file(self.path("nothing.txt"))
