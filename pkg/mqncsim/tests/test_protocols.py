import itertools

import numpy as np
import pytest

from mqncsim.analysis import fidelity
from mqncsim.circuit import GateKind
from mqncsim.exception import EmbeddingError, OutcomeError, QnetError
from mqncsim.expProtocol import terminalCorrelations
from mqncsim.graphstate import graph_from_edges
from mqncsim.noise import NoiseModel, instrument, run_density
from mqncsim.protocols import (
    TARGET_LABEL,
    CountsTable,
    Mode,
    ProtocolKind,
    build_linear_mbqc,
    build_mqnc,
    build_protocol,
    build_swapping,
    byproduct_correction,
    oracle_state,
    classical_butterfly,
    find_embedding,
    interaction_graph,
    run_instance,
    transpile_cz,
    validate_embedding,
)
from mqncsim.quantum import apply_unitary, bell_state, g2_state, partial_trace, tensor_states
from mqncsim.topology import PRESETS
from mqncsim.tests.utils import QnetTest

PATTERNS_2 = ("00", "01", "10", "11")
TOKYO = PRESETS["tokyo"]


def terminalState(p, pattern, branch):
    return partial_trace(byproduct_correction(p, pattern).apply(branch.state), p.terminals)


class TestSwapping(QnetTest):
    def test_default_embedding_is_valid(self):
        p = build_swapping(topology=TOKYO)

        assert validate_embedding(TOKYO, p).ok
        assert p.role_map() == dict(a=0, b1=5, b2=6, c=11)

    def test_invalid_embedding(self):
        report = validate_embedding(TOKYO, build_swapping((0, 5, 6, 12)))

        assert not report.ok
        assert [v["pair"] for v in report.violations] == ["6-12"]
        with pytest.raises(EmbeddingError):
            build_swapping((0, 5, 6, 12), topology=TOKYO)

    def test_duplicate_embedding(self):
        with pytest.raises(EmbeddingError):
            build_swapping((0, 5, 5, 11))

    def test_every_branch_corrected(self):
        p = build_swapping()
        _, table = run_density(instrument(p.circuit, NoiseModel()))

        assert sorted(table) == list(PATTERNS_2)
        for pattern, branch in table.items():
            assert fidelity(terminalState(p, pattern, branch), bell_state()) == pytest.approx(1)

    def test_identity_for_default_pattern(self):
        assert byproduct_correction(build_swapping(), "00").unitaries == {}

    def test_pauli_correction(self):
        c = byproduct_correction(build_swapping(), "11")

        assert str(c.paulis((0, 3))) == "+ZX"

    def test_feed_forward(self):
        run = run_instance(build_swapping(mode=Mode.FEED_FORWARD), NoiseModel())

        assert run.acceptance == 1.0
        assert fidelity(run.state, bell_state()) == pytest.approx(1)

    def test_post_select_acceptance(self):
        run = run_instance(build_swapping(), NoiseModel())

        assert run.acceptance == pytest.approx(0.25)
        assert run.branches["00"] == pytest.approx(0.25)


class TestLinearCluster(QnetTest):
    def test_default_pattern(self):
        assert build_linear_mbqc(4).pattern_text == "11"

    def test_every_pattern(self):
        for pattern in PATTERNS_2:
            run = run_instance(build_linear_mbqc(4, pattern=pattern), NoiseModel())

            assert fidelity(run.state, g2_state()) == pytest.approx(1)

    def test_two_qubit_chain(self):
        p = build_linear_mbqc(2)

        assert p.circuit.measurements == []
        assert fidelity(run_instance(p, NoiseModel()).state, g2_state()) == pytest.approx(1)

    def test_five_qubit_cluster(self):
        p = build_linear_mbqc(5, topology=TOKYO)
        total, _ = run_density(instrument(p.circuit.without_measurements(), NoiseModel()))
        cluster = graph_from_edges([(q, q + 1) for q in range(4)]).to_statevector()

        assert fidelity(total, cluster) == pytest.approx(1)
        assert fidelity(run_instance(p, NoiseModel()).state, g2_state()) == pytest.approx(1)

    def test_uncoupled_chain(self):
        report = validate_embedding(TOKYO, build_linear_mbqc(3, embedding=(0, 5, 16)))

        assert [v["pair"] for v in report.violations] == ["5-16"]

    def test_no_default_embedding(self):
        with pytest.raises(EmbeddingError):
            build_linear_mbqc(6)

    def test_too_short(self):
        with pytest.raises(QnetError):
            build_linear_mbqc(1)


class TestNetworkCoding(QnetTest):
    def test_embedding_on_tokyo(self):
        p = build_mqnc(topology=TOKYO)

        assert p.role_map() == dict(s1=0, s2=10, r1=5, r2=6, t1=11, t2=1)
        assert [pair.label for pair in p.pairs] == ["0-11", "1-10"]

    def test_every_branch_corrected(self):
        p = build_mqnc()
        _, table = run_density(instrument(p.circuit, NoiseModel()))

        for pattern, branch in table.items():
            assert fidelity(terminalState(p, pattern, branch), p.target) == pytest.approx(1)

    def test_feed_forward(self):
        run = run_instance(build_mqnc(mode=Mode.FEED_FORWARD), NoiseModel())

        assert fidelity(run.state, tensor_states(g2_state(), g2_state())) == pytest.approx(1)

    def test_crossing_pairs_factorize(self):
        p = build_mqnc()
        rho = run_instance(p, NoiseModel()).state
        marginals = [partial_trace(rho, pair.positions) for pair in p.pairs]

        assert np.allclose(tensor_states(*marginals).matrix, rho.matrix, atol=1e-9)

    def test_noise_lowers_fidelity(self):
        p = build_mqnc()
        values = [fidelity(run_instance(p, NoiseModel(e)).state, p.target) for e in (0.0, 0.01, 0.02)]

        assert values[0] == pytest.approx(1)
        assert values[0] > values[1] > values[2]

    def test_transpiled_circuit(self):
        p = build_mqnc()
        t = p.with_circuit(transpile_cz(p.circuit))

        assert t.circuit.census()["two_qubit"] == p.circuit.census()["two_qubit"]
        assert all(g.kind != GateKind.CZ for g in t.circuit.gates)
        assert fidelity(run_instance(t, NoiseModel()).state, p.target) == pytest.approx(1)

    def test_pairs_share_frame_class(self):
        p = build_mqnc()

        for pattern in PATTERNS_2:
            correction = byproduct_correction(p, pattern)
            for pair in p.pairs:
                assert correction.paulis((pair.qubits[0],)) is None
                assert correction.paulis((pair.qubits[1],)) is None

    def test_incomplete_outcomes(self):
        with pytest.raises(OutcomeError):
            byproduct_correction(build_mqnc(), "1")

    def test_unknown_stage(self):
        with pytest.raises(QnetError):
            build_mqnc("step3")

    def test_ideal_correlations(self):
        p = build_mqnc()
        corr = terminalCorrelations(p, run_instance(p, NoiseModel()).state, shots=8192, rng=np.random.default_rng(2024))

        assert corr.labels == ("0", "1", "10", "11")
        # pairs 0-11 and 1-10
        assert corr.matrix[0, 3] == 1 and corr.matrix[1, 2] == 1
        for i, j in ((0, 1), (0, 2), (1, 3), (2, 3)):
            assert abs(corr.matrix[i, j]) <= 3 * corr.stderr[i, j]

    def test_noisy_correlations(self):
        p = build_mqnc()
        corr = terminalCorrelations(p, run_instance(p, NoiseModel(0.03)).state, shots=8192, rng=self.rng)
        err = corr.stderr

        for i, j in ((0, 3), (1, 2)):
            for k, l in ((0, 1), (0, 2), (1, 3), (2, 3)):
                assert corr.matrix[i, j] - abs(corr.matrix[k, l]) >= 5 * np.hypot(err[i, j], err[k, l])

    def test_sampled_agrees_with_exact(self):
        p = build_mqnc()
        model = NoiseModel(0.02)
        exact = run_instance(p, model)
        sampled = run_instance(p, model, "shot-sampled", shots=2000, seed=4)

        assert sampled.acceptance == pytest.approx(0.25, abs=0.05)
        for pair in p.pairs:
            samples = sampled.fidelity_samples[pair.label]
            stderr = np.std(samples, ddof=1) / np.sqrt(samples.size)
            assert abs(samples.mean() - fidelity(exact.pair_state(pair), pair.target)) <= 5 * stderr + 1e-3

    def test_step1_graph(self):
        p = build_mqnc("step1", topology=PRESETS["butterfly-14"])
        run = run_instance(p, NoiseModel(), "shot-sampled", shots=4, seed=1)

        assert p.circuit.measurements == []
        assert np.allclose(run.fidelity_samples[TARGET_LABEL], 1)

    def test_full_protocol(self):
        p = build_mqnc("full", mode=Mode.FEED_FORWARD, topology=PRESETS["butterfly-14"])
        run = run_instance(p, NoiseModel(), "shot-sampled", shots=8, seed=2)

        assert len(p.circuit.measurements) == 10
        assert len(run.counts.counts) > 1
        for pair in p.pairs:
            assert np.allclose(run.fidelity_samples[pair.label], 1, atol=1e-9)

    def test_full_protocol_off_device(self):
        with pytest.raises(EmbeddingError):
            build_mqnc("full", topology=TOKYO)

    def test_dispatch(self):
        assert build_protocol(ProtocolKind.SWAPPING).kind == ProtocolKind.SWAPPING
        assert build_protocol("linear-mbqc", chain_length=3).width == 3
        assert build_protocol("mqnc-step2-onward").width == 6


class TestCounts(QnetTest):
    def test_marginal(self):
        table = CountsTable(dict((("00", 3), ("01", 1), ("11", 4))))

        assert table.total == 8
        assert table.probability("11") == 0.5
        assert table.marginal((1,)).counts == dict((("0", 3), ("1", 5)))

    def test_inconsistent_total(self):
        with pytest.raises(QnetError):
            CountsTable(dict((("0", 3),)), total=4)

    def test_sample(self):
        table = CountsTable.sample(dict((("0", 0.5), ("1", 0.5))), 100, self.rng)

        assert table.total == 100


class TestClassicalButterfly(QnetTest):
    def test_truth_table(self):
        for x in (0, 1):
            for y in (0, 1):
                assert classical_butterfly(x, y) == (x, y)

    def test_not_bits(self):
        with pytest.raises(QnetError):
            classical_butterfly(2, 0)


MONOTONE_GRID = [0.0, 0.01, 0.02, 0.03, 0.04, 0.05]


def _transpiled(p):
    return p.with_circuit(transpile_cz(p.circuit))


def _instances():
    return dict(
        (
            ("swapping", build_swapping()),
            ("swapping-ff", build_swapping(mode=Mode.FEED_FORWARD)),
            ("linear-4", build_linear_mbqc(4)),
            ("linear-5", build_linear_mbqc(5)),
            ("linear-4-ff", build_linear_mbqc(4, mode=Mode.FEED_FORWARD)),
            ("mqnc", build_mqnc()),
            ("mqnc-ff", build_mqnc(mode=Mode.FEED_FORWARD)),
            ("mqnc-transpiled", _transpiled(build_mqnc())),
            ("linear-4-transpiled", _transpiled(build_linear_mbqc(4))),
        )
    )


class TestProtocolProperties(QnetTest):
    def test_fidelity_non_increasing(self):
        for name, p in _instances().items():
            runs = [run_instance(p, NoiseModel(e)) for e in MONOTONE_GRID]
            for pair in p.pairs:
                with self.subTest(protocol=name, pair=pair.label):
                    values = [fidelity(run.pair_state(pair), pair.target) for run in runs]
                    assert values[0] == pytest.approx(1, abs=1e-9)
                    assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))

    def test_modes_share_branch_states(self):
        model = NoiseModel(0.02)
        for build in (build_swapping, lambda **kw: build_linear_mbqc(5, **kw), build_mqnc):
            ff = build(mode=Mode.FEED_FORWARD)
            _, ffTable = run_density(instrument(ff.circuit, model))
            ffState = run_instance(ff, model).state
            mixture = None
            for pattern, branch in ffTable.items():
                ps = build(mode=Mode.POST_SELECT, pattern=pattern)
                _, psTable = run_density(instrument(ps.circuit, model))
                with self.subTest(protocol=ps.kind.value, pattern=pattern):
                    assert psTable[pattern].probability == pytest.approx(branch.probability, abs=1e-12)
                    assert np.allclose(psTable[pattern].state.matrix, branch.state.matrix, atol=1e-10)
                run = run_instance(ps, model)
                assert run.acceptance == pytest.approx(branch.probability, abs=1e-12)
                part = run.state.scaled(run.acceptance)
                mixture = part if mixture is None else mixture + part
            assert np.allclose(mixture.matrix, ffState.matrix, atol=1e-9)

    def test_oracle_outcomes_all_corrected(self):
        for build in (lambda: build_linear_mbqc(4), lambda: build_linear_mbqc(5), build_mqnc):
            p = build()
            n = len(p.circuit.measurements)
            for bits in itertools.product((0, 1), repeat=n):
                pattern = "".join(str(b) for b in bits)
                g = oracle_state(p, bits)
                index = dict((v, i) for i, v in enumerate(g.vertices))
                state = g.to_statevector()
                for q, u in byproduct_correction(p, pattern).unitaries.items():
                    state = apply_unitary(state, u, (index[q],))
                with self.subTest(protocol=p.kind.value, pattern=pattern):
                    for pair in p.pairs:
                        keep = [index[q] for q in pair.qubits]
                        assert fidelity(partial_trace(state, keep), pair.target) == pytest.approx(1, abs=1e-9)


class TestEmbeddability(QnetTest):
    def test_butterfly_needs_four_cycles(self):
        assert find_embedding(PRESETS["poughkeepsie"], build_mqnc()) is None

    def test_butterfly_on_tokyo(self):
        embedding = find_embedding(TOKYO, build_mqnc())

        assert embedding is not None
        assert validate_embedding(TOKYO, build_mqnc(embedding=embedding)).ok

    def test_chain_on_poughkeepsie(self):
        device = PRESETS["poughkeepsie"]
        embedding = find_embedding(device, build_linear_mbqc(5))

        assert device.is_path(embedding)
        assert build_linear_mbqc(5, embedding=(5, 0, 1, 2, 3), topology=device).width == 5

    def test_interaction_graph(self):
        g = interaction_graph(build_swapping().circuit)

        assert sorted(g.nodes) == [0, 1, 2, 3]
        assert sorted(tuple(sorted(e)) for e in g.edges) == [(0, 1), (1, 2), (2, 3)]
