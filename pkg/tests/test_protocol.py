import math

import numpy as np
import pytest

from qptycho import (
    ProjectorId,
    ReadoutNoiseModel,
    StateVector,
    UnitarySpec,
    apply_pauli_projector,
    basis_state,
    circuit_settings,
    dataset_to_csv,
    exact_joint_distribution,
    generate_dataset,
    load_dataset,
    named_state,
    normalize_dataset,
    sample_shots,
    save_dataset,
)
from qptycho.protocol import CircuitRecord, PtychoDataset

from oracles import dense_joint_distribution, dense_qft, haar_state

QFT = UnitarySpec.qft()


class TestExactJointDistribution:
    def test_zero_state_z_circuit(self):
        p = exact_joint_distribution(basis_state(1, 0), "z", 0, QFT)
        np.testing.assert_allclose(p, [0.5, 0.5, 0, 0], atol=1e-15)

    def test_projector_eigenstate_keeps_one_block(self):
        plus = StateVector(1, np.array([1, 1]) / math.sqrt(2))
        p = exact_joint_distribution(plus, "x", 0, UnitarySpec.hadamard())
        assert p[:2].sum() == pytest.approx(1.0, abs=1e-12)
        assert p[2:].sum() == pytest.approx(0.0, abs=1e-12)

    def test_block_sums_are_outcome_probabilities(self):
        rng = np.random.default_rng(71)
        for n in (1, 2, 3):
            state = StateVector(n, haar_state(n, rng))
            for axis, q in circuit_settings(n):
                p = exact_joint_distribution(state, axis, q, QFT)
                assert p.sum() == pytest.approx(1.0, abs=1e-10)
                for s_index, sign in enumerate((1, -1)):
                    branch = apply_pauli_projector(state, ProjectorId(axis, q, sign))
                    block = p[s_index << n : (s_index + 1) << n].sum()
                    assert block == pytest.approx(branch.norm() ** 2, abs=1e-10)

    def test_matches_dense_pipeline(self):
        rng = np.random.default_rng(72)
        for n in (1, 2, 3):
            mat = dense_qft(n)
            state = StateVector(n, haar_state(n, rng))
            for axis, q in circuit_settings(n):
                p = exact_joint_distribution(state, axis, q, QFT)
                for s_index, sign in enumerate((1, -1)):
                    expected = dense_joint_distribution(
                        state.amps, axis, sign, q, mat, n
                    )
                    np.testing.assert_allclose(
                        p[s_index << n : (s_index + 1) << n], expected, atol=1e-12
                    )

    def test_requires_normalized_state(self):
        with pytest.raises(ValueError):
            exact_joint_distribution(
                StateVector(1, np.array([1.0, 1.0])), "z", 0, QFT
            )


class TestSampleShots:
    def test_degenerate_distribution(self):
        counts = sample_shots(np.array([1.0, 0.0]), 100, rng=0)
        np.testing.assert_array_equal(counts, [100, 0])

    def test_counts_sum_to_shots(self):
        rng = np.random.default_rng(73)
        p = rng.random(16)
        p /= p.sum()
        assert sample_shots(p, 12345, rng).sum() == 12345

    def test_binomial_concentration(self):
        counts = sample_shots(np.array([0.5, 0.5]), 100_000, rng=74)
        sigma = math.sqrt(100_000 * 0.25)
        assert abs(counts[0] - 50_000) < 5 * sigma

    def test_seed_determinism(self):
        p = np.array([0.25, 0.25, 0.5])
        a = sample_shots(p, 1000, rng=75)
        b = sample_shots(p, 1000, rng=75)
        np.testing.assert_array_equal(a, b)

    def test_input_validation(self):
        with pytest.raises(ValueError):
            sample_shots(np.array([1.1, -0.1]), 10)
        with pytest.raises(ValueError):
            sample_shots(np.array([0.4, 0.4]), 10)
        with pytest.raises(ValueError):
            sample_shots(np.array([1.0, 0.0]), 0)


class TestGenerateDataset:
    def test_record_count_and_length(self):
        dataset = generate_dataset(named_state("ghz", 2), QFT, 100, seed=76)
        assert len(dataset.records) == 6
        assert all(rec.counts.shape == (8,) for rec in dataset.records)

    def test_exact_sentinel_stores_probabilities(self):
        state = named_state("w", 3)
        dataset = generate_dataset(state, QFT, 0)
        for rec in dataset.records:
            expected = exact_joint_distribution(state, rec.axis, rec.qubit, QFT)
            np.testing.assert_array_equal(rec.counts, expected)

    def test_counts_sum_to_shots(self):
        dataset = generate_dataset(named_state("ghz", 3), QFT, 4096, seed=77)
        for rec in dataset.records:
            assert rec.counts.sum() == 4096

    def test_identity_noise_equals_noiseless(self):
        state = named_state("psi5", 2)
        noiseless = generate_dataset(state, QFT, 1000, seed=78)
        with_identity = generate_dataset(
            state, QFT, 1000, noise=ReadoutNoiseModel.identity(3), seed=78
        )
        for a, b in zip(noiseless.records, with_identity.records):
            np.testing.assert_array_equal(a.counts, b.counts)

    def test_seed_reproducibility(self):
        state = named_state("w", 3)
        a = generate_dataset(state, QFT, 500, seed=79)
        b = generate_dataset(state, QFT, 500, seed=79)
        for ra, rb in zip(a.records, b.records):
            np.testing.assert_array_equal(ra.counts, rb.counts)

    def test_noise_model_size_checked(self):
        with pytest.raises(ValueError):
            generate_dataset(
                named_state("ghz", 2), QFT, 10, noise=ReadoutNoiseModel.identity(2)
            )


class TestNormalizeDataset:
    def test_joint_normalization(self):
        counts = np.array([50_000.0, 50_000.0, 0.0, 0.0])
        dataset = PtychoDataset(
            n=1,
            unitary=QFT,
            shots_per_circuit=100_000,
            records=[CircuitRecord(axis, 0, counts) for axis in "xyz"],
        )
        targets = normalize_dataset(dataset)
        np.testing.assert_allclose(
            targets[ProjectorId("x", 0, 1)], np.sqrt([0.5, 0.5])
        )
        np.testing.assert_allclose(targets[ProjectorId("x", 0, -1)], [0, 0])

    def test_exact_path_sums_to_one(self):
        state = named_state("ghz", 2)
        targets = normalize_dataset(generate_dataset(state, QFT, 0))
        for axis, q in circuit_settings(2):
            total = sum(
                (targets[ProjectorId(axis, q, s)] ** 2).sum() for s in (1, -1)
            )
            assert total == pytest.approx(1.0, abs=1e-10)

    def test_negative_entries_clip_to_zero(self):
        counts = np.array([1000.0, -3.0, 2.0, 1.0])
        dataset = PtychoDataset(
            n=1,
            unitary=QFT,
            shots_per_circuit=1000,
            records=[CircuitRecord(axis, 0, counts.copy()) for axis in "xyz"],
            mitigated=True,
        )
        targets = normalize_dataset(dataset)
        assert targets[ProjectorId("x", 0, 1)][1] == 0.0

    def test_missing_records_rejected(self):
        dataset = PtychoDataset(n=2, unitary=QFT, shots_per_circuit=10, records=[])
        with pytest.raises(ValueError):
            normalize_dataset(dataset)


class TestDatasetValidation:
    def test_noninteger_unmitigated_counts_rejected(self):
        counts = np.full(4, 2.5)
        dataset = PtychoDataset(
            n=1,
            unitary=QFT,
            shots_per_circuit=10,
            records=[CircuitRecord(axis, 0, counts) for axis in "xyz"],
        )
        with pytest.raises(ValueError):
            dataset.validate()

    def test_mitigated_sum_tolerance(self):
        counts = np.array([600.0, 500.0, -50.0, -49.0])
        dataset = PtychoDataset(
            n=1,
            unitary=QFT,
            shots_per_circuit=1000,
            records=[CircuitRecord(axis, 0, counts) for axis in "xyz"],
            mitigated=True,
        )
        with pytest.raises(ValueError):
            dataset.validate()


class TestDatasetFiles:
    def test_json_round_trip(self, tmp_path):
        dataset = generate_dataset(
            named_state("psi3", 2),
            UnitarySpec.aqft(2),
            2048,
            noise=ReadoutNoiseModel.symmetric(3, 0.025),
            seed=80,
        )
        path = tmp_path / "data.json"
        save_dataset(dataset, path)
        loaded = load_dataset(path)
        assert loaded.n == dataset.n
        assert loaded.unitary == dataset.unitary
        assert loaded.shots_per_circuit == 2048
        assert loaded.noise_model_id == "symmetric-0.025"
        assert loaded.seed == 80
        for ra, rb in zip(loaded.records, dataset.records):
            np.testing.assert_array_equal(ra.counts, rb.counts)

    def test_csv_export(self, tmp_path):
        dataset = generate_dataset(named_state("ghz", 2), QFT, 64, seed=81)
        path = tmp_path / "data.csv"
        dataset_to_csv(dataset, path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "xi,q,s,j,count"
        assert len(lines) == 1 + 6 * 8
        first = lines[1].split(",")
        assert first[0] == "x" and first[1] == "0" and first[2] == "0" and first[3] == "0"
