import numpy as np
import pytest

from qptycho import PieConfig, SweepConfig, run_aqft_study, run_fidelity_sweep, run_timing_bench
from qptycho.experiments import AQFT_HEADER, SWEEP_HEADER, write_csv


def small_sweep(**overrides):
    base = dict(
        n_values=(2, 3),
        ensemble="arbitrary",
        states_per_n=3,
        runs_per_state=2,
        shots=(0,),
        pie=PieConfig(delta_beta=0.1),
        master_seed=7,
    )
    base.update(overrides)
    return SweepConfig(**base)


class TestSweepConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            small_sweep(ensemble="weird")
        with pytest.raises(ValueError):
            small_sweep(states_per_n=0)
        with pytest.raises(ValueError):
            small_sweep(n_values=(20,))
        with pytest.raises(ValueError):
            small_sweep(unitary_family="aqft")
        with pytest.raises(ValueError):
            small_sweep(shots=(-1,))


class TestFidelitySweep:
    def test_exact_data_gives_near_perfect_fidelity(self):
        rows = run_fidelity_sweep(small_sweep())
        assert len(rows) == 2
        for n, shots, mean, std in rows:
            assert shots == 0
            assert mean > 0.9999
            assert std < 1e-4

    def test_row_count_matches_grid(self):
        rows = run_fidelity_sweep(small_sweep(shots=(0, 1024), n_values=(2,)))
        assert [(r[0], r[1]) for r in rows] == [(2, 0), (2, 1024)]

    def test_bit_identical_rerun(self, tmp_path):
        cfg = small_sweep(shots=(512,))
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        write_csv(a, SWEEP_HEADER, run_fidelity_sweep(cfg))
        write_csv(b, SWEEP_HEADER, run_fidelity_sweep(cfg))
        assert a.read_bytes() == b.read_bytes()

    def test_table_ensemble_uses_benchmark_states(self):
        rows = run_fidelity_sweep(small_sweep(ensemble="table", n_values=(2,)))
        assert len(rows) == 1
        assert rows[0][2] > 0.9999

    def test_separable_family_draws_per_state_unitaries(self):
        rows = run_fidelity_sweep(
            small_sweep(ensemble="separable", unitary_family="separable", n_values=(2,))
        )
        assert rows[0][2] > 0.999


class TestAqftStudy:
    def test_rows_and_degrees(self):
        rows = run_aqft_study(
            (3,), (2, 3, 4), shots=0, runs_per_state=2, master_seed=1
        )
        # degree 4 is skipped at n=3; 5 benchmark states x 2 degrees
        assert len(rows) == 10
        assert {(r[1], r[2]) for r in rows} == {(3, 2), (3, 3)}
        for tag, n, m, mean, std in rows:
            assert mean > 0.999

    def test_reproducible(self):
        a = run_aqft_study((3,), (2,), shots=1024, runs_per_state=2, master_seed=2)
        b = run_aqft_study((3,), (2,), shots=1024, runs_per_state=2, master_seed=2)
        assert a == b


class TestTimingBench:
    def test_rows_and_positive_times(self):
        rows = run_timing_bench((2, 4), iterations=5, repeats=3, shots=256)
        assert [r[0] for r in rows] == [2, 4]
        for n, mean, std in rows:
            assert mean > 0.0
            assert std >= 0.0

    def test_cost_grows_with_qubits(self):
        rows = run_timing_bench((2, 6), iterations=5, repeats=3, shots=256)
        assert rows[1][1] > rows[0][1]


class TestCsvWriter:
    def test_header_and_rows(self, tmp_path):
        path = tmp_path / "out.csv"
        write_csv(path, AQFT_HEADER, [("ghz", 3, 2, 0.99, 0.001)])
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "state,n,m,mean_fidelity,std_fidelity"
        assert lines[1] == "ghz,3,2,0.99,0.001"
