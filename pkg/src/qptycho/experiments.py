"""Scripted simulation studies with CSV output.

Three harnesses: a fidelity sweep over qubit counts and shot budgets for a
random state ensemble, a study of the approximate-transform degree on the
fixed benchmark states, and a wall-clock benchmark of the reconstruction
engine. Every cell derives its RNG seeds from the master seed and a
structured key, so re-runs (including partial ones) are bit-identical.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace

import numpy as np

from .pie import PieConfig, pie_run
from .protocol import generate_dataset
from .seeding import derive_seed
from .stateprep import random_arbitrary, random_separable, table_states
from .transforms import UnitarySpec

MAX_QUBITS = 16

ENSEMBLES = ("separable", "arbitrary", "table")


@dataclass(frozen=True)
class SweepConfig:
    """Grid description for :func:`run_fidelity_sweep`."""

    n_values: tuple
    ensemble: str = "arbitrary"
    states_per_n: int = 20
    runs_per_state: int = 20
    shots: tuple = (2**13,)
    unitary_family: str = "qft"
    aqft_m: int | None = None
    pie: PieConfig = field(default_factory=lambda: PieConfig(delta_beta=0.1))
    master_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        object.__setattr__(self, "shots", tuple(int(s) for s in self.shots))
        if self.ensemble not in ENSEMBLES:
            raise ValueError(f"ensemble must be one of {ENSEMBLES}, got {self.ensemble!r}")
        if self.states_per_n < 1 or self.runs_per_state < 1:
            raise ValueError("states_per_n and runs_per_state must be >= 1")
        if not self.n_values:
            raise ValueError("n_values must be non-empty")
        if any(not 1 <= n <= MAX_QUBITS for n in self.n_values):
            raise ValueError(f"qubit counts must be within 1..{MAX_QUBITS}")
        if any(s < 0 for s in self.shots):
            raise ValueError("shot counts must be >= 0 (0 means exact)")
        if self.unitary_family not in ("qft", "aqft", "hadamard", "separable"):
            raise ValueError(f"unknown unitary family {self.unitary_family!r}")
        if self.unitary_family == "aqft" and (self.aqft_m is None or self.aqft_m < 1):
            raise ValueError("aqft family needs aqft_m >= 1")


def _draw_states(cfg: SweepConfig, n: int):
    if cfg.ensemble == "table":
        return table_states(n)
    draw = random_separable if cfg.ensemble == "separable" else random_arbitrary
    return [
        (f"{cfg.ensemble}-{idx}", draw(n, derive_seed(cfg.master_seed, "state", n, idx)))
        for idx in range(cfg.states_per_n)
    ]


def _resolve_unitary(cfg: SweepConfig, n: int, state_idx: int) -> UnitarySpec:
    if cfg.unitary_family == "qft":
        return UnitarySpec.qft()
    if cfg.unitary_family == "aqft":
        return UnitarySpec.aqft(cfg.aqft_m)
    if cfg.unitary_family == "hadamard":
        return UnitarySpec.hadamard()
    # A fresh random separable basis per state, as in the measurement studies.
    return UnitarySpec.random_separable(
        n, derive_seed(cfg.master_seed, "unitary", n, state_idx)
    )


def run_fidelity_sweep(cfg: SweepConfig):
    """Mean/std of reconstruction fidelity per (n, shots) grid cell.

    For each state the engine runs ``runs_per_state`` times from distinct
    starting guesses and the fidelities are averaged; the returned mean and
    sample standard deviation are then taken across states. Rows are
    ``(n, shots, mean_fidelity, std_fidelity)``.
    """
    rows = []
    for n in cfg.n_values:
        states = _draw_states(cfg, n)
        for shots in cfg.shots:
            state_means = []
            for idx, (tag, state) in enumerate(states):
                unitary = _resolve_unitary(cfg, n, idx)
                dataset = generate_dataset(
                    state,
                    unitary,
                    shots,
                    seed=derive_seed(cfg.master_seed, "data", n, idx, shots),
                )
                fids = []
                for run in range(cfg.runs_per_state):
                    pie_cfg = replace(
                        cfg.pie,
                        init_seed=derive_seed(
                            cfg.master_seed, "init", n, idx, shots, run
                        ),
                    )
                    _, trace = pie_run(dataset, pie_cfg, reference=state)
                    fids.append(trace.final_fidelity())
                state_means.append(float(np.mean(fids)))
            mean = float(np.mean(state_means))
            std = float(np.std(state_means, ddof=1)) if len(state_means) > 1 else 0.0
            rows.append((n, shots, mean, std))
    return rows


def run_aqft_study(
    n_values,
    m_values,
    shots: int = 20_000,
    runs_per_state: int = 10,
    pie: PieConfig | None = None,
    master_seed: int = 0,
):
    """Benchmark-state fidelities under the degree-m approximate transform.

    Rows are ``(state_tag, n, m, mean_fidelity, std_fidelity)`` with mean and
    sample std across ``runs_per_state`` engine runs on one dataset of
    ``shots`` shots per circuit. Degrees larger than n are skipped.
    """
    pie = pie if pie is not None else PieConfig(delta_beta=0.04)
    rows = []
    for n in n_values:
        if not 1 <= n <= MAX_QUBITS:
            raise ValueError(f"qubit counts must be within 1..{MAX_QUBITS}")
        for tag, state in table_states(n):
            for m in m_values:
                if m > n:
                    continue
                dataset = generate_dataset(
                    state,
                    UnitarySpec.aqft(m),
                    shots,
                    seed=derive_seed(master_seed, "aqft-data", n, tag, m),
                )
                fids = []
                for run in range(runs_per_state):
                    pie_cfg = replace(
                        pie,
                        init_seed=derive_seed(master_seed, "aqft-init", n, tag, m, run),
                    )
                    _, trace = pie_run(dataset, pie_cfg, reference=state)
                    fids.append(trace.final_fidelity())
                mean = float(np.mean(fids))
                std = float(np.std(fids, ddof=1)) if len(fids) > 1 else 0.0
                rows.append((tag, n, m, mean, std))
    return rows


def run_timing_bench(
    n_values,
    iterations: int = 20,
    repeats: int = 10,
    shots: int = 2**13,
    master_seed: int = 0,
):
    """Wall-clock cost of the reconstruction engine itself.

    Times ``pie_run`` on a pre-generated dataset (generation excluded) for a
    random state per qubit count. Rows are ``(n, mean_seconds, std_seconds)``
    over ``repeats`` runs.
    """
    if repeats < 2:
        raise ValueError("repeats must be >= 2 to report a spread")
    rows = []
    for n in n_values:
        state = random_arbitrary(n, derive_seed(master_seed, "bench-state", n))
        dataset = generate_dataset(
            state,
            UnitarySpec.qft(),
            shots,
            seed=derive_seed(master_seed, "bench-data", n),
        )
        pie_cfg = PieConfig(delta_beta=0.1, iterations=iterations)
        times = []
        for rep in range(repeats):
            cfg = replace(pie_cfg, init_seed=derive_seed(master_seed, "bench-init", n, rep))
            _, trace = pie_run(dataset, cfg)
            times.append(trace.total_seconds)
        rows.append((n, float(np.mean(times)), float(np.std(times, ddof=1))))
    return rows


def write_csv(path, header, rows):
    """Write rows with a mandatory header; floats keep full repr precision."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow(list(row))


SWEEP_HEADER = ("n", "shots", "mean_fidelity", "std_fidelity")
AQFT_HEADER = ("state", "n", "m", "mean_fidelity", "std_fidelity")
BENCH_HEADER = ("n", "mean_seconds", "std_seconds")
