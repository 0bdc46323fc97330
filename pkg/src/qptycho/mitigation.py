"""Readout-error model and calibration-matrix mitigation.

Readout noise is modeled per measured bit by a 2x2 column-stochastic
confusion matrix C with C[i][j] = p(read i | prepared j); independent bits
combine as a tensor product. Mitigation estimates those matrices from
simulated calibration circuits and applies the inverse of the global matrix
to measured count vectors via a linear solve.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .seeding import as_generator

#: Refuse to mitigate through a calibration matrix worse-conditioned than this.
MAX_CONDITION_NUMBER = 1e12


def _check_confusion(mat: np.ndarray):
    if mat.shape != (2, 2):
        raise ValueError(f"confusion matrix must be 2x2, got {mat.shape}")
    if np.any(mat < -1e-12) or np.any(mat > 1 + 1e-12):
        raise ValueError("confusion matrix entries must lie in [0, 1]")
    if not np.allclose(mat.sum(axis=0), 1.0, atol=1e-9):
        raise ValueError("confusion matrix columns must each sum to 1")


@dataclass(frozen=True)
class ReadoutNoiseModel:
    """Independent per-bit readout channel over k measured bits.

    ``bit_confusions[i]`` acts on the outcome bit of weight 2**i; for the
    ptychographic layout bits 0..n-1 are the final register and bit n is the
    intermediate measurement.
    """

    bit_confusions: tuple
    label: str | None = None

    def __post_init__(self):
        mats = []
        for mat in self.bit_confusions:
            mat = np.array(mat, dtype=np.float64)
            _check_confusion(mat)
            mat.flags.writeable = False
            mats.append(mat)
        if not mats:
            raise ValueError("noise model needs at least one bit")
        object.__setattr__(self, "bit_confusions", tuple(mats))

    @property
    def num_bits(self) -> int:
        return len(self.bit_confusions)

    @classmethod
    def identity(cls, num_bits: int, label: str | None = None) -> "ReadoutNoiseModel":
        return cls(tuple(np.eye(2) for _ in range(num_bits)), label=label or "identity")

    @classmethod
    def symmetric(cls, num_bits: int, flip_prob: float, label: str | None = None):
        """Same symmetric bit-flip probability on every measured bit."""
        if not 0.0 <= flip_prob <= 1.0:
            raise ValueError(f"flip probability must be in [0, 1], got {flip_prob}")
        c = np.array([[1 - flip_prob, flip_prob], [flip_prob, 1 - flip_prob]])
        return cls(
            tuple(c for _ in range(num_bits)),
            label=label or f"symmetric-{flip_prob:g}",
        )

    @classmethod
    def from_flip_probabilities(cls, p_read1_given0, p_read0_given1, label=None):
        """Asymmetric per-bit model from p(1|0) and p(0|1) lists (bit 0 first)."""
        if len(p_read1_given0) != len(p_read0_given1):
            raise ValueError("flip probability lists must have equal length")
        mats = [
            np.array([[1 - e10, e01], [e10, 1 - e01]])
            for e10, e01 in zip(p_read1_given0, p_read0_given1)
        ]
        return cls(tuple(mats), label=label)

    def subset(self, bit_indices) -> "ReadoutNoiseModel":
        """Model restricted to the given bits, re-indexed from 0."""
        return ReadoutNoiseModel(
            tuple(self.bit_confusions[i] for i in bit_indices), label=self.label
        )


def corrupt_counts(p: np.ndarray, model: ReadoutNoiseModel) -> np.ndarray:
    """Push a distribution (or count vector) through the independent-bit channel."""
    p = np.asarray(p, dtype=np.float64)
    k = model.num_bits
    if p.shape != (1 << k,):
        raise ValueError(f"expected a length-{1 << k} vector for {k} bits, got {p.shape}")
    arr = p.reshape((2,) * k)  # axis 0 holds the most significant bit
    for i, c in enumerate(model.bit_confusions):
        axis = k - 1 - i
        arr = np.moveaxis(np.tensordot(c, arr, axes=([1], [axis])), 0, axis)
    return arr.reshape(-1)


@dataclass
class CalibrationMatrix:
    """Estimated confusion matrices for the protocol's n+1 measured bits.

    ``intermediate`` is the 2x2 matrix of the mid-circuit bit, ``register``
    the 2^n x 2^n matrix of the final register; the mitigation step uses
    their tensor product with the intermediate bit most significant.
    """

    intermediate: np.ndarray
    register: np.ndarray
    provenance: dict | None = None

    def __post_init__(self):
        self.intermediate = np.array(self.intermediate, dtype=np.float64)
        self.register = np.array(self.register, dtype=np.float64)
        if self.intermediate.shape != (2, 2):
            raise ValueError("intermediate calibration matrix must be 2x2")
        dim = self.register.shape[0]
        if self.register.shape != (dim, dim) or dim < 2 or dim & (dim - 1):
            raise ValueError("register calibration matrix must be square with 2^n rows")

    @property
    def n(self) -> int:
        return int(self.register.shape[0]).bit_length() - 1

    @cached_property
    def global_matrix(self) -> np.ndarray:
        return np.kron(self.intermediate, self.register)

    @cached_property
    def condition_number(self) -> float:
        return float(np.linalg.cond(self.global_matrix))


def build_calibration(n: int, model: ReadoutNoiseModel, shots: int, seed=None) -> CalibrationMatrix:
    """Estimate calibration matrices by simulating the basis-state circuits.

    Each of the 2^n register circuits (and the 2 intermediate-bit circuits)
    prepares a basis state, corrupts it with the model, and samples ``shots``
    outcomes; the normalized histograms form matrix columns. ``shots = 0``
    stores the exact channel columns instead.
    """
    if model.num_bits != n + 1:
        raise ValueError(f"model covers {model.num_bits} bits, expected {n + 1}")
    if shots < 0:
        raise ValueError("shots must be >= 0")
    ss = np.random.SeedSequence(seed)
    children = iter(ss.spawn((1 << n) + 2))

    def estimated_column(exact: np.ndarray) -> np.ndarray:
        if shots == 0:
            return exact
        rng = as_generator(next(children))
        counts = rng.multinomial(shots, exact / exact.sum())
        if counts.sum() == 0:
            raise RuntimeError("calibration circuit produced no counts")
        return counts / shots

    register_model = model.subset(range(n))
    dim = 1 << n
    register = np.empty((dim, dim))
    for j in range(dim):
        delta = np.zeros(dim)
        delta[j] = 1.0
        register[:, j] = estimated_column(corrupt_counts(delta, register_model))

    intermediate_model = model.subset([n])
    intermediate = np.empty((2, 2))
    for j in range(2):
        delta = np.zeros(2)
        delta[j] = 1.0
        intermediate[:, j] = estimated_column(corrupt_counts(delta, intermediate_model))

    provenance = {
        "model_id": model.label,
        "shots": shots,
        "seed": None if ss.entropy is None else int(ss.entropy),
    }
    return CalibrationMatrix(intermediate, register, provenance)


def mitigate(record: np.ndarray, cal: CalibrationMatrix) -> np.ndarray:
    """Invert the readout channel on one joint count vector.

    Solves M x = record for the global calibration matrix M; the result may
    contain negative entries and preserves the total count.
    """
    record = np.asarray(record, dtype=np.float64)
    m = cal.global_matrix
    if record.shape != (m.shape[0],):
        raise ValueError(f"record length {record.shape} does not match calibration {m.shape}")
    if not np.isfinite(cal.condition_number) or cal.condition_number > MAX_CONDITION_NUMBER:
        raise np.linalg.LinAlgError(
            f"calibration matrix condition number {cal.condition_number:.3g} exceeds "
            f"{MAX_CONDITION_NUMBER:g}; re-calibrate with more shots"
        )
    return np.linalg.solve(m, record)


# ---------------------------------------------------------------------------
# File format: {"n", "M1": 4 entries row-major, "Mn": row-major, "provenance"}
# ---------------------------------------------------------------------------

def save_calibration(cal: CalibrationMatrix, path):
    doc = {
        "n": cal.n,
        "M1": [float(x) for x in cal.intermediate.ravel()],
        "Mn": [float(x) for x in cal.register.ravel()],
        "provenance": cal.provenance,
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def load_calibration(path) -> CalibrationMatrix:
    with open(path) as fh:
        doc = json.load(fh)
    n = doc["n"]
    intermediate = np.array(doc["M1"]).reshape(2, 2)
    register = np.array(doc["Mn"]).reshape(1 << n, 1 << n)
    return CalibrationMatrix(intermediate, register, doc.get("provenance"))
