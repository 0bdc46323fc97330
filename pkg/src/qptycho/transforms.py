"""Final-measurement unitaries and their adjoints.

Four families are supported: the full Fourier transform on basis indices,
its degree-m approximation, the Hadamard transform, and per-qubit random
unitaries. All are defined as index-space sums, so there is no swap or
bit-reversal ambiguity; fast realizations (FFT, per-qubit kernels) are used
where they agree with the dense definition.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .states import StateVector, _apply_single_qubit_amps

KINDS = ("qft", "aqft", "hadamard", "separable")

_H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2)


def rotation_z(angle: float) -> np.ndarray:
    """diag(e^{-ia/2}, e^{+ia/2})."""
    return np.array(
        [[np.exp(-0.5j * angle), 0.0], [0.0, np.exp(0.5j * angle)]], dtype=np.complex128
    )


def rotation_y(angle: float) -> np.ndarray:
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def u3_matrix(theta: float, phi: float, lam: float) -> np.ndarray:
    """General single-qubit unitary e^{i(phi+lam)/2} Rz(phi) Ry(theta) Rz(lam).

    The phase convention puts a real cos(theta/2) in the top-left entry:
    [[c, -s e^{i lam}], [s e^{i phi}, c e^{i(phi+lam)}]].
    """
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [
            [c, -s * np.exp(1j * lam)],
            [s * np.exp(1j * phi), c * np.exp(1j * (phi + lam))],
        ],
        dtype=np.complex128,
    )


# ---------------------------------------------------------------------------
# Kernels on raw amplitude arrays
# ---------------------------------------------------------------------------

def _qft_amps(amps: np.ndarray, adjoint: bool) -> np.ndarray:
    # Forward is out_j = 2^{-n/2} sum_k e^{+2 pi i jk / 2^n} in_k, which is the
    # orthonormal inverse DFT; the FFT realizes it in O(n 2^n).
    if adjoint:
        return np.fft.fft(amps, norm="ortho")
    return np.fft.ifft(amps, norm="ortho")


@lru_cache(maxsize=32)
def aqft_matrix(n: int, m: int) -> np.ndarray:
    """Dense degree-m approximate transform.

    Entry (j, k) is 2^{-n/2} e^{2 pi i Y_jk / 2^n} with
    Y_jk = sum over bit pairs (a, b), n-m <= a+b <= n-1, of j_a k_b 2^{a+b}.
    Exponents are reduced mod 2^n before exponentiation so that m = n is
    bit-for-bit the plain Fourier matrix. Cached, frozen, O(4^n) memory.
    """
    if not 1 <= m <= n:
        raise ValueError(f"approximation degree must satisfy 1 <= m <= n, got m={m}, n={n}")
    dim = 1 << n
    bits = (np.arange(dim)[:, None] >> np.arange(n)[None, :]) & 1  # [dim, n]
    y = np.zeros((dim, dim), dtype=np.int64)
    for a in range(n):
        for b in range(max(0, n - m - a), n - a):
            y += np.outer(bits[:, a], bits[:, b]) << (a + b)
    mat = np.exp((2j * np.pi / dim) * (y % dim)) / math.sqrt(dim)
    mat.flags.writeable = False
    return mat


def _aqft_amps(amps: np.ndarray, n: int, m: int, adjoint: bool) -> np.ndarray:
    mat = aqft_matrix(n, m)
    if adjoint:
        # conj(mat).T @ x == conj(mat.T @ conj(x)); mat is symmetric in (j,k)
        # only for m = n, so take the honest conjugate transpose product.
        return mat.conj().T @ amps
    return mat @ amps


def _hadamard_amps(amps: np.ndarray, n: int) -> np.ndarray:
    out = amps
    for q in range(n):
        out = _apply_single_qubit_amps(out, q, _H)
    return out


def _separable_amps(amps: np.ndarray, n: int, angles, adjoint: bool) -> np.ndarray:
    out = amps
    for q, (theta, phi, lam) in enumerate(angles):
        g = u3_matrix(theta, phi, lam)
        if adjoint:
            g = g.conj().T
        out = _apply_single_qubit_amps(out, q, g)
    return out


# ---------------------------------------------------------------------------
# StateVector-level operations
# ---------------------------------------------------------------------------

def qft_apply(state: StateVector, adjoint: bool = False) -> StateVector:
    """Fourier transform on basis indices; ``adjoint`` flips the phase sign."""
    return StateVector(state.n, _qft_amps(state.amps, adjoint))


def aqft_apply(state: StateVector, m: int, adjoint: bool = False) -> StateVector:
    """Degree-m approximate Fourier transform; m = n is exact."""
    return StateVector(state.n, _aqft_amps(state.amps, state.n, m, adjoint))


def hadamard_apply(state: StateVector, adjoint: bool = False) -> StateVector:
    """H on every qubit (self-adjoint, so ``adjoint`` is accepted and ignored)."""
    del adjoint
    return StateVector(state.n, _hadamard_amps(state.amps, state.n))


def separable_apply(state: StateVector, angles, adjoint: bool = False) -> StateVector:
    """Apply the per-qubit unitary u3(theta_l, phi_l, lam_l) to qubit l for all l."""
    angles = tuple(angles)
    if len(angles) != state.n:
        raise ValueError(f"expected {state.n} angle triples, got {len(angles)}")
    return StateVector(state.n, _separable_amps(state.amps, state.n, angles, adjoint))


@dataclass(frozen=True)
class UnitarySpec:
    """Which final-measurement unitary a protocol uses.

    ``kind`` is one of "qft", "aqft", "hadamard", "separable". AQFT carries
    its degree ``m``; the separable kind carries one (theta, phi, lam) triple
    per qubit, in radians.
    """

    kind: str
    m: int | None = None
    angles: tuple | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.kind == "aqft":
            if self.m is None or self.m < 1:
                raise ValueError(f"aqft requires an integer degree m >= 1, got {self.m!r}")
        elif self.m is not None:
            raise ValueError(f"degree m is only valid for aqft, not {self.kind!r}")
        if self.kind == "separable":
            if not self.angles:
                raise ValueError("separable requires one angle triple per qubit")
            angles = tuple(tuple(float(a) for a in triple) for triple in self.angles)
            if any(len(triple) != 3 for triple in angles):
                raise ValueError("each separable angle entry must be a (theta, phi, lam) triple")
            object.__setattr__(self, "angles", angles)
        elif self.angles is not None:
            raise ValueError(f"angles are only valid for separable, not {self.kind!r}")

    @classmethod
    def qft(cls) -> "UnitarySpec":
        return cls("qft")

    @classmethod
    def aqft(cls, m: int) -> "UnitarySpec":
        return cls("aqft", m=m)

    @classmethod
    def hadamard(cls) -> "UnitarySpec":
        return cls("hadamard")

    @classmethod
    def separable(cls, angles) -> "UnitarySpec":
        return cls("separable", angles=tuple(tuple(t) for t in angles))

    @classmethod
    def random_separable(cls, n: int, rng) -> "UnitarySpec":
        """Haar-random per-qubit unitaries: cos(theta) uniform, phases uniform."""
        from .seeding import as_generator

        rng = as_generator(rng)
        angles = []
        for _ in range(n):
            theta = math.acos(1.0 - 2.0 * rng.random())
            phi, lam = rng.uniform(0.0, 2.0 * math.pi, size=2)
            angles.append((theta, float(phi), float(lam)))
        return cls.separable(angles)

    def validate_for(self, n: int):
        if self.kind == "aqft" and not self.m <= n:
            raise ValueError(f"aqft degree m={self.m} exceeds qubit count n={n}")
        if self.kind == "separable" and len(self.angles) != n:
            raise ValueError(
                f"separable spec has {len(self.angles)} angle triples but n={n}"
            )

    def apply_amps(self, amps: np.ndarray, n: int, adjoint: bool = False) -> np.ndarray:
        if self.kind == "qft":
            return _qft_amps(amps, adjoint)
        if self.kind == "aqft":
            return _aqft_amps(amps, n, self.m, adjoint)
        if self.kind == "hadamard":
            return _hadamard_amps(amps, n)
        return _separable_amps(amps, n, self.angles, adjoint)

    def apply(self, state: StateVector, adjoint: bool = False) -> StateVector:
        self.validate_for(state.n)
        return StateVector(state.n, self.apply_amps(state.amps, state.n, adjoint))

    def label(self) -> str:
        if self.kind == "aqft":
            return f"aqft:{self.m}"
        return self.kind

    def to_dict(self) -> dict:
        doc = {"kind": self.kind}
        if self.m is not None:
            doc["m"] = self.m
        if self.angles is not None:
            doc["angles"] = [list(t) for t in self.angles]
        return doc

    @classmethod
    def from_dict(cls, data: dict) -> "UnitarySpec":
        angles = data.get("angles")
        return cls(
            data["kind"],
            m=data.get("m"),
            angles=tuple(tuple(t) for t in angles) if angles is not None else None,
        )


def dense_unitary(spec: UnitarySpec, n: int) -> np.ndarray:
    """Materialize the 2^n x 2^n matrix by applying the spec to basis columns."""
    spec.validate_for(n)
    dim = 1 << n
    cols = np.eye(dim, dtype=np.complex128)
    out = np.empty((dim, dim), dtype=np.complex128)
    for k in range(dim):
        out[:, k] = spec.apply_amps(cols[:, k], n)
    return out
