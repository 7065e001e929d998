"""Erasure channel sampling.

Qubits are erased independently with probability p; each erased qubit then
carries an X flip with probability 1/2.  Randomness comes from Philox 4x64
keyed by (seed, stream_id), so trial t of a run can use stream_id = t and the
sample is identical no matter how trials are scheduled across workers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf2 import BinaryVector, mat_vec_mul
from .hgp import HgpCode


@dataclass(frozen=True)
class RngStream:
    """A named counter-based random stream; value type, cheap to copy."""

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        key = np.array([self.seed, self.stream_id], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


@dataclass
class ErasureSample:
    """One channel draw: known erasure, hidden error, observed syndrome."""

    erasure: BinaryVector
    error: BinaryVector
    syndrome: BinaryVector


def sample(code: HgpCode, p: float, rng: RngStream) -> ErasureSample:
    """Draw an erasure pattern at rate p with a uniform X error inside it."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"erasure probability {p} outside [0, 1]")
    gen = rng.generator()
    erased = gen.random(code.N) < p
    flips = gen.random(code.N) < 0.5
    erasure = BinaryVector.from_bits((erased).astype(np.uint8))
    error = BinaryVector.from_bits((erased & flips).astype(np.uint8))
    return ErasureSample(erasure, error, mat_vec_mul(code.h_z, error))


def sample_with_erasure(
    code: HgpCode, erasure: BinaryVector, rng: RngStream
) -> ErasureSample:
    """Fix the erasure pattern, draw only the uniform error inside it."""
    if erasure.n != code.N:
        raise ValueError(f"erasure length {erasure.n} != qubit count {code.N}")
    gen = rng.generator()
    flips = gen.random(code.N) < 0.5
    error = BinaryVector.from_bits((erasure.to_bits().astype(bool) & flips).astype(np.uint8))
    return ErasureSample(erasure.copy(), error, mat_vec_mul(code.h_z, error))
