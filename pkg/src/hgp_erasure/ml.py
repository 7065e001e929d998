"""Maximum-likelihood oracle and trial scoring.

Under erasure noise every syndrome-consistent error inside the erasure is
equally likely, so constrained Gaussian elimination is already optimal.  A
trial succeeds when the residual (correction XOR hidden error) is an X
stabilizer, i.e. lies in the row space of h_x.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .gf2 import BinaryMatrix, BinaryVector, kernel_basis, mat_vec_mul
from .hgp import HgpCode


class VerdictTag(enum.Enum):
    SUCCESS = "success"
    LOGICAL_FAILURE = "logical_failure"
    ABORT = "abort"


@dataclass
class TrialVerdict:
    tag: VerdictTag
    decoder_id: str = ""


class DecoderContractError(RuntimeError):
    """A decoder returned a correction violating its syndrome contract."""


def ml_decode(code: HgpCode, erasure: BinaryVector, s: BinaryVector) -> BinaryVector:
    """Deterministic constrained solve of h_z ê = s inside the erasure.

    Equivalent to gf2.solve_constrained on h_z, but gathers the restricted
    system through the sparse check adjacency, which is much faster at the
    Monte Carlo scale.  Raises on an inconsistent syndrome (impossible for
    channel-generated inputs).
    """
    if erasure.n != code.N:
        raise ValueError(f"erasure length {erasure.n} != qubit count {code.N}")
    if s.n != code.num_z_checks:
        raise ValueError(f"syndrome length {s.n} != Z check count {code.num_z_checks}")
    tz = code.tanner_z
    support = erasure.support()
    all_rows = np.arange(code.num_z_checks, dtype=np.int32)
    status, sol = _kernels.solve_support_csr(
        tz.check_indptr, tz.check_indices, all_rows, s.to_bits(), support
    )
    if status != 0:
        raise ValueError("syndrome is inconsistent with an error inside the erasure")
    return BinaryVector.from_indices(code.N, support[sol == 1])


def classify_residual(
    code: HgpCode,
    correction: BinaryVector,
    hidden_error: BinaryVector,
    decoder_id: str = "",
) -> TrialVerdict:
    """Success iff correction and error differ by an X stabilizer.

    A correction whose syndrome disagrees with the error's is a decoder bug,
    not a logical failure, and raises DecoderContractError.
    """
    if correction.n != code.N or hidden_error.n != code.N:
        raise ValueError("correction and error must have one bit per qubit")
    residual = correction ^ hidden_error
    if not mat_vec_mul(code.h_z, residual).is_zero():
        raise DecoderContractError(
            f"decoder {decoder_id or '<unnamed>'} returned a syndrome-violating correction"
        )
    if code.x_row_span.contains(residual):
        return TrialVerdict(VerdictTag.SUCCESS, decoder_id)
    return TrialVerdict(VerdictTag.LOGICAL_FAILURE, decoder_id)


def erasure_supports_logical(code: HgpCode, erasure: BinaryVector) -> bool:
    """True iff some vector inside the erasure has zero syndrome but is not
    an X stabilizer: the patterns on which even the oracle decoder can fail."""
    if erasure.n != code.N:
        raise ValueError(f"erasure length {erasure.n} != qubit count {code.N}")
    support = erasure.support()
    if support.size == 0:
        return False
    tz = code.tanner_z
    all_rows = np.arange(code.num_z_checks, dtype=np.int32)
    restricted = np.zeros((code.num_z_checks, support.size), dtype=np.uint8)
    for pos, q in enumerate(support.tolist()):
        rows = tz.bit_neighbors(q)
        restricted[rows, pos] = 1
    for k in kernel_basis(BinaryMatrix.from_dense(restricted)):
        lifted = BinaryVector.from_indices(code.N, support[k.to_bits() == 1])
        if not code.x_row_span.contains(lifted):
            return True
    return False
