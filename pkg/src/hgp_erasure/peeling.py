"""Peeling decoders on the quantum Tanner graph.

`peel_quantum` is plain dangling-generator peeling.  `pruned_peel`
additionally breaks stalls by locating an X stabilizer (a product of at most
m generators) supported entirely inside the erasure and un-erasing one of its
qubits: the error or its stabilizer-equivalent acts trivially there, so the
remaining system stays solvable.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .gf2 import BinaryVector
from .hgp import HgpCode


class DecodeStatus(enum.Enum):
    CORRECTED = "corrected"
    ABORTED = "aborted"


@dataclass
class DecodeStats:
    peeled: int = 0
    pruned: int = 0
    generators_examined: int = 0


@dataclass
class DecodeOutcome:
    """Result of a decode attempt.

    `correction` is set when CORRECTED; on ABORTED, `residual_erasure` holds
    the surviving stopping set, `partial_correction` whatever was recovered
    before the stall and `residual_syndrome` the syndrome still to explain.
    """

    status: DecodeStatus
    correction: BinaryVector | None = None
    residual_erasure: BinaryVector | None = None
    partial_correction: BinaryVector | None = None
    residual_syndrome: BinaryVector | None = None
    stats: DecodeStats = field(default_factory=DecodeStats)

    @property
    def corrected(self) -> bool:
        return self.status is DecodeStatus.CORRECTED


@dataclass
class PruneConfig:
    """m = largest generator product searched during stalls; 0 disables pruning."""

    m: int = 0

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("m must be >= 0")


def _check_inputs(code: HgpCode, erasure: BinaryVector, s: BinaryVector) -> None:
    if erasure.n != code.N:
        raise ValueError(f"erasure length {erasure.n} != qubit count {code.N}")
    if s.n != code.num_z_checks:
        raise ValueError(f"syndrome length {s.n} != Z check count {code.num_z_checks}")


def _run_peeling(
    code: HgpCode,
    erased: np.ndarray,
    synd: np.ndarray,
    corr: np.ndarray,
    m: int,
    stats: DecodeStats,
) -> bool:
    """Alternate peeling and pruning until cleared or stuck.  Returns success."""
    tz = code.tanner_z
    while True:
        stats.peeled += _kernels.peel(
            tz.check_indptr, tz.check_indices, tz.bit_indptr, tz.bit_indices,
            erased, synd, corr,
        )
        if not erased.any():
            return True
        if m < 1:
            return False
        support = _search_erased_stabilizer(code, erased, m, stats)
        if support is None:
            return False
        erased[support[0]] = 0
        stats.pruned += 1


def peel_quantum(code: HgpCode, erasure: BinaryVector, s: BinaryVector) -> DecodeOutcome:
    """Peel dangling Z generators only; aborts on any stopping set."""
    return pruned_peel(code, erasure, s, PruneConfig(m=0))


def pruned_peel(
    code: HgpCode, erasure: BinaryVector, s: BinaryVector, cfg: PruneConfig
) -> DecodeOutcome:
    """Peeling with stabilizer pruning at every stall (products of <= m generators)."""
    _check_inputs(code, erasure, s)
    erased = erasure.to_bits()
    synd = s.to_bits()
    corr = np.zeros(code.N, dtype=np.uint8)
    stats = DecodeStats()
    if _run_peeling(code, erased, synd, corr, cfg.m, stats):
        if synd.any():
            raise ValueError("syndrome is inconsistent with an error inside the erasure")
        return DecodeOutcome(
            DecodeStatus.CORRECTED, correction=BinaryVector.from_bits(corr), stats=stats
        )
    return DecodeOutcome(
        DecodeStatus.ABORTED,
        residual_erasure=BinaryVector.from_bits(erased),
        partial_correction=BinaryVector.from_bits(corr),
        residual_syndrome=BinaryVector.from_bits(synd),
        stats=stats,
    )


def find_erased_stabilizer(
    code: HgpCode, erasure: BinaryVector, m: int
) -> np.ndarray | None:
    """Support of a product of <= m X generators lying inside the erasure.

    Only generators touching the erasure are considered; products are tried
    by increasing size, then lexicographically by generator index.  Returns
    sorted qubit indices, or None when no such product exists.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if erasure.n != code.N:
        raise ValueError(f"erasure length {erasure.n} != qubit count {code.N}")
    stats = DecodeStats()
    return _search_erased_stabilizer(code, erasure.to_bits(), m, stats)


def _search_erased_stabilizer(
    code: HgpCode, erased: np.ndarray, m: int, stats: DecodeStats
) -> np.ndarray | None:
    tx = code.tanner_x
    gen, examined = _kernels.find_fully_erased_generator(
        tx.check_indptr, tx.check_indices, erased
    )
    stats.generators_examined += int(examined)
    if gen >= 0:
        return tx.check_neighbors(int(gen)).copy()
    if m < 2:
        return None

    # Candidates: generators with at least one erased qubit.  A product of two
    # lies inside the erasure iff both leave the same non-erased footprint.
    candidates = []
    deficits = {}
    supports = {}
    for g in range(code.num_x_checks):
        sup = tx.check_neighbors(g)
        if sup.size == 0:
            continue
        inside = erased[sup].astype(bool)
        if not inside.any():
            continue
        candidates.append(g)
        supports[g] = sup
        deficits[g] = sup[~inside]
    stats.generators_examined += len(candidates)

    groups: dict[bytes, list[int]] = {}
    for g in candidates:
        groups.setdefault(deficits[g].tobytes(), []).append(g)
    best_pair = None
    for members in groups.values():
        if len(members) < 2:
            continue
        for i, j in itertools.combinations(members, 2):
            if not np.array_equal(supports[i], supports[j]):
                if best_pair is None or (i, j) < best_pair:
                    best_pair = (i, j)
                break
    if best_pair is not None:
        i, j = best_pair
        product = np.setdiff1d(supports[i], supports[j])
        product = np.concatenate([product, np.setdiff1d(supports[j], supports[i])])
        return np.sort(product)

    if m < 3:
        return None
    return _combination_search(erased, candidates, supports, m, stats)


def _combination_search(erased, candidates, supports, m, stats) -> np.ndarray | None:
    """Exhaustive product search for sizes 3..m with deficit-based pruning.

    Intended for small m; the cost grows combinatorially with it.
    """
    # last candidate index covering each qubit, for pruning dead branches
    last_cover: dict[int, int] = {}
    for g in candidates:
        for q in supports[g].tolist():
            last_cover[q] = g

    for size in range(3, m + 1):
        found = _dfs_products(erased, candidates, supports, last_cover, size, 0, set(), stats)
        if found is not None:
            return np.asarray(sorted(found), dtype=np.int32)
    return None


def _dfs_products(erased, candidates, supports, last_cover, size, start, product, stats):
    if size == 0:
        if product and all(erased[q] for q in product):
            return product
        return None
    deficit = [q for q in product if not erased[q]]
    if deficit:
        # every uncovered non-erased qubit must still be cancellable
        limit = max(last_cover.get(q, -1) for q in deficit)
        if limit < 0:
            return None
    for pos in range(start, len(candidates)):
        g = candidates[pos]
        stats.generators_examined += 1
        nxt = product.symmetric_difference(supports[g].tolist())
        out = _dfs_products(erased, candidates, supports, last_cover, size - 1, pos + 1, nxt, stats)
        if out is not None:
            return out
    return None
