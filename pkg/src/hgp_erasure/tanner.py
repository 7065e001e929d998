"""Classical linear codes as Tanner graphs.

Covers the alist interchange format, progressive-edge-growth construction,
the dangling-check peeling decoder and stopping-set utilities.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import _kernels
from .gf2 import BinaryMatrix, BinaryVector


class AlistError(ValueError):
    """Malformed alist input; the message names the offending line."""


@dataclass
class PeelFailure:
    """Peeling stalled; `residual` is the unpeeled erasure (a stopping set)."""

    residual: BinaryVector


class TannerGraph:
    """Bipartite check/bit adjacency, stored as sorted CSR index arrays.

    Immutable after construction; the CSR buffers are shared with the
    decoding kernels.
    """

    __slots__ = (
        "num_checks",
        "num_bits",
        "check_indptr",
        "check_indices",
        "bit_indptr",
        "bit_indices",
    )

    def __init__(self, num_checks: int, num_bits: int, edges: Iterable[tuple[int, int]]):
        self.num_checks = int(num_checks)
        self.num_bits = int(num_bits)
        edge_set = set()
        for c, b in edges:
            if not (0 <= c < num_checks and 0 <= b < num_bits):
                raise ValueError(f"edge ({c}, {b}) out of range")
            edge_set.add((int(c), int(b)))
        by_check: list[list[int]] = [[] for _ in range(num_checks)]
        by_bit: list[list[int]] = [[] for _ in range(num_bits)]
        for c, b in sorted(edge_set):
            by_check[c].append(b)
            by_bit[b].append(c)
        self.check_indptr, self.check_indices = _csr(by_check)
        self.bit_indptr, self.bit_indices = _csr(by_bit)

    @classmethod
    def from_matrix(cls, h: BinaryMatrix) -> "TannerGraph":
        dense = h.to_dense()
        edges = [(int(c), int(b)) for c, b in zip(*np.nonzero(dense))]
        return cls(h.rows, h.cols, edges)

    def to_matrix(self) -> BinaryMatrix:
        h = BinaryMatrix.zeros(self.num_checks, self.num_bits)
        for c in range(self.num_checks):
            for b in self.check_neighbors(c):
                h.set(c, int(b), 1)
        return h

    def check_neighbors(self, c: int) -> np.ndarray:
        return self.check_indices[self.check_indptr[c] : self.check_indptr[c + 1]]

    def bit_neighbors(self, b: int) -> np.ndarray:
        return self.bit_indices[self.bit_indptr[b] : self.bit_indptr[b + 1]]

    def edges(self) -> list[tuple[int, int]]:
        return [
            (c, int(b)) for c in range(self.num_checks) for b in self.check_neighbors(c)
        ]

    def transposed(self) -> "TannerGraph":
        """The graph of H^T: checks and bits swap roles."""
        return TannerGraph(self.num_bits, self.num_checks, [(b, c) for c, b in self.edges()])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TannerGraph):
            return NotImplemented
        return (
            self.num_checks == other.num_checks
            and self.num_bits == other.num_bits
            and np.array_equal(self.check_indptr, other.check_indptr)
            and np.array_equal(self.check_indices, other.check_indices)
        )

    def __repr__(self) -> str:
        return (
            f"TannerGraph(checks={self.num_checks}, bits={self.num_bits}, "
            f"edges={len(self.check_indices)})"
        )


def _csr(adj: list[list[int]]) -> tuple[np.ndarray, np.ndarray]:
    indptr = np.zeros(len(adj) + 1, dtype=np.int32)
    for i, nbrs in enumerate(adj):
        indptr[i + 1] = indptr[i] + len(nbrs)
    indices = np.empty(indptr[-1], dtype=np.int32)
    for i, nbrs in enumerate(adj):
        indices[indptr[i] : indptr[i + 1]] = nbrs
    return indptr, indices


@dataclass
class PegParams:
    num_bits: int
    num_checks: int
    bit_degree: int
    seed: int

    def validate(self) -> None:
        if self.bit_degree < 1:
            raise ValueError("bit_degree must be >= 1")
        if self.bit_degree > self.num_checks:
            raise ValueError("bit_degree cannot exceed the number of checks")
        if self.num_bits < 1 or self.num_checks < 1:
            raise ValueError("num_bits and num_checks must be positive")
        if self.num_bits * self.bit_degree < self.num_checks:
            raise ValueError("too few edges to reach every check")


def read_alist(text: str | bytes) -> TannerGraph:
    """Parse MacKay alist format.

    Layout: "n r", "max_bit_deg max_check_deg", the n bit degrees, the r check
    degrees, then n lines of 1-indexed check neighbors per bit and r lines of
    bit neighbors per check.  Zero entries used as padding are ignored.
    """
    if isinstance(text, bytes):
        text = text.decode("ascii")
    lines = text.splitlines()

    def ints(lineno: int, expect: int | None = None) -> list[int]:
        if lineno >= len(lines):
            raise AlistError(f"line {lineno + 1}: unexpected end of input")
        try:
            vals = [int(tok) for tok in lines[lineno].split()]
        except ValueError:
            raise AlistError(f"line {lineno + 1}: non-integer token") from None
        if expect is not None and len(vals) != expect:
            raise AlistError(f"line {lineno + 1}: expected {expect} values, got {len(vals)}")
        return vals

    header = ints(0, 2)
    n, r = header
    if n < 1 or r < 1:
        raise AlistError("line 1: dimensions must be positive")
    ints(1, 2)  # max degrees; informational only
    bit_degs = ints(2, n)
    check_degs = ints(3, r)
    if any(d < 0 for d in bit_degs) or any(d < 0 for d in check_degs):
        raise AlistError("line 3: negative degree")

    edges_from_bits = set()
    for b in range(n):
        lineno = 4 + b
        vals = [v for v in ints(lineno) if v != 0]
        if len(vals) != bit_degs[b]:
            raise AlistError(
                f"line {lineno + 1}: bit {b + 1} lists {len(vals)} checks, degree says {bit_degs[b]}"
            )
        for v in vals:
            if not 1 <= v <= r:
                raise AlistError(f"line {lineno + 1}: check index {v} out of range 1..{r}")
            edges_from_bits.add((v - 1, b))

    edges_from_checks = set()
    for c in range(r):
        lineno = 4 + n + c
        vals = [v for v in ints(lineno) if v != 0]
        if len(vals) != check_degs[c]:
            raise AlistError(
                f"line {lineno + 1}: check {c + 1} lists {len(vals)} bits, degree says {check_degs[c]}"
            )
        for v in vals:
            if not 1 <= v <= n:
                raise AlistError(f"line {lineno + 1}: bit index {v} out of range 1..{n}")
            edges_from_checks.add((c, v - 1))

    if edges_from_bits != edges_from_checks:
        raise AlistError(
            f"line {4 + n + r}: bit and check adjacency lists disagree"
        )
    return TannerGraph(r, n, edges_from_bits)


def write_alist(g: TannerGraph) -> str:
    """Serialize to alist text; stable byte-exact output.

    Adjacencies come out sorted with single spaces and no zero padding; a
    degree-0 node gets an empty adjacency line.
    """
    bit_degs = [len(g.bit_neighbors(b)) for b in range(g.num_bits)]
    check_degs = [len(g.check_neighbors(c)) for c in range(g.num_checks)]
    out = []
    out.append(f"{g.num_bits} {g.num_checks}")
    out.append(f"{max(bit_degs, default=0)} {max(check_degs, default=0)}")
    out.append(" ".join(str(d) for d in bit_degs))
    out.append(" ".join(str(d) for d in check_degs))
    for b in range(g.num_bits):
        out.append(" ".join(str(int(c) + 1) for c in g.bit_neighbors(b)))
    for c in range(g.num_checks):
        out.append(" ".join(str(int(b) + 1) for b in g.check_neighbors(c)))
    return "\n".join(out) + "\n"


def peg_generate(params: PegParams) -> TannerGraph:
    """Progressive edge growth: greedy girth maximization, deterministic.

    Each new edge for a bit goes to a check at maximal BFS distance from that
    bit (unreached checks count as infinitely far); among those, a check of
    minimal current degree; remaining ties are broken by the seeded RNG.
    """
    params.validate()
    rng = random.Random(params.seed)
    n, r, dv = params.num_bits, params.num_checks, params.bit_degree
    check_deg = [0] * r
    bit_adj: list[set[int]] = [set() for _ in range(n)]
    check_adj: list[set[int]] = [set() for _ in range(r)]

    def check_distances(root_bit: int) -> list[int]:
        # BFS over the bipartite graph; checks sit at odd depths.
        inf = r + n + 2
        dist_bit = [inf] * n
        dist_check = [inf] * r
        dist_bit[root_bit] = 0
        dq = deque([(root_bit, True)])
        while dq:
            node, is_bit = dq.popleft()
            if is_bit:
                for c in bit_adj[node]:
                    if dist_check[c] == inf:
                        dist_check[c] = dist_bit[node] + 1
                        dq.append((c, False))
            else:
                for b in check_adj[node]:
                    if dist_bit[b] == inf:
                        dist_bit[b] = dist_check[node] + 1
                        dq.append((b, True))
        return dist_check

    for b in range(n):
        for _ in range(dv):
            dist = check_distances(b)
            best = None
            candidates: list[int] = []
            for c in range(r):
                if c in bit_adj[b]:
                    continue
                key = (dist[c], -check_deg[c])
                if best is None or key > best:
                    best = key
                    candidates = [c]
                elif key == best:
                    candidates.append(c)
            if not candidates:
                raise ValueError("no check available: bit_degree exceeds num_checks")
            c = candidates[rng.randrange(len(candidates))]
            bit_adj[b].add(c)
            check_adj[c].add(b)
            check_deg[c] += 1

    edges = [(c, b) for b in range(n) for c in bit_adj[b]]
    return TannerGraph(r, n, edges)


def classical_peel(
    g: TannerGraph, erasure: BinaryVector, s: BinaryVector
) -> BinaryVector | PeelFailure:
    """Peel dangling checks until the erasure clears or a stopping set remains.

    On success returns e with H e = s and supp(e) inside the erasure.  On a
    stall, returns PeelFailure carrying the residual erasure.
    """
    if erasure.n != g.num_bits:
        raise ValueError(f"erasure length {erasure.n} != bit count {g.num_bits}")
    if s.n != g.num_checks:
        raise ValueError(f"syndrome length {s.n} != check count {g.num_checks}")
    erased = erasure.to_bits()
    synd = s.to_bits()
    corr = np.zeros(g.num_bits, dtype=np.uint8)
    _kernels.peel(
        g.check_indptr, g.check_indices, g.bit_indptr, g.bit_indices, erased, synd, corr
    )
    if erased.any():
        return PeelFailure(residual=BinaryVector.from_bits(erased))
    if synd.any():
        raise ValueError("syndrome is inconsistent with an in-erasure error")
    return BinaryVector.from_bits(corr)


def is_stopping_set(g: TannerGraph, bits: Iterable[int]) -> bool:
    """True iff no check sees exactly one of `bits` (empty set passes)."""
    marked = sorted(set(int(b) for b in bits))
    if not marked:
        return True
    if marked[0] < 0 or marked[-1] >= g.num_bits:
        raise IndexError("bit index out of range")
    touched = np.concatenate([g.bit_neighbors(b) for b in marked])
    counts = np.bincount(touched, minlength=g.num_checks)
    return not np.any(counts == 1)
