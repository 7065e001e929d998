"""Hypergraph product of a classical Tanner graph with itself.

Qubits live on bit-bit and check-check coordinate pairs, X checks on
check-bit pairs and Z checks on bit-check pairs.  Linear indexing is fixed:
the bit-bit block comes first (row-major by first coordinate), then the
check-check block; check indices are row-major the same way.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .gf2 import BinaryMatrix, BinaryVector, RowSpan, rank
from .tanner import TannerGraph


class CoordKind(enum.Enum):
    BIT_BIT = "bit_bit"
    CHECK_CHECK = "check_check"
    X_CHECK = "x_check"
    Z_CHECK = "z_check"


@dataclass(frozen=True)
class Coord:
    """A labelled lattice coordinate (first = horizontal, second = vertical)."""

    kind: CoordKind
    first: int
    second: int


class HgpCode:
    """CSS code produced by the product construction; immutable once built.

    Use :func:`build_hgp` to construct one.
    """

    def __init__(self, graph: TannerGraph):
        self.input_graph = graph
        self.n = graph.num_bits
        self.r = graph.num_checks
        self.N = self.n * self.n + self.r * self.r
        self.num_z_checks = self.n * self.r
        self.num_x_checks = self.r * self.n

        n, r = self.n, self.r
        nsq = n * n
        z_edges = []
        for b in range(n):
            b_checks = graph.bit_neighbors(b)
            for a_p in range(r):
                zc = b * r + a_p
                for b_p in graph.check_neighbors(a_p):
                    z_edges.append((zc, b * n + int(b_p)))
                for a in b_checks:
                    z_edges.append((zc, nsq + int(a) * r + a_p))
        x_edges = []
        for a in range(r):
            a_bits = graph.check_neighbors(a)
            for b_p in range(n):
                xc = a * n + b_p
                for b in a_bits:
                    x_edges.append((xc, int(b) * n + b_p))
                for a_p in graph.bit_neighbors(b_p):
                    x_edges.append((xc, nsq + a * r + int(a_p)))

        self.tanner_z = TannerGraph(self.num_z_checks, self.N, z_edges)
        self.tanner_x = TannerGraph(self.num_x_checks, self.N, x_edges)
        self.h_z = self.tanner_z.to_matrix()
        self.h_x = self.tanner_x.to_matrix()
        self.rank_x = rank(self.h_x)
        self.rank_z = rank(self.h_z)
        self.k_logical = self.N - self.rank_x - self.rank_z

    @cached_property
    def transposed_graph(self) -> TannerGraph:
        return self.input_graph.transposed()

    @cached_property
    def x_row_span(self) -> RowSpan:
        """Echelonized h_x, shared by every residual classification."""
        return RowSpan(self.h_x)

    def coord_of_qubit(self, q: int) -> Coord:
        if not 0 <= q < self.N:
            raise IndexError(f"qubit index {q} out of range")
        nsq = self.n * self.n
        if q < nsq:
            return Coord(CoordKind.BIT_BIT, q // self.n, q % self.n)
        q -= nsq
        return Coord(CoordKind.CHECK_CHECK, q // self.r, q % self.r)

    def qubit_of_coord(self, coord: Coord) -> int:
        if coord.kind is CoordKind.BIT_BIT:
            if not (0 <= coord.first < self.n and 0 <= coord.second < self.n):
                raise IndexError(f"{coord} out of range")
            return coord.first * self.n + coord.second
        if coord.kind is CoordKind.CHECK_CHECK:
            if not (0 <= coord.first < self.r and 0 <= coord.second < self.r):
                raise IndexError(f"{coord} out of range")
            return self.n * self.n + coord.first * self.r + coord.second
        raise ValueError(f"{coord.kind} does not label a qubit")

    def z_check_index(self, b: int, a_p: int) -> int:
        if not (0 <= b < self.n and 0 <= a_p < self.r):
            raise IndexError(f"Z check ({b}, {a_p}) out of range")
        return b * self.r + a_p

    def z_check_coord(self, idx: int) -> Coord:
        if not 0 <= idx < self.num_z_checks:
            raise IndexError(f"Z check index {idx} out of range")
        return Coord(CoordKind.Z_CHECK, idx // self.r, idx % self.r)

    def x_check_index(self, a: int, b_p: int) -> int:
        if not (0 <= a < self.r and 0 <= b_p < self.n):
            raise IndexError(f"X check ({a}, {b_p}) out of range")
        return a * self.n + b_p

    def x_check_coord(self, idx: int) -> Coord:
        if not 0 <= idx < self.num_x_checks:
            raise IndexError(f"X check index {idx} out of range")
        return Coord(CoordKind.X_CHECK, idx // self.n, idx % self.n)

    def __repr__(self) -> str:
        return (
            f"HgpCode(N={self.N}, k={self.k_logical}, "
            f"R_X={self.num_x_checks}, R_Z={self.num_z_checks})"
        )


def build_hgp(g: TannerGraph) -> HgpCode:
    """Product of `g` with itself as a CSS code."""
    if g.num_bits < 1 or g.num_checks < 1:
        raise ValueError("input graph must have at least one bit and one check")
    return HgpCode(g)


def x_generator_support(code: HgpCode, gen: Coord) -> np.ndarray:
    """Qubit support of the X generator at (a, b'), as sorted linear indices.

    Covers the bit-bit qubits (b, b') with b adjacent to a, and the
    check-check qubits (a, a') with a' adjacent to b'.
    """
    if gen.kind is not CoordKind.X_CHECK:
        raise ValueError("expected an X check coordinate")
    idx = code.x_check_index(gen.first, gen.second)
    return code.tanner_x.check_neighbors(idx).copy()


def lift_vertical(code: HgpCode, b: int, s_b) -> np.ndarray:
    """Map a set of classical bits onto the vertical line b: {b} x s_b."""
    if not 0 <= b < code.n:
        raise IndexError(f"line index {b} out of range")
    out = []
    for bp in sorted(set(int(x) for x in s_b)):
        if not 0 <= bp < code.n:
            raise IndexError(f"bit index {bp} out of range")
        out.append(b * code.n + bp)
    return np.asarray(out, dtype=np.int32)


def lift_horizontal(code: HgpCode, a_p: int, s_a) -> np.ndarray:
    """Map a set of classical checks onto the horizontal line a': s_a x {a'}."""
    if not 0 <= a_p < code.r:
        raise IndexError(f"line index {a_p} out of range")
    nsq = code.n * code.n
    out = []
    for a in sorted(set(int(x) for x in s_a)):
        if not 0 <= a < code.r:
            raise IndexError(f"check index {a} out of range")
        out.append(nsq + a * code.r + a_p)
    return np.asarray(out, dtype=np.int32)


def css_commutes(code: HgpCode, chunk: int = 64) -> bool:
    """Verify h_x . h_z^T == 0, chunked to keep memory flat."""
    zw = code.h_z.words
    for start in range(0, code.h_x.rows, chunk):
        xw = code.h_x.words[start : start + chunk]
        overlaps = np.bitwise_count(xw[:, None, :] & zw[None, :, :]).sum(axis=2)
        if np.any(overlaps & 1):
            return False
    return True


def syndrome_of(code: HgpCode, error: BinaryVector) -> BinaryVector:
    """h_z applied to an X-error indicator."""
    from .gf2 import mat_vec_mul

    return mat_vec_mul(code.h_z, error)
