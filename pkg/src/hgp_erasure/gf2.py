"""Dense bit-packed linear algebra over GF(2).

Vectors and matrices pack their bits into uint64 words (little-endian bit
order within each word).  Row operations are word-parallel XORs; the heavy
elimination loops live in :mod:`hgp_erasure._kernels`.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from . import _kernels


def _nwords(nbits: int) -> int:
    return max(1, (nbits + 63) >> 6)


def _pack_bits(bits: np.ndarray) -> np.ndarray:
    nbits = bits.shape[0]
    padded = np.zeros(_nwords(nbits) * 64, dtype=np.uint8)
    padded[:nbits] = bits
    return np.packbits(padded, bitorder="little").view(np.uint64)


def _unpack_words(words: np.ndarray, nbits: int) -> np.ndarray:
    return np.unpackbits(words.view(np.uint8), bitorder="little")[:nbits]


class BinaryVector:
    """A length-`n` vector over GF(2), packed into uint64 words.

    Padding bits beyond `n` are kept at zero so word-level XOR, AND and
    popcounts never need masking.
    """

    __slots__ = ("n", "words")

    def __init__(self, n: int, words: np.ndarray | None = None):
        self.n = int(n)
        if words is None:
            self.words = np.zeros(_nwords(n), dtype=np.uint64)
        else:
            if words.shape[0] != _nwords(n):
                raise ValueError("word buffer has wrong length")
            self.words = words

    @classmethod
    def zeros(cls, n: int) -> "BinaryVector":
        return cls(n)

    @classmethod
    def from_bits(cls, bits: Sequence[int] | np.ndarray) -> "BinaryVector":
        arr = np.asarray(bits, dtype=np.uint8)
        if arr.ndim != 1:
            raise ValueError("expected a 1-d bit sequence")
        return cls(arr.shape[0], _pack_bits(arr))

    @classmethod
    def from_indices(cls, n: int, indices: Iterable[int]) -> "BinaryVector":
        bits = np.zeros(n, dtype=np.uint8)
        idx = np.asarray(list(indices), dtype=np.int64)
        if idx.size:
            if idx.min() < 0 or idx.max() >= n:
                raise IndexError("index out of range")
            bits[idx] = 1
        return cls(n, _pack_bits(bits))

    def get(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(f"bit index {i} out of range for length {self.n}")
        return int((self.words[i >> 6] >> np.uint64(i & 63)) & np.uint64(1))

    __getitem__ = get

    def set(self, i: int, value: int) -> None:
        if not 0 <= i < self.n:
            raise IndexError(f"bit index {i} out of range for length {self.n}")
        mask = np.uint64(1) << np.uint64(i & 63)
        if value:
            self.words[i >> 6] |= mask
        else:
            self.words[i >> 6] &= ~mask

    def to_bits(self) -> np.ndarray:
        return _unpack_words(self.words, self.n)

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.to_bits()).astype(np.int32)

    def weight(self) -> int:
        return int(np.bitwise_count(self.words).sum())

    def is_zero(self) -> bool:
        return not self.words.any()

    def copy(self) -> "BinaryVector":
        return BinaryVector(self.n, self.words.copy())

    def __xor__(self, other: "BinaryVector") -> "BinaryVector":
        if self.n != other.n:
            raise ValueError(f"length mismatch: {self.n} vs {other.n}")
        return BinaryVector(self.n, self.words ^ other.words)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryVector):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.words, other.words)

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        if self.n <= 64:
            return f"BinaryVector({''.join(map(str, self.to_bits()))})"
        return f"BinaryVector(n={self.n}, weight={self.weight()})"


class BinaryMatrix:
    """A rows x cols matrix over GF(2) with bit-packed rows."""

    __slots__ = ("rows", "cols", "words", "_span_cache")

    def __init__(self, rows: int, cols: int, words: np.ndarray | None = None):
        self.rows = int(rows)
        self.cols = int(cols)
        if words is None:
            self.words = np.zeros((rows, _nwords(cols)), dtype=np.uint64)
        else:
            if words.shape != (rows, _nwords(cols)):
                raise ValueError("word buffer has wrong shape")
            self.words = words
        self._span_cache = None

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BinaryMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "BinaryMatrix":
        m = cls(n, n)
        for i in range(n):
            m.set(i, i, 1)
        return m

    @classmethod
    def from_dense(cls, dense) -> "BinaryMatrix":
        arr = np.asarray(dense, dtype=np.uint8)
        if arr.ndim != 2:
            raise ValueError("expected a 2-d array")
        rows, cols = arr.shape
        m = cls(rows, cols)
        for i in range(rows):
            m.words[i] = _pack_bits(arr[i])
        return m

    def get(self, i: int, j: int) -> int:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry ({i}, {j}) out of range")
        return int((self.words[i, j >> 6] >> np.uint64(j & 63)) & np.uint64(1))

    def set(self, i: int, j: int, value: int) -> None:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry ({i}, {j}) out of range")
        mask = np.uint64(1) << np.uint64(j & 63)
        if value:
            self.words[i, j >> 6] |= mask
        else:
            self.words[i, j >> 6] &= ~mask
        self._span_cache = None

    def row(self, i: int) -> BinaryVector:
        return BinaryVector(self.cols, self.words[i].copy())

    def to_dense(self) -> np.ndarray:
        out = np.empty((self.rows, self.cols), dtype=np.uint8)
        for i in range(self.rows):
            out[i] = _unpack_words(self.words[i], self.cols)
        return out

    def transpose(self) -> "BinaryMatrix":
        return BinaryMatrix.from_dense(self.to_dense().T)

    def copy(self) -> "BinaryMatrix":
        return BinaryMatrix(self.rows, self.cols, self.words.copy())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and np.array_equal(self.words, other.words)
        )

    def __repr__(self) -> str:
        return f"BinaryMatrix({self.rows}x{self.cols})"


def mat_vec_mul(m: BinaryMatrix, v: BinaryVector) -> BinaryVector:
    """Matrix-vector product over GF(2)."""
    if v.n != m.cols:
        raise ValueError(f"dimension mismatch: matrix has {m.cols} cols, vector {v.n}")
    out_bits = np.empty(m.rows, dtype=np.uint8)
    _kernels.matvec_packed(m.words, v.words, out_bits)
    return BinaryVector.from_bits(out_bits)


def rank(m: BinaryMatrix) -> int:
    """GF(2) rank.  The input matrix is left untouched."""
    work = m.words.copy()
    r, _ = _kernels.rref_packed(work, m.cols)
    return int(r)


def solve_constrained(
    m: BinaryMatrix, s: BinaryVector, support: Iterable[int]
) -> BinaryVector | None:
    """Find ê with m·ê == s and supp(ê) within `support`, or None.

    Pivots are taken on the leftmost available support column and free
    variables are set to 0, so the returned solution is deterministic.
    None means the restricted system is inconsistent.
    """
    if s.n != m.rows:
        raise ValueError(f"syndrome length {s.n} != row count {m.rows}")
    sup = np.asarray(sorted(set(int(i) for i in support)), dtype=np.int32)
    if sup.size and (sup[0] < 0 or sup[-1] >= m.cols):
        raise IndexError("support index out of column range")
    rhs = s.to_bits()
    if sup.size == 0:
        return None if rhs.any() else BinaryVector.zeros(m.cols)
    status, sol = _kernels.solve_support_packed(m.words, m.rows, rhs, sup)
    if status != 0:
        return None
    return BinaryVector.from_indices(m.cols, sup[sol == 1])


def kernel_basis(m: BinaryMatrix) -> list[BinaryVector]:
    """A basis of ker(m): cols - rank independent vectors."""
    work = m.words.copy()
    r, pivot_cols = _kernels.rref_packed(work, m.cols)
    pivot_set = set(int(c) for c in pivot_cols)
    free_cols = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    for f in free_cols:
        vec = BinaryVector.zeros(m.cols)
        vec.set(f, 1)
        fw = f >> 6
        fmask = np.uint64(1) << np.uint64(f & 63)
        for prow in range(r):
            if work[prow, fw] & fmask:
                vec.set(int(pivot_cols[prow]), 1)
        basis.append(vec)
    return basis


class RowSpan:
    """Precomputed echelon form of a matrix for repeated membership tests."""

    __slots__ = ("cols", "rank", "_words", "_pivots")

    def __init__(self, m: BinaryMatrix):
        work = m.words.copy()
        r, pivots = _kernels.rref_packed(work, m.cols)
        self.cols = m.cols
        self.rank = int(r)
        self._words = np.ascontiguousarray(work[:r])
        self._pivots = pivots.copy()

    def contains(self, v: BinaryVector) -> bool:
        if v.n != self.cols:
            raise ValueError(f"length mismatch: {v.n} vs {self.cols}")
        residual = v.words.copy()
        return bool(_kernels.reduce_in_span(self._words, self._pivots, residual))

    def reduce(self, v: BinaryVector) -> BinaryVector:
        """The canonical residual of v modulo the row span (zero iff member)."""
        residual = v.words.copy()
        _kernels.reduce_in_span(self._words, self._pivots, residual)
        return BinaryVector(self.cols, residual)


def in_row_space(m: BinaryMatrix, v: BinaryVector) -> bool:
    """True iff v is a GF(2) combination of rows of m.

    The reduced form of m is cached on the matrix, so repeated queries
    against the same matrix cost one vector reduction each.
    """
    if v.n != m.cols:
        raise ValueError(f"length mismatch: {v.n} vs {m.cols}")
    if m._span_cache is None:
        m._span_cache = RowSpan(m)
    return m._span_cache.contains(v)


def _berlekamp_massey_gf2(seq: list[int]) -> list[int]:
    """Minimal LFSR (connection polynomial coefficients) for a GF(2) sequence.

    Returns [c_0=1, c_1, ..., c_L] with seq[n] = sum_{i>=1} c_i seq[n-i].
    """
    c = [1]
    b = [1]
    L = 0
    shift = 1
    for n, bit in enumerate(seq):
        d = bit
        for i in range(1, L + 1):
            d ^= c[i] & seq[n - i]
        if d == 0:
            shift += 1
            continue
        t = c[:]
        if len(c) < len(b) + shift:
            c = c + [0] * (len(b) + shift - len(c))
        for i, bi in enumerate(b):
            c[i + shift] ^= bi
        if 2 * L <= n:
            L = n + 1 - L
            b = t
            shift = 1
        else:
            shift += 1
    return c


def solve_probabilistic(
    m: BinaryMatrix,
    s: BinaryVector,
    support: Iterable[int],
    rng: np.random.Generator,
    max_attempts: int = 8,
) -> BinaryVector | None:
    """Randomized constrained solve with the same contract as solve_constrained.

    Each attempt draws a random square row subsample of the restricted system
    and runs a Wiedemann solve (Krylov sequence + Berlekamp-Massey).  Any
    candidate is verified against the full system before being returned;
    after `max_attempts` misses the deterministic elimination takes over, so
    the outcome (solution vs None) never depends on luck.
    """
    if s.n != m.rows:
        raise ValueError(f"syndrome length {s.n} != row count {m.rows}")
    sup = np.asarray(sorted(set(int(i) for i in support)), dtype=np.int32)
    if sup.size and (sup[0] < 0 or sup[-1] >= m.cols):
        raise IndexError("support index out of column range")
    w = sup.size
    s_bits = s.to_bits()
    if w == 0 or m.rows < w:
        return solve_constrained(m, s, sup)

    restricted = np.zeros((m.rows, w), dtype=np.uint8)
    dense = None
    for pos, c in enumerate(sup):
        restricted[:, pos] = (m.words[:, c >> 6] >> np.uint64(c & 63)) & np.uint64(1)

    for _ in range(max_attempts):
        pick = rng.choice(m.rows, size=w, replace=False)
        a = restricted[pick].astype(np.uint8)
        b = s_bits[pick].astype(np.uint8)
        u = (rng.integers(0, 2, size=w)).astype(np.uint8)
        # Krylov sequence u^T A^i b, i = 0 .. 2w-1
        seq = []
        vec = b.copy()
        for _i in range(2 * w):
            seq.append(int(u @ vec & 1))
            vec = (a @ vec) & 1
        conn = _berlekamp_massey_gf2(seq)
        # x = sum_{i>=1} c_i A^{i-1} b solves A x = b when the minimal
        # polynomial has a nonzero constant term (c_0 = 1 by construction).
        x = np.zeros(w, dtype=np.uint8)
        vec = b.copy()
        for i in range(1, len(conn)):
            if conn[i]:
                x ^= vec
            vec = (a @ vec) & 1
        if dense is None:
            dense = restricted
        if np.array_equal((dense @ x) & 1, s_bits):
            return BinaryVector.from_indices(m.cols, sup[x == 1])
    return solve_constrained(m, s, sup)
