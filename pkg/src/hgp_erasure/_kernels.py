"""Numba kernels for bit-packed GF(2) elimination and peeling.

Everything here works on raw numpy buffers so the jitted code stays free of
Python objects.  Matrices are packed row-major into uint64 words, bit ``j`` of
a row living in word ``j >> 6`` at position ``j & 63``.  All kernels release
the GIL so Monte Carlo trials can overlap across threads.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_ONE = np.uint64(1)
_ZERO = np.uint64(0)


@njit(cache=True, nogil=True, inline="always")
def _parity(x):
    x ^= x >> np.uint64(32)
    x ^= x >> np.uint64(16)
    x ^= x >> np.uint64(8)
    x ^= x >> np.uint64(4)
    x ^= x >> np.uint64(2)
    x ^= x >> np.uint64(1)
    return np.uint8(x & _ONE)


@njit(cache=True, nogil=True)
def matvec_packed(mwords, vwords, out):
    """out[i] = parity(row_i AND v) for a packed matrix/vector pair."""
    nrows, nw = mwords.shape
    for i in range(nrows):
        acc = _ZERO
        for j in range(nw):
            acc ^= mwords[i, j] & vwords[j]
        out[i] = _parity(acc)


@njit(cache=True, nogil=True)
def rref_packed(words, ncols):
    """In-place reduced row echelon form of a packed matrix.

    Returns (rank, pivot_cols) where pivot_cols[:rank] are the pivot column
    indices in increasing order.
    """
    nrows = words.shape[0]
    pivot_cols = np.empty(min(nrows, ncols), dtype=np.int32)
    pr = 0
    for col in range(ncols):
        if pr == nrows:
            break
        wi = col >> 6
        mask = _ONE << np.uint64(col & 63)
        piv = -1
        for r in range(pr, nrows):
            if words[r, wi] & mask:
                piv = r
                break
        if piv < 0:
            continue
        if piv != pr:
            for j in range(words.shape[1]):
                t = words[pr, j]
                words[pr, j] = words[piv, j]
                words[piv, j] = t
        for r in range(nrows):
            if r != pr and (words[r, wi] & mask):
                for j in range(words.shape[1]):
                    words[r, j] ^= words[pr, j]
        pivot_cols[pr] = col
        pr += 1
    return pr, pivot_cols[:pr]


@njit(cache=True, nogil=True)
def reduce_in_span(basis_words, pivot_cols, vwords):
    """Reduce vwords (in place) against an echelonized basis.

    Returns 1 if the residual is zero, i.e. v lies in the row span.
    """
    nw = basis_words.shape[1]
    for r in range(pivot_cols.shape[0]):
        col = pivot_cols[r]
        if vwords[col >> 6] & (_ONE << np.uint64(col & 63)):
            for j in range(nw):
                vwords[j] ^= basis_words[r, j]
    for j in range(nw):
        if vwords[j]:
            return 0
    return 1


@njit(cache=True, nogil=True, inline="always")
def _bisect(sorted_arr, value):
    lo = 0
    hi = sorted_arr.shape[0]
    while lo < hi:
        mid = (lo + hi) >> 1
        if sorted_arr[mid] < value:
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit(cache=True, nogil=True)
def _eliminate_and_backsub(rows, rhs, nr, w):
    """Forward elimination plus back substitution, free variables set to 0.

    `rows` is the packed restricted system (nr live rows, w columns).  Returns
    (status, sol) with status 0 = solved, 1 = inconsistent.  The solution is
    the unique one whose free variables vanish, so it does not depend on which
    row was picked as pivot.
    """
    W = rows.shape[1]
    pivot_row_of = np.full(w, -1, dtype=np.int64)
    pr = 0
    for col in range(w):
        if pr == nr:
            break
        wi = col >> 6
        mask = _ONE << np.uint64(col & 63)
        piv = -1
        for r in range(pr, nr):
            if rows[r, wi] & mask:
                piv = r
                break
        if piv < 0:
            continue
        if piv != pr:
            for j in range(wi, W):
                t = rows[pr, j]
                rows[pr, j] = rows[piv, j]
                rows[piv, j] = t
            t2 = rhs[pr]
            rhs[pr] = rhs[piv]
            rhs[piv] = t2
        for r in range(pr + 1, nr):
            if rows[r, wi] & mask:
                for j in range(wi, W):
                    rows[r, j] ^= rows[pr, j]
                rhs[r] ^= rhs[pr]
        pivot_row_of[col] = pr
        pr += 1
    for r in range(pr, nr):
        if rhs[r]:
            return 1, np.zeros(0, dtype=np.uint8)
    solw = np.zeros(W, dtype=np.uint64)
    sol = np.zeros(w, dtype=np.uint8)
    for col in range(w - 1, -1, -1):
        r = pivot_row_of[col]
        if r < 0:
            continue
        acc = _ZERO
        for j in range(col >> 6, W):
            acc ^= rows[r, j] & solw[j]
        bit = _parity(acc) ^ rhs[r]
        if bit:
            solw[col >> 6] |= _ONE << np.uint64(col & 63)
            sol[col] = 1
    return 0, sol


@njit(cache=True, nogil=True)
def solve_support_csr(indptr, indices, row_ids, rhs_bits, support):
    """Solve the system restricted to `support` columns over selected rows.

    The matrix is given in CSR adjacency form over the full column range;
    `row_ids` selects which rows participate and `rhs_bits` holds their
    right-hand sides.  Rows whose restricted support is empty are dropped
    up front (an inconsistency there is reported immediately).

    Returns (status, sol) with sol a uint8 vector over the support positions.
    """
    w = support.shape[0]
    W = max(1, (w + 63) >> 6)
    nsel = row_ids.shape[0]
    rows = np.zeros((nsel, W), dtype=np.uint64)
    rhs = np.zeros(nsel, dtype=np.uint8)
    nr = 0
    for t in range(nsel):
        i = row_ids[t]
        nz = False
        for k in range(indptr[i], indptr[i + 1]):
            c = indices[k]
            pos = _bisect(support, c)
            if pos < w and support[pos] == c:
                rows[nr, pos >> 6] |= _ONE << np.uint64(pos & 63)
                nz = True
        if nz:
            rhs[nr] = rhs_bits[t]
            nr += 1
        else:
            if rhs_bits[t]:
                return 1, np.zeros(0, dtype=np.uint8)
    return _eliminate_and_backsub(rows, rhs, nr, w)


@njit(cache=True, nogil=True)
def solve_support_packed(words, nrows, rhs_bits, support):
    """Dense-packed counterpart of solve_support_csr over all rows."""
    w = support.shape[0]
    W = max(1, (w + 63) >> 6)
    rows = np.zeros((nrows, W), dtype=np.uint64)
    rhs = np.zeros(nrows, dtype=np.uint8)
    for i in range(nrows):
        for pos in range(w):
            c = support[pos]
            if words[i, c >> 6] & (_ONE << np.uint64(c & 63)):
                rows[i, pos >> 6] |= _ONE << np.uint64(pos & 63)
        rhs[i] = rhs_bits[i]
    return _eliminate_and_backsub(rows, rhs, nrows, w)


@njit(cache=True, nogil=True)
def rank_support_csr(indptr, indices, row_ids, support):
    """GF(2) rank of the selected rows restricted to `support` columns."""
    w = support.shape[0]
    W = max(1, (w + 63) >> 6)
    nsel = row_ids.shape[0]
    rows = np.zeros((nsel, W), dtype=np.uint64)
    for t in range(nsel):
        i = row_ids[t]
        for k in range(indptr[i], indptr[i + 1]):
            c = indices[k]
            pos = _bisect(support, c)
            if pos < w and support[pos] == c:
                rows[t, pos >> 6] |= _ONE << np.uint64(pos & 63)
    pr = 0
    for col in range(w):
        if pr == nsel:
            break
        wi = col >> 6
        mask = _ONE << np.uint64(col & 63)
        piv = -1
        for r in range(pr, nsel):
            if rows[r, wi] & mask:
                piv = r
                break
        if piv < 0:
            continue
        if piv != pr:
            for j in range(W):
                t = rows[pr, j]
                rows[pr, j] = rows[piv, j]
                rows[piv, j] = t
        for r in range(pr + 1, nsel):
            if rows[r, wi] & mask:
                for j in range(W):
                    rows[r, j] ^= rows[pr, j]
        pr += 1
    return pr


@njit(cache=True, nogil=True)
def peel(check_indptr, check_indices, bit_indptr, bit_indices, erased, synd, corr):
    """Dangling-check peeling, FIFO order, in place.

    `erased` and `synd` are mutated to the residual state; bits recovered as 1
    are XORed into `corr`.  Returns the number of peeled bits.  A check enters
    the queue when its erased-neighbor count is exactly 1; counts only ever
    decrease, so each check is enqueued at most twice (once initially, once on
    the 2 -> 1 transition) and the queue is statically sized.
    """
    nchecks = check_indptr.shape[0] - 1
    counts = np.zeros(nchecks, dtype=np.int32)
    queue = np.empty(2 * nchecks, dtype=np.int32)
    qh = 0
    qt = 0
    for c in range(nchecks):
        cnt = 0
        for k in range(check_indptr[c], check_indptr[c + 1]):
            if erased[check_indices[k]]:
                cnt += 1
        counts[c] = cnt
        if cnt == 1:
            queue[qt] = c
            qt += 1
    peeled = 0
    while qh < qt:
        c = queue[qh]
        qh += 1
        if counts[c] != 1:
            continue
        b = -1
        for k in range(check_indptr[c], check_indptr[c + 1]):
            if erased[check_indices[k]]:
                b = check_indices[k]
                break
        if b < 0:
            continue
        if synd[c]:
            corr[b] ^= 1
            for k in range(bit_indptr[b], bit_indptr[b + 1]):
                synd[bit_indices[k]] ^= 1
        erased[b] = 0
        peeled += 1
        for k in range(bit_indptr[b], bit_indptr[b + 1]):
            cc = bit_indices[k]
            counts[cc] -= 1
            if counts[cc] == 1:
                queue[qt] = cc
                qt += 1
    return peeled


@njit(cache=True, nogil=True)
def find_fully_erased_generator(check_indptr, check_indices, erased):
    """First generator (ascending index) whose whole nonempty support is erased.

    Returns (gen_index, examined); gen_index is -1 when there is none.
    """
    ngens = check_indptr.shape[0] - 1
    for g in range(ngens):
        lo = check_indptr[g]
        hi = check_indptr[g + 1]
        if lo == hi:
            continue
        full = True
        for k in range(lo, hi):
            if not erased[check_indices[k]]:
                full = False
                break
        if full:
            return g, g + 1
    return -1, ngens
