"""Vertical-horizontal cluster decoder.

The erased subgraph splits into clusters living on single vertical lines
(bit-bit qubits sharing their first coordinate) or horizontal lines
(check-check qubits sharing their second coordinate).  A Z check touching
erased qubits of both kinds is shared by exactly one vertical and one
horizontal cluster, which makes the cluster-intersection graph bipartite.

Decoding solves isolated and frozen dangling clusters immediately with a
small Gaussian elimination, defers free dangling clusters on a stack with
their free check removed from the working graph, and finishes by popping the
stack once the surrounding syndrome has settled.  A remaining core in which
every cluster keeps two or more connecting checks (a cycle in the cluster
graph) aborts the decode.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .gf2 import BinaryVector
from .hgp import HgpCode
from .peeling import DecodeOutcome, DecodeStats, DecodeStatus, PruneConfig, pruned_peel


class Orientation(enum.Enum):
    VERTICAL = 0
    HORIZONTAL = 1


@dataclass
class Cluster:
    """A connected patch of erased qubits on one line, plus its checks."""

    orientation: Orientation
    line_index: int
    qubits: np.ndarray
    internal_checks: np.ndarray
    connecting_checks: np.ndarray


@dataclass
class VhGraph:
    """Clusters plus their intersection edges (vertical id, horizontal id, check)."""

    clusters: list[Cluster]
    edges: list[tuple[int, int, int]]

    @property
    def num_vertical(self) -> int:
        return sum(1 for c in self.clusters if c.orientation is Orientation.VERTICAL)


class ClusterStatusTag(enum.Enum):
    ISOLATED = "isolated"
    FROZEN_DANGLING = "frozen_dangling"
    FREE_DANGLING = "free_dangling"
    BLOCKED = "blocked"


@dataclass
class ClusterStatus:
    tag: ClusterStatusTag
    free_check: int | None = None


def decompose(code: HgpCode, erasure: BinaryVector) -> VhGraph:
    """Split an erasure into vertical/horizontal clusters and their edges."""
    if erasure.n != code.N:
        raise ValueError(f"erasure length {erasure.n} != qubit count {code.N}")
    g = code.input_graph
    n, r = code.n, code.r
    nsq = n * n
    erased = erasure.support()

    vertical_lines: dict[int, set[int]] = {}
    horizontal_lines: dict[int, set[int]] = {}
    for q in erased.tolist():
        if q < nsq:
            vertical_lines.setdefault(q // n, set()).add(q % n)
        else:
            idx = q - nsq
            horizontal_lines.setdefault(idx % r, set()).add(idx // r)

    clusters: list[Cluster] = []
    check_owner_v: dict[int, int] = {}
    check_owner_h: dict[int, int] = {}

    for b in sorted(vertical_lines):
        for comp_bits, comp_checks in _line_components(
            vertical_lines[b], g.bit_neighbors, g.check_neighbors
        ):
            cid = len(clusters)
            qubits = np.asarray([b * n + bp for bp in comp_bits], dtype=np.int32)
            checks = np.asarray([b * r + ap for ap in comp_checks], dtype=np.int32)
            clusters.append(Cluster(Orientation.VERTICAL, b, qubits, checks, checks[:0]))
            for c in checks.tolist():
                check_owner_v[c] = cid

    for a_p in sorted(horizontal_lines):
        for comp_as, comp_checks in _line_components(
            horizontal_lines[a_p], g.check_neighbors, g.bit_neighbors
        ):
            cid = len(clusters)
            qubits = np.asarray([nsq + a * r + a_p for a in comp_as], dtype=np.int32)
            checks = np.asarray([b * r + a_p for b in comp_checks], dtype=np.int32)
            clusters.append(Cluster(Orientation.HORIZONTAL, a_p, qubits, checks, checks[:0]))
            for c in checks.tolist():
                check_owner_h[c] = cid

    edges = []
    shared = sorted(set(check_owner_v) & set(check_owner_h))
    connecting_of: dict[int, list[int]] = {}
    for c in shared:
        vid, hid = check_owner_v[c], check_owner_h[c]
        edges.append((vid, hid, c))
        connecting_of.setdefault(vid, []).append(c)
        connecting_of.setdefault(hid, []).append(c)

    for cid, cluster in enumerate(clusters):
        conn = np.asarray(sorted(connecting_of.get(cid, [])), dtype=np.int32)
        cluster.connecting_checks = conn
        cluster.internal_checks = np.setdiff1d(cluster.internal_checks, conn)
    return VhGraph(clusters, edges)


def _line_components(erased_nodes, node_to_links, link_to_nodes):
    """Connected components of erased nodes within one line's classical graph.

    Yields (sorted nodes, sorted links) where links are the classical check
    indices incident to the component.
    """
    remaining = set(erased_nodes)
    while remaining:
        start = min(remaining)
        remaining.discard(start)
        comp = {start}
        links: set[int] = set()
        stack = [start]
        while stack:
            x = stack.pop()
            for link in node_to_links(x):
                link = int(link)
                if link in links:
                    continue
                links.add(link)
                for y in link_to_nodes(link):
                    y = int(y)
                    if y in remaining:
                        remaining.discard(y)
                        comp.add(y)
                        stack.append(y)
        yield sorted(comp), sorted(links)


def _is_free(code: HgpCode, row_ids: np.ndarray, qubits: np.ndarray, check: int) -> bool:
    """A check is free iff its restricted row escapes the internal row span,
    i.e. some in-cluster error has trivial internal syndrome and odd overlap
    with the check."""
    tz = code.tanner_z
    base = _kernels.rank_support_csr(tz.check_indptr, tz.check_indices, row_ids, qubits)
    stacked = np.append(row_ids, np.int32(check)).astype(np.int32)
    grown = _kernels.rank_support_csr(tz.check_indptr, tz.check_indices, stacked, qubits)
    return grown > base


def classify(code: HgpCode, cluster: Cluster) -> ClusterStatus:
    """Isolated / frozen-dangling / free-dangling / blocked, from the
    connecting-check count and the free-check linear algebra."""
    k = len(cluster.connecting_checks)
    if k == 0:
        return ClusterStatus(ClusterStatusTag.ISOLATED)
    if k >= 2:
        return ClusterStatus(ClusterStatusTag.BLOCKED)
    c = int(cluster.connecting_checks[0])
    if _is_free(code, cluster.internal_checks, cluster.qubits, c):
        return ClusterStatus(ClusterStatusTag.FREE_DANGLING, free_check=c)
    return ClusterStatus(ClusterStatusTag.FROZEN_DANGLING)


def solve_cluster(
    code: HgpCode, cluster: Cluster, s: BinaryVector, include_connecting: bool = False
) -> BinaryVector | None:
    """Correction supported on the cluster matching s on its internal checks
    (optionally also its connecting checks).  None signals an inconsistent
    syndrome, which means a contract violation upstream."""
    if s.n != code.num_z_checks:
        raise ValueError(f"syndrome length {s.n} != Z check count {code.num_z_checks}")
    row_ids = cluster.internal_checks
    if include_connecting:
        row_ids = np.concatenate([row_ids, cluster.connecting_checks]).astype(np.int32)
    s_bits = s.to_bits()
    return _solve_rows(code, row_ids, cluster.qubits, s_bits[row_ids])


def _solve_rows(code, row_ids, qubits, rhs) -> BinaryVector | None:
    tz = code.tanner_z
    row_ids = np.ascontiguousarray(row_ids, dtype=np.int32)
    status, sol = _kernels.solve_support_csr(
        tz.check_indptr, tz.check_indices, row_ids, rhs.astype(np.uint8), qubits
    )
    if status != 0:
        return None
    return BinaryVector.from_indices(code.N, qubits[sol == 1])


def vh_decode(code: HgpCode, erasure: BinaryVector, s: BinaryVector) -> DecodeOutcome:
    """Two-phase cluster schedule: solve isolated/frozen clusters eagerly,
    defer free dangling clusters, then unwind the deferred stack."""
    if erasure.n != code.N:
        raise ValueError(f"erasure length {erasure.n} != qubit count {code.N}")
    if s.n != code.num_z_checks:
        raise ValueError(f"syndrome length {s.n} != Z check count {code.num_z_checks}")

    vg = decompose(code, erasure)
    ncl = len(vg.clusters)
    tz = code.tanner_z
    erased = erasure.to_bits()
    synd = s.to_bits()
    corr = np.zeros(code.N, dtype=np.uint8)
    stats = DecodeStats()

    alive = [True] * ncl
    internal: list[list[int]] = [c.internal_checks.tolist() for c in vg.clusters]
    conn: list[dict[int, int]] = [{} for _ in range(ncl)]
    for vid, hid, c in vg.edges:
        conn[vid][c] = hid
        conn[hid][c] = vid
    stack: list[tuple[int, list[int]]] = []

    def fold_correction(cluster: Cluster, sol: BinaryVector) -> None:
        set_qubits = sol.support()
        if set_qubits.size:
            corr[set_qubits] ^= 1
            touched = np.concatenate([tz.bit_neighbors(int(q)) for q in set_qubits])
            np.bitwise_xor.at(synd, touched, 1)

    while True:
        pick = None
        pick_key = None
        for cid in range(ncl):
            if not alive[cid]:
                continue
            k = len(conn[cid])
            if k > 1:
                continue
            cl = vg.clusters[cid]
            key = (0 if k == 0 else 1, cl.orientation.value, cl.line_index, cid)
            if pick_key is None or key < pick_key:
                pick, pick_key = cid, key
        if pick is None:
            break
        cl = vg.clusters[pick]
        rows = np.asarray(internal[pick], dtype=np.int32)
        if len(conn[pick]) == 0:
            free_check = None
        else:
            c = next(iter(conn[pick]))
            free_check = c if _is_free(code, rows, cl.qubits, c) else None
        if free_check is None:
            sol = _solve_rows(code, rows, cl.qubits, synd[rows])
            if sol is None:
                raise ValueError("cluster system inconsistent: syndrome does not match erasure")
            fold_correction(cl, sol)
            if len(conn[pick]) == 1:
                c, neighbor = next(iter(conn[pick].items()))
                del conn[neighbor][c]
                internal[neighbor].append(c)
        else:
            c = free_check
            neighbor = conn[pick][c]
            del conn[neighbor][c]
            stack.append((pick, internal[pick] + [c]))
        erased[cl.qubits] = 0
        alive[pick] = False

    if any(alive):
        return DecodeOutcome(
            DecodeStatus.ABORTED,
            residual_erasure=BinaryVector.from_bits(erased),
            partial_correction=BinaryVector.from_bits(corr),
            residual_syndrome=BinaryVector.from_bits(synd),
            stats=stats,
        )

    while stack:
        cid, row_list = stack.pop()
        cl = vg.clusters[cid]
        rows = np.asarray(row_list, dtype=np.int32)
        sol = _solve_rows(code, rows, cl.qubits, synd[rows])
        if sol is None:
            raise ValueError("deferred cluster system inconsistent: free check bookkeeping broken")
        fold_correction(cl, sol)

    if synd.any():
        raise ValueError("syndrome is inconsistent with an error inside the erasure")
    return DecodeOutcome(
        DecodeStatus.CORRECTED, correction=BinaryVector.from_bits(corr), stats=stats
    )


def combined_decode(
    code: HgpCode, erasure: BinaryVector, s: BinaryVector, cfg: PruneConfig
) -> DecodeOutcome:
    """Pruned peeling first; leftovers go to the cluster decoder."""
    first = pruned_peel(code, erasure, s, cfg)
    if first.status is DecodeStatus.CORRECTED:
        return first
    second = vh_decode(code, first.residual_erasure, first.residual_syndrome)
    if second.status is DecodeStatus.ABORTED:
        return DecodeOutcome(
            DecodeStatus.ABORTED,
            residual_erasure=second.residual_erasure,
            partial_correction=first.partial_correction ^ second.partial_correction,
            residual_syndrome=second.residual_syndrome,
            stats=first.stats,
        )
    return DecodeOutcome(
        DecodeStatus.CORRECTED,
        correction=first.partial_correction ^ second.correction,
        stats=first.stats,
    )


def dump_vh_graph(vg: VhGraph) -> str:
    """Edge list for failure forensics: one `V<i> H<j> check=<c>` line per
    edge, clusters numbered within their orientation."""
    nv = vg.num_vertical
    lines = []
    for vid, hid, c in sorted(vg.edges, key=lambda e: e[2]):
        lines.append(f"V{vid} H{hid - nv} check={c}")
    return "\n".join(lines) + ("\n" if lines else "")
