"""Undirected graph with node-crash semantics.

The attack simulations never delete edges from the adjacency structure.
A node is removed by flipping its live flag; the adjacency built at
construction time stays immutable so that traces can be replayed and
graphs can be copied cheaply. Live degrees are maintained incrementally
and indexed in degree buckets, which keeps the max-live-degree query
O(1) amortized while an attack removes thousands of nodes one by one.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

log = logging.getLogger(__name__)

# clusters at least this large use the scipy BFS kernel for pairwise distances
_SCIPY_CUTOFF = 512
_SCIPY_CHUNK = 256


@dataclass(frozen=True)
class ClusterReport:
    """Largest connected set of live nodes."""

    size: int
    members: frozenset[int]
    fraction: float


class Graph:
    """Simple undirected graph supporting irreversible node crashes.

    Build instances through :func:`build_graph` or the generators module.
    ``adjacency`` is shared between copies and must not be mutated.
    """

    __slots__ = (
        "node_count",
        "adjacency",
        "alive",
        "live_degree",
        "live_count",
        "dropped_duplicates",
        "dropped_self_loops",
        "_buckets",
        "_max_degree",
        "_live_list",
        "_live_pos",
    )

    def __init__(
        self,
        adjacency: list[list[int]],
        *,
        dropped_duplicates: int = 0,
        dropped_self_loops: int = 0,
    ):
        n = len(adjacency)
        self.node_count = n
        self.adjacency = adjacency
        self.alive = [True] * n
        self.live_degree = [len(nbrs) for nbrs in adjacency]
        self.live_count = n
        self.dropped_duplicates = dropped_duplicates
        self.dropped_self_loops = dropped_self_loops
        max_degree = max(self.live_degree, default=0)
        buckets: list[set[int]] = [set() for _ in range(max_degree + 1)]
        for v, d in enumerate(self.live_degree):
            buckets[d].add(v)
        self._buckets = buckets
        self._max_degree = max_degree
        self._live_list = list(range(n))
        self._live_pos = list(range(n))

    # -- construction helpers -------------------------------------------------

    def copy(self) -> "Graph":
        """Independent crash state over the same (shared) adjacency."""
        g = Graph.__new__(Graph)
        g.node_count = self.node_count
        g.adjacency = self.adjacency
        g.alive = list(self.alive)
        g.live_degree = list(self.live_degree)
        g.live_count = self.live_count
        g.dropped_duplicates = self.dropped_duplicates
        g.dropped_self_loops = self.dropped_self_loops
        g._buckets = [set(b) for b in self._buckets]
        g._max_degree = self._max_degree
        g._live_list = list(self._live_list)
        g._live_pos = list(self._live_pos)
        return g

    # -- basic queries ---------------------------------------------------------

    @property
    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self.adjacency) // 2

    def live_nodes(self) -> list[int]:
        """Live node ids in ascending order."""
        return sorted(self._live_list)

    def live_neighbors(self, v: int) -> set[int]:
        """Live neighbors of v; valid for crashed v as well."""
        self._check_id(v)
        alive = self.alive
        return {u for u in self.adjacency[v] if alive[u]}

    def degree_index(self) -> dict[int, set[int]]:
        """Live nodes bucketed by live degree (diagnostics, tests)."""
        return {d: set(b) for d, b in enumerate(self._buckets) if b}

    def random_live_node(self, rng) -> int | None:
        """Uniform draw over live nodes, None if all crashed."""
        if not self._live_list:
            return None
        return self._live_list[rng.randrange(len(self._live_list))]

    def _check_id(self, v: int) -> None:
        if not 0 <= v < self.node_count:
            raise ValueError(f"node id {v} outside [0, {self.node_count})")

    # -- mutation ----------------------------------------------------------------

    def crash_node(self, v: int) -> None:
        """Remove a live node and detach it from every live neighbor."""
        self._check_id(v)
        if not self.alive[v]:
            raise ValueError(f"node {v} already crashed")
        self.alive[v] = False
        self._buckets[self.live_degree[v]].discard(v)
        self.live_degree[v] = 0
        pos = self._live_pos[v]
        last = self._live_list[-1]
        self._live_list[pos] = last
        self._live_pos[last] = pos
        self._live_list.pop()
        self._live_pos[v] = -1
        self.live_count -= 1
        alive = self.alive
        degree = self.live_degree
        buckets = self._buckets
        for u in self.adjacency[v]:
            if alive[u]:
                d = degree[u]
                buckets[d].discard(u)
                buckets[d - 1].add(u)
                degree[u] = d - 1

    # -- degree queries ---------------------------------------------------------

    def max_live_degree_node(self, excluded: Iterable[int] = ()) -> int | None:
        """Live node of maximum live degree, skipping ``excluded``.

        Ties break to the smallest node id. Returns None when no live
        node is eligible.
        """
        buckets = self._buckets
        d = self._max_degree
        while d >= 0 and not buckets[d]:
            d -= 1
        self._max_degree = d if d >= 0 else 0
        if d < 0:
            return None
        if not excluded:
            return min(buckets[d])
        if not isinstance(excluded, (set, frozenset)):
            excluded = set(excluded)
        while d >= 0:
            best = None
            for v in buckets[d]:
                if v not in excluded and (best is None or v < best):
                    best = v
            if best is not None:
                return best
            d -= 1
        return None

    # -- connectivity ----------------------------------------------------------

    def _component_scan(self) -> tuple[list[int], int]:
        """One sweep over live nodes: (largest component, component count).

        Scanning seeds in ascending id order and replacing the best only
        on strictly larger size makes the size tie break to the component
        containing the smallest id.
        """
        alive = self.alive
        adjacency = self.adjacency
        seen = bytearray(self.node_count)
        best: list[int] = []
        count = 0
        for s in range(self.node_count):
            if not alive[s] or seen[s]:
                continue
            count += 1
            comp = [s]
            seen[s] = 1
            i = 0
            while i < len(comp):
                v = comp[i]
                i += 1
                for u in adjacency[v]:
                    if alive[u] and not seen[u]:
                        seen[u] = 1
                        comp.append(u)
            if len(comp) > len(best):
                best = comp
        return best, count

    def largest_cluster(self) -> ClusterReport:
        """Biggest connected cluster of live nodes.

        ``fraction`` is relative to the original node count, so it keeps
        falling as nodes crash; with no live nodes it is 0.0.
        """
        best, _ = self._component_scan()
        fraction = len(best) / self.node_count if self.node_count else 0.0
        return ClusterReport(size=len(best), members=frozenset(best), fraction=fraction)

    def component_count(self) -> int:
        return self._component_scan()[1]

    # -- distances ----------------------------------------------------------------

    def avg_shortest_path(self, members: Iterable[int]) -> float | None:
        """Mean hop count over unordered member pairs, through live paths.

        Returns None for fewer than two members. Raises ValueError if the
        members do not sit in one live connected component. Intended for
        the member set reported by largest_cluster.
        """
        ids = sorted(members)
        for v in ids:
            self._check_id(v)
            if not self.alive[v]:
                raise ValueError(f"member {v} is crashed")
        if len(ids) != len(set(ids)):
            raise ValueError("duplicate member ids")
        if len(ids) < 2:
            return None
        if len(ids) >= _SCIPY_CUTOFF:
            total = self._pair_distance_sum_scipy(ids)
        else:
            total = self._pair_distance_sum_python(ids)
        k = len(ids)
        return total / (k * (k - 1))

    def _pair_distance_sum_python(self, ids: list[int]) -> int:
        """Ordered-pair distance total via one BFS per member."""
        n = self.node_count
        alive = self.alive
        adjacency = self.adjacency
        is_member = bytearray(n)
        for v in ids:
            is_member[v] = 1
        k = len(ids)
        total = 0
        for src in ids:
            dist = [-1] * n
            dist[src] = 0
            frontier = [src]
            reached = 1
            while frontier:
                nxt = []
                for v in frontier:
                    dv = dist[v] + 1
                    for u in adjacency[v]:
                        if alive[u] and dist[u] < 0:
                            dist[u] = dv
                            nxt.append(u)
                            if is_member[u]:
                                total += dv
                                reached += 1
                frontier = nxt
            if reached < k:
                raise ValueError("members span more than one live component")
        return total

    def _pair_distance_sum_scipy(self, ids: list[int]) -> int:
        """Same total as the python kernel, batched through scipy.

        Hop counts are small integers, exactly representable in float64,
        so the two kernels agree bit for bit.
        """
        import numpy as np
        from scipy.sparse import csr_matrix
        from scipy.sparse.csgraph import dijkstra

        live = sorted(self._live_list)
        pos = {v: i for i, v in enumerate(live)}
        alive = self.alive
        rows: list[int] = []
        cols: list[int] = []
        for v in live:
            pv = pos[v]
            for u in self.adjacency[v]:
                if alive[u]:
                    rows.append(pv)
                    cols.append(pos[u])
        data = np.ones(len(rows), dtype=np.int8)
        mat = csr_matrix((data, (rows, cols)), shape=(len(live), len(live)))
        member_pos = np.array([pos[v] for v in ids], dtype=np.int64)
        total = 0
        for start in range(0, len(member_pos), _SCIPY_CHUNK):
            chunk = member_pos[start : start + _SCIPY_CHUNK]
            dist = dijkstra(mat, directed=True, unweighted=True, indices=chunk)
            block = dist[:, member_pos]
            if np.isinf(block).any():
                raise ValueError("members span more than one live component")
            total += int(block.sum())
        return total


def build_graph(n: int, edges: Iterable[Sequence[int]]) -> Graph:
    """Graph on node ids 0..n-1 from an edge pair iterable.

    Duplicate edges (either orientation) and self-loops are dropped with
    a warning; counts land in dropped_duplicates / dropped_self_loops.
    An endpoint outside [0, n) raises ValueError.
    """
    if n < 0:
        raise ValueError(f"node count must be >= 0, got {n}")
    neighbor_sets: list[set[int]] = [set() for _ in range(n)]
    duplicates = 0
    self_loops = 0
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u}, {v}) has an endpoint outside [0, {n})")
        if u == v:
            self_loops += 1
            continue
        if v in neighbor_sets[u]:
            duplicates += 1
            continue
        neighbor_sets[u].add(v)
        neighbor_sets[v].add(u)
    if duplicates or self_loops:
        log.warning(
            "dropped %d duplicate edge(s) and %d self-loop(s)", duplicates, self_loops
        )
    adjacency = [sorted(s) for s in neighbor_sets]
    return Graph(
        adjacency,
        dropped_duplicates=duplicates,
        dropped_self_loops=self_loops,
    )
