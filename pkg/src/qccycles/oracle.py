"""Brute-force ground truth on the lifted Tanner graph.

Nothing here knows about chains or slopes: cycles are found by exhaustive
depth-first search over simple paths, so the results can be compared with
the chain-based counts without sharing any of their reasoning.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .counting import CycleSpectrum
from .model import LiftedMatrix


class ExpansionBudgetExceeded(RuntimeError):
    def __init__(self, budget: int):
        super().__init__(f"search exceeded the node-expansion budget of {budget}")
        self.budget = budget


@dataclass(frozen=True)
class TannerGraph:
    """Bipartite graph; vertex ids are checks ``0..C-1`` then variables ``C..C+V-1``."""

    n_checks: int
    n_variables: int
    check_adj: tuple[tuple[int, ...], ...]
    variable_adj: tuple[tuple[int, ...], ...]

    @classmethod
    def from_edges(cls, n_checks: int, n_variables: int, edges: Iterable[tuple[int, int]]) -> "TannerGraph":
        """Build from (check, variable) pairs, both 0-based."""
        cadj: list[set[int]] = [set() for _ in range(n_checks)]
        vadj: list[set[int]] = [set() for _ in range(n_variables)]
        for c, u in edges:
            if not (0 <= c < n_checks and 0 <= u < n_variables):
                raise ValueError(f"edge ({c},{u}) outside a {n_checks}x{n_variables} graph")
            cadj[c].add(u)
            vadj[u].add(c)
        return cls(
            n_checks,
            n_variables,
            tuple(tuple(sorted(a)) for a in cadj),
            tuple(tuple(sorted(a)) for a in vadj),
        )

    @classmethod
    def from_lifted(cls, lifted: LiftedMatrix) -> "TannerGraph":
        return cls.from_edges(lifted.rows, lifted.cols, lifted.positions)

    @property
    def n_vertices(self) -> int:
        return self.n_checks + self.n_variables

    def edges(self) -> list[tuple[int, int]]:
        return [(c, u) for c, adj in enumerate(self.check_adj) for u in adj]

    def adjacency(self) -> list[list[int]]:
        """Neighbour lists over the unified vertex ids."""
        off = self.n_checks
        adj = [[off + u for u in a] for a in self.check_adj]
        adj += [list(a) for a in self.variable_adj]
        return adj

    def relabeled(self, check_perm: Sequence[int], variable_perm: Sequence[int]) -> "TannerGraph":
        return TannerGraph.from_edges(
            self.n_checks,
            self.n_variables,
            ((check_perm[c], variable_perm[u]) for c, u in self.edges()),
        )


def _distances(adj: list[list[int]], root: int, floor: int) -> list[int]:
    """BFS distances from ``root`` using only vertices >= ``floor``; -1 if unreachable."""
    dist = [-1] * len(adj)
    dist[root] = 0
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y >= floor and dist[y] < 0:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def _empty_counts(l_max: int) -> dict[int, int]:
    return {2 * l: 0 for l in range(2, l_max + 1)}


def brute_count_cycles(graph: TannerGraph, l_max: int, budget: int | None = None) -> CycleSpectrum:
    """Exact number of simple cycles of each even length up to ``2*l_max``.

    Each cycle is rooted at its smallest vertex, and of its two traversal
    directions only the one whose second vertex is below its last is kept.
    """
    adj = graph.adjacency()
    max_len = 2 * l_max
    counts = [0] * (max_len + 1)
    on_path = bytearray(len(adj))
    expansions = 0

    for root in range(len(adj)):
        dist = _distances(adj, root, root)
        on_path[root] = 1

        def dfs(x: int, depth: int, first: int) -> None:
            nonlocal expansions
            expansions += 1
            if budget is not None and expansions > budget:
                raise ExpansionBudgetExceeded(budget)
            for y in adj[x]:
                if y == root:
                    if depth >= 3 and first < x:
                        counts[depth + 1] += 1
                elif y > root and not on_path[y] and 0 <= dist[y] and depth + 1 + dist[y] <= max_len:
                    on_path[y] = 1
                    dfs(y, depth + 1, first if depth else y)
                    on_path[y] = 0

        dfs(root, 0, -1)
        on_path[root] = 0

    spectrum = _empty_counts(l_max)
    for length in spectrum:
        spectrum[length] = counts[length]
    return CycleSpectrum(spectrum, max_len)


def cycles_through(graph: TannerGraph, root: int, l_max: int, budget: int | None = None) -> dict[int, int]:
    """Number of simple cycles of each even length that pass through ``root``."""
    adj = graph.adjacency()
    max_len = 2 * l_max
    dist = _distances(adj, root, 0)
    closed = [0] * (max_len + 1)
    on_path = bytearray(len(adj))
    on_path[root] = 1
    expansions = 0

    def dfs(x: int, depth: int) -> None:
        nonlocal expansions
        expansions += 1
        if budget is not None and expansions > budget:
            raise ExpansionBudgetExceeded(budget)
        for y in adj[x]:
            if y == root:
                if depth >= 3:
                    closed[depth + 1] += 1
            elif not on_path[y] and 0 <= dist[y] and depth + 1 + dist[y] <= max_len:
                on_path[y] = 1
                dfs(y, depth + 1)
                on_path[y] = 0

    dfs(root, 0)
    # every cycle through root is closed once in each direction
    counts = _empty_counts(l_max)
    for length in counts:
        counts[length] = closed[length] // 2
    return counts


def orbit_count_cycles(
    graph: TannerGraph,
    representatives: Sequence[int],
    orbit_size: int,
    l_max: int,
    budget: int | None = None,
) -> CycleSpectrum:
    """Cycle counts for a graph with a free vertex-transitive-on-orbits automorphism group.

    ``representatives`` must hold one vertex from each orbit, and every orbit
    must have ``orbit_size`` vertices.  Summing cycles through each vertex
    counts every cycle once per vertex, so ``2l * count = orbit_size * sum``.
    Lifted QC graphs qualify, with the simultaneous index shift as automorphism.
    """
    totals = _empty_counts(l_max)
    for rep in representatives:
        for length, n in cycles_through(graph, rep, l_max, budget).items():
            totals[length] += n
    counts = {}
    for length, n in totals.items():
        q, rem = divmod(orbit_size * n, length)
        if rem:
            raise ValueError("orbit data inconsistent with the graph's automorphisms")
        counts[length] = q
    return CycleSpectrum(counts, 2 * l_max)


def qc_orbit_representatives(v: int, k: int, m: int) -> list[int]:
    """First vertex of every check block and variable block of a v x k lift of size m."""
    return [i * m for i in range(v)] + [v * m + j * m for j in range(k)]


def bfs_girth(graph: TannerGraph) -> int | None:
    """Length of the shortest cycle, or None for a forest."""
    adj = graph.adjacency()
    n = len(adj)
    best = None
    for root in range(n):
        dist = [-1] * n
        parent = [-1] * n
        dist[root] = 0
        queue = deque([root])
        while queue:
            x = queue.popleft()
            if best is not None and 2 * dist[x] + 1 >= best:
                break
            for y in adj[x]:
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    queue.append(y)
                elif y != parent[x]:
                    length = dist[x] + dist[y] + 1
                    if best is None or length < best:
                        best = length
    return best
