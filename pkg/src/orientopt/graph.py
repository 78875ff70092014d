"""Core multigraph types and structural routines.

Vertices are integers ``0..n-1``.  Edges are endpoint pairs kept in input
order and addressed by their index (edge id).  Parallel edges are allowed
everywhere; loops only where a mode explicitly supports them (vertex
orders, not orientations).  Edge weights are exact rationals.

A vertex order is a plain tuple containing each vertex exactly once.  An
:class:`Orientation` stores, per edge id, which endpoint is the head.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence


def as_fraction(value) -> Fraction:
    """Convert a weight to an exact Fraction.

    Floats go through their shortest decimal repr, so ``0.1`` becomes
    ``1/10`` rather than the nearest binary float.  Strings accept both
    ``"3/2"`` and ``"1.5"``.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(str(value))
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact weight")


@dataclass(frozen=True)
class Multigraph:
    """Undirected multigraph, immutable after construction.

    Build instances through :func:`build_graph`, which validates
    endpoints, weights and the loop policy.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    weights: tuple[Fraction, ...] | None = None
    allow_loops: bool = False

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def incident(self) -> tuple[tuple[int, ...], ...]:
        """Edge ids incident to each vertex; a loop appears once."""
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for j, (u, v) in enumerate(self.edges):
            inc[u].append(j)
            if v != u:
                inc[v].append(j)
        return tuple(tuple(ids) for ids in inc)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        """Vertex degrees; a loop adds exactly one."""
        return tuple(len(ids) for ids in self.incident)

    @cached_property
    def weighted_degrees(self) -> tuple[Fraction, ...]:
        w = self.weights
        if w is None:
            return tuple(Fraction(d) for d in self.degrees)
        deg = [Fraction(0)] * self.n
        for j, (u, v) in enumerate(self.edges):
            deg[u] += w[j]
            if v != u:
                deg[v] += w[j]
        return tuple(deg)

    @cached_property
    def loop_counts(self) -> tuple[int, ...]:
        cnt = [0] * self.n
        for u, v in self.edges:
            if u == v:
                cnt[u] += 1
        return tuple(cnt)

    @cached_property
    def neighbor_counts(self) -> tuple[dict[int, int], ...]:
        """Per vertex, multiplicity of each non-loop neighbor."""
        nbr: list[dict[int, int]] = [{} for _ in range(self.n)]
        for u, v in self.edges:
            if u != v:
                nbr[u][v] = nbr[u].get(v, 0) + 1
                nbr[v][u] = nbr[v].get(u, 0) + 1
        return tuple(nbr)

    @cached_property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    @cached_property
    def has_loops(self) -> bool:
        return any(u == v for u, v in self.edges)

    @cached_property
    def is_simple(self) -> bool:
        if self.has_loops:
            return False
        return all(c == 1 for nbr in self.neighbor_counts for c in nbr.values())

    def other_end(self, eid: int, v: int) -> int:
        u, w = self.edges[eid]
        return w if v == u else u

    def weight(self, eid: int) -> Fraction:
        return self.weights[eid] if self.weights is not None else Fraction(1)


def build_graph(n: int, edges: Iterable, weights=None, allow_loops: bool = False) -> Multigraph:
    """Validating constructor for :class:`Multigraph`.

    ``edges`` is an iterable of endpoint pairs.  ``weights``, if given,
    must supply one non-negative rational per edge (int, Fraction, float
    or string; see :func:`as_fraction`).  Loops are rejected unless
    ``allow_loops`` is set.
    """
    if n < 0:
        raise ValueError("vertex count must be non-negative")
    edge_list: list[tuple[int, int]] = []
    for pos, e in enumerate(edges):
        u, v = e
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge {pos} endpoint out of range: ({u}, {v})")
        if u == v and not allow_loops:
            raise ValueError(f"edge {pos} is a loop at {u}, but loops are not enabled")
        edge_list.append((u, v))
    wt: tuple[Fraction, ...] | None = None
    if weights is not None:
        wlist = [as_fraction(w) for w in weights]
        if len(wlist) != len(edge_list):
            raise ValueError("weight count does not match edge count")
        for pos, w in enumerate(wlist):
            if w < 0:
                raise ValueError(f"edge {pos} has negative weight {w}")
        wt = tuple(wlist)
    return Multigraph(n, tuple(edge_list), wt, allow_loops)


@dataclass(frozen=True)
class Orientation:
    """Head endpoint per edge id."""

    heads: tuple[int, ...]


@dataclass(frozen=True)
class DegreeVector:
    """Indegree/outdegree (or left/right degree) per vertex."""

    indeg: tuple
    outdeg: tuple


def check_order(graph: Multigraph, order: Sequence[int]) -> tuple[int, ...]:
    order = tuple(order)
    if sorted(order) != list(range(graph.n)):
        raise ValueError("order is not a permutation of the vertices")
    return order


def check_orientation(graph: Multigraph, orientation: Orientation) -> None:
    heads = orientation.heads
    if len(heads) != graph.m:
        raise ValueError("orientation does not cover every edge")
    for j, (u, v) in enumerate(graph.edges):
        if u == v:
            raise ValueError("graphs with loops cannot be oriented")
        if heads[j] != u and heads[j] != v:
            raise ValueError(f"head of edge {j} is not one of its endpoints")


def degrees_of_order(graph: Multigraph, order: Sequence[int], weighted: bool = False) -> DegreeVector:
    """Left/right degrees of a vertex order.

    The left degree counts edges to earlier vertices; a loop contributes
    exactly one to the left degree of its vertex.  With ``weighted``,
    counts become weight sums.
    """
    order = check_order(graph, order)
    pos = [0] * graph.n
    for i, v in enumerate(order):
        pos[v] = i
    zero = Fraction(0) if weighted else 0
    indeg = [zero] * graph.n
    for j, (u, v) in enumerate(graph.edges):
        w = graph.weight(j) if weighted else 1
        if u == v:
            indeg[u] += w
        elif pos[u] < pos[v]:
            indeg[v] += w
        else:
            indeg[u] += w
    total = graph.weighted_degrees if weighted else graph.degrees
    outdeg = [total[v] - indeg[v] for v in range(graph.n)]
    return DegreeVector(tuple(indeg), tuple(outdeg))


def orientation_of_order(graph: Multigraph, order: Sequence[int]) -> Orientation:
    """Direct every edge from its earlier endpoint to its later one."""
    order = check_order(graph, order)
    if graph.has_loops:
        raise ValueError("graphs with loops cannot be oriented")
    pos = [0] * graph.n
    for i, v in enumerate(order):
        pos[v] = i
    heads = tuple(v if pos[u] < pos[v] else u for u, v in graph.edges)
    return Orientation(heads)


def degrees_of_orientation(graph: Multigraph, orientation: Orientation, weighted: bool = False) -> DegreeVector:
    check_orientation(graph, orientation)
    zero = Fraction(0) if weighted else 0
    indeg = [zero] * graph.n
    for j, head in enumerate(orientation.heads):
        indeg[head] += graph.weight(j) if weighted else 1
    total = graph.weighted_degrees if weighted else graph.degrees
    outdeg = [total[v] - indeg[v] for v in range(graph.n)]
    return DegreeVector(tuple(indeg), tuple(outdeg))


def is_acyclic(graph: Multigraph, orientation: Orientation) -> bool:
    return topological_order(graph, orientation) is not None


def topological_order(graph: Multigraph, orientation: Orientation):
    """Topological order of an oriented graph, or None if it has a
    directed cycle.  Ties go to the lowest vertex id."""
    check_orientation(graph, orientation)
    import heapq

    indeg = [0] * graph.n
    out: list[list[int]] = [[] for _ in range(graph.n)]
    for j, head in enumerate(orientation.heads):
        tail = graph.other_end(j, head)
        out[tail].append(head)
        indeg[head] += 1
    ready = [v for v in range(graph.n) if indeg[v] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        v = heapq.heappop(ready)
        order.append(v)
        for w in out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(ready, w)
    if len(order) != graph.n:
        return None
    return tuple(order)


def is_connected(graph: Multigraph) -> bool:
    if graph.n == 0:
        return True
    seen = [False] * graph.n
    seen[0] = True
    stack = [0]
    while stack:
        v = stack.pop()
        for eid in graph.incident[v]:
            u = graph.other_end(eid, v)
            if not seen[u]:
                seen[u] = True
                stack.append(u)
    return all(seen)


# ---------------------------------------------------------------------------
# Blocks (biconnected components) and the block-cut tree.


@dataclass(frozen=True)
class Block:
    vertices: tuple[int, ...]
    edge_ids: tuple[int, ...]


@dataclass(frozen=True)
class BlockTree:
    """Biconnected components of a connected graph plus its cut vertices.

    ``block_cuts[i]`` lists the cut vertices lying in block ``i``; a block
    with exactly one cut vertex is an end component, and a biconnected
    graph yields a single block with none.
    """

    blocks: tuple[Block, ...]
    cut_vertices: frozenset[int]
    block_cuts: tuple[tuple[int, ...], ...] = field(default=())

    def is_end_component(self, i: int) -> bool:
        return len(self.block_cuts[i]) == 1

    def blocks_at(self, v: int) -> tuple[int, ...]:
        return tuple(i for i, b in enumerate(self.blocks) if v in b.vertices)


def block_tree(graph: Multigraph) -> BlockTree:
    """Decompose a connected loop-free graph into blocks.

    Iterative lowpoint DFS with an edge stack; parallel edges land in the
    same block because the second copy is a back edge.
    """
    if graph.has_loops:
        raise ValueError("block decomposition requires a loop-free graph")
    if not is_connected(graph):
        raise ValueError("block decomposition requires a connected graph")
    n = graph.n
    if n == 0:
        return BlockTree((), frozenset(), ())
    disc = [0] * n
    low = [0] * n
    edge_stack: list[int] = []
    raw_blocks: list[list[int]] = []
    counter = 1
    disc[0] = low[0] = 1
    # frame: [vertex, parent edge id, next index into incident list]
    frames: list[list[int]] = [[0, -1, 0]]
    while frames:
        frame = frames[-1]
        v, pe, idx = frame
        advanced = False
        inc = graph.incident[v]
        while idx < len(inc):
            eid = inc[idx]
            idx += 1
            if eid == pe:
                continue
            u = graph.other_end(eid, v)
            if disc[u] == 0:
                edge_stack.append(eid)
                counter += 1
                disc[u] = low[u] = counter
                frame[2] = idx
                frames.append([u, eid, 0])
                advanced = True
                break
            if disc[u] < disc[v]:
                # back edge to an ancestor; seen once, from below
                edge_stack.append(eid)
                if disc[u] < low[v]:
                    low[v] = disc[u]
        if advanced:
            continue
        frames.pop()
        if pe != -1:
            u = frames[-1][0]
            if low[v] < low[u]:
                low[u] = low[v]
            if low[v] >= disc[u]:
                # edges above pe (inclusive) form one block
                blk = []
                while True:
                    top = edge_stack.pop()
                    blk.append(top)
                    if top == pe:
                        break
                raw_blocks.append(blk)
    blocks = []
    for blk in raw_blocks:
        verts = set()
        for eid in blk:
            verts.update(graph.edges[eid])
        blocks.append(Block(tuple(sorted(verts)), tuple(sorted(blk))))
    blocks.sort(key=lambda b: b.vertices)
    membership: dict[int, int] = {}
    cuts = set()
    for b in blocks:
        for v in b.vertices:
            membership[v] = membership.get(v, 0) + 1
    cuts = frozenset(v for v, c in membership.items() if c >= 2)
    block_cuts = tuple(tuple(v for v in b.vertices if v in cuts) for b in blocks)
    return BlockTree(tuple(blocks), cuts, block_cuts)


def subgraph(graph: Multigraph, vertices: Sequence[int], edge_ids: Sequence[int]):
    """Relabelled subgraph plus the local-to-global vertex map."""
    vmap = {v: i for i, v in enumerate(vertices)}
    edges = [(vmap[graph.edges[j][0]], vmap[graph.edges[j][1]]) for j in edge_ids]
    wt = None if graph.weights is None else [graph.weights[j] for j in edge_ids]
    sub = build_graph(len(vertices), edges, wt, allow_loops=graph.allow_loops)
    return sub, tuple(vertices)


# ---------------------------------------------------------------------------
# s-t orders of biconnected graphs.


def st_order(graph: Multigraph, s: int, t: int) -> tuple[int, ...]:
    """Order starting at ``s`` and ending at ``t`` in which every other
    vertex has both an earlier and a later neighbor.

    Requires a biconnected graph (a single edge counts).  Any pair
    ``s != t`` works; when they are not adjacent the computation runs on
    the graph plus a virtual s-t edge, which changes nothing about the
    postcondition on real edges.
    """
    n = graph.n
    if not (0 <= s < n and 0 <= t < n) or s == t:
        raise ValueError("need two distinct vertices of the graph")
    if graph.has_loops:
        raise ValueError("s-t orders are defined for loop-free graphs")
    if n == 2 and graph.m >= 1:
        return (s, t)
    tree = block_tree(graph)
    if len(tree.blocks) != 1:
        raise ValueError("graph is not biconnected")

    edges = list(graph.edges)
    st_edges = [j for j, (u, v) in enumerate(edges) if {u, v} == {s, t}]
    if st_edges:
        first_edge = st_edges[0]
    else:
        first_edge = len(edges)
        edges.append((s, t))
    inc: list[list[int]] = [[] for _ in range(n)]
    for j, (u, v) in enumerate(edges):
        inc[u].append(j)
        inc[v].append(j)
    # make the chosen s-t edge the first one explored from s
    inc[s].remove(first_edge)
    inc[s].insert(0, first_edge)

    def other(eid, v):
        a, b = edges[eid]
        return b if v == a else a

    disc = [0] * n
    low = [0] * n
    low_edge = [-1] * n  # edge realizing low[v]: back edge up, or tree edge down
    parent_edge = [-1] * n
    parent = [-1] * n
    disc[s] = low[s] = 1
    counter = 1
    frames = [[s, 0]]
    while frames:
        frame = frames[-1]
        v, idx = frame
        advanced = False
        while idx < len(inc[v]):
            eid = inc[v][idx]
            idx += 1
            if eid == parent_edge[v]:
                continue
            u = other(eid, v)
            if disc[u] == 0:
                counter += 1
                disc[u] = low[u] = counter
                low_edge[u] = -1
                parent_edge[u] = eid
                parent[u] = v
                frame[1] = idx
                frames.append([u, 0])
                advanced = True
                break
            if disc[u] < disc[v] and disc[u] < low[v]:
                low[v] = disc[u]
                low_edge[v] = eid
        if advanced:
            continue
        frames.pop()
        p = parent[v]
        if p != -1 and low[v] < low[p]:
            low[p] = low[v]
            low_edge[p] = parent_edge[v]

    old_vertex = [False] * n
    old_edge = [False] * len(edges)
    old_vertex[s] = old_vertex[t] = True
    old_edge[first_edge] = True

    is_tree_edge = [False] * len(edges)
    for v in range(n):
        if parent_edge[v] != -1:
            is_tree_edge[parent_edge[v]] = True

    def pathfinder(v):
        for eid in inc[v]:
            if old_edge[eid]:
                continue
            u = other(eid, v)
            if disc[u] < disc[v] and not is_tree_edge[eid]:
                # back edge up to an ancestor
                old_edge[eid] = True
                return [v, u]
        for eid in inc[v]:
            if old_edge[eid]:
                continue
            u = other(eid, v)
            if is_tree_edge[eid] and parent[u] == v:
                # tree edge down; walk the lowpoint path to an old vertex
                old_edge[eid] = True
                path = [v, u]
                while not old_vertex[u]:
                    old_vertex[u] = True
                    nxt = low_edge[u]
                    old_edge[nxt] = True
                    x = other(nxt, u)
                    path.append(x)
                    u = x
                return path
        for eid in inc[v]:
            if old_edge[eid]:
                continue
            u = other(eid, v)
            if disc[u] > disc[v] and not is_tree_edge[eid]:
                # back edge arriving from a descendant; climb to an old vertex
                old_edge[eid] = True
                path = [v, u]
                while not old_vertex[u]:
                    old_vertex[u] = True
                    nxt = parent_edge[u]
                    old_edge[nxt] = True
                    path.append(parent[u])
                    u = parent[u]
                return path
        return None

    stack = [t, s]
    number = [0] * n
    nxt_num = 0
    while stack:
        v = stack.pop()
        path = pathfinder(v)
        if path is None:
            nxt_num += 1
            number[v] = nxt_num
        else:
            stack.extend(path[-2::-1])
    order = tuple(sorted(range(n), key=lambda v: number[v]))

    dv = degrees_of_order(graph, order)
    ok = order[0] == s and order[-1] == t
    for v in range(n):
        if v != s and v != t and graph.degrees[v] >= 2:
            ok = ok and dv.indeg[v] >= 1 and dv.outdeg[v] >= 1
    if not ok:
        raise RuntimeError("internal error: produced order is not an s-t order")
    return order
