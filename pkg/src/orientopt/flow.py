"""Cyclic-regime solver via min-cost flow.

An orientation minimizing a separable convex indegree cost corresponds
to a min-cost flow of value m on a layered network: the source feeds
each vertex node through d(v) parallel unit arcs whose l-th arc costs
phi(l) - phi(l-1) (non-decreasing by convexity, so cheaper units are
used first), vertex nodes feed the edge nodes of their incident edges,
and every edge node passes one unit to the sink.  The unit leaving edge
node j through vertex node v means v is the head of edge j.

Costs are :class:`LiftedCost` pairs throughout, so degree-bound
penalties dominate any finite cost without a numeric big-M.  Arc costs
are normalized by phi(0); the dropped constant is restored afterwards.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .graph import Multigraph, Orientation, build_graph, degrees_of_orientation
from .objectives import (
    DecMin,
    IncMax,
    LiftedCost,
    LiftedPhi,
    PhiSum,
    evaluate,
    exp_base,
    neg_exp_base,
)


@dataclass
class FlowNetwork:
    """Residual network; arcs come in forward/backward pairs (i, i^1)."""

    num_nodes: int
    source: int
    sink: int
    required: int
    to: list[int] = field(default_factory=list)
    cap: list[int] = field(default_factory=list)
    cost: list[LiftedCost] = field(default_factory=list)
    adj: list[list[int]] = field(default_factory=list)
    offset: LiftedCost = field(default_factory=LiftedCost.zero)
    # bookkeeping for extraction
    parallel: list[list[int]] = field(default_factory=list)  # per vertex, s-arc ids by level
    incidence: list[list[tuple[int, int]]] = field(default_factory=list)  # per edge, (arc, vertex)

    def add_arc(self, u: int, v: int, cost: LiftedCost) -> int:
        a = len(self.to)
        self.to.extend((v, u))
        self.cap.extend((1, 0))
        self.cost.extend((cost, -cost))
        self.adj[u].append(a)
        self.adj[v].append(a + 1)
        return a

    def used(self, arc: int) -> bool:
        return self.cap[arc] == 0


def _check_convex_interval(phi: LiftedPhi, lo: int, hi: int) -> None:
    spec = phi.spec
    for z in range(lo + 1, hi):
        if spec(z + 1) + spec(z - 1) - 2 * spec(z) < 0:
            raise ValueError(f"cost is not convex at indegree {z}; the flow solver needs convexity")


def build_network(graph: Multigraph, phis) -> FlowNetwork:
    """Layered network for per-vertex lifted costs ``phis``.

    n+m+2 nodes; sum(d) parallel source arcs, sum(d) incidence arcs and
    m sink arcs, all unit capacity.
    """
    if graph.has_loops:
        raise ValueError("graphs with loops cannot be oriented")
    n, m = graph.n, graph.m
    if len(phis) != n:
        raise ValueError("need one cost spec per vertex")
    net = FlowNetwork(num_nodes=n + m + 2, source=0, sink=n + m + 1, required=m)
    net.adj = [[] for _ in range(net.num_nodes)]
    offset = LiftedCost.zero()
    for v in range(n):
        d = graph.degrees[v]
        phi = phis[v]
        # the spec only ever gets evaluated at clamped arguments in this range
        lo, hi = phi.shift, d + phi.shift
        if phi.f is not None:
            lo = max(lo, phi.f)
        if phi.g is not None:
            hi = min(hi, phi.g)
        if lo < hi:
            _check_convex_interval(phi, lo, hi)
        prev = phi.cost(0)
        offset = offset + prev
        arcs = []
        for level in range(1, d + 1):
            cur = phi.cost(level)
            arcs.append(net.add_arc(net.source, 1 + v, cur - prev))
            prev = cur
        net.parallel.append(arcs)
    for j, (u, v) in enumerate(graph.edges):
        enode = 1 + n + j
        au = net.add_arc(1 + u, enode, LiftedCost.zero())
        av = net.add_arc(1 + v, enode, LiftedCost.zero())
        net.incidence.append([(au, u), (av, v)])
        net.add_arc(enode, net.sink, LiftedCost.zero())
    net.offset = offset
    return net


def min_cost_flow(net: FlowNetwork) -> LiftedCost:
    """Successive shortest paths with potentials; ``net.required`` unit
    augmentations.  Mutates ``net`` to hold the residual capacities.

    After solving, each vertex's used parallel arcs are normalized to a
    prefix of the level-sorted list (cost-neutral by convexity), so the
    flow read back is canonical.
    """
    N = net.num_nodes
    to, cap, cost, adj = net.to, net.cap, net.cost, net.adj
    # initial potentials: the fresh network is layered, so one relaxation
    # sweep in node order is a topological shortest-path computation
    pot: list[LiftedCost | None] = [None] * N
    pot[net.source] = LiftedCost.zero()
    for u in range(N):
        pu = pot[u]
        if pu is None:
            continue
        for a in adj[u]:
            if a & 1 or cap[a] == 0:
                continue
            nd = pu + cost[a]
            pv = pot[to[a]]
            if pv is None or nd < pv:
                pot[to[a]] = nd

    for _ in range(net.required):
        dist: list[LiftedCost | None] = [None] * N
        parent = [-1] * N
        dist[net.source] = LiftedCost.zero()
        heap: list[tuple[LiftedCost, int]] = [(LiftedCost.zero(), net.source)]
        while heap:
            d, u = heapq.heappop(heap)
            if dist[u] is None or d > dist[u]:
                continue
            for a in adj[u]:
                if cap[a] == 0:
                    continue
                v = to[a]
                if pot[v] is None:
                    # never reachable in this network (isolated vertex node)
                    continue
                rc = cost[a] + pot[u] - pot[v]
                nd = d + rc
                if dist[v] is None or nd < dist[v]:
                    dist[v] = nd
                    parent[v] = a
                    heapq.heappush(heap, (nd, v))
        dt = dist[net.sink]
        if dt is None:
            raise RuntimeError("internal error: demand exceeds the max flow")
        for v in range(N):
            if dist[v] is not None and dist[v] < dt:
                pot[v] = pot[v] + dist[v]
            elif pot[v] is not None:
                pot[v] = pot[v] + dt
        v = net.sink
        while v != net.source:
            a = parent[v]
            cap[a] -= 1
            cap[a ^ 1] += 1
            v = to[a ^ 1]

    # prefix normalization of parallel arcs
    for arcs in net.parallel:
        k = sum(1 for a in arcs if cap[a] == 0)
        used_cost = sum((cost[a] for a in arcs if cap[a] == 0), LiftedCost.zero())
        prefix_cost = sum((cost[a] for a in arcs[:k]), LiftedCost.zero())
        if used_cost != prefix_cost:
            raise RuntimeError("internal error: used parallel arcs are not cost-minimal")
        for i, a in enumerate(arcs):
            cap[a] = 0 if i < k else 1
            cap[a ^ 1] = 1 - cap[a]

    total = LiftedCost.zero()
    for a in range(0, len(to), 2):
        if cap[a] == 0:
            total = total + cost[a]
    return total


def _extract_orientation(graph: Multigraph, net: FlowNetwork) -> Orientation:
    heads = []
    for j in range(graph.m):
        carriers = [v for a, v in net.incidence[j] if net.used(a)]
        if len(carriers) != 1:
            raise RuntimeError("internal error: edge node is not covered exactly once")
        heads.append(carriers[0])
    return Orientation(tuple(heads))


@dataclass(frozen=True)
class CyclicSolution:
    orientation: Orientation
    key: object  # natural objective key
    feasible: bool


def _internal_phis(graph: Multigraph, objective):
    """Resolve the objective to per-vertex lifted costs for the network."""
    if isinstance(objective, PhiSum):
        return objective.resolve(graph), objective
    base = max(graph.n, 2)
    if isinstance(objective, DecMin):
        return PhiSum(shared=exp_base(base)).resolve(graph), objective
    if isinstance(objective, IncMax):
        return PhiSum(shared=neg_exp_base(base)).resolve(graph), objective
    raise ValueError(
        f"objective {objective.kind!r} is not solvable by the flow reduction"
    )


def solve_cyclic(graph: Multigraph, objective) -> CyclicSolution:
    """Optimal unconstrained orientation for a separable convex cost or a
    dec-min / inc-max key (solved through their power-sum encodings)."""
    phis, objective = _internal_phis(graph, objective)
    if graph.m == 0:
        o = Orientation(())
        key = evaluate(objective, graph, degrees_of_orientation(graph, o))
        feasible = key.feasible if isinstance(key, LiftedCost) else True
        return CyclicSolution(o, key, feasible)
    net = build_network(graph, phis)
    min_cost_flow(net)
    o = _extract_orientation(graph, net)
    key = evaluate(objective, graph, degrees_of_orientation(graph, o))
    feasible = key.feasible if isinstance(key, LiftedCost) else True
    return CyclicSolution(o, key, feasible)


def solve_mixed(graph: Multigraph, fixed, objective) -> CyclicSolution:
    """Optimal completion of a partial orientation.

    ``fixed`` maps edge ids to their imposed heads.  Pre-oriented edges
    shift the remaining cost of their head vertex by one unit, so the
    flow runs on the leftover edges only; the reported key covers the
    whole orientation.
    """
    phis, objective = _internal_phis(graph, objective)
    shift = [0] * graph.n
    for eid, head in fixed.items():
        if not 0 <= eid < graph.m:
            raise ValueError(f"fixed edge id {eid} out of range")
        u, v = graph.edges[eid]
        if head not in (u, v):
            raise ValueError(f"fixed head {head} is not an endpoint of edge {eid}")
        shift[head] += 1
    free_ids = [j for j in range(graph.m) if j not in fixed]
    sub = build_graph(graph.n, [graph.edges[j] for j in free_ids])
    heads = [0] * graph.m
    if free_ids:
        net = build_network(sub, tuple(phis[v].shifted(shift[v]) for v in range(graph.n)))
        min_cost_flow(net)
        sub_heads = _extract_orientation(sub, net).heads
        for pos, j in enumerate(free_ids):
            heads[j] = sub_heads[pos]
    for eid, head in fixed.items():
        heads[eid] = head
    o = Orientation(tuple(heads))
    key = evaluate(objective, graph, degrees_of_orientation(graph, o))
    feasible = key.feasible if isinstance(key, LiftedCost) else True
    return CyclicSolution(o, key, feasible)
