"""Brute-force oracles: full enumeration of orientations and orders.

Deliberately free of solver shortcuts — the only cleverness allowed here
is incremental bookkeeping while enumerating, never a structural insight
that could share a bug with a solver.  Separable objectives get a
Gray-code (orientations) or prefix-degree (orders) delta update; every
candidate is still visited.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import lcm
from typing import Iterator, Sequence

from .graph import (
    Multigraph,
    Orientation,
    check_orientation,
    degrees_of_order,
    degrees_of_orientation,
    is_acyclic,
    topological_order,
)
from .objectives import LiftedCost, evaluate, needs_weighted_degrees, rank_of

ORIENTATION_CAP = 20  # at most 2**20 orientations
ORDER_CAP = 10  # at most 10! orders


def enumerate_orientations(graph: Multigraph, cap: int = ORIENTATION_CAP) -> Iterator[Orientation]:
    """Yield every orientation of a loop-free graph, 2**m of them."""
    if graph.has_loops:
        raise ValueError("graphs with loops cannot be oriented")
    if graph.m > cap:
        raise ValueError(f"refusing to enumerate 2**{graph.m} orientations")
    edges = graph.edges
    for bits in range(1 << graph.m):
        yield Orientation(tuple(e[1] if bits >> j & 1 == 0 else e[0] for j, e in enumerate(edges)))


def enumerate_orders(graph: Multigraph, cap: int = ORDER_CAP) -> Iterator[tuple[int, ...]]:
    if graph.n > cap:
        raise ValueError(f"refusing to enumerate {graph.n}! orders")
    return permutations(range(graph.n))


@dataclass(frozen=True)
class BruteResult:
    key: object  # natural objective key
    witness: object  # Orientation or order tuple
    count: int  # number of optima (1 unless counting was requested)


def _phi_tables(graph: Multigraph, phis) -> tuple[list, list]:
    """Penalty and base value of each vertex cost at every possible degree."""
    pen, base = [], []
    for v in range(graph.n):
        cs = [phis[v].cost(z) for z in range(graph.degrees[v] + 1)]
        pen.append([c.penalty for c in cs])
        base.append([c.base for c in cs])
    return pen, base


def _brute_cyclic_phi(graph: Multigraph, phis, count_optima: bool) -> BruteResult:
    # Gray-code walk over head assignments; one edge flips per step.
    n, m = graph.n, graph.m
    edges = graph.edges
    pen, base = _phi_tables(graph, phis)
    indeg = [0] * n
    for _, v in edges:
        indeg[v] += 1
    tp = sum(pen[v][indeg[v]] for v in range(n))
    tb = sum(base[v][indeg[v]] for v in range(n))
    best = (tp, tb)
    best_bits = 0
    ties = 1
    bits = 0
    for i in range(1, 1 << m):
        j = (i & -i).bit_length() - 1
        u, v = edges[j]
        if bits >> j & 1:
            lose, gain = u, v  # head goes back to v
        else:
            lose, gain = v, u
        zl, zg = indeg[lose], indeg[gain]
        tp += pen[lose][zl - 1] - pen[lose][zl] + pen[gain][zg + 1] - pen[gain][zg]
        tb += base[lose][zl - 1] - base[lose][zl] + base[gain][zg + 1] - base[gain][zg]
        indeg[lose] = zl - 1
        indeg[gain] = zg + 1
        bits ^= 1 << j
        cur = (tp, tb)
        if cur < best:
            best = cur
            best_bits = bits
            ties = 1
        elif count_optima and cur == best:
            ties += 1
    heads = tuple(e[1] if best_bits >> j & 1 == 0 else e[0] for j, e in enumerate(edges))
    return BruteResult(LiftedCost(*best), Orientation(heads), ties)


def _brute_cyclic_generic(graph: Multigraph, objective, count_optima: bool) -> BruteResult:
    n, m = graph.n, graph.m
    edges = graph.edges
    weighted = needs_weighted_degrees(objective)
    w = [graph.weight(j) for j in range(m)] if weighted else [1] * m
    total = graph.weighted_degrees if weighted else graph.degrees
    indeg = [Fraction(0) if weighted else 0] * n
    for j, (_, v) in enumerate(edges):
        indeg[v] += w[j]

    from .graph import DegreeVector

    def rank(ind):
        dv = DegreeVector(tuple(ind), tuple(t - z for t, z in zip(total, ind)))
        return rank_of(objective, evaluate(objective, graph, dv))

    best = rank(indeg)
    best_bits = 0
    ties = 1
    bits = 0
    for i in range(1, 1 << m):
        j = (i & -i).bit_length() - 1
        u, v = edges[j]
        lose, gain = (u, v) if bits >> j & 1 else (v, u)
        indeg[lose] -= w[j]
        indeg[gain] += w[j]
        bits ^= 1 << j
        cur = rank(indeg)
        if cur < best:
            best, best_bits, ties = cur, bits, 1
        elif count_optima and cur == best:
            ties += 1
    heads = tuple(e[1] if best_bits >> j & 1 == 0 else e[0] for j, e in enumerate(edges))
    o = Orientation(heads)
    key = evaluate(objective, graph, degrees_of_orientation(graph, o, weighted))
    return BruteResult(key, o, ties)


def _brute_acyclic_phi(graph: Multigraph, phis, count_optima: bool) -> BruteResult:
    """Exhaust all n! orders, carrying penalty/base sums down the tree."""
    n = graph.n
    pen, base = _phi_tables(graph, phis)
    nbrs = [list(graph.neighbor_counts[v].items()) for v in range(n)]
    loops = graph.loop_counts
    prefix_deg = list(loops)  # left degree each vertex would get if placed now
    used = [False] * n
    order: list[int] = []
    best: list = [None, None, 0]

    def rec(depth, tp, tb):
        if depth == n:
            cur = (tp, tb)
            if best[0] is None or cur < best[0]:
                best[0] = cur
                best[1] = tuple(order)
                best[2] = 1
            elif count_optima and cur == best[0]:
                best[2] += 1
            return
        for v in range(n):
            if used[v]:
                continue
            z = prefix_deg[v]
            used[v] = True
            order.append(v)
            for u, c in nbrs[v]:
                prefix_deg[u] += c
            rec(depth + 1, tp + pen[v][z], tb + base[v][z])
            for u, c in nbrs[v]:
                prefix_deg[u] -= c
            order.pop()
            used[v] = False

    rec(0, 0, 0)
    return BruteResult(LiftedCost(best[0][0], best[0][1]), best[1], best[2])


def _brute_acyclic_generic(graph: Multigraph, objective, count_optima: bool) -> BruteResult:
    from .graph import DegreeVector

    n = graph.n
    weighted = needs_weighted_degrees(objective)
    if weighted and graph.weights is not None:
        scale = lcm(*(w.denominator for w in graph.weights)) if graph.m else 1
        wmul = [int(w * scale) for w in graph.weights]
    else:
        scale = 1
        wmul = [1] * graph.m
    wn = [{} for _ in range(n)]
    loopw = [0] * n
    for j, (u, v) in enumerate(graph.edges):
        if u == v:
            loopw[u] += wmul[j]
        else:
            wn[u][v] = wn[u].get(v, 0) + wmul[j]
            wn[v][u] = wn[v].get(u, 0) + wmul[j]
    nbrs = [list(d.items()) for d in wn]
    total = [loopw[v] + sum(c for _, c in nbrs[v]) for v in range(n)]

    def rank(ind):
        if weighted:
            dv = DegreeVector(
                tuple(Fraction(z, scale) for z in ind),
                tuple(Fraction(t - z, scale) for t, z in zip(total, ind)),
            )
        else:
            dv = DegreeVector(tuple(ind), tuple(t - z for t, z in zip(total, ind)))
        return rank_of(objective, evaluate(objective, graph, dv))

    prefix_deg = list(loopw)
    used = [False] * n
    order: list[int] = []
    left: list[int] = [0] * n
    best: list = [None, None, 0]

    def rec(depth):
        if depth == n:
            cur = rank(left)
            if best[0] is None or cur < best[0]:
                best[0], best[1], best[2] = cur, tuple(order), 1
            elif count_optima and cur == best[0]:
                best[2] += 1
            return
        for v in range(n):
            if used[v]:
                continue
            used[v] = True
            order.append(v)
            left[v] = prefix_deg[v]
            for u, c in nbrs[v]:
                prefix_deg[u] += c
            rec(depth + 1)
            for u, c in nbrs[v]:
                prefix_deg[u] -= c
            order.pop()
            used[v] = False

    rec(0)
    order_w = best[1]
    key = evaluate(
        objective, graph, degrees_of_order(graph, order_w, weighted=weighted)
    )
    return BruteResult(key, order_w, best[2])


def brute_optimal(graph: Multigraph, objective, mode: str, count_optima: bool = False) -> BruteResult:
    """Exhaustive optimum of an objective over all orientations (mode
    ``"cyclic"``) or all vertex orders (mode ``"acyclic"``).

    The witness is the first optimum in a fixed enumeration sequence.
    """
    if mode == "cyclic":
        if graph.has_loops:
            raise ValueError("graphs with loops cannot be oriented")
        if graph.m > ORIENTATION_CAP:
            raise ValueError(f"refusing to enumerate 2**{graph.m} orientations")
        if objective.kind == "phi_sum":
            return _brute_cyclic_phi(graph, objective.resolve(graph), count_optima)
        return _brute_cyclic_generic(graph, objective, count_optima)
    if mode == "acyclic":
        if graph.n > ORDER_CAP:
            raise ValueError(f"refusing to enumerate {graph.n}! orders")
        if objective.kind == "phi_sum":
            return _brute_acyclic_phi(graph, objective.resolve(graph), count_optima)
        return _brute_acyclic_generic(graph, objective, count_optima)
    raise ValueError(f"unknown oracle mode {mode!r}")


def order_value_stats(graph: Multigraph, value_of_left_degree=None):
    """Sum, count and max of an additive order value over all n! orders.

    Default value is sum of left degree times right degree.  Used for
    exact expectations: mean = total / n!.
    """
    n = graph.n
    if n > ORDER_CAP:
        raise ValueError(f"refusing to enumerate {graph.n}! orders")
    if graph.has_loops:
        raise ValueError("degree-split statistics expect a loop-free graph")
    degs = graph.degrees
    if value_of_left_degree is None:
        tables = [[z * (degs[v] - z) for z in range(degs[v] + 1)] for v in range(n)]
    else:
        tables = [
            [value_of_left_degree(v, z) for z in range(degs[v] + 1)] for v in range(n)
        ]
    nbrs = [list(graph.neighbor_counts[v].items()) for v in range(n)]
    prefix_deg = [0] * n
    used = [False] * n
    acc = [0, 0, None]  # total, leaves, best

    def rec(depth, val):
        if depth == n:
            acc[0] += val
            acc[1] += 1
            if acc[2] is None or val > acc[2]:
                acc[2] = val
            return
        for v in range(n):
            if used[v]:
                continue
            z = prefix_deg[v]
            used[v] = True
            for u, c in nbrs[v]:
                prefix_deg[u] += c
            rec(depth + 1, val + tables[v][z])
            for u, c in nbrs[v]:
                prefix_deg[u] -= c
            used[v] = False

    rec(0, 0)
    return acc[0], acc[1], acc[2]


# ---------------------------------------------------------------------------
# Corner certificates for the two orientation regimes.


def vertex_certificate(graph: Multigraph, orientation: Orientation, cap: int = 16):
    """Linear weights certifying an acyclic orientation's indegree vector.

    Assigns strictly decreasing weights along a topological order, then
    checks by full enumeration that this vector is the unique minimizer
    of the weighted indegree sum.  Returns ``(weights, verdict)``.
    """
    topo = topological_order(graph, orientation)
    if topo is None:
        raise ValueError("orientation has a directed cycle")
    if graph.m > cap:
        raise ValueError(f"refusing to certify over 2**{graph.m} orientations")
    n = graph.n
    slopes = [0] * n
    for pos, v in enumerate(topo):
        slopes[v] = n - pos
    target = degrees_of_orientation(graph, orientation).indeg
    best_val = None
    best_vectors: set = set()
    for o in enumerate_orientations(graph, cap=cap):
        ind = degrees_of_orientation(graph, o).indeg
        val = sum(s * z for s, z in zip(slopes, ind))
        if best_val is None or val < best_val:
            best_val = val
            best_vectors = {ind}
        elif val == best_val:
            best_vectors.add(ind)
    verdict = best_vectors == {tuple(target)}
    return tuple(slopes), verdict


def shortest_directed_cycle(graph: Multigraph, orientation: Orientation):
    """Arc ids of a shortest directed cycle, or None if acyclic."""
    check_orientation(graph, orientation)
    n = graph.n
    out: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for j, h in enumerate(orientation.heads):
        t = graph.other_end(j, h)
        out[t].append((h, j))
    best: list[int] | None = None
    for s in range(n):
        # BFS over arcs from s; first time we re-enter s closes a cycle
        dist = [-1] * n
        par_v = [-1] * n
        par_e = [-1] * n
        dist[s] = 0
        queue = [s]
        closing = None
        while queue and closing is None:
            nxt = []
            for v in queue:
                for h, j in out[v]:
                    if h == s:
                        closing = (v, j)
                        break
                    if dist[h] == -1:
                        dist[h] = dist[v] + 1
                        par_v[h] = v
                        par_e[h] = j
                        nxt.append(h)
                if closing:
                    break
            queue = nxt
        if closing is None:
            continue
        v, j = closing
        cyc = [j]
        while v != s:
            cyc.append(par_e[v])
            v = par_v[v]
        cyc.reverse()
        if best is None or len(cyc) < len(best):
            best = cyc
    return best


def cycle_reversal_decomposition(graph: Multigraph, orientation: Orientation):
    """Express a cyclic orientation's indegree vector as the exact average
    of k vectors, by reversing each arc of one directed k-cycle in turn.

    Returns the k orientations; raises on acyclic input.
    """
    cyc = shortest_directed_cycle(graph, orientation)
    if cyc is None:
        raise ValueError("orientation is acyclic; no cycle to decompose")
    heads = orientation.heads
    out = []
    for j in cyc:
        flipped = list(heads)
        flipped[j] = graph.other_end(j, heads[j])
        out.append(Orientation(tuple(flipped)))
    k = len(out)
    base = degrees_of_orientation(graph, orientation).indeg
    sums = [0] * graph.n
    for o in out:
        for v, z in enumerate(degrees_of_orientation(graph, o).indeg):
            sums[v] += z
    if sums != [k * z for z in base]:
        raise RuntimeError("internal error: reversal vectors do not average back")
    return tuple(out)
