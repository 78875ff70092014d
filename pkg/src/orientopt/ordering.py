"""Acyclic-regime solvers: optimizing over vertex orders.

Orders are built either exactly (subset DP over induced-subgraph
degrees, exponential in n) or by the structural algorithms: weighted
smallest-last for min-max weighted indegree, greedy minimum degree,
slope sorting for linear costs, block-by-block composition of s-t
orders for the degree-product sum on subcubic graphs, and randomized /
derandomized orders for the same objective.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Sequence

from .graph import (
    Multigraph,
    block_tree,
    check_order,
    degrees_of_order,
    is_connected,
    st_order,
    subgraph,
)
from .objectives import (
    DecMax,
    DecMin,
    IncMax,
    IncMin,
    PhiSum,
    RhoDeltaSum,
    ForbiddenSubpaths,
    evaluate,
)

DP_CAP = 26


def _edge_weights(graph: Multigraph, weights):
    if weights is None:
        if graph.weights is not None:
            return list(graph.weights)
        return [Fraction(1)] * graph.m
    from .graph import as_fraction

    w = [as_fraction(x) for x in weights]
    if len(w) != graph.m:
        raise ValueError("need one weight per edge")
    if any(x < 0 for x in w):
        raise ValueError("weights must be non-negative")
    return w


def weighted_smallest_last(graph: Multigraph, weights=None) -> tuple[int, ...]:
    """Order minimizing the maximum weighted left degree.

    Repeatedly removes a vertex of minimum weighted degree in the
    remaining graph and places it last; ties go to the lowest id.  With
    unit weights the achieved maximum equals the degeneracy.
    """
    n = graph.n
    w = _edge_weights(graph, weights)
    wdeg = [Fraction(0)] * n
    for j, (u, v) in enumerate(graph.edges):
        wdeg[u] += w[j]
        if v != u:
            wdeg[v] += w[j]
    alive = [True] * n
    suffix = []
    for _ in range(n):
        pick = min((v for v in range(n) if alive[v]), key=lambda v: (wdeg[v], v))
        alive[pick] = False
        suffix.append(pick)
        for j in graph.incident[pick]:
            u = graph.other_end(j, pick)
            if u != pick and alive[u]:
                wdeg[u] -= w[j]
    return tuple(reversed(suffix))


def degeneracy(graph: Multigraph) -> int:
    """Smallest k admitting a k-bounded order (every left degree <= k)."""
    if graph.n == 0:
        return 0
    order = weighted_smallest_last(graph, [1] * graph.m)
    dv = degrees_of_order(graph, order)
    return max(dv.indeg, default=0)


def harmonic(n: int) -> Fraction:
    return sum((Fraction(1, i) for i in range(1, n + 1)), Fraction(0))


def greedy_min_degree(graph: Multigraph, tie_break: str = "lowest-id", seed=None) -> tuple[int, ...]:
    """Unweighted smallest-last order with a selectable tie rule.

    ``lowest-id`` is deterministic, ``seeded-random`` picks uniformly
    among the minimum-degree vertices, and ``exhaustive-worst`` (meant
    for test suites, exponential state space) returns the greedy run
    whose order has the largest left-degree square sum.
    """
    n = graph.n
    if tie_break == "lowest-id":
        return weighted_smallest_last(graph, [1] * graph.m)
    if tie_break == "seeded-random":
        rng = random.Random(seed)
        deg = list(graph.degrees)
        alive = [True] * n
        suffix = []
        for _ in range(n):
            lo = min(deg[v] for v in range(n) if alive[v])
            pick = rng.choice([v for v in range(n) if alive[v] and deg[v] == lo])
            alive[pick] = False
            suffix.append(pick)
            for j in graph.incident[pick]:
                u = graph.other_end(j, pick)
                if u != pick and alive[u]:
                    deg[u] -= 1
        return tuple(reversed(suffix))
    if tie_break == "exhaustive-worst":
        return _greedy_worst(graph)
    raise ValueError(f"unknown tie_break {tie_break!r}")


def _greedy_worst(graph: Multigraph, cap: int = 20) -> tuple[int, ...]:
    # Memoized walk over all greedy-feasible removal choices, keeping the
    # one maximizing the square sum of left degrees.
    n = graph.n
    if n > cap:
        raise ValueError("exhaustive-worst greedy is limited to small graphs")
    nbrs = [list(graph.neighbor_counts[v].items()) for v in range(n)]
    loops = graph.loop_counts
    memo: dict[int, tuple[int, int]] = {}

    def deg_in(v, mask):
        d = loops[v]
        for u, c in nbrs[v]:
            if mask >> u & 1:
                d += c
        return d

    def worst(mask: int) -> tuple[int, int]:
        if mask == 0:
            return 0, -1
        hit = memo.get(mask)
        if hit is not None:
            return hit
        degs = [(deg_in(v, mask), v) for v in range(n) if mask >> v & 1]
        lo = min(d for d, _ in degs)
        best = None
        pick = -1
        for d, v in degs:
            if d != lo:
                continue
            left = d  # placed last among mask: all remaining neighbors are earlier
            val = worst(mask ^ (1 << v))[0] + left * left
            if best is None or val > best:
                best, pick = val, v
        memo[mask] = (best, pick)
        return best, pick

    mask = (1 << n) - 1
    suffix = []
    while mask:
        _, v = worst(mask)
        suffix.append(v)
        mask ^= 1 << v
    return tuple(reversed(suffix))


def is_greedy_run(graph: Multigraph, order: Sequence[int]) -> bool:
    """Could this order have been produced by greedy minimum degree?

    True iff every vertex has minimum degree in the subgraph induced by
    itself and its predecessors.
    """
    order = check_order(graph, order)
    deg = list(graph.degrees)
    alive = [True] * graph.n
    for v in reversed(order):
        lo = min(deg[u] for u in range(graph.n) if alive[u])
        if deg[v] != lo:
            return False
        alive[v] = False
        for j in graph.incident[v]:
            u = graph.other_end(j, v)
            if u != v and alive[u]:
                deg[u] -= 1
    return True


# ---------------------------------------------------------------------------
# Linear costs: sort by slope.


def linear_slope_order(graph: Multigraph, slopes: Sequence) -> tuple[int, ...]:
    """Optimal order for per-vertex linear costs a_v * indeg + b_v:
    non-increasing slope, ties to the lowest id."""
    from .objectives import exact_number

    if len(slopes) != graph.n:
        raise ValueError("need one slope per vertex")
    a = [exact_number(s) for s in slopes]
    return tuple(sorted(range(graph.n), key=lambda v: (-a[v], v)))


def linear_optimum_value(graph: Multigraph, slopes: Sequence, intercepts=None):
    """Closed-form optimum of a linear cost sum: every edge pays the
    smaller endpoint slope, plus all intercepts."""
    from .objectives import exact_number

    if graph.has_loops:
        raise ValueError("the closed form assumes a loop-free graph")
    a = [exact_number(s) for s in slopes]
    if len(a) != graph.n:
        raise ValueError("need one slope per vertex")
    total = sum(min(a[u], a[v]) for u, v in graph.edges)
    if intercepts is not None:
        if len(intercepts) != graph.n:
            raise ValueError("need one intercept per vertex")
        total += sum(exact_number(b) for b in intercepts)
    return total


# ---------------------------------------------------------------------------
# Exact optimization over all orders: DP on vertex subsets.


def exact_subset_dp(
    graph: Multigraph,
    cost_of: Callable[[int, int], object],
    maximize: bool = False,
    cap: int = DP_CAP,
):
    """Optimal order for any separable order cost, in O(2^n * n) time.

    ``cost_of(v, z)`` prices vertex v at left degree z; values need
    ordering and addition but nothing else (ints, Fractions, LiftedCost
    and big-integer keys all work).  Convexity is not required.  The
    recursion: the best order of an induced subgraph ends in some vertex
    v, which then pays for its full degree inside that subgraph.

    Returns ``(order, value)``; ties resolve to the lowest vertex id.
    """
    n = graph.n
    if n > cap:
        raise ValueError(f"subset DP over {n} vertices exceeds the cap ({cap})")
    if n == 0:
        return (), 0
    degs = graph.degrees
    tables = [[cost_of(v, z) for z in range(degs[v] + 1)] for v in range(n)]
    if maximize:
        tables = [[-x for x in row] for row in tables]
    loops = graph.loop_counts
    counts = graph.neighbor_counts
    layers: list[list[int]] = []
    for v in range(n):
        row = []
        r = 0
        while True:
            mask = 0
            for u, c in counts[v].items():
                if c > r:
                    mask |= 1 << u
            if mask == 0:
                break
            row.append(mask)
            r += 1
        layers.append(row)
    full = 1 << n
    f: list = [None] * full
    f[0] = 0
    g = bytearray(full)
    flat = all(len(row) <= 1 for row in layers) and not any(loops)
    if flat:
        adj = [row[0] if row else 0 for row in layers]
        for mask in range(1, full):
            best = None
            best_v = 0
            m2 = mask
            while m2:
                b = m2 & -m2
                v = b.bit_length() - 1
                m2 ^= b
                cand = f[mask ^ b] + tables[v][(adj[v] & mask).bit_count()]
                if best is None or cand < best:
                    best = cand
                    best_v = v
            f[mask] = best
            g[mask] = best_v
    else:
        for mask in range(1, full):
            best = None
            best_v = 0
            m2 = mask
            while m2:
                b = m2 & -m2
                v = b.bit_length() - 1
                m2 ^= b
                d = loops[v]
                for lay in layers[v]:
                    d += (lay & mask).bit_count()
                cand = f[mask ^ b] + tables[v][d]
                if best is None or cand < best:
                    best = cand
                    best_v = v
            f[mask] = best
            g[mask] = best_v
    suffix = []
    mask = full - 1
    while mask:
        v = g[mask]
        suffix.append(v)
        mask ^= 1 << v
    value = f[full - 1]
    if maximize:
        value = -value
    return tuple(reversed(suffix)), value


def solve_acyclic_exact(graph: Multigraph, objective, cap: int = DP_CAP):
    """Exact optimal order for any separable-encodable objective.

    Lexicographic objectives run through their power-sum encodings with
    base max(n, 2); scaling by base**max_degree keeps the inc keys in
    integers.  Returns ``(order, natural key)``.
    """
    base = max(graph.n, 2)
    top = graph.max_degree
    if isinstance(objective, PhiSum):
        phis = objective.resolve(graph)
        order, _ = exact_subset_dp(graph, lambda v, z: phis[v].cost(z), cap=cap)
    elif isinstance(objective, DecMin):
        order, _ = exact_subset_dp(graph, lambda v, z: base ** z, cap=cap)
    elif isinstance(objective, DecMax):
        order, _ = exact_subset_dp(graph, lambda v, z: base ** z, maximize=True, cap=cap)
    elif isinstance(objective, IncMax):
        order, _ = exact_subset_dp(graph, lambda v, z: base ** (top - z), cap=cap)
    elif isinstance(objective, IncMin):
        order, _ = exact_subset_dp(graph, lambda v, z: base ** (top - z), maximize=True, cap=cap)
    elif isinstance(objective, RhoDeltaSum):
        degs = graph.degrees
        order, _ = exact_subset_dp(graph, lambda v, z: z * (degs[v] - z), maximize=True, cap=cap)
    elif isinstance(objective, ForbiddenSubpaths):
        order, _ = exact_subset_dp(graph, lambda v, z: z * (z - 1) // 2, cap=cap)
    else:
        raise ValueError(f"objective {objective.kind!r} has no separable encoding for the DP")
    weighted = False
    key = evaluate(objective, graph, degrees_of_order(graph, order, weighted))
    return order, key


# ---------------------------------------------------------------------------
# Degree-product sum on subcubic graphs: compose s-t orders over blocks.


@dataclass(frozen=True)
class ImbalanceReport:
    """Per-vertex floor(d/2)*ceil(d/2) - leftdeg*rightdeg and its sum."""

    per_vertex: tuple[int, ...]
    total: int


def imbalance_report(graph: Multigraph, order: Sequence[int]) -> ImbalanceReport:
    dv = degrees_of_order(graph, order)
    per = tuple(
        (d // 2) * ((d + 1) // 2) - i * o
        for d, i, o in zip(graph.degrees, dv.indeg, dv.outdeg)
    )
    return ImbalanceReport(per, sum(per))


def _check_subcubic(graph: Multigraph) -> None:
    if graph.n < 2:
        raise ValueError("need at least two vertices")
    if graph.has_loops:
        raise ValueError("loops are not supported here")
    if not is_connected(graph):
        raise ValueError("graph must be connected")
    if graph.max_degree > 3:
        raise ValueError("maximum degree must be at most 3")


def combine_st_orders(graph: Multigraph) -> tuple[int, ...]:
    """Order maximizing the left-right degree product sum on a connected
    subcubic multigraph.

    Walks the block tree from an end component, lays down an s-t order
    of each block, and splices them at the shared cut vertices; only the
    very first vertex and the free terminals of the other end components
    can then have all their edges on one side.
    """
    _check_subcubic(graph)
    n = graph.n
    degs = graph.degrees
    bt = block_tree(graph)
    blocks = bt.blocks

    def block_order(bi: int, s: int, t: int) -> list[int]:
        sub, verts = subgraph(graph, blocks[bi].vertices, blocks[bi].edge_ids)
        local = {v: i for i, v in enumerate(verts)}
        return [verts[x] for x in st_order(sub, local[s], local[t])]

    if len(blocks) == 1:
        by_degree = sorted(range(n), key=lambda v: (degs[v], v))
        s, t = by_degree[0], by_degree[1]
        return tuple(block_order(0, s, t))

    root = min(i for i in range(len(blocks)) if bt.is_end_component(i))
    t_root = bt.block_cuts[root][0]
    s_root = min(
        (v for v in blocks[root].vertices if v != t_root), key=lambda v: (degs[v], v)
    )
    order: list[int] = block_order(root, s_root, t_root)
    seen_blocks = {root}
    stack = [root]
    while stack:
        bi = stack.pop()
        for c in bt.block_cuts[bi]:
            for bj in bt.blocks_at(c):
                if bj in seen_blocks:
                    continue
                seen_blocks.add(bj)
                cuts = bt.block_cuts[bj]
                if len(cuts) == 1:
                    t_j = min(
                        (v for v in blocks[bj].vertices if v != c),
                        key=lambda v: (degs[v], v),
                    )
                else:
                    t_j = min(v for v in cuts if v != c)
                order.extend(block_order(bj, c, t_j)[1:])
                stack.append(bj)
    if len(order) != n:
        raise RuntimeError("internal error: block walk missed vertices")
    return tuple(order)


def terminal_imbalance_bound(graph: Multigraph) -> int:
    """Total imbalance the composed order achieves: (d-1) at the start
    vertex plus (d-1) at each free end-component terminal, computed from
    the block structure alone."""
    _check_subcubic(graph)
    degs = graph.degrees
    bt = block_tree(graph)
    blocks = bt.blocks
    if len(blocks) == 1:
        by_degree = sorted(range(graph.n), key=lambda v: (degs[v], v))
        return (degs[by_degree[0]] - 1) + (degs[by_degree[1]] - 1)
    ends = [i for i in range(len(blocks)) if bt.is_end_component(i)]
    root = min(ends)
    t_root = bt.block_cuts[root][0]
    s_root = min(
        (v for v in blocks[root].vertices if v != t_root), key=lambda v: (degs[v], v)
    )
    total = degs[s_root] - 1
    for i in ends:
        if i == root:
            continue
        c = bt.block_cuts[i][0]
        t_i = min((v for v in blocks[i].vertices if v != c), key=lambda v: (degs[v], v))
        total += degs[t_i] - 1
    return total


# ---------------------------------------------------------------------------
# Random orders and the derandomized greedy for the degree-product sum.


@dataclass(frozen=True)
class TrialsResult:
    order: tuple[int, ...]
    value: int
    mean: Fraction


def _rho_delta_value(graph: Multigraph, order) -> int:
    dv = degrees_of_order(graph, order)
    return sum(i * o for i, o in zip(dv.indeg, dv.outdeg))


def random_order_trials(graph: Multigraph, seed, trials: int) -> TrialsResult:
    """Sample uniform random orders; keep the best degree-product sum.

    A uniform order is a 3-approximation in expectation, since any two
    edges at a shared vertex point the same way with probability 2/3.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    if graph.has_loops:
        raise ValueError("loops are not supported here")
    rng = random.Random(seed)
    total = 0
    best_val = None
    best_order: tuple[int, ...] = ()
    for _ in range(trials):
        perm = list(range(graph.n))
        rng.shuffle(perm)
        val = _rho_delta_value(graph, perm)
        total += val
        if best_val is None or val > best_val:
            best_val = val
            best_order = tuple(perm)
    return TrialsResult(best_order, best_val, Fraction(total, trials))


def relative_order_counts(mults: Sequence[int]):
    """Count relative orders of v and neighbors w_1..w_p by insertion.

    Returns ``f`` with ``f[k][l]`` = number of orderings of the p+1
    elements in which exactly k of the w_j come after v and their
    multiplicities sum to l.  Inserting w_j into an ordering of the
    previous elements lands after v in k ways and before in j-k ways;
    the total over all cells is (p+1)!.
    """
    D = sum(mults)
    f = [[0] * (D + 1)]
    f[0][0] = 1
    for j, c in enumerate(mults, start=1):
        nf = [[0] * (D + 1) for _ in range(j + 1)]
        for k in range(j):
            row = f[k]
            for l in range(D + 1):
                cnt = row[l]
                if not cnt:
                    continue
                nf[k + 1][l + c] += (k + 1) * cnt
                nf[k][l] += (j - k) * cnt
        f = nf
    return f


def conditional_expectation(
    graph: Multigraph, prefix: Sequence[int] = (), method: str = "auto"
) -> Fraction:
    """Exact expected degree-product sum over uniform completions of a
    fixed prefix.

    Placed vertices contribute their left degree into the prefix times
    their degree to everything later.  A free vertex's expectation runs
    over the relative orders of itself and its free neighbors
    (:func:`relative_order_counts`); multiplicities enter through the
    recurrence shift.  For simple graphs ``method="closed"`` uses
    D(3d - 2D - 1)/6 with D the free degree; ``"auto"`` picks it when
    the graph is simple.
    """
    if graph.has_loops:
        raise ValueError("loops are not supported here")
    prefix = tuple(prefix)
    if len(set(prefix)) != len(prefix):
        raise ValueError("prefix repeats a vertex")
    for v in prefix:
        if not 0 <= v < graph.n:
            raise ValueError(f"prefix vertex {v} out of range")
    if method not in ("auto", "table", "closed"):
        raise ValueError(f"unknown method {method!r}")
    use_closed = method == "closed" or (method == "auto" and graph.is_simple)
    if method == "closed" and not graph.is_simple:
        raise ValueError("the closed form needs a simple graph")
    counts = graph.neighbor_counts
    degs = graph.degrees
    in_prefix = {}
    total = Fraction(0)
    for idx, v in enumerate(prefix):
        dprev = sum(c for u, c in counts[v].items() if u in in_prefix)
        total += dprev * (degs[v] - dprev)
        in_prefix[v] = idx
    for v in range(graph.n):
        if v in in_prefix:
            continue
        free_nbrs = [(u, c) for u, c in sorted(counts[v].items()) if u not in in_prefix]
        D = sum(c for _, c in free_nbrs)
        d = degs[v]
        if D == 0:
            # every neighbor is placed, so the right degree is 0
            continue
        if use_closed:
            total += Fraction(D * (3 * d - 2 * D - 1), 6)
        else:
            f = relative_order_counts([c for _, c in free_nbrs])
            p = len(free_nbrs)
            num = 0
            for k in range(p + 1):
                row = f[k]
                for l in range(D + 1):
                    if row[l]:
                        num += row[l] * (d - l) * l
            total += Fraction(num, factorial(p + 1))
    return total


def derandomized_order(graph: Multigraph, method: str = "auto") -> tuple[int, ...]:
    """Greedy prefix extension by conditional expectations.

    At each step appends the vertex maximizing the expected final value
    given the prefix; the expectation never decreases, so the result is
    at least the uniform-random expectation, a third of the optimum.
    """
    if graph.has_loops:
        raise ValueError("loops are not supported here")
    order: list[int] = []
    free = set(range(graph.n))
    for _ in range(graph.n):
        best_u = None
        best_e = None
        for u in sorted(free):
            e = conditional_expectation(graph, order + [u], method)
            if best_e is None or e > best_e:
                best_u, best_e = u, e
        order.append(best_u)
        free.discard(best_u)
    return tuple(order)
