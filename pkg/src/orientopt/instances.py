"""Named graphs, seeded random suites, and the job-scheduling reduction."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .graph import Multigraph, build_graph, is_connected
from .objectives import (
    LiftedPhi,
    PhiSpec,
    PhiSum,
    binom2,
    cube,
    linear,
    square,
    table,
    zero,
)

#: 9-vertex, 18-edge simple graph on which the acyclic dec-min and
#: inc-max optima force disjoint orientation sets (vertex v_i maps to
#: index i-1).
FIG4_EDGES = (
    (0, 1), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 0),
    (0, 2), (0, 3), (1, 3),
    (4, 6), (5, 7),
    (8, 1), (8, 2), (8, 4), (8, 5), (8, 6), (8, 7),
)

#: An order attaining the optimal dec-min key (3,3,3,3,2,2,1,1,0).
FIG4_DECMIN_ORDER = (8, 7, 6, 5, 4, 3, 2, 0, 1)

#: An order attaining the optimal inc-max key (0,1,2,2,2,2,2,3,4).
FIG4_INCMAX_ORDER = (0, 3, 1, 2, 8, 4, 5, 6, 7)


def fig4_graph() -> Multigraph:
    return build_graph(9, FIG4_EDGES)


def gen_gk(k: int) -> Multigraph:
    """Chain of k triangles joined by length-2 paths.

    Triangle i occupies vertices 3(i-1)..3(i-1)+2; connector u_i
    (vertex 3k+i-2) joins the third vertex of triangle i-1 to the first
    of triangle i.  Greedy square-sum runs can score 9k-4 on it against
    the optimum 7k-2, giving ratios that approach 9/7.
    """
    if k < 1:
        raise ValueError("need at least one triangle")
    edges = []
    for i in range(k):
        a = 3 * i
        edges += [(a, a + 1), (a + 1, a + 2), (a, a + 2)]
    for i in range(2, k + 1):
        u = 3 * k + i - 2
        edges += [(3 * (i - 1) - 1, u), (u, 3 * (i - 1))]
    return build_graph(4 * k - 1, edges)


def gk_adversarial_order(k: int) -> tuple[int, ...]:
    """Greedy-feasible order scoring 9k-4: all triangles first, then the
    connectors.  With the vertex numbering above this is the identity."""
    return tuple(range(4 * k - 1))


def gk_optimal_order(k: int) -> tuple[int, ...]:
    """Order scoring 7k-2: first triangle, then connector + triangle
    alternating."""
    order = [0, 1, 2]
    for i in range(2, k + 1):
        order.append(3 * k + i - 2)
        order += [3 * (i - 1), 3 * (i - 1) + 1, 3 * (i - 1) + 2]
    return tuple(order)


def random_multigraph(
    n: int,
    m: int,
    seed,
    simple: bool = False,
    max_degree: int | None = None,
    connected: bool = False,
    allow_loops: bool = False,
    weighted: bool = False,
) -> Multigraph:
    """Seed-deterministic random graph with optional structure constraints.

    Raises ValueError when the parameters are infeasible (or when
    rejection sampling gives up, which the caller should treat the same
    way).
    """
    if n < 0 or m < 0:
        raise ValueError("need n >= 0 and m >= 0")
    if simple and allow_loops:
        raise ValueError("a simple graph cannot have loops")
    if simple and m > n * (n - 1) // 2:
        raise ValueError("too many edges for a simple graph")
    if n == 0 and m > 0:
        raise ValueError("edges need endpoints")
    if n == 1 and m > 0 and not allow_loops:
        raise ValueError("a loop-free graph on one vertex has no edges")
    if max_degree is not None and m * 2 > n * max_degree:
        raise ValueError("edge count exceeds the degree budget")
    if connected and n > 0 and m < n - 1:
        raise ValueError("too few edges to connect the graph")
    rng = random.Random(seed)
    for _ in range(300):
        if simple:
            pairs = list(combinations(range(n), 2))
            edges = sorted(rng.sample(pairs, m))
        else:
            edges = []
            deg = [0] * n
            tries = 0
            while len(edges) < m and tries < 100 * (m + 1):
                tries += 1
                u = rng.randrange(n)
                v = rng.randrange(n)
                if u == v and not allow_loops:
                    continue
                du = 2 if u == v else 1
                if max_degree is not None and (
                    deg[u] + du > max_degree
                    or (u != v and deg[v] + 1 > max_degree)
                ):
                    continue
                edges.append((min(u, v), max(u, v)))
                deg[u] += du
                if u != v:
                    deg[v] += 1
            if len(edges) < m:
                continue
        if simple and max_degree is not None:
            if any(d > max_degree for d in _degree_list(n, edges)):
                continue
        weights = None
        if weighted:
            weights = [
                Fraction(rng.randint(1, 9), rng.randint(1, 4)) for _ in range(m)
            ]
        g = build_graph(n, edges, weights, allow_loops=allow_loops)
        if connected and not is_connected(g):
            continue
        return g
    raise ValueError("could not sample a graph with these constraints")


def _degree_list(n, edges):
    deg = [0] * n
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    return deg


def named_instance(name: str) -> Multigraph:
    """Resolve builtin graph names: ``k3``, ``fig4``, ``gk:K``,
    ``path:N``, ``cycle:N``, ``complete:N``."""
    base, _, arg = name.partition(":")
    base = base.lower()
    if base == "fig4" and not arg:
        return fig4_graph()
    if base == "k3" and not arg:
        return build_graph(3, [(0, 1), (1, 2), (0, 2)])
    if base in ("gk", "path", "cycle", "complete"):
        try:
            k = int(arg)
        except ValueError:
            raise ValueError(f"instance {name!r} needs an integer parameter") from None
        if base == "gk":
            return gen_gk(k)
        if base == "path":
            if k < 1:
                raise ValueError("a path needs at least one vertex")
            return build_graph(k, [(i, i + 1) for i in range(k - 1)])
        if base == "cycle":
            if k < 3:
                raise ValueError("a cycle needs at least three vertices")
            return build_graph(k, [(i, (i + 1) % k) for i in range(k)])
        if k < 1:
            raise ValueError("a complete graph needs at least one vertex")
        return build_graph(k, list(combinations(range(k), 2)))
    raise ValueError(f"unknown instance name {name!r}")


# ---------------------------------------------------------------------------
# Scheduling: unit jobs, feasible timeslot sets, convex per-slot load costs.


@dataclass(frozen=True)
class SchedulingInstance:
    """Unit-sized jobs, each restricted to a set of feasible timeslots,
    with a discrete convex cost per slot as a function of its load."""

    num_slots: int
    feasible: tuple[frozenset[int], ...]
    slot_costs: tuple[PhiSpec, ...]

    def __post_init__(self):
        if len(self.slot_costs) != self.num_slots:
            raise ValueError("need one cost function per timeslot")
        for j, I in enumerate(self.feasible):
            if not I:
                raise ValueError(f"job {j} has no feasible timeslot")
            if not all(0 <= t < self.num_slots for t in I):
                raise ValueError(f"job {j} names an unknown timeslot")

    @property
    def num_jobs(self) -> int:
        return len(self.feasible)


def scheduling_to_orientation(instance: SchedulingInstance):
    """Encode scheduling as an orientation problem on a bipartite graph.

    Vertices are jobs then slots; job j joins every slot in its feasible
    set.  Forcing job j's indegree to exactly |I_j|-1 (lifted all-zero
    cost) leaves one out-edge — the chosen slot — and each slot vertex
    then pays its cost at its indegree, the assigned load.  Returns the
    graph and the matching cost-sum objective.
    """
    J = instance.num_jobs
    edges = []
    for j, I in enumerate(instance.feasible):
        for t in sorted(I):
            edges.append((j, J + t))
    phis: list[LiftedPhi] = []
    for I in instance.feasible:
        k = len(I) - 1
        phis.append(LiftedPhi(zero(), f=k, g=k))
    for t in range(instance.num_slots):
        phis.append(LiftedPhi(instance.slot_costs[t]))
    graph = build_graph(J + instance.num_slots, edges)
    return graph, PhiSum(per_vertex=tuple(phis))


def brute_schedule_cost(instance: SchedulingInstance):
    """Exact minimum total cost over every feasible assignment,
    including the cost of empty slots."""
    from .objectives import exact_number

    choices = [sorted(I) for I in instance.feasible]
    best = None
    stack = [(0, [0] * instance.num_slots)]
    while stack:
        j, loads = stack.pop()
        if j == len(choices):
            cost = sum(
                exact_number(instance.slot_costs[t](loads[t]))
                for t in range(instance.num_slots)
            )
            if best is None or cost < best:
                best = cost
            continue
        for t in choices[j]:
            nl = list(loads)
            nl[t] += 1
            stack.append((j + 1, nl))
    return best


def random_scheduling_instance(
    seed, max_jobs: int = 4, max_slots: int = 3
) -> SchedulingInstance:
    """Seeded random instance with convex slot costs (builtin shapes or
    random convex tables)."""
    rng = random.Random(seed)
    T = rng.randint(1, max_slots)
    J = rng.randint(1, max_jobs)
    feasible = tuple(
        frozenset(rng.sample(range(T), rng.randint(1, T))) for _ in range(J)
    )
    costs = []
    for _ in range(T):
        shape = rng.randrange(5)
        if shape == 0:
            costs.append(square())
        elif shape == 1:
            costs.append(cube())
        elif shape == 2:
            costs.append(binom2())
        elif shape == 3:
            costs.append(linear(rng.randint(0, 4), rng.randint(0, 3)))
        else:
            # random convex table over loads 0..J via non-decreasing slopes
            val = rng.randint(0, 3)
            slope = rng.randint(-2, 2)
            vals = [val]
            for _ in range(J):
                val += slope
                vals.append(val)
                slope += rng.randint(0, 2)
            costs.append(table(vals))
    return SchedulingInstance(T, feasible, tuple(costs))
