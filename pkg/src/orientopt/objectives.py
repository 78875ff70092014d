"""Objectives over indegree vectors.

Separable objectives sum a per-vertex cost ``phi(indeg(v))``; costs are
evaluated exactly (ints and Fractions, never floats).  Degree bounds
``f <= indeg <= g`` are folded into the cost through a symbolic
big-M lift: a :class:`LiftedCost` carries the number of violated bound
units separately from the finite cost, and compares lexicographically,
so any bound violation outweighs every finite cost difference.

Lexicographic objectives compare the sorted indegree sequence itself;
``decmin_equals_exp_key`` checks the equivalence with the
``n**z`` power-sum encodings that the solvers use internally.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .graph import DegreeVector, Multigraph


def exact_number(value):
    """Exact scalar: ints stay ints, everything else becomes Fraction."""
    if isinstance(value, int):
        return value
    from .graph import as_fraction

    return as_fraction(value)


@dataclass(frozen=True)
class LiftedCost:
    """Cost with a bound-violation part and a finite part.

    ``penalty`` counts units outside the degree bounds; ``base`` is the
    cost at the clamped argument.  Ordering is lexicographic, so these
    behave like ``penalty * M + base`` for an arbitrarily large M.
    """

    penalty: int
    base: object  # int | Fraction

    def __add__(self, other):
        if isinstance(other, LiftedCost):
            return LiftedCost(self.penalty + other.penalty, self.base + other.base)
        return NotImplemented

    def __radd__(self, other):
        if other == 0:  # so sum() works
            return self
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, LiftedCost):
            return LiftedCost(self.penalty - other.penalty, self.base - other.base)
        return NotImplemented

    def __neg__(self):
        return LiftedCost(-self.penalty, -self.base)

    def _key(self):
        return (self.penalty, self.base)

    def __lt__(self, other):
        return self._key() < other._key()

    def __le__(self, other):
        return self._key() <= other._key()

    def __gt__(self, other):
        return self._key() > other._key()

    def __ge__(self, other):
        return self._key() >= other._key()

    @property
    def feasible(self) -> bool:
        return self.penalty == 0

    @classmethod
    def zero(cls) -> "LiftedCost":
        return cls(0, 0)


_KINDS = frozenset(
    ["square", "cube", "binom2", "abs_balance", "exp_base", "neg_exp_base", "linear", "zero", "table"]
)


@dataclass(frozen=True)
class PhiSpec:
    """A per-vertex cost function on indegrees, evaluated exactly."""

    kind: str
    params: tuple = ()

    def __call__(self, z: int):
        k = self.kind
        if k == "square":
            return z * z
        if k == "cube":
            return z ** 3
        if k == "binom2":
            return z * (z - 1) // 2
        if k == "abs_balance":
            d = self.params[0]
            if d is None:
                raise ValueError("abs_balance needs a degree; resolve against a graph first")
            return abs(2 * z - d)
        if k == "exp_base":
            return self.params[0] ** z
        if k == "neg_exp_base":
            return Fraction(1, self.params[0] ** z)
        if k == "linear":
            a, b = self.params
            return a * z + b
        if k == "zero":
            return 0
        if k == "table":
            values = self.params
            if not 0 <= z < len(values):
                raise ValueError(f"table cost has no entry for indegree {z}")
            return values[z]
        raise ValueError(f"unknown cost kind {k!r}")

    @property
    def d_max(self):
        return len(self.params) - 1 if self.kind == "table" else None


def square() -> PhiSpec:
    return PhiSpec("square")


def cube() -> PhiSpec:
    return PhiSpec("cube")


def binom2() -> PhiSpec:
    return PhiSpec("binom2")


def abs_balance(d: int | None = None) -> PhiSpec:
    """|2z - d|; with d left None the vertex degree is filled in later,
    making the sum count total orientation imbalance."""
    if d is not None and d < 0:
        raise ValueError("degree parameter must be non-negative")
    return PhiSpec("abs_balance", (d,))


def exp_base(b: int) -> PhiSpec:
    if b < 2:
        raise ValueError("exponential base must be at least 2")
    return PhiSpec("exp_base", (b,))


def neg_exp_base(b: int) -> PhiSpec:
    if b < 2:
        raise ValueError("exponential base must be at least 2")
    return PhiSpec("neg_exp_base", (b,))


def linear(a, b=0) -> PhiSpec:
    return PhiSpec("linear", (exact_number(a), exact_number(b)))


def zero() -> PhiSpec:
    return PhiSpec("zero")


def table(values: Sequence) -> PhiSpec:
    vals = tuple(exact_number(v) for v in values)
    if not vals:
        raise ValueError("table cost needs at least the value at indegree 0")
    return PhiSpec("table", vals)


def validate_convex(spec: PhiSpec, d_max: int) -> tuple[int, ...]:
    """Check discrete convexity of ``spec`` on ``0..d_max``.

    Returns the interior points where convexity is strict
    (phi(z+1) + phi(z-1) > 2 phi(z)); raises if it fails anywhere.
    """
    if spec.d_max is not None and spec.d_max < d_max:
        raise ValueError(f"table cost is only defined up to indegree {spec.d_max}, need {d_max}")
    strict = []
    for z in range(1, d_max):
        gap = spec(z + 1) + spec(z - 1) - 2 * spec(z)
        if gap < 0:
            raise ValueError(f"cost is not convex at indegree {z}")
        if gap > 0:
            strict.append(z)
    return tuple(strict)


@dataclass(frozen=True)
class LiftedPhi:
    """Cost spec with optional degree bounds, producing LiftedCost values.

    Inside ``[f, g]`` the cost is the spec itself with zero penalty;
    outside, the argument is clamped and each unit of violation adds one
    penalty unit.  ``shift`` evaluates the cost at ``z + shift``, which
    is how pre-oriented edges are charged to the remaining problem.
    """

    spec: PhiSpec
    f: int | None = None
    g: int | None = None
    shift: int = 0

    def __post_init__(self):
        if self.f is not None and self.f < 0:
            raise ValueError("lower degree bound must be non-negative")
        if self.f is not None and self.g is not None and self.f > self.g:
            raise ValueError(f"empty degree interval: f={self.f} > g={self.g}")

    def cost(self, z: int) -> LiftedCost:
        z = z + self.shift
        penalty = 0
        if self.f is not None and z < self.f:
            penalty += self.f - z
            z = self.f
        if self.g is not None and z > self.g:
            penalty += z - self.g
            z = self.g
        return LiftedCost(penalty, exact_number(self.spec(z)))

    def shifted(self, k: int) -> "LiftedPhi":
        return LiftedPhi(self.spec, self.f, self.g, self.shift + k)


def lift(spec: PhiSpec, f: int | None = None, g: int | None = None) -> LiftedPhi:
    return LiftedPhi(spec, f, g)


# ---------------------------------------------------------------------------
# Objectives.


@dataclass(frozen=True)
class PhiSum:
    """Minimize the sum of per-vertex (optionally bounded) costs."""

    shared: PhiSpec | None = None
    per_vertex: tuple[LiftedPhi, ...] | None = None
    f: int | None = None
    g: int | None = None

    kind = "phi_sum"

    def resolve(self, graph: Multigraph) -> tuple[LiftedPhi, ...]:
        def bound_at(bound, v):
            if bound is None or isinstance(bound, int):
                return bound
            if len(bound) != graph.n:
                raise ValueError("need one degree bound per vertex")
            return bound[v]

        if self.per_vertex is not None:
            specs = list(self.per_vertex)
            if len(specs) != graph.n:
                raise ValueError("need one cost spec per vertex")
        else:
            if self.shared is None:
                raise ValueError("objective has neither a shared nor per-vertex cost")
            specs = [self.shared] * graph.n
        out = []
        for v, entry in enumerate(specs):
            if isinstance(entry, LiftedPhi):
                if self.f is not None or self.g is not None:
                    raise ValueError(
                        "shared degree bounds clash with per-vertex lifted costs"
                    )
                out.append(entry)
                continue
            if entry.kind == "abs_balance" and entry.params[0] is None:
                entry = abs_balance(graph.degrees[v])
            out.append(LiftedPhi(entry, bound_at(self.f, v), bound_at(self.g, v)))
        return tuple(out)


@dataclass(frozen=True)
class DecMin:
    """Lexicographically minimize the non-increasing sorted indegrees."""

    kind = "dec_min"


@dataclass(frozen=True)
class IncMax:
    """Lexicographically maximize the non-decreasing sorted indegrees."""

    kind = "inc_max"


@dataclass(frozen=True)
class IncMin:
    """Lexicographically minimize the non-decreasing sorted indegrees."""

    kind = "inc_min"


@dataclass(frozen=True)
class DecMax:
    """Lexicographically maximize the non-increasing sorted indegrees."""

    kind = "dec_max"


@dataclass(frozen=True)
class RhoDeltaSum:
    """Maximize the sum of indegree times outdegree."""

    kind = "rho_delta_sum"


@dataclass(frozen=True)
class MaxWeightedIndeg:
    """Minimize the maximum weighted indegree."""

    kind = "max_weighted_indeg"


@dataclass(frozen=True)
class ForbiddenSubpaths:
    """Minimize the number of two-arc directed paths, sum of C(indeg, 2).

    At fixed edge count this induces the same preorder as the square sum.
    """

    kind = "forbidden_subpaths"


Objective = object  # any of the classes above


def needs_weighted_degrees(objective) -> bool:
    return isinstance(objective, MaxWeightedIndeg)


def evaluate(objective, graph: Multigraph, dv: DegreeVector):
    """Natural key of a degree vector under an objective.

    For ``max_weighted_indeg`` pass a weighted degree vector.  Smaller
    is better for some kinds and larger for others; use
    :func:`rank_of` for a uniform minimize-me key.
    """
    k = objective.kind
    indeg = dv.indeg
    if k == "phi_sum":
        return sum((phi.cost(indeg[v]) for v, phi in enumerate(objective.resolve(graph))), LiftedCost.zero())
    if k in ("dec_min", "dec_max"):
        return tuple(sorted(indeg, reverse=True))
    if k in ("inc_max", "inc_min"):
        return tuple(sorted(indeg))
    if k == "rho_delta_sum":
        return sum(i * o for i, o in zip(indeg, dv.outdeg))
    if k == "max_weighted_indeg":
        return max(indeg, default=0)
    if k == "forbidden_subpaths":
        return sum(z * (z - 1) // 2 for z in indeg)
    raise ValueError(f"unknown objective kind {k!r}")


def rank_of(objective, key):
    """Map a natural key to a totally ordered minimize-me key."""
    k = objective.kind
    if k == "phi_sum":
        return (key.penalty, key.base)
    if k in ("inc_max", "dec_max"):
        return tuple(-x for x in key)
    if k == "rho_delta_sum":
        return -key
    return key


def rank_key(objective, graph: Multigraph, dv: DegreeVector):
    return rank_of(objective, evaluate(objective, graph, dv))


# ---------------------------------------------------------------------------
# Agreement of lexicographic comparators with power-sum encodings.


def _cmp(a, b) -> int:
    return (a > b) - (a < b)


def _vertex_count(graph) -> int:
    return graph.n if isinstance(graph, Multigraph) else int(graph)


def decmin_equals_exp_key(graph, dv1: Sequence[int], dv2: Sequence[int]) -> bool:
    """Does the dec-min comparator order ``dv1, dv2`` exactly as the
    ``sum(n**z)`` encoding does?  Takes a graph or a vertex count n >= 2;
    both vectors must have one entry per vertex."""
    n = _vertex_count(graph)
    if n < 2 or len(dv1) != n or len(dv2) != n:
        raise ValueError("need n >= 2 and one entry per vertex")
    lex = _cmp(tuple(sorted(dv1, reverse=True)), tuple(sorted(dv2, reverse=True)))
    power = _cmp(sum(n ** z for z in dv1), sum(n ** z for z in dv2))
    return lex == power


def incmax_equals_exp_key(graph, dv1: Sequence[int], dv2: Sequence[int]) -> bool:
    """Inc-max counterpart: a lexicographically larger non-decreasing
    sequence must mean a strictly smaller ``sum(n**-z)``."""
    n = _vertex_count(graph)
    if n < 2 or len(dv1) != n or len(dv2) != n:
        raise ValueError("need n >= 2 and one entry per vertex")
    lex = _cmp(tuple(sorted(dv1)), tuple(sorted(dv2)))
    power = _cmp(
        sum(Fraction(1, n ** z) for z in dv1), sum(Fraction(1, n ** z) for z in dv2)
    )
    return lex == -power
