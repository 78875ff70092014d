from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from orientopt.graph import build_graph, degrees_of_order
from orientopt.instances import (
    FIG4_DECMIN_ORDER,
    FIG4_INCMAX_ORDER,
    fig4_graph,
)
from orientopt.objectives import (
    DecMin,
    ForbiddenSubpaths,
    IncMax,
    LiftedCost,
    LiftedPhi,
    MaxWeightedIndeg,
    PhiSum,
    RhoDeltaSum,
    abs_balance,
    binom2,
    cube,
    decmin_equals_exp_key,
    evaluate,
    exp_base,
    incmax_equals_exp_key,
    lift,
    linear,
    neg_exp_base,
    rank_key,
    rank_of,
    square,
    table,
    validate_convex,
    zero,
)

costs = st.builds(
    LiftedCost,
    st.integers(min_value=0, max_value=50),
    st.one_of(st.integers(-100, 100), st.fractions(max_denominator=20)),
)


class TestLiftedCost:
    def test_penalty_dominates(self):
        assert LiftedCost(1, -1000) > LiftedCost(0, 1000)
        assert LiftedCost(0, 3) < LiftedCost(0, Fraction(7, 2))

    def test_arithmetic(self):
        a = LiftedCost(1, 2)
        b = LiftedCost(3, Fraction(1, 2))
        assert a + b == LiftedCost(4, Fraction(5, 2))
        assert a - b == LiftedCost(-2, Fraction(3, 2))
        assert -a == LiftedCost(-1, -2)
        assert sum([a, b], LiftedCost.zero()) == a + b

    def test_feasible(self):
        assert LiftedCost(0, 99).feasible
        assert not LiftedCost(1, 0).feasible

    @given(costs, costs)
    def test_addition_commutes(self, a, b):
        assert a + b == b + a

    @given(costs, costs, costs)
    def test_addition_associates(self, a, b, c):
        assert (a + b) + c == a + (b + c)

    @given(costs, costs, costs)
    def test_order_is_translation_invariant(self, a, b, c):
        assert (a < b) == (a + c < b + c)


class TestSpecs:
    def test_builtin_values(self):
        assert [square()(z) for z in range(4)] == [0, 1, 4, 9]
        assert [cube()(z) for z in range(4)] == [0, 1, 8, 27]
        assert [binom2()(z) for z in range(5)] == [0, 0, 1, 3, 6]
        assert [abs_balance(3)(z) for z in range(4)] == [3, 1, 1, 3]
        assert exp_base(2)(10) == 1024
        assert neg_exp_base(3)(2) == Fraction(1, 9)
        assert linear(Fraction(1, 2), 1)(4) == 3
        assert zero()(7) == 0

    def test_neg_exp_stays_exact_deep(self):
        # float arithmetic dies around z=1100 for base 2; exact rationals don't
        v = neg_exp_base(2)(1100)
        assert v == Fraction(1, 2 ** 1100)
        assert v > 0

    def test_exp_base_needs_base_two(self):
        with pytest.raises(ValueError):
            exp_base(1)
        with pytest.raises(ValueError):
            neg_exp_base(0)

    def test_table_bounds(self):
        t = table([5, 2, 2, 4])
        assert t.d_max == 3
        assert t(0) == 5
        with pytest.raises(ValueError):
            t(4)
        with pytest.raises(ValueError):
            table([])

    def test_abs_balance_unresolved(self):
        with pytest.raises(ValueError):
            abs_balance()(1)
        with pytest.raises(ValueError):
            abs_balance(-1)


class TestValidateConvex:
    def test_square_breakpoints(self):
        assert validate_convex(square(), 4) == (1, 2, 3)

    def test_linear_has_none(self):
        assert validate_convex(linear(2, 5), 4) == ()

    def test_table_breakpoints(self):
        assert validate_convex(table([0, 0, 1, 3]), 3) == (1, 2)

    def test_violation_reports_witness(self):
        with pytest.raises(ValueError, match="indegree 2"):
            validate_convex(table([0, 5, 10, 11]), 3)

    def test_table_too_short(self):
        with pytest.raises(ValueError):
            validate_convex(table([0, 1]), 4)


class TestLift:
    def test_in_range_is_plain(self):
        assert lift(zero(), 2, 2).cost(2) == LiftedCost(0, 0)

    def test_below_lower_bound(self):
        assert lift(zero(), 2, 2).cost(0) == LiftedCost(2, 0)

    def test_above_upper_bound_clamps_base(self):
        assert lift(square(), 1, 3).cost(5) == LiftedCost(2, 9)

    def test_empty_interval(self):
        with pytest.raises(ValueError):
            lift(zero(), 3, 1)
        with pytest.raises(ValueError):
            LiftedPhi(zero(), f=-1)

    @given(st.integers(0, 8))
    def test_full_interval_is_identity(self, z):
        phi = lift(square(), 0, 8)
        assert phi.cost(z) == LiftedCost(0, z * z)

    def test_shift_charges_preassigned_edges(self):
        phi = lift(square(), 0, 10).shifted(3)
        assert phi.cost(2) == LiftedCost(0, 25)


class TestEvaluate:
    def test_fig4_decmin_key(self):
        g = fig4_graph()
        dv = degrees_of_order(g, FIG4_DECMIN_ORDER)
        assert evaluate(DecMin(), g, dv) == (3, 3, 3, 3, 2, 2, 1, 1, 0)

    def test_fig4_incmax_key(self):
        g = fig4_graph()
        dv = degrees_of_order(g, FIG4_INCMAX_ORDER)
        assert evaluate(IncMax(), g, dv) == (0, 1, 2, 2, 2, 2, 2, 3, 4)

    def test_k3_eulerian_rho_delta(self):
        g = build_graph(3, [(0, 1), (1, 2), (0, 2)])
        dv = degrees_of_order(g, (0, 1, 2))
        # 0,1,2 gives indegrees 0,1,2 -- not Eulerian
        assert evaluate(RhoDeltaSum(), g, dv) == 0 * 2 + 1 * 1 + 2 * 0
        from orientopt.graph import Orientation, degrees_of_orientation

        eul = degrees_of_orientation(g, Orientation((1, 2, 0)))
        assert evaluate(RhoDeltaSum(), g, eul) == 3

    def test_forbidden_subpaths_counts_pairs(self):
        g = build_graph(4, [(0, 3), (1, 3), (2, 3)])
        dv = degrees_of_order(g, (0, 1, 2, 3))
        assert evaluate(ForbiddenSubpaths(), g, dv) == 3

    def test_weighted_max_indegree(self):
        g = build_graph(3, [(0, 1), (1, 2), (0, 2)], [2, "1/2", 3])
        dv = degrees_of_order(g, (0, 1, 2), weighted=True)
        assert evaluate(MaxWeightedIndeg(), g, dv) == Fraction(7, 2)

    def test_phi_sum_square(self):
        g = build_graph(3, [(0, 1), (1, 2), (0, 2)])
        dv = degrees_of_order(g, (0, 1, 2))
        assert evaluate(PhiSum(shared=square()), g, dv) == LiftedCost(0, 5)

    def test_abs_balance_is_total_imbalance(self):
        g = fig4_graph()
        for order in (FIG4_DECMIN_ORDER, FIG4_INCMAX_ORDER, tuple(range(9))):
            dv = degrees_of_order(g, order)
            want = sum(abs(i - o) for i, o in zip(dv.indeg, dv.outdeg))
            got = evaluate(PhiSum(shared=abs_balance()), g, dv)
            assert got == LiftedCost(0, want)

    def test_rank_of_flips_maximizers(self):
        assert rank_of(IncMax(), (0, 1, 2)) == (0, -1, -2)
        assert rank_of(RhoDeltaSum(), 7) == -7
        assert rank_of(DecMin(), (2, 1)) == (2, 1)
        assert rank_of(PhiSum(shared=square()), LiftedCost(1, 5)) == (1, 5)

    def test_rank_key_prefers_better_orders(self):
        g = fig4_graph()
        good = rank_key(DecMin(), g, degrees_of_order(g, FIG4_DECMIN_ORDER))
        other = rank_key(DecMin(), g, degrees_of_order(g, tuple(range(9))))
        assert good <= other


class TestPhiSumResolve:
    def test_shared_bounds_accept_arrays(self):
        g = build_graph(2, [(0, 1)])
        obj = PhiSum(shared=zero(), f=(0, 1), g=(0, 1))
        phis = obj.resolve(g)
        assert phis[0].f == 0 and phis[1].g == 1

    def test_wrong_bound_length(self):
        g = build_graph(2, [(0, 1)])
        with pytest.raises(ValueError):
            PhiSum(shared=zero(), f=(0, 1, 2)).resolve(g)

    def test_wrong_per_vertex_length(self):
        g = build_graph(2, [(0, 1)])
        with pytest.raises(ValueError):
            PhiSum(per_vertex=(lift(zero()),)).resolve(g)

    def test_lifted_entries_clash_with_shared_bounds(self):
        g = build_graph(2, [(0, 1)])
        obj = PhiSum(per_vertex=(lift(zero(), 0, 1), lift(zero(), 0, 1)), f=0)
        with pytest.raises(ValueError):
            obj.resolve(g)

    def test_plain_specs_in_per_vertex_get_lifted(self):
        g = build_graph(2, [(0, 1)])
        phis = PhiSum(per_vertex=(square(), cube()), f=0, g=5).resolve(g)
        assert all(isinstance(p, LiftedPhi) for p in phis)
        assert phis[1].spec.kind == "cube"

    def test_neither_shared_nor_per_vertex(self):
        with pytest.raises(ValueError):
            PhiSum().resolve(build_graph(1, []))


class TestExpKeyAgreement:
    def test_spec_example_pair(self):
        # 3^2 + 2 = 11 > 3 + 3 + 1 = 7, and (2,0,0) > (1,1,0) lexicographically
        assert decmin_equals_exp_key(3, (2, 0, 0), (1, 1, 0))

    def test_equal_vectors_tie(self):
        assert decmin_equals_exp_key(4, (1, 2, 0, 1), (0, 1, 1, 2))
        assert incmax_equals_exp_key(4, (1, 2, 0, 1), (0, 1, 1, 2))

    def test_takes_graph_or_count(self):
        g = build_graph(3, [(0, 1), (1, 2), (0, 2)])
        assert decmin_equals_exp_key(g, (2, 1, 0), (1, 1, 1))
        assert incmax_equals_exp_key(g, (2, 1, 0), (1, 1, 1))

    def test_size_checks(self):
        with pytest.raises(ValueError):
            decmin_equals_exp_key(1, (0,), (0,))
        with pytest.raises(ValueError):
            incmax_equals_exp_key(3, (0, 0), (0, 0, 0))

    @given(
        st.integers(2, 6).flatmap(
            lambda n: st.tuples(
                st.lists(st.integers(0, 5), min_size=n, max_size=n),
                st.lists(st.integers(0, 5), min_size=n, max_size=n),
            )
        )
    )
    def test_agreement_holds_for_all_pairs(self, pair):
        dv1, dv2 = pair
        assert decmin_equals_exp_key(len(dv1), dv1, dv2)
        assert incmax_equals_exp_key(len(dv1), dv1, dv2)

    def test_exhaustive_small_sweep(self):
        from itertools import product

        vectors = list(product(range(4), repeat=3))
        for dv1 in vectors:
            for dv2 in vectors:
                assert decmin_equals_exp_key(3, dv1, dv2)
                assert incmax_equals_exp_key(3, dv1, dv2)


def _same_preorder(keys1, keys2):
    for i in range(len(keys1)):
        for j in range(len(keys1)):
            if (keys1[i] < keys1[j]) != (keys2[i] < keys2[j]):
                return False
    return True


def test_forbidden_subpaths_orders_like_square_sum():
    # at fixed edge count, sum C(z,2) = (sum z^2 - m) / 2
    from itertools import product

    g = build_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
    vectors = [dv for dv in product(range(5), repeat=4) if sum(dv) == g.m]

    class FakeDV:
        def __init__(self, indeg):
            self.indeg = indeg
            self.outdeg = tuple(g.degrees[v] - z for v, z in enumerate(indeg))

    sub = [evaluate(ForbiddenSubpaths(), g, FakeDV(dv)) for dv in vectors]
    sq = [evaluate(PhiSum(shared=square()), g, FakeDV(dv)) for dv in vectors]
    assert _same_preorder(sub, sq)
