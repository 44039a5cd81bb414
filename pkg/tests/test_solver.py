import random

import pytest

from conepack.errors import InfeasibleError, InputError, InternalError
from conepack.geometry import Polytope, lattice_points
from conepack.oracle import bp_brute_force, int_cone_brute
from conepack.rational import Rat
from conepack.solver import (BinPackingInstance, CuttingStockInstance,
                             PackingSolution, bin_packing, cutting_stock,
                             int_cone_intersect, multi_polytope_select,
                             select_from_generators, verify_solution)
from conepack.structure import combo_sum

from genutil import rand_bp_instance, singleton_target, box_polytope


def segment(lo, hi):
    return Polytope([[1], [-1]], [hi, -lo])


class TestIntConeIntersect:
    def test_reach_five_from_segment(self):
        res = int_cone_intersect(segment(1, 2), singleton_target([5]))
        assert res.found and res.target == (5,)
        assert combo_sum(res.combination) == (5,)

    def test_parity_gap(self):
        res = int_cone_intersect(segment(2, 2), singleton_target([3]))
        assert not res.found

    def test_zero_target_is_trivial(self):
        res = int_cone_intersect(segment(2, 2), singleton_target([0]))
        assert res.found and res.target == (0,)
        assert res.combination.total_weight == 0

    def test_empty_lattice(self):
        # only fractional points between 0 and 1 exclusive
        src = Polytope([[2], [-2]], [1, -1])
        res = int_cone_intersect(src, singleton_target([3]))
        assert not res.found
        res = int_cone_intersect(src, singleton_target([0]))
        assert res.found

    def test_empty_target(self):
        src = segment(0, 2)
        empty = Polytope([[1], [-1]], [0, -1])
        res = int_cone_intersect(src, empty)
        assert not res.found

    def test_dimension_mismatch(self):
        with pytest.raises(InputError):
            int_cone_intersect(segment(0, 1), singleton_target([1, 1]))

    def test_window_monotonicity(self):
        src = segment(2, 2)
        assert not int_cone_intersect(src, box_polytope([3], [3])).found
        assert int_cone_intersect(src, box_polytope([2], [4])).found
        assert int_cone_intersect(src, box_polytope([0], [5])).found

    def test_modes_agree_on_foundness(self):
        rng = random.Random(7723)
        for _ in range(25):
            d = rng.randint(1, 2)
            hi = [rng.randint(1, 3) for _ in range(d)]
            rows = [list(r) for r in box_polytope([0] * d, hi).A]
            rhs = list(box_polytope([0] * d, hi).b)
            rows.append([rng.randint(1, 3) for _ in range(d)])
            rhs.append(rng.randint(2, 9))
            src = Polytope(rows, rhs)
            tgt = singleton_target([rng.randint(0, 12) for _ in range(d)])
            a = int_cone_intersect(src, tgt, mode="faithful")
            b = int_cone_intersect(src, tgt, mode="joint")
            assert a.found == b.found
            if a.found:
                assert a.target == b.target == combo_sum(a.combination)

    def test_agrees_with_brute_force(self):
        rng = random.Random(5151)
        for _ in range(30):
            d = rng.randint(1, 2)
            hi = [rng.randint(1, 4) for _ in range(d)]
            src = box_polytope([0] * d, hi)
            bounds = [(0, rng.randint(0, 20)) for _ in range(d)]
            tgt = box_polytope([b - rng.randint(0, 1) for _, b in bounds],
                               [b for _, b in bounds])
            mine = int_cone_intersect(src, tgt)
            gens = [p for p in lattice_points(src)
                    if any(v != 0 for v in p)]
            ref_found, _, _ = int_cone_brute(gens, tgt, bounds)
            assert mine.found == ref_found
            if mine.found:
                assert tgt.contains_int(mine.target)

    def test_support_bound_holds(self):
        rng = random.Random(99)
        for _ in range(10):
            d = rng.randint(1, 2)
            src = box_polytope([0] * d, [rng.randint(2, 4)] * d)
            tgt = singleton_target([rng.randint(5, 25) for _ in range(d)])
            res = int_cone_intersect(src, tgt)
            if res.found:
                assert len(res.combination.weights) <= 2 ** (2 * d + 1)

    def test_unbounded_target_needs_bounds(self):
        src = segment(1, 2)
        ray = Polytope([[-1]], [-3])  # x >= 3, no upper bound
        with pytest.raises(InputError):
            int_cone_intersect(src, ray)
        res = int_cone_intersect(src, ray, y_bounds=[(3, 10)])
        assert res.found and res.target[0] >= 3


class TestBinPacking:
    def test_three_halves(self):
        sol = bin_packing(BinPackingInstance([Rat(1, 2)], [3]))
        assert sol.objective == 2

    def test_two_types(self):
        sol = bin_packing(BinPackingInstance([Rat(1, 2), Rat(1, 3)], [2, 3]))
        assert sol.objective == 2

    def test_single_bin_fits_everything(self):
        inst = BinPackingInstance([Rat(13, 100), Rat(41, 200)], [7, 0])
        sol = bin_packing(inst)
        assert sol.objective == 1
        assert sol.patterns == (((7, 0), 0, 1),)

    def test_zero_demand(self):
        sol = bin_packing(BinPackingInstance([Rat(1, 2)], [0]))
        assert sol.objective == 0 and sol.patterns == ()

    def test_oversized_item_rejected(self):
        with pytest.raises(InputError):
            BinPackingInstance([Rat(3, 2)], [1])

    def test_zero_size_rejected(self):
        with pytest.raises(InputError):
            BinPackingInstance([Rat(0)], [1])

    def test_guess_record_on_faithful_hit(self):
        sol = bin_packing(BinPackingInstance([Rat(1, 2)], [3]))
        assert sol.guess_record is not None
        special, free = sol.guess_record
        assert special >= 0 and 0 <= free

    def test_matches_brute_force(self):
        rng = random.Random(31337)
        for _ in range(40):
            sizes, mult = rand_bp_instance(rng, max_items=8)
            sol = bin_packing(BinPackingInstance(sizes, mult))
            assert sol.objective == bp_brute_force(sizes, mult), \
                (sizes, mult)

    def test_modes_match(self):
        rng = random.Random(777)
        for _ in range(12):
            sizes, mult = rand_bp_instance(rng, max_items=7)
            inst = BinPackingInstance(sizes, mult)
            a = bin_packing(inst, mode="faithful")
            b = bin_packing(inst, mode="joint")
            assert a.objective == b.objective


def cheapest_packing_cost(sizes, demand, bin_types):
    """Reference by exhaustive recursion over residual demands."""
    memo = {}
    worst = sum(a * min(c for w, c in bin_types if s <= w)
                for s, a in zip(sizes, demand))

    def patterns(limit, cap):
        d = len(sizes)
        out = []

        def rec(j, pre, slack):
            if j == d:
                out.append(tuple(pre))
                return
            cnt, left = 0, slack
            while cnt <= limit[j]:
                rec(j + 1, pre + [cnt], left)
                cnt += 1
                left = left - sizes[j]
                if left < 0:
                    break

        rec(0, [], cap)
        return out

    def best(residual):
        if all(v == 0 for v in residual):
            return 0
        if residual in memo:
            return memo[residual]
        memo[residual] = worst
        for w, c in bin_types:
            for p in patterns(residual, w):
                if all(v == 0 for v in p):
                    continue
                rest = tuple(r - v for r, v in zip(residual, p))
                cand = c + best(rest)
                if cand < memo[residual]:
                    memo[residual] = cand
        return memo[residual]

    return best(tuple(demand))


class TestCuttingStock:
    def test_big_bin_wins(self):
        inst = CuttingStockInstance([Rat(1, 2)], [2],
                                    [(Rat(1), 3), (Rat(1, 2), 2)])
        sol = cutting_stock(inst)
        assert sol.objective == 3
        assert sol.patterns == (((2,), 0, 1),)

    def test_small_bin_wins(self):
        inst = CuttingStockInstance([Rat(1, 2)], [1],
                                    [(Rat(1), 3), (Rat(1, 2), 1)])
        sol = cutting_stock(inst)
        assert sol.objective == 1
        assert sol.patterns == (((1,), 1, 1),)

    def test_item_fits_no_bin(self):
        inst = CuttingStockInstance([Rat(2)], [1], [(Rat(1), 1)])
        with pytest.raises(InfeasibleError):
            cutting_stock(inst)

    def test_zero_demand(self):
        inst = CuttingStockInstance([Rat(1, 2)], [0], [(Rat(1), 1)])
        assert cutting_stock(inst).objective == 0

    def test_single_unit_type_matches_bin_packing(self):
        rng = random.Random(808)
        for _ in range(8):
            sizes, mult = rand_bp_instance(rng, max_dim=2, max_items=6)
            cs = cutting_stock(CuttingStockInstance(sizes, mult,
                                                    [(Rat(1), 1)]))
            assert cs.objective == bp_brute_force(sizes, mult)

    def test_matches_exhaustive_costs(self):
        rng = random.Random(6110)
        for _ in range(8):
            sizes, mult = rand_bp_instance(rng, max_dim=2, max_den=8,
                                           max_items=5)
            types = [(Rat(1), rng.randint(2, 4)),
                     (Rat(1, 2), rng.randint(1, 2))]
            inst = CuttingStockInstance(sizes, mult, types)
            sol = cutting_stock(inst)
            assert sol.objective == cheapest_packing_cost(
                [Rat(s) for s in sizes], mult, types), (sizes, mult, types)


class TestMultiPolytopeSelect:
    def test_pick_the_cheap_part(self):
        parts = [(singleton_target([1]), 5), (singleton_target([3]), 1)]
        res = multi_polytope_select(parts, singleton_target([3]), 1)
        assert res.found and res.total_cost == 1
        assert dict(res.part_combinations[1].weights) == {(3,): 1}
        assert res.part_combinations[0].total_weight == 0

    def test_budget_too_small(self):
        parts = [(singleton_target([1]), 5), (singleton_target([3]), 1)]
        res = multi_polytope_select(parts, singleton_target([3]), 0)
        assert not res.found

    def test_single_part_reduces_to_intersection(self):
        res = multi_polytope_select([(singleton_target([2]), 1)],
                                    singleton_target([6]), 10)
        assert res.found and res.total_cost == 3
        assert dict(res.part_combinations[0].weights) == {(2,): 3}

    def test_combining_parts(self):
        parts = [(singleton_target([2]), 1), (singleton_target([3]), 1)]
        res = multi_polytope_select(parts, singleton_target([7]), 3)
        assert res.found and res.total_cost == 3

    def test_dimension_mismatch(self):
        with pytest.raises(InputError):
            multi_polytope_select([(singleton_target([1, 1]), 1)],
                                  singleton_target([1]), 1)

    def test_cost_must_be_positive_integer(self):
        with pytest.raises(InputError):
            multi_polytope_select([(singleton_target([1]), 0)],
                                  singleton_target([1]), 1)
        with pytest.raises(InputError):
            multi_polytope_select([(singleton_target([1]), Rat(1, 2))],
                                  singleton_target([1]), 1)

    def test_negative_budget(self):
        res = multi_polytope_select([(singleton_target([1]), 1)],
                                    singleton_target([1]), -1)
        assert not res.found


class TestSelectFromGenerators:
    def test_basic_choice(self):
        res = select_from_generators([[(1,)], [(3,)]], [5, 1],
                                     singleton_target([3]), 1)
        assert res.found and res.total_cost == 1
        assert dict(res.part_combinations[1].weights) == {(3,): 1}

    def test_budget_blocks(self):
        res = select_from_generators([[(1,)], [(3,)]], [5, 1],
                                     singleton_target([3]), 0)
        assert not res.found

    def test_zero_generators_dropped(self):
        res = select_from_generators([[(0,), (2,)]], [1],
                                     singleton_target([4]), 5)
        assert res.found and res.total_cost == 2

    def test_empty_groups_zero_target(self):
        res = select_from_generators([[], []], [1, 1],
                                     singleton_target([0]), 0)
        assert res.found and res.total_cost == 0

    def test_empty_groups_nonzero_target(self):
        res = select_from_generators([[], []], [1, 1],
                                     singleton_target([2]), 9)
        assert not res.found


class TestVerifySolution:
    def test_bin_packing_roundtrip(self):
        inst = BinPackingInstance([Rat(1, 2)], [3])
        sol = bin_packing(inst)
        verify_solution(inst, sol)

    def test_detects_demand_mismatch(self):
        inst = BinPackingInstance([Rat(1, 2)], [3])
        bogus = PackingSolution((((1,), 0, 2),), 2, None)
        with pytest.raises(InternalError):
            verify_solution(inst, bogus)

    def test_detects_overfull_pattern(self):
        inst = BinPackingInstance([Rat(1, 2)], [3])
        bogus = PackingSolution((((3,), 0, 1),), 1, None)
        with pytest.raises(InternalError):
            verify_solution(inst, bogus)

    def test_cutting_stock_roundtrip(self):
        inst = CuttingStockInstance([Rat(1, 2)], [2],
                                    [(Rat(1), 3), (Rat(1, 2), 2)])
        verify_solution(inst, cutting_stock(inst))

    def test_unknown_instance(self):
        with pytest.raises(InputError):
            verify_solution(object(), PackingSolution((), 0, None))
