import random

import pytest

from conepack.errors import InputError
from conepack.geometry import Parallelepiped, Polytope, in_convex_hull, lattice_points
from conepack.rational import rat
from conepack.structure import (
    Combination,
    combo_sum,
    compute_structure_set,
    normalize_combination,
    redistribute_in_pp,
    reduce_support,
)


class TestCombination:
    def test_zero_weights_dropped(self):
        c = Combination({(1, 2): 3, (0, 0): 0})
        assert c.weights == {(1, 2): 3}
        assert c.total_weight == 3

    def test_negative_weight_rejected(self):
        with pytest.raises(InputError):
            Combination({(1,): -1})

    def test_dim_mismatch_rejected(self):
        with pytest.raises(InputError):
            Combination({(1, 2): 1, (3,): 1})

    def test_sum(self):
        assert combo_sum(Combination(dim=None)) == ()
        assert combo_sum(Combination({}, dim=3)) == (0, 0, 0)
        assert combo_sum(Combination({(1, 0): 2, (0, 3): 1})) == (2, 3)
        assert combo_sum(Combination({(7, 0): 1, (6, 1): 1})) == (13, 1)

    def test_json_roundtrip(self):
        c = Combination({(1, 2): 3, (0, 5): 1})
        assert Combination.from_json(c.to_json()) == c
        with pytest.raises(InputError):
            Combination.from_json([{"point": [1]}])
        with pytest.raises(InputError):
            Combination.from_json({"point": [1], "weight": 1})


class TestReduceSupport:
    def test_d1_example(self):
        c = Combination({(0,): 1, (1,): 2, (2,): 1})
        assert reduce_support(c) == Combination({(1,): 4})

    def test_small_support_unchanged(self):
        c = Combination({(0, 0): 5, (3, 1): 2})
        assert reduce_support(c) == c

    def test_d2_five_points(self):
        c = Combination({(0, 0): 1, (2, 0): 1, (0, 2): 1, (2, 2): 1, (1, 1): 1})
        out = reduce_support(c)
        assert len(out) <= 4
        assert combo_sum(out) == (5, 5)
        assert out.total_weight == 5

    def test_empty(self):
        assert reduce_support(Combination(dim=None)).weights == {}

    def test_random_invariants(self):
        rng = random.Random(60523)
        for _ in range(150):
            d = rng.randint(1, 3)
            n = rng.randint(1, 10)
            pts = {tuple(rng.randint(0, 20) for _ in range(d)): rng.randint(1, 50)
                   for _ in range(n)}
            c = Combination(pts)
            out = reduce_support(c)
            assert len(out) <= 2 ** d
            assert combo_sum(out) == combo_sum(c)
            assert out.total_weight == c.total_weight
            hull = list(c.weights)
            for p in out.weights:
                assert in_convex_hull(p, hull)


def segment_pp():
    return Parallelepiped((1,), ((1,),))


class TestRedistribute:
    def test_d1_weight5(self):
        out = redistribute_in_pp(segment_pp(), (1,), 5)
        assert out == Combination({(0,): 2, (2,): 2, (1,): 1})

    def test_d1_weight2(self):
        out = redistribute_in_pp(segment_pp(), (1,), 2)
        assert out == Combination({(0,): 1, (2,): 1})

    def test_vertex_unchanged(self):
        out = redistribute_in_pp(segment_pp(), (2,), 7)
        assert out == Combination({(2,): 7})

    def test_outside_rejected(self):
        with pytest.raises(InputError):
            redistribute_in_pp(segment_pp(), (3,), 1)
        with pytest.raises(InputError):
            redistribute_in_pp(segment_pp(), (1,), 0)

    def test_square_center(self):
        pp = Parallelepiped((1, 1), ((1, 0), (0, 1)))
        out = redistribute_in_pp(pp, (1, 1), 9)
        verts = set(pp.vertices())
        assert combo_sum(out) == (9, 9)
        assert out.total_weight == 9
        nonvert = {p: w for p, w in out.weights.items() if p not in verts}
        assert all(w == 1 for w in nonvert.values())
        assert len(nonvert) <= 4

    def test_random_invariants(self):
        rng = random.Random(71219)
        pps = [
            Parallelepiped((2,), ((2,),)),
            Parallelepiped((2, 2), ((2, 0), (0, 2))),
            Parallelepiped((1, 1), ((1, 1), (1, -1))),
            Parallelepiped((3, 3, 3), ((1, 0, 0), (0, 1, 0), (0, 0, 1))),
        ]
        for _ in range(120):
            pp = pps[rng.randrange(len(pps))]
            pts = [p for p in _pp_lattice(pp)]
            x = pts[rng.randrange(len(pts))]
            w = rng.randint(1, 60)
            out = redistribute_in_pp(pp, x, w)
            verts = set(pp.vertices())
            assert combo_sum(out) == tuple(w * v for v in x)
            assert out.total_weight == w
            for p, wt in out.weights.items():
                assert pp.coordinates(p) is not None
                if p not in verts:
                    assert wt == 1
            assert sum(1 for p in out.weights if p not in verts) <= 2 ** pp.dim


def _pp_lattice(pp):
    """All integer points of a parallelepiped, by box scan."""
    verts = pp.vertices()
    d = pp.dim
    lo = [min(v[i] for v in verts) for i in range(d)]
    hi = [max(v[i] for v in verts) for i in range(d)]
    out = []

    def rec(i, prefix):
        if i == d:
            if pp.coordinates(tuple(prefix)) is not None:
                out.append(tuple(prefix))
            return
        for v in range(lo[i], hi[i] + 1):
            rec(i + 1, prefix + [v])

    rec(0, [])
    return out


class TestStructureSet:
    def test_single_point(self):
        poly = Polytope([[1], [-1]], [2, -2])
        sset = compute_structure_set(poly)
        assert sset.special_points == ((2,),)
        assert len(sset.cover) == 1
        assert sset.locate((2,)) == 0

    def test_segment(self):
        poly = Polytope([[-1], [1]], [0, 3])
        sset = compute_structure_set(poly)
        assert set(sset.special_points) == {(0,), (3,)}
        for x in range(4):
            assert sset.locate((x,)) is not None

    def test_knapsack_locator_total(self):
        poly = Polytope([[-1, 0], [0, -1], [26, 41]], [0, 0, 200])
        sset = compute_structure_set(poly)
        pts = lattice_points(poly)
        assert all(sset.locate(p) is not None for p in pts)
        vertex_union = set()
        for pp in sset.cover:
            vertex_union.update(pp.vertices())
        assert set(sset.special_points) == vertex_union


class TestNormalize:
    def test_empty(self):
        poly = Polytope([[-1], [1]], [0, 3])
        sset = compute_structure_set(poly)
        out = normalize_combination(Combination(dim=None), sset)
        assert out.weights == {}

    def test_on_special_points_unchanged(self):
        poly = Polytope([[-1], [1]], [0, 3])
        sset = compute_structure_set(poly)
        c = Combination({(0,): 5, (3,): 7})
        assert normalize_combination(c, sset) == c

    def test_segment_interior_weight(self):
        poly = Polytope([[-1], [1]], [0, 3])
        sset = compute_structure_set(poly)
        c = Combination({(1,): 10})
        out = normalize_combination(c, sset)
        assert combo_sum(out) == (10,)
        assert out.total_weight == 10
        xset = set(sset.special_points)
        for p, w in out.weights.items():
            if p not in xset:
                assert w == 1

    def test_unlocatable_rejected(self):
        poly = Polytope([[-1], [1]], [0, 3])
        sset = compute_structure_set(poly)
        with pytest.raises(InputError):
            normalize_combination(Combination({(9,): 1}), sset)

    def test_random_conditions(self):
        rng = random.Random(81031)
        polys = [
            Polytope([[-1], [1]], [0, 6]),
            Polytope([[-1, 0], [0, -1], [1, 1]], [0, 0, 4]),
            Polytope([[-1, 0], [0, -1], [1, 0], [0, 1]], [0, 0, 3, 3]),
            Polytope([[-1, 0], [0, -1], [26, 41]], [0, 0, 200]),
        ]
        ssets = [compute_structure_set(p) for p in polys]
        for _ in range(60):
            i = rng.randrange(len(polys))
            sset = ssets[i]
            pts = lattice_points(polys[i])
            support = rng.sample(pts, min(len(pts), rng.randint(1, 6)))
            c = Combination({p: rng.randint(1, 30) for p in support})
            out = normalize_combination(c, sset)
            d = polys[i].dim
            cap = 2 ** (2 * d)
            xset = set(sset.special_points)
            assert combo_sum(out) == combo_sum(c)
            assert out.total_weight == c.total_weight
            on_x = [p for p in out.weights if p in xset]
            off_x = [p for p in out.weights if p not in xset]
            assert all(out.weights[p] == 1 for p in off_x)
            assert len(on_x) <= cap
            assert len(off_x) <= cap
