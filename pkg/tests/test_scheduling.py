"""Scheduling: interval polytopes, EDF simulation, cycle polytopes,
assignment and tardy solvers, cross-checked against the brute oracles."""

import random

import pytest

from conepack.errors import InfeasibleError, InputError
from conepack.oracle import bp_brute_force, nonpreemptive_brute_counts
from conepack.rational import Rat
from conepack.scheduling import (CycleLayout, SchedulingInstance,
                                 build_edf_polytope,
                                 build_nonpreemptive_polytope, edf_simulate,
                                 extract_cyclic_schedule,
                                 nonpreemptive_assign,
                                 nonpreemptive_completable, preemptive_assign,
                                 schedulable_vectors, scheduling_from_text,
                                 scheduling_to_text, tardy_min_penalty,
                                 validate_nonpreemptive_schedule,
                                 validate_preemptive_schedule)

FIXTURE = SchedulingInstance(
    [[(0, 300, 150), (100, 102, 1), (200, 202, 1)]], [2, 2, 2], costs=[1])


def rand_instance(rng, d_max=3, horizon=8, costs=True):
    d = rng.randint(1, d_max)
    windows = []
    for j in range(d):
        r = rng.randint(0, horizon - 1)
        dl = rng.randint(r + 1, horizon)
        p = rng.randint(1, max(1, dl - r))
        windows.append((r, dl, p))
    mult = [rng.randint(0, 3) for _ in range(d)]
    kw = {"costs": [1]} if costs else {}
    return SchedulingInstance([windows], mult, **kw)


def box_vectors(dims, cap):
    vecs = [()]
    for hi in dims:
        vecs = [v + (k,) for v in vecs for k in range(hi + 1)]
    return [v for v in vecs if sum(v) <= cap]


class TestEdfPolytope:
    def test_single_window_capacity(self):
        inst = SchedulingInstance([[(0, 2, 1)]], [3], costs=[1])
        poly = build_edf_polytope(inst, 0)
        assert poly.contains_int((2,))
        assert not poly.contains_int((3,))

    def test_disjoint_windows(self):
        inst = SchedulingInstance([[(0, 1, 1), (1, 2, 1)]], [2, 2], costs=[1])
        poly = build_edf_polytope(inst, 0)
        assert poly.contains_int((1, 1))
        assert not poly.contains_int((2, 0))
        assert not poly.contains_int((0, 2))

    def test_empty_window_forces_zero(self):
        # release equals deadline, so even one copy overloads the point
        inst = SchedulingInstance([[(3, 3, 1)]], [1], costs=[1])
        poly = build_edf_polytope(inst, 0)
        assert poly.contains_int((0,))
        assert not poly.contains_int((1,))

    def test_matches_simulation_exhaustively(self):
        rng = random.Random(42)
        for _ in range(25):
            inst = rand_instance(rng)
            poly = build_edf_polytope(inst, 0)
            dims = [3] * inst.d
            for x in box_vectors(dims, 5):
                member = poly.contains_int(x)
                sim = edf_simulate(x, inst, 0)
                assert member == sim.feasible, (inst.windows, x)


class TestEdfSimulate:
    def test_schedules_are_valid(self):
        rng = random.Random(7)
        checked = 0
        for _ in range(25):
            inst = rand_instance(rng)
            for x in box_vectors([2] * inst.d, 4):
                sim = edf_simulate(x, inst, 0)
                if sim.feasible:
                    validate_preemptive_schedule(inst, 0, x, sim.schedule)
                    checked += 1
        assert checked > 30

    def test_violation_interval_is_overloaded(self):
        rng = random.Random(11)
        seen = 0
        for _ in range(40):
            inst = rand_instance(rng)
            for x in box_vectors([3] * inst.d, 6):
                sim = edf_simulate(x, inst, 0)
                if sim.feasible:
                    continue
                t1, t2 = sim.violation
                load = sum(p * x[j]
                           for j, (r, dl, p) in enumerate(inst.windows[0])
                           if r >= t1 and dl <= t2)
                assert load > t2 - t1
                seen += 1
        assert seen > 20

    def test_preemption_happens(self):
        # short urgent job arrives while the long one is running
        inst = SchedulingInstance([[(0, 10, 5), (2, 4, 1)]], [1, 1], costs=[1])
        sim = edf_simulate((1, 1), inst, 0)
        assert sim.feasible
        long_segs = [s for s in sim.schedule if s[0] == 0]
        assert len(long_segs) == 2
        validate_preemptive_schedule(inst, 0, (1, 1), sim.schedule)

    def test_rejects_bad_vectors(self):
        inst = SchedulingInstance([[(0, 2, 1)]], [1], costs=[1])
        with pytest.raises(InputError):
            edf_simulate((1, 1), inst, 0)
        with pytest.raises(InputError):
            edf_simulate((-1,), inst, 0)


class TestCyclePolytope:
    def test_layout_dimensions(self):
        lay = CycleLayout(3)
        assert lay.cycles == 12
        assert lay.dim == 3 + 1 + 12 + 12 * 4 + 12 * 3
        poly = build_nonpreemptive_polytope(FIXTURE, 0)
        assert poly.dim == lay.dim

    def test_fixture_completability(self):
        assert nonpreemptive_completable((2, 0, 0), FIXTURE, 0) is not None
        assert nonpreemptive_completable((0, 2, 2), FIXTURE, 0) is not None
        assert nonpreemptive_completable((1, 1, 1), FIXTURE, 0) is None

    def test_extracted_schedule_validates(self):
        for x in [(2, 0, 0), (0, 2, 2), (1, 0, 1)]:
            aux = nonpreemptive_completable(x, FIXTURE, 0)
            assert aux is not None
            sched = extract_cyclic_schedule(aux, FIXTURE, 0)
            validate_nonpreemptive_schedule(FIXTURE, 0, x, sched)

    def test_overfull_horizon_rejected(self):
        inst = SchedulingInstance([[(0, 4, 3)]], [2], costs=[1])
        assert nonpreemptive_completable((2,), inst, 0) is None
        assert nonpreemptive_completable((1,), inst, 0) is not None

    def test_matches_brute_force(self):
        rng = random.Random(5)
        agree = 0
        for _ in range(12):
            inst = rand_instance(rng, d_max=2, horizon=8)
            for x in box_vectors([2] * inst.d, 4):
                aux = nonpreemptive_completable(x, inst, 0)
                brute = nonpreemptive_brute_counts(x, inst, 0)
                assert (aux is not None) == (brute is not None), \
                    (inst.windows, x)
                agree += 1
        assert agree > 40

    def test_downward_closure(self):
        vecs = schedulable_vectors(FIXTURE, 0, (1, 1, 1))
        for x in vecs:
            for j in range(3):
                if x[j] > 0:
                    smaller = x[:j] + (x[j] - 1,) + x[j + 1:]
                    assert smaller in vecs


class TestPreemptiveAssign:
    def test_splits_demand_over_machines(self):
        inst = SchedulingInstance([[(0, 2, 1)]], [4], costs=[3])
        sol = preemptive_assign(inst)
        assert sol.objective == 6
        assert sorted(m[1] for m in sol.machines) == [(2,), (2,)]

    def test_prefers_cheaper_capable_machine(self):
        inst = SchedulingInstance([[(0, 4, 1)], [(0, 1, 1)]], [4],
                                  costs=[3, 1])
        sol = preemptive_assign(inst)
        assert sol.objective == 3
        assert [m[0] for m in sol.machines] == [0]

    def test_zero_demand(self):
        inst = SchedulingInstance([[(0, 2, 1)]], [0], costs=[1])
        sol = preemptive_assign(inst)
        assert sol.objective == 0 and sol.machines == ()

    def test_unhostable_job(self):
        inst = SchedulingInstance([[(0, 2, 5)]], [1], costs=[1])
        with pytest.raises(InfeasibleError):
            preemptive_assign(inst)

    def test_bin_packing_embedding(self):
        # items of size s_j become jobs with window [0, B] and length
        # s_j * B; machines of unit cost are bins
        cases = [
            ((Rat(1, 2), Rat(1, 3)), (3, 2)),
            ((Rat(2, 3), Rat(1, 3)), (2, 2)),
            ((Rat(1, 4), Rat(1, 2), Rat(3, 4)), (2, 1, 1)),
        ]
        for sizes, mult in cases:
            scale = 1
            for s in sizes:
                scale = scale * s.denominator // _gcd(scale, s.denominator)
            windows = [(0, scale, int(s * scale)) for s in sizes]
            inst = SchedulingInstance([windows], mult, costs=[1])
            sol = preemptive_assign(inst)
            assert sol.objective == bp_brute_force(sizes, mult)

    def test_demand_met_exactly(self):
        rng = random.Random(3)
        for _ in range(8):
            inst = rand_instance(rng, d_max=2, horizon=6)
            mult = list(inst.multiplicities)
            if all(v == 0 for v in mult):
                continue
            try:
                sol = preemptive_assign(inst)
            except InfeasibleError:
                continue
            placed = [0] * inst.d
            for _i, vec, sched in sol.machines:
                validate_preemptive_schedule(inst, 0, vec, sched)
                for j in range(inst.d):
                    placed[j] += vec[j]
            assert tuple(placed) == inst.multiplicities


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


class TestNonpreemptiveAssign:
    def test_fixture_needs_two_machines(self):
        inst = SchedulingInstance(
            [[(0, 300, 150), (100, 102, 1), (200, 202, 1)]], [1, 1, 1],
            costs=[1])
        sol = nonpreemptive_assign(inst)
        assert sol.objective == 2
        placed = [0] * 3
        for _i, vec, sched in sol.machines:
            validate_nonpreemptive_schedule(inst, 0, vec, sched)
            for j in range(3):
                placed[j] += vec[j]
        assert placed == [1, 1, 1]

    def test_preemption_gap(self):
        # [1,3] is walled off by the tight job; the length-2 job then has
        # no contiguous slot on the same machine, though EDF interleaves
        inst = SchedulingInstance([[(0, 4, 2), (1, 3, 2)]], [1, 1],
                                  costs=[1])
        assert preemptive_assign(inst).objective == 1
        assert nonpreemptive_assign(inst).objective == 2

    def test_matches_preemptive_when_windows_are_loose(self):
        inst = SchedulingInstance([[(0, 6, 2), (0, 6, 3)]], [1, 1], costs=[2])
        assert nonpreemptive_assign(inst).objective == 2
        assert preemptive_assign(inst).objective == 2

    def test_zero_demand(self):
        inst = SchedulingInstance([[(0, 2, 1)]], [0], costs=[1])
        assert nonpreemptive_assign(inst).machines == ()


class TestTardy:
    def test_everything_fits(self):
        inst = SchedulingInstance([[(0, 2, 1)]], [2], counts=[1],
                                  penalties=[5])
        sol = tardy_min_penalty(inst)
        assert sol.objective == 0
        assert sol.scheduled == (2,)

    def test_drops_cheapest_copy(self):
        inst = SchedulingInstance([[(0, 1, 1)]], [2], counts=[1],
                                  penalties=[5])
        sol = tardy_min_penalty(inst)
        assert sol.objective == 5
        assert sol.scheduled == (1,)

    def test_no_machines_pays_everything(self):
        inst = SchedulingInstance([[(0, 5, 1)]], [3], counts=[0],
                                  penalties=[2])
        sol = tardy_min_penalty(inst)
        assert sol.objective == 6
        assert sol.machines == ()

    def test_penalties_steer_the_choice(self):
        # one slot, two candidate job types: keep the expensive one
        inst = SchedulingInstance([[(0, 1, 1), (0, 1, 1)]], [1, 1],
                                  counts=[1], penalties=[10, 1])
        sol = tardy_min_penalty(inst)
        assert sol.objective == 1
        assert sol.scheduled == (1, 0)

    def test_machine_counts_are_exact(self):
        inst = SchedulingInstance([[(0, 4, 1)]], [2], counts=[3],
                                  penalties=[1])
        sol = tardy_min_penalty(inst)
        assert sol.objective == 0
        assert len(sol.machines) == 3
        idle = [m for m in sol.machines if m[1] == (0,)]
        assert len(idle) >= 1

    def test_two_machine_types(self):
        # type 0 machines only see an empty window for job 1
        inst = SchedulingInstance(
            [[(0, 2, 1), (0, 0, 1)], [(0, 2, 1), (0, 2, 1)]],
            [1, 1], counts=[1, 1], penalties=[3, 4])
        sol = tardy_min_penalty(inst)
        assert sol.objective == 0
        assert sol.scheduled == (1, 1)


class TestTextFormat:
    def test_assignment_round_trip(self):
        txt = scheduling_to_text(FIXTURE)
        back = scheduling_from_text(txt)
        assert back.windows == FIXTURE.windows
        assert back.multiplicities == FIXTURE.multiplicities
        assert back.costs == FIXTURE.costs

    def test_tardy_round_trip(self):
        inst = SchedulingInstance([[(0, 1, 1), (2, 5, 2)]], [1, 2],
                                  counts=[2], penalties=[7, 1])
        back = scheduling_from_text(scheduling_to_text(inst))
        assert back.counts == (2,)
        assert back.penalties == (7, 1)
        assert back.windows == inst.windows

    def test_parse_errors(self):
        bad = [
            "",
            "1 1",                              # short header
            "1 1 assignment\n0 0 0 2 1\n1",     # missing cost line
            "1 1 sideways\n0 0 0 2 1\n1\n1",    # unknown variant
            "1 1 assignment\n0 0 0 2 1\n0 0 0 2 1\n1\n1",  # duplicate
            "1 1 assignment\n0 5 0 2 1\n1\n1",  # index out of range
        ]
        for text in bad:
            with pytest.raises(InputError):
                scheduling_from_text(text)

    def test_instance_validation(self):
        with pytest.raises(InputError):
            SchedulingInstance([[(2, 1, 1)]], [1], costs=[1])  # d < r
        with pytest.raises(InputError):
            SchedulingInstance([[(0, 2, 0)]], [1], costs=[1])  # p < 1
        with pytest.raises(InputError):
            SchedulingInstance([[(0, 2, 1)]], [1], costs=[0])
        with pytest.raises(InputError):
            SchedulingInstance([[(0, 2, 1)]], [1], counts=[1])
        with pytest.raises(InputError):
            SchedulingInstance([[(0, 2, 1)]], [-1], costs=[1])
