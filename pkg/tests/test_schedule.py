import numpy as np
import pytest

from ghzpurify.ghz import (GhzLabel, build_binary_ensemble, build_werner,
                           ensemble_fidelity)
from ghzpurify.optics import DiscriminationMode
from ghzpurify.purify import StepKind
from ghzpurify.schedule import (MAX_ROUNDS, Schedule, compare_orderings,
                                run_schedule, sweep)

EVEN_ONLY = DiscriminationMode.even_only()
EVEN_PLUS_ODD = DiscriminationMode.even_plus_odd()
SIX_MODE = DiscriminationMode.six_mode_pbs()

P1 = (StepKind.P1,)
P1P2 = (StepKind.P1, StepKind.P2)


def bit_error(F=0.8, n=3):
    return build_binary_ensemble(F, GhzLabel("0" + "1" * (n - 1), +1), n)


class TestScheduleType:
    def test_needs_steps(self):
        with pytest.raises(ValueError):
            Schedule((), EVEN_ONLY, stop_rounds=2)

    def test_needs_exactly_one_stop(self):
        with pytest.raises(ValueError):
            Schedule(P1, EVEN_ONLY)
        with pytest.raises(ValueError):
            Schedule(P1, EVEN_ONLY, stop_rounds=2, stop_threshold=0.9)

    def test_threshold_range(self):
        with pytest.raises(ValueError):
            Schedule(P1, EVEN_ONLY, stop_threshold=0.4)


class TestRunSchedule:
    def test_binary_p1_fidelity_sequence(self):
        sched = Schedule(P1, EVEN_ONLY, stop_rounds=2)
        trace = run_schedule(bit_error(), sched)
        fids = [r.fidelity for r in trace.rounds]
        assert fids[0] == pytest.approx(0.8)
        assert fids[1] == pytest.approx(16 / 17, abs=1e-12)
        f1 = 16 / 17
        assert fids[2] == pytest.approx(f1 ** 2 / (f1 ** 2 + (1 - f1) ** 2),
                                        abs=1e-12)
        assert fids[1] < fids[2]

    def test_initial_record(self):
        sched = Schedule(P1, EVEN_ONLY, stop_rounds=1)
        trace = run_schedule(bit_error(), sched)
        first = trace.rounds[0]
        assert (first.round_index, first.step) == (0, "-")
        assert first.cumulative_yield == 1.0

    def test_yield_convention(self):
        sched = Schedule(P1, EVEN_ONLY, stop_rounds=3)
        trace = run_schedule(bit_error(), sched)
        expected = 1.0
        for rec in trace.rounds[1:]:
            expected *= rec.keep_probability / 2.0
            assert rec.cumulative_yield == pytest.approx(expected, rel=1e-15)

    def test_werner_converges_with_p1p2(self):
        sched = Schedule(P1P2, EVEN_ONLY, stop_threshold=0.99)
        trace = run_schedule(build_werner(0.8, 3), sched)
        assert trace.converged
        assert trace.final_fidelity > 0.99
        assert trace.n_rounds <= 6

    def test_pure_werner_zero_rounds(self):
        sched = Schedule(P1P2, EVEN_ONLY, stop_threshold=0.99)
        trace = run_schedule(build_werner(1.0, 3), sched)
        assert trace.converged
        assert trace.n_rounds == 0

    def test_p1_only_on_werner_plateaus(self):
        sched = Schedule(P1, EVEN_ONLY, stop_threshold=0.99)
        trace = run_schedule(build_werner(0.8, 3), sched)
        assert not trace.converged
        assert trace.n_rounds == MAX_ROUNDS
        assert trace.final_fidelity < 0.99

    def test_fast_and_exact_agree_per_round(self):
        sched = Schedule(P1P2, EVEN_ONLY, stop_rounds=3)
        fast = run_schedule(build_werner(0.8, 3), sched, engine="fast")
        oracle = run_schedule(build_werner(0.8, 3), sched, engine="exact")
        for a, b in zip(fast.rounds, oracle.rounds):
            assert abs(a.fidelity - b.fidelity) < 1e-9
            assert abs(a.keep_probability - b.keep_probability) < 1e-12

    def test_exact_engine_size_bound(self):
        sched = Schedule(P1, EVEN_ONLY, stop_rounds=1)
        with pytest.raises(ValueError):
            run_schedule(bit_error(n=6), sched, engine="exact")

    def test_even_plus_odd_yield_power_of_two(self):
        k = 3
        eo = run_schedule(bit_error(), Schedule(P1, EVEN_ONLY, stop_rounds=k))
        epo = run_schedule(bit_error(), Schedule(P1, EVEN_PLUS_ODD, stop_rounds=k))
        for j in range(1, k + 1):
            ratio = epo.rounds[j].cumulative_yield / eo.rounds[j].cumulative_yield
            assert ratio == pytest.approx(2.0 ** j, rel=1e-12)

    def test_record_ensembles(self):
        sched = Schedule(P1, EVEN_ONLY, stop_rounds=2)
        trace = run_schedule(bit_error(), sched, record_ensembles=True)
        assert len(trace.round_ensembles) == 3
        assert ensemble_fidelity(trace.round_ensembles[-1]) == pytest.approx(
            trace.final_fidelity)


class TestSweep:
    def test_werner_initial_fidelities(self):
        sched = Schedule(P1P2, EVEN_ONLY, stop_threshold=0.99)
        rows = sweep("x", [0.6, 0.7, 0.8, 0.9], 3, sched)
        got = [r.initial_fidelity for r in rows]
        assert got == pytest.approx([0.65, 0.7375, 0.825, 0.9125], abs=1e-15)

    def test_rounds_nonincreasing_in_x(self):
        sched = Schedule(P1P2, EVEN_ONLY, stop_threshold=0.99)
        rows = sweep("x", [0.6, 0.7, 0.8, 0.9], 3, sched)
        rounds = [r.rounds for r in rows]
        assert all(a >= b for a, b in zip(rounds, rounds[1:]))

    def test_single_point_matches_run(self):
        sched = Schedule(P1P2, EVEN_ONLY, stop_threshold=0.99)
        rows = sweep("x", [0.8], 3, sched)
        trace = run_schedule(build_werner(0.8, 3), sched)
        assert rows[0].rounds == trace.n_rounds
        assert rows[0].final_fidelity == pytest.approx(trace.final_fidelity)

    def test_binary_param(self):
        sched = Schedule(P1, EVEN_ONLY, stop_threshold=0.99)
        rows = sweep("F", [0.8, 0.9], 3, sched)
        assert [r.initial_fidelity for r in rows] == pytest.approx([0.8, 0.9])
        assert all(r.converged for r in rows)

    def test_empty_grid(self):
        sched = Schedule(P1, EVEN_ONLY, stop_threshold=0.99)
        with pytest.raises(ValueError):
            sweep("x", [], 3, sched)


class TestCompareOrderings:
    def test_both_orders_converge(self):
        s12 = Schedule(P1P2, EVEN_ONLY, stop_threshold=0.99)
        s21 = Schedule((StepKind.P2, StepKind.P1), EVEN_ONLY, stop_threshold=0.99)
        cmp = compare_orderings(build_werner(0.8, 3), [s12, s21])
        assert all(s.converged for s in cmp.summaries)
        assert len(cmp.by_rounds) == 2
        assert len(cmp.by_yield) == 2

    def test_identical_schedules_tie(self):
        s = Schedule(P1P2, EVEN_ONLY, stop_threshold=0.99)
        cmp = compare_orderings(build_werner(0.8, 3), [s, s])
        assert (0, 1) in cmp.ties_rounds
        assert (0, 1) in cmp.ties_yield

    def test_nonconvergent_ranks_last(self):
        good = Schedule(P1P2, EVEN_ONLY, stop_threshold=0.99)
        bad = Schedule(P1, EVEN_ONLY, stop_threshold=0.99)
        cmp = compare_orderings(build_werner(0.8, 3), [bad, good])
        assert cmp.by_rounds[0] == 1
        assert not cmp.summaries[0].converged

    def test_needs_two(self):
        s = Schedule(P1P2, EVEN_ONLY, stop_threshold=0.99)
        with pytest.raises(ValueError):
            compare_orderings(build_werner(0.8, 3), [s])


class TestModeEquivalence:
    def test_six_mode_trace_identical_to_even_only(self):
        k = 3
        eo = run_schedule(bit_error(), Schedule(P1, EVEN_ONLY, stop_rounds=k))
        six = run_schedule(bit_error(), Schedule(P1, SIX_MODE, stop_rounds=k))
        for a, b in zip(eo.rounds, six.rounds):
            assert a.fidelity == b.fidelity
            assert a.keep_probability == b.keep_probability
