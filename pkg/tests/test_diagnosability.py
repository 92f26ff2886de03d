"""Tests for progressiveness and the diagnosability decision."""

import pytest

from hydiag.diagnosability import (
    DiagnosabilityVerdict,
    check_diagnosable,
    check_progressive,
    detection_delay_bound,
    replay_lasso,
)
from hydiag.estimator import Classification, EstimatorGraph, EstimatorState, build_estimator
from hydiag.oracle import brute_force_diagnosable, random_models
from hydiag.quotient import QuotientModel

from .helpers import FAULT, HIDDEN, TICK, koenig_model, make_model, q3_model


class TestProgressive:
    def test_q1_is_progressive(self, q1):
        report = check_progressive(q1)
        assert report.progressive
        assert report.witness is None

    def test_internal_self_loop_breaks_progress(self, q1):
        model = make_model(
            [(c.faulty, c.initial, c.obs) for c in q1.classes],
            [(s, a.name, d) for s, a, d in q1.edges] + [(2, "h", 2)],
            actions=(TICK, FAULT, HIDDEN),
        )
        report = check_progressive(model)
        assert not report.progressive
        assert report.witness.kind == "cycle"
        assert report.witness.classes == (2, 2)
        assert report.witness.labels == ("h",)

    def test_dead_faulty_class_is_a_deadlock(self):
        model = make_model(
            [(False, True, 0), (True, False, 0)],
            [(0, "tick", 0), (0, "f", 1)],
        )
        report = check_progressive(model)
        assert not report.progressive
        assert report.witness.kind == "deadlock"
        assert report.witness.classes == (1,)

    def test_time_escape_from_deadlock_counts(self):
        # The dead-looking class can let time pass into one with an edge.
        model = make_model(
            [(False, True, 0), (True, False, 0), (True, False, 0)],
            [(0, "tick", 0), (0, "f", 1), (2, "tick", 2)],
            time=[(1, 2)],
        )
        assert check_progressive(model).progressive

    def test_divergent_self_loop_is_a_cycle(self):
        model = make_model(
            [(False, True, 0), (True, False, 0)],
            [(0, "tick", 0), (0, "f", 1), (1, "tick", 1)],
            time=[(1, 1)],
        )
        report = check_progressive(model)
        assert not report.progressive
        assert report.witness.kind == "cycle"
        assert report.witness.labels == ("time",)

    def test_time_cycle_between_distinct_classes(self):
        model = make_model(
            [(False, True, 0), (False, False, 0), (True, False, 0)],
            [(0, "f", 2), (1, "f", 2), (0, "tick", 1), (1, "tick", 0), (2, "tick", 2)],
            time=[(0, 1), (1, 0)],
        )
        report = check_progressive(model)
        assert not report.progressive
        assert report.witness.kind == "cycle"

    def test_zero_external_actions_valid_but_not_progressive(self):
        from hydiag.quotient import validate_model

        from .helpers import FAULT as fault_label

        model = make_model(
            [(False, True, 0), (True, False, 0)],
            [(0, "f", 1)],
            actions=(fault_label,),
        )
        assert validate_model(model).ok
        assert not check_progressive(model).progressive

    def test_unreachable_problems_are_ignored(self):
        # Class 3 deadlocks but nothing reaches it.
        model = make_model(
            [(False, True, 0), (True, False, 0), (False, False, 0), (True, False, 0)],
            [(0, "tick", 0), (0, "f", 1), (1, "tick", 1), (2, "f", 3), (2, "tick", 2)],
        )
        assert check_progressive(model).progressive


def synthetic_estimator(classifications, edges, initial_obs=0):
    """Hand-built estimator graph over dummy member sets."""
    states = []
    for i, cls in enumerate(classifications):
        states.append(EstimatorState((i,), cls))
    transitions = {
        (src, "tick", obs): dst for (src, obs, dst) in edges
    }
    return EstimatorGraph(states, {initial_obs: 0}, transitions, None)


class TestDiagnosable:
    def test_q1_diagnosable(self, q1):
        est = build_estimator(q1)
        assert check_diagnosable(est) == DiagnosabilityVerdict(True, None)

    def test_q2_witness_cycle(self, q2):
        est = build_estimator(q2)
        verdict = check_diagnosable(est)
        assert not verdict.diagnosable
        lasso = verdict.witness
        assert lasso.prefix.pretty() == "o0 tick o1"
        assert lasso.cycle.pretty() == "o1 tick o0 tick o1"
        assert replay_lasso(est, lasso)
        # The cycle runs through the two indeterminate states.
        sid = est.initials[lasso.prefix.head]
        for action, obs in lasso.prefix.steps:
            sid = est.transitions[(sid, action, obs)]
        visited = {est.states[sid].members}
        for action, obs in lasso.cycle.steps:
            sid = est.transitions[(sid, action, obs)]
            visited.add(est.states[sid].members)
        assert visited == {(1, 3), (0, 2)}

    def test_transient_indeterminacy_is_fine(self):
        est = synthetic_estimator(
            [Classification.INDETERMINATE, Classification.FAULTY],
            [(0, 0, 1), (1, 0, 1)],
        )
        assert check_diagnosable(est).diagnosable

    def test_unsustainable_indeterminate_loop_is_diagnosable(self):
        # Indeterminate self-loop in the estimator, but the faulty branch
        # cannot follow it forever: still diagnosable, and the twin-plant
        # oracle agrees.
        model = koenig_model()
        est = build_estimator(model)
        loops = {
            src
            for (src, _, _), dst in est.transitions.items()
            if src == dst
            and est.states[src].classification is Classification.INDETERMINATE
        }
        assert loops, "fixture should have an indeterminate self-loop"
        assert check_diagnosable(est).diagnosable
        assert brute_force_diagnosable(model).diagnosable

    def test_q3_mimic_chain_is_diagnosable(self):
        est = build_estimator(q3_model())
        assert check_diagnosable(est).diagnosable

    def test_cyclic_synthetic_estimator_needs_model(self):
        est = synthetic_estimator(
            [Classification.INDETERMINATE, Classification.INDETERMINATE],
            [(0, 0, 1), (1, 0, 0)],
        )
        with pytest.raises(ValueError):
            check_diagnosable(est)


class TestDelayBound:
    def test_q1_bound_is_one(self, q1):
        assert detection_delay_bound(build_estimator(q1)) == 1

    def test_chain_of_three_bound_is_four_synthetic(self):
        est = synthetic_estimator(
            [
                Classification.INDETERMINATE,
                Classification.INDETERMINATE,
                Classification.INDETERMINATE,
                Classification.FAULTY,
            ],
            [(0, 0, 1), (1, 0, 2), (2, 0, 3), (3, 0, 3)],
        )
        assert detection_delay_bound(est) == 4

    def test_chain_of_three_bound_is_four_model_backed(self):
        assert detection_delay_bound(build_estimator(q3_model())) == 4

    def test_single_faulty_state_estimator(self):
        est = synthetic_estimator([Classification.FAULTY], [(0, 0, 0)])
        assert detection_delay_bound(est) == 1

    def test_rejected_when_not_diagnosable(self, q2):
        with pytest.raises(ValueError):
            detection_delay_bound(build_estimator(q2))


class TestWitnessProperties:
    def test_witnesses_replay_on_corpus(self):
        seen_bad = 0
        for model in random_models(120, 777):
            est = build_estimator(model)
            verdict = check_diagnosable(est)
            if not verdict.diagnosable:
                seen_bad += 1
                assert replay_lasso(est, verdict.witness)
        assert seen_bad > 0

    def test_monotone_refutation_under_edge_addition(self):
        # Adding edges while the original witness stays replayable (with
        # every replayed cycle state still indeterminate) must keep the
        # model non-diagnosable.
        import random as _random

        rng = _random.Random(5)
        checked = 0
        for model in random_models(120, 31337):
            est = build_estimator(model)
            verdict = check_diagnosable(est)
            if verdict.diagnosable:
                continue
            flags = model.faulty
            same_flag_pairs = [
                (s, d)
                for s in range(len(model.classes))
                for d in range(len(model.classes))
                if flags[s] == flags[d]
            ]
            src, dst = rng.choice(same_flag_pairs)
            action = rng.choice(model.external_actions)
            bigger = QuotientModel(
                model.classes,
                model.actions,
                list(model.edges) + [(src, action, dst)],
                [(s, d) for s, d in model.time if s != d],
                model.divergent,
            )
            est2 = build_estimator(bigger)
            if replay_lasso(est2, verdict.witness):
                sustained = _witness_product_sustained(bigger, est2, verdict.witness)
                if sustained:
                    assert not check_diagnosable(est2).diagnosable
                checked += 1
        assert checked > 0


def _witness_product_sustained(model, est, lasso):
    """Does some faulty class follow the witness cycle forever?"""
    from hydiag.quotient import external_successors

    sid = est.initials.get(lasso.prefix.head)
    for action, obs in lasso.prefix.steps:
        sid = est.transitions.get((sid, action, obs))
    start = sid
    faulty_here = {c for c in est.states[sid].members if model.faulty[c]}
    # Iterate the cycle enough times to detect a stable nonempty core.
    for _ in range(len(est.states) * len(model.classes) + 1):
        for action, obs in lasso.cycle.steps:
            nxt = set()
            for c in faulty_here:
                nxt |= external_successors(model, (c,), action, obs)
            sid = est.transitions.get((sid, action, obs))
            faulty_here = {c for c in nxt if sid is not None and c in est.states[sid].members}
        if not faulty_here:
            return False
    return bool(faulty_here)
