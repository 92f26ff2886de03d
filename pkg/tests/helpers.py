"""Shared builders and independent oracles used across the test suite."""

from __future__ import annotations

import random

from hydiag.quotient import ActionLabel, ClassInfo, Kind, QuotientModel, UTrace
from hydiag.regions import (
    ClockConstraint,
    Location,
    ObservableSpec,
    TAEdge,
    TimedAutomatonWithFaults,
    parse_pred,
)

TICK = ActionLabel("tick", Kind.EXTERNAL)
FAULT = ActionLabel("f", Kind.FAULT)
HIDDEN = ActionLabel("h", Kind.INTERNAL)


def make_model(classes, edges, time=(), actions=(TICK, FAULT), divergent=()):
    """Build a QuotientModel from (faulty, initial, obs) class triples."""
    infos = [
        ClassInfo(i, faulty, initial, obs)
        for i, (faulty, initial, obs) in enumerate(classes)
    ]
    return QuotientModel(infos, actions, edges, time, divergent)


def q1_model():
    """Diagnosable four-class fixture: faulty ticks keep a constant observable."""
    return make_model(
        [(False, True, 0), (False, False, 1), (True, False, 0), (True, False, 1)],
        [
            (0, "tick", 1),
            (1, "tick", 0),
            (0, "f", 2),
            (1, "f", 3),
            (2, "tick", 2),
            (3, "tick", 3),
        ],
    )


def q2_model():
    """Non-diagnosable twin of q1: faulty ticks mimic the alternation."""
    return make_model(
        [(False, True, 0), (False, False, 1), (True, False, 0), (True, False, 1)],
        [
            (0, "tick", 1),
            (1, "tick", 0),
            (0, "f", 2),
            (1, "f", 3),
            (2, "tick", 3),
            (3, "tick", 2),
        ],
    )


def q3_model():
    """Faulty branch mimics the alternation for exactly three events.

    Classes 0/1 are the non-faulty alternation; 2..6 the faulty chain
    g0..g4.  The estimator stays ambiguous for three events after a
    fault, then the chain's observable pattern breaks.
    """
    return make_model(
        [
            (False, True, 0),   # n0
            (False, False, 1),  # n1
            (True, False, 0),   # g0
            (True, False, 1),   # g1
            (True, False, 0),   # g2
            (True, False, 1),   # g3
            (True, False, 1),   # g4
        ],
        [
            (0, "tick", 1),
            (1, "tick", 0),
            (0, "f", 2),
            (1, "f", 3),
            (2, "tick", 3),
            (3, "tick", 4),
            (4, "tick", 5),
            (5, "tick", 6),
            (6, "tick", 6),
        ],
    )


def koenig_model():
    """Regression fixture: an indeterminate estimator self-loop that no
    faulty run can sustain, so the system is diagnosable anyway.

    Found by the randomized agreement suite; the faulty branch can mimic
    the non-faulty (e1, o0) self-loop for one step only.
    """
    E0 = ActionLabel("e0", Kind.EXTERNAL)
    E1 = ActionLabel("e1", Kind.EXTERNAL)
    return make_model(
        [
            (False, True, 0),
            (True, False, 0),
            (True, False, 0),
            (True, False, 1),
            (True, False, 0),
        ],
        [
            (0, "e1", 0),
            (0, "f", 3),
            (1, "e0", 4),
            (2, "e1", 3),
            (3, "e0", 1),
            (3, "e1", 1),
            (3, "e1", 2),
            (3, "e1", 3),
            (4, "e0", 1),
            (4, "e0", 3),
            (4, "e1", 1),
            (4, "e1", 2),
            (4, "e1", 4),
        ],
        time=[(3, 2), (4, 1)],
        actions=(E0, E1, FAULT),
    )


def estimator_trace_map(est, k):
    """Traces of length <= k realized by the estimator, with members.

    Walks the estimator graph breadth-first; the graph is deterministic,
    so each trace reaches one state.
    """
    out = {}
    frontier = []
    for obs, sid in sorted(est.initials.items()):
        trace = UTrace(obs)
        out[trace] = frozenset(est.states[sid].members)
        frontier.append((sid, trace))
    by_src = {}
    for (src, action, obs), dst in sorted(est.transitions.items()):
        by_src.setdefault(src, []).append((action, obs, dst))
    for _ in range(k):
        nxt = []
        for sid, trace in frontier:
            for action, obs, dst in by_src.get(sid, ()):
                t2 = trace.extend(action, obs)
                if t2 not in out:
                    out[t2] = frozenset(est.states[dst].members)
                    nxt.append((dst, t2))
        frontier = nxt
    return out


def random_ta(seed):
    """A small random timed automaton, valid by construction.

    Fault edges have empty guards, no resets, and fault into
    invariant-free locations, so the fault is enabled from every state
    and the region quotient always passes validation.
    """
    rng = random.Random(seed)
    n_clocks = rng.randint(1, 2)
    n_external = rng.randint(1, n_clocks)
    names = ["x", "y"][:n_clocks]
    external = names[:n_external]
    internal = names[n_external:]

    n_locs = rng.randint(2, 3)
    n_faulty = rng.randint(1, n_locs - 1)
    loc_names = [f"L{i}" for i in range(n_locs)]
    locations = []
    for i, name in enumerate(loc_names):
        faulty = i >= n_locs - n_faulty
        invariant = ()
        if not faulty and rng.random() < 0.6:
            clock = rng.choice(names)
            invariant = (ClockConstraint(clock, "<=", rng.randint(1, 3)),)
        locations.append(Location(name, faulty, initial=(i == 0), invariant=invariant))

    nonfaulty = [l.name for l in locations if not l.faulty]
    faulty = [l.name for l in locations if l.faulty]

    def random_guard():
        guard = []
        for _ in range(rng.randint(0, 2)):
            clock = rng.choice(names)
            op = rng.choice(["<", "<=", "==", ">=", ">"])
            guard.append(ClockConstraint(clock, op, rng.randint(0, 3)))
        return tuple(guard)

    edges = []
    for name in nonfaulty:
        edges.append(TAEdge(name, rng.choice(faulty), "boom", Kind.FAULT, (), frozenset()))
    ext_actions = ["a", "b"][: rng.randint(1, 2)]
    for _ in range(rng.randint(2, 5)):
        group = nonfaulty if rng.random() < 0.5 else faulty
        src = rng.choice(group)
        dst = rng.choice(group)
        resets = frozenset(c for c in names if rng.random() < 0.4)
        edges.append(TAEdge(src, dst, rng.choice(ext_actions), Kind.EXTERNAL, random_guard(), resets))
    if rng.random() < 0.3:
        group = nonfaulty if rng.random() < 0.5 else faulty
        edges.append(
            TAEdge(rng.choice(group), rng.choice(group), "h", Kind.INTERNAL, random_guard(), frozenset())
        )

    watched = external[0]
    observation = _threshold_observation(watched, rng)
    return TimedAutomatonWithFaults(locations, internal, external, edges, observation)


def _threshold_observation(watched, rng):
    cuts = sorted(rng.sample(range(1, 4), rng.randint(1, 2)))
    cells = []
    lower = None
    for cut in cuts:
        if lower is None:
            cells.append(f"{watched}<{cut}")
        else:
            cells.append(f"!({watched}<{lower}) & {watched}<{cut}")
        lower = cut
    cells.append(f"!({watched}<{lower})")
    return tuple(ObservableSpec(i, parse_pred(src), src) for i, src in enumerate(cells))


def random_progressive_ta(seed):
    """A random timed automaton whose region quotient is progressive.

    Every location carries the invariant x <= C on an external pacer
    clock, so time can never diverge, and every location has an external
    edge with an empty guard that resets the pacer, so no region ever
    deadlocks.  Fault edges are silent, always enabled, and the fault
    action is the only internal one, so silent cycles cannot arise.
    """
    rng = random.Random(seed)
    cap = rng.randint(1, 2)
    pacer_inv = (ClockConstraint("x", "<=", cap),)
    n_locs = rng.randint(2, 3)
    n_faulty = rng.randint(1, n_locs - 1)
    locations = []
    for i in range(n_locs):
        faulty = i >= n_locs - n_faulty
        locations.append(Location(f"L{i}", faulty, initial=(i == 0), invariant=pacer_inv))
    nonfaulty = [l.name for l in locations if not l.faulty]
    faulty = [l.name for l in locations if l.faulty]

    edges = []
    for name in nonfaulty:
        edges.append(TAEdge(name, rng.choice(faulty), "boom", Kind.FAULT, (), frozenset()))
    pace_guard = (ClockConstraint("x", "==", cap),)
    for loc in locations:
        group = nonfaulty if loc.name in nonfaulty else faulty
        # Faulty locations may stop resetting the pacer (a "leak"): ticks
        # are then pinned at the cap, which is what can reveal the fault.
        net_resets = frozenset({"x"})
        if loc.faulty and rng.random() < 0.6:
            net_resets = frozenset()
        edges.append(
            TAEdge(loc.name, rng.choice(group), "a", Kind.EXTERNAL, pace_guard, net_resets)
        )
        for _ in range(rng.randint(0, 2)):
            guard = (ClockConstraint("x", rng.choice(["==", "<=", ">="]), rng.randint(0, cap)),)
            resets = frozenset({"x"}) if rng.random() < 0.6 else frozenset()
            edges.append(
                TAEdge(
                    loc.name,
                    rng.choice(group),
                    rng.choice(["a", "b"]),
                    Kind.EXTERNAL,
                    guard,
                    resets,
                )
            )

    observation = _threshold_observation("x", rng)
    return TimedAutomatonWithFaults(locations, [], ["x"], edges, observation)
