"""Deterministic state estimator built by subset construction.

The estimator tracks, after each observed external action, the set of
quotient classes consistent with everything seen so far.  Its states are
canonically encoded member sets; only the fragment reachable from the
initial estimates is built, since the full powerset is both intractable
and irrelevant for diagnosability.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from enum import Enum

from .errors import CapExceeded, ModelFormatError
from .quotient import external_successors, unobservable_closure

DEFAULT_MAX_STATES = 1_000_000


class Classification(str, Enum):
    FAULTY = "faulty"
    NONFAULTY = "nonfaulty"
    INDETERMINATE = "indeterminate"


def classify(members, model):
    """Faulty if all members are faulty, non-faulty if none, else indeterminate."""
    members = tuple(members)
    if not members:
        raise ValueError("cannot classify an empty estimate")
    flags = {model.faulty[c] for c in members}
    if flags == {True}:
        return Classification.FAULTY
    if flags == {False}:
        return Classification.NONFAULTY
    return Classification.INDETERMINATE


@dataclass(frozen=True)
class EstimatorState:
    """Canonical estimator state: sorted member classes plus their kind."""

    members: tuple[int, ...]
    classification: Classification


@dataclass
class EstimatorGraph:
    """Reachable fragment of the estimator.

    ``states`` is indexed by state id (discovery order, hence canonical),
    ``initials`` maps an observable to the state estimated before any
    action, and ``transitions`` maps (state id, action name, observable)
    to the successor state id.  Immutable by convention once built.
    """

    states: list[EstimatorState]
    initials: dict[int, int]
    transitions: dict[tuple[int, str, int], int]
    model: object = field(default=None, repr=False)

    def state_observable(self, sid):
        """The observable shared by all members of a reachable state."""
        for obs, s in self.initials.items():
            if s == sid:
                return obs
        for (_, _, obs), dst in self.transitions.items():
            if dst == sid:
                return obs
        raise ValueError(f"state {sid} is unreachable, no observable known")


def initial_estimates(model):
    """Initial classes grouped by their observable.

    Observables with no initial class get no entry: before any action the
    observer sees exactly one cell, and only cells containing an initial
    class are consistent with it.
    """
    groups = {}
    for c in model.initial_classes:
        groups.setdefault(model.obs[c], []).append(c)
    return {
        obs: EstimatorState(tuple(sorted(members)), classify(members, model))
        for obs, members in sorted(groups.items())
    }


def delta(model, state, action, obs):
    """Successor estimate for one observed (action, observable) pair.

    Returns None when no execution is consistent with the observation;
    the transition function is partial by design, a sink state would
    fabricate runs the system cannot produce.
    """
    members = state.members if isinstance(state, EstimatorState) else tuple(state)
    succ = external_successors(model, members, action, obs)
    if not succ:
        return None
    ordered = tuple(sorted(succ))
    return EstimatorState(ordered, classify(ordered, model))


def build_estimator(model, max_states=DEFAULT_MAX_STATES):
    """Subset construction over the reachable estimates.

    Deterministic: states are numbered in BFS discovery order with
    observables and actions visited in a fixed order, so repeated builds
    yield identical graphs.  Raises CapExceeded beyond ``max_states``
    (the reachable part may still be exponential in the class count).
    """
    states = []
    index = {}
    initials = {}
    transitions = {}

    def intern(est_state):
        sid = index.get(est_state.members)
        if sid is None:
            if max_states is not None and len(states) >= max_states:
                raise CapExceeded("estimator states", len(states) + 1, max_states)
            sid = len(states)
            states.append(est_state)
            index[est_state.members] = sid
        return sid

    for obs, st in initial_estimates(model).items():
        initials[obs] = intern(st)

    queue = deque(range(len(states)))
    seen = len(states)
    while queue:
        sid = queue.popleft()
        members = states[sid].members
        closure = unobservable_closure(model, members)
        for action in model.external_actions:
            buckets = {}
            for c in closure:
                for dst in model.external_edges_from(c, action):
                    buckets.setdefault(model.obs[dst], set()).add(dst)
            for obs in sorted(buckets):
                ordered = tuple(sorted(buckets[obs]))
                succ = EstimatorState(ordered, classify(ordered, model))
                tid = intern(succ)
                transitions[(sid, action.name, obs)] = tid
                if tid >= seen:
                    queue.append(tid)
                    seen = tid + 1
    return EstimatorGraph(states, initials, transitions, model)


def dumps_estimator(est):
    """Serialize an estimator graph to its JSON export format."""
    data = {
        "states": [
            {"id": i, "members": list(s.members), "class": s.classification.value}
            for i, s in enumerate(est.states)
        ],
        "initials": {str(obs): sid for obs, sid in sorted(est.initials.items())},
        "transitions": [
            {"src": src, "action": action, "obs": obs, "dst": dst}
            for (src, action, obs), dst in sorted(est.transitions.items())
        ],
    }
    return json.dumps(data, indent=2) + "\n"


def save_estimator(est, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_estimator(est))


def _parse_graph_json(data, what, extra_keys=frozenset()):
    """Shared loader for the estimator schema (also used by diagnoser files)."""
    keys = {"states", "initials", "transitions"} | extra_keys
    if not isinstance(data, dict):
        raise ModelFormatError(f"{what} must be an object")
    unknown = set(data) - keys
    if unknown:
        raise ModelFormatError(f"{what} has unknown keys: {sorted(unknown)}")
    missing = keys - set(data)
    if missing:
        raise ModelFormatError(f"{what} is missing keys: {sorted(missing)}")

    states = []
    for i, s in enumerate(data["states"]):
        if set(s) != {"id", "members", "class"}:
            raise ModelFormatError(f"states[{i}] must have keys id, members, class")
        if s["id"] != i:
            raise ModelFormatError(f"states[{i}].id must be {i}")
        try:
            cls = Classification(s["class"])
        except ValueError:
            raise ModelFormatError(f"states[{i}].class is invalid") from None
        states.append(EstimatorState(tuple(int(m) for m in s["members"]), cls))

    n = len(states)
    initials = {}
    for obs, sid in data["initials"].items():
        sid = int(sid)
        if not 0 <= sid < n:
            raise ModelFormatError(f"initials[{obs}] out of range")
        initials[int(obs)] = sid

    transitions = {}
    for i, t in enumerate(data["transitions"]):
        if set(t) != {"src", "action", "obs", "dst"}:
            raise ModelFormatError(
                f"transitions[{i}] must have keys src, action, obs, dst"
            )
        src, dst = int(t["src"]), int(t["dst"])
        if not (0 <= src < n and 0 <= dst < n):
            raise ModelFormatError(f"transitions[{i}] out of range")
        transitions[(src, str(t["action"]), int(t["obs"]))] = dst
    return states, initials, transitions
