"""Finite time-abstract quotient models of hybrid systems with faults.

A quotient is a finite labeled transition system whose nodes are
equivalence classes of system states.  Classes are split into faulty and
non-faulty, carry the observable (partition cell) their states fall in,
and are connected by discrete edges (external, internal, or the single
distinguished fault action) and by time edges abstracting continuous
evolution.  Time edges are kept reflexively and transitively closed:
closure is computed at construction rather than rejected, because prefix,
suffix and concatenation closure of trajectory sets collapse to exactly
reflexivity plus transitivity at this level of abstraction.

A time self-pair (c, c) supplied explicitly (in a file or to the
constructor) marks class c as genuinely time-divergent: the system can let
time pass there forever.  Reflexive pairs added by the closure are mere
artifacts and carry no such meaning.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

from .errors import ModelFormatError
from .graphs import reflexive_transitive_closure


class Kind(str, Enum):
    """Visibility of a discrete action."""

    EXTERNAL = "external"
    INTERNAL = "internal"
    FAULT = "fault"


@dataclass(frozen=True)
class ActionLabel:
    name: str
    kind: Kind


@dataclass(frozen=True)
class ClassInfo:
    """One equivalence class: dense id, fault status, initiality, observable."""

    id: int
    faulty: bool
    initial: bool
    obs: int


@dataclass(frozen=True)
class UTrace:
    """Untimed observation trace: head observable, then (action, observable) steps."""

    head: int
    steps: tuple[tuple[str, int], ...] = ()

    def extend(self, action, obs):
        return UTrace(self.head, self.steps + ((action, int(obs)),))

    def pretty(self):
        parts = [f"o{self.head}"]
        for action, obs in self.steps:
            parts.append(action)
            parts.append(f"o{obs}")
        return " ".join(parts)

    def to_json(self):
        return {"head": self.head, "steps": [[a, o] for a, o in self.steps]}

    @classmethod
    def from_json(cls, data):
        return cls(int(data["head"]), tuple((a, int(o)) for a, o in data["steps"]))


@dataclass(frozen=True)
class Lasso:
    """A finite prefix plus a repeatable cycle of observations."""

    prefix: UTrace
    cycle: UTrace

    def to_json(self):
        return {"prefix": self.prefix.to_json(), "cycle": self.cycle.to_json()}

    @classmethod
    def from_json(cls, data):
        return cls(UTrace.from_json(data["prefix"]), UTrace.from_json(data["cycle"]))


@dataclass(frozen=True)
class Violation:
    rule: str
    subject: object
    message: str


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[Violation, ...]

    def to_json(self):
        return {
            "ok": self.ok,
            "violations": [
                {"rule": v.rule, "subject": v.subject, "message": v.message}
                for v in self.violations
            ],
        }


class QuotientModel:
    """Immutable quotient transition system.

    ``classes`` is a sequence of ClassInfo with dense ids 0..n-1,
    ``actions`` a sequence of ActionLabel with exactly one fault action,
    ``edges`` an iterable of (src, action-name-or-label, dst) and ``time``
    an iterable of (src, dst) pairs.  Instances never mutate after
    construction and are safe to share across threads.
    """

    def __init__(self, classes, actions, edges, time=(), divergent=()):
        self.classes = tuple(classes)
        for i, c in enumerate(self.classes):
            if c.id != i:
                raise ValueError(f"class ids must be dense 0..n-1, got {c.id} at {i}")
        n = len(self.classes)

        self.actions = tuple(actions)
        by_name = {}
        for a in self.actions:
            if a.name in by_name:
                raise ValueError(f"duplicate action name {a.name!r}")
            by_name[a.name] = a
        self._by_name = by_name
        faults = [a for a in self.actions if a.kind is Kind.FAULT]
        if len(faults) != 1:
            raise ValueError(f"exactly one fault action required, got {len(faults)}")
        self.fault_action = faults[0]
        self.external_actions = tuple(a for a in self.actions if a.kind is Kind.EXTERNAL)

        resolved = set()
        for src, action, dst in edges:
            label = action if isinstance(action, ActionLabel) else by_name.get(action)
            if label is None or label not in self.actions:
                raise ValueError(f"edge action {action!r} is not a declared action")
            if not (0 <= src < n and 0 <= dst < n):
                raise ValueError(f"edge ({src}, {label.name}, {dst}) out of range")
            resolved.add((src, label, dst))
        self.edges = tuple(sorted(resolved, key=lambda e: (e[0], e[1].name, e[2])))

        time_pairs = set()
        for src, dst in time:
            if not (0 <= src < n and 0 <= dst < n):
                raise ValueError(f"time edge ({src}, {dst}) out of range")
            time_pairs.add((src, dst))
        self.divergent = frozenset(divergent) | {s for s, d in time_pairs if s == d}
        if any(not 0 <= c < n for c in self.divergent):
            raise ValueError("divergent class out of range")
        self.time = frozenset(reflexive_transitive_closure(n, time_pairs))

        self.faulty = tuple(c.faulty for c in self.classes)
        self.obs = tuple(c.obs for c in self.classes)
        self.initial_classes = tuple(c.id for c in self.classes if c.initial)
        self.num_observables = max((c.obs for c in self.classes), default=-1) + 1

        # Adjacency caches used by the closure and successor operations.
        silent = [set() for _ in range(n)]
        ext = {}
        disc = [[] for _ in range(n)]
        for src, label, dst in self.edges:
            disc[src].append((label, dst))
            if label.kind is Kind.EXTERNAL:
                ext.setdefault((src, label.name), []).append(dst)
            else:
                silent[src].add(dst)
        tsucc = [set() for _ in range(n)]
        for src, dst in self.time:
            if src != dst:
                silent[src].add(dst)
                tsucc[src].add(dst)
        self._silent = tuple(tuple(sorted(s)) for s in silent)
        self._ext = {k: tuple(sorted(v)) for k, v in ext.items()}
        self._disc = tuple(tuple(d) for d in disc)
        self._tsucc = tuple(tuple(sorted(s)) for s in tsucc)

    def action(self, name):
        """Look up a declared ActionLabel by name."""
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"unknown action {name!r}") from None

    def external_edges_from(self, cls_id, action):
        name = action.name if isinstance(action, ActionLabel) else action
        return self._ext.get((cls_id, name), ())

    def discrete_edges_from(self, cls_id):
        return self._disc[cls_id]

    def proper_time_successors(self, cls_id):
        return self._tsucc[cls_id]

    def __eq__(self, other):
        if not isinstance(other, QuotientModel):
            return NotImplemented
        return (
            self.classes == other.classes
            and self.actions == other.actions
            and self.edges == other.edges
            and self.time == other.time
            and self.divergent == other.divergent
        )

    def __repr__(self):
        return (
            f"QuotientModel(n={len(self.classes)}, actions={len(self.actions)}, "
            f"edges={len(self.edges)})"
        )


def validate_model(model):
    """Check the fault axioms and report every violation with a witness.

    Violations are data, not failures: the report lists each broken rule
    (D1, D2, D3, T1, InitNonFaulty, ObsTotal, Nonempty) with the offending
    class or edge.
    """
    violations = []

    if not model.initial_classes:
        violations.append(Violation("Nonempty", None, "model has no initial class"))

    fault_sources = {src for src, label, _ in model.edges if label.kind is Kind.FAULT}
    for c in model.classes:
        if c.initial and c.faulty:
            violations.append(
                Violation("InitNonFaulty", c.id, f"initial class {c.id} is faulty")
            )
        if c.obs < 0:
            violations.append(
                Violation("ObsTotal", c.id, f"class {c.id} has no valid observable")
            )
        if not c.faulty and c.id not in fault_sources:
            violations.append(
                Violation("D1", c.id, f"non-faulty class {c.id} has no fault edge")
            )

    for src, label, dst in model.edges:
        if label.kind is Kind.FAULT:
            if model.faulty[src] or not model.faulty[dst]:
                violations.append(
                    Violation(
                        "D2",
                        (src, label.name, dst),
                        f"fault edge {src}->{dst} must go non-faulty to faulty",
                    )
                )
        elif model.faulty[src] != model.faulty[dst]:
            violations.append(
                Violation(
                    "D3",
                    (src, label.name, dst),
                    f"edge {src}-{label.name}->{dst} changes the fault status",
                )
            )

    for src, dst in sorted(model.time):
        if model.faulty[src] != model.faulty[dst]:
            violations.append(
                Violation(
                    "T1",
                    (src, dst),
                    f"time edge {src}->{dst} changes the fault status",
                )
            )

    return ValidationReport(not violations, tuple(violations))


def unobservable_closure(model, seed):
    """Least superset of ``seed`` closed under time edges and silent actions.

    Silent means internal or fault: everything the system can do without
    the observer noticing.
    """
    closure = set(seed)
    frontier = list(closure)
    while frontier:
        c = frontier.pop()
        for d in model._silent[c]:
            if d not in closure:
                closure.add(d)
                frontier.append(d)
    return frozenset(closure)


def external_successors(model, seed, action, obs):
    """Classes reachable by one observed external action.

    The system may first evolve silently from any class in ``seed``, then
    takes ``action``; the observable is sampled right after the action, so
    only targets lying in cell ``obs`` qualify.  An empty result means no
    execution is consistent with the observation.
    """
    label = action if isinstance(action, ActionLabel) else model.action(action)
    if label.kind is not Kind.EXTERNAL:
        raise ValueError(f"action {label.name!r} is not external")
    out = set()
    for c in unobservable_closure(model, seed):
        for dst in model.external_edges_from(c, label):
            if model.obs[dst] == obs:
                out.add(dst)
    return frozenset(out)


# ---------------------------------------------------------------------------
# Model file format (JSON)

_CLASS_KEYS = {"id", "faulty", "initial", "obs"}
_ACTION_KEYS = {"name", "kind"}
_EDGE_KEYS = {"src", "action", "dst"}
_TIME_KEYS = {"src", "dst"}


def _require_keys(obj, keys, what):
    if not isinstance(obj, dict):
        raise ModelFormatError(f"{what} must be an object")
    extra = set(obj) - keys
    if extra:
        raise ModelFormatError(f"{what} has unknown keys: {sorted(extra)}")
    missing = keys - set(obj)
    if missing:
        raise ModelFormatError(f"{what} is missing keys: {sorted(missing)}")


def _as_int(value, what):
    if not isinstance(value, int) or isinstance(value, bool):
        raise ModelFormatError(f"{what} must be an integer, got {value!r}")
    return value


def _as_bool(value, what):
    if not isinstance(value, bool):
        raise ModelFormatError(f"{what} must be a boolean, got {value!r}")
    return value


def loads_model(text):
    """Parse a quotient model from its JSON file format."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelFormatError(
            f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}"
        ) from None
    _require_keys(data, {"classes", "actions", "edges", "time"}, "model")

    classes = []
    for i, c in enumerate(data["classes"]):
        _require_keys(c, _CLASS_KEYS, f"classes[{i}]")
        classes.append(
            ClassInfo(
                _as_int(c["id"], f"classes[{i}].id"),
                _as_bool(c["faulty"], f"classes[{i}].faulty"),
                _as_bool(c["initial"], f"classes[{i}].initial"),
                _as_int(c["obs"], f"classes[{i}].obs"),
            )
        )

    actions = []
    for i, a in enumerate(data["actions"]):
        _require_keys(a, _ACTION_KEYS, f"actions[{i}]")
        try:
            kind = Kind(a["kind"])
        except ValueError:
            raise ModelFormatError(
                f"actions[{i}].kind must be one of external|internal|fault"
            ) from None
        if not isinstance(a["name"], str):
            raise ModelFormatError(f"actions[{i}].name must be a string")
        actions.append(ActionLabel(a["name"], kind))

    edges = []
    for i, e in enumerate(data["edges"]):
        _require_keys(e, _EDGE_KEYS, f"edges[{i}]")
        if not isinstance(e["action"], str):
            raise ModelFormatError(f"edges[{i}].action must be a string")
        edges.append(
            (
                _as_int(e["src"], f"edges[{i}].src"),
                e["action"],
                _as_int(e["dst"], f"edges[{i}].dst"),
            )
        )

    time = []
    for i, t in enumerate(data["time"]):
        _require_keys(t, _TIME_KEYS, f"time[{i}]")
        time.append(
            (_as_int(t["src"], f"time[{i}].src"), _as_int(t["dst"], f"time[{i}].dst"))
        )

    try:
        return QuotientModel(classes, actions, edges, time)
    except ValueError as e:
        raise ModelFormatError(str(e)) from None


def load_model(path):
    with open(path, encoding="utf-8") as fh:
        return loads_model(fh.read())


def dumps_model(model):
    """Serialize a model to the JSON file format (round-trip stable).

    Only the transitive reduction of time is not recovered; the closed
    relation is written minus the reflexive artifacts, and self-pairs are
    emitted exactly for the time-divergent classes.
    """
    time = sorted({(s, d) for s, d in model.time if s != d} | {(c, c) for c in model.divergent})
    data = {
        "classes": [
            {"id": c.id, "faulty": c.faulty, "initial": c.initial, "obs": c.obs}
            for c in model.classes
        ],
        "actions": [{"name": a.name, "kind": a.kind.value} for a in model.actions],
        "edges": [
            {"src": src, "action": label.name, "dst": dst}
            for src, label, dst in model.edges
        ],
        "time": [{"src": s, "dst": d} for s, d in time],
    }
    return json.dumps(data, indent=2) + "\n"


def save_model(model, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_model(model))
