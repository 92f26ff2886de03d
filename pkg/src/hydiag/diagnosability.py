"""Diagnosability decision and progressiveness check.

A system is time-abstract diagnosable exactly when the estimator has no
reachable loop of indeterminate states that a faulty run can sustain:
transient ambiguity is fine, but an ambiguity the system can keep alive
forever is not.  Mere cycles of indeterminate states are not enough: a
loop only refutes diagnosability if some single faulty run traverses it
forever, which is decided on the product of indeterminate estimator
states with their faulty member classes.  (The non-faulty side needs no
such care: a run ending non-faulty is non-faulty throughout, so
non-faulty witnesses for longer and longer prefixes always chain into
one infinite non-faulty run.)

Non-diagnosable systems get a witness lasso; non-progressive systems
(which can starve the observer of external events) are rejected up front
with a deadlock or silent-cycle witness.
"""

from __future__ import annotations

from dataclasses import dataclass

from .estimator import Classification
from .graphs import (
    bfs_parents,
    is_cyclic_component,
    path_from_parents,
    shortest_cycle,
    strongly_connected_components,
)
from .quotient import Kind, Lasso, UTrace, external_successors


@dataclass(frozen=True)
class ProgressWitness:
    """A deadlocked class, or a reachable cycle of silent moves.

    ``labels[i]`` is the action between ``classes[i]`` and ``classes[i+1]``
    ("time" for time edges); a deadlock witness has a single class.
    """

    kind: str  # "deadlock" | "cycle"
    classes: tuple[int, ...]
    labels: tuple[str, ...]

    def pretty(self):
        if self.kind == "deadlock":
            return f"deadlock at class {self.classes[0]}"
        parts = [str(self.classes[0])]
        for label, cls in zip(self.labels, self.classes[1:]):
            parts.append(f"-{label}-> {cls}")
        return "cycle: " + " ".join(parts)

    def to_json(self):
        return {"kind": self.kind, "classes": list(self.classes), "labels": list(self.labels)}


@dataclass(frozen=True)
class ProgressReport:
    progressive: bool
    witness: ProgressWitness | None


@dataclass(frozen=True)
class DiagnosabilityVerdict:
    diagnosable: bool
    witness: Lasso | None

    def to_json(self):
        return {
            "diagnosable": self.diagnosable,
            "witness": self.witness.to_json() if self.witness else None,
        }


def _reachable_classes(model):
    seen = set(model.initial_classes)
    frontier = list(seen)
    while frontier:
        c = frontier.pop()
        succ = [dst for _, dst in model.discrete_edges_from(c)]
        succ.extend(model.proper_time_successors(c))
        for d in succ:
            if d not in seen:
                seen.add(d)
                frontier.append(d)
    return seen


def check_progressive(model):
    """Can every maximal run keep producing external events?

    Fails with a witness if some reachable class deadlocks (no discrete
    edge now or after any time elapse) or if a reachable cycle of internal
    actions and time edges exists.  Reflexive time self-loops introduced
    by the closure do not count; an explicit divergence mark does, since
    the system can then let time pass forever in that class.
    """
    reachable = sorted(_reachable_classes(model))

    has_discrete = {c: bool(model.discrete_edges_from(c)) for c in reachable}
    for c in reachable:
        if c in model.divergent:
            continue  # handled as a time cycle below
        if has_discrete[c]:
            continue
        if any(has_discrete.get(d, False) for d in model.proper_time_successors(c)):
            continue
        return ProgressReport(False, ProgressWitness("deadlock", (c,), ()))

    def silent_succ(c):
        for label, dst in model.discrete_edges_from(c):
            if label.kind is not Kind.EXTERNAL:
                yield label.name, dst
        for dst in model.proper_time_successors(c):
            yield "time", dst
        if c in model.divergent:
            yield "time", c

    reach_set = set(reachable)
    comps = strongly_connected_components(
        reachable, lambda c: (d for _, d in silent_succ(c) if d in reach_set)
    )
    for comp in comps:
        if not is_cyclic_component(comp, lambda c: (d for _, d in silent_succ(c))):
            continue
        start = min(comp)
        found = shortest_cycle(start, silent_succ, set(comp))
        if found is None:
            continue
        nodes, labels = found
        return ProgressReport(False, ProgressWitness("cycle", tuple(nodes), tuple(labels)))
    return ProgressReport(True, None)


def _indeterminate_subgraph(est):
    """Adjacency among indeterminate states, with (action, obs) labels."""
    indet = {
        sid
        for sid, st in enumerate(est.states)
        if st.classification is Classification.INDETERMINATE
    }
    adj = {sid: [] for sid in indet}
    for (src, action, obs), dst in sorted(est.transitions.items()):
        if src in indet and dst in indet:
            adj[src].append(((action, obs), dst))
    return indet, adj


def _full_adjacency(est):
    adj = {sid: [] for sid in range(len(est.states))}
    for (src, action, obs), dst in sorted(est.transitions.items()):
        adj[src].append(((action, obs), dst))
    return adj


def _state_observables(est):
    """Observable per reachable state, from initials and edge labels."""
    obs_of = {}
    for obs, sid in est.initials.items():
        obs_of[sid] = obs
    for (_, _, obs), dst in est.transitions.items():
        obs_of.setdefault(dst, obs)
    return obs_of


def _fault_product(est):
    """Indeterminate estimator states paired with their faulty members.

    A product edge follows one estimator transition while moving the
    faulty class along a consistent single-class step; a cycle here is
    exactly an indeterminate loop some faulty run can sustain forever.
    Needs the backing model to resolve single-class successors.
    """
    model = est.model
    indet, adj = _indeterminate_subgraph(est)
    nodes = []
    for sid in sorted(indet):
        for c in est.states[sid].members:
            if model.faulty[c]:
                nodes.append((sid, c))
    product_adj = {node: [] for node in nodes}
    for sid in sorted(indet):
        for (action, obs), dst in adj[sid]:
            for c in est.states[sid].members:
                if not model.faulty[c]:
                    continue
                for c2 in sorted(external_successors(model, (c,), action, obs)):
                    product_adj[(sid, c)].append(((action, obs), (dst, c2)))
    return nodes, product_adj


def check_diagnosable(est):
    """No reachable loop of indeterminate estimator states sustainable by
    a faulty run.

    If every cycle among indeterminate states is already absent the
    answer is immediate; otherwise the fault product decides whether any
    loop can actually be kept alive after a fault.  When a sustainable
    loop exists, the witness lasso gives the shortest observation prefix
    from an initial state into the loop and the shortest cycle of
    indeterminate states a faulty run can then repeat forever.
    """
    indet, adj = _indeterminate_subgraph(est)
    comps = strongly_connected_components(sorted(indet), lambda s: (d for _, d in adj[s]))
    if not any(is_cyclic_component(c, lambda s: (d for _, d in adj[s])) for c in comps):
        return DiagnosabilityVerdict(True, None)

    if est.model is None:
        raise ValueError(
            "deciding cyclic indeterminate loops needs the estimator's backing model"
        )
    nodes, product_adj = _fault_product(est)
    pcomps = strongly_connected_components(
        nodes, lambda v: (d for _, d in product_adj[v])
    )
    cyclic_nodes = set()
    for comp in pcomps:
        if is_cyclic_component(comp, lambda v: (d for _, d in product_adj[v])):
            cyclic_nodes.update(comp)
    if not cyclic_nodes:
        return DiagnosabilityVerdict(True, None)

    full = _full_adjacency(est)
    starts = [sid for _, sid in sorted(est.initials.items())]
    parents = bfs_parents(starts, lambda s: full[s])
    candidates = sorted({sid for sid, _ in cyclic_nodes} & set(parents))
    if not candidates:
        return DiagnosabilityVerdict(True, None)
    entry_sid = min(
        candidates,
        key=lambda sid: (len(path_from_parents(parents, sid)[0]), sid),
    )
    prefix_nodes, prefix_labels = path_from_parents(parents, entry_sid)
    entry = min(node for node in cyclic_nodes if node[0] == entry_sid)
    comp = next(c for c in pcomps if entry in c)
    cycle_nodes, cycle_labels = shortest_cycle(
        entry, lambda v: product_adj[v], set(comp)
    )

    obs_of = _state_observables(est)
    prefix = UTrace(obs_of[prefix_nodes[0]])
    for action, obs in prefix_labels:
        prefix = prefix.extend(action, obs)
    cycle = UTrace(obs_of[entry_sid])
    for action, obs in cycle_labels:
        cycle = cycle.extend(action, obs)
    return DiagnosabilityVerdict(False, Lasso(prefix, cycle))


def _longest_chain(nodes, adj):
    """Longest path (in nodes) of an acyclic graph, by memoized descent."""
    longest = {}

    def chain(v):
        if v in longest:
            return longest[v]
        longest[v] = 1  # placeholder; callers guarantee acyclicity
        best = 1 + max((chain(d) for _, d in adj[v]), default=0)
        longest[v] = best
        return best

    return max((chain(v) for v in nodes), default=0)


def detection_delay_bound(est):
    """Upper bound on external events needed to announce a fault.

    After a fault the estimate tracks the true (faulty) class, so the
    ambiguous stretch is a path in the fault product; one more than its
    longest chain bounds the wait for a yes.  Only defined for
    diagnosable estimators.  Without a backing model (hand-built graphs)
    the indeterminate subgraph itself is used; any product path projects
    into it, so that is still a sound bound.
    """
    if not check_diagnosable(est).diagnosable:
        raise ValueError("detection delay is undefined for non-diagnosable systems")
    if est.model is not None:
        nodes, adj = _fault_product(est)
        return _longest_chain(nodes, adj) + 1
    indet, adj = _indeterminate_subgraph(est)
    return _longest_chain(sorted(indet), adj) + 1


def replay_lasso(est, lasso):
    """Validate a witness lasso against the estimator it came from.

    The prefix must run from the matching initial state, the cycle must
    visit only indeterminate states, and it must return to its starting
    estimator state.
    """
    sid = est.initials.get(lasso.prefix.head)
    if sid is None:
        return False
    for action, obs in lasso.prefix.steps:
        sid = est.transitions.get((sid, action, obs))
        if sid is None:
            return False
    anchor = sid
    if not lasso.cycle.steps:
        return False
    for action, obs in lasso.cycle.steps:
        if est.states[sid].classification is not Classification.INDETERMINATE:
            return False
        sid = est.transitions.get((sid, action, obs))
        if sid is None:
            return False
        if est.states[sid].classification is not Classification.INDETERMINATE:
            return False
    return sid == anchor
