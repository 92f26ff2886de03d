"""Independent brute-force oracle for diagnosability and diagnoser testing.

Everything here deliberately avoids the subset construction: the twin
plant pairs two copies of the quotient synchronized on observations and
looks for a lasso along which exactly one copy has faulted; bounded trace
enumeration walks the raw path relation; run simulation drives a
diagnoser with every environment behavior up to a horizon.  Agreement of
these with the estimator-based decision procedures is the core evidence
the implementation is right.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass

from .diagnosability import check_diagnosable, check_progressive
from .diagnoser import ObsEvent, step
from .errors import CapExceeded
from .estimator import build_estimator
from .graphs import (
    bfs_parents,
    is_cyclic_component,
    path_from_parents,
    shortest_cycle,
    strongly_connected_components,
)
from .quotient import (
    ActionLabel,
    ClassInfo,
    Kind,
    Lasso,
    QuotientModel,
    UTrace,
    dumps_model,
    unobservable_closure,
    validate_model,
)


@dataclass(frozen=True)
class TwinState:
    """A pair of synchronized runs and whether each has faulted.

    With valid models the flags coincide with the classes' fault status
    (fault edges are the only way in and nothing leads back out), but
    they spell out what the state means for a run pair.
    """

    left: int
    right: int
    left_faulty: bool
    right_faulty: bool


@dataclass
class TwinGraph:
    states: list[TwinState]
    initials: list[int]
    edges: dict[int, list[tuple[str, int, int]]]  # sid -> [(action, obs, dst sid)]


def _singleton_closures(model):
    return [unobservable_closure(model, (c,)) for c in range(len(model.classes))]


def _external_moves(model, closures):
    """Per class and action: the (target, observable) pairs one observed step allows."""
    moves = {}
    for c in range(len(model.classes)):
        for action in model.external_actions:
            out = set()
            for mid in closures[c]:
                for dst in model.external_edges_from(mid, action):
                    out.add((dst, model.obs[dst]))
            moves[(c, action.name)] = sorted(out)
    return moves


def twin_product(model):
    """Product of two copies of the quotient synchronized on observations.

    Both copies silently evolve, then take the same external action and
    land in the same observable.  Initial states pair initial classes
    that share an observable (including every diagonal pair).
    """
    closures = _singleton_closures(model)
    moves = _external_moves(model, closures)

    states = []
    index = {}
    edges = {}

    def intern(left, right):
        key = (left, right)
        sid = index.get(key)
        if sid is None:
            sid = len(states)
            index[key] = sid
            states.append(
                TwinState(left, right, model.faulty[left], model.faulty[right])
            )
            edges[sid] = []
        return sid

    initials = []
    for left in model.initial_classes:
        for right in model.initial_classes:
            if model.obs[left] == model.obs[right]:
                initials.append(intern(left, right))

    queue = deque(range(len(states)))
    while queue:
        sid = queue.popleft()
        tw = states[sid]
        for action in model.external_actions:
            lefts = moves[(tw.left, action.name)]
            rights = moves[(tw.right, action.name)]
            for l_dst, l_obs in lefts:
                for r_dst, r_obs in rights:
                    if l_obs != r_obs:
                        continue
                    before = len(states)
                    did = intern(l_dst, r_dst)
                    edges[sid].append((action.name, l_obs, did))
                    if did == before:
                        queue.append(did)
    return TwinGraph(states, initials, edges)


@dataclass(frozen=True)
class CounterExample:
    """Two runs sharing an observation lasso, exactly one of them faulty.

    Runs are given as the classes sampled right after each external
    action (prefix) and around the repeatable cycle; cycle paths include
    both endpoints, which coincide.
    """

    shared: Lasso
    left_prefix: tuple[int, ...]
    left_cycle: tuple[int, ...]
    right_prefix: tuple[int, ...]
    right_cycle: tuple[int, ...]


@dataclass(frozen=True)
class OracleVerdict:
    diagnosable: bool
    counterexample: CounterExample | None


def brute_force_diagnosable(model):
    """Twin-plant decision: diagnosable iff no reachable lasso keeps one
    copy faulty and the other clean.

    Sound and complete for valid progressive models: maximal executions
    are then infinite with infinitely many external actions, and every
    infinite synchronized pair eventually loops in the finite twin graph.
    """
    twin = twin_product(model)
    bad = {
        sid
        for sid, tw in enumerate(twin.states)
        if tw.left_faulty and not tw.right_faulty
    }

    def bad_succ(sid):
        for action, obs, dst in twin.edges[sid]:
            if dst in bad:
                yield (action, obs), dst

    comps = strongly_connected_components(
        sorted(bad), lambda s: (d for _, d in bad_succ(s))
    )
    cyclic = set()
    for comp in comps:
        if is_cyclic_component(comp, lambda s: (d for _, d in bad_succ(s))):
            cyclic.update(comp)

    def full_succ(sid):
        for action, obs, dst in twin.edges[sid]:
            yield (action, obs), dst

    parents = bfs_parents(twin.initials, full_succ)
    reachable_cyclic = [sid for sid in parents if sid in cyclic]
    if not reachable_cyclic:
        return OracleVerdict(True, None)

    entry = min(
        reachable_cyclic,
        key=lambda sid: (len(path_from_parents(parents, sid)[0]), sid),
    )
    prefix_nodes, prefix_labels = path_from_parents(parents, entry)
    comp = next(c for c in comps if entry in c)
    cycle_nodes, cycle_labels = shortest_cycle(entry, bad_succ, set(comp))

    def trace_of(start_obs, labels):
        trace = UTrace(start_obs)
        for action, obs in labels:
            trace = trace.extend(action, obs)
        return trace

    first = twin.states[prefix_nodes[0]]
    prefix = trace_of(model.obs[first.left], prefix_labels)
    cycle = trace_of(model.obs[twin.states[entry].left], cycle_labels)
    return OracleVerdict(
        False,
        CounterExample(
            Lasso(prefix, cycle),
            tuple(twin.states[s].left for s in prefix_nodes),
            tuple(twin.states[s].left for s in cycle_nodes),
            tuple(twin.states[s].right for s in prefix_nodes),
            tuple(twin.states[s].right for s in cycle_nodes),
        ),
    )


def _replay_run(model, classes, trace):
    """Does this class path realize the trace, one class per observation?"""
    if len(classes) != len(trace.steps) + 1:
        return False
    if model.obs[classes[0]] != trace.head:
        return False
    for (action, obs), src, dst in zip(trace.steps, classes, classes[1:]):
        if model.obs[dst] != obs:
            return False
        label = model.action(action)
        ok = any(
            dst in model.external_edges_from(mid, label)
            for mid in unobservable_closure(model, (src,))
        )
        if not ok:
            return False
    return True


def verify_counterexample(model, cx):
    """Replay both runs, check the shared trace and the fault asymmetry."""
    left = cx.left_prefix + cx.left_cycle[1:]
    right = cx.right_prefix + cx.right_cycle[1:]
    full = UTrace(cx.shared.prefix.head, cx.shared.prefix.steps + cx.shared.cycle.steps)
    if cx.shared.cycle.head != (
        cx.shared.prefix.steps[-1][1] if cx.shared.prefix.steps else cx.shared.prefix.head
    ):
        return False
    if not _replay_run(model, left, full) or not _replay_run(model, right, full):
        return False
    if cx.left_cycle[0] != cx.left_cycle[-1] or cx.right_cycle[0] != cx.right_cycle[-1]:
        return False
    left_faulty = any(model.faulty[c] for c in left)
    right_faulty = any(model.faulty[c] for c in right)
    return left_faulty != right_faulty


def enumerate_utraces(model, k, max_traces=200_000):
    """All untimed observation traces with at most ``k`` external actions,
    each mapped to the classes reachable right after its last action.

    Ground truth for the estimator: computed by breadth-first search over
    (class, trace) pairs of the raw path relation, never by determinizing.
    """
    closures = _singleton_closures(model)
    moves = _external_moves(model, closures)

    result = {}
    frontier = set()
    for c in model.initial_classes:
        frontier.add((c, UTrace(model.obs[c])))
    for c, trace in frontier:
        result.setdefault(trace, set()).add(c)

    for _ in range(k):
        nxt = set()
        for c, trace in frontier:
            for action in model.external_actions:
                for dst, obs in moves[(c, action.name)]:
                    nxt.add((dst, trace.extend(action.name, obs)))
        for c, trace in nxt:
            result.setdefault(trace, set()).add(c)
            if len(result) > max_traces:
                raise CapExceeded("enumerated traces", len(result), max_traces)
        frontier = nxt

    return {trace: frozenset(classes) for trace, classes in result.items()}


@dataclass(frozen=True)
class LosingRun:
    """One environment behavior the diagnoser handles wrongly."""

    events: tuple[ObsEvent, ...]
    verdicts: tuple
    reason: str  # "false-alarm" | "missed-fault"


@dataclass
class SimulationReport:
    runs: int
    losing: list[LosingRun]
    depth: int

    @property
    def ok(self):
        return not self.losing


def simulate_runs(model, diag, k, yes_deadline=None, max_losing=10):
    """Drive the diagnoser with every environment behavior up to ``k``
    external events and score it against the two winning conditions.

    The environment picks the run and the fault timing (it may fault
    during any silent stretch).  A behavior loses if the diagnoser ever
    answers yes while the run is still fault-free, or if a faulted run
    goes ``yes_deadline`` external events (default: the whole horizon)
    without a yes.  Behaviors are counted at observation-boundary
    granularity; exhaustiveness comes from covering every reachable
    combination of diagnoser state, current class, and fault age rather
    than expanding each interleaving separately.  Reported losing runs
    are reconstructed and re-fed through the diagnoser event by event.
    """
    deadline = k if yes_deadline is None else yes_deadline
    closures = _singleton_closures(model)
    moves = _external_moves(model, closures)

    losing_nodes = []
    seen_losing = set()

    def is_losing(node):
        sid, cls, age, said_yes = node
        answer_yes = diag.output[sid] == "yes"
        if answer_yes and not model.faulty[cls]:
            return "false-alarm"
        if age >= deadline and not (said_yes or answer_yes):
            return "missed-fault"
        return None

    # Layered exhaustive search with parent links for run reconstruction.
    parents = {}
    counts = {}
    layer = {}
    for c in model.initial_classes:
        sid = diag.initials.get(model.obs[c])
        if sid is None:
            raise ValueError(f"diagnoser has no initial state for observable o{model.obs[c]}")
        node = (sid, c, 0, diag.output[sid] == "yes")
        key = (0, node)
        counts[key] = counts.get(key, 0) + 1
        if key not in parents:
            parents[key] = (None, None)
            layer[node] = None
    for node in sorted(layer):
        reason = is_losing(node)
        if reason and node not in seen_losing:
            seen_losing.add(node)
            losing_nodes.append(((0, node), reason))

    total_runs = 0
    for depth in range(k):
        nxt = {}
        for node in sorted(layer):
            sid, cls, age, said_yes = node
            if said_yes:
                # A yes is absorbing for the scoring: nothing can be lost later,
                # so count the remaining extensions as settled runs.
                total_runs += counts[(depth, node)]
                continue
            steps = set()
            for action in model.external_actions:
                for dst, _ in moves[(cls, action.name)]:
                    steps.add((action.name, dst))
            if not steps:
                total_runs += counts[(depth, node)]  # run dead-ends here
                continue
            for action, dst in sorted(steps):
                obs = model.obs[dst]
                tid = diag.transitions.get((sid, action, obs))
                if tid is None:
                    raise ValueError(
                        f"diagnoser is incomplete: no move for ({action}, o{obs})"
                    )
                nage = age + 1 if age > 0 else (1 if model.faulty[dst] else 0)
                nage = min(nage, deadline)
                nsaid = said_yes or diag.output[tid] == "yes"
                nnode = (tid, dst, nage, nsaid)
                nkey = (depth + 1, nnode)
                counts[nkey] = counts.get(nkey, 0) + counts[(depth, node)]
                if nkey not in parents:
                    parents[nkey] = ((depth, node), (action, obs))
                    nxt[nnode] = None
                    reason = is_losing(nnode)
                    if reason and nnode not in seen_losing:
                        seen_losing.add(nnode)
                        losing_nodes.append((nkey, reason))
        layer = nxt
    total_runs += sum(counts[(k, node)] for node in layer)

    losing = []
    for key, reason in losing_nodes[:max_losing]:
        events = _reconstruct_events(model, parents, key)
        verdicts = []
        current = None
        for ev in events:
            current, verdict = step(diag, current, ev)
            verdicts.append(verdict)
        losing.append(LosingRun(tuple(events), tuple(verdicts), reason))
    return SimulationReport(total_runs, losing, k)


def _reconstruct_events(model, parents, key):
    chain = []
    while True:
        parent, label = parents[key]
        if parent is None:
            break
        chain.append(label)
        key = parent
    chain.reverse()
    _, (_, cls, _, _) = key  # key is now an initial-layer node
    return [ObsEvent.init(model.obs[cls])] + [
        ObsEvent.step(action, obs) for action, obs in chain
    ]


# ---------------------------------------------------------------------------
# Randomized model generation


def random_model(
    seed,
    max_classes=6,
    max_external=2,
    max_observables=2,
    edge_density=0.35,
    max_attempts=500,
):
    """A valid, progressive quotient model drawn at random.

    Candidates are generated axiom-true by construction where cheap
    (fault edges, flag-preserving edges) and rejection-sampled against
    full validation and the progressiveness check otherwise.
    """
    rng = random.Random(seed)
    for _ in range(max_attempts):
        model = _draw_model(rng, max_classes, max_external, max_observables, edge_density)
        if validate_model(model).ok and check_progressive(model).progressive:
            return model
    raise RuntimeError(f"no valid progressive model after {max_attempts} attempts")


def _draw_model(rng, max_classes, max_external, max_observables, edge_density):
    n = rng.randint(2, max_classes)
    n_faulty = rng.randint(1, n - 1)
    nonfaulty = list(range(n - n_faulty))
    faulty = list(range(n - n_faulty, n))
    n_obs = rng.randint(1, max_observables)
    n_ext = rng.randint(1, max_external)

    classes = []
    initials = [c for c in nonfaulty if rng.random() < 0.5]
    if not initials:
        initials = [rng.choice(nonfaulty)]
    for c in range(n):
        classes.append(
            ClassInfo(c, c in set(faulty), c in set(initials), rng.randrange(n_obs))
        )

    actions = [ActionLabel(f"e{i}", Kind.EXTERNAL) for i in range(n_ext)]
    actions.append(ActionLabel("f", Kind.FAULT))
    has_internal = rng.random() < 0.3
    if has_internal:
        actions.append(ActionLabel("h", Kind.INTERNAL))

    edges = []
    for c in nonfaulty:
        edges.append((c, "f", rng.choice(faulty)))

    def same_flag(c):
        return nonfaulty if c in set(nonfaulty) else faulty

    for c in range(n):
        placed = False
        for a in actions[:n_ext]:
            for dst in same_flag(c):
                if rng.random() < edge_density:
                    edges.append((c, a.name, dst))
                    placed = True
        if not placed:
            edges.append((c, actions[rng.randrange(n_ext)].name, rng.choice(same_flag(c))))

    if has_internal:
        for c in range(n):
            for dst in same_flag(c):
                if rng.random() < edge_density * 0.4:
                    edges.append((c, "h", dst))

    time = []
    for c in range(n):
        for dst in same_flag(c):
            if dst != c and rng.random() < 0.15:
                time.append((c, dst))

    return QuotientModel(classes, actions, edges, time)


def random_models(count, seed):
    """A reproducible stream of valid progressive models."""
    rng = random.Random(seed)
    for _ in range(count):
        yield random_model(rng.randrange(2**32))


@dataclass
class FuzzReport:
    models: int
    agreements: int
    first_disagreement: dict | None

    @property
    def ok(self):
        return self.agreements == self.models


def run_fuzz(models, seed):
    """Compare the estimator-based decision with the twin-plant oracle."""
    agreements = 0
    first = None
    for i, model in enumerate(random_models(models, seed)):
        via_estimator = check_diagnosable(build_estimator(model)).diagnosable
        via_twin = brute_force_diagnosable(model).diagnosable
        if via_estimator == via_twin:
            agreements += 1
        elif first is None:
            first = {
                "index": i,
                "estimator": via_estimator,
                "twin": via_twin,
                "model": dumps_model(model),
            }
    return FuzzReport(models, agreements, first)
