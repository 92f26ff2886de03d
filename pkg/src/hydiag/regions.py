"""Timed automata with faults and their region quotients.

A timed automaton here has integer-bounded, non-diagonal clock
constraints, a partition of clocks into internal and external
(observable) ones, and an observation: a finite partition of the
external-clock valuation space given by boolean predicate cells.

Region equivalence is a time-abstract bisimulation with finitely many
classes.  To make it respect the observation without running a generic
partition refinement, every clock ceiling also includes the constants of
the observation predicates: plain region equivalence is then already
fine enough, because each region lies entirely inside one cell.

The construction is deliberately classical: per-clock integer parts up
to the ceiling plus the ordering of fractional parts.  Regions whose
clocks all sit above their ceilings are time-divergent, and the quotient
marks them so (as explicit time self-loops).
"""

from __future__ import annotations

import itertools
import json
import math
import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .errors import CapExceeded, ModelFormatError, PartitionError, TAValidationError
from .quotient import ActionLabel, ClassInfo, Kind, QuotientModel, validate_model

DEFAULT_MAX_CLASSES = 100_000


# ---------------------------------------------------------------------------
# Clock constraints and observation predicates

_OPS = {
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    "==": lambda a, b: a == b,
    ">=": lambda a, b: a >= b,
    ">": lambda a, b: a > b,
}

_CONSTRAINT_RE = re.compile(
    r"^\s*([A-Za-z_]\w*)\s*(<=|>=|==|<|>)\s*(-?\d+(?:\.\d+)?)\s*$"
)


@dataclass(frozen=True)
class ClockConstraint:
    clock: str
    op: str
    bound: int

    def holds(self, valuation):
        return _OPS[self.op](valuation[self.clock], self.bound)

    def pretty(self):
        return f"{self.clock}{self.op}{self.bound}"


def parse_constraint(text):
    m = _CONSTRAINT_RE.match(text)
    if m is None:
        raise ModelFormatError(f"cannot parse clock constraint {text!r}")
    clock, op, bound = m.group(1), m.group(2), m.group(3)
    if "." in bound:
        raise ModelFormatError(f"non-integral constant in constraint {text!r}")
    value = int(bound)
    if value < 0:
        raise ModelFormatError(f"negative constant in constraint {text!r}")
    return ClockConstraint(clock, op, value)


def eval_constraints(constraints, valuation):
    return all(c.holds(valuation) for c in constraints)


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<ident>[A-Za-z_]\w*)|(?P<num>-?\d+(?:\.\d+)?)"
    r"|(?P<op><=|>=|==|<|>)|(?P<punct>[!&|()]))"
)


class _PredParser:
    """Recursive descent for boolean clock predicates.

    Grammar: or-expr over and-expr over (!factor | (expr) | atom | true),
    atoms being ``clock op int``.  ``true`` is the empty conjunction and
    exists for observations over zero external clocks.
    """

    def __init__(self, text):
        self.text = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None or m.end() == pos:
                if text[pos:].strip() == "":
                    break
                raise ModelFormatError(
                    f"pred parse error at column {pos + 1} in {text!r}"
                )
            self.tokens.append((m.lastgroup, m.group(m.lastgroup), pos))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def fail(self, expected):
        kind, value, pos = self.peek()
        raise ModelFormatError(
            f"pred parse error at column {pos + 1} in {self.text!r}: expected {expected}"
        )

    def parse(self):
        node = self.expr()
        if self.i != len(self.tokens):
            self.fail("end of predicate")
        return node

    def expr(self):
        node = self.term()
        while self.peek()[:2] == ("punct", "|"):
            self.take()
            node = ("or", node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[:2] == ("punct", "&"):
            self.take()
            node = ("and", node, self.factor())
        return node

    def factor(self):
        kind, value, _ = self.peek()
        if (kind, value) == ("punct", "!"):
            self.take()
            return ("not", self.factor())
        if (kind, value) == ("punct", "("):
            self.take()
            node = self.expr()
            if self.peek()[:2] != ("punct", ")"):
                self.fail("')'")
            self.take()
            return node
        if kind == "ident":
            ident = self.take()[1]
            if ident == "true":
                return ("true",)
            op_kind, op, _ = self.take()
            if op_kind != "op":
                self.fail("comparison operator")
            num_kind, num, _ = self.take()
            if num_kind != "num":
                self.fail("integer constant")
            if "." in num:
                raise ModelFormatError(
                    f"non-integral constant in predicate {self.text!r}"
                )
            bound = int(num)
            if bound < 0:
                raise ModelFormatError(f"negative constant in predicate {self.text!r}")
            return ("atom", ident, op, bound)
        self.fail("clock atom, '!', or '('")


def parse_pred(text):
    return _PredParser(text).parse()


def eval_pred(node, valuation):
    tag = node[0]
    if tag == "true":
        return True
    if tag == "atom":
        return _OPS[node[2]](valuation[node[1]], node[3])
    if tag == "not":
        return not eval_pred(node[1], valuation)
    if tag == "and":
        return eval_pred(node[1], valuation) and eval_pred(node[2], valuation)
    if tag == "or":
        return eval_pred(node[1], valuation) or eval_pred(node[2], valuation)
    raise ValueError(f"bad predicate node {node!r}")


def pred_atoms(node):
    tag = node[0]
    if tag == "true":
        return
    if tag == "atom":
        yield node[1], node[3]
    elif tag == "not":
        yield from pred_atoms(node[1])
    else:
        yield from pred_atoms(node[1])
        yield from pred_atoms(node[2])


@dataclass(frozen=True)
class ObservableSpec:
    id: int
    pred: tuple
    source: str


@dataclass(frozen=True)
class Location:
    name: str
    faulty: bool
    initial: bool
    invariant: tuple[ClockConstraint, ...]


@dataclass(frozen=True)
class TAEdge:
    src: str
    dst: str
    action: str
    kind: Kind
    guard: tuple[ClockConstraint, ...]
    resets: frozenset[str]


# ---------------------------------------------------------------------------
# Regions

@dataclass(frozen=True)
class Region:
    """Canonical clock region.

    ``ints[i]`` is the integer part of clock i, or ceiling+1 when the
    clock has passed its ceiling.  ``zero`` lists the (non-above) clocks
    at an exact integer; ``groups`` orders the remaining clocks by
    strictly increasing fractional part.
    """

    ints: tuple[int, ...]
    zero: tuple[int, ...]
    groups: tuple[tuple[int, ...], ...]

    def pretty(self, clocks):
        parts = []
        for i, name in enumerate(clocks):
            if i in self.zero:
                parts.append(f"{name}={self.ints[i]}")
            elif any(i in g for g in self.groups):
                parts.append(f"{self.ints[i]}<{name}<{self.ints[i] + 1}")
            else:
                parts.append(f"{name}>{self.ints[i] - 1}")
        return ", ".join(parts)


def initial_region(num_clocks):
    return Region((0,) * num_clocks, tuple(range(num_clocks)), ())


def region_of(values, ceilings):
    """The region containing a concrete (non-negative rational) valuation."""
    ints = []
    zero = []
    fracs = {}
    for i, v in enumerate(values):
        if v < 0:
            raise ValueError("clock values must be non-negative")
        if v > ceilings[i]:
            ints.append(ceilings[i] + 1)
            continue
        whole = int(v)
        ints.append(whole)
        frac = v - whole
        if frac == 0:
            zero.append(i)
        else:
            fracs.setdefault(frac, []).append(i)
    groups = tuple(tuple(sorted(g)) for _, g in sorted(fracs.items()))
    return Region(tuple(ints), tuple(sorted(zero)), groups)


def sample_region(region, ceilings, rng=None):
    """A concrete valuation inside the region (exact rationals).

    With ``rng`` the fractional parts and the above-ceiling excesses are
    randomized while preserving the region; otherwise a fixed canonical
    sample is returned.
    """
    g = len(region.groups)
    if rng is None:
        fracs = [Fraction(j, g + 1) for j in range(1, g + 1)]
    else:
        denom = 997
        while True:
            draws = sorted(rng.randint(1, denom - 1) for _ in range(g))
            if len(set(draws)) == g:
                break
        fracs = [Fraction(d, denom) for d in draws]
    group_of = {}
    for j, grp in enumerate(region.groups):
        for i in grp:
            group_of[i] = j
    values = []
    for i, whole in enumerate(region.ints):
        if whole > ceilings[i]:
            excess = Fraction(1, 2) if rng is None else Fraction(rng.randint(1, 300), 100)
            values.append(Fraction(ceilings[i]) + excess)
        elif i in group_of:
            values.append(Fraction(whole) + fracs[group_of[i]])
        else:
            values.append(Fraction(whole))
    return values


def time_successor(region, ceilings):
    """The next region entered as time flows, or None when the region is
    time-divergent (all clocks above their ceilings)."""
    if not region.zero and not region.groups:
        return None
    if region.zero:
        ints = list(region.ints)
        stay = []
        for i in region.zero:
            if region.ints[i] == ceilings[i]:
                ints[i] = ceilings[i] + 1
            else:
                stay.append(i)
        groups = ((tuple(stay),) + region.groups) if stay else region.groups
        return Region(tuple(ints), (), groups)
    ints = list(region.ints)
    promoted = []
    for i in region.groups[-1]:
        nxt = region.ints[i] + 1
        if nxt > ceilings[i]:
            ints[i] = ceilings[i] + 1
        else:
            ints[i] = nxt
            promoted.append(i)
    return Region(tuple(ints), tuple(sorted(promoted)), region.groups[:-1])


def reset_region(region, clock_indices, ceilings):
    reset = set(clock_indices)
    ints = list(region.ints)
    zero = set(region.zero)
    groups = []
    for grp in region.groups:
        kept = tuple(i for i in grp if i not in reset)
        if kept:
            groups.append(kept)
    for i in reset:
        ints[i] = 0
        zero.add(i)
    return Region(tuple(ints), tuple(sorted(zero)), tuple(groups))


def _ordered_partitions(items):
    if not items:
        yield ()
        return
    n = len(items)
    for assignment in itertools.product(range(n), repeat=n):
        blocks_used = max(assignment) + 1
        if set(assignment) != set(range(blocks_used)):
            continue
        blocks = [[] for _ in range(blocks_used)]
        for item, a in zip(items, assignment):
            blocks[a].append(item)
        yield tuple(tuple(sorted(b)) for b in blocks)


def all_regions(ceilings):
    """Exhaustive enumeration of the regions for the given ceilings."""
    per_clock = []
    for c in ceilings:
        options = [("above", 0)]
        options.extend(("zero", v) for v in range(c + 1))
        options.extend(("frac", v) for v in range(c))
        per_clock.append(options)
    for combo in itertools.product(*per_clock):
        ints = []
        zero = []
        fractional = []
        for i, (kind, v) in enumerate(combo):
            if kind == "above":
                ints.append(ceilings[i] + 1)
            elif kind == "zero":
                ints.append(v)
                zero.append(i)
            else:
                ints.append(v)
                fractional.append(i)
        for groups in _ordered_partitions(fractional):
            yield Region(tuple(ints), tuple(zero), groups)


# ---------------------------------------------------------------------------
# The automaton

class TimedAutomatonWithFaults:
    """Validated timed automaton with fault edges and an observation.

    Construction enforces the structural fault axioms syntactically:
    initial locations are non-faulty, fault edges go non-faulty to
    faulty, other edges preserve faultiness, every non-faulty location
    has a fault edge, and the observation cells partition the external
    valuation space (checked exhaustively at region granularity, with a
    witness valuation on failure).  Whether every *state* of a non-faulty
    location can actually fault is settled later on the region quotient,
    where the check is exact.
    """

    def __init__(self, locations, internal_clocks, external_clocks, edges, observation):
        self.locations = tuple(locations)
        if not self.locations:
            raise ModelFormatError("automaton needs at least one location")
        self._loc_by_name = {}
        for loc in self.locations:
            if loc.name in self._loc_by_name:
                raise ModelFormatError(f"duplicate location {loc.name!r}")
            self._loc_by_name[loc.name] = loc

        internal = tuple(internal_clocks)
        external = tuple(external_clocks)
        if len(set(internal) | set(external)) != len(internal) + len(external):
            raise ModelFormatError("clock names must be unique across both groups")
        self.clocks = external + internal
        self.external_clocks = external
        self.internal_clocks = internal
        self._clock_index = {name: i for i, name in enumerate(self.clocks)}

        self.edges = tuple(edges)
        kinds = {}
        for e in self.edges:
            for loc in (e.src, e.dst):
                if loc not in self._loc_by_name:
                    raise ModelFormatError(f"edge references unknown location {loc!r}")
            if kinds.setdefault(e.action, e.kind) is not e.kind:
                raise ModelFormatError(f"action {e.action!r} used with two kinds")
            for c in e.guard:
                if c.clock not in self._clock_index:
                    raise ModelFormatError(f"guard uses unknown clock {c.clock!r}")
            for r in e.resets:
                if r not in self._clock_index:
                    raise ModelFormatError(f"reset uses unknown clock {r!r}")
        for loc in self.locations:
            for c in loc.invariant:
                if c.clock not in self._clock_index:
                    raise ModelFormatError(f"invariant uses unknown clock {c.clock!r}")
        fault_names = sorted(n for n, k in kinds.items() if k is Kind.FAULT)
        if len(fault_names) > 1:
            raise TAValidationError(
                "FaultAction", f"more than one fault action: {fault_names}"
            )
        self.actions = tuple(
            ActionLabel(name, kind)
            for name, kind in sorted(kinds.items(), key=lambda kv: _first_use(self.edges, kv[0]))
        )

        self.observation = tuple(observation)
        ids = sorted(spec.id for spec in self.observation)
        if ids != list(range(len(self.observation))):
            raise ModelFormatError("observable ids must be dense 0..m-1")
        for spec in self.observation:
            for clock, _ in pred_atoms(spec.pred):
                if clock not in external:
                    raise ModelFormatError(
                        f"observable {spec.id} uses non-external clock {clock!r}"
                    )

        self._validate_axioms()
        self.ceilings = self._compute_ceilings()
        self._validate_partition()

    def location(self, name):
        return self._loc_by_name[name]

    def _validate_axioms(self):
        any_initial = False
        for loc in self.locations:
            if loc.initial:
                any_initial = True
                if loc.faulty:
                    raise TAValidationError(
                        "InitNonFaulty", f"initial location {loc.name!r} is faulty"
                    )
        if not any_initial:
            raise TAValidationError("Nonempty", "no initial location")

        fault_sources = set()
        for e in self.edges:
            src_f = self._loc_by_name[e.src].faulty
            dst_f = self._loc_by_name[e.dst].faulty
            if e.kind is Kind.FAULT:
                fault_sources.add(e.src)
                if src_f or not dst_f:
                    raise TAValidationError(
                        "D2",
                        f"fault edge {e.src!r} -> {e.dst!r} must go non-faulty to faulty",
                    )
            elif src_f != dst_f:
                raise TAValidationError(
                    "D3",
                    f"edge {e.src!r} -{e.action}-> {e.dst!r} changes the fault status",
                )
        for loc in self.locations:
            if not loc.faulty and loc.name not in fault_sources:
                raise TAValidationError(
                    "D1", f"non-faulty location {loc.name!r} has no fault edge"
                )

    def _compute_ceilings(self):
        ceilings = {name: 0 for name in self.clocks}

        def bump(clock, bound):
            ceilings[clock] = max(ceilings[clock], bound)

        for loc in self.locations:
            for c in loc.invariant:
                bump(c.clock, c.bound)
        for e in self.edges:
            for c in e.guard:
                bump(c.clock, c.bound)
        for spec in self.observation:
            for clock, bound in pred_atoms(spec.pred):
                bump(clock, bound)
        return tuple(ceilings[name] for name in self.clocks)

    def _validate_partition(self):
        ext_index = {name: i for i, name in enumerate(self.external_clocks)}
        ext_ceilings = tuple(self.ceilings[self._clock_index[n]] for n in self.external_clocks)
        for region in all_regions(ext_ceilings):
            values = sample_region(region, ext_ceilings)
            valuation = {name: values[ext_index[name]] for name in self.external_clocks}
            hits = [spec.id for spec in self.observation if eval_pred(spec.pred, valuation)]
            if len(hits) != 1:
                witness = {name: str(valuation[name]) for name in self.external_clocks}
                what = "no cell covers" if not hits else f"cells {hits} overlap at"
                raise PartitionError(
                    f"observation is not a partition: {what} {witness or 'the empty valuation'}",
                    witness,
                )

    # -- region-level helpers -------------------------------------------------

    def sample_valuation(self, region, rng=None):
        values = sample_region(region, self.ceilings, rng)
        return {name: values[i] for i, name in enumerate(self.clocks)}

    def region_satisfies(self, region, constraints):
        if not constraints:
            return True
        return eval_constraints(constraints, self.sample_valuation(region))

    def observable_of_region(self, region):
        valuation = self.sample_valuation(region)
        hits = [s.id for s in self.observation if eval_pred(s.pred, valuation)]
        if len(hits) != 1:
            raise RuntimeError(f"region not covered by exactly one observable: {hits}")
        return hits[0]

    def observable_of_valuation(self, valuation):
        hits = [s.id for s in self.observation if eval_pred(s.pred, valuation)]
        return hits[0] if len(hits) == 1 else None

    def reset_indices(self, resets):
        return tuple(sorted(self._clock_index[name] for name in resets))


def _first_use(edges, action):
    for i, e in enumerate(edges):
        if e.action == action:
            return i
    return len(edges)


# ---------------------------------------------------------------------------
# Region quotient construction

@dataclass
class RegionQuotient:
    model: QuotientModel
    class_regions: list[tuple[str, Region]]
    ceilings: tuple[int, ...]


def build_region_quotient(ta, max_classes=DEFAULT_MAX_CLASSES):
    """Explore the reachable (location, region) graph of ``ta``.

    Discrete successors fire automaton edges whose guard holds in the
    region and whose reset lands inside the target invariant; time
    successors follow the immediate region successor while the location
    invariant keeps holding.  Deterministic class numbering (BFS order)
    is part of the contract.
    """
    ceilings = ta.ceilings
    r0 = initial_region(len(ta.clocks))

    metas = []  # (location name, region)
    index = {}
    edges_out = []
    time_out = []

    def intern(loc_name, region):
        key = (loc_name, region)
        cid = index.get(key)
        if cid is None:
            if len(metas) >= max_classes:
                raise CapExceeded("region classes", len(metas) + 1, max_classes)
            cid = len(metas)
            index[key] = cid
            metas.append(key)
        return cid

    queue = deque()
    for loc in ta.locations:
        if loc.initial and ta.region_satisfies(r0, loc.invariant):
            queue.append(intern(loc.name, r0))

    label_of = {a.name: a for a in ta.actions}
    while queue:
        cid = queue.popleft()
        loc_name, region = metas[cid]
        loc = ta.location(loc_name)
        for e in ta.edges:
            if e.src != loc_name:
                continue
            if not ta.region_satisfies(region, e.guard):
                continue
            target = reset_region(region, ta.reset_indices(e.resets), ceilings)
            if not ta.region_satisfies(target, ta.location(e.dst).invariant):
                continue
            before = len(metas)
            did = intern(e.dst, target)
            edges_out.append((cid, label_of[e.action], did))
            if did == before:
                queue.append(did)
        succ = time_successor(region, ceilings)
        if succ is None:
            time_out.append((cid, cid))  # genuinely time-divergent region
        elif ta.region_satisfies(succ, loc.invariant):
            before = len(metas)
            did = intern(loc_name, succ)
            time_out.append((cid, did))
            if did == before:
                queue.append(did)

    classes = []
    for cid, (loc_name, region) in enumerate(metas):
        loc = ta.location(loc_name)
        classes.append(
            ClassInfo(
                cid,
                loc.faulty,
                loc.initial and region == r0,
                ta.observable_of_region(region),
            )
        )

    model = QuotientModel(classes, ta.actions, edges_out, time_out)
    report = validate_model(model)
    if not report.ok:
        first = report.violations[0]
        raise TAValidationError(
            first.rule, f"region quotient violates {first.rule}: {first.message}"
        )
    return RegionQuotient(model, metas, ceilings)


def region_quotient(ta, max_classes=DEFAULT_MAX_CLASSES):
    return build_region_quotient(ta, max_classes).model


def region_count_bound(ta):
    """Classical upper bound on the number of (location, region) pairs."""
    bound = len(ta.locations)
    for c in ta.ceilings:
        bound *= 2 * c + 2
    k = len(ta.clocks)
    return bound * math.factorial(k) * 2**k


# ---------------------------------------------------------------------------
# Concrete-semantics helpers (used by the sampling-based equivalence tests)

def apply_reset(valuation, resets):
    out = dict(valuation)
    for name in resets:
        out[name] = Fraction(0)
    return out


def concrete_enabled_edges(ta, loc_name, valuation):
    """Indices of automaton edges enabled at a concrete state."""
    enabled = []
    for i, e in enumerate(ta.edges):
        if e.src != loc_name:
            continue
        if not eval_constraints(e.guard, valuation):
            continue
        after = apply_reset(valuation, e.resets)
        if eval_constraints(ta.location(e.dst).invariant, after):
            enabled.append(i)
    return tuple(enabled)


def concrete_region_path(values, ceilings):
    """Regions visited as time flows from a concrete valuation.

    Independent of time_successor: advances the valuation by explicit
    exact delays until every clock has passed its ceiling.
    """
    v = list(values)
    path = [region_of(v, ceilings)]
    while True:
        pending = [
            (i, x) for i, x in enumerate(v) if x <= ceilings[i]
        ]
        if not pending:
            return path
        distances = []
        any_zero = False
        for i, x in pending:
            frac = x - int(x)
            if frac == 0:
                any_zero = True
                distances.append(Fraction(1))
            else:
                distances.append(1 - frac)
        delta = min(distances)
        if any_zero:
            delta = delta / 2  # leave the integer hyperplane but cross nothing
        v = [x + delta for x in v]
        r = region_of(v, ceilings)
        if r != path[-1]:
            path.append(r)


# ---------------------------------------------------------------------------
# File format (JSON)

_LOC_KEYS = {"name", "faulty", "initial", "invariant"}
_TA_EDGE_KEYS = {"src", "dst", "action", "kind", "guard", "resets"}
_OBS_KEYS = {"id", "pred"}


def _check_keys(obj, keys, what):
    if not isinstance(obj, dict):
        raise ModelFormatError(f"{what} must be an object")
    extra = set(obj) - keys
    if extra:
        raise ModelFormatError(f"{what} has unknown keys: {sorted(extra)}")
    missing = keys - set(obj)
    if missing:
        raise ModelFormatError(f"{what} is missing keys: {sorted(missing)}")


def parse_ta(text):
    """Parse and validate a timed automaton from its JSON file format."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelFormatError(
            f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}"
        ) from None
    _check_keys(data, {"locations", "clocks", "edges", "observation"}, "automaton")

    locations = []
    for i, loc in enumerate(data["locations"]):
        _check_keys(loc, _LOC_KEYS, f"locations[{i}]")
        if not isinstance(loc["name"], str):
            raise ModelFormatError(f"locations[{i}].name must be a string")
        if not isinstance(loc["faulty"], bool) or not isinstance(loc["initial"], bool):
            raise ModelFormatError(f"locations[{i}] flags must be booleans")
        invariant = tuple(parse_constraint(c) for c in loc["invariant"])
        locations.append(Location(loc["name"], loc["faulty"], loc["initial"], invariant))

    _check_keys(data["clocks"], {"internal", "external"}, "clocks")
    internal = list(data["clocks"]["internal"])
    external = list(data["clocks"]["external"])
    for name in internal + external:
        if not isinstance(name, str):
            raise ModelFormatError("clock names must be strings")

    edges = []
    for i, e in enumerate(data["edges"]):
        _check_keys(e, _TA_EDGE_KEYS, f"edges[{i}]")
        try:
            kind = Kind(e["kind"])
        except ValueError:
            raise ModelFormatError(
                f"edges[{i}].kind must be one of external|internal|fault"
            ) from None
        guard = tuple(parse_constraint(c) for c in e["guard"])
        edges.append(
            TAEdge(e["src"], e["dst"], e["action"], kind, guard, frozenset(e["resets"]))
        )

    observation = []
    for i, spec in enumerate(data["observation"]):
        _check_keys(spec, _OBS_KEYS, f"observation[{i}]")
        if not isinstance(spec["id"], int) or isinstance(spec["id"], bool):
            raise ModelFormatError(f"observation[{i}].id must be an integer")
        if not isinstance(spec["pred"], str):
            raise ModelFormatError(f"observation[{i}].pred must be a string")
        observation.append(ObservableSpec(spec["id"], parse_pred(spec["pred"]), spec["pred"]))

    return TimedAutomatonWithFaults(locations, internal, external, edges, observation)


def load_ta(path):
    with open(path, encoding="utf-8") as fh:
        return parse_ta(fh.read())


def dumps_ta(ta):
    data = {
        "locations": [
            {
                "name": loc.name,
                "faulty": loc.faulty,
                "initial": loc.initial,
                "invariant": [c.pretty() for c in loc.invariant],
            }
            for loc in ta.locations
        ],
        "clocks": {
            "internal": list(ta.internal_clocks),
            "external": list(ta.external_clocks),
        },
        "edges": [
            {
                "src": e.src,
                "dst": e.dst,
                "action": e.action,
                "kind": e.kind.value,
                "guard": [c.pretty() for c in e.guard],
                "resets": sorted(e.resets),
            }
            for e in ta.edges
        ],
        "observation": [
            {"id": spec.id, "pred": spec.source} for spec in ta.observation
        ],
    }
    return json.dumps(data, indent=2) + "\n"


def save_ta(ta, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_ta(ta))
