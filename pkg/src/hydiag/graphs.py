"""Small deterministic graph algorithms (SCC, labeled BFS, closure).

All functions iterate nodes and successors in the order given, so results
are reproducible whenever the inputs are.
"""

from __future__ import annotations

from collections import deque


def strongly_connected_components(nodes, successors):
    """Tarjan's algorithm, iterative.

    ``nodes`` is an iterable of hashable nodes, ``successors`` a callable
    returning an iterable of successor nodes.  Components are returned in
    reverse topological order (every successor component appears before
    the components that reach it).
    """
    index = {}
    low = {}
    on_stack = set()
    stack = []
    out = []
    counter = 0

    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(successors(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            pushed = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(successors(w))))
                    pushed = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if pushed:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
    return out


def is_cyclic_component(comp, successors):
    """A component contains a cycle iff it has >1 node or a self-loop."""
    if len(comp) > 1:
        return True
    v = comp[0]
    return any(w == v for w in successors(v))


def bfs_parents(starts, successors):
    """Breadth-first search over labeled edges.

    ``successors(node)`` yields ``(label, dst)`` pairs.  Returns a dict
    mapping every reached node to ``(parent, label)`` (``(None, None)``
    for the start nodes), in BFS discovery order.
    """
    parents = {}
    queue = deque()
    for s in starts:
        if s not in parents:
            parents[s] = (None, None)
            queue.append(s)
    while queue:
        v = queue.popleft()
        for label, w in successors(v):
            if w not in parents:
                parents[w] = (v, label)
                queue.append(w)
    return parents


def path_from_parents(parents, node):
    """Reconstruct ``([nodes...], [labels...])`` from a bfs_parents dict."""
    nodes = [node]
    labels = []
    while True:
        parent, label = parents[nodes[-1]]
        if parent is None:
            break
        nodes.append(parent)
        labels.append(label)
    nodes.reverse()
    labels.reverse()
    return nodes, labels


def shortest_cycle(start, successors, allowed):
    """Shortest cycle from ``start`` back to itself inside ``allowed``.

    ``successors(node)`` yields ``(label, dst)``; every intermediate node
    must belong to ``allowed``.  Returns ``([nodes...], [labels...])`` with
    nodes[0] == nodes[-1] == start, or None if no cycle exists.
    """
    parents = {}
    queue = deque()
    for label, w in successors(start):
        if w == start:
            return [start, start], [label]
        if w in allowed and w not in parents:
            parents[w] = (None, label)
            queue.append(w)
    while queue:
        v = queue.popleft()
        for label, w in successors(v):
            if w == start:
                nodes, labels = path_from_parents(parents, v)
                first_label = parents[nodes[0]][1]
                return [start] + nodes + [start], [first_label] + labels + [label]
            if w in allowed and w not in parents:
                parents[w] = (v, label)
                queue.append(w)
    return None


def reflexive_transitive_closure(n, pairs):
    """Reflexive-transitive closure of a relation on ``range(n)``.

    Returns a set of (src, dst) pairs including (i, i) for every i.
    """
    adj = [[] for _ in range(n)]
    for s, d in pairs:
        adj[s].append(d)
    comps = strongly_connected_components(range(n), lambda v: adj[v])
    comp_of = {}
    for i, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = i
    # Components arrive children-first, so successor reach-sets are ready.
    reach = []
    for i, comp in enumerate(comps):
        members = set(comp)
        r = set()
        cyclic = len(comp) > 1
        for v in comp:
            for w in adj[v]:
                if w in members:
                    cyclic = cyclic or w == v
                else:
                    r.add(w)
                    r |= reach[comp_of[w]]
        if cyclic:
            r |= members
        reach.append(r)
    closure = {(v, v) for v in range(n)}
    for i, comp in enumerate(comps):
        for v in comp:
            closure.update((v, w) for w in reach[i])
    return closure
