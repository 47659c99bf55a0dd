"""One-player analysis of finite weighted graphs.

A graph is a dict ``{node: [(successor, weight), ...]}`` in which every
successor is itself a key.  Every function here assumes the graph is total
(each node has an outgoing edge) unless it says otherwise.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from typing import Hashable, Iterable

from .play import Lasso, PayoffKind
from .rational import common_denominator

Graph = dict

KARP_LIMIT = 250


def sccs(graph: Graph) -> list[list]:
    """Tarjan's algorithm, iterative.  Components come out sinks first."""
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    out: list[list] = []
    counter = 0
    for root in graph:
        if root in index:
            continue
        work = [(root, iter(graph[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w, _ in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(graph[w])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
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


def is_nontrivial(graph: Graph, comp: list) -> bool:
    if len(comp) > 1:
        return True
    v = comp[0]
    return any(u == v for u, _ in graph[v])


def reachable(graph: Graph, sources: Iterable) -> set:
    seen = set(sources)
    todo = list(seen)
    while todo:
        v = todo.pop()
        for u, _ in graph[v]:
            if u not in seen:
                seen.add(u)
                todo.append(u)
    return seen


def restrict(graph: Graph, nodes: Iterable) -> Graph:
    keep = set(nodes)
    return {v: [(u, w) for u, w in graph[v] if u in keep] for v in graph if v in keep}


def negate(graph: Graph) -> Graph:
    return {v: [(u, -w) for u, w in succ] for v, succ in graph.items()}


def bfs_path(graph: Graph, src, targets, edge_ok=None) -> list | None:
    """Shortest node path from ``src`` to any node in ``targets`` (inclusive)."""
    targets = set(targets)
    if src in targets:
        return [src]
    parent = {src: None}
    q = deque([src])
    while q:
        v = q.popleft()
        for u, w in graph[v]:
            if u in parent or (edge_ok is not None and not edge_ok(v, u, w)):
                continue
            parent[u] = v
            if u in targets:
                path = [u]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                return path[::-1]
            q.append(u)
    return None


# -- mean cycles --------------------------------------------------------


def _int_weights(graph: Graph, comp: list):
    inside = set(comp)
    den = common_denominator(w for v in comp for u, w in graph[v] if u in inside)
    edges = {v: [(u, int(w * den)) for u, w in graph[v] if u in inside] for v in comp}
    return edges, den


def karp_min_mean(graph: Graph, comp: list) -> Fraction:
    """Minimum cycle mean inside a strongly connected, nontrivial ``comp``."""
    edges, den = _int_weights(graph, comp)
    n = len(comp)
    pos = {v: i for i, v in enumerate(comp)}
    preds: list[list] = [[] for _ in range(n)]
    for v in comp:
        for u, w in edges[v]:
            preds[pos[u]].append((pos[v], w))
    inf = None
    D = [[inf] * n for _ in range(n + 1)]
    D[0][0] = 0
    for k in range(1, n + 1):
        prev, cur = D[k - 1], D[k]
        for j in range(n):
            best = inf
            for i, w in preds[j]:
                if prev[i] is not None:
                    c = prev[i] + w
                    if best is None or c < best:
                        best = c
            cur[j] = best
    result = None
    for j in range(n):
        if D[n][j] is None:
            continue
        worst = None
        for k in range(n):
            if D[k][j] is None:
                continue
            q = Fraction(D[n][j] - D[k][j], n - k)
            if worst is None or q > worst:
                worst = q
        if result is None or worst < result:
            result = worst
    return result / den


def howard_min_mean(graph: Graph, comp: list, max_rounds: int | None = None) -> Fraction | None:
    """Policy iteration for the minimum cycle mean of a strongly connected
    ``comp``.  Returns ``None`` if it has not converged after ``max_rounds``."""
    edges, den = _int_weights(graph, comp)
    order = {v: i for i, v in enumerate(comp)}
    policy = {v: min(edges[v], key=lambda e: (e[1], order[e[0]])) for v in comp}
    rounds = max_rounds if max_rounds is not None else 20 * len(comp) + 100
    for _ in range(rounds):
        eta: dict = {}
        pot: dict = {}
        for start in comp:
            if start in eta:
                continue
            path = []
            on_path = {}
            v = start
            while v not in eta and v not in on_path:
                on_path[v] = len(path)
                path.append(v)
                v = policy[v][0]
            if v in on_path:
                cyc = path[on_path[v]:]
                total = sum(policy[x][1] for x in cyc)
                lam = Fraction(total, len(cyc))
                root = min(cyc, key=order.__getitem__)
                r = cyc.index(root)
                ring = cyc[r:] + cyc[:r]
                eta[root], pot[root] = lam, Fraction(0)
                for x in reversed(ring[1:]):
                    nxt, w = policy[x]
                    eta[x], pot[x] = lam, w - lam + pot[nxt]
                path = path[: on_path[v]]
            for x in reversed(path):
                nxt, w = policy[x]
                eta[x] = eta[nxt]
                pot[x] = w - eta[x] + pot[nxt]
        changed = False
        for v in comp:
            best = policy[v]
            best_eta = eta[best[0]]
            for e in edges[v]:
                if eta[e[0]] < best_eta:
                    best, best_eta = e, eta[e[0]]
            if best_eta < eta[v]:
                policy[v] = best
                changed = True
        if not changed:
            for v in comp:
                cur = pot[v]
                best = None
                for u, w in edges[v]:
                    if eta[u] != eta[v]:
                        continue
                    val = w - eta[v] + pot[u]
                    if val < cur:
                        cur, best = val, (u, w)
                if best is not None:
                    policy[v] = best
                    changed = True
        if not changed:
            return min(eta.values()) / den
    return None


def component_min_mean(graph: Graph, comp: list, method: str = "auto") -> Fraction:
    if method == "karp" or (method == "auto" and len(comp) <= KARP_LIMIT):
        return karp_min_mean(graph, comp)
    value = howard_min_mean(graph, comp)
    if value is None:
        return karp_min_mean(graph, comp)
    return value


def min_mean_values(graph: Graph, method: str = "auto") -> dict:
    """For every node, the minimum mean of a cycle reachable from it."""
    comps = sccs(graph)
    comp_of = {v: i for i, c in enumerate(comps) for v in c}
    val: list = [None] * len(comps)
    for i, comp in enumerate(comps):  # sinks first
        best = component_min_mean(graph, comp, method) if is_nontrivial(graph, comp) else None
        for v in comp:
            for u, _ in graph[v]:
                j = comp_of[u]
                if j != i and val[j] is not None and (best is None or val[j] < best):
                    best = val[j]
        if best is None:
            raise ValueError("graph is not total")
        val[i] = best
    return {v: val[comp_of[v]] for v in graph}


def max_mean_values(graph: Graph, method: str = "auto") -> dict:
    return {v: -x for v, x in min_mean_values(negate(graph), method).items()}


# -- other payoff kinds -------------------------------------------------


def _propagate_max(graph: Graph, local) -> dict:
    comps = sccs(graph)
    comp_of = {v: i for i, c in enumerate(comps) for v in c}
    val: list = [None] * len(comps)
    for i, comp in enumerate(comps):
        best = local(comp)
        for v in comp:
            for u, _ in graph[v]:
                j = comp_of[u]
                if j != i and val[j] is not None and (best is None or val[j] > best):
                    best = val[j]
        val[i] = best
    return {v: val[comp_of[v]] for v in graph}


def _live(graph: Graph, c) -> set:
    """Nodes with an infinite path using only edges of weight >= c."""
    live = set(graph)
    changed = True
    while changed:
        changed = False
        for v in list(live):
            if not any(u in live and w >= c for u, w in graph[v]):
                live.discard(v)
                changed = True
    return live


def _cycle_nodes(graph: Graph, c) -> set:
    sub = {v: [(u, w) for u, w in succ if w >= c] for v, succ in graph.items()}
    out = set()
    for comp in sccs(sub):
        if is_nontrivial(sub, comp):
            out.update(comp)
    return out


def _max_values(graph: Graph, kind: PayoffKind) -> dict:
    if kind is PayoffKind.MP:
        return max_mean_values(graph)
    if kind is PayoffKind.SUP:
        return _propagate_max(graph, lambda comp: max(w for v in comp for _, w in graph[v]))

    if kind is PayoffKind.LIMSUP:
        def local(comp):
            inside = set(comp)
            ws = [w for v in comp for u, w in graph[v] if u in inside]
            return max(ws) if ws else None

        return _propagate_max(graph, local)

    thresholds = sorted({w for succ in graph.values() for _, w in succ}, reverse=True)
    val: dict = {}
    for c in thresholds:
        if len(val) == len(graph):
            break
        if kind is PayoffKind.INF:
            good = _live(graph, c)
        else:
            good = reachable(_reverse(graph), _cycle_nodes(graph, c))
        for v in good:
            val.setdefault(v, c)
    return val


def _reverse(graph: Graph) -> Graph:
    rev = {v: [] for v in graph}
    for v, succ in graph.items():
        for u, w in succ:
            rev[u].append((v, w))
    return rev


def one_player_values(graph: Graph, kind: PayoffKind, maximize: bool = True) -> dict:
    """Optimal value of plays from each node when one player resolves every
    choice, maximizing (or minimizing) ``kind``."""
    kind = PayoffKind.parse(kind)
    if maximize:
        return _max_values(graph, kind)
    return {v: -x for v, x in _max_values(negate(graph), kind.dual).items()}


def _lasso_from_path(path: list, cycle_start_node, cycle: list) -> Lasso:
    return Lasso(path[:-1], cycle).normalized() if path[-1] == cycle_start_node else None


def _walk_lasso(graph: Graph, src, pick) -> Lasso:
    seq, pos = [], {}
    v = src
    while v not in pos:
        pos[v] = len(seq)
        seq.append(v)
        v = pick(v)
    return Lasso(seq[: pos[v]], seq[pos[v]:]).normalized()


def _cycle_through(graph: Graph, comp: list, edge_ok) -> list:
    """Some cycle inside ``comp`` using only ``edge_ok`` edges (comp is an SCC
    of that edge subset)."""
    inside = set(comp)
    start = comp[0]
    for u, w in graph[start]:
        if u in inside and edge_ok(start, u, w):
            back = bfs_path(restrict(graph, inside), u, {start}, edge_ok)
            if back is not None:
                return [start] + back[:-1]
    raise AssertionError("component has no cycle")


def _max_mean_cycle_in(graph: Graph, comp: list, value: Fraction) -> list:
    inside = set(comp)
    shifted = {v: [(u, w - value) for u, w in graph[v] if u in inside] for v in comp}
    dist = {v: None for v in comp}
    dist[comp[0]] = Fraction(0)
    for _ in range(len(comp)):
        for v in comp:
            if dist[v] is None:
                continue
            for u, w in shifted[v]:
                if dist[u] is None or dist[v] + w > dist[u]:
                    dist[u] = dist[v] + w
    tight = {v: [(u, w) for u, w in shifted[v] if dist[v] + w == dist[u]] for v in comp}
    for c in sccs(tight):
        if is_nontrivial(tight, c):
            return _cycle_through(tight, c, lambda a, b, w: True)
    raise AssertionError("no optimal cycle found")


def optimal_lasso(graph: Graph, src, kind: PayoffKind, maximize: bool = True) -> Lasso:
    """A play from ``src`` attaining :func:`one_player_values` at ``src``."""
    kind = PayoffKind.parse(kind)
    if not maximize:
        return optimal_lasso(negate(graph), src, kind.dual, True)
    values = one_player_values(graph, kind, True)
    target = values[src]
    reach = reachable(graph, [src])
    sub = restrict(graph, reach)

    if kind is PayoffKind.SUP:
        for v in sub:
            for u, w in sub[v]:
                if w == target:
                    path = bfs_path(sub, src, {v})
                    tail = _walk_lasso(sub, u, lambda x: sub[x][0][0])
                    return Lasso(path + list(tail.stem), tail.cycle).normalized()

    if kind is PayoffKind.INF:
        live = _live(sub, target)
        return _walk_lasso(sub, src, lambda x: next(u for u, w in sub[x] if u in live and w >= target))

    if kind is PayoffKind.LIMINF:
        ok = lambda a, b, w: w >= target
        cyc_sub = {v: [(u, w) for u, w in s if w >= target] for v, s in sub.items()}
        for comp in sccs(cyc_sub):
            if is_nontrivial(cyc_sub, comp):
                cycle = _cycle_through(sub, comp, ok)
                path = bfs_path(sub, src, {cycle[0]})
                return Lasso(path[:-1], cycle).normalized()

    if kind is PayoffKind.LIMSUP:
        for comp in sccs(sub):
            inside = set(comp)
            for v in comp:
                for u, w in sub[v]:
                    if u in inside and w == target:
                        back = bfs_path(restrict(sub, inside), u, {v})
                        path = bfs_path(sub, src, {v})
                        return Lasso(path[:-1], [v] + back[:-1]).normalized()

    if kind is PayoffKind.MP:
        for comp in sccs(sub):
            if is_nontrivial(sub, comp) and -karp_min_mean(negate(sub), comp) == target:
                cycle = _max_mean_cycle_in(sub, comp, target)
                path = bfs_path(sub, src, {cycle[0]})
                return Lasso(path[:-1], cycle).normalized()

    raise AssertionError(f"no optimal play found for {kind}")
