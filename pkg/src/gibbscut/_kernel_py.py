"""Pure-Python kernels: exact big-integer twins of the compiled extension.

Same function signatures and semantics as ``gibbscut._kernel`` but with no
magnitude limits (Python ints).  The dispatcher in :mod:`gibbscut.kernels`
routes here when the extension is unavailable, when ``GIBBSCUT_PURE=1``, or
when values would overflow int64.
"""

from __future__ import annotations


def value_table(n: int, constant: int, masks: list[int], coefs: list[int]) -> list[int]:
    """Table of polynomial values at every assignment mask in 0..2^n-1.

    Entry x is constant + sum of coefs whose monomial mask is a subset of x
    (subset-sum / zeta transform, O(n * 2^n) additions).
    """
    size = 1 << n
    table = [0] * size
    table[0] = constant
    for m, c in zip(masks, coefs):
        table[m] += c
    for i in range(n):
        bit = 1 << i
        for x in range(size):
            if x & bit:
                table[x] += table[x ^ bit]
    return table


def min_scan(table: list[int]) -> tuple[int, int, int, int, int]:
    """(min value, first argmin, last argmin, AND of argmins, OR of argmins)."""
    vmin = min(table)
    first = last = -1
    and_mask = -1
    or_mask = 0
    for x, v in enumerate(table):
        if v == vmin:
            if first < 0:
                first = x
            last = x
            and_mask &= x
            or_mask |= x
    return vmin, first, last, and_mask & (len(table) - 1), or_mask


def max_scan(table: list[int]) -> tuple[int, int]:
    """(max value, first argmax)."""
    vmax = max(table)
    return vmax, table.index(vmax)


def check_submodular_table(table: list[int], n: int) -> tuple[bool, int, int]:
    """Verify f(x&y) + f(x|y) <= f(x) + f(y) for every pair of masks.

    Returns (True, -1, -1) or (False, x, y) with the first violating pair.
    Pairs with x a subset of y hold with equality and are skipped.
    """
    size = 1 << n
    for x in range(size):
        tx = table[x]
        for y in range(x + 1, size):
            if x & y == x:
                continue
            if table[x & y] + table[x | y] > tx + table[y]:
                return False, x, y
    return True, -1, -1


def max_flow(
    n_nodes: int,
    s: int,
    t: int,
    arc_from: list[int],
    arc_to: list[int],
    arc_cap: list[int],
) -> tuple[int, list[int], list[int]]:
    """Dinic max-flow; returns (value, min_cut_side, max_cut_side).

    min_cut_side[v] = 1 iff v is reachable from s in the residual network
    (the inclusion-minimal minimum cut's source side); max_cut_side[v] = 1
    iff v cannot reach t in the residual network (inclusion-maximal).  Both
    sides are independent of which maximum flow was found.
    """
    m = len(arc_from)
    # adjacency as linked lists over paired edges: edge 2i forward, 2i+1 reverse
    head = [-1] * n_nodes
    nxt = [0] * (2 * m)
    to = [0] * (2 * m)
    cap = [0] * (2 * m)
    for i in range(m):
        u, v, c = arc_from[i], arc_to[i], arc_cap[i]
        e = 2 * i
        to[e] = v
        cap[e] = c
        nxt[e] = head[u]
        head[u] = e
        to[e + 1] = u
        cap[e + 1] = 0
        nxt[e + 1] = head[v]
        head[v] = e + 1

    level = [-1] * n_nodes
    it = [0] * n_nodes
    queue = [0] * n_nodes

    def bfs() -> bool:
        for i in range(n_nodes):
            level[i] = -1
        level[s] = 0
        queue[0] = s
        qh, qt = 0, 1
        while qh < qt:
            u = queue[qh]
            qh += 1
            e = head[u]
            while e != -1:
                v = to[e]
                if cap[e] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    queue[qt] = v
                    qt += 1
                e = nxt[e]
        return level[t] >= 0

    flow = 0
    path: list[int] = []
    while bfs():
        for i in range(n_nodes):
            it[i] = head[i]
        path.clear()
        u = s
        while True:
            if u == t:
                push = min(cap[e] for e in path)
                for e in path:
                    cap[e] -= push
                    cap[e ^ 1] += push
                flow += push
                # back up to the tail of the first saturated edge
                k = 0
                while cap[path[k]] > 0:
                    k += 1
                sat = path[k]
                del path[k:]
                u = to[sat ^ 1]
                continue
            # advance along the current-arc pointer, skipping dead edges for good
            e = it[u]
            while e != -1 and not (cap[e] > 0 and level[to[e]] == level[u] + 1):
                e = nxt[e]
            it[u] = e
            if e != -1:
                path.append(e)
                u = to[e]
            else:
                level[u] = -1  # dead end for the rest of this phase
                if not path:
                    break
                back = path.pop()
                u = to[back ^ 1]

    # residual reachability from s
    min_side = [0] * n_nodes
    min_side[s] = 1
    queue[0] = s
    qh, qt = 0, 1
    while qh < qt:
        u = queue[qh]
        qh += 1
        e = head[u]
        while e != -1:
            v = to[e]
            if cap[e] > 0 and not min_side[v]:
                min_side[v] = 1
                queue[qt] = v
                qt += 1
            e = nxt[e]

    # nodes that can reach t through residual arcs (walk the transpose: an
    # adjacency edge e at u pairs with e^1, an edge to[e] -> u of capacity
    # cap[e^1], so to[e] reaches t through u whenever cap[e^1] > 0)
    reaches_t = [0] * n_nodes
    reaches_t[t] = 1
    queue[0] = t
    qh, qt = 0, 1
    while qh < qt:
        u = queue[qh]
        qh += 1
        e = head[u]
        while e != -1:
            w = to[e]
            if cap[e ^ 1] > 0 and not reaches_t[w]:
                reaches_t[w] = 1
                queue[qt] = w
                qt += 1
            e = nxt[e]
    max_side = [1 - r for r in reaches_t]
    return flow, min_side, max_side
