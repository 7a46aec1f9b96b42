# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled int64 kernels for the hot loops.

Drop-in twins of gibbscut._kernel_py (same names, same semantics) restricted
to int64 magnitudes.  The dispatcher guarantees inputs fit: callers never see
this module directly.  Array arguments are array('q') buffers.
"""

from cpython cimport array
import array as _array

ctypedef long long i64

cdef array.array I64_TEMPLATE = _array.array('q', [])


def value_table(int n, i64 constant, i64[::1] masks, i64[::1] coefs):
    """Subset-sum table of polynomial values over all 2^n masks."""
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    cdef array.array out = array.clone(I64_TEMPLATE, size, zero=True)
    cdef i64[::1] table = out
    cdef Py_ssize_t k, x, base, bit
    table[0] = constant
    for k in range(masks.shape[0]):
        table[<Py_ssize_t>masks[k]] += coefs[k]
    for k in range(n):
        bit = (<Py_ssize_t>1) << k
        base = 0
        while base < size:
            for x in range(base + bit, base + 2 * bit):
                table[x] += table[x - bit]
            base += 2 * bit
    return out


def min_scan(i64[::1] table):
    """(min value, first argmin, last argmin, AND of argmins, OR of argmins)."""
    cdef Py_ssize_t size = table.shape[0]
    cdef i64 vmin = table[0]
    cdef Py_ssize_t x
    for x in range(1, size):
        if table[x] < vmin:
            vmin = table[x]
    cdef Py_ssize_t first = -1, last = -1
    cdef Py_ssize_t and_mask = size - 1, or_mask = 0
    for x in range(size):
        if table[x] == vmin:
            if first < 0:
                first = x
            last = x
            and_mask &= x
            or_mask |= x
    return vmin, first, last, and_mask, or_mask


def max_scan(i64[::1] table):
    """(max value, first argmax)."""
    cdef Py_ssize_t size = table.shape[0]
    cdef i64 vmax = table[0]
    cdef Py_ssize_t x, first = 0
    for x in range(1, size):
        if table[x] > vmax:
            vmax = table[x]
            first = x
    return vmax, first


def check_submodular_table(i64[::1] table, int n):
    """All-pairs f(x&y)+f(x|y) <= f(x)+f(y); (ok, x, y) with first violation."""
    cdef Py_ssize_t size = (<Py_ssize_t>1) << n
    cdef Py_ssize_t x, y
    cdef i64 tx
    for x in range(size):
        tx = table[x]
        for y in range(x + 1, size):
            if x & y == x:
                continue
            if table[x & y] + table[x | y] > tx + table[y]:
                return False, x, y
    return True, -1, -1


def max_flow(int n_nodes, int s, int t, i64[::1] arc_from, i64[::1] arc_to, i64[::1] arc_cap):
    """Dinic max-flow; returns (value, min_cut_side, max_cut_side) as lists."""
    cdef Py_ssize_t m = arc_from.shape[0]
    cdef array.array head_a = array.clone(I64_TEMPLATE, n_nodes, zero=False)
    cdef array.array nxt_a = array.clone(I64_TEMPLATE, 2 * m, zero=True)
    cdef array.array to_a = array.clone(I64_TEMPLATE, 2 * m, zero=True)
    cdef array.array cap_a = array.clone(I64_TEMPLATE, 2 * m, zero=True)
    cdef i64[::1] head = head_a, nxt = nxt_a, to = to_a, cap = cap_a
    cdef Py_ssize_t i, e, u, v, w, k
    for i in range(n_nodes):
        head[i] = -1
    for i in range(m):
        u = <Py_ssize_t>arc_from[i]
        v = <Py_ssize_t>arc_to[i]
        e = 2 * i
        to[e] = v
        cap[e] = arc_cap[i]
        nxt[e] = head[u]
        head[u] = e
        to[e + 1] = u
        cap[e + 1] = 0
        nxt[e + 1] = head[v]
        head[v] = e + 1

    cdef array.array level_a = array.clone(I64_TEMPLATE, n_nodes, zero=False)
    cdef array.array it_a = array.clone(I64_TEMPLATE, n_nodes, zero=False)
    cdef array.array queue_a = array.clone(I64_TEMPLATE, n_nodes, zero=False)
    cdef array.array path_a = array.clone(I64_TEMPLATE, n_nodes + 1, zero=False)
    cdef i64[::1] level = level_a, it = it_a, queue = queue_a, path = path_a
    cdef Py_ssize_t qh, qt, sp
    cdef i64 flow = 0, push

    while True:
        # BFS phase
        for i in range(n_nodes):
            level[i] = -1
        level[s] = 0
        queue[0] = s
        qh = 0
        qt = 1
        while qh < qt:
            u = <Py_ssize_t>queue[qh]
            qh += 1
            e = head[u]
            while e != -1:
                v = <Py_ssize_t>to[e]
                if cap[e] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    queue[qt] = v
                    qt += 1
                e = <Py_ssize_t>nxt[e]
        if level[t] < 0:
            break
        # blocking flow via current-arc DFS
        for i in range(n_nodes):
            it[i] = head[i]
        sp = 0
        u = s
        while True:
            if u == t:
                push = cap[<Py_ssize_t>path[0]]
                for k in range(1, sp):
                    if cap[<Py_ssize_t>path[k]] < push:
                        push = cap[<Py_ssize_t>path[k]]
                for k in range(sp):
                    e = <Py_ssize_t>path[k]
                    cap[e] -= push
                    cap[e ^ 1] += push
                flow += push
                k = 0
                while cap[<Py_ssize_t>path[k]] > 0:
                    k += 1
                e = <Py_ssize_t>path[k]
                sp = k
                u = <Py_ssize_t>to[e ^ 1]
                continue
            e = <Py_ssize_t>it[u]
            while e != -1 and not (cap[e] > 0 and level[<Py_ssize_t>to[e]] == level[u] + 1):
                e = <Py_ssize_t>nxt[e]
            it[u] = e
            if e != -1:
                path[sp] = e
                sp += 1
                u = <Py_ssize_t>to[e]
            else:
                level[u] = -1
                if sp == 0:
                    break
                sp -= 1
                e = <Py_ssize_t>path[sp]
                u = <Py_ssize_t>to[e ^ 1]

    # residual reachability from s
    cdef array.array mins_a = array.clone(I64_TEMPLATE, n_nodes, zero=True)
    cdef i64[::1] mins = mins_a
    mins[s] = 1
    queue[0] = s
    qh = 0
    qt = 1
    while qh < qt:
        u = <Py_ssize_t>queue[qh]
        qh += 1
        e = head[u]
        while e != -1:
            v = <Py_ssize_t>to[e]
            if cap[e] > 0 and mins[v] == 0:
                mins[v] = 1
                queue[qt] = v
                qt += 1
            e = <Py_ssize_t>nxt[e]

    # nodes that can still reach t (transpose walk over residual arcs)
    cdef array.array rt_a = array.clone(I64_TEMPLATE, n_nodes, zero=True)
    cdef i64[::1] rt = rt_a
    rt[t] = 1
    queue[0] = t
    qh = 0
    qt = 1
    while qh < qt:
        u = <Py_ssize_t>queue[qh]
        qh += 1
        e = head[u]
        while e != -1:
            w = <Py_ssize_t>to[e]
            if cap[e ^ 1] > 0 and rt[w] == 0:
                rt[w] = 1
                queue[qt] = w
                qt += 1
            e = <Py_ssize_t>nxt[e]

    min_side = [0] * n_nodes
    max_side = [0] * n_nodes
    for i in range(n_nodes):
        if mins[i]:
            min_side[i] = 1
        if rt[i] == 0:
            max_side[i] = 1
    return flow, min_side, max_side
