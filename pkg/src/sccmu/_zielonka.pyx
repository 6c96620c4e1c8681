# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled parity game kernel; same contract as ``_zielonka_py.zielonka``."""
from cpython.array cimport array, clone

cdef array _int_template = array("i", [])
cdef array _byte_template = array("b", [])


cdef int _attract(signed char[::1] alive, int[::1] target, int ntarget, int player,
                  signed char[::1] owner, int[::1] indptr, int[::1] indices,
                  int[::1] rindptr, int[::1] rindices, int[::1] strategy,
                  int[::1] count, signed char[::1] inside, int[::1] queue) except -1:
    cdef int n = alive.shape[0]
    cdef int v, w, u, e, c, head = 0, tail = 0
    for v in range(n):
        inside[v] = 0
    for c in range(ntarget):
        v = target[c]
        inside[v] = 1
        queue[tail] = v
        tail += 1
    for v in range(n):
        if not alive[v] or inside[v]:
            continue
        c = 0
        for e in range(indptr[v], indptr[v + 1]):
            if alive[indices[e]]:
                c += 1
        count[v] = c
        if c == 0 and owner[v] != player:
            inside[v] = 1
            queue[tail] = v
            tail += 1
    while head < tail:
        w = queue[head]
        head += 1
        for e in range(rindptr[w], rindptr[w + 1]):
            u = rindices[e]
            if not alive[u] or inside[u]:
                continue
            if owner[u] == player:
                inside[u] = 1
                strategy[u] = w
                queue[tail] = u
                tail += 1
            else:
                count[u] -= 1
                if count[u] == 0:
                    inside[u] = 1
                    queue[tail] = u
                    tail += 1
    return tail


cdef int _solve(signed char[::1] alive, signed char[::1] owner, int[::1] priority,
                int[::1] indptr, int[::1] indices, int[::1] rindptr, int[::1] rindices,
                signed char[::1] winner, int[::1] strategy, int[::1] count,
                int[::1] queue) except -1:
    cdef int n = alive.shape[0]
    cdef int v, e, p, sigma, player, ntop, nlost, nlive
    cdef signed char[::1] inside = clone(_byte_template, n, False)
    cdef signed char[::1] sub = clone(_byte_template, n, False)
    cdef int[::1] top = clone(_int_template, n, False)
    while True:
        for player in range(2):
            _attract(alive, top, 0, player, owner, indptr, indices, rindptr,
                     rindices, strategy, count, inside, queue)
            for v in range(n):
                if inside[v]:
                    winner[v] = player
                    alive[v] = 0
        nlive = 0
        p = -1
        for v in range(n):
            if alive[v]:
                nlive += 1
                if p < 0 or priority[v] < p:
                    p = priority[v]
        if nlive == 0:
            return 0
        sigma = p & 1
        ntop = 0
        for v in range(n):
            if alive[v] and priority[v] == p:
                top[ntop] = v
                ntop += 1
        _attract(alive, top, ntop, sigma, owner, indptr, indices, rindptr,
                 rindices, strategy, count, inside, queue)
        for v in range(n):
            sub[v] = 1 if (alive[v] and not inside[v]) else 0
        _solve(sub, owner, priority, indptr, indices, rindptr, rindices,
               winner, strategy, count, queue)
        nlost = 0
        for v in range(n):
            if alive[v] and not inside[v] and winner[v] != sigma:
                top[nlost] = v
                nlost += 1
        if nlost == 0:
            for v in range(n):
                if alive[v]:
                    winner[v] = sigma
                    if priority[v] == p and owner[v] == sigma:
                        for e in range(indptr[v], indptr[v + 1]):
                            if alive[indices[e]]:
                                strategy[v] = indices[e]
                                break
            return 0
        _attract(alive, top, nlost, 1 - sigma, owner, indptr, indices, rindptr,
                 rindices, strategy, count, inside, queue)
        for v in range(n):
            if inside[v]:
                winner[v] = 1 - sigma
                alive[v] = 0


def zielonka(owner, priority, indptr, indices, rindptr, rindices):
    """Solve a min-parity game; see ``_zielonka_py.zielonka``."""
    cdef int n = len(owner)
    cdef signed char[::1] own = array("b", owner)
    cdef int[::1] pri = array("i", priority)
    cdef int[::1] ip = array("i", indptr)
    cdef int[::1] ix = array("i", indices) if len(indices) else clone(_int_template, 1, True)
    cdef int[::1] rip = array("i", rindptr)
    cdef int[::1] rix = array("i", rindices) if len(rindices) else clone(_int_template, 1, True)
    cdef signed char[::1] alive = clone(_byte_template, n, False)
    cdef signed char[::1] winner = clone(_byte_template, n, True)
    cdef int[::1] strategy = clone(_int_template, n, False)
    cdef int[::1] count = clone(_int_template, n, True)
    cdef int[::1] queue = clone(_int_template, n, False)
    cdef int v
    for v in range(n):
        alive[v] = 1
        strategy[v] = -1
    if n:
        _solve(alive, own, pri, ip, ix, rip, rix, winner, strategy, count, queue)
    return [winner[v] for v in range(n)], [strategy[v] for v in range(n)]
