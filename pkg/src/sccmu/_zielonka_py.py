"""Pure-Python parity game kernel (fallback for the compiled ``_zielonka``).

Arenas arrive in CSR form: ``indptr``/``indices`` for moves, ``rindptr``/
``rindices`` for reversed moves.  Owners and winners use 0 for Even and 1 for
Odd.  The winning condition is min-parity: Even wins an infinite play iff the
least priority seen infinitely often is even; a player with no move loses.
"""


def _attract(alive, target, player, owner, indptr, indices, rindptr, rindices,
             strategy, count):
    """Grow ``target`` (a list of alive positions) to ``player``'s attractor.

    Opponent positions with no alive move are attracted as well.  Writes an
    attracting move into ``strategy`` for every ``player`` position added.
    Returns the attractor as a bytearray mask.
    """
    n = len(alive)
    inside = bytearray(n)
    queue = []
    for v in target:
        inside[v] = 1
        queue.append(v)
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
            queue.append(v)
    head = 0
    while head < len(queue):
        w = queue[head]
        head += 1
        for e in range(rindptr[w], rindptr[w + 1]):
            u = rindices[e]
            if not alive[u] or inside[u]:
                continue
            if owner[u] == player:
                inside[u] = 1
                strategy[u] = w
                queue.append(u)
            else:
                count[u] -= 1
                if count[u] == 0:
                    inside[u] = 1
                    queue.append(u)
    return inside


def _solve(alive, owner, priority, indptr, indices, rindptr, rindices,
           winner, strategy, count):
    n = len(alive)
    while True:
        # dead ends (and whatever is forced into them) are decided outright
        for player in (0, 1):
            attr = _attract(alive, (), player, owner, indptr, indices,
                            rindptr, rindices, strategy, count)
            for v in range(n):
                if attr[v]:
                    winner[v] = player
                    alive[v] = 0
        live = [v for v in range(n) if alive[v]]
        if not live:
            return
        p = min(priority[v] for v in live)
        sigma = p & 1
        top = [v for v in live if priority[v] == p]
        attr = _attract(alive, top, sigma, owner, indptr, indices,
                        rindptr, rindices, strategy, count)
        sub = bytearray(alive)
        for v in live:
            if attr[v]:
                sub[v] = 0
        _solve(sub, owner, priority, indptr, indices, rindptr, rindices,
               winner, strategy, count)
        lost = [v for v in live if not attr[v] and winner[v] != sigma]
        if not lost:
            for v in live:
                winner[v] = sigma
            for v in top:
                if owner[v] == sigma:
                    for e in range(indptr[v], indptr[v + 1]):
                        if alive[indices[e]]:
                            strategy[v] = indices[e]
                            break
            return
        attr = _attract(alive, lost, 1 - sigma, owner, indptr, indices,
                        rindptr, rindices, strategy, count)
        for v in live:
            if attr[v]:
                winner[v] = 1 - sigma
                alive[v] = 0


def zielonka(owner, priority, indptr, indices, rindptr, rindices):
    """Solve a min-parity game.

    Returns ``(winner, strategy)``: ``winner[v]`` in {0, 1} and
    ``strategy[v]`` the chosen successor when ``owner[v] == winner[v]``
    (undefined, -1 or stale, otherwise).
    """
    n = len(owner)
    alive = bytearray(b"\x01" * n)
    winner = [0] * n
    strategy = [-1] * n
    count = [0] * n
    _solve(alive, owner, priority, indptr, indices, rindptr, rindices,
           winner, strategy, count)
    return winner, strategy
