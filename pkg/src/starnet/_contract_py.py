"""Pure-Python contraction kernel (fallback for the compiled ``_contract``).

Input graph: ``n`` vertices, plain edges ``(eu[i], ev[i])`` present in every
switching, and switched pairs ``(pt[j], pa[j], pb[j])``: vertex ``pt[j]``
keeps exactly one of its edges to ``pa[j]`` / ``pb[j]``.

Contraction keeps union-find classes that are trees in every switching.
A plain edge merges its two classes.  A pair is absorbed once both of its
arguments sit in one class, merging the pair vertex into it.  Merges of
a class with itself are cycles.  The graph passes iff everything ends in
one class with every pair absorbed.

Return value ``(status, a, b, stuck)``:

* ``OK``: valid.
* ``EDGE_COUNT``: a switching has the wrong number of edges to be a tree.
* ``CYCLE``: every switching has a cycle.
* ``PAIR_CYCLE``: pair ``a`` keeping argument ``b`` (0/1) closes a cycle.
* ``STUCK``: no rule applies; ``stuck`` lists ``(pair, root_t, root_a,
  root_b)`` for the unabsorbed pairs.
"""

OK = 0
EDGE_COUNT = 1
CYCLE = 2
PAIR_CYCLE = 3
STUCK = 4


def contract(n, eu, ev, pt, pa, pb):
    n_edges = len(eu)
    n_pairs = len(pt)
    if n_edges + n_pairs != n - 1:
        return EDGE_COUNT, -1, -1, []

    parent = list(range(n))
    size = [1] * n
    # pairs registered at each class root, as Python lists merged small-to-large
    reg = [None] * n
    for j in range(n_pairs):
        for v in (pt[j], pa[j], pb[j]):
            if reg[v] is None:
                reg[v] = [j]
            else:
                reg[v].append(j)
    done = [False] * n_pairs

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    qu, qv = list(eu), list(ev)
    qpos = 0
    absorbed = 0
    while qpos < len(qu):
        u, v = qu[qpos], qv[qpos]
        qpos += 1
        ru, rv = find(u), find(v)
        if ru == rv:
            return CYCLE, -1, -1, []
        if size[ru] < size[rv]:
            ru, rv = rv, ru
        parent[rv] = ru
        size[ru] += size[rv]
        small = reg[rv]
        reg[rv] = None
        if small is None:
            continue
        big = reg[ru]
        if big is None:
            # no pair touches ru's class, so none can change state
            reg[ru] = small
            continue
        # walk the shorter list; the merged list is always ru's then rv's
        walk = small if len(big) >= len(small) else big[:]
        big.extend(small)
        for j in walk:
            if done[j]:
                continue
            t, a, b = find(pt[j]), find(pa[j]), find(pb[j])
            if t == a:
                return PAIR_CYCLE, j, 0, []
            if t == b:
                return PAIR_CYCLE, j, 1, []
            if a == b:
                done[j] = True
                absorbed += 1
                qu.append(pt[j])
                qv.append(pa[j])

    if absorbed == n_pairs:
        return OK, -1, -1, []
    stuck = [
        (j, find(pt[j]), find(pa[j]), find(pb[j])) for j in range(n_pairs) if not done[j]
    ]
    return STUCK, -1, -1, stuck


def bruteforce(n, eu, ev, pt, pa, pb):
    """First switching mask that is not a tree, or -1 if all are trees.

    Bit ``j`` of a mask set means pair ``j`` keeps its edge to ``pb[j]``.
    Tree test: ``|E| = |V| - 1`` and connected (by breadth-first search).
    """
    n_pairs = len(pt)
    if len(eu) + n_pairs != n - 1:
        return 0
    base = [[] for _ in range(n)]
    for u, v in zip(eu, ev):
        base[u].append(v)
        base[v].append(u)
    for mask in range(1 << n_pairs):
        extra = {}
        for j in range(n_pairs):
            w = pb[j] if (mask >> j) & 1 else pa[j]
            extra.setdefault(pt[j], []).append(w)
            extra.setdefault(w, []).append(pt[j])
        seen = [False] * n
        seen[0] = True
        todo = [0]
        reached = 1
        while todo:
            x = todo.pop()
            for y in base[x] + extra.get(x, []):
                if not seen[y]:
                    seen[y] = True
                    reached += 1
                    todo.append(y)
        if reached != n:
            return mask
    return -1
