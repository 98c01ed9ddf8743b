# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled contraction kernel; same contract as ``_contract_py.contract``."""

from libc.stdlib cimport malloc, free

cdef enum:
    OK = 0
    EDGE_COUNT = 1
    CYCLE = 2
    PAIR_CYCLE = 3
    STUCK = 4


cdef inline Py_ssize_t _find(Py_ssize_t* parent, Py_ssize_t x) noexcept nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def contract(Py_ssize_t n, const long long[:] eu, const long long[:] ev,
             const long long[:] pt, const long long[:] pa, const long long[:] pb):
    cdef Py_ssize_t n_edges = eu.shape[0]
    cdef Py_ssize_t n_pairs = pt.shape[0]
    if n_edges + n_pairs != n - 1:
        return EDGE_COUNT, -1, -1, []

    cdef Py_ssize_t n_reg = 3 * n_pairs
    cdef Py_ssize_t qcap = n_edges + n_pairs + 1
    # parent, size, head, tail, rlen (per vertex); rpair, rnext (per registration)
    # qu, qv (queue); done (per pair)
    cdef Py_ssize_t* buf = <Py_ssize_t*> malloc(
        (5 * n + 2 * n_reg + 2 * qcap + n_pairs + 1) * sizeof(Py_ssize_t))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t* parent = buf
    cdef Py_ssize_t* size = parent + n
    cdef Py_ssize_t* head = size + n
    cdef Py_ssize_t* tail = head + n
    cdef Py_ssize_t* rlen = tail + n
    cdef Py_ssize_t* rpair = rlen + n
    cdef Py_ssize_t* rnext = rpair + n_reg
    cdef Py_ssize_t* qu = rnext + n_reg
    cdef Py_ssize_t* qv = qu + qcap
    cdef Py_ssize_t* done = qv + qcap

    cdef Py_ssize_t i, j, k, v, u, ru, rv, t, a, b, cur, cnt, qlen, qpos, absorbed
    cdef int status = OK
    cdef Py_ssize_t bad_pair = -1, bad_side = -1

    try:
        with nogil:
            for i in range(n):
                parent[i] = i
                size[i] = 1
                head[i] = -1
                tail[i] = -1
                rlen[i] = 0
            k = 0
            for j in range(n_pairs):
                done[j] = 0
                for i in range(3):
                    if i == 0:
                        v = pt[j]
                    elif i == 1:
                        v = pa[j]
                    else:
                        v = pb[j]
                    rpair[k] = j
                    rnext[k] = -1
                    if head[v] < 0:
                        head[v] = k
                    else:
                        rnext[tail[v]] = k
                    tail[v] = k
                    rlen[v] += 1
                    k += 1
            for i in range(n_edges):
                qu[i] = eu[i]
                qv[i] = ev[i]
            qlen = n_edges
            qpos = 0
            absorbed = 0
            while qpos < qlen:
                u = qu[qpos]
                v = qv[qpos]
                qpos += 1
                ru = _find(parent, u)
                rv = _find(parent, v)
                if ru == rv:
                    status = CYCLE
                    break
                if size[ru] < size[rv]:
                    ru, rv = rv, ru
                parent[rv] = ru
                size[ru] += size[rv]
                if head[rv] < 0:
                    continue
                # walk the smaller registration list, then splice both
                if rlen[ru] >= rlen[rv]:
                    cur = head[rv]
                    cnt = rlen[rv]
                else:
                    cur = head[ru]
                    cnt = rlen[ru]
                if head[ru] < 0:
                    head[ru] = head[rv]
                    tail[ru] = tail[rv]
                else:
                    rnext[tail[ru]] = head[rv]
                    tail[ru] = tail[rv]
                rlen[ru] += rlen[rv]
                head[rv] = -1
                tail[rv] = -1
                rlen[rv] = 0
                while cnt > 0 and status == OK:
                    j = rpair[cur]
                    cur = rnext[cur]
                    cnt -= 1
                    if done[j]:
                        continue
                    t = _find(parent, pt[j])
                    a = _find(parent, pa[j])
                    b = _find(parent, pb[j])
                    if t == a:
                        status = PAIR_CYCLE
                        bad_pair = j
                        bad_side = 0
                    elif t == b:
                        status = PAIR_CYCLE
                        bad_pair = j
                        bad_side = 1
                    elif a == b:
                        done[j] = 1
                        absorbed += 1
                        qu[qlen] = pt[j]
                        qv[qlen] = pa[j]
                        qlen += 1
                if status != OK:
                    break

        if status == CYCLE:
            return CYCLE, -1, -1, []
        if status == PAIR_CYCLE:
            return PAIR_CYCLE, bad_pair, bad_side, []
        if absorbed == n_pairs:
            return OK, -1, -1, []
        stuck = []
        for j in range(n_pairs):
            if not done[j]:
                stuck.append((j, _find(parent, pt[j]), _find(parent, pa[j]),
                              _find(parent, pb[j])))
        return STUCK, -1, -1, stuck
    finally:
        free(buf)


def bruteforce(Py_ssize_t n, const long long[:] eu, const long long[:] ev,
               const long long[:] pt, const long long[:] pa, const long long[:] pb):
    """First switching mask that is not a tree, or -1 if all are trees."""
    cdef Py_ssize_t n_edges = eu.shape[0]
    cdef Py_ssize_t n_pairs = pt.shape[0]
    if n_edges + n_pairs != n - 1:
        return 0
    if n_pairs >= 62:
        raise OverflowError("too many switched tensors")
    cdef Py_ssize_t* parent = <Py_ssize_t*> malloc((n + 1) * sizeof(Py_ssize_t))
    if parent == NULL:
        raise MemoryError()
    cdef long long mask, total = (<long long> 1) << n_pairs
    cdef Py_ssize_t i, j, ru, rv, w
    cdef bint tree
    cdef long long bad = -1
    try:
        with nogil:
            mask = 0
            while mask < total:
                for i in range(n):
                    parent[i] = i
                tree = True
                for i in range(n_edges + n_pairs):
                    if i < n_edges:
                        ru = _find(parent, eu[i])
                        rv = _find(parent, ev[i])
                    else:
                        j = i - n_edges
                        w = pb[j] if (mask >> j) & 1 else pa[j]
                        ru = _find(parent, pt[j])
                        rv = _find(parent, w)
                    if ru == rv:
                        tree = False
                        break
                    parent[rv] = ru
                if not tree:
                    bad = mask
                    break
                mask += 1
        return bad
    finally:
        free(parent)
