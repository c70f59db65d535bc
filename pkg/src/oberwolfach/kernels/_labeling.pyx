# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled labeling search; same algorithm and RNG stream as _labeling_py."""
from libc.stdlib cimport malloc, free, calloc
from libc.string cimport memset

ctypedef unsigned long long u64

cdef enum:
    SOLUTION = 0
    INFEASIBLE = 1
    BUDGET = 2


cdef inline u64 _mix(u64* state):
    state[0] += 0x9E3779B97F4A7C15ULL
    cdef u64 z = state[0]
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef long _luby(long i):
    cdef long k = 1
    while (1 << k) - 1 < i:
        k += 1
    while i != (1 << k) - 1:
        i -= (1 << (k - 1)) - 1
        k = 1
        while (1 << k) - 1 < i:
            k += 1
    return 1 << (k - 1)


cdef inline int _pmod(long a, int m):
    cdef long r = a % m
    if r < 0:
        r += m
    return <int>r


def search(int m, int n, group, keymod, fixed, back_start, back_j, back_sign, back_off,
           back_cls, back_sym, back_mask, masks, int ncls, seed, long base, long max_nodes,
           double deadline, clock):
    cdef int ngroups = len(keymod)
    cdef int nedges = len(back_j)
    cdef u64 state = (<u64>(seed & 0xFFFFFFFFFFFFFFFF))
    cdef int *c_group = <int*>malloc(max(n, 1) * sizeof(int))
    cdef int *c_fixed = <int*>malloc(max(n, 1) * sizeof(int))
    cdef int *c_bstart = <int*>malloc((n + 1) * sizeof(int))
    cdef int *c_bj = <int*>malloc(max(nedges, 1) * sizeof(int))
    cdef int *c_bsign = <int*>malloc(max(nedges, 1) * sizeof(int))
    cdef int *c_boff = <int*>malloc(max(nedges, 1) * sizeof(int))
    cdef int *c_bcls = <int*>malloc(max(nedges, 1) * sizeof(int))
    cdef int *c_bsym = <int*>malloc(max(nedges, 1) * sizeof(int))
    cdef int *c_bmask = <int*>malloc(max(nedges, 1) * sizeof(int))
    cdef int nmask = len(masks)
    cdef char *c_masks = <char*>malloc(max(nmask, 1))
    cdef int *c_keymod = <int*>malloc(max(ngroups, 1) * sizeof(int))
    cdef int *key_start = <int*>malloc((ngroups + 1) * sizeof(int))
    cdef int *perm = <int*>malloc(max(n * m, 1) * sizeof(int))
    cdef int *plen = <int*>malloc(max(n, 1) * sizeof(int))
    cdef int *labels = <int*>malloc(max(n, 1) * sizeof(int))
    cdef int *idx = <int*>malloc(max(n, 1) * sizeof(int))
    # marks: each vertex can set at most 2 entries per back edge
    cdef int *mark_start = <int*>malloc((n + 1) * sizeof(int))
    cdef int *mark_cnt = <int*>malloc(max(n, 1) * sizeof(int))
    cdef int *marks = <int*>malloc(max(2 * nedges, 1) * sizeof(int))
    cdef char *used = <char*>calloc(max(ncls * m, 1), 1)
    cdef char *keyused = NULL
    cdef int i, j, k, s, e, g, km, x, d, nd, row, c, t, u
    cdef long total = 0, nodes, limit, run = 0
    cdef int status, ok, placed
    cdef u64 r
    result_status = INFEASIBLE
    result_labels = None
    try:
        for i in range(n):
            c_group[i] = group[i]
            c_fixed[i] = fixed[i]
        for i in range(n + 1):
            c_bstart[i] = back_start[i]
        for e in range(nedges):
            c_bj[e] = back_j[e]
            c_bsign[e] = back_sign[e]
            c_boff[e] = back_off[e]
            c_bcls[e] = back_cls[e]
            c_bsym[e] = back_sym[e]
            c_bmask[e] = back_mask[e]
        for i in range(nmask):
            c_masks[i] = 1 if masks[i] else 0
        key_start[0] = 0
        for g in range(ngroups):
            c_keymod[g] = keymod[g]
            key_start[g + 1] = key_start[g] + c_keymod[g]
        keyused = <char*>calloc(max(key_start[ngroups], 1), 1)
        mark_start[0] = 0
        for i in range(n):
            mark_start[i + 1] = mark_start[i] + 2 * (c_bstart[i + 1] - c_bstart[i])
        while True:
            run += 1
            limit = _luby(run) * base if base > 0 else -1
            for i in range(n):
                if c_fixed[i] >= 0:
                    perm[i * m] = c_fixed[i]
                    plen[i] = 1
                    continue
                plen[i] = m
                for k in range(m):
                    perm[i * m + k] = k
                for k in range(m - 1, 0, -1):
                    r = _mix(&state)
                    s = <int>(r % <u64>(k + 1))
                    t = perm[i * m + k]
                    perm[i * m + k] = perm[i * m + s]
                    perm[i * m + s] = t
            memset(keyused, 0, max(key_start[ngroups], 1))
            memset(used, 0, max(ncls * m, 1))
            for i in range(n):
                mark_cnt[i] = 0
                idx[i] = 0
                labels[i] = -1
            i = 0
            nodes = 0
            status = -1
            while True:
                if i == n:
                    status = SOLUTION
                    break
                if i < 0:
                    status = INFEASIBLE
                    break
                g = c_group[i]
                km = c_keymod[g]
                placed = 0
                while idx[i] < plen[i]:
                    x = perm[i * m + idx[i]]
                    idx[i] += 1
                    if keyused[key_start[g] + x % km]:
                        continue
                    ok = 1
                    for e in range(c_bstart[i], c_bstart[i + 1]):
                        d = _pmod(<long>c_bsign[e] * (x - labels[c_bj[e]]) + c_boff[e], m)
                        row = c_bmask[e] * m
                        c = c_bcls[e] * m
                        if not c_masks[row + d] or used[c + d]:
                            ok = 0
                            break
                        used[c + d] = 1
                        marks[mark_start[i] + mark_cnt[i]] = c + d
                        mark_cnt[i] += 1
                        if c_bsym[e]:
                            nd = (m - d) % m
                            if nd == d or used[c + nd]:
                                ok = 0
                                break
                            used[c + nd] = 1
                            marks[mark_start[i] + mark_cnt[i]] = c + nd
                            mark_cnt[i] += 1
                    if not ok:
                        for u in range(mark_cnt[i]):
                            used[marks[mark_start[i] + u]] = 0
                        mark_cnt[i] = 0
                        continue
                    keyused[key_start[g] + x % km] = 1
                    labels[i] = x
                    placed = 1
                    break
                nodes += 1
                if placed:
                    i += 1
                    if i < n:
                        idx[i] = 0
                else:
                    i -= 1
                    if i >= 0:
                        for u in range(mark_cnt[i]):
                            used[marks[mark_start[i] + u]] = 0
                        mark_cnt[i] = 0
                        g = c_group[i]
                        keyused[key_start[g] + labels[i] % c_keymod[g]] = 0
                        labels[i] = -1
                if limit > 0 and nodes >= limit:
                    break
                if (nodes & 1023) == 0:
                    if (deadline > 0 and clock() > deadline) or (max_nodes > 0 and total + nodes >= max_nodes):
                        status = BUDGET
                        break
            total += nodes
            if status == SOLUTION:
                result_status = SOLUTION
                result_labels = [labels[j] for j in range(n)]
                break
            if status == INFEASIBLE:
                result_status = INFEASIBLE
                break
            if status == BUDGET or (deadline > 0 and clock() > deadline) or (max_nodes > 0 and total >= max_nodes):
                result_status = BUDGET
                break
    finally:
        free(keyused)
        free(c_group); free(c_fixed); free(c_bstart); free(c_bj); free(c_bsign)
        free(c_boff); free(c_bcls); free(c_bsym); free(c_bmask); free(c_masks)
        free(c_keymod); free(key_start); free(perm); free(plen); free(labels)
        free(idx); free(mark_start); free(mark_cnt); free(marks); free(used)
    return result_status, result_labels, total
