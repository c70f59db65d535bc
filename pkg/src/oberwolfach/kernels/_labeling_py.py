"""Pure-Python labeling search. Mirrors _labeling.pyx step for step, so both
backends visit the same nodes and return the same labels for a given seed."""

MASK64 = (1 << 64) - 1

SOLUTION = 0
INFEASIBLE = 1
BUDGET = 2


def splitmix64(state):
    state = (state + 0x9E3779B97F4A7C15) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


def luby(i):
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    while i != (1 << k) - 1:
        i -= (1 << (k - 1)) - 1
        k = 1
        while (1 << k) - 1 < i:
            k += 1
    return 1 << (k - 1)


def search(m, n, group, keymod, fixed, back_start, back_j, back_sign, back_off,
           back_cls, back_sym, back_mask, masks, ncls, seed, base, max_nodes, deadline, clock):
    """Depth-first labeling search with Luby restarts.

    Returns (status, labels, nodes). ``masks`` is a flat 0/1 list of rows of
    length m; edge e uses row back_mask[e] and marks usage in class back_cls[e].
    ``max_nodes`` <= 0 means unlimited; ``deadline`` is compared to ``clock()``.
    """
    ngroups = len(keymod)
    state = seed & MASK64
    total = 0
    labels = [-1] * n
    run = 0
    while True:
        run += 1
        limit = luby(run) * base if base > 0 else -1
        # candidate orders for this run
        perms = []
        for i in range(n):
            if fixed[i] >= 0:
                perms.append([fixed[i]])
                continue
            p = list(range(m))
            for k in range(m - 1, 0, -1):
                state, r = splitmix64(state)
                s = r % (k + 1)
                p[k], p[s] = p[s], p[k]
            perms.append(p)
        keyused = [[0] * keymod[g] for g in range(ngroups)]
        used = [0] * (ncls * m)
        marks = [[] for _ in range(n)]
        idx = [0] * n
        for i in range(n):
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
            cands = perms[i]
            g = group[i]
            km = keymod[g]
            ku = keyused[g]
            placed = False
            while idx[i] < len(cands):
                x = cands[idx[i]]
                idx[i] += 1
                if ku[x % km]:
                    continue
                mk = marks[i]
                ok = True
                for e in range(back_start[i], back_start[i + 1]):
                    d = (back_sign[e] * (x - labels[back_j[e]]) + back_off[e]) % m
                    row = back_mask[e] * m
                    c = back_cls[e] * m
                    if not masks[row + d] or used[c + d]:
                        ok = False
                        break
                    used[c + d] = 1
                    mk.append(c + d)
                    if back_sym[e]:
                        nd = (m - d) % m
                        if nd == d or used[c + nd]:
                            ok = False
                            break
                        used[c + nd] = 1
                        mk.append(c + nd)
                if not ok:
                    for u in mk:
                        used[u] = 0
                    mk.clear()
                    continue
                ku[x % km] = 1
                labels[i] = x
                placed = True
                break
            nodes += 1
            if placed:
                i += 1
                if i < n:
                    idx[i] = 0
            else:
                i -= 1
                if i >= 0:
                    for u in marks[i]:
                        used[u] = 0
                    marks[i].clear()
                    keyused[group[i]][labels[i] % keymod[group[i]]] = 0
                    labels[i] = -1
            if limit > 0 and nodes >= limit:
                break
            if (nodes & 1023) == 0:
                if deadline > 0 and clock() > deadline:
                    return BUDGET, None, total + nodes
                if max_nodes > 0 and total + nodes >= max_nodes:
                    return BUDGET, None, total + nodes
        total += nodes
        if status == SOLUTION:
            return SOLUTION, list(labels), total
        if status == INFEASIBLE:
            return INFEASIBLE, None, total
        if deadline > 0 and clock() > deadline:
            return BUDGET, None, total
        if max_nodes > 0 and total >= max_nodes:
            return BUDGET, None, total
