"""Pure-Python versions of the compiled kernels (same signatures, same results)."""
import numpy as np


def span_mask(gens, radices, total):
    radices = [int(r) for r in radices]
    t = len(radices)
    weights, acc = [], 1
    for rad in radices:
        weights.append(acc)
        acc *= rad
    gdig = [[int(g[i]) % radices[i] for i in range(t)] for g in np.asarray(gens).tolist()]
    mask = bytearray(total)
    mask[0] = 1
    queue = [0]
    for x in queue:
        digits = []
        rem = x
        for rad in radices:
            digits.append(rem % rad)
            rem //= rad
        for gd in gdig:
            y = 0
            for i in range(t):
                s = digits[i] + gd[i]
                if s >= radices[i]:
                    s -= radices[i]
                y += s * weights[i]
            if not mask[y]:
                mask[y] = 1
                queue.append(y)
    return np.frombuffer(bytes(mask), dtype=np.uint8).copy()


def search(coef, act, pre_order, pre_start, rhs, digits, radices, neg,
           allowed, end_start, end_list, cap):
    coef = np.asarray(coef).tolist()
    act = np.asarray(act).tolist()
    pre_order = np.asarray(pre_order).tolist()
    pre_start = np.asarray(pre_start).tolist()
    rhs = [int(x) for x in rhs]
    digits = np.asarray(digits).tolist()
    radices = [int(x) for x in radices]
    neg = [int(x) for x in neg]
    allowed = bytes(np.asarray(allowed, dtype=np.uint8))
    end_start = [int(x) for x in end_start]
    end_list = [int(x) for x in end_list]
    r = len(coef)
    m = len(coef[0]) if r else len(end_start) - 1
    s = len(act[0]) if act else len(allowed)
    weights, acc = [], 1
    for rad in radices:
        weights.append(acc)
        acc *= rad

    def add(a, b):
        da, db = digits[a], digits[b]
        out = 0
        for i, rad in enumerate(radices):
            v = da[i] + db[i]
            if v >= rad:
                v -= rad
            out += v * weights[i]
        return out

    sol = [0] * m
    nodes = 0

    def candidates(d, partial):
        ending = end_list[end_start[d]:end_start[d + 1]]
        targets = {e: add(rhs[e], neg[partial[e]]) for e in ending}
        if ending:
            e0 = ending[0]
            a0 = coef[e0][d]
            tg = targets[e0]
            pool = pre_order[a0][pre_start[a0][tg]:pre_start[a0][tg + 1]]
        else:
            pool = range(s)
        for y in pool:
            if not allowed[y]:
                continue
            if all(act[coef[e][d]][y] == targets[e] for e in ending[1:]):
                yield y

    def dfs(d, partial):
        nonlocal nodes
        if d == m:
            return 1
        for y in candidates(d, partial):
            nodes += 1
            if nodes > cap:
                return -1
            sol[d] = y
            nxt = [add(partial[i], act[coef[i][d]][y]) if coef[i][d] >= 0 else partial[i]
                   for i in range(r)]
            status = dfs(d + 1, nxt)
            if status != 0:
                return status
        return 0

    status = dfs(0, [0] * r)
    return status, np.asarray(sol, dtype=np.int64), nodes


def search_batch(coef, act, pre_order, pre_start, rhs, digits, radices, neg,
                 allowed, end_start, end_list, cap):
    rhs = np.asarray(rhs, dtype=np.int64)
    m = np.asarray(coef).shape[1]
    statuses = np.zeros(len(rhs), dtype=np.int64)
    sols = np.zeros((len(rhs), m), dtype=np.int64)
    nodes = np.zeros(len(rhs), dtype=np.int64)
    for b, row in enumerate(rhs):
        statuses[b], sols[b], nodes[b] = search(coef, act, pre_order, pre_start, row, digits,
                                                radices, neg, allowed, end_start, end_list, cap)
    return statuses, sols, nodes
