# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the two inner loops in :mod:`ppbass.kernels`."""
import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t i64


cdef inline i64 _add(i64 a, i64 b, const i64[:, :] digits, const i64[:] radices,
                     const i64[:] weights, Py_ssize_t t) noexcept nogil:
    cdef i64 out = 0, s
    cdef Py_ssize_t i
    for i in range(t):
        s = digits[a, i] + digits[b, i]
        if s >= radices[i]:
            s -= radices[i]
        out += s * weights[i]
    return out


def span_mask(i64[:, :] gens, i64[:] radices, i64 total):
    """Mask of the subgroup of prod Z/radices generated by ``gens`` (coords)."""
    cdef Py_ssize_t t = radices.shape[0], ng = gens.shape[0]
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] mask = np.zeros(total, dtype=np.uint8)
    cdef cnp.ndarray[i64, ndim=1] queue = np.empty(total, dtype=np.int64)
    cdef i64[:] weights = np.ones(t, dtype=np.int64)
    cdef i64[:] gcode = np.zeros(ng, dtype=np.int64)
    cdef i64[:, :] gdig = np.zeros((ng, t), dtype=np.int64)
    cdef Py_ssize_t i, k, head = 0, tail = 0
    cdef i64 acc = 1, x, y, rem, d, s, w
    for i in range(t):
        weights[i] = acc
        acc *= radices[i]
    for k in range(ng):
        for i in range(t):
            gdig[k, i] = gens[k, i] % radices[i]
            if gdig[k, i] < 0:
                gdig[k, i] += radices[i]
    mask[0] = 1
    queue[tail] = 0
    tail += 1
    with nogil:
        while head < tail:
            x = queue[head]
            head += 1
            for k in range(ng):
                y = 0
                rem = x
                for i in range(t):
                    d = rem % radices[i]
                    rem = rem // radices[i]
                    s = d + gdig[k, i]
                    if s >= radices[i]:
                        s -= radices[i]
                    y += s * weights[i]
                if not mask[y]:
                    mask[y] = 1
                    queue[tail] = y
                    tail += 1
    return mask


cdef int _run(const i64[:, :] coef, const i64[:, :] act, const i64[:, :] pre_order,
              const i64[:, :] pre_start, const i64[:] rhs, const i64[:, :] digits,
              const i64[:] radices, const i64[:] weights, const i64[:] neg,
              const cnp.uint8_t[:] allowed, const i64[:] end_start, const i64[:] end_list,
              i64 cap, i64[:, :] partial, i64[:, :] target, i64[:] pos, i64[:] hi,
              i64[:] mode, i64[:] table, i64[:] sol, i64 *nodes_out) noexcept nogil:
    cdef Py_ssize_t r = coef.shape[0], m = coef.shape[1], t = radices.shape[0]
    cdef Py_ssize_t s = act.shape[1]
    cdef i64 nodes = 0, y = 0, a0, e
    cdef Py_ssize_t d, i, q, e0
    cdef bint ok
    cdef int status = 0
    for d in range(m + 1):
        pos[d] = 0
        hi[d] = 0
        mode[d] = 0
    for i in range(r):
        partial[0, i] = 0
    d = 0
    while True:
        if d == m:
            status = 1
            break
        if mode[d] == 0:
            # fresh depth: targets of the equations whose last variable is d
            for q in range(end_start[d], end_start[d + 1]):
                e = end_list[q]
                target[d, e] = _add(rhs[e], neg[partial[d, e]], digits, radices, weights, t)
            if end_start[d + 1] > end_start[d]:
                e0 = end_list[end_start[d]]
                a0 = coef[e0, d]
                table[d] = a0
                pos[d] = pre_start[a0, target[d, e0]]
                hi[d] = pre_start[a0, target[d, e0] + 1]
                mode[d] = 1
            else:
                pos[d] = 0
                hi[d] = s
                mode[d] = 2
        ok = False
        while pos[d] < hi[d]:
            if mode[d] == 1:
                y = pre_order[table[d], pos[d]]
            else:
                y = pos[d]
            pos[d] += 1
            if not allowed[y]:
                continue
            ok = True
            for q in range(end_start[d] + 1, end_start[d + 1]):
                e = end_list[q]
                if act[coef[e, d], y] != target[d, e]:
                    ok = False
                    break
            if ok:
                break
        if not ok:
            mode[d] = 0
            if d == 0:
                status = 0
                break
            d -= 1
            continue
        nodes += 1
        if nodes > cap:
            status = -1
            break
        sol[d] = y
        for i in range(r):
            if coef[i, d] >= 0:
                partial[d + 1, i] = _add(partial[d, i], act[coef[i, d], y], digits, radices, weights, t)
            else:
                partial[d + 1, i] = partial[d, i]
        d += 1
    nodes_out[0] = nodes
    return status


def search(i64[:, :] coef, i64[:, :] act, i64[:, :] pre_order, i64[:, :] pre_start,
           i64[:] rhs, i64[:, :] digits, i64[:] radices, i64[:] neg,
           cnp.uint8_t[:] allowed, i64[:] end_start, i64[:] end_list, i64 cap):
    """First solution, in ascending code order per variable, of ``coef * y = rhs``.

    Candidates for a variable come from the fibre of the first equation whose
    last nonzero coefficient sits at that variable.  Returns
    ``(status, solution, nodes)`` with status 1 = found, 0 = none, -1 = cap hit.
    """
    statuses, sols, nodes = search_batch(coef, act, pre_order, pre_start,
                                         np.asarray(rhs, dtype=np.int64).reshape(1, -1),
                                         digits, radices, neg, allowed, end_start, end_list, cap)
    return int(statuses[0]), sols[0], int(nodes[0])


def search_batch(i64[:, :] coef, i64[:, :] act, i64[:, :] pre_order, i64[:, :] pre_start,
                 i64[:, :] rhs, i64[:, :] digits, i64[:] radices, i64[:] neg,
                 cnp.uint8_t[:] allowed, i64[:] end_start, i64[:] end_list, i64 cap):
    """:func:`search` for every row of ``rhs``; returns arrays of statuses,
    solutions and node counts."""
    cdef Py_ssize_t r = coef.shape[0], m = coef.shape[1], t = radices.shape[0]
    cdef Py_ssize_t nb = rhs.shape[0], b, i
    cdef i64[:] weights = np.ones(t, dtype=np.int64)
    cdef i64[:, :] partial = np.zeros((m + 1, r), dtype=np.int64)
    cdef i64[:, :] target = np.zeros((m + 1, r), dtype=np.int64)
    cdef i64[:] pos = np.zeros(m + 1, dtype=np.int64)
    cdef i64[:] hi = np.zeros(m + 1, dtype=np.int64)
    cdef i64[:] mode = np.zeros(m + 1, dtype=np.int64)
    cdef i64[:] table = np.zeros(m + 1, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=2] sols = np.zeros((nb, m), dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] statuses = np.zeros(nb, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] nodes = np.zeros(nb, dtype=np.int64)
    cdef i64[:, :] sv = sols
    cdef i64[:] stv = statuses
    cdef i64[:] ndv = nodes
    cdef i64 acc = 1, count
    for i in range(t):
        weights[i] = acc
        acc *= radices[i]
    with nogil:
        for b in range(nb):
            stv[b] = _run(coef, act, pre_order, pre_start, rhs[b], digits, radices, weights,
                          neg, allowed, end_start, end_list, cap, partial, target, pos, hi,
                          mode, table, sv[b], &count)
            ndv[b] = count
    return statuses, sols, nodes
