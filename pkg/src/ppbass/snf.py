"""Smith normal form over a Euclidean domain (Z or F_p[x]).

Pivot rule: smallest nonzero Euclidean norm, ties broken by lowest
(row, column).  The transforms are tracked so that ``U * M * V == D``.
"""
from .rings import INTEGERS


def identity(R, n):
    return [[R.one if i == j else R.zero for j in range(n)] for i in range(n)]


def matmul(R, A, B):
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    out = []
    for row in A:
        new = []
        for j in range(cols):
            acc = R.zero
            for k in range(inner):
                if not R.is_zero(row[k]) and not R.is_zero(B[k][j]):
                    acc = R.add(acc, R.mul(row[k], B[k][j]))
            new.append(acc)
        out.append(new)
    return out


def smith_normal_form(R, M, ncols=None, with_inverse=False):
    """Return ``(U, D, V)`` (and ``V^-1`` when asked) with ``U M V = D``.

    ``M`` is a list of rows; ``ncols`` is needed when ``M`` has no rows.
    D is diagonal, its diagonal entries are canonical associates (positive
    integers, monic polynomials) and each divides the next.
    """
    rows = len(M)
    cols = ncols if ncols is not None else (len(M[0]) if M else 0)
    A = [list(r) for r in M]
    U = identity(R, rows)
    V = identity(R, cols)
    Vi = identity(R, cols)
    zero = R.zero
    norm = R.norm

    def row_addmul(i, j, q):
        # row_i += q * row_j
        Ai, Aj = A[i], A[j]
        for k in range(cols):
            if Aj[k] != zero:
                Ai[k] = R.add(Ai[k], R.mul(q, Aj[k]))
        Ui, Uj = U[i], U[j]
        for k in range(rows):
            if Uj[k] != zero:
                Ui[k] = R.add(Ui[k], R.mul(q, Uj[k]))

    def col_addmul(i, j, q):
        # col_i += q * col_j
        for r in A:
            if r[j] != zero:
                r[i] = R.add(r[i], R.mul(r[j], q))
        for r in V:
            if r[j] != zero:
                r[i] = R.add(r[i], R.mul(r[j], q))
        nq = R.neg(q)
        Vj, Vii = Vi[j], Vi[i]
        for k in range(cols):
            if Vii[k] != zero:
                Vj[k] = R.add(Vj[k], R.mul(nq, Vii[k]))

    def swap_rows(i, j):
        if i != j:
            A[i], A[j] = A[j], A[i]
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        if i != j:
            for r in A:
                r[i], r[j] = r[j], r[i]
            for r in V:
                r[i], r[j] = r[j], r[i]
            Vi[i], Vi[j] = Vi[j], Vi[i]

    for t in range(min(rows, cols)):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                a = A[i][j]
                if a != zero:
                    key = (norm(a), i, j)
                    if best is None or key < best:
                        best = key
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            clean = True
            p = A[t][t]
            for i in range(t + 1, rows):
                if A[i][t] != zero:
                    q, r = R.divmod(A[i][t], p)
                    row_addmul(i, t, R.neg(q))
                    if r != zero:
                        clean = False
            for j in range(t + 1, cols):
                if A[t][j] != zero:
                    q, r = R.divmod(A[t][j], p)
                    col_addmul(j, t, R.neg(q))
                    if r != zero:
                        clean = False
            if not clean:
                best = None
                for i in range(t, rows):
                    if A[i][t] != zero:
                        key = (norm(A[i][t]), i, t)
                        if best is None or key < best:
                            best = key
                for j in range(t, cols):
                    if A[t][j] != zero:
                        key = (norm(A[t][j]), t, j)
                        if best is None or key < best:
                            best = key
                swap_rows(t, best[1])
                swap_cols(t, best[2])
                continue
            bad = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if A[i][j] != zero and not R.is_zero(R.divmod(A[i][j], p)[1]):
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_addmul(t, bad, R.one)
        u = R.normal_unit(A[t][t])
        if u != R.one:
            A[t] = [R.mul(u, a) for a in A[t]]
            U[t] = [R.mul(u, a) for a in U[t]]
    if with_inverse:
        return U, A, V, Vi
    return U, A, V


def integer_snf(M, ncols=None, with_inverse=False):
    return smith_normal_form(INTEGERS, M, ncols, with_inverse)


def diagonal(D):
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]
