"""Exact linear algebra over a field (or a local ring, with unit pivots).

Matrices are lists of rows of raw algebra values.  Pivots are chosen as the
first unit in a column, so the same code solves nonsingular systems over a
truncated power series ring, where a unit pivot always exists.
"""

from ..errors import Inconsistent, NonUnit


def rref(R, M):
    """Reduced row echelon form.  Returns (rows, pivot_columns)."""
    A = [list(r) for r in M]
    nrows = len(A)
    ncols = len(A[0]) if A else 0
    pivots = []
    r = 0
    fp = R.base is None
    p = R.p
    for c in range(ncols):
        if r >= nrows:
            break
        piv = None
        for i in range(r, nrows):
            if R.is_unit(A[i][c]):
                piv = i
                break
        if piv is None:
            if not R.is_field and any(not R.is_zero(A[i][c]) for i in range(r, nrows)):
                raise NonUnit("no unit pivot in column %d" % c)
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = R.inv(A[r][c])
        if fp:
            A[r] = [x * inv % p for x in A[r]]
            row = A[r]
            for i in range(nrows):
                if i != r:
                    f = A[i][c]
                    if f:
                        Ai = A[i]
                        A[i] = [(a - f * b) % p for a, b in zip(Ai, row)]
        else:
            A[r] = [R.mul(x, inv) for x in A[r]]
            row = A[r]
            for i in range(nrows):
                if i != r and not R.is_zero(A[i][c]):
                    f = A[i][c]
                    A[i] = [R.sub(a, R.mul(f, b)) for a, b in zip(A[i], row)]
        pivots.append(c)
        r += 1
    return A, pivots


def rank(R, M):
    return len(rref(R, M)[1])


def kernel(R, M, ncols=None):
    """Basis of {v : M v = 0}."""
    if not M:
        n = ncols or 0
        return [[R.one if i == j else R.zero for i in range(n)] for j in range(n)]
    A, pivots = rref(R, M)
    n = len(M[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [R.zero] * n
        v[f] = R.one
        for i, pc in enumerate(pivots):
            v[pc] = R.neg(A[i][f])
        basis.append(v)
    return basis


def solve(R, M, rhs):
    """One solution of M x = rhs; raises Inconsistent when there is none."""
    n = len(M[0])
    aug = [list(row) + [b] for row, b in zip(M, rhs)]
    A, pivots = rref(R, aug)
    if n in pivots:
        raise Inconsistent("linear system has no solution")
    x = [R.zero] * n
    for i, pc in enumerate(pivots):
        x[pc] = A[i][n]
    return x


def solve_many(R, M, rhss):
    """Solve M x = b for several right-hand sides sharing M."""
    n = len(M[0])
    k = len(rhss)
    aug = [list(row) + [b[i] for b in rhss] for i, row in enumerate(M)]
    A, pivots = rref(R, aug)
    if any(pc >= n for pc in pivots):
        raise Inconsistent("linear system has no solution")
    out = []
    for j in range(k):
        x = [R.zero] * n
        for i, pc in enumerate(pivots):
            x[pc] = A[i][n + j]
        out.append(x)
    return out


def inverse(R, M):
    n = len(M)
    eye = [[R.one if i == j else R.zero for i in range(n)] for j in range(n)]
    cols = solve_many(R, M, eye)
    if rank(R, M) < n:
        raise NonUnit("singular matrix")
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def determinant(R, M):
    """Determinant by elimination with unit pivots."""
    A = [list(r) for r in M]
    n = len(A)
    det = R.one
    for c in range(n):
        piv = None
        for i in range(c, n):
            if R.is_unit(A[i][c]):
                piv = i
                break
        if piv is None:
            if all(R.is_zero(A[i][c]) for i in range(c, n)):
                return R.zero
            if R.is_field:
                return R.zero
            raise NonUnit("determinant needs a unit pivot")
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = R.neg(det)
        det = R.mul(det, A[c][c])
        inv = R.inv(A[c][c])
        for i in range(c + 1, n):
            if not R.is_zero(A[i][c]):
                f = R.mul(A[i][c], inv)
                A[i] = [R.sub(a, R.mul(f, b)) for a, b in zip(A[i], A[c])]
    return det


def mat_vec(R, M, v):
    out = []
    for row in M:
        s = R.zero
        for a, b in zip(row, v):
            s = R.add(s, R.mul(a, b))
        out.append(s)
    return out


def mat_mul(R, A, B):
    cols = list(zip(*B))
    return [[_dot(R, row, col) for col in cols] for row in A]


def _dot(R, u, v):
    s = R.zero
    for a, b in zip(u, v):
        s = R.add(s, R.mul(a, b))
    return s


def echelon_solve(R, M, mode, rhs=None):
    """Front end with the three modes ``rank``, ``kernel`` and ``solve``."""
    if mode == "rank":
        A, pivots = rref(R, M)
        return A, pivots
    if mode == "kernel":
        return kernel(R, M)
    if mode == "solve":
        return solve(R, M, rhs)
    raise ValueError("unknown mode %r" % mode)
