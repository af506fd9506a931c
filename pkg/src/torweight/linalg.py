"""Exact integer and rational linear algebra on small dense matrices.

Everything here is arbitrary-precision: integer matrices use Python ints,
rational ones use fractions.Fraction.  Matrices are lists of row lists.
"""

from fractions import Fraction
from math import gcd

Rational = Fraction


class DependentRows(ValueError):
    pass


def vec_gcd(v):
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return g


def primitivize(v):
    """Divide an integer vector by its content, preserving direction."""
    g = vec_gcd(v)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in v)


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(M):
    return [list(col) for col in zip(*M)]


def mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    assert len(A[0]) == k
    out = []
    for i in range(n):
        row = []
        Ai = A[i]
        for j in range(m):
            row.append(sum(Ai[t] * B[t][j] for t in range(k)))
        out.append(row)
    return out


def mat_vec(A, x):
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def vec_mat(x, A):
    # row vector times matrix
    m = len(A[0])
    return [sum(x[i] * A[i][j] for i in range(len(A))) for j in range(m)]


def _swap_rows(M, i, j):
    M[i], M[j] = M[j], M[i]


def _add_row(M, i, j, c):
    # row_i += c * row_j
    M[i] = [a + c * b for a, b in zip(M[i], M[j])]


def _swap_cols(M, i, j):
    for row in M:
        row[i], row[j] = row[j], row[i]


def _add_col(M, i, j, c):
    # col_i += c * col_j
    for row in M:
        row[i] += c * row[j]


def smith_normal_form(M):
    """Return (U, S, V) with U*M*V = S, U and V unimodular, S diagonal
    with d1 | d2 | ... >= 0.

    Pivoting always picks the entry of least absolute value, which keeps
    intermediate entries small at the scales we care about.
    """
    U, S, V, _ = smith_with_vinv(M)
    return U, S, V


def smith_with_vinv(M):
    """Like smith_normal_form but also returns V^{-1} (tracked exactly)."""
    S = [list(row) for row in M]
    n = len(S)
    m = len(S[0]) if n else 0
    U = identity_matrix(n)
    V = identity_matrix(m)
    Vinv = identity_matrix(m)

    def col_swap(i, j):
        _swap_cols(S, i, j)
        _swap_cols(V, i, j)
        _swap_rows(Vinv, i, j)

    def col_add(i, j, c):
        _add_col(S, i, j, c)
        _add_col(V, i, j, c)
        _add_row(Vinv, j, i, -c)

    def row_swap(i, j):
        _swap_rows(S, i, j)
        _swap_rows(U, i, j)

    def row_add(i, j, c):
        _add_row(S, i, j, c)
        _add_row(U, i, j, c)

    k = 0
    while k < n and k < m:
        # locate entry of least nonzero absolute value in the sub-block
        best = None
        for i in range(k, n):
            for j in range(k, m):
                if S[i][j] != 0 and (best is None or abs(S[i][j]) < abs(S[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i0, j0 = best
        if i0 != k:
            row_swap(k, i0)
        if j0 != k:
            col_swap(k, j0)
        dirty = False
        for i in range(k + 1, n):
            if S[i][k] != 0:
                q = S[i][k] // S[k][k]
                row_add(i, k, -q)
                if S[i][k] != 0:
                    dirty = True
        for j in range(k + 1, m):
            if S[k][j] != 0:
                q = S[k][j] // S[k][k]
                col_add(j, k, -q)
                if S[k][j] != 0:
                    dirty = True
        if dirty:
            continue
        if S[k][k] < 0:
            for j in range(k, m):
                S[k][j] = -S[k][j]
            # row negation lives in U
            U[k] = [-x for x in U[k]]
        k += 1

    # enforce divisibility d_i | d_{i+1}
    r = k
    changed = True
    while changed:
        changed = False
        for i in range(r - 1):
            a, b = S[i][i], S[i + 1][i + 1]
            if a != 0 and b % a != 0:
                col_add(i, i + 1, 1)
                # re-clean the 2x2 block with euclid steps
                while S[i + 1][i] != 0:
                    q = S[i][i] // S[i + 1][i] if S[i + 1][i] != 0 else 0
                    if abs(S[i + 1][i]) <= abs(S[i][i]):
                        q = S[i][i] // S[i + 1][i]
                        row_add(i, i + 1, -q)
                        _swap_rows(S, i, i + 1)
                        _swap_rows(U, i, i + 1)
                    else:
                        q = S[i + 1][i] // S[i][i]
                        row_add(i + 1, i, -q)
                if S[i][i] != 0 and S[i][i + 1] != 0:
                    q = S[i][i + 1] // S[i][i]
                    col_add(i + 1, i, -q)
                if S[i][i] < 0:
                    S[i] = [-x for x in S[i]]
                    U[i] = [-x for x in U[i]]
                if S[i + 1][i + 1] < 0:
                    S[i + 1] = [-x for x in S[i + 1]]
                    U[i + 1] = [-x for x in U[i + 1]]
                changed = True
    return U, S, V, Vinv


def smith_invariants(M):
    _, S, _ = smith_normal_form(M)
    return [S[i][i] for i in range(min(len(S), len(S[0]) if S else 0)) if S[i][i] != 0]


def lattice_index(B):
    """Index of the row span of B inside its saturation.

    Equals the product of the nonzero Smith invariants; raises
    DependentRows when the rows are linearly dependent.
    """
    invs = smith_invariants(B)
    if len(invs) != len(B):
        raise DependentRows("rows are linearly dependent")
    out = 1
    for d in invs:
        out *= d
    return out


def hermite_normal_form(M):
    """Row-style HNF: returns (H, U) with U*M = H, U unimodular.

    Pivots are positive, entries below a pivot vanish and entries above
    are reduced into [0, pivot).
    """
    H = [list(row) for row in M]
    n = len(H)
    m = len(H[0]) if n else 0
    U = identity_matrix(n)
    r = 0
    for col in range(m):
        piv = None
        for i in range(r, n):
            if H[i][col] != 0 and (piv is None or abs(H[i][col]) < abs(H[piv][col])):
                piv = i
        if piv is None:
            continue
        _swap_rows(H, r, piv)
        _swap_rows(U, r, piv)
        while True:
            done = True
            for i in range(r + 1, n):
                if H[i][col] != 0:
                    q = H[i][col] // H[r][col]
                    _add_row(H, i, r, -q)
                    _add_row(U, i, r, -q)
                    if H[i][col] != 0:
                        _swap_rows(H, r, i)
                        _swap_rows(U, r, i)
                        done = False
            if done:
                break
        if H[r][col] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        for i in range(r):
            q = H[i][col] // H[r][col]
            if q != 0:
                _add_row(H, i, r, -q)
                _add_row(U, i, r, -q)
        r += 1
        if r == n:
            break
    return H, U


def left_kernel_basis(M):
    """Basis (as a saturated lattice) of {u : u*M = 0} over the integers."""
    H, U = hermite_normal_form(M)
    return [tuple(U[i]) for i in range(len(H)) if all(x == 0 for x in H[i])]


def integer_kernel(M):
    """Basis of the right kernel {x : M*x = 0} over the integers."""
    return left_kernel_basis(transpose(M))


def saturation_data(B):
    """For an integer matrix B of full row rank k, return
    (sat_basis, proj_cols, lift_rows):

    - sat_basis: k rows forming a basis of the saturation of rowspan(B);
    - proj_cols: n x (n-k) integer matrix P with x |-> x*P the projection
      N -> Z^{n-k} whose kernel is exactly that saturation;
    - lift_rows: (n-k) x n rows L with (y*L)*P = y for all y (a section).
    """
    k = len(B)
    n = len(B[0])
    U, S, V, Vinv = smith_with_vinv(B)
    rank = sum(1 for i in range(min(k, n)) if S[i][i] != 0)
    if rank != k:
        raise DependentRows("rows are linearly dependent")
    sat = [tuple(Vinv[i]) for i in range(k)]
    proj = [[V[i][j] for j in range(k, n)] for i in range(n)]
    lift = [tuple(Vinv[i]) for i in range(k, n)]
    return sat, proj, lift


def rational_rref(A, b=None):
    """Row reduce [A | b] over Fraction; returns (R, pivots, rhs)."""
    R = [[Fraction(x) for x in row] for row in A]
    rhs = [Fraction(x) for x in b] if b is not None else None
    n = len(R)
    m = len(R[0]) if n else 0
    pivots = []
    r = 0
    for col in range(m):
        piv = None
        for i in range(r, n):
            if R[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        if rhs is not None:
            rhs[r], rhs[piv] = rhs[piv], rhs[r]
        inv = 1 / R[r][col]
        R[r] = [x * inv for x in R[r]]
        if rhs is not None:
            rhs[r] *= inv
        for i in range(n):
            if i != r and R[i][col] != 0:
                c = R[i][col]
                R[i] = [x - c * y for x, y in zip(R[i], R[r])]
                if rhs is not None:
                    rhs[i] -= c * rhs[r]
        pivots.append(col)
        r += 1
        if r == n:
            break
    return R, pivots, rhs


def solve_rational(A, b):
    """Solve A x = b over the rationals.

    Returns (x, kernel_basis) where x is one particular solution (or None
    when the system is inconsistent) and kernel_basis spans ker(A).
    """
    if not A:
        return [], []
    m = len(A[0])
    R, pivots, rhs = rational_rref(A, b)
    r = len(pivots)
    for i in range(r, len(R)):
        if rhs[i] != 0:
            return None, rational_kernel(A)
    x = [Fraction(0)] * m
    for i, col in enumerate(pivots):
        x[col] = rhs[i]
    return x, _kernel_from_rref(R, pivots, m)


def rational_kernel(A):
    if not A:
        return []
    m = len(A[0])
    R, pivots, _ = rational_rref(A)
    return _kernel_from_rref(R, pivots, m)


def _kernel_from_rref(R, pivots, m):
    free = [j for j in range(m) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * m
        v[f] = Fraction(1)
        for i, col in enumerate(pivots):
            v[col] = -R[i][f]
        basis.append(tuple(v))
    return basis


def rank(A):
    if not A:
        return 0
    _, pivots, _ = rational_rref(A)
    return len(pivots)


def det_fraction(A):
    """Determinant of a square matrix over Fraction (Gaussian elimination)."""
    n = len(A)
    if n == 0:
        return Fraction(1)
    M = [[Fraction(x) for x in row] for row in A]
    det = Fraction(1)
    for col in range(n):
        piv = None
        for i in range(col, n):
            if M[i][col] != 0:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det *= M[col][col]
        inv = 1 / M[col][col]
        for i in range(col + 1, n):
            if M[i][col] != 0:
                c = M[i][col] * inv
                M[i] = [x - c * y for x, y in zip(M[i], M[col])]
    return det


def integral_solve(M, b):
    """Solve M x = b over the integers.

    Returns (x, kernel_basis, obstruction).  When an integral solution
    exists, x is one and obstruction is None.  Otherwise x is None and
    obstruction is either ("rational", i) for a row proving rational
    inconsistency, or ("torsion", u, d, res) exhibiting an integer
    functional u with u*M = 0 mod d but u*b = res != 0 mod d.
    """
    U, S, V, _ = smith_with_vinv(M)
    n = len(M)
    m = len(M[0]) if M else 0
    y = mat_vec(U, list(b))
    r = sum(1 for i in range(min(n, m)) if S[i][i] != 0)
    for i in range(r, n):
        if y[i] != 0:
            return None, _integer_kernel_from_snf(S, V, m, r), ("rational", i)
    z = []
    for i in range(r):
        d = S[i][i]
        if y[i] % d != 0:
            return None, _integer_kernel_from_snf(S, V, m, r), (
                "torsion", tuple(U[i]), d, y[i] % d)
        z.append(y[i] // d)
    z += [0] * (m - r)
    x = mat_vec(V, z)
    return x, _integer_kernel_from_snf(S, V, m, r), None


def _integer_kernel_from_snf(S, V, m, r):
    # kernel basis: columns r..m-1 of V
    return [tuple(V[i][j] for i in range(m)) for j in range(r, m)]
