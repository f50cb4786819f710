"""Exact dense linear algebra over the integers and rationals.

Matrices are plain lists of rows. Entries are Python ``int`` or
``fractions.Fraction``; nothing here ever touches floating point. A matrix
with zero rows is represented by ``[]`` and behaves as the empty matrix
(determinant of the 0x0 matrix and vol^2 of a 0xn matrix are both 1).
"""

from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd

from .errors import ArgumentError, DimensionError

# Cofactor expansion is cheaper than elimination for tiny matrices.
_COFACTOR_MAX = 4


def shape(A):
    rows = len(A)
    cols = len(A[0]) if rows else 0
    for row in A:
        if len(row) != cols:
            raise DimensionError("ragged matrix")
    return rows, cols


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(m, n):
    return [[0] * n for _ in range(m)]


def transpose(A):
    return [list(col) for col in zip(*A)]


def matmul(A, B):
    if A and B and len(A[0]) != len(B):
        raise DimensionError(f"cannot multiply {shape(A)} by {shape(B)}")
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A, v):
    return [sum(a * b for a, b in zip(row, v)) for row in A]


def submatrix(A, rows, cols):
    return [[A[i][j] for j in cols] for i in rows]


def _exact_div(x, y):
    if isinstance(x, int) and isinstance(y, int):
        q, rem = divmod(x, y)
        assert rem == 0, "Bareiss division must be exact"
        return q
    return Fraction(x) / y


def _det_cofactor(A):
    n = len(A)
    if n == 0:
        return 1
    if n == 1:
        return A[0][0]
    if n == 2:
        return A[0][0] * A[1][1] - A[0][1] * A[1][0]
    total = 0
    rest = range(1, n)
    for j in range(n):
        if A[0][j]:
            minor = submatrix(A, rest, [k for k in range(n) if k != j])
            total += (-1) ** j * A[0][j] * _det_cofactor(minor)
    return total


def _det_bareiss(A):
    M = [list(row) for row in A]
    n = len(M)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = _exact_div(M[i][j] * M[k][k] - M[i][k] * M[k][j], prev)
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def det(A):
    """Exact determinant of a square integer or rational matrix."""
    n, m = shape(A)
    if n != m:
        raise DimensionError(f"determinant of non-square {n}x{m} matrix")
    if n <= _COFACTOR_MAX:
        return _det_cofactor(A)
    return _det_bareiss(A)


def minor(A, i, j):
    """Determinant of ``A`` with row ``i`` and column ``j`` deleted."""
    n = len(A)
    return det(submatrix(A, [r for r in range(n) if r != i], [c for c in range(n) if c != j]))


def adjugate(A):
    """Classical adjoint: ``A @ adjugate(A) == det(A) * I``."""
    n, m = shape(A)
    if n != m:
        raise DimensionError(f"adjugate of non-square {n}x{m} matrix")
    if n == 0:
        raise DimensionError("adjugate of the empty matrix")
    if n == 1:
        return [[1]]
    return [[(-1) ** (i + j) * minor(A, j, i) for j in range(n)] for i in range(n)]


def xgcd(a, b):
    """Return ``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def _col_combine(M, j, k, a, b, c, d):
    # (col_j, col_k) <- (a*col_j + c*col_k, b*col_j + d*col_k)
    for row in M:
        u, v = row[j], row[k]
        row[j] = a * u + c * v
        row[k] = b * u + d * v


def hnf_with_transform(A):
    """Column-style Hermite normal form with unimodular transform.

    Returns ``(H, U)`` with ``A @ U == H``, ``|det U| == 1`` and ``H`` of the
    shape ``[0 | L]``: the first ``cols - rank`` columns are zero, the
    remaining columns form a lower staircase (each pivot is the topmost
    nonzero entry of its column, pivot rows strictly increase left to
    right), pivots are positive, and every entry to the left of a pivot in
    its row lies in ``[0, pivot)``.
    """
    m, n = shape(A)
    H = [list(row) for row in A]
    U = identity(n)
    k = 0
    for i in range(m):
        if k == n:
            break
        for j in range(k + 1, n):
            b = H[i][j]
            if b == 0:
                continue
            a = H[i][k]
            g, x, y = xgcd(a, b)
            # det [[x, -b/g], [y, a/g]] == 1
            coeffs = (x, -b // g, y, a // g)
            _col_combine(H, k, j, *coeffs)
            _col_combine(U, k, j, *coeffs)
        piv = H[i][k]
        if piv == 0:
            continue
        if piv < 0:
            for M in (H, U):
                for row in M:
                    row[k] = -row[k]
            piv = -piv
        for j in range(k):
            q = H[i][j] // piv
            if q:
                for M in (H, U):
                    for row in M:
                        row[j] -= q * row[k]
        k += 1
    # Move the k pivot columns behind the n - k zero columns.
    order = list(range(k, n)) + list(range(k))
    H = [[row[j] for j in order] for row in H]
    U = [[row[j] for j in order] for row in U]
    return H, U


def integer_kernel(A):
    """Basis of the integer kernel ``{x in Z^n : A x = 0}`` as column vectors.

    The basis is read off the zero columns of the Hermite form, so stacking
    the returned vectors as rows gives a matrix with ``delta == 1``.
    """
    m, n = shape(A)
    if m == 0:
        return [[int(i == j) for i in range(n)] for j in range(n)]
    H, U = hnf_with_transform(A)
    nzero = sum(1 for j in range(n) if all(H[i][j] == 0 for i in range(m)))
    return [[U[i][j] for i in range(n)] for j in range(nzero)]


def maximal_minors(A):
    """Yield ``(cols, minor)`` for every maximal minor of a wide matrix."""
    m, n = shape(A)
    if m > n:
        raise DimensionError(f"maximal minors need rows <= cols, got {m}x{n}")
    rows = range(m)
    for cols in combinations(range(n), m):
        yield cols, det(submatrix(A, rows, cols))


def delta(A):
    """gcd of all maximal minors; zero iff ``A`` is rank deficient."""
    return reduce(gcd, (mnr for _, mnr in maximal_minors(A)), 0)


def vol2(A, weights=None):
    """``det(A W A^T)`` where ``W = diag(weights)`` (identity by default).

    With weights ``w_j = s_j^2`` this is vol^2 of ``A @ diag(s)`` without
    ever forming the (possibly irrational) square roots.
    """
    m, n = shape(A)
    if m > n:
        raise DimensionError(f"vol2 needs rows <= cols, got {m}x{n}")
    if weights is None:
        AW = A
    else:
        if len(weights) != n:
            raise DimensionError("weights length must equal column count")
        AW = [[a * w for a, w in zip(row, weights)] for row in A]
    return det(matmul(AW, transpose(A)))


def vol2_binet_cauchy(A, weights=None):
    """vol^2 as a sum of squared maximal minors (independent cross-check)."""
    m, n = shape(A)
    total = 0
    for cols, mnr in maximal_minors(A):
        w = 1
        if weights is not None:
            for j in cols:
                w *= weights[j]
        total += mnr * mnr * w
    return total


def jacobi_identity_check(A, I, J):
    """Check Jacobi's complementary-minor identity for the adjugate.

    ``det(adj(A)[I, J]) == (-1)^(sum I' + sum J') det(A)^(|I|-1) det(A^T[I', J'])``
    with ``I', J'`` the complements. Indices are 0-based; since
    ``|I'| == |J'|`` the sign agrees with the 1-based statement.
    """
    n, m = shape(A)
    if n != m:
        raise DimensionError("Jacobi identity needs a square matrix")
    I, J = sorted(I), sorted(J)
    if len(I) != len(J) or not I:
        raise ArgumentError("I and J must be nonempty and of equal size")
    for idx in (I, J):
        if len(set(idx)) != len(idx) or any(not 0 <= i < n for i in idx):
            raise ArgumentError(f"malformed index set {idx}")
    Ic = [i for i in range(n) if i not in I]
    Jc = [j for j in range(n) if j not in J]
    lhs = det(submatrix(adjugate(A), I, J))
    sign = (-1) ** (sum(Ic) + sum(Jc))
    rhs = sign * det(A) ** (len(I) - 1) * det(submatrix(transpose(A), Ic, Jc))
    return lhs == rhs


def is_unimodular(U):
    return abs(det(U)) == 1


def is_column_hnf(H):
    """True iff ``H`` has the normal form produced by :func:`hnf_with_transform`."""
    m, n = shape(H)
    cols = [[H[i][j] for i in range(m)] for j in range(n)]
    j = 0
    while j < n and not any(cols[j]):
        j += 1
    last_pivot_row = -1
    first_nonzero = j
    for jj in range(j, n):
        col = cols[jj]
        nz = [i for i in range(m) if col[i] != 0]
        if not nz:
            return False
        p = nz[0]
        if p <= last_pivot_row or col[p] <= 0:
            return False
        for k in range(first_nonzero, jj):
            if not 0 <= H[p][k] < col[p]:
                return False
        last_pivot_row = p
    return True
