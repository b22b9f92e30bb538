"""Exact integer linear algebra: Hermite forms and certified Smith normal form.

Everything here runs on arbitrary-precision Python integers.  Matrices are
sequences of rows; the functions return immutable tuple-of-tuples matrices.
Entry growth during pivoting is harmless (no overflow exists), and every
Smith normal form is re-verified against its own certificate before it is
returned.
"""

from bisect import bisect_left
from dataclasses import dataclass


def xgcd(a, b):
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b == g.

    >>> xgcd(12, -8)
    (4, 1, 1)
    """
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


def freeze(matrix):
    return tuple(tuple(int(x) for x in row) for row in matrix)


def identity(k):
    return tuple(tuple(1 if i == j else 0 for j in range(k)) for i in range(k))


def mat_mul(A, B):
    cols_b = len(B[0]) if B else 0
    return tuple(
        tuple(sum(a_ik * B[k][j] for k, a_ik in enumerate(row)) for j in range(cols_b))
        for row in A)


def transpose(A):
    return tuple(zip(*A)) if A else ()


def bareiss_det(A):
    """Exact determinant by fraction-free elimination."""
    n = len(A)
    if n == 0:
        return 1
    if any(len(row) != n for row in A):
        raise ValueError("determinant of a non-square matrix")
    m = [list(row) for row in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // prev
        prev = pivot
    return sign * m[-1][-1]


def hermite_columns(cols, dim):
    """Canonical column basis of the integer lattice spanned by ``cols``.

    ``cols`` is any spanning list of length-``dim`` integer vectors whose
    span has full rank.  The result is the unique ``dim`` x ``dim``
    upper-triangular matrix (as rows) with positive diagonal pivots and,
    for i < j, 0 <= H[i][j] < H[i][i]; its columns span the same lattice.
    """
    work = [list(c) for c in cols]
    if any(len(c) != dim for c in work):
        raise ValueError("column of wrong length")
    pivot_for_row = [None] * dim
    for row in range(dim - 1, -1, -1):
        carrier = None
        for col in work:
            if col[row] == 0:
                continue
            if carrier is None:
                carrier = col
                continue
            a, b = carrier[row], col[row]
            if b % a == 0:
                q = b // a
                for k in range(row + 1):
                    col[k] -= q * carrier[k]
            elif a % b == 0:
                q = a // b
                for k in range(row + 1):
                    carrier[k], col[k] = col[k], carrier[k] - q * col[k]
            else:
                g, x, y = xgcd(a, b)
                ag, mbg = a // g, -(b // g)
                for k in range(row + 1):
                    ck, dk = carrier[k], col[k]
                    carrier[k] = x * ck + y * dk
                    col[k] = mbg * ck + ag * dk
        if carrier is None:
            raise ValueError("columns do not span a full-rank lattice")
        if carrier[row] < 0:
            for k in range(row + 1):
                carrier[k] = -carrier[k]
        work.remove(carrier)
        pivot_for_row[row] = carrier
    if any(any(col) for col in work):
        raise AssertionError("leftover columns not reduced to zero")
    H = [[pivot_for_row[j][i] for j in range(dim)] for i in range(dim)]
    # Reduce above-diagonal entries with the pivot column of their row.
    for j in range(dim):
        for i in range(j - 1, -1, -1):
            q = H[i][j] // H[i][i]
            if q:
                for r in range(i + 1):
                    H[r][j] -= q * H[r][i]
    return freeze(H)


def solve_upper_triangular(H, v):
    """Solve H*c = v over the integers for upper-triangular H, or None."""
    n = len(H)
    c = [0] * n
    for i in range(n - 1, -1, -1):
        rem = v[i] - sum(H[i][j] * c[j] for j in range(i + 1, n))
        if rem % H[i][i]:
            return None
        c[i] = rem // H[i][i]
    return c


class RowLattice:
    """Integer row lattice in echelon form, supporting membership tests."""

    def __init__(self, ncols, rows=()):
        self.ncols = ncols
        self.rows = []          # echelon rows, pivot columns strictly increasing
        self.pivot_cols = []
        for row in rows:
            self.add(row)

    def add(self, row):
        vec = list(row)
        if len(vec) != self.ncols:
            raise ValueError("row of wrong length")
        for j in range(self.ncols):
            if vec[j] == 0:
                continue
            if j not in self.pivot_cols:
                if vec[j] < 0:
                    vec = [-x for x in vec]
                where = bisect_left(self.pivot_cols, j)
                self.pivot_cols.insert(where, j)
                self.rows.insert(where, vec)
                return
            p = self.pivot_cols.index(j)
            base = self.rows[p]
            a, b = base[j], vec[j]
            if b % a == 0:
                q = b // a
                vec = [x - q * y for x, y in zip(vec, base)]
            else:
                g, x, y = xgcd(a, b)
                ag, mbg = a // g, -(b // g)
                new_base = [x * u + y * v for u, v in zip(base, vec)]
                vec = [mbg * u + ag * v for u, v in zip(base, vec)]
                self.rows[p] = new_base

    def contains(self, row):
        vec = list(row)
        if len(vec) != self.ncols:
            raise ValueError("row of wrong length")
        for j in range(self.ncols):
            if vec[j] == 0:
                continue
            if j not in self.pivot_cols:
                return False
            base = self.rows[self.pivot_cols.index(j)]
            if vec[j] % base[j]:
                return False
            q = vec[j] // base[j]
            vec = [x - q * y for x, y in zip(vec, base)]
        return True


@dataclass(frozen=True)
class SnfCertificate:
    """A Smith normal form together with the transforms that witness it.

    U*M*V = D holds exactly, U and V are unimodular, and the diagonal of D
    is non-negative with each entry dividing the next.
    """

    matrix: tuple
    U: tuple
    D: tuple
    V: tuple

    @property
    def diagonal(self):
        return tuple(self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0)))

    def nonzero_diagonal(self):
        return tuple(d for d in self.diagonal if d != 0)


def _verify_certificate(cert):
    if mat_mul(mat_mul(cert.U, cert.matrix), cert.V) != cert.D:
        raise AssertionError("certificate identity U*M*V = D failed")
    if abs(bareiss_det(cert.U)) != 1 or abs(bareiss_det(cert.V)) != 1:
        raise AssertionError("transform matrix is not unimodular")
    diag = cert.diagonal
    for i in range(len(diag)):
        if diag[i] < 0:
            raise AssertionError("negative diagonal entry")
        if i + 1 < len(diag) and diag[i] != 0 and diag[i + 1] % diag[i]:
            raise AssertionError("divisibility chain broken")
        if i + 1 < len(diag) and diag[i] == 0 and diag[i + 1] != 0:
            raise AssertionError("zero precedes nonzero on the diagonal")
    rows, cols = len(cert.D), len(cert.D[0]) if cert.D else 0
    for i in range(rows):
        for j in range(cols):
            if i != j and cert.D[i][j] != 0:
                raise AssertionError("off-diagonal entry in D")


def smith_normal_form(M):
    """Certified Smith normal form of an integer matrix.

    Pivots are chosen deterministically: smallest nonzero absolute value,
    ties broken by the lowest (row, column) position.  The returned
    certificate has been re-verified by exact multiplication.

    >>> cert = smith_normal_form([[2, 0], [0, 3]])
    >>> cert.diagonal
    (1, 6)
    """
    M = freeze(M)
    nrows = len(M)
    ncols = len(M[0]) if nrows else 0
    D = [list(row) for row in M]
    U = [list(row) for row in identity(nrows)]
    V = [list(row) for row in identity(ncols)]

    def row_swap(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def row_add(i, j, t):
        # row i += t * row j
        D[i] = [a + t * b for a, b in zip(D[i], D[j])]
        U[i] = [a + t * b for a, b in zip(U[i], U[j])]

    def row_negate(i):
        D[i] = [-a for a in D[i]]
        U[i] = [-a for a in U[i]]

    def col_swap(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def col_add(i, j, t):
        # col i += t * col j
        for row in D:
            row[i] += t * row[j]
        for row in V:
            row[i] += t * row[j]

    def find_pivot(t):
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                e = D[i][j]
                if e and (best is None or abs(e) < abs(D[best[0]][best[1]])):
                    best = (i, j)
        return best

    for t in range(min(nrows, ncols)):
        while True:
            pos = find_pivot(t)
            if pos is None:
                break
            row_swap(t, pos[0])
            col_swap(t, pos[1])
            # Clear column t, then row t.  Non-divisible entries leave a
            # smaller remainder behind, so the pivot shrinks and the loop
            # terminates.
            dirty = False
            for i in range(t + 1, nrows):
                if D[i][t]:
                    q = D[i][t] // D[t][t]
                    row_add(i, t, -q)
                    if D[i][t]:
                        dirty = True
            for j in range(t + 1, ncols):
                if D[t][j]:
                    q = D[t][j] // D[t][t]
                    col_add(j, t, -q)
                    if D[t][j]:
                        dirty = True
            if dirty:
                continue
            # Pivot must divide the rest of the submatrix for the
            # divisibility chain; fold an offending row in and retry.
            offender = None
            for i in range(t + 1, nrows):
                for j in range(t + 1, ncols):
                    if D[i][j] % D[t][t]:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_add(t, offender, 1)
        if pos is None:
            break
        if D[t][t] < 0:
            row_negate(t)

    cert = SnfCertificate(M, freeze(U), freeze(D), freeze(V))
    _verify_certificate(cert)
    return cert


def invariant_factors(M, ncols=None):
    """(torsion invariant factors > 1, free rank) of Z^cols / row lattice."""
    M = freeze(M)
    if ncols is None:
        if not M:
            raise ValueError("ncols required for an empty matrix")
        ncols = len(M[0])
    if not M:
        return (), ncols
    cert = smith_normal_form(M)
    nonzero = cert.nonzero_diagonal()
    factors = tuple(d for d in nonzero if d > 1)
    return factors, ncols - len(nonzero)
