"""Exact linear algebra: HNF/SNF over Z and k[t], kernels, field matrices.

Lattices are column spans.  Hermite forms are canonical: pivot rows strictly
increase, pivots are positive (Z) or monic (k[t]), and every entry to the
right of a pivot is reduced modulo it, so two bases span the same lattice
iff their HNFs are identical.  Field matrices are plain tuples of tuples of
exact elements (Fraction, RatFunc, QuadElem) driven by duck typing.
"""

from fractions import Fraction

from .intarith import xgcd
from .poly import Poly


# ---------------------------------------------------------------------------
# integer column HNF / kernel / SNF


def hnf_int(columns: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Canonical column HNF of the lattice spanned by integer columns."""
    if not columns:
        return []
    m = len(columns[0])
    cols = [list(c) for c in columns if any(c)]
    out: list[list[int]] = []
    for row in range(m):
        live = [c for c in cols if c[row] != 0]
        if not live:
            continue
        pivot = live[0]
        for c in live[1:]:
            g, s, t = xgcd(pivot[row], c[row])
            a, b = pivot[row] // g, c[row] // g
            new_pivot = [s * pivot[i] + t * c[i] for i in range(m)]
            new_other = [a * c[i] - b * pivot[i] for i in range(m)]
            pivot[:] = new_pivot
            c[:] = new_other
        cols = [c for c in cols if any(c) and c is not pivot]
        if pivot[row] < 0:
            pivot[:] = [-x for x in pivot]
        # reduce earlier pivot columns against this one
        for c in out:
            q = c[row] // pivot[row]
            if q:
                c[:] = [c[i] - q * pivot[i] for i in range(m)]
        out.append(pivot)
    return [tuple(c) for c in out]


def hnf_solve(columns, target):
    """Integer coordinates of target in a column-HNF basis, else None.

    columns must come out of hnf_int (pivot rows strictly increasing,
    zeros above each pivot); None certifies that target is outside the
    lattice they span.
    """
    if not columns:
        return () if not any(target) else None
    m = len(columns[0])
    residual = list(target)
    coords = []
    for c in columns:
        piv = next(i for i in range(m) if c[i])
        if residual[piv] % c[piv] != 0:
            return None
        q = residual[piv] // c[piv]
        coords.append(q)
        for i in range(m):
            residual[i] -= q * c[i]
    if any(residual):
        return None
    return tuple(coords)


def int_kernel(rows: list[list[int]]) -> list[tuple[int, ...]]:
    """Basis of the integer kernel {x : M x = 0} (columns of solutions)."""
    if not rows:
        return []
    n = len(rows[0])
    # stack identity below M and run column reduction; columns whose M-part
    # vanished carry a kernel basis in the identity part
    cols = [
        tuple(rows[i][j] for i in range(len(rows)))
        + tuple(1 if k == j else 0 for k in range(n))
        for j in range(n)
    ]
    m = len(rows)
    reduced = _hnf_int_partial(cols, m)
    out = []
    for c in reduced:
        if all(x == 0 for x in c[:m]):
            vec = c[m:]
            if any(vec):
                out.append(vec)
    return out


def _hnf_int_partial(columns, pivot_rows):
    """Column HNF where only the first pivot_rows rows are eliminated."""
    m = len(columns[0])
    cols = [list(c) for c in columns]
    done: list[list[int]] = []
    for row in range(pivot_rows):
        live = [c for c in cols if c[row] != 0]
        if not live:
            continue
        pivot = live[0]
        for c in live[1:]:
            g, s, t = xgcd(pivot[row], c[row])
            a, b = pivot[row] // g, c[row] // g
            new_pivot = [s * pivot[i] + t * c[i] for i in range(m)]
            new_other = [a * c[i] - b * pivot[i] for i in range(m)]
            pivot[:] = new_pivot
            c[:] = new_other
        cols.remove(pivot)
        done.append(pivot)
    return [tuple(c) for c in done + cols]


def snf_int(mat: list[list[int]]):
    """(D, L, R) with L * mat * R = D in Smith normal form, L, R unimodular.

    D is rectangular diagonal with d_1 | d_2 | ... >= 0.
    """
    m = len(mat)
    n = len(mat[0]) if m else 0
    A = [list(r) for r in mat]
    L = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    R = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def row_op(i, j, s, t, a, b):
        # (row_i, row_j) <- (s*row_i + t*row_j, a*row_j - b*row_i)
        for M in (A, L):
            ri = [s * M[i][k] + t * M[j][k] for k in range(len(M[i]))]
            rj = [a * M[j][k] - b * M[i][k] for k in range(len(M[i]))]
            M[i], M[j] = ri, rj

    def col_op(i, j, s, t, a, b):
        for M, rows in ((A, m), (R, n)):
            for r in range(rows):
                vi = s * M[r][i] + t * M[r][j]
                vj = a * M[r][j] - b * M[r][i]
                M[r][i], M[r][j] = vi, vj

    def diagonalize():
        k = 0
        while k < min(m, n):
            found = False
            for i in range(k, m):
                for j in range(k, n):
                    if A[i][j]:
                        if i != k:
                            row_op(k, i, 0, 1, 0, -1)
                        if j != k:
                            col_op(k, j, 0, 1, 0, -1)
                        found = True
                        break
                if found:
                    break
            if not found:
                return
            while True:
                dirty = False
                for i in range(k + 1, m):
                    if A[i][k]:
                        if A[i][k] % A[k][k] == 0:
                            # plain elimination keeps the pivot row fixed;
                            # a Bezout combine here can oscillate forever
                            q = A[i][k] // A[k][k]
                            for M in (A, L):
                                M[i] = [
                                    M[i][col] - q * M[k][col]
                                    for col in range(len(M[i]))
                                ]
                        else:
                            g, s, t = xgcd(A[k][k], A[i][k])
                            row_op(k, i, s, t, A[k][k] // g, A[i][k] // g)
                            dirty = True
                for j in range(k + 1, n):
                    if A[k][j]:
                        if A[k][j] % A[k][k] == 0:
                            q = A[k][j] // A[k][k]
                            for r in range(m):
                                A[r][j] -= q * A[r][k]
                            for r in range(n):
                                R[r][j] -= q * R[r][k]
                        else:
                            g, s, t = xgcd(A[k][k], A[k][j])
                            col_op(k, j, s, t, A[k][k] // g, A[k][j] // g)
                            dirty = True
                if not dirty:
                    break
            k += 1

    diagonalize()
    while True:
        bad = None
        for k in range(min(m, n)):
            if A[k][k] == 0:
                continue
            for j in range(k + 1, min(m, n)):
                if A[j][j] % A[k][k] != 0:
                    bad = (k, j)
                    break
            if bad:
                break
        if bad is None:
            break
        k, j = bad
        col_op(k, j, 1, 1, 1, 0)  # col_k += col_j, then re-diagonalize
        diagonalize()
    for k in range(min(m, n)):
        if A[k][k] < 0:
            for r in range(m):
                A[r][k] = -A[r][k]
            for r in range(n):
                R[r][k] = -R[r][k]
    return A, L, R


def int_mat_inverse_unimodular(M: list[list[int]]) -> list[list[int]]:
    """Inverse of a unimodular integer matrix, exact via adjugate."""
    n = len(M)
    det = _int_det(M)
    assert det in (1, -1), "matrix is not unimodular"
    adj = [
        [_cofactor(M, j, i) for j in range(n)]  # transpose of cofactors
        for i in range(n)
    ]
    return [[adj[i][j] * det for j in range(n)] for i in range(n)]


def _int_det(M):
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if A[i][k]), None)
        if piv is None:
            return 0
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            det = -det
        det *= A[k][k]
        inv = 1 / A[k][k]
        for i in range(k + 1, n):
            f = A[i][k] * inv
            if f:
                A[i] = [A[i][j] - f * A[k][j] for j in range(n)]
    assert det.denominator == 1
    return det.numerator


def _cofactor(M, i, j):
    minor = [
        [M[r][c] for c in range(len(M)) if c != j]
        for r in range(len(M)) if r != i
    ]
    if not minor:
        return 1
    return (-1) ** (i + j) * _int_det(minor)


# ---------------------------------------------------------------------------
# polynomial column HNF / kernel (coefficients in F_p or Q)


def _coeff_inverse(p, c):
    if p is None:
        return Fraction(1) / c
    return pow(c, p - 2, p)


def hnf_poly(columns: list[tuple[Poly, ...]]) -> list[tuple[Poly, ...]]:
    """Canonical column HNF over k[t]: monic pivots, right entries reduced."""
    if not columns:
        return []
    m = len(columns[0])
    cols = [list(c) for c in columns if any(not x.is_zero() for x in c)]
    out: list[list[Poly]] = []
    for row in range(m):
        live = [c for c in cols if not c[row].is_zero()]
        if not live:
            continue
        # Euclidean elimination on the row entries
        while len(live) > 1:
            live.sort(key=lambda c: c[row].degree())
            small, big = live[0], live[1]
            q = big[row] // small[row]
            for i in range(m):
                big[i] = big[i] - q * small[i]
            live = [c for c in live if not c[row].is_zero()]
        pivot = live[0]
        cols = [c for c in cols if c is not pivot and any(not x.is_zero() for x in c)]
        inv = Poly.const(pivot[row].p, _coeff_inverse(pivot[row].p, pivot[row].lc()))
        for i in range(m):
            pivot[i] = inv * pivot[i]
        for c in out:
            q = c[row] // pivot[row]
            if not q.is_zero():
                for i in range(m):
                    c[i] = c[i] - q * pivot[i]
        out.append(pivot)
    return [tuple(c) for c in out]


def poly_kernel(rows: list[list[Poly]]) -> list[tuple[Poly, ...]]:
    """Basis of {x in k[t]^n : M x = 0} as columns."""
    if not rows:
        return []
    n = len(rows[0])
    p = rows[0][0].p
    one, zero = Poly.one(p), Poly.zero(p)
    cols = [
        tuple(rows[i][j] for i in range(len(rows)))
        + tuple(one if k == j else zero for k in range(n))
        for j in range(n)
    ]
    m = len(rows)
    # partial HNF clearing only the M-rows
    work = [list(c) for c in cols]
    done = []
    for row in range(m):
        live = [c for c in work if not c[row].is_zero()]
        if not live:
            continue
        while len(live) > 1:
            live.sort(key=lambda c: c[row].degree())
            small, big = live[0], live[1]
            q = big[row] // small[row]
            for i in range(len(big)):
                big[i] = big[i] - q * small[i]
            live = [c for c in live if not c[row].is_zero()]
        pivot = live[0]
        work = [c for c in work if c is not pivot]
        done.append(pivot)
    out = []
    for c in work:
        if all(x.is_zero() for x in c[:m]) and any(not x.is_zero() for x in c[m:]):
            out.append(tuple(c[m:]))
    return out


# ---------------------------------------------------------------------------
# generic matrices over an exact field (duck-typed entries)


def mat_from_rows(rows) -> tuple:
    return tuple(tuple(r) for r in rows)


def mat_identity(n: int, one, zero) -> tuple:
    return tuple(
        tuple(one if i == j else zero for j in range(n)) for i in range(n)
    )


def mat_mul(A, B) -> tuple:
    n, k, m = len(A), len(B), len(B[0])
    assert len(A[0]) == k
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = A[i][0] * B[0][j]
            for s in range(1, k):
                acc = acc + A[i][s] * B[s][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_scalar(A, c) -> tuple:
    return tuple(tuple(c * x for x in row) for row in A)


def mat_transpose(A) -> tuple:
    return tuple(tuple(A[i][j] for i in range(len(A))) for j in range(len(A[0])))


def _is_zero_entry(x) -> bool:
    if hasattr(x, "is_zero"):
        return x.is_zero()
    return x == 0


def mat_det(A):
    """Determinant by fraction-full Gaussian elimination (field entries)."""
    n = len(A)
    M = [list(r) for r in A]
    det = None
    sign = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if not _is_zero_entry(M[i][k])), None)
        if piv is None:
            z = M[0][0] - M[0][0]
            return z
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            sign = -sign
        det = M[k][k] if det is None else det * M[k][k]
        for i in range(k + 1, n):
            if not _is_zero_entry(M[i][k]):
                f = M[i][k] / M[k][k]
                M[i] = [M[i][j] - f * M[k][j] for j in range(n)]
    if sign < 0:
        det = -det
    return det


def mat_inv(A) -> tuple:
    """Inverse over the entry field by Gauss-Jordan; raises on singular."""
    n = len(A)
    M = [list(r) for r in A]
    one_candidates = [x for row in A for x in row if not _is_zero_entry(x)]
    if not one_candidates:
        raise ZeroDivisionError("singular matrix")
    one = one_candidates[0] / one_candidates[0]
    zero = one - one
    I = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for k in range(n):
        piv = next((i for i in range(k, n) if not _is_zero_entry(M[i][k])), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            I[k], I[piv] = I[piv], I[k]
        inv = one / M[k][k]
        M[k] = [x * inv for x in M[k]]
        I[k] = [x * inv for x in I[k]]
        for i in range(n):
            if i != k and not _is_zero_entry(M[i][k]):
                f = M[i][k]
                M[i] = [M[i][j] - f * M[k][j] for j in range(n)]
                I[i] = [I[i][j] - f * I[k][j] for j in range(n)]
    return tuple(tuple(r) for r in I)


def mat_solve(A, b):
    """Solve A x = b for a column vector b over the entry field."""
    Ainv = mat_inv(A)
    return tuple(
        _dot(Ainv[i], b) for i in range(len(Ainv))
    )


def _dot(row, vec):
    acc = row[0] * vec[0]
    for i in range(1, len(row)):
        acc = acc + row[i] * vec[i]
    return acc


def mat_eq(A, B) -> bool:
    if len(A) != len(B):
        return False
    for ra, rb in zip(A, B):
        if len(ra) != len(rb):
            return False
        for x, y in zip(ra, rb):
            if not _is_zero_entry(x - y):
                return False
    return True
