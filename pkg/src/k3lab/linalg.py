"""Exact linear algebra over the integers and the rationals.

Matrices are plain lists of rows.  Rational entries are ``Fraction``;
integer entries may be ``int``.  Nothing here rounds.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Matrix = list  # list[list[Fraction | int]]


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> Matrix:
    return [[Fraction(0)] * n for _ in range(m)]


def transpose(a: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*a)]


def _integerize(a: Sequence[Sequence]) -> tuple[list[list[int]], int]:
    """Write ``a`` as ``ints / den`` with one common denominator."""
    den = 1
    for row in a:
        for x in row:
            if isinstance(x, Fraction) and x.denominator != 1:
                den = lcm(den, x.denominator)
    if den == 1:
        return [[int(x) for x in row] for row in a], 1
    return [[int(x * den) for x in row] for row in a], den


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    ai, da = _integerize(a)
    bi, db = _integerize(b)
    bt = list(zip(*bi))
    den = da * db
    out = []
    for row in ai:
        nz = [(k, x) for k, x in enumerate(row) if x]
        new = []
        for col in bt:
            s = 0
            for k, x in nz:
                s += x * col[k]
            new.append(Fraction(s, den) if den != 1 else Fraction(s))
        out.append(new)
    return out


def matvec(a: Sequence[Sequence], x: Sequence) -> list[Fraction]:
    return [sum((r * c for r, c in zip(row, x) if r), Fraction(0)) for row in a]


def mat_add(a: Sequence[Sequence], b: Sequence[Sequence], scale=1) -> Matrix:
    return [[x + scale * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a: Sequence[Sequence], s) -> Matrix:
    return [[x * s for x in row] for row in a]


def is_zero_matrix(a: Sequence[Sequence]) -> bool:
    return all(x == 0 for row in a for x in row)


def mat_pow(a: Sequence[Sequence], k: int) -> Matrix:
    result = identity(len(a))
    for _ in range(k):
        result = matmul(result, a)
    return result


def det(a: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-free (Bareiss) elimination."""
    ai, den = _integerize(a)
    n = len(ai)
    if n == 0:
        return Fraction(1)
    m = [row[:] for row in ai]
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
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return Fraction(sign * m[n - 1][n - 1], den ** n)


def rref(a: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [[Fraction(x) for x in row] for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Sequence[Sequence]) -> int:
    if not a:
        return 0
    return len(rref(a)[1])


def nullspace(a: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of ``{x : a x = 0}`` over the rationals."""
    if not a:
        n = ncols or 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    m, pivots = rref(a)
    n = len(m[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for r, p in enumerate(pivots):
            x[p] = -m[r][f]
        basis.append(x)
    return basis


def column_space(a: Sequence[Sequence]) -> list[list[Fraction]]:
    """Basis (as vectors) of the span of the columns of ``a``."""
    if not a:
        return []
    _, pivots = rref(a)
    return [[Fraction(row[c]) for row in a] for c in pivots]


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One solution of ``a x = b`` or ``None`` when inconsistent."""
    n = len(a[0])
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    m, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for r, p in enumerate(pivots):
        x[p] = m[r][n]
    return x


def inverse(a: Sequence[Sequence]) -> Matrix:
    n = len(a)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    m, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in m]


def leading_minors(a: Sequence[Sequence]) -> list[Fraction]:
    return [det([row[:k] for row in a[:k]]) for k in range(1, len(a) + 1)]


def is_positive_definite(a: Sequence[Sequence]) -> bool:
    return all(d > 0 for d in leading_minors(a))


def symmetric_signature(a: Sequence[Sequence]) -> tuple[int, int, int]:
    """(positive, negative, zero) counts by symmetric Gaussian elimination.

    Uses congruences only, so the counts are Sylvester invariants.
    """
    m = [[Fraction(x) for x in row] for row in a]
    n = len(m)
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if m[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i != j and m[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # e_i -> e_i + e_j gives diagonal 2 m_ij != 0
            for k in active:
                m[i][k] += m[j][k]
            for k in active:
                m[k][i] += m[k][j]
            piv = i
        d = m[piv][piv]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        # Schur complement on the remaining block
        col = [(i, m[i][piv] / d) for i in active if m[i][piv] != 0]
        row = m[piv]
        for i, f in col:
            mi = m[i]
            for k in active:
                if row[k]:
                    mi[k] -= f * row[k]
    return pos, neg, n - pos - neg


# ---------------------------------------------------------------------------
# integer matrices


def integer_kernel(a: Sequence[Sequence[int]], ncols: int | None = None) -> list[list[int]]:
    """A Z-basis of ``{x in Z^n : a x = 0}`` via Hermite-style row reduction.

    Rows ``(a[:, j] | e_j)`` are reduced with unimodular row operations on
    the first block; rows whose first block vanishes carry a kernel basis.
    The result spans a saturated sublattice.
    """
    m = len(a)
    n = len(a[0]) if m else (ncols or 0)
    rows = [[int(a[i][j]) for i in range(m)] + [int(j == k) for k in range(n)] for j in range(n)]
    top = 0
    for c in range(m):
        while True:
            nz = [r for r in range(top, n) if rows[r][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda r: abs(rows[r][c]))
            rows[top], rows[p] = rows[p], rows[top]
            piv = rows[top][c]
            done = True
            for r in range(top + 1, n):
                if rows[r][c]:
                    q = rows[r][c] // piv
                    rows[r] = [x - q * y for x, y in zip(rows[r], rows[top])]
                    if rows[r][c]:
                        done = False
            if done:
                top += 1
                break
        if top == n:
            break
    kernel = [row[m:] for row in rows[top:]]
    return _size_reduce(kernel)


def _size_reduce(basis: list[list[int]]) -> list[list[int]]:
    # cheap pairwise reduction; keeps entries small without changing the span
    basis = [b[:] for b in basis]
    changed = True
    while changed:
        changed = False
        for i in range(len(basis)):
            for j in range(len(basis)):
                if i == j:
                    continue
                bi, bj = basis[i], basis[j]
                nj = sum(x * x for x in bj)
                if nj == 0:
                    continue
                q = round(Fraction(sum(x * y for x, y in zip(bi, bj)), nj))
                if q:
                    cand = [x - q * y for x, y in zip(bi, bj)]
                    if sum(x * x for x in cand) < sum(x * x for x in bi):
                        basis[i] = cand
                        changed = True
    return basis


def smith_invariants(a: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors d_1 | d_2 | ... of an integer matrix."""
    m = [[int(x) for x in row] for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    diag = []
    t = 0
    while t < min(rows, cols):
        entries = [(abs(m[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if m[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        m[t], m[i] = m[i], m[t]
        for row in m:
            row[t], row[j] = row[j], row[t]
        while True:
            piv = m[t][t]
            dirty = False
            for i in range(t + 1, rows):
                q = m[i][t] // piv
                if q:
                    m[i] = [x - q * y for x, y in zip(m[i], m[t])]
                if m[i][t]:
                    dirty = True
            for j in range(t + 1, cols):
                q = m[t][j] // piv
                if q:
                    for row in m:
                        row[j] -= q * row[t]
                if m[t][j]:
                    dirty = True
            if not dirty:
                bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                            if m[i][j] % piv), None)
                if bad is None:
                    break
                m[t] = [x + y for x, y in zip(m[t], m[bad[0]])]
                dirty = True
            entries = [(abs(m[i][j]), i, j) for i in range(t, rows) for j in range(t, cols)
                       if m[i][j] and (i == t or j == t)]
            _, i, j = min(entries)
            m[t], m[i] = m[i], m[t]
            for row in m:
                row[t], row[j] = row[j], row[t]
        diag.append(abs(m[t][t]))
        t += 1
    return diag


def vec_gcd(xs: Iterable[int]) -> int:
    g = 0
    for x in xs:
        g = gcd(g, int(x))
    return g
