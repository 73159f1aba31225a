"""Exact rational dense linear algebra for boundary-indexed matrices.

Matrices carry Fraction entries; rows and columns are addressed by
1-based labels so that the submatrix notation of minors with deletions
reads exactly like the algebra: delta(m, ground, delRows, delCols) is
the determinant of the ground block with those labels removed, with the
convention that the empty determinant is 1.

Also home to the two Grassmann-Plucker-style checks used everywhere
downstream and the exchange identity for limiting minors.
"""

import math
from fractions import Fraction

__all__ = [
    "Matrix",
    "determinant",
    "delta",
    "circular_minor",
    "check_gp1",
    "check_gp2",
    "check_limiting_identity",
    "limiting_ground",
    "rand_fraction",
    "rand_matrix",
    "rand_symmetric",
    "rand_symmetric_zero_sum",
]


class Matrix:
    """Immutable exact matrix; entries are Fractions, labels 1-based."""

    __slots__ = ("entries",)

    def __init__(self, rows):
        self.entries = tuple(tuple(Fraction(x) for x in row) for row in rows)
        widths = {len(r) for r in self.entries}
        if len(widths) > 1:
            raise ValueError("ragged rows: %s" % sorted(widths))

    @property
    def nrows(self):
        return len(self.entries)

    @property
    def ncols(self):
        return len(self.entries[0]) if self.entries else 0

    def entry(self, i, j):
        """Entry at row label i, column label j (1-based)."""
        if not (1 <= i <= self.nrows and 1 <= j <= self.ncols):
            raise ValueError("entry (%d,%d) outside %dx%d matrix"
                             % (i, j, self.nrows, self.ncols))
        return self.entries[i - 1][j - 1]

    def submatrix(self, row_labels, col_labels):
        return Matrix([[self.entry(i, j) for j in col_labels] for i in row_labels])

    def is_symmetric(self):
        return (self.nrows == self.ncols
                and all(self.entries[i][j] == self.entries[j][i]
                        for i in range(self.nrows) for j in range(i)))

    def det(self):
        return determinant(self)

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return "Matrix(%d x %d)" % (self.nrows, self.ncols)


def _int_bareiss(a):
    # fraction-free elimination on an integer grid; returns the determinant
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
        prev = pivot
    return sign * a[-1][-1]


def determinant(m):
    """Exact determinant; the 0x0 determinant is 1."""
    if m.nrows != m.ncols:
        raise ValueError("determinant of %dx%d matrix" % (m.nrows, m.ncols))
    if m.nrows == 0:
        return Fraction(1)
    scale = Fraction(1)
    grid = []
    for row in m.entries:
        L = math.lcm(*(x.denominator for x in row))
        scale *= L
        grid.append([int(x * L) for x in row])
    return Fraction(_int_bareiss(grid), 1) / scale


def delta(m, g, delRows=(), delCols=()):
    """Minor with deletions relative to a ground set.

    g = (rowLabels, colLabels), both ordered label lists into m.  The
    result is det of the ground block after removing the rows in delRows
    and the columns in delCols (which must be ground labels); deleting
    everything leaves the empty determinant 1.
    """
    row_labels, col_labels = g
    dr, dc = set(delRows), set(delCols)
    if not dr <= set(row_labels):
        raise ValueError("deleted rows %s not in ground rows %s"
                         % (sorted(dr - set(row_labels)), list(row_labels)))
    if not dc <= set(col_labels):
        raise ValueError("deleted columns %s not in ground columns %s"
                         % (sorted(dc - set(col_labels)), list(col_labels)))
    rows = [i for i in row_labels if i not in dr]
    cols = [j for j in col_labels if j not in dc]
    if len(rows) != len(cols):
        raise ValueError("non-square minor: %d rows vs %d columns"
                         % (len(rows), len(cols)))
    return determinant(m.submatrix(rows, cols))


def circular_minor(m, pair):
    """det of the block with rows P and columns Q of a circular pair.

    On symmetric matrices the value is flip-invariant (reversing both
    row and column order leaves the determinant unchanged).
    """
    if m.nrows != pair.n or m.ncols != pair.n:
        raise ValueError("matrix is %dx%d but pair lives on %d vertices"
                         % (m.nrows, m.ncols, pair.n))
    return determinant(m.submatrix(pair.P, pair.Q))


def check_gp1(m, g, a, b, c, d):
    """Exchange identity on a square ground block.

    With a above b among the ground rows and c left of d among the
    ground columns:

        D{a,c} D{b,d} = D{a,d} D{b,c} + D{ab,cd} D{,}

    holds for every matrix; returns the exact comparison.
    """
    rows, cols = g
    if [rows.index(a), rows.index(b)] != sorted([rows.index(a), rows.index(b)]):
        raise ValueError("row %s is not above %s in %s" % (a, b, rows))
    if [cols.index(c), cols.index(d)] != sorted([cols.index(c), cols.index(d)]):
        raise ValueError("column %s is not left of %s in %s" % (c, d, cols))
    lhs = delta(m, g, [a], [c]) * delta(m, g, [b], [d])
    rhs = (delta(m, g, [a], [d]) * delta(m, g, [b], [c])
           + delta(m, g, [a, b], [c, d]) * delta(m, g))
    return lhs == rhs


def check_gp2(m, g, a, b, c, d):
    """Three-term row exchange on a (k+1) x k ground block.

    With rows a, b, c in top-to-bottom order and d any ground column:

        D{b,} D{ac,d} = D{a,} D{bc,d} + D{c,} D{ab,d}
    """
    rows, cols = g
    if len(rows) != len(cols) + 1:
        raise ValueError("ground must have one more row than columns, got %dx%d"
                         % (len(rows), len(cols)))
    ia, ib, ic = rows.index(a), rows.index(b), rows.index(c)
    if not ia < ib < ic:
        raise ValueError("rows %s,%s,%s not in top-to-bottom order in %s"
                         % (a, b, c, rows))
    if d not in cols:
        raise ValueError("column %s not in ground columns %s" % (d, cols))
    lhs = delta(m, g, [b]) * delta(m, g, [a, c], [d])
    rhs = (delta(m, g, [a]) * delta(m, g, [b, c], [d])
           + delta(m, g, [c]) * delta(m, g, [a, b], [d]))
    return lhs == rhs


def limiting_ground(n, k):
    """The (k+1) x (k+2) ground set and labels used by the splitter identity.

    Rows n/2, ..., n/2+k; columns 2, 1, n, n-1, ..., n-k+1; distinguished
    labels b = n/2+k-1, c = n/2+k, d = 2, e = 1, f = n-k+2 (mod n),
    g = n-k+1.  Requires even n and labels distinct within each list.
    """
    if n % 2 or n < 6:
        raise ValueError("need even n >= 6, got %d" % n)
    if k < 1:
        raise ValueError("need k >= 1, got %d" % k)
    rows = [n // 2 + i for i in range(k + 1)]
    cols = [2, 1] + [n - i for i in range(k)]
    if rows[-1] > n or len(set(cols)) != len(cols):
        raise ValueError("ground set invalid for n=%d, k=%d" % (n, k))
    b, c = n // 2 + k - 1, n // 2 + k
    d, e = 2, 1
    f = (n - k + 2 - 1) % n + 1
    g = n - k + 1
    return (rows, cols), (b, c, d, e, f, g)


def check_limiting_identity(m, n, k):
    """Exchange identity at a limiting minor of size k on n vertices.

    Checks, with the ground and labels from limiting_ground, that

        D{,d} D{c,fg} D{bc,deg} + D{,g} D{c,de} D{bc,dfg}
            = D{c,dg} * (D{b,de} D{c,fg} - D{b,fg} D{c,de})

    i.e. the exchange polynomial at the limiting variable D{c,dg} factors
    with the stated quotient.
    """
    if m.nrows != n or m.ncols != n:
        raise ValueError("matrix is %dx%d but n = %d" % (m.nrows, m.ncols, n))
    ground, (b, c, d, e, f, g) = limiting_ground(n, k)
    lhs = (delta(m, ground, [], [d]) * delta(m, ground, [c], [f, g])
           * delta(m, ground, [b, c], [d, e, g])
           + delta(m, ground, [], [g]) * delta(m, ground, [c], [d, e])
           * delta(m, ground, [b, c], [d, f, g]))
    rhs = delta(m, ground, [c], [d, g]) * (
        delta(m, ground, [b], [d, e]) * delta(m, ground, [c], [f, g])
        - delta(m, ground, [b], [f, g]) * delta(m, ground, [c], [d, e]))
    return lhs == rhs


# --- random exact matrices -------------------------------------------------

def rand_fraction(rng):
    """Small random rational; numerator in [-9,9], denominator in [1,9]."""
    return Fraction(rng.randint(-9, 9), rng.randint(1, 9))


def rand_matrix(rng, nrows, ncols=None):
    if ncols is None:
        ncols = nrows
    return Matrix([[rand_fraction(rng) for _ in range(ncols)]
                   for _ in range(nrows)])


def rand_symmetric(rng, n):
    a = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            a[i][j] = a[j][i] = rand_fraction(rng)
    return Matrix(a)


def rand_symmetric_zero_sum(rng, n):
    """Random symmetric matrix with zero row (and column) sums.

    Off-diagonal entries are random; each diagonal entry balances its
    row.  This is the shape of a response matrix without the sign
    constraints, which is enough for generic identity checking.
    """
    a = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            a[i][j] = a[j][i] = rand_fraction(rng)
    for i in range(n):
        a[i][i] = -sum(a[i][j] for j in range(n) if j != i)
    return Matrix(a)
