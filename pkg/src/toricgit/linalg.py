"""Exact integer linear algebra on arbitrary-precision integers.

Everything here works over Z with Python ints.  The Smith normal form
carries its unimodular transforms so that kernels come out saturated and
cokernels come with an explicit projection onto the free part.  No
floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd


def primitive(vec):
    """Divide an integer vector by the gcd of its entries.

    The zero vector is returned unchanged.  Sign is preserved (no
    normalization), so (-2, 4) -> (-1, 2).
    """
    g = 0
    for x in vec:
        g = gcd(g, x)
    if g <= 1:
        return tuple(vec)
    return tuple(x // g for x in vec)


def sign_normalized(vec):
    """Scale a nonzero integer vector primitive with first nonzero entry > 0."""
    v = primitive(vec)
    for x in v:
        if x > 0:
            return v
        if x < 0:
            return tuple(-y for y in v)
    return v


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix stored as a tuple of row tuples."""

    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged matrix")
        object.__setattr__(self, "entries", rows)

    @property
    def rows(self):
        return len(self.entries)

    @property
    def cols(self):
        return len(self.entries[0]) if self.entries else 0

    @classmethod
    def from_rows(cls, rows):
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def identity(cls, n):
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    def transpose(self):
        return IntMatrix(tuple(zip(*self.entries))) if self.entries else IntMatrix(())

    def mul(self, other):
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        bt = tuple(zip(*other.entries)) if other.entries else ()
        out = tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in bt)
            for row in self.entries
        )
        return IntMatrix(out)

    def column(self, j):
        return tuple(row[j] for row in self.entries)

    def row(self, i):
        return self.entries[i]


@dataclass(frozen=True)
class SmithDecomposition:
    """left * matrix * right == diag, with left and right unimodular.

    diag has the same shape as the input; its diagonal entries are
    nonnegative and each divides the next.
    """

    left: IntMatrix
    diag: IntMatrix
    right: IntMatrix

    def invariant_factors(self):
        n = min(self.diag.rows, self.diag.cols)
        return tuple(self.diag.entries[i][i] for i in range(n))

    def rank(self):
        return sum(1 for d in self.invariant_factors() if d != 0)


def _swap_rows(a, i, j):
    a[i], a[j] = a[j], a[i]


def _add_row(a, dst, src, q):
    a[dst] = [x - q * y for x, y in zip(a[dst], a[src])]


def _swap_cols(a, i, j):
    for row in a:
        row[i], row[j] = row[j], row[i]


def _add_col(a, dst, src, q):
    for row in a:
        row[dst] = row[dst] - q * row[src]


def smith_normal_form(m: IntMatrix) -> SmithDecomposition:
    """Smith normal form with tracked unimodular transforms.

    Classic pivoting: bring the absolutely smallest nonzero entry of the
    working submatrix to the pivot, clear its row and column by division
    with remainder, then repair divisibility by folding in any offending
    entry.  Terminates because the pivot's absolute value strictly drops
    whenever a remainder survives.
    """
    nr, nc = m.rows, m.cols
    a = [list(row) for row in m.entries]
    left = [list(row) for row in IntMatrix.identity(nr).entries]
    right = [list(row) for row in IntMatrix.identity(nc).entries]

    def pivot_search(t):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                v = abs(a[i][j])
                if v and (best is None or v < best[0]):
                    best = (v, i, j)
        return best

    for t in range(min(nr, nc)):
        found = pivot_search(t)
        if found is None:
            break
        _, pi, pj = found
        _swap_rows(a, t, pi)
        _swap_rows(left, t, pi)
        _swap_cols(a, t, pj)
        _swap_cols(right, t, pj)

        while True:
            # clear column t
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    _add_row(a, i, t, q)
                    _add_row(left, i, t, q)
                    if a[i][t]:
                        _swap_rows(a, t, i)
                        _swap_rows(left, t, i)
                        dirty = True
            if dirty:
                continue
            # clear row t
            for j in range(t + 1, nc):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    _add_col(a, j, t, q)
                    _add_col(right, j, t, q)
                    if a[t][j]:
                        _swap_cols(a, t, j)
                        _swap_cols(right, t, j)
                        dirty = True
            if dirty:
                continue
            # divisibility of the trailing block
            offender = None
            for i in range(t + 1, nr):
                for j in range(t + 1, nc):
                    if a[i][j] % a[t][t]:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            _add_row(a, t, offender, -1)
            _add_row(left, t, offender, -1)

        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            left[t] = [-x for x in left[t]]

    out = SmithDecomposition(
        IntMatrix.from_rows(left), IntMatrix.from_rows(a), IntMatrix.from_rows(right)
    )
    assert out.left.mul(m).mul(out.right).entries == out.diag.entries
    return out


def kernel_basis(m: IntMatrix) -> IntMatrix:
    """Basis of the saturated integer kernel, as matrix columns.

    The kernel columns are columns of the right transform sitting over
    zero diagonal entries, hence automatically a basis of the full
    lattice ker(m) cap Z^cols (unimodularity of the transform gives
    saturation for free).
    """
    snf = smith_normal_form(m)
    rank = snf.rank()
    cols = [snf.right.column(j) for j in range(rank, m.cols)]
    if not cols:
        return IntMatrix.from_rows(tuple(() for _ in range(m.cols)))
    return IntMatrix.from_rows(tuple(zip(*cols)))


@dataclass(frozen=True)
class CokernelData:
    """coker(m) = Z^rows / column-span, split into free and torsion parts.

    projection maps Z^rows onto Z^free_rank (rows of the left transform
    over zero invariant factors).  torsion lists the invariant factors
    > 1; torsion_projection holds the matching left-transform rows, to
    be read modulo the factor.
    """

    free_rank: int
    torsion: tuple
    projection: IntMatrix
    torsion_projection: IntMatrix


def cokernel(m: IntMatrix) -> CokernelData:
    snf = smith_normal_form(m)
    rank = snf.rank()
    facs = snf.invariant_factors()
    free_rows = [snf.left.row(i) for i in range(rank, m.rows)]
    tor = tuple(facs[i] for i in range(rank) if facs[i] > 1)
    tor_rows = [snf.left.row(i) for i in range(rank) if facs[i] > 1]
    return CokernelData(
        free_rank=m.rows - rank,
        torsion=tor,
        projection=IntMatrix.from_rows(free_rows),
        torsion_projection=IntMatrix.from_rows(tor_rows),
    )


def det(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = m.rows
    if n != m.cols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    a = [list(row) for row in m.entries]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def matrix_rank(rows) -> int:
    """Rank over Q of a list of integer row vectors."""
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    return smith_normal_form(IntMatrix.from_rows(rows)).rank()


def row_hnf(rows):
    """Canonical (Hermite) basis of the lattice spanned by integer rows.

    Row-style: pivots positive, entries above each pivot reduced into
    [0, pivot).  Zero rows are dropped, so redundant spanning sets are
    fine as input.  The output is the unique canonical basis of the row
    lattice, which makes it usable as a dictionary key.
    """
    h = [list(r) for r in rows if any(r)]
    if not h:
        return ()
    width = len(h[0])
    r = 0
    for j in range(width):
        k = None
        for i in range(r, len(h)):
            if h[i][j]:
                k = i
                break
        if k is None:
            continue
        # gcd-reduce column j among rows r..end
        while True:
            nz = [i for i in range(r, len(h)) if h[i][j]]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda i: abs(h[i][j]))
            p = nz[0]
            for i in nz[1:]:
                q = h[i][j] // h[p][j]
                h[i] = [x - q * y for x, y in zip(h[i], h[p])]
            h[r], h[p] = h[p], h[r]
        nz = [i for i in range(r, len(h)) if h[i][j]]
        if not nz:
            continue
        h[r], h[nz[0]] = h[nz[0]], h[r]
        if h[r][j] < 0:
            h[r] = [-x for x in h[r]]
        for i in range(r):
            q = h[i][j] // h[r][j]
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[r])]
        r += 1
    return tuple(tuple(row) for row in h[:r] if any(row))


def saturated_row_basis(rows, width):
    """Canonical basis of (Q-span of rows) intersected with Z^width.

    Computed by two kernel passes: the integer kernel of the rows gives
    the orthogonal complement, whose kernel in turn is the saturation.
    """
    rows = [r for r in rows if any(r)]
    if not rows:
        return ()
    comp = kernel_basis(IntMatrix.from_rows(rows))  # columns span the complement
    if comp.cols == 0:
        return row_hnf([tuple(1 if i == j else 0 for j in range(width)) for i in range(width)])
    sat = kernel_basis(comp.transpose())
    return row_hnf([sat.column(j) for j in range(sat.cols)])
