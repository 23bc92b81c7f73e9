"""Exact sparse integer linear algebra: Smith normal form, kernels, solving.

Everything runs on arbitrary-precision Python ints; no floating point and
no overflow.  Elimination pivots on minimal-absolute-value entries with a
fill-in tie-break, which keeps the classical SNF coefficient blowup in
check at the scales this package targets.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ValidationError


class IntMatrix:
    """Sparse integer matrix stored as per-row dicts of nonzero entries."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows, ncols, rows=None):
        self.nrows = nrows
        self.ncols = ncols
        self.rows = rows if rows is not None else [dict() for _ in range(nrows)]

    @classmethod
    def from_dense(cls, dense):
        nrows = len(dense)
        ncols = len(dense[0]) if nrows else 0
        m = cls(nrows, ncols)
        for i, row in enumerate(dense):
            for j, v in enumerate(row):
                if v:
                    m.rows[i][j] = int(v)
        return m

    @classmethod
    def from_entries(cls, nrows, ncols, entries):
        m = cls(nrows, ncols)
        for (i, j), v in entries.items():
            if v:
                m.rows[i][j] = int(v)
        return m

    @classmethod
    def identity(cls, n):
        m = cls(n, n)
        for i in range(n):
            m.rows[i][i] = 1
        return m

    @classmethod
    def from_columns(cls, nrows, columns):
        m = cls(nrows, len(columns))
        for j, col in enumerate(columns):
            for i, v in col.items() if isinstance(col, dict) else enumerate(col):
                if v:
                    m.rows[i][j] = int(v)
        return m

    def __getitem__(self, key):
        i, j = key
        return self.rows[i].get(j, 0)

    def __setitem__(self, key, value):
        i, j = key
        if value:
            self.rows[i][j] = int(value)
        else:
            self.rows[i].pop(j, None)

    def copy(self):
        return IntMatrix(self.nrows, self.ncols, [dict(r) for r in self.rows])

    def to_dense(self):
        return [[self.rows[i].get(j, 0) for j in range(self.ncols)] for i in range(self.nrows)]

    def transpose(self):
        m = IntMatrix(self.ncols, self.nrows)
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                m.rows[j][i] = v
        return m

    def nnz(self):
        return sum(len(r) for r in self.rows)

    def is_zero(self):
        return all(not r for r in self.rows)

    def column(self, j):
        return {i: row[j] for i, row in enumerate(self.rows) if j in row}

    def mul(self, other):
        if self.ncols != other.nrows:
            raise ValidationError("matrix dimensions do not match")
        out = IntMatrix(self.nrows, other.ncols)
        for i, row in enumerate(self.rows):
            acc = {}
            for k, a in row.items():
                for j, b in other.rows[k].items():
                    acc[j] = acc.get(j, 0) + a * b
            out.rows[i] = {j: v for j, v in acc.items() if v}
        return out

    def mul_vector(self, vec):
        """A @ vec with vec a dict col->int or a sequence; returns dict."""
        if not isinstance(vec, dict):
            vec = {j: v for j, v in enumerate(vec) if v}
        out = {}
        for i, row in enumerate(self.rows):
            s = 0
            for j, a in row.items():
                v = vec.get(j)
                if v:
                    s += a * v
            if s:
                out[i] = s
        return out

    def equal(self, other):
        return (self.nrows == other.nrows and self.ncols == other.ncols
                and all(self.rows[i] == other.rows[i] for i in range(self.nrows)))

    def __repr__(self):
        return f"IntMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


class _Sheet:
    """A matrix under row/column operations, with a column index for pivots."""

    def __init__(self, matrix: IntMatrix):
        self.nrows = matrix.nrows
        self.ncols = matrix.ncols
        self.rows = [dict(r) for r in matrix.rows]
        self.cols = [set() for _ in range(self.ncols)]
        for i, row in enumerate(self.rows):
            for j in row:
                self.cols[j].add(i)

    def get(self, i, j):
        return self.rows[i].get(j, 0)

    def set(self, i, j, v):
        if v:
            if j not in self.rows[i]:
                self.cols[j].add(i)
            self.rows[i][j] = v
        elif j in self.rows[i]:
            del self.rows[i][j]
            self.cols[j].discard(i)

    def row_add(self, dst, src, q):
        """row[dst] += q * row[src]"""
        if not q:
            return
        for j, v in list(self.rows[src].items()):
            self.set(dst, j, self.rows[dst].get(j, 0) + q * v)

    def col_add(self, dst, src, q):
        """col[dst] += q * col[src]"""
        if not q:
            return
        for i in list(self.cols[src]):
            v = self.rows[i].get(src, 0)
            self.set(i, dst, self.rows[i].get(dst, 0) + q * v)

    def row_swap(self, a, b):
        if a == b:
            return
        for j in self.rows[a].keys() | self.rows[b].keys():
            self.cols[j].discard(a)
            self.cols[j].discard(b)
        self.rows[a], self.rows[b] = self.rows[b], self.rows[a]
        for j in self.rows[a]:
            self.cols[j].add(a)
        for j in self.rows[b]:
            self.cols[j].add(b)

    def col_swap(self, a, b):
        if a == b:
            return
        for i in self.cols[a] | self.cols[b]:
            row = self.rows[i]
            va, vb = row.get(a), row.get(b)
            if vb is None:
                del row[a]
            else:
                row[a] = vb
            if va is None:
                row.pop(b, None)
            else:
                row[b] = va
        self.cols[a], self.cols[b] = self.cols[b], self.cols[a]

    def row_negate(self, i):
        for j in self.rows[i]:
            self.rows[i][j] = -self.rows[i][j]

    def col_negate(self, j):
        for i in self.cols[j]:
            self.rows[i][j] = -self.rows[i][j]

    def to_matrix(self):
        return IntMatrix(self.nrows, self.ncols, [dict(r) for r in self.rows])


@dataclass
class SNFResult:
    """U @ A @ V == S with U, V unimodular and S diagonal, d1 | d2 | ..."""

    U: IntMatrix | None
    S: IntMatrix
    V: IntMatrix | None
    divisors: list
    rank: int
    Uinv: IntMatrix | None = None
    Vinv: IntMatrix | None = None


def _pivot(sheet, active_rows, active_cols):
    """Smallest |entry| in the active block; ties broken by fill-in, then position."""
    best = None
    for j in sorted(active_cols):
        for i in sorted(sheet.cols[j] & active_rows):
            v = abs(sheet.rows[i][j])
            fill = (len(sheet.rows[i]) - 1) * (len(sheet.cols[j]) - 1)
            key = (v, fill, i, j)
            if best is None or key < best[0]:
                best = (key, i, j)
                if v == 1 and fill == 0:
                    return best[1], best[2]
    if best is None:
        return None
    return best[1], best[2]


def smith_normal_form(A: IntMatrix, transforms=True, inverses=False) -> SNFResult:
    """Diagonalize A by unimodular row/column operations.

    Returns S with non-negative diagonal entries d1 | d2 | ... and, when
    requested, the transforms U, V (and their inverses) with U A V = S.
    """

    sheet = _Sheet(A)
    n, m = A.nrows, A.ncols
    U = _Sheet(IntMatrix.identity(n)) if transforms else None
    V = _Sheet(IntMatrix.identity(m)) if transforms else None
    Uinv = _Sheet(IntMatrix.identity(n)) if inverses else None
    Vinv = _Sheet(IntMatrix.identity(m)) if inverses else None

    def row_add(dst, src, q):
        sheet.row_add(dst, src, q)
        if U is not None:
            U.row_add(dst, src, q)
        if Uinv is not None:
            Uinv.col_add(src, dst, -q)

    def col_add(dst, src, q):
        sheet.col_add(dst, src, q)
        if V is not None:
            V.col_add(dst, src, q)
        if Vinv is not None:
            Vinv.row_add(src, dst, -q)

    def row_swap(a, b):
        sheet.row_swap(a, b)
        if U is not None:
            U.row_swap(a, b)
        if Uinv is not None:
            Uinv.col_swap(a, b)

    def col_swap(a, b):
        sheet.col_swap(a, b)
        if V is not None:
            V.col_swap(a, b)
        if Vinv is not None:
            Vinv.row_swap(a, b)

    def row_negate(i):
        sheet.row_negate(i)
        if U is not None:
            U.row_negate(i)
        if Uinv is not None:
            Uinv.col_negate(i)

    active_rows = set(range(n))
    active_cols = set(range(m))
    t = 0
    while True:
        piv = _pivot(sheet, active_rows, active_cols)
        if piv is None:
            break
        i, j = piv
        row_swap(t, i)
        col_swap(t, j)
        # Euclidean sweeps until row t and column t are clear off-diagonal
        while True:
            col_entries = [r for r in sheet.cols[t] if r != t and r in active_rows or r > t]
            col_entries = [r for r in sheet.cols[t] if r != t]
            progress = False
            for r in col_entries:
                a = sheet.get(r, t)
                d = sheet.get(t, t)
                q = a // d
                row_add(r, t, -q)
                if sheet.get(r, t):
                    # remainder smaller than |d|: promote it to the pivot slot
                    row_swap(t, r)
                    progress = True
            row_entries = [c for c in list(sheet.rows[t]) if c != t]
            for c in row_entries:
                a = sheet.get(t, c)
                d = sheet.get(t, t)
                q = a // d
                col_add(c, t, -q)
                if sheet.get(t, c):
                    col_swap(t, c)
                    progress = True
            if not progress and not [r for r in sheet.cols[t] if r != t] \
                    and not [c for c in sheet.rows[t] if c != t]:
                break
        if sheet.get(t, t) < 0:
            row_negate(t)
        active_rows.discard(t)
        active_cols.discard(t)
        t += 1

    rank = t
    # enforce the divisibility chain d1 | d2 | ...
    changed = True
    while changed:
        changed = False
        for a in range(rank - 1):
            da = sheet.get(a, a)
            db = sheet.get(a + 1, a + 1)
            if db % da == 0:
                continue
            changed = True
            # [[da,0],[0,db]] -> [[g,0],[0,lcm]] via row/col ops
            row_add(a, a + 1, 1)          # puts db into position (a, a+1)
            while True:
                d = sheet.get(a, a)
                e = sheet.get(a, a + 1)
                if e == 0:
                    break
                q = e // d
                col_add(a + 1, a, -q)
                if sheet.get(a, a + 1):
                    col_swap(a, a + 1)
            # clear the (a+1, a) entry introduced by the column swap
            while True:
                e = sheet.get(a + 1, a)
                if e == 0:
                    break
                d = sheet.get(a, a)
                q = e // d
                row_add(a + 1, a, -q)
                if sheet.get(a + 1, a):
                    row_swap(a, a + 1)
            if sheet.get(a, a) < 0:
                row_negate(a)
            if sheet.get(a + 1, a + 1) < 0:
                row_negate(a + 1)

    S = sheet.to_matrix()
    divisors = [S[i, i] for i in range(min(n, m))]
    return SNFResult(
        U=U.to_matrix() if U is not None else None,
        S=S,
        V=V.to_matrix() if V is not None else None,
        divisors=divisors,
        rank=rank,
        Uinv=Uinv.to_matrix() if Uinv is not None else None,
        Vinv=Vinv.to_matrix() if Vinv is not None else None,
    )


def rank_z(A: IntMatrix) -> int:
    """Rank over Z (equivalently over Q)."""
    return smith_normal_form(A, transforms=False).rank


def elementary_divisors(A: IntMatrix):
    """Nonzero diagonal entries of the SNF, in divisibility order."""
    res = smith_normal_form(A, transforms=False)
    return [d for d in res.divisors if d != 0]


def rank_mod_p(A: IntMatrix, p: int) -> int:
    """Rank of A over the field Z/p (p prime)."""
    rows = []
    for r in A.rows:
        row = {j: v % p for j, v in r.items() if v % p}
        if row:
            rows.append(row)
    rank = 0
    pivots = {}  # col -> reduced row with leading 1 at col
    for row in rows:
        row = dict(row)
        while row:
            j = min(row)
            if j in pivots:
                c = row[j]
                for k, v in pivots[j].items():
                    row[k] = (row.get(k, 0) - c * v) % p
                row = {k: v for k, v in row.items() if v}
            else:
                inv = pow(row[j], -1, p)
                row = {k: (v * inv) % p for k, v in row.items()}
                pivots[j] = row
                rank += 1
                break
    return rank


class IntSolver:
    """Reusable exact solver for A x = b over the integers."""

    def __init__(self, A: IntMatrix):
        self.A = A
        self.res = smith_normal_form(A, transforms=True)

    def solve(self, b) -> dict | None:
        """Return x (dict col->int) with A x = b, or None if unsolvable over Z."""
        res = self.res
        if not isinstance(b, dict):
            b = {i: v for i, v in enumerate(b) if v}
        y = res.U.mul_vector(b)
        z = {}
        for i, v in y.items():
            d = res.S[i, i] if i < min(res.S.nrows, res.S.ncols) else 0
            if d == 0:
                if v != 0:
                    return None
            else:
                if v % d:
                    return None
                z[i] = v // d
        return res.V.mul_vector(z)

    def kernel_basis(self):
        """Columns of V past the rank span ker(A); the basis is saturated."""
        res = self.res
        basis = []
        for j in range(res.rank, res.S.ncols):
            col = res.V.column(j)
            basis.append(col)
        return basis


def kernel_basis(A: IntMatrix):
    return IntSolver(A).kernel_basis()


def hermite_residue(basis_columns, v, nrows):
    """Canonical representative of v modulo the lattice spanned by the columns.

    Uses a column Hermite form: pivot coordinates are reduced into
    [0, pivot).  Deterministic, so equal cosets share a representative.
    """
    H = _hermite_columns(basis_columns, nrows)
    out = list(v)
    for r, col in H:
        piv = col[r]
        q = out[r] // piv
        if q:
            for i, cv in col.items():
                out[i] -= q * cv
    return tuple(out)


def lattice_membership(basis_columns, v, nrows) -> bool:
    H = _hermite_columns(basis_columns, nrows)
    out = list(v)
    for r, col in H:
        piv = col[r]
        q = out[r] // piv
        if q:
            for i, cv in col.items():
                out[i] -= q * cv
    return all(x == 0 for x in out)


def _hermite_columns(basis_columns, nrows):
    """Column Hermite form of a lattice basis.

    Returns [(pivot_row, column_dict), ...] with strictly increasing pivot
    rows, positive pivots, and entries above each pivot fully reduced.
    """
    cols = []
    for c in basis_columns:
        if isinstance(c, dict):
            col = {i: int(v) for i, v in c.items() if v}
        else:
            col = {i: int(v) for i, v in enumerate(c) if v}
        if col:
            cols.append(col)
    result = []
    row = 0
    while cols and row < nrows:
        here = [c for c in cols if row in c]
        rest = [c for c in cols if row not in c]
        if not here:
            row += 1
            continue
        # Euclid on the row-th coordinates of the columns touching this row
        while len(here) > 1:
            here.sort(key=lambda c: abs(c[row]))
            base = here[0]
            new_here = [base]
            for c in here[1:]:
                q = c[row] // base[row]
                for i, v in base.items():
                    nv = c.get(i, 0) - q * v
                    if nv:
                        c[i] = nv
                    else:
                        c.pop(i, None)
                if row in c:
                    new_here.append(c)
                elif c:
                    rest.append(c)
            here = new_here
        piv = here[0]
        if piv[row] < 0:
            piv = {i: -v for i, v in piv.items()}
        result.append((row, piv))
        cols = rest
        row += 1
    # reduce entries of later pivots against earlier ones is not needed for
    # residue computation (we reduce top-down), but normalize determinism:
    return result


def lattice_kernel(A_columns, nrows):
    """Integer kernel of the matrix whose columns are A_columns."""
    m = IntMatrix.from_columns(nrows, A_columns)
    return kernel_basis(m)


def lattice_preimage(map_columns, lattice_columns, nrows):
    """Basis of {x : M x in L} where M has the given columns (over Z^nrows).

    Computed as the x-projection of ker[M | -L]; the projection of a
    saturated kernel basis spans the preimage lattice.
    """
    ncols_m = len(map_columns)
    stacked = list(map_columns) + [
        {i: -v for i, v in (c.items() if isinstance(c, dict) else enumerate(c)) if v}
        for c in lattice_columns
    ]
    kern = lattice_kernel(stacked, nrows)
    out = []
    for k in kern:
        x = {i: v for i, v in k.items() if i < ncols_m}
        if x:
            out.append(x)
    return out
