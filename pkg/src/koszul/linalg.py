"""Matrices over L_d and the linear-algebra kernels built on them."""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .errors import NotInvertible, NotSimpleShape, ShapeMismatch, SingularMatrix
from .ring import Frac, LocalRing, LocalScalar


class LMatrix:
    """Immutable rows x cols grid of scalars over a LocalRing.

    Entries are normally LocalScalar; fraction-field intermediates (Frac)
    are allowed inside the kernels below.
    """

    __slots__ = ("ring", "rows", "cols", "_e")

    def __init__(self, ring: LocalRing, rows: int, cols: int, entries=None):
        self.ring = ring
        self.rows = rows
        self.cols = cols
        if entries is None:
            z = ring.zero
            self._e = tuple(tuple(z for _ in range(cols)) for _ in range(rows))
        else:
            e = tuple(tuple(_coerce(ring, v) for v in row) for row in entries)
            if len(e) != rows or any(len(r) != cols for r in e):
                raise ShapeMismatch(f"entries do not form a {rows}x{cols} grid")
            self._e = e

    @classmethod
    def _raw(cls, ring, rows, cols, e):
        m = object.__new__(cls)
        m.ring = ring
        m.rows = rows
        m.cols = cols
        m._e = e
        return m

    # constructors
    @classmethod
    def from_rows(cls, ring, rows: Sequence[Sequence]) -> "LMatrix":
        rows = list(rows)
        ncols = len(rows[0]) if rows else 0
        return cls(ring, len(rows), ncols, rows)

    @classmethod
    def zeros(cls, ring, rows, cols) -> "LMatrix":
        return cls(ring, rows, cols)

    @classmethod
    def identity(cls, ring, n) -> "LMatrix":
        return cls.diag(ring, [ring.one] * n)

    @classmethod
    def diag(cls, ring, values) -> "LMatrix":
        values = [_coerce(ring, v) for v in values]
        n = len(values)
        z = ring.zero
        return cls._raw(ring, n, n, tuple(
            tuple(values[i] if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def scalar(cls, ring, c, n) -> "LMatrix":
        return cls.diag(ring, [c] * n)

    @classmethod
    def block(cls, ring, blocks: Sequence[Sequence["LMatrix"]]) -> "LMatrix":
        """Assemble a block matrix; every row of blocks must agree on heights."""
        rows = []
        for brow in blocks:
            h = brow[0].rows
            for b in brow:
                if b.rows != h:
                    raise ShapeMismatch("block heights disagree")
            for i in range(h):
                rows.append(tuple(v for b in brow for v in b._e[i]))
        ncols = sum(b.cols for b in blocks[0]) if blocks else 0
        if any(len(r) != ncols for r in rows):
            raise ShapeMismatch("block widths disagree")
        return cls._raw(ring, len(rows), ncols, tuple(rows))

    @classmethod
    def direct_sum(cls, ring, mats: Iterable["LMatrix"]) -> "LMatrix":
        mats = list(mats)
        if not mats:
            return cls(ring, 0, 0)
        grid = [[m if i == j else cls(ring, m.rows, n.cols) for j, n in enumerate(mats)]
                for i, m in enumerate(mats)]
        # block() needs each block row to agree in height, which holds by construction
        return cls.block(ring, grid)

    # access
    def __getitem__(self, ij):
        i, j = ij
        return self._e[i][j]

    def entries(self):
        return self._e

    @property
    def shape(self):
        return (self.rows, self.cols)

    def row(self, i):
        return self._e[i]

    def col(self, j):
        return tuple(r[j] for r in self._e)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "LMatrix":
        return LMatrix._raw(self.ring, len(rows), len(cols),
                            tuple(tuple(self._e[i][j] for j in cols) for i in rows))

    def slice(self, r0, r1, c0, c1) -> "LMatrix":
        return self.submatrix(range(r0, r1), range(c0, c1))

    # arithmetic
    def __matmul__(self, other: "LMatrix") -> "LMatrix":
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        z = self.ring.zero
        oc = other.cols
        cols = [other.col(j) for j in range(oc)]
        out = []
        for r in self._e:
            nz = [(k, v) for k, v in enumerate(r) if not v.is_zero()]
            row = []
            for j in range(oc):
                col = cols[j]
                acc = z
                for k, v in nz:
                    w = col[k]
                    if not w.is_zero():
                        acc = acc + v * w
                row.append(acc)
            out.append(tuple(row))
        return LMatrix._raw(self.ring, self.rows, oc, tuple(out))

    def __add__(self, other):
        self._same_shape(other)
        return LMatrix._raw(self.ring, self.rows, self.cols, tuple(
            tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._e, other._e)))

    def __sub__(self, other):
        self._same_shape(other)
        return LMatrix._raw(self.ring, self.rows, self.cols, tuple(
            tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._e, other._e)))

    def __neg__(self):
        return self.map(lambda v: -v)

    def scale(self, c) -> "LMatrix":
        c = _coerce(self.ring, c)
        return self.map(lambda v: c * v)

    def map(self, fn: Callable) -> "LMatrix":
        return LMatrix._raw(self.ring, self.rows, self.cols,
                            tuple(tuple(fn(v) for v in r) for r in self._e))

    def quotient_map(self, killed) -> "LMatrix":
        killed = list(killed)
        if not killed:
            return self
        return self.map(lambda v: v.quotient_map(killed))

    @property
    def T(self) -> "LMatrix":
        return LMatrix._raw(self.ring, self.cols, self.rows,
                            tuple(zip(*self._e)) if self.rows else tuple(() for _ in range(self.cols)))

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise ShapeMismatch(f"shape {self.shape} vs {other.shape}")

    def __eq__(self, other):
        if not isinstance(other, LMatrix):
            return NotImplemented
        return self.shape == other.shape and self._e == other._e

    def __hash__(self):
        return hash((self.shape, self._e))

    def is_zero(self) -> bool:
        return all(v.is_zero() for r in self._e for v in r)

    def is_identity(self) -> bool:
        return self.rows == self.cols and all(
            (v.is_one() if i == j else v.is_zero())
            for i, r in enumerate(self._e) for j, v in enumerate(r))

    def is_local(self) -> bool:
        return all(isinstance(v, LocalScalar) for r in self._e for v in r)

    def to_local(self) -> "LMatrix":
        """Convert Frac entries to LocalScalar; raises ValueError if one is not in L."""
        out = []
        for r in self._e:
            row = []
            for v in r:
                if not isinstance(v, LocalScalar):
                    lv = v.to_local()
                    if lv is None:
                        raise ValueError(f"entry {v} is not in the local ring")
                    v = lv
                row.append(v)
            out.append(tuple(row))
        return LMatrix._raw(self.ring, self.rows, self.cols, tuple(out))

    def to_strings(self) -> list[list[str]]:
        return [[str(v) for v in r] for r in self._e]

    def __repr__(self):
        return f"LMatrix({self.to_strings()})"


def _coerce(ring, v):
    if isinstance(v, Frac):
        return v
    return ring.const(v)


# determinants, inverses, solving


def _rref_frac(m: LMatrix, rhs: LMatrix | None = None):
    """Gauss-Jordan over the fraction field.

    Returns (reduced rows, pivot columns, det factor) where det factor is the
    determinant when m is square and full rank.
    """
    ring = m.ring
    n, c = m.rows, m.cols
    a = [list(m._e[i]) + (list(rhs._e[i]) if rhs is not None else []) for i in range(n)]
    pivots = []
    det = ring.one
    r = 0
    for j in range(c):
        p = None
        # prefer a unit pivot, then any nonzero
        for i in range(r, n):
            v = a[i][j]
            if not v.is_zero():
                if p is None:
                    p = i
                if isinstance(v, LocalScalar) and v.is_unit():
                    p = i
                    break
        if p is None:
            det = ring.zero
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
            det = -det
        piv = a[r][j]
        det = det * piv
        inv = ring.one / piv
        a[r] = [v * inv for v in a[r]]
        for i in range(n):
            if i != r and not a[i][j].is_zero():
                f = a[i][j]
                a[i] = [v - f * w for v, w in zip(a[i], a[r])]
        pivots.append(j)
        r += 1
        if r == n:
            break
    if len(pivots) < c:
        det = ring.zero
    return a, pivots, det


def rank(m: LMatrix) -> int:
    """Rank over the fraction field."""
    if m.rows == 0 or m.cols == 0:
        return 0
    _, piv, _ = _rref_frac(m)
    return len(piv)


def det(m: LMatrix):
    if m.rows != m.cols:
        raise ShapeMismatch("determinant of a non-square matrix")
    if m.rows == 0:
        return m.ring.one
    _, _, d = _rref_frac(m)
    return _as_local(d)


def _as_local(v):
    lv = v.to_local() if not isinstance(v, LocalScalar) else v
    return lv if lv is not None else v


def det_adj(m: LMatrix):
    """(det M, adj M) with M @ adj = adj @ M = det * I."""
    if m.rows != m.cols:
        raise ShapeMismatch("det_adj needs a square matrix")
    ring = m.ring
    n = m.rows
    if n == 0:
        return ring.one, LMatrix(ring, 0, 0)
    ident = LMatrix.identity(ring, n)
    a, piv, d = _rref_frac(m, ident)
    d = _as_local(d)
    if not d.is_zero():
        inv = LMatrix._raw(ring, n, n, tuple(tuple(r[n:]) for r in a))
        adj = inv.scale(d)
        return d, _localize(adj)
    # singular: cofactor expansion
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = m.submatrix([k for k in range(n) if k != j], [k for k in range(n) if k != i])
            c = det(minor) if n > 1 else ring.one
            row.append(c if (i + j) % 2 == 0 else -c)
        rows.append(tuple(row))
    return d, _localize(LMatrix._raw(ring, n, n, tuple(rows)))


def _localize(m: LMatrix) -> LMatrix:
    try:
        return m.to_local()
    except ValueError:
        return m


def inverse(m: LMatrix) -> LMatrix:
    """Inverse over L; NotInvertible unless det is a unit of L."""
    d, adj = det_adj(m)
    if not (isinstance(d, LocalScalar) and d.is_unit()):
        raise NotInvertible(f"determinant {d} is not a unit")
    return adj.scale(d.inverse())


def is_invertible(m: LMatrix) -> bool:
    if m.rows != m.cols:
        return False
    d = det(m)
    return isinstance(d, LocalScalar) and d.is_unit()


def solve_fraction_field(m: LMatrix, b: LMatrix) -> LMatrix:
    """Unique solution y of m y = b over the fraction field (m square, det != 0)."""
    if m.rows != m.cols:
        raise ShapeMismatch("square matrix required")
    n = m.rows
    if n == 0:
        return LMatrix(m.ring, 0, b.cols)
    a, piv, d = _rref_frac(m, b)
    if d.is_zero():
        raise SingularMatrix("matrix is singular")
    return LMatrix._raw(m.ring, n, b.cols, tuple(tuple(r[n:]) for r in a))


def solve_in_local(m: LMatrix, b) -> LMatrix | None:
    """y in L^n with m y = b, or None when the fraction-field solution leaves L.

    ``b`` may be a column LMatrix, a matrix of several columns, or a list.
    """
    if not isinstance(b, LMatrix):
        b = LMatrix(m.ring, len(b), 1, [[v] for v in b])
    y = solve_fraction_field(m, b)
    try:
        return y.to_local()
    except ValueError:
        return None


def local_equivalence_form(m: LMatrix, f: LocalScalar):
    """Invertible P, Q and k with P @ m @ Q = diag(I_{r-k}, f I_k).

    Unit pivots are eliminated first; whatever remains must be f times an
    invertible matrix, otherwise NotSimpleShape is raised.
    """
    ring = m.ring
    n = m.rows
    if m.cols != n:
        raise ShapeMismatch("square matrix required")
    if n and det(m).is_zero():
        raise SingularMatrix("matrix is singular")
    a = [list(r) for r in m._e]
    P = [list(r) for r in LMatrix.identity(ring, n)._e]
    Q = [list(r) for r in LMatrix.identity(ring, n)._e]
    t = 0
    while t < n:
        found = None
        for i in range(t, n):
            for j in range(t, n):
                if a[i][j].is_unit():
                    found = (i, j)
                    break
            if found:
                break
        if found is None:
            break
        i, j = found
        a[t], a[i] = a[i], a[t]
        P[t], P[i] = P[i], P[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        for row in Q:
            row[t], row[j] = row[j], row[t]
        inv = a[t][t].inverse()
        a[t] = [v * inv for v in a[t]]
        P[t] = [v * inv for v in P[t]]
        for i2 in range(n):
            if i2 != t and not a[i2][t].is_zero():
                c = a[i2][t]
                a[i2] = [v - c * w for v, w in zip(a[i2], a[t])]
                P[i2] = [v - c * w for v, w in zip(P[i2], P[t])]
        for j2 in range(t + 1, n):
            if not a[t][j2].is_zero():
                c = a[t][j2]
                for row in a:
                    row[j2] = row[j2] - c * row[t]
                for row in Q:
                    row[j2] = row[j2] - c * row[t]
        t += 1
    k = n - t
    if k:
        resid = []
        for i in range(t, n):
            row = []
            for j in range(t, n):
                q = a[i][j].exact_div(f)
                if q is None:
                    raise NotSimpleShape(f"residual entry {a[i][j]} is not divisible by {f}")
                row.append(q)
            resid.append(row)
        R = LMatrix.from_rows(ring, resid)
        try:
            Rinv = inverse(R)
        except NotInvertible:
            raise NotSimpleShape("residual block divided by f is not invertible") from None
        Qm = LMatrix.from_rows(ring, Q)
        corr = LMatrix.direct_sum(ring, [LMatrix.identity(ring, t), Rinv])
        Qm = Qm @ corr
    else:
        Qm = LMatrix.from_rows(ring, Q)
    Pm = LMatrix.from_rows(ring, P) if n else LMatrix(ring, 0, 0)
    if not n:
        Qm = LMatrix(ring, 0, 0)
    target = LMatrix.diag(ring, [ring.one] * t + [f] * k)
    if Pm @ m @ Qm != target:
        raise AssertionError("local_equivalence_form postcondition failed")
    return Pm, Qm, k


# Smith normal form over the discrete valuation ring L_1


def snf_valuations(m: LMatrix) -> list[int]:
    """Valuations of the nonzero invariant factors of m over L_1.

    Elimination always pivots on an entry of minimal valuation, which then
    divides every remaining entry inside L_1.
    """
    if m.ring.nvars != 1:
        raise ValueError("Smith normal form is implemented over L_1 only")
    a = [list(r) for r in m._e]
    rows, cols = m.rows, m.cols
    out = []
    t = 0
    while t < min(rows, cols):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                v = a[i][j]
                if not v.is_zero():
                    val = v.valuation()
                    if best is None or val < best[0]:
                        best = (val, i, j)
        if best is None:
            break
        val, i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        piv = a[t][t]
        for i2 in range(t + 1, rows):
            if not a[i2][t].is_zero():
                c = a[i2][t].exact_div(piv)
                a[i2] = [v - c * w for v, w in zip(a[i2], a[t])]
        for j2 in range(t + 1, cols):
            if not a[t][j2].is_zero():
                c = a[t][j2].exact_div(piv)
                for row in a:
                    row[j2] = row[j2] - c * row[t]
        out.append(val)
        t += 1
    return out
