"""Bounded chain complexes of free modules over L_d and maps between them."""

from __future__ import annotations

from .errors import ShapeMismatch
from .linalg import LMatrix, rank, snf_valuations


class ChainComplex:
    """Ranks per degree and differentials d_n: C_n -> C_{n-1} (homological grading)."""

    def __init__(self, ring, ranks: dict, diffs: dict | None = None):
        self.ring = ring
        self._ranks = {n: r for n, r in ranks.items() if r}
        self._d = {}
        for n, m in (diffs or {}).items():
            if m.shape != (self.rank(n - 1), self.rank(n)):
                raise ShapeMismatch(f"d_{n} has shape {m.shape}, expected "
                                    f"{(self.rank(n - 1), self.rank(n))}")
            if m.rows and m.cols:
                self._d[n] = m

    def rank(self, n: int) -> int:
        return self._ranks.get(n, 0)

    def d(self, n: int) -> LMatrix:
        m = self._d.get(n)
        if m is None:
            return LMatrix(self.ring, self.rank(n - 1), self.rank(n))
        return m

    def degrees(self) -> range:
        """Smallest range covering every nonzero module (empty for the zero complex)."""
        if not self._ranks:
            return range(0)
        return range(min(self._ranks), max(self._ranks) + 1)

    def span(self, other: "ChainComplex | None" = None, pad: int = 0) -> range:
        degs = list(self.degrees())
        if other is not None:
            degs += list(other.degrees())
        if not degs:
            return range(0)
        return range(min(degs) - pad, max(degs) + 1 + pad)

    def is_zero(self) -> bool:
        return not self._ranks

    def d_squared_violations(self) -> list[int]:
        bad = []
        for n in self.span(pad=1):
            if not (self.d(n - 1) @ self.d(n)).is_zero():
                bad.append(n)
        return bad

    def __eq__(self, other):
        if not isinstance(other, ChainComplex):
            return NotImplemented
        if self._ranks != other._ranks:
            return False
        return all(self.d(n) == other.d(n) for n in self.span(pad=1))

    def __repr__(self):
        return f"ChainComplex(ranks={dict(sorted(self._ranks.items()))})"

    def direct_sum(self, other: "ChainComplex") -> "ChainComplex":
        ring = self.ring
        degs = self.span(other, pad=1)
        ranks = {n: self.rank(n) + other.rank(n) for n in degs}
        diffs = {n: LMatrix.direct_sum(ring, [self.d(n), other.d(n)]) for n in degs}
        return ChainComplex(ring, ranks, diffs)


class ChainMap:
    """Degreewise matrices f_n: x_n -> y_n."""

    def __init__(self, source: ChainComplex, target: ChainComplex, comps: dict | None = None):
        self.source = source
        self.target = target
        self.ring = source.ring
        self._f = {}
        for n, m in (comps or {}).items():
            if m.shape != (target.rank(n), source.rank(n)):
                raise ShapeMismatch(f"component {n} has shape {m.shape}, expected "
                                    f"{(target.rank(n), source.rank(n))}")
            if m.rows and m.cols:
                self._f[n] = m

    def __getitem__(self, n: int) -> LMatrix:
        m = self._f.get(n)
        if m is None:
            return LMatrix(self.ring, self.target.rank(n), self.source.rank(n))
        return m

    def degrees(self) -> range:
        return self.source.span(self.target, pad=1)

    def chain_violations(self) -> list[int]:
        x, y = self.source, self.target
        return [n for n in self.degrees()
                if y.d(n) @ self[n] != self[n - 1] @ x.d(n)]

    def is_chain_map(self) -> bool:
        return not self.chain_violations()

    @classmethod
    def identity(cls, x: ChainComplex) -> "ChainMap":
        return cls(x, x, {n: LMatrix.identity(x.ring, x.rank(n)) for n in x.degrees()})

    @classmethod
    def zero(cls, x: ChainComplex, y: ChainComplex) -> "ChainMap":
        return cls(x, y, {})

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        """self after other."""
        if not _same_ranks(other.target, self.source):
            raise ShapeMismatch("maps are not composable")
        degs = other.source.span(self.target)
        return ChainMap(other.source, self.target, {n: self[n] @ other[n] for n in degs})

    def _combine(self, other, op):
        if not (_same_ranks(self.source, other.source) and _same_ranks(self.target, other.target)):
            raise ShapeMismatch("maps have different endpoints")
        degs = self.source.span(self.target)
        return ChainMap(self.source, self.target, {n: op(self[n], other[n]) for n in degs})

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __neg__(self):
        return ChainMap(self.source, self.target, {n: -m for n, m in self._f.items()})

    def __eq__(self, other):
        if not isinstance(other, ChainMap):
            return NotImplemented
        degs = self.source.span(self.target)
        return all(self[n] == other[n] for n in degs)

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self._f.values())

    def __repr__(self):
        return f"ChainMap({self.source!r} -> {self.target!r})"


def _same_ranks(a: ChainComplex, b: ChainComplex) -> bool:
    return a._ranks == b._ranks


def mapping_cone(f: ChainMap) -> ChainComplex:
    """Cone(f)_n = x_{n-1} + y_n with d = [[-d_x, 0], [f, d_y]]."""
    x, y = f.source, f.target
    ring = f.ring
    degs = x.span(y, pad=2)
    ranks = {n: x.rank(n - 1) + y.rank(n) for n in degs}
    diffs = {}
    for n in degs:
        diffs[n] = LMatrix.block(ring, [
            [-x.d(n - 1), LMatrix(ring, x.rank(n - 2), y.rank(n))],
            [f[n - 1], y.d(n)],
        ])
    return ChainComplex(ring, ranks, diffs)


def betti_fraction_field(c: ChainComplex) -> dict[int, int]:
    """dim of H_n tensored with the fraction field."""
    out = {}
    for n in c.span(pad=1):
        out[n] = c.rank(n) - rank(c.d(n)) - rank(c.d(n + 1))
    return out


def homology_dvr(c: ChainComplex) -> dict[int, tuple[int, list[int]]]:
    """Homology over L_1: degree -> (free rank, valuations of the torsion summands)."""
    out = {}
    for n in c.span(pad=1):
        free = c.rank(n) - rank(c.d(n)) - rank(c.d(n + 1))
        tors = [v for v in snf_valuations(c.d(n + 1)) if v > 0]
        out[n] = (free, tors)
    return out


def is_acyclic(c: ChainComplex) -> bool:
    """Exact over L_1 via Smith normal form, otherwise the fraction-field check."""
    if c.ring.nvars == 1:
        return all(free == 0 and not tors for free, tors in homology_dvr(c).values())
    return all(b == 0 for b in betti_fraction_field(c).values())


def is_quasi_iso(f: ChainMap) -> bool:
    return is_acyclic(mapping_cone(f))
