"""Typical cubes, their morphisms, and the block calculus along a direction.

A typical cube Typ(r, n) has every vertex L^r and d^s = diag(f_s I_{n_s}, I_{r-n_s}).
Coordinate i is *active* in direction s when i < n_s, so the active sets
A_i = {s : i < n_s} form a decreasing chain.  Dropping the chain condition
gives the direct sums of rank-one cubes C_A that the module also needs
(direct sums and the upside-down involution leave the chain world);
those are described by a ``Signature``: one active set per coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .chain import ChainMap, is_quasi_iso
from .cube import Cube, CubeMorphism, direct_sum, subset_key, total_complex
from .errors import (H0NotExact, InvalidType, NotBlockCompatible, NotLiftableShape,
                     NotNonDegenerate, ShapeMismatch)
from .linalg import LMatrix, det, inverse, is_invertible, rank
from .ring import RegularContext


@dataclass(frozen=True)
class TypicalType:
    """(r, {n_s}); ``n`` is stored as sorted (s, n_s) pairs."""

    r: int
    n: tuple

    def __init__(self, r: int, n):
        if isinstance(n, Mapping):
            items = tuple(sorted((int(s), int(v)) for s, v in n.items()))
        else:
            items = tuple(sorted((int(s), int(v)) for s, v in n))
        object.__setattr__(self, "r", int(r))
        object.__setattr__(self, "n", items)
        if self.r < 0 or any(v < 0 or v > self.r for _, v in items):
            raise InvalidType(f"need 0 <= n_s <= r, got r={r}, n={dict(items)}")

    @classmethod
    def of(cls, r: int, ns: Sequence[int], indices: Sequence[int] | None = None) -> "TypicalType":
        indices = indices if indices is not None else range(1, len(ns) + 1)
        return cls(r, dict(zip(indices, ns)))

    def n_of(self, s: int) -> int:
        return dict(self.n)[s]

    @property
    def directions(self) -> tuple:
        return tuple(s for s, _ in self.n)

    def signature(self) -> "Signature":
        return Signature(tuple(frozenset(s for s, v in self.n if i < v) for i in range(self.r)),
                         self.directions)

    def __str__(self):
        return f"({self.r}, ({', '.join(str(v) for _, v in self.n)}))"


@dataclass(frozen=True)
class Signature:
    """Active set of each coordinate of a direct sum of rank-one cubes C_A."""

    active: tuple
    directions: tuple

    def __init__(self, active: Iterable, directions: Iterable[int]):
        object.__setattr__(self, "active", tuple(frozenset(a) for a in active))
        object.__setattr__(self, "directions", tuple(sorted(directions)))
        for a in self.active:
            if not a <= set(self.directions):
                raise InvalidType(f"active set {sorted(a)} is not inside S")

    @property
    def r(self) -> int:
        return len(self.active)

    def counts(self) -> dict:
        return {s: sum(1 for a in self.active if s in a) for s in self.directions}

    def is_chain(self) -> bool:
        ordered = sorted(self.active, key=len, reverse=True)
        return all(b <= a for a, b in zip(ordered, ordered[1:]))

    def is_canonical(self) -> bool:
        return list(self.active) == [self.active[i] for i in self.canonical_order()]

    def canonical_order(self) -> list[int]:
        """Stable order: larger active sets first, ties broken by the sorted members."""
        return sorted(range(self.r), key=lambda i: (-len(self.active[i]), sorted(self.active[i])))

    def canonical(self) -> "Signature":
        return Signature([self.active[i] for i in self.canonical_order()], self.directions)

    def to_type(self) -> TypicalType | None:
        """The typical type with this signature, or None when the sets do not form a chain."""
        if not self.is_chain():
            return None
        t = TypicalType(self.r, self.counts())
        return t if t.signature() == self.canonical() else None

    def h0_mingens(self, T: Iterable[int]) -> int:
        """Minimal number of generators of H_0^T: coordinates whose active set contains T."""
        T = set(T)
        return sum(1 for a in self.active if T <= a)

    def __add__(self, other: "Signature") -> "Signature":
        return Signature(self.active + other.active, self.directions)

    def __str__(self):
        parts = ["{" + ",".join(str(s) for s in sorted(a)) + "}" for a in self.active]
        return "[" + " ".join(parts) + "]"


def as_signature(t) -> Signature:
    return t if isinstance(t, Signature) else t.signature()


def _check_ctx(ctx: RegularContext, sig: Signature):
    if tuple(sig.directions) != ctx.indices:
        raise InvalidType(f"type indexed by {list(sig.directions)} but the context has "
                          f"{list(ctx.indices)}")


def _monomial(ctx: RegularContext, sig: Signature, t: int) -> LMatrix:
    """diag(prod_{u in T & A_i} f_u): the composite x_T -> x_empty of the typical cube."""
    ring = ctx.ring
    T = set(ctx.members(t))
    vals = []
    for a in sig.active:
        v = ring.one
        for u in sorted(T & a):
            v = v * ctx.f(u)
        vals.append(v)
    return LMatrix.diag(ring, vals)


def make_typical(ctx: RegularContext, t) -> Cube:
    """Typ(r, n) (or the cube of a Signature): d^s = diag(f_s or 1 per coordinate)."""
    sig = as_signature(t)
    _check_ctx(ctx, sig)
    ring = ctx.ring
    diags = {}
    for s in ctx.indices:
        diags[s] = LMatrix.diag(ring, [ctx.f(s) if s in a else ring.one for a in sig.active])
    bounds = {}
    for m in range(1 << ctx.size):
        for s in ctx.members(m):
            bounds[(s, m)] = diags[s]
    return Cube(ctx, [sig.r] * (1 << ctx.size), bounds)


def fundamental(ctx: RegularContext, m: int = 1) -> TypicalType:
    """Type of Typ(f_S)^{+m}: rank m, every coordinate active in every direction."""
    return TypicalType(m, {s: m for s in ctx.indices})


def morphism_from_base(ctx: RegularContext, src, tgt, F: LMatrix) -> CubeMorphism:
    """The morphism of typical cubes whose empty-set component is F.

    phi_T = D^tgt_T^{-1} F D^src_T; raises NotBlockCompatible if that leaves L.
    """
    s_sig, t_sig = as_signature(src), as_signature(tgt)
    comps = []
    for m in range(1 << ctx.size):
        Ds = _monomial(ctx, s_sig, m)
        Dt = _monomial(ctx, t_sig, m)
        vals = []
        for i in range(t_sig.r):
            row = []
            for j in range(s_sig.r):
                q = (F[i, j] * Ds[j, j]).exact_div(Dt[i, i])
                if q is None:
                    raise NotBlockCompatible(
                        f"entry ({i},{j}) of the base component is not divisible as required "
                        f"at T={{{subset_key(ctx, m)}}}")
                row.append(q)
            vals.append(row)
        comps.append(LMatrix(ctx.ring, t_sig.r, s_sig.r, vals))
    return CubeMorphism(make_typical(ctx, s_sig), make_typical(ctx, t_sig), comps)


def permutation_matrix(ring, perm: Sequence[int]) -> LMatrix:
    """P with P e_{perm[k]} = e_k, i.e. row k of P picks old coordinate perm[k]."""
    n = len(perm)
    rows = [[ring.one if j == perm[k] else ring.zero for j in range(n)] for k in range(n)]
    return LMatrix(ring, n, n, rows)


def typ_direct_sum(ctx: RegularContext, t1, t2):
    """Typ(t1) + Typ(t2) -> Typ(sum) as an explicit permutation isomorphism.

    The sum's signature is the concatenation put in canonical order.  It is
    the typical type (r1 + r2, n1 + n2) exactly when the two types are
    comonotone (no s, u with n1_s < n1_u and n2_s > n2_u); otherwise the
    returned type is a non-chain Signature, and ``direct_sum_obstruction``
    exhibits a subset T on which H_0^T has the wrong number of generators.
    """
    a, b = as_signature(t1), as_signature(t2)
    _check_ctx(ctx, a)
    _check_ctx(ctx, b)
    both = a + b
    order = both.canonical_order()
    target = both.canonical()
    P = permutation_matrix(ctx.ring, order)
    src = direct_sum(make_typical(ctx, a), make_typical(ctx, b))
    tgt = make_typical(ctx, target)
    iso = CubeMorphism(src, tgt, [P] * (1 << ctx.size))
    out = target.to_type() if target.is_chain() else target
    return out, iso


def naive_sum_type(t1: TypicalType, t2: TypicalType) -> TypicalType:
    """(r1 + r2, n1 + n2), the closed form that holds for comonotone pairs."""
    n = {s: t1.n_of(s) + t2.n_of(s) for s in t1.directions}
    return TypicalType(t1.r + t2.r, n)


def comonotone(t1: TypicalType, t2: TypicalType) -> bool:
    d = t1.directions
    return not any(t1.n_of(s) < t1.n_of(u) and t2.n_of(s) > t2.n_of(u) for s in d for u in d)


def direct_sum_obstruction(t1: TypicalType, t2: TypicalType):
    """A subset T where mingens H_0^T of the sum differs from that of (r1+r2, n1+n2), or None."""
    lhs = t1.signature() + t2.signature()
    rhs = naive_sum_type(t1, t2).signature()
    d = t1.directions
    for m in range(1 << len(d)):
        T = [s for i, s in enumerate(d) if m >> i & 1]
        if lhs.h0_mingens(T) != rhs.h0_mingens(T):
            return T, lhs.h0_mingens(T), rhs.h0_mingens(T)
    return None


def cube_h0_mingens(c: Cube, T: Iterable[int]) -> int:
    """dim_k of H_0^T(c) tensored with the residue field: r_empty minus the residue rank
    of [d^t_{t} for t in T].  An isomorphism invariant of any cube."""
    ctx = c.ctx
    T = list(T)
    r = c.rank(0)
    if not T:
        return r
    cols = [c.d(t, ctx.bit(t)) for t in T]
    M = LMatrix.block(ctx.ring, [cols]) if r else LMatrix(ctx.ring, 0, 0)
    res = M.map(lambda v: ctx.ring.const(v.at_origin()))
    return r - rank(res)


def split_nondeg_deg(ctx: RegularContext, t: TypicalType, s: int):
    """(x_nondeg, x_deg, iso x -> x_nondeg + x_deg) along s."""
    ns = t.n_of(s)
    nd = TypicalType(ns, {u: min(v, ns) for u, v in t.n})
    dg = TypicalType(t.r - ns, {u: max(v - ns, 0) for u, v in t.n})
    summed, perm_iso = typ_direct_sum(ctx, nd, dg)
    if summed != t:
        raise AssertionError("non-degenerate and degenerate parts do not reassemble")
    # perm_iso: x_nd + x_d -> Typ(t); its inverse goes the way we want
    return nd, dg, perm_iso.inverse()


def is_degenerate_along(c: Cube, s: int) -> bool:
    ctx = c.ctx
    return all(is_invertible(c.d(s, m)) for m in c.masks() if m & ctx.bit(s))


# block presentation along a direction


@dataclass
class BlockMorphism:
    """phi = (nn, dn; nd, dd)_s; each entry maps a subset mask T (s not in T) to a matrix.

    phi_T = [[nn, f dn], [nd, dd]] and phi_{T+s} = [[nn, dn], [f nd, dd]].
    """

    ctx: RegularContext
    s: int
    source: object
    target: object
    nn: dict
    dn: dict
    nd: dict
    dd: dict

    def masks(self):
        sb = self.ctx.bit(self.s)
        return [m for m in range(1 << self.ctx.size) if not m & sb]

    def __eq__(self, other):
        if not isinstance(other, BlockMorphism):
            return NotImplemented
        return (self.s == other.s and self.nn == other.nn and self.dn == other.dn
                and self.nd == other.nd and self.dd == other.dd)


def _nondeg_count(sig: Signature, s: int) -> int:
    k = sum(1 for a in sig.active if s in a)
    if any(s not in a for a in sig.active[:k]) and k:
        raise NotBlockCompatible("non-degenerate coordinates along s must come first")
    return k


def blocks_of(phi: CubeMorphism, s: int, src=None, tgt=None) -> BlockMorphism:
    ctx = phi.ctx
    src = as_signature(src) if src is not None else _guess_sig(phi.source, ctx)
    tgt = as_signature(tgt) if tgt is not None else _guess_sig(phi.target, ctx)
    k, k2 = _nondeg_count(src, s), _nondeg_count(tgt, s)
    r, r2 = src.r, tgt.r
    f = ctx.f(s)
    sb = ctx.bit(s)
    nn, dn, nd, dd = {}, {}, {}, {}
    for m in range(1 << ctx.size):
        if m & sb:
            continue
        low, high = phi[m], phi[m | sb]
        a = low.slice(0, k2, 0, k)
        c = low.slice(k2, r2, 0, k)
        d = low.slice(k2, r2, k, r)
        b = high.slice(0, k2, k, r)
        if (high.slice(0, k2, 0, k) != a or high.slice(k2, r2, k, r) != d
                or low.slice(0, k2, k, r) != b.scale(f)
                or high.slice(k2, r2, 0, k) != c.scale(f)):
            raise NotBlockCompatible(f"component pair at T={{{subset_key(ctx, m)}}} does not "
                                     f"have the forced f_{s} pattern")
        nn[m], dn[m], nd[m], dd[m] = a, b, c, d
    return BlockMorphism(ctx, s, src, tgt, nn, dn, nd, dd)


def _guess_sig(c: Cube, ctx: RegularContext) -> Signature:
    """Read the signature off a cube built by make_typical."""
    r = c.rank(0)
    act = [set() for _ in range(r)]
    for s in ctx.indices:
        d = c.d(s, ctx.bit(s))
        for i in range(r):
            if not d[i, i].is_one():
                act[i].add(s)
    return Signature(act, ctx.indices)


def morphism_of_blocks(b: BlockMorphism) -> CubeMorphism:
    ctx = b.ctx
    f = ctx.f(b.s)
    sb = ctx.bit(b.s)
    ring = ctx.ring
    comps = [None] * (1 << ctx.size)
    for m in b.masks():
        comps[m] = LMatrix.block(ring, [[b.nn[m], b.dn[m].scale(f)], [b.nd[m], b.dd[m]]])
        comps[m | sb] = LMatrix.block(ring, [[b.nn[m], b.dn[m]], [b.nd[m].scale(f), b.dd[m]]])
    return CubeMorphism(make_typical(ctx, b.source), make_typical(ctx, b.target), comps)


def compose_blocks(psi: BlockMorphism, phi: BlockMorphism) -> BlockMorphism:
    """psi after phi through the block composition rule."""
    if psi.s != phi.s:
        raise ShapeMismatch("block presentations along different directions")
    f = phi.ctx.f(phi.s)
    nn, dn, nd, dd = {}, {}, {}, {}
    for m in phi.masks():
        a1, b1, c1, d1 = phi.nn[m], phi.dn[m], phi.nd[m], phi.dd[m]
        a2, b2, c2, d2 = psi.nn[m], psi.dn[m], psi.nd[m], psi.dd[m]
        nn[m] = a2 @ a1 + (b2 @ c1).scale(f)
        dn[m] = a2 @ b1 + b2 @ d1
        nd[m] = c2 @ a1 + d2 @ c1
        dd[m] = (c2 @ b1).scale(f) + d2 @ d1
    return BlockMorphism(phi.ctx, phi.s, phi.source, psi.target, nn, dn, nd, dd)


# upside-down involution


def ud_signature(sig: Signature, s: int) -> Signature:
    """Flip s in every active set; the old degenerate coordinates move to the front."""
    k = sum(1 for a in sig.active if s in a)
    nondeg, deg = sig.active[:k], sig.active[k:]
    flipped = [a | {s} for a in deg] + [a - {s} for a in nondeg]
    return Signature(flipped, sig.directions)


def ud_type(t: TypicalType, s: int):
    """UD_s on objects.  Returns (r, n with n_s -> r - n_s) when the flip is a chain,
    otherwise the flipped Signature."""
    flipped = ud_signature(t.signature(), s)
    as_t = flipped.to_type()
    if as_t is not None and flipped.is_canonical():
        return as_t
    return flipped


def ud_blocks(b: BlockMorphism) -> BlockMorphism:
    return BlockMorphism(b.ctx, b.s, ud_signature(as_signature(b.source), b.s),
                         ud_signature(as_signature(b.target), b.s),
                         dict(b.dd), dict(b.nd), dict(b.dn), dict(b.nn))


def ud_morphism(phi: CubeMorphism, s: int, src=None, tgt=None) -> CubeMorphism:
    return morphism_of_blocks(ud_blocks(blocks_of(phi, s, src, tgt)))


# isomorphism criteria


def _h0_component_iso(m: LMatrix, killed) -> bool:
    q = m.quotient_map(killed)
    if q.rows != q.cols:
        return False
    if q.rows == 0:
        return True
    d = det(q)
    return d.is_unit() if hasattr(d, "is_unit") else False


@dataclass
class IsoReport:
    iso: bool
    h0_some: bool
    h0_all: bool
    tot_quasi_iso: bool
    chosen_s: int | None
    exact_tot: bool

    def consistent(self) -> bool:
        ok = self.iso == self.h0_some == self.h0_all and (not self.iso or self.tot_quasi_iso)
        if self.exact_tot:
            ok = ok and (self.tot_quasi_iso == self.iso)
        return ok

    def as_tuple(self):
        return (self.iso, self.h0_some, self.h0_all, self.tot_quasi_iso)


def _tot_map(a: CubeMorphism) -> ChainMap:
    """Tot(a) assembled blockwise on the subset basis used by total_complex."""
    from .cube import tot_basis
    src, tgt = total_complex(a.source), total_complex(a.target)
    basis = tot_basis(a.source)
    comps = {p: LMatrix.direct_sum(a.ring, [a[t] for t in ts]) for p, ts in basis.items()}
    return ChainMap(src, tgt, comps)


def iso_characterization(a: CubeMorphism, s: int | None = None) -> IsoReport:
    """Conditions (1)-(4) for an endomorphism of Typ(f_S)^{+m}, each computed on its own."""
    ctx = a.ctx
    s = ctx.indices[0] if s is None and ctx.indices else s
    c1 = all(is_invertible(m) for m in a.components)

    def h0_iso(u):
        killed = [ctx.sequence[u]]
        ub = ctx.bit(u)
        return all(_h0_component_iso(a[m], killed) for m in a.source.masks() if not m & ub)

    c2 = h0_iso(s) if s is not None else c1
    c3 = all(h0_iso(u) for u in ctx.indices) if ctx.indices else c1
    tm = _tot_map(a)
    c4 = is_quasi_iso(tm)
    exact = ctx.ring.nvars == 1
    return IsoReport(c1, c2, c3, c4, s, exact)


def variant_iso(f: CubeMorphism, s: int) -> tuple[bool, bool]:
    """(f iso, H_0^s(f) iso) for an endomorphism of a cube non-degenerate along s."""
    ctx = f.ctx
    x = f.source
    sb = ctx.bit(s)
    r = x.rank(0)
    fs = ctx.f(s)
    for m in x.masks():
        if m & sb:
            if x.d(s, m) != LMatrix.scalar(ctx.ring, fs, r):
                raise NotNonDegenerate(f"d^{s} is not f_{s} times the identity")
    c1 = all(is_invertible(m) for m in f.components)
    killed = [ctx.sequence[s]]
    c2 = all(_h0_component_iso(f[m], killed) for m in x.masks() if not m & sb)
    return c1, c2


def lift_h0(ctx: RegularContext, gbar: LMatrix, src, tgt, along) -> CubeMorphism:
    """A morphism g: Typ(src) -> Typ(tgt) with H_0(g) = gbar.

    ``along`` is a direction s or a collection of directions T.  gbar is the
    base component of the map between the H_0^T cubes: it acts on the
    coordinates whose active sets contain T.  Entries are lifted by the
    canonical section (they already avoid the quotiented variables).
    """
    T = {along} if isinstance(along, int) else set(along)
    s_sig, t_sig = as_signature(src), as_signature(tgt)
    killed = [ctx.sequence[u] for u in sorted(T)]
    si = [j for j, a in enumerate(s_sig.active) if T <= a]
    ti = [i for i, a in enumerate(t_sig.active) if T <= a]
    if gbar.shape != (len(ti), len(si)):
        raise NotLiftableShape(f"expected a {len(ti)}x{len(si)} matrix, got {gbar.shape}")
    ring = ctx.ring
    lifted = gbar.quotient_map(killed)
    F = [[ring.zero] * s_sig.r for _ in range(t_sig.r)]
    for a, i in enumerate(ti):
        for b, j in enumerate(si):
            F[i][j] = lifted[a, b]
    try:
        g = morphism_from_base(ctx, s_sig, t_sig, LMatrix(ring, t_sig.r, s_sig.r, F))
    except NotBlockCompatible as e:
        raise NotLiftableShape(str(e)) from None
    if not g.is_natural():
        raise NotLiftableShape("lift is not natural")
    back = g[0].submatrix(ti, si).quotient_map(killed)
    if back != lifted:
        raise NotLiftableShape("lift does not reduce to the given map")
    return g


def h0_of_lift(ctx, g: CubeMorphism, src, tgt, along) -> LMatrix:
    T = {along} if isinstance(along, int) else set(along)
    s_sig, t_sig = as_signature(src), as_signature(tgt)
    si = [j for j, a in enumerate(s_sig.active) if T <= a]
    ti = [i for i, a in enumerate(t_sig.active) if T <= a]
    return g[0].submatrix(ti, si).quotient_map([ctx.sequence[u] for u in sorted(T)])


# split exactness for powers of the fundamental typical cube


def fundamental_morphism(ctx: RegularContext, M: LMatrix) -> CubeMorphism:
    """The morphism Typ(f_S)^{+cols} -> Typ(f_S)^{+rows} with every component M."""
    return morphism_from_base(ctx, fundamental(ctx, M.cols), fundamental(ctx, M.rows), M)


def _residue(ctx, M: LMatrix) -> LMatrix:
    return M.map(lambda v: ctx.ring.const(v.at_origin()))


@dataclass
class SplitResult:
    gamma: LMatrix
    delta: LMatrix
    kernel: LMatrix
    report: IsoReport


def _independent_columns(res: LMatrix, want: int) -> list[int]:
    chosen = []
    for j in range(res.cols):
        trial = chosen + [j]
        if rank(res.submatrix(range(res.rows), trial)) == len(trial):
            chosen = trial
        if len(chosen) == want:
            break
    return chosen


def split_exact_from_h0(ctx: RegularContext, alpha: LMatrix, beta: LMatrix) -> SplitResult:
    """Split Typ^l -a-> Typ^m -b-> Typ^n once H_0^S of it is short exact.

    Returns gamma with beta gamma = id, a basis ``kernel`` of ker beta and the
    comparison delta with alpha = kernel delta (an isomorphism).
    """
    ring = ctx.ring
    l, m, n = alpha.cols, alpha.rows, beta.rows
    if beta.cols != m:
        raise ShapeMismatch("alpha and beta are not composable")
    if not (beta @ alpha).is_zero():
        raise H0NotExact("beta alpha is not zero")
    killed = [ctx.sequence[s] for s in ctx.indices]
    ab, bb = alpha.quotient_map(killed), beta.quotient_map(killed)
    ra, rb = rank(_residue(ctx, ab)), rank(_residue(ctx, bb))
    if not (ra == l and rb == n and l + n == m):
        raise H0NotExact(f"H_0^S sequence is not short exact (ranks {ra}, {rb}; l+n={l + n}, m={m})")
    # gamma-bar: pick n columns of beta-bar with invertible residue
    cols = _independent_columns(_residue(ctx, bb), n) if n else []
    sub = bb.submatrix(range(n), cols)
    sub_inv = inverse(sub)
    g = [[ring.zero] * n for _ in range(m)]
    for a, j in enumerate(cols):
        for b in range(n):
            g[j][b] = sub_inv[a, b]
    gamma = LMatrix(ring, m, n, g)  # canonical lift: entries already avoid killed variables
    bg = beta @ gamma
    gamma = gamma @ inverse(bg)
    if not (beta @ gamma).is_identity():
        raise AssertionError("beta gamma is not the identity")
    proj = LMatrix.identity(ring, m) - gamma @ beta
    kcols = _independent_columns(_residue(ctx, proj), l)
    kernel = proj.submatrix(range(m), kcols)
    if not (beta @ kernel).is_zero():
        raise AssertionError("kernel basis is not killed by beta")
    krows = _independent_columns(_residue(ctx, kernel).T, l) if l else []
    left = inverse(kernel.submatrix(krows, range(l))) if l else LMatrix(ring, 0, 0)
    delta = left @ alpha.submatrix(krows, range(l)) if l else LMatrix(ring, 0, 0)
    if kernel @ delta != alpha:
        raise AssertionError("alpha does not factor through the kernel")
    report = iso_characterization(fundamental_morphism(ctx, delta)) if l else IsoReport(
        True, True, True, True, None, False)
    return SplitResult(gamma, delta, kernel, report)
