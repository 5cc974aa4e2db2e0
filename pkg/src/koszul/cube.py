"""S-cubes of free modules over L_d.

A subset T of S is a bitmask over ``ctx.indices``.  A cube stores a rank
per subset and, for every k in T, the boundary d^k_T: x_T -> x_{T - k}
as a rank(T - k) x rank(T) matrix.

Cubes over a quotient ring L/f_U are ordinary cubes whose entries do not
involve the variables f_U (the canonical section of the quotient map).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable

from .chain import ChainComplex
from .errors import NotKoszulDirection, OverlappingSets, ShapeMismatch
from .linalg import (LMatrix, det, inverse, is_invertible, local_equivalence_form,
                     solve_fraction_field, solve_in_local)
from .ring import RegularContext

DEFAULT_MMAX = 16


def m_max() -> int:
    """Annihilation exponent bound; overridable through KOSZUL_MMAX."""
    try:
        return int(os.environ.get("KOSZUL_MMAX", DEFAULT_MMAX))
    except ValueError:
        return DEFAULT_MMAX


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def submasks(mask: int):
    """All submasks of ``mask`` in increasing numeric order."""
    return [t for t in range(mask + 1) if t & ~mask == 0]


def sub_context(ctx: RegularContext, keep: Iterable[int]) -> RegularContext:
    keep = set(keep)
    return RegularContext(ctx.ring, {s: v for s, v in ctx.sequence.items() if s in keep})


def translate(mask: int, src: RegularContext, dst: RegularContext) -> int:
    """Re-express a subset of src.indices as a mask over dst.indices."""
    return dst.mask(src.members(mask))


def subset_key(ctx: RegularContext, mask: int) -> str:
    members = ctx.members(mask)
    return ",".join(str(s) for s in members) if members else "∅"


class Cube:
    """An S-cube of free L-modules given by vertex ranks and boundary matrices."""

    def __init__(self, ctx: RegularContext, ranks, boundaries: dict, check_shapes: bool = True):
        self.ctx = ctx
        self.ring = ctx.ring
        n = 1 << ctx.size
        if isinstance(ranks, dict):
            ranks = [ranks.get(t, 0) for t in range(n)]
        if len(ranks) != n:
            raise ShapeMismatch("need one rank per subset")
        self.ranks = tuple(ranks)
        self._d = {}
        for t in range(n):
            for k in ctx.members(t):
                m = boundaries.get((k, t))
                shape = (self.ranks[t & ~ctx.bit(k)], self.ranks[t])
                if m is None:
                    m = LMatrix(self.ring, *shape)
                elif check_shapes and m.shape != shape:
                    raise ShapeMismatch(f"d^{k}_{subset_key(ctx, t)} has shape {m.shape}, "
                                        f"expected {shape}")
                self._d[(k, t)] = m

    def rank(self, t: int) -> int:
        return self.ranks[t]

    def d(self, k: int, t: int) -> LMatrix:
        return self._d[(k, t)]

    def boundaries(self) -> dict:
        return dict(self._d)

    def masks(self) -> range:
        return range(1 << self.ctx.size)

    def __eq__(self, other):
        if not isinstance(other, Cube):
            return NotImplemented
        return self.ctx == other.ctx and self.ranks == other.ranks and self._d == other._d

    def __repr__(self):
        return f"Cube(S={list(self.ctx.indices)}, ranks={list(self.ranks)})"


@dataclass(frozen=True)
class Violation:
    subset: str
    j: int
    k: int

    def __str__(self):
        return f"face law fails at T={{{self.subset}}} for (j, k) = ({self.j}, {self.k})"


def validate(c: Cube) -> list[Violation]:
    """Every (T, j, k) with j < k in T where the two composites T -> T - {j, k} differ."""
    ctx = c.ctx
    out = []
    for t in c.masks():
        members = ctx.members(t)
        for a, j in enumerate(members):
            for k in members[a + 1:]:
                bj, bk = ctx.bit(j), ctx.bit(k)
                lhs = c.d(j, t & ~bk) @ c.d(k, t)
                rhs = c.d(k, t & ~bj) @ c.d(j, t)
                if lhs != rhs:
                    out.append(Violation(subset_key(ctx, t), j, k))
    return out


def restrict(c, U: Iterable[int], V: Iterable[int]):
    """x|_U^V: the U-cube W -> x_{W + V}.  Works on Cube and PresentedCube."""
    U, V = set(U), set(V)
    if U & V:
        raise OverlappingSets(f"U and V share {sorted(U & V)}")
    ctx = c.ctx
    for s in U | V:
        if s not in ctx.sequence:
            raise OverlappingSets(f"{s} is not an index of the cube")
    new = sub_context(ctx, U)
    vmask = ctx.mask(V)

    def old(w):
        return translate(w, new, ctx) | vmask

    bounds = {}
    for w in range(1 << new.size):
        for k in new.members(w):
            bounds[(k, w)] = c.d(k, old(w))
    if isinstance(c, PresentedCube):
        return PresentedCube(new, {w: c.presentation(old(w)) for w in range(1 << new.size)}, bounds,
                             base=c.base)
    return Cube(new, [c.rank(old(w)) for w in range(1 << new.size)], bounds)


# Koszul recognizer


def koszul_exponent(d: LMatrix, f) -> int | None:
    """Least m <= m_max with f^m L^r inside image(d), or None."""
    if d.rows != d.cols:
        return None
    if d.rows == 0:
        return 0
    if det(d).is_zero():
        return None
    inv = solve_fraction_field(d, LMatrix.identity(d.ring, d.rows))
    fm = d.ring.one
    for m in range(m_max() + 1):
        try:
            inv.scale(fm).to_local()
            return m
        except ValueError:
            fm = fm * f
    return None


def is_koszul(c: Cube) -> tuple[bool, dict]:
    """(verdict, minimal exponent per direction); exponents map to None on failure."""
    ctx = c.ctx
    exps = {}
    ok = True
    for k in ctx.indices:
        f = ctx.f(k)
        worst = 0
        for t in c.masks():
            if not t & ctx.bit(k):
                continue
            e = koszul_exponent(c.d(k, t), f)
            if e is None:
                worst = None
                break
            worst = max(worst, e)
        exps[k] = worst
        if worst is None:
            ok = False
    return ok, exps


# presented modules and H_0


@dataclass(frozen=True)
class PresentedModule:
    """(L/f_base)^r / image(presentation) for a square injective presentation."""

    presentation: LMatrix
    base: tuple = field(default=())

    @property
    def ambient_rank(self) -> int:
        return self.presentation.rows

    def is_zero(self) -> bool:
        return is_invertible(self.presentation)

    def contains(self, v: LMatrix) -> bool:
        """Whether every column of v lies in image(presentation)."""
        if self.ambient_rank == 0:
            return True
        return solve_in_local(self.presentation, v) is not None


def eq_mod_image(a: LMatrix, b: LMatrix, pres: PresentedModule) -> bool:
    if a.shape != b.shape:
        raise ShapeMismatch(f"{a.shape} vs {b.shape}")
    if a.rows != pres.ambient_rank:
        raise ShapeMismatch("columns do not live in the presented module's ambient")
    diff = a - b
    if diff.is_zero():
        return True
    return pres.contains(diff)


class PresentedCube:
    """Cube whose vertices are PresentedModules and whose boundaries act modulo images."""

    def __init__(self, ctx: RegularContext, presentations: dict, boundaries: dict, base=()):
        self.ctx = ctx
        self.ring = ctx.ring
        self.base = tuple(base)
        self._p = {t: presentations[t] for t in range(1 << ctx.size)}
        self._d = dict(boundaries)

    def presentation(self, t: int) -> LMatrix:
        return self._p[t]

    def module(self, t: int) -> PresentedModule:
        return PresentedModule(self._p[t], self.base)

    def rank(self, t: int) -> int:
        return self._p[t].rows

    def d(self, k: int, t: int) -> LMatrix:
        return self._d[(k, t)]

    def masks(self) -> range:
        return range(1 << self.ctx.size)

    def face_violations(self) -> list[Violation]:
        ctx = self.ctx
        out = []
        for t in self.masks():
            members = ctx.members(t)
            for a, j in enumerate(members):
                for k in members[a + 1:]:
                    bj, bk = ctx.bit(j), ctx.bit(k)
                    target = t & ~bj & ~bk
                    lhs = self.d(j, t & ~bk) @ self.d(k, t)
                    rhs = self.d(k, t & ~bj) @ self.d(j, t)
                    if not eq_mod_image(lhs, rhs, self.module(target)):
                        out.append(Violation(subset_key(ctx, t), j, k))
        return out

    def boundaries_well_defined(self) -> bool:
        """Each boundary maps image(presentation) into the target's image."""
        for (k, t), m in self._d.items():
            tgt = self.module(t & ~self.ctx.bit(k))
            img = m @ self._p[t]
            if img.cols and not tgt.contains(img):
                return False
        return True

    def same_as(self, other: "PresentedCube") -> bool:
        """Identical presentation and boundary matrices (no isomorphism allowed)."""
        return (self.ctx == other.ctx and self._p == other._p and self._d == other._d)

    def __repr__(self):
        return f"PresentedCube(S={list(self.ctx.indices)}, ranks={[self.rank(t) for t in self.masks()]})"


def _require_koszul_direction(c, k):
    ctx = c.ctx
    if k not in ctx.sequence:
        raise NotKoszulDirection(f"{k} is not a direction of the cube")
    for t in c.masks():
        if t & ctx.bit(k):
            m = c.d(k, t)
            if m.rows != m.cols or (m.rows and det(m).is_zero()):
                raise NotKoszulDirection(f"d^{k}_{subset_key(ctx, t)} is not square injective")


def h0(c: Cube, k: int) -> PresentedCube:
    """H_0^k(c): the (S - k)-cube T -> coker d^k_{T + k}, boundaries inherited from c."""
    _require_koszul_direction(c, k)
    ctx = c.ctx
    new = sub_context(ctx, [s for s in ctx.indices if s != k])
    kb = ctx.bit(k)
    pres, bounds = {}, {}
    for w in range(1 << new.size):
        t = translate(w, new, ctx)
        pres[w] = c.d(k, t | kb)
        for j in new.members(w):
            bounds[(j, w)] = c.d(j, t)
    return PresentedCube(new, pres, bounds, base=_base_of(c))


def _base_of(c) -> tuple:
    return getattr(c, "base", ())


@dataclass
class FreeH0:
    """H_0^k(c) rewritten as a cube of free modules over L/f_k.

    ``P[w]`` is the left factor with P d Q = diag(I, f I_n); the module at w
    is identified with the last ``n`` coordinates of P v reduced mod f_k.
    """

    cube: Cube
    P: dict
    Q: dict
    n: dict


def h0_free(c: Cube, k: int) -> FreeH0:
    """H_0^k(c) as a free cube over L/f_k; requires c to be simple along k."""
    _require_koszul_direction(c, k)
    ctx = c.ctx
    f = ctx.f(k)
    killed = [ctx.sequence[k]]
    new = sub_context(ctx, [s for s in ctx.indices if s != k])
    kb = ctx.bit(k)
    P, Q, n = {}, {}, {}
    for w in range(1 << new.size):
        t = translate(w, new, ctx)
        P[w], Q[w], n[w] = local_equivalence_form(c.d(k, t | kb), f)
    Pinv = {w: inverse(p) for w, p in P.items()}
    bounds = {}
    for w in range(1 << new.size):
        t = translate(w, new, ctx)
        r = c.rank(t)
        for j in new.members(w):
            w2 = w & ~new.bit(j)
            r2 = c.rank(translate(w2, new, ctx))
            m = P[w2] @ c.d(j, t) @ Pinv[w]
            m = m.slice(r2 - n[w2], r2, r - n[w], r).quotient_map(killed)
            bounds[(j, w)] = m
    out = Cube(new, [n[w] for w in range(1 << new.size)], bounds)
    out.base = _base_of(c) + tuple(killed)
    return FreeH0(out, P, Q, n)


def h0_iterated(c: Cube, T: Iterable[int], order: Iterable[int] | None = None):
    """H_0^T(c), taking directions in ascending order (or ``order``).

    All but the last step pass through ``h0_free``, so intermediate
    homology must be free over its quotient ring; NotSimpleShape otherwise.
    """
    T = sorted(set(T))
    seq = list(order) if order is not None else T
    if sorted(seq) != T:
        raise ValueError("order must enumerate T")
    if not seq:
        return c
    cur = c
    for k in seq[:-1]:
        cur = h0_free(cur, k).cube
    return h0(cur, seq[-1])


def is_reduced(c: Cube) -> bool:
    """f_s kills every vertex of H_0^s(c), for each direction s."""
    ok, _ = is_koszul(c)
    if not ok:
        return False
    ctx = c.ctx
    for s in ctx.indices:
        hc = h0(c, s)
        f = ctx.f(s)
        for t in hc.masks():
            r = hc.rank(t)
            if r and not eq_mod_image(LMatrix.scalar(c.ring, f, r), LMatrix(c.ring, r, r),
                                      hc.module(t)):
                return False
    return True


# total complex


def koszul_sign(ctx: RegularContext, k: int, t: int) -> int:
    below = sum(1 for j in ctx.members(t) if j < k)
    return -1 if below % 2 else 1


def tot_basis(c: Cube) -> dict[int, list[int]]:
    """Degree p -> the subsets of size p in increasing mask order."""
    out: dict[int, list[int]] = {}
    for t in c.masks():
        out.setdefault(popcount(t), []).append(t)
    return out


def total_complex(c: Cube) -> ChainComplex:
    """Tot(c)_p = sum over |T| = p of x_T, d = sum_k (-1)^{#{j in T : j < k}} d^k_T."""
    ctx = c.ctx
    ring = c.ring
    basis = tot_basis(c)
    ranks = {p: sum(c.rank(t) for t in ts) for p, ts in basis.items()}
    diffs = {}
    for p in range(1, ctx.size + 1):
        rows = basis[p - 1]
        cols = basis[p]
        grid = []
        for u in rows:
            brow = []
            for t in cols:
                diff = t & ~u
                if (u & ~t) == 0 and popcount(diff) == 1:
                    k = ctx.members(diff)[0]
                    m = c.d(k, t)
                    if koszul_sign(ctx, k, t) < 0:
                        m = -m
                else:
                    m = LMatrix(ring, c.rank(u), c.rank(t))
                brow.append(m)
            grid.append(brow)
        diffs[p] = _block_allow_empty(ring, grid, [c.rank(u) for u in rows], [c.rank(t) for t in cols])
    return ChainComplex(ring, ranks, diffs)


def _block_allow_empty(ring, grid, heights, widths):
    H, W = sum(heights), sum(widths)
    if H == 0 or W == 0:
        return LMatrix(ring, H, W)
    grid = [row for row, h in zip(grid, heights) if h]
    return LMatrix.block(ring, grid)


# morphisms


class CubeMorphism:
    """Natural transformation between cubes over the same context: one matrix per subset."""

    def __init__(self, source: Cube, target: Cube, components):
        if source.ctx != target.ctx:
            raise ShapeMismatch("cubes live over different contexts")
        self.source = source
        self.target = target
        self.ctx = source.ctx
        self.ring = source.ring
        if isinstance(components, dict):
            components = [components[t] for t in source.masks()]
        comps = tuple(components)
        for t, m in enumerate(comps):
            if m.shape != (target.rank(t), source.rank(t)):
                raise ShapeMismatch(f"component at {subset_key(self.ctx, t)} has shape {m.shape}")
        self.components = comps

    def __getitem__(self, t: int) -> LMatrix:
        return self.components[t]

    def naturality_violations(self) -> list[tuple[int, str]]:
        out = []
        ctx = self.ctx
        for t in self.source.masks():
            for k in ctx.members(t):
                u = t & ~ctx.bit(k)
                if self[u] @ self.source.d(k, t) != self.target.d(k, t) @ self[t]:
                    out.append((k, subset_key(ctx, t)))
        return out

    def is_natural(self) -> bool:
        return not self.naturality_violations()

    def is_iso(self) -> bool:
        return all(is_invertible(m) for m in self.components)

    def inverse(self) -> "CubeMorphism":
        return CubeMorphism(self.target, self.source, [inverse(m) for m in self.components])

    def __matmul__(self, other: "CubeMorphism") -> "CubeMorphism":
        """self after other."""
        if other.target.ranks != self.source.ranks:
            raise ShapeMismatch("morphisms are not composable")
        return CubeMorphism(other.source, self.target,
                            [a @ b for a, b in zip(self.components, other.components)])

    def __add__(self, other):
        return CubeMorphism(self.source, self.target,
                            [a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other):
        return CubeMorphism(self.source, self.target,
                            [a - b for a, b in zip(self.components, other.components)])

    def __eq__(self, other):
        if not isinstance(other, CubeMorphism):
            return NotImplemented
        return self.components == other.components

    @classmethod
    def identity(cls, c: Cube) -> "CubeMorphism":
        return cls(c, c, [LMatrix.identity(c.ring, c.rank(t)) for t in c.masks()])

    @classmethod
    def zero(cls, a: Cube, b: Cube) -> "CubeMorphism":
        return cls(a, b, [LMatrix(a.ring, b.rank(t), a.rank(t)) for t in a.masks()])

    def __repr__(self):
        return f"CubeMorphism({self.source!r} -> {self.target!r})"


def direct_sum(a: Cube, b: Cube) -> Cube:
    if a.ctx != b.ctx:
        raise ShapeMismatch("cubes live over different contexts")
    ring = a.ring
    bounds = {key: LMatrix.direct_sum(ring, [a.d(*key), b.d(*key)]) for key in a.boundaries()}
    return Cube(a.ctx, [x + y for x, y in zip(a.ranks, b.ranks)], bounds)


def direct_sum_morphism(f: CubeMorphism, g: CubeMorphism) -> CubeMorphism:
    ring = f.ring
    return CubeMorphism(direct_sum(f.source, g.source), direct_sum(f.target, g.target),
                        [LMatrix.direct_sum(ring, [x, y]) for x, y in zip(f.components, g.components)])


def conjugate(c: Cube, units: dict) -> Cube:
    """The cube isomorphic to c via the vertex isomorphisms ``units[t]``: d' = U_{T-k} d U_T^{-1}."""
    ctx = c.ctx
    inv = {t: inverse(u) for t, u in units.items()}
    bounds = {}
    for (k, t), m in c.boundaries().items():
        bounds[(k, t)] = units[t & ~ctx.bit(k)] @ m @ inv[t]
    return Cube(ctx, c.ranks, bounds)


def h0_morphism(phi: CubeMorphism, k: int) -> dict:
    """Components of H_0^k(phi): at w, the matrix phi_w acting on coker presentations."""
    ctx = phi.ctx
    new = sub_context(ctx, [s for s in ctx.indices if s != k])
    return {w: phi[translate(w, new, ctx)] for w in range(1 << new.size)}


def check_restriction_homology_identity(c: Cube, X: Iterable[int], Y: Iterable[int]) -> bool:
    """H_0^Y(c)|_X^T equals H_0^Y(c|_{X+Y}^T) for every T outside X and Y.

    The left side takes homology first and restricts afterwards; the right
    side restricts first.  Both the X-cube data and the outer boundaries
    (morphisms of X-cubes in the remaining directions) are compared as
    matrices.
    """
    X, Y = set(X), set(Y)
    if X & Y:
        raise OverlappingSets("X and Y must be disjoint")
    ctx = c.ctx
    rest = [s for s in ctx.indices if s not in X | Y]
    left_all = h0_iterated(c, Y)
    ok = True
    for tm in range(1 << len(rest)):
        T = [s for i, s in enumerate(rest) if tm >> i & 1]
        lhs = restrict(left_all, X, T)
        rhs = h0_iterated(restrict(c, X | Y, T), Y)
        if not _same_data(lhs, rhs):
            return False
        # outer boundaries d^k_T for k in T
        for k in T:
            Tk = [s for s in T if s != k]
            big = h0_iterated(restrict(c, X | Y | {k}, Tk), Y)
            ok = ok and _outer_boundary_matches(left_all, X, T, k, big)
            if not ok:
                return False
    return ok


def _same_data(a, b) -> bool:
    if isinstance(a, PresentedCube) != isinstance(b, PresentedCube):
        return False
    if isinstance(a, PresentedCube):
        return a.same_as(b)
    return a == b


def _outer_boundary_matches(left_all, X, T, k, big) -> bool:
    ctx = left_all.ctx
    xctx = sub_context(ctx, X)
    tmask = ctx.mask(T)
    for w in range(1 << xctx.size):
        wl = translate(w, xctx, ctx)
        lhs = left_all.d(k, wl | tmask)
        rhs = big.d(k, translate(w, xctx, big.ctx) | big.ctx.bit(k))
        if lhs != rhs:
            return False
    return True
