"""Seeded instance generators shared by the verify suites, the CLI and the tests."""

from __future__ import annotations

import random

from .chain import ChainComplex, ChainMap
from .cube import Cube, conjugate
from .homotopy import HSquare, c_homotopy_from
from .linalg import LMatrix, inverse
from .ring import BaseField, LocalRing, RegularContext
from .typical import TypicalType, as_signature, make_typical, morphism_from_base

VARIABLES = ("x", "y", "z", "w")


def context(d: int, field: BaseField | None = None) -> RegularContext:
    return RegularContext.standard(VARIABLES[:d], field or BaseField.rationals())


def scalar(ring: LocalRing, rng: random.Random, lo: int = -2, hi: int = 2, degree: int = 1):
    """c0 + sum c_i g_i (+ one random quadratic monomial when degree >= 2)."""
    v = ring.const(rng.randint(lo, hi))
    for g in ring.gens():
        v = v + ring.const(rng.randint(lo, hi)) * g
    if degree >= 2 and ring.nvars:
        a, b = rng.choice(ring.gens()), rng.choice(ring.gens())
        v = v + ring.const(rng.randint(lo, hi)) * a * b
    return v


def unit(ring, rng):
    while True:
        v = scalar(ring, rng)
        if v.is_unit():
            return v


def nonunit(ring, rng):
    v = scalar(ring, rng)
    return v - ring.const(v.at_origin()) if ring.nvars else ring.zero


def matrix(ring, rows, cols, rng, **kw) -> LMatrix:
    return LMatrix(ring, rows, cols, [[scalar(ring, rng, **kw) for _ in range(cols)]
                                      for _ in range(rows)])


def unit_matrix(ring, n: int, rng: random.Random, steps: int = 3) -> LMatrix:
    """A product of random elementary matrices and unit diagonals (always invertible over L)."""
    M = LMatrix.identity(ring, n)
    for _ in range(steps if n else 0):
        i, j = rng.randrange(n), rng.randrange(n)
        E = [[ring.one if a == b else ring.zero for b in range(n)] for a in range(n)]
        if i != j:
            E[i][j] = scalar(ring, rng)
        else:
            E[i][i] = unit(ring, rng)
        M = M @ LMatrix(ring, n, n, E)
    return M


def typical_type(rng: random.Random, directions, max_rank: int = 4, min_rank: int = 0) -> TypicalType:
    r = rng.randint(min_rank, max_rank)
    return TypicalType(r, {s: rng.randint(0, r) for s in directions})


def conjugated_simple(ctx: RegularContext, t, rng: random.Random) -> Cube:
    """Typ(t) conjugated by random vertexwise automorphisms; its normal form is t."""
    c = make_typical(ctx, t)
    return conjugate(c, {m: unit_matrix(ctx.ring, c.rank(m), rng) for m in c.masks()})


def non_simple_koszul(ctx: RegularContext, rng: random.Random, max_rank: int = 4) -> Cube:
    """A conjugated diagonal Koszul cube with some f_s^e, e >= 2, on the diagonal."""
    ring = ctx.ring
    r = rng.randint(1, max(1, max_rank))
    exps = {s: [rng.choice([0, 1, 2]) for _ in range(r)] for s in ctx.indices}
    s0 = rng.choice(ctx.indices)
    exps[s0][rng.randrange(r)] = rng.choice([2, 3])
    bounds = {}
    for t in range(1 << ctx.size):
        for k in ctx.members(t):
            bounds[(k, t)] = LMatrix.diag(ring, [ctx.f(k) ** e for e in exps[k]])
    c = Cube(ctx, [r] * (1 << ctx.size), bounds)
    return conjugate(c, {m: unit_matrix(ring, r, rng) for m in c.masks()})


def typical_morphism(ctx: RegularContext, src, tgt, rng: random.Random):
    """A random morphism Typ(src) -> Typ(tgt): base entries divisible by f over A^tgt_i - A^src_j."""
    a, b = as_signature(src), as_signature(tgt)
    ring = ctx.ring
    F = []
    for ai in b.active:
        row = []
        for aj in a.active:
            v = scalar(ring, rng)
            for u in sorted(ai - aj):
                v = v * ctx.f(u)
            row.append(v)
        F.append(row)
    return morphism_from_base(ctx, a, b, LMatrix(ring, b.r, a.r, F))


def fundamental_endomorphism(ctx: RegularContext, m: int, rng: random.Random, invertible: bool):
    """M for an endomorphism of Typ(f_S)^{+m}: unit determinant, or determinant in the maximal ideal."""
    ring = ctx.ring
    M = unit_matrix(ring, m, rng)
    if invertible:
        return M
    i = rng.randrange(m)
    if rng.random() < 0.5 and ring.nvars:
        D = LMatrix.diag(ring, [nonunit(ring, rng) if k == i else ring.one for k in range(m)])
    else:
        D = LMatrix.diag(ring, [ring.zero if k == i else ring.one for k in range(m)])
    return M @ D @ unit_matrix(ring, m, rng)


def split_sequence(ring, l: int, n: int, rng: random.Random, exact: bool = True):
    """(alpha, beta) scrambled from 0 -> L^l -> L^{l+n} -> L^n -> 0; inexact ones put a maximal-ideal
    element on alpha's diagonal (still beta alpha = 0)."""
    m = l + n
    U = unit_matrix(ring, m, rng)
    a0 = [[ring.zero] * l for _ in range(m)]
    for i in range(l):
        a0[i][i] = ring.one
    if not exact and l:
        a0[0][0] = ring.gens()[0] * unit(ring, rng)
    b0 = [[ring.one if j == l + i else ring.zero for j in range(m)] for i in range(n)]
    alpha = U @ LMatrix(ring, m, l, a0) @ unit_matrix(ring, l, rng)
    beta = unit_matrix(ring, n, rng) @ LMatrix(ring, n, m, b0) @ inverse(U)
    return alpha, beta


# two-term complexes and squares over L_1


def two_term(ring, rng, max_rank: int = 2) -> ChainComplex:
    r1, r0 = rng.randint(1, max_rank), rng.randint(1, max_rank)
    return ChainComplex(ring, {0: r0, 1: r1}, {1: matrix(ring, r0, r1, rng)})


def conjugate_complex(x: ChainComplex, rng) -> tuple[ChainComplex, ChainMap]:
    """(x', a) with a: x -> x' an isomorphism."""
    ring = x.ring
    V, U = unit_matrix(ring, x.rank(1), rng), unit_matrix(ring, x.rank(0), rng)
    y = ChainComplex(ring, {0: x.rank(0), 1: x.rank(1)}, {1: U @ x.d(1) @ inverse(V)})
    return y, ChainMap(x, y, {0: U, 1: V})


def null_homotopic(x: ChainComplex, y: ChainComplex, rng) -> tuple[dict, ChainMap]:
    """(h, dh + hd) for a random degree-one map h."""
    ring = x.ring
    h = {n: matrix(ring, y.rank(n + 1), x.rank(n), rng) for n in x.span(y, pad=1)}
    comps = {}
    for n in x.span(y):
        comps[n] = y.d(n + 1) @ h[n] if n in h else LMatrix(ring, y.rank(n), x.rank(n))
        if n - 1 in h:
            comps[n] = comps[n] + h[n - 1] @ x.d(n)
    return h, ChainMap(x, y, comps)


def chain_map(x: ChainComplex, y: ChainComplex, rng) -> ChainMap:
    _, m = null_homotopic(x, y, rng)
    return m


def random_square(f: ChainMap, rng) -> HSquare:
    """A square out of f: x -> y with a random iso a, random b and witness; g is solved for."""
    x, y = f.source, f.target
    x2, a = conjugate_complex(x, rng)
    y2, b = conjugate_complex(y, rng)
    b = b + chain_map(y, y2, rng)
    k, z = null_homotopic(x, y2, rng)
    a_inv = ChainMap(x2, x, {n: inverse(a[n]) for n in a.degrees()})
    g = (b @ f + z) @ a_inv
    H = c_homotopy_from(k, g @ a, b @ f)
    return HSquare(f, g, a, b, H)
