"""Normal form of simple Koszul cubes.

The recursion picks the smallest direction s.  If every d^s is invertible
the cube is degenerate along s and is normalized through its restriction
to S - s.  Otherwise H_0^s is normalized over L/f_s, its inverse normal
form is lifted to an embedding alpha of a cube that is non-degenerate
along s, the cokernel of alpha (degenerate along s) is normalized, and the
two halves are glued.

Lifting rests on one fact about reduced cubes: a morphism from the
rank-one cube C_A (active set A) into x is the same as a vector v in
x_{S - A}, and its component at U is D_U^{-1} f_{U & A} D_{S - A} v, with
D_U the composite boundary x_U -> x_empty.

Internally the result is a ``Signature``; it is a typical type exactly
when the active sets form a chain.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cube import (Cube, CubeMorphism, h0_free, is_koszul, restrict, sub_context, subset_key,
                   translate, validate)
from .errors import NotInvertible, NotSimple, NotSimpleShape, NoTypicalForm
from .linalg import LMatrix, det, inverse, is_invertible, rank, solve_in_local
from .ring import RegularContext
from .typical import (Signature, TypicalType, make_typical, typ_direct_sum,
                      variant_iso)


@dataclass
class NormalizationResult:
    type: TypicalType | None
    theta: CubeMorphism
    certificate: dict
    signature: Signature = field(default=None)

    @property
    def ok(self) -> bool:
        c = self.certificate
        return c["natural"] and c["unit_determinants"] and c["target_face_laws"]


def _composites(x: Cube) -> dict:
    """D_U: x_U -> x_empty, peeling the smallest index first."""
    ctx = x.ctx
    D = {0: LMatrix.identity(x.ring, x.rank(0))}
    for u in range(1, 1 << ctx.size):
        k = ctx.members(u)[0]
        D[u] = D[u & ~ctx.bit(k)] @ x.d(k, u)
    return D


def _f_product(ctx: RegularContext, members):
    v = ctx.ring.one
    for s in sorted(members):
        v = v * ctx.f(s)
    return v


def _morphism_from_vectors(x: Cube, sig: Signature, vectors: list, D: dict) -> list:
    """Components of the map Sig-cube -> x sending e_i to vectors[i] at vertex S - A_i."""
    ctx = x.ctx
    full = ctx.full
    ring = x.ring
    comps = []
    images = []
    for a, v in zip(sig.active, vectors):
        home = full & ~ctx.mask(a)
        images.append(D[home] @ v)
    for u in range(1 << ctx.size):
        cols = []
        for a, w in zip(sig.active, images):
            b = w.scale(_f_product(ctx, set(ctx.members(u)) & a))
            sol = solve_in_local(D[u], b)
            if sol is None:
                raise NotSimple(f"a lift does not factor through the boundary composite at "
                                f"{{{subset_key(ctx, u)}}}; the cube is not reduced")
            cols.append(sol)
        comps.append(LMatrix.block(ring, [cols]) if cols else LMatrix(ring, x.rank(u), 0))
    return comps


def _residue(ring, m: LMatrix) -> LMatrix:
    return m.map(lambda v: ring.const(v.at_origin()))


def _complete(ring, alpha: LMatrix) -> tuple[LMatrix, LMatrix]:
    """Standard basis columns K with [alpha | K] invertible."""
    n = alpha.rows
    res = _residue(ring, alpha)
    have = rank(res)
    if have != alpha.cols:
        raise NotSimple("embedding is not split injective")
    picked = []
    cur = res
    for j in range(n):
        e = LMatrix(ring, n, 1, [[ring.one if i == j else ring.zero] for i in range(n)])
        trial = LMatrix.block(ring, [[cur, e]]) if cur.cols else e
        if rank(trial) > cur.cols:
            cur = trial
            picked.append(j)
    K = LMatrix(ring, n, len(picked),
                [[ring.one if i == j else ring.zero for j in picked] for i in range(n)])
    B = LMatrix.block(ring, [[alpha, K]]) if alpha.cols and K.cols else (K if not alpha.cols else alpha)
    return B, K


def _is_degenerate(x: Cube, s: int) -> bool:
    ctx = x.ctx
    return all(is_invertible(x.d(s, t)) for t in x.masks() if t & ctx.bit(s))


def _normalize(x: Cube, log: list) -> tuple[Signature, list]:
    """(signature, Theta components) with Theta: x -> cube of the signature."""
    ctx = x.ctx
    ring = x.ring
    r = x.rank(0)
    if any(x.rank(t) != r for t in x.masks()):
        raise NotSimple("vertex ranks differ")
    if ctx.size == 0:
        return Signature([()] * r, ()), [LMatrix.identity(ring, r)]
    s = ctx.indices[0]
    sb = ctx.bit(s)
    rest = sub_context(ctx, ctx.indices[1:])

    if _is_degenerate(x, s):
        log.append({"direction": s, "case": "degenerate", "rank": r})
        sub_sig, sub_theta = _normalize(restrict(x, rest.indices, ()), log)
        sig = Signature(sub_sig.active, ctx.indices)
        comps = [None] * (1 << ctx.size)
        for w in range(1 << rest.size):
            t = translate(w, rest, ctx)
            comps[t] = sub_theta[w]
            comps[t | sb] = sub_theta[w] @ x.d(s, t | sb)
        return sig, comps

    try:
        fh = h0_free(x, s)
    except NotSimpleShape as e:
        raise NotSimple(f"H_0^{s} is not free over the quotient: {e}") from None
    h = fh.cube
    ns = h.rank(0)
    log.append({"direction": s, "case": "non-degenerate", "rank": r, "n_s": ns})
    h_sig, h_theta = _normalize(h, log)
    h_psi = [inverse(m) for m in h_theta]

    # alpha: the s-active part, lifted from H_0^s
    D = _composites(x)
    top_sig = Signature([a | {s} for a in h_sig.active], ctx.indices)
    vectors = []
    for i, a in enumerate(h_sig.active):
        w = rest.full & ~rest.mask(a)
        t = translate(w, rest, ctx)
        zbar = h_psi[w].submatrix(range(ns), [i])
        pad = LMatrix.block(ring, [[LMatrix(ring, r - ns, 1)], [zbar]]) if r > ns else zbar
        vectors.append(inverse(fh.P[w]) @ pad)
    alpha = _morphism_from_vectors(x, top_sig, vectors, D)

    # y = coker alpha, degenerate along s
    Bs, Ks = {}, {}
    for t in x.masks():
        Bs[t], Ks[t] = _complete(ring, alpha[t])
    Binv = {t: inverse(b) for t, b in Bs.items()}
    bounds = {}
    for t in x.masks():
        for k in ctx.members(t):
            u = t & ~ctx.bit(k)
            full_m = Binv[u] @ x.d(k, t) @ Bs[t]
            if not full_m.slice(ns, r, 0, ns).is_zero():
                raise NotSimple("embedding is not a subcube")
            bounds[(k, t)] = full_m.slice(ns, r, ns, r)
    y = Cube(ctx, [r - ns] * (1 << ctx.size), bounds)
    if r > ns and not _is_degenerate(y, s):
        raise NotSimple(f"complement is not degenerate along {s}")
    y_sig, y_theta = _normalize(y, log)
    y_psi = [inverse(m) for m in y_theta]
    y_vectors = []
    for j, b in enumerate(y_sig.active):
        t = ctx.full & ~ctx.mask(b)
        y_vectors.append(Ks[t] @ y_psi[t].submatrix(range(r - ns), [j]))
    sigma = _morphism_from_vectors(x, y_sig, y_vectors, D)

    psi = [LMatrix.block(ring, [[a, b]]) if a.cols and b.cols else (a if not b.cols else b)
           for a, b in zip(alpha, sigma)]
    try:
        theta = [inverse(m) for m in psi]
    except NotInvertible:
        raise NotSimple("glued map is not an isomorphism") from None

    # beta alpha = id certifies the splitting; H_0^s(beta alpha) is then an iso as well
    if ns:
        beta = [m.slice(0, ns, 0, r) for m in theta]
        g3 = make_typical(ctx, top_sig)
        ba = CubeMorphism(g3, g3, [b @ a for b, a in zip(beta, alpha)])
        log[-1]["beta_alpha_identity"] = all(m.is_identity() for m in ba.components)
        log[-1]["variant_iso"] = variant_iso(ba, s)

    sig_sum, perm = typ_direct_sum(ctx, top_sig, y_sig)
    sig = (top_sig + y_sig).canonical()
    theta = [p @ m for p, m in zip(perm.components, theta)]
    return sig, theta


def verify_theta(x: Cube, sig: Signature, comps: list) -> dict:
    target = make_typical(x.ctx, sig)
    theta = CubeMorphism(x, target, comps)
    dets = all(m.rows == 0 or det(m).is_unit() for m in comps)
    ranks = {}
    for s in x.ctx.indices:
        ranks[s] = _h0_rank(x, s)
    counts = sig.counts()
    return {
        "natural": theta.is_natural(),
        "unit_determinants": dets,
        "target_face_laws": not validate(target),
        "h0_ranks_match": all(ranks[s] == counts[s] for s in ranks),
        "h0_ranks": ranks,
    }


def _h0_rank(x: Cube, s: int) -> int:
    """n_s: number of f_s blocks in the local form of d^s at the top-free vertex {s}."""
    from .linalg import local_equivalence_form
    _, _, k = local_equivalence_form(x.d(s, x.ctx.bit(s)), x.ctx.f(s))
    return k


def normalize_signature(x: Cube) -> NormalizationResult:
    """Normalize to the generalized form (one active set per coordinate)."""
    ok, exps = is_koszul(x)
    if not ok:
        from .errors import NotKoszulDirection
        bad = [s for s, m in exps.items() if m is None]
        raise NotKoszulDirection(f"not a Koszul cube in direction(s) {bad}")
    log: list = []
    sig, comps = _normalize(x, log)
    cert = verify_theta(x, sig, comps)
    cert["steps"] = log
    if not (cert["natural"] and cert["unit_determinants"] and cert["target_face_laws"]):
        raise NotSimple("normal form failed re-verification")
    theta = CubeMorphism(x, make_typical(x.ctx, sig), comps)
    return NormalizationResult(sig.to_type(), theta, cert, sig)


def normalize_simple(x: Cube) -> NormalizationResult:
    """Typical form of a simple Koszul cube with a verified isomorphism theta.

    Raises NoTypicalForm (carrying the signature) when the cube is a direct
    sum of rank-one cubes whose active sets do not form a chain.
    """
    res = normalize_signature(x)
    if res.type is None:
        sig = res.signature
        counts = {}
        for T in _subsets(sig.directions):
            counts[",".join(map(str, T)) or "∅"] = sig.h0_mingens(T)
        err = NoTypicalForm(f"simple but not typical: active sets {sig} do not form a chain; "
                            f"generators of H_0^T per T: {counts}", signature=sig)
        err.result = res
        raise err
    return res


def _subsets(items):
    items = list(items)
    for m in range(1 << len(items)):
        yield [s for i, s in enumerate(items) if m >> i & 1]
