"""Cones, C-homotopies, homotopy commutative squares, Y, and homotopy natural transformations.

Conventions: (Cx)_n = x_{n-1} + x_n (shifted part first) with
d^{Cx}_n = [[-d_{n-1}, 0], [-1, d_n]], iota_x = (0; 1), and a C-homotopy
H: f => g is a chain map H: Cx -> y with f - g = H iota_x.

A square (a, b, H) from [f: x -> x'] to [g: y -> y'] satisfies
H iota_x = g a - b f.  A homotopy natural transformation theta: f => g
uses the same orientation on every arrow a: i -> j, namely
theta_a iota = theta_j f_a - g_a theta_i, so that (f_a, g_a, theta_a) is
a square from theta_i to theta_j.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from .chain import ChainComplex, ChainMap, is_quasi_iso
from .errors import InvalidHNat, ShapeMismatch
from .linalg import LMatrix


def _grid(ring, grid, heights, widths) -> LMatrix:
    """Block matrix where None stands for a zero block of the implied size."""
    rows = []
    for brow, h in zip(grid, heights):
        if not h:
            continue
        parts = [b if b is not None else LMatrix(ring, h, w) for b, w in zip(brow, widths)]
        rows.append(parts)
    H, W = sum(heights), sum(widths)
    if H == 0 or W == 0:
        return LMatrix(ring, H, W)
    rows = [[p for p, w in zip(r, widths) if w] for r in rows]
    return LMatrix.block(ring, rows)


def _ident(ring, n):
    return LMatrix.identity(ring, n)


# cones


def cone(x: ChainComplex) -> ChainComplex:
    ring = x.ring
    degs = x.span(pad=1)
    ranks = {n: x.rank(n - 1) + x.rank(n) for n in degs}
    diffs = {}
    for n in degs:
        diffs[n] = _grid(ring, [[-x.d(n - 1), None], [-_ident(ring, x.rank(n - 1)), x.d(n)]],
                         [x.rank(n - 2), x.rank(n - 1)], [x.rank(n - 1), x.rank(n)])
    return ChainComplex(ring, ranks, diffs)


def iota(x: ChainComplex) -> ChainMap:
    ring = x.ring
    cx = cone(x)
    comps = {n: _grid(ring, [[None], [_ident(ring, x.rank(n))]], [x.rank(n - 1), x.rank(n)],
                      [x.rank(n)]) for n in x.span(pad=1)}
    return ChainMap(x, cx, comps)


def rmap(x: ChainComplex) -> ChainMap:
    """r_x: CCx -> Cx, rows (0, 1, 1, 0) and (0, 0, 0, 1); a C-homotopy from id_{Cx} to 0."""
    ring = x.ring
    cx = cone(x)
    ccx = cone(cx)
    comps = {}
    for n in x.span(pad=2):
        a, b, c, d = x.rank(n - 2), x.rank(n - 1), x.rank(n - 1), x.rank(n)
        comps[n] = _grid(ring, [[None, _ident(ring, b), _ident(ring, b), None],
                                [None, None, None, _ident(ring, d)]],
                         [x.rank(n - 1), x.rank(n)], [a, b, c, d])
    return ChainMap(ccx, cx, comps)


def cone_map(f: ChainMap) -> ChainMap:
    """C(f) = diag(f_{n-1}, f_n)."""
    ring = f.ring
    x, y = f.source, f.target
    comps = {n: LMatrix.direct_sum(ring, [f[n - 1], f[n]]) for n in x.span(y, pad=1)}
    return ChainMap(cone(x), cone(y), comps)


def is_c_homotopy(H: ChainMap, f: ChainMap, g: ChainMap) -> bool:
    """True iff H is a chain map and f - g = H iota."""
    if not H.is_chain_map():
        return False
    return (f - g) == H @ iota(f.source)


def c_homotopy_from(h: dict, f: ChainMap, g: ChainMap) -> ChainMap:
    """The C-homotopy of a classical homotopy f - g = d h + h d (h_n: x_n -> y_{n+1}).

    H_n = (-h_{n-1}, f_n - g_n).
    """
    ring = f.ring
    x, y = f.source, f.target
    comps = {}
    for n in x.span(y, pad=1):
        hn = h.get(n - 1, LMatrix(ring, y.rank(n), x.rank(n - 1)))
        comps[n] = _grid(ring, [[-hn, (f - g)[n]]], [y.rank(n)], [x.rank(n - 1), x.rank(n)])
    return ChainMap(cone(x), y, comps)


def cone_sum_iso(a: ChainComplex, b: ChainComplex) -> ChainMap:
    """The coordinate shuffle C(a + b) -> C(a) + C(b)."""
    ring = a.ring
    src = cone(a.direct_sum(b))
    tgt = cone(a).direct_sum(cone(b))
    comps = {}
    for n in a.span(b, pad=2):
        a1, b1, a0, b0 = a.rank(n - 1), b.rank(n - 1), a.rank(n), b.rank(n)
        I = lambda k: _ident(ring, k)
        comps[n] = _grid(ring, [[I(a1), None, None, None],
                                [None, None, I(a0), None],
                                [None, I(b1), None, None],
                                [None, None, None, I(b0)]],
                         [a1, a0, b1, b0], [a1, b1, a0, b0])
    return ChainMap(src, tgt, comps)


def _stack_maps(source: ChainComplex, target: ChainComplex, top: ChainMap | None,
                bottom: ChainMap | None, split: tuple) -> ChainMap:
    """(top; bottom): source -> target = split[0] + split[1]."""
    ring = source.ring
    t0, t1 = split
    comps = {}
    for n in source.span(target, pad=1):
        comps[n] = _grid(ring, [[top[n] if top else None], [bottom[n] if bottom else None]],
                         [t0.rank(n), t1.rank(n)], [source.rank(n)])
    return ChainMap(source, target, comps)


def _row_maps(source: ChainComplex, target: ChainComplex, left: ChainMap | None,
              right: ChainMap | None, split: tuple) -> ChainMap:
    """(left, right): split[0] + split[1] = source -> target."""
    ring = source.ring
    s0, s1 = split
    comps = {}
    for n in source.span(target, pad=1):
        comps[n] = _grid(ring, [[left[n] if left else None, right[n] if right else None]],
                         [target.rank(n)], [s0.rank(n), s1.rank(n)])
    return ChainMap(source, target, comps)


# homotopy commutative squares


@dataclass
class HSquare:
    """(a, b, H) from [f: x -> x'] to [g: y -> y'] with H iota_x = g a - b f."""

    f: ChainMap
    g: ChainMap
    a: ChainMap
    b: ChainMap
    H: ChainMap

    def violations(self) -> list[str]:
        out = []
        for name in ("a", "b", "H"):
            if not getattr(self, name).is_chain_map():
                out.append(f"{name} is not a chain map")
        if self.H @ iota(self.f.source) != self.g @ self.a - self.b @ self.f:
            out.append("H iota != g a - b f")
        return out

    def is_valid(self) -> bool:
        return not self.violations()


def strict_square(f: ChainMap, g: ChainMap, a: ChainMap, b: ChainMap) -> HSquare:
    return HSquare(f, g, a, b, ChainMap.zero(cone(f.source), g.target))


def identity_square(f: ChainMap) -> HSquare:
    return strict_square(f, f, ChainMap.identity(f.source), ChainMap.identity(f.target))


def star(H2: ChainMap, H1: ChainMap, a1: ChainMap, b2: ChainMap) -> ChainMap:
    """H' * H = b' H + H' C(a)."""
    return b2 @ H1 + H2 @ cone_map(a1)


def compose_squares(sq2: HSquare, sq1: HSquare) -> HSquare:
    """(a', b', H')(a, b, H) = (a'a, b'b, H' * H)."""
    if sq1.g.source._ranks != sq2.f.source._ranks or sq1.g.target._ranks != sq2.f.target._ranks:
        raise ShapeMismatch("squares are not composable")
    return HSquare(sq1.f, sq2.g, sq2.a @ sq1.a, sq2.b @ sq1.b, star(sq2.H, sq1.H, sq1.a, sq2.b))


# Y, j1, j2, p, epsilon


def y_of(f: ChainMap) -> ChainComplex:
    """Y(f) = y + C(x) for f: x -> y."""
    return f.target.direct_sum(cone(f.source))


def y_of_square(sq: HSquare) -> ChainMap:
    """Y(a, b, H) = [[b, -H], [0, C a]]: Y(f) -> Y(g)."""
    ring = sq.a.ring
    src, tgt = y_of(sq.f), y_of(sq.g)
    x1, y1 = sq.f.target, sq.g.target
    cx, cy = cone(sq.f.source), cone(sq.g.source)
    Ca = cone_map(sq.a)
    comps = {}
    for n in src.span(tgt, pad=1):
        comps[n] = _grid(ring, [[sq.b[n], -sq.H[n]], [None, Ca[n]]],
                         [y1.rank(n), cy.rank(n)], [x1.rank(n), cx.rank(n)])
    return ChainMap(src, tgt, comps)


def j1(f: ChainMap) -> ChainMap:
    """(f; -iota_x): x -> Y(f)."""
    return _stack_maps(f.source, y_of(f), f, -iota(f.source), (f.target, cone(f.source)))


def j2(f: ChainMap) -> ChainMap:
    """(id; 0): y -> Y(f)."""
    return _stack_maps(f.target, y_of(f), ChainMap.identity(f.target), None,
                       (f.target, cone(f.source)))


def p_of(f: ChainMap) -> ChainMap:
    """(id, 0): Y(f) -> y."""
    return _row_maps(y_of(f), f.target, ChainMap.identity(f.target), None,
                     (f.target, cone(f.source)))


def eps_of(f: ChainMap) -> ChainMap:
    return f


def eps_of_square(sq: HSquare) -> ChainMap:
    return sq.H


def p_of_square(sq: HSquare) -> ChainMap:
    """(0, -H r_x): C(Y(f)) -> y', read through C(Y(f)) = C(y) + CC(x)."""
    yf = f_target = sq.f.target
    x = sq.f.source
    cx = cone(x)
    src = cone(y_of(sq.f))
    mid = cone(yf).direct_sum(cone(cx))
    right = -(sq.H @ rmap(x))
    row = _row_maps(mid, sq.g.target, None, right, (cone(f_target), cone(cx)))
    return ChainMap(src, sq.g.target, {n: (row @ cone_sum_iso(yf, cx))[n]
                                       for n in src.span(sq.g.target, pad=1)})


def j2p_witness(f: ChainMap) -> ChainMap:
    """K: C(Y(f)) -> Y(f) with id - j2 p = K iota, namely diag(0, r_x) after the shuffle."""
    y, x = f.target, f.source
    cx = cone(x)
    yf = y_of(f)
    mid = cone(y).direct_sum(cone(cx))
    ring = f.ring
    r = rmap(x)
    comps = {}
    for n in mid.span(yf, pad=1):
        comps[n] = _grid(ring, [[None, None], [None, r[n]]], [y.rank(n), cx.rank(n)],
                         [cone(y).rank(n), cone(cx).rank(n)])
    K = ChainMap(mid, yf, comps)
    shuffle = cone_sum_iso(y, cx)
    src = cone(yf)
    return ChainMap(src, yf, {n: (K @ shuffle)[n] for n in src.span(yf, pad=1)})


def triangle_check(sq: HSquare) -> dict:
    """epsilon = p j1 and p j2 = id_t, on objects and on the square's homotopy component."""
    f = sq.f
    pj1_obj = p_of(f) @ j1(f)
    pj1_mor = p_of_square(sq) @ cone_map(j1(f))
    pj2_mor = p_of_square(sq) @ cone_map(j2(f))
    return {
        "eps_object": pj1_obj == eps_of(f),
        "eps_morphism": pj1_mor == eps_of_square(sq),
        "id_object": (p_of(f) @ j2(f)) == ChainMap.identity(f.target),
        "id_morphism": pj2_mor.is_zero(),
    }


def is_homotopy_equivalence_witnessed(f: ChainMap, inv: ChainMap, h_src: ChainMap,
                                      h_tgt: ChainMap) -> bool:
    """inv f ~ id via h_src and f inv ~ id via h_tgt (both id - composite = H iota)."""
    return (is_c_homotopy(h_src, ChainMap.identity(f.source), inv @ f)
            and is_c_homotopy(h_tgt, ChainMap.identity(f.target), f @ inv))


# finite diagrams


@dataclass
class Diagram:
    """A finitely presented category: objects, generators name -> (src, tgt), relations.

    Paths are tuples of generator names in the order they are applied.
    """

    objects: tuple
    generators: dict
    relations: list = field(default_factory=list)

    def path_ends(self, path, start=None):
        if not path:
            return start, start
        src = self.generators[path[0]][0]
        cur = src
        for g in path:
            s, t = self.generators[g]
            if s != cur:
                raise ShapeMismatch(f"path {path} is not composable at {g}")
            cur = t
        return src, cur

    def composable_pairs(self):
        for a, (_, ta) in self.generators.items():
            for b, (sb, _) in self.generators.items():
                if ta == sb:
                    yield a, b


@dataclass
class DiagramFunctor:
    diagram: Diagram
    objects: dict
    arrows: dict

    def along(self, path, start=None) -> ChainMap:
        if not path:
            return ChainMap.identity(self.objects[start])
        m = self.arrows[path[0]]
        for g in path[1:]:
            m = self.arrows[g] @ m
        return m

    def violations(self) -> list[str]:
        out = []
        for g, (s, t) in self.diagram.generators.items():
            m = self.arrows[g]
            if m.source._ranks != self.objects[s]._ranks or m.target._ranks != self.objects[t]._ranks:
                out.append(f"arrow {g} has the wrong endpoints")
            elif not m.is_chain_map():
                out.append(f"arrow {g} is not a chain map")
        for p1, p2 in self.diagram.relations:
            s, _ = self.diagram.path_ends(p1)
            if self.along(p1, s) != self.along(p2, s):
                out.append(f"relation {p1} = {p2} fails")
        return out


@dataclass
class HNatTrans:
    """theta: f => g; ``homotopies`` maps generator names (and optionally ("id", i)) to C f_i -> g_j."""

    source: DiagramFunctor
    target: DiagramFunctor
    components: dict
    homotopies: dict

    @property
    def diagram(self) -> Diagram:
        return self.source.diagram

    @classmethod
    def strict(cls, f: DiagramFunctor, g: DiagramFunctor, comps: dict) -> "HNatTrans":
        hom = {}
        for a, (i, j) in f.diagram.generators.items():
            hom[a] = ChainMap.zero(cone(f.objects[i]), g.objects[j])
        return cls(f, g, comps, hom)

    def along(self, path, start=None) -> ChainMap:
        """theta on a composite, by the cocycle theta_{ba} = g_b theta_a + theta_b C(f_a)."""
        f, g = self.source, self.target
        if not path:
            return ChainMap.zero(cone(f.objects[start]), g.objects[start])
        th = self.homotopies[path[0]]
        fa = f.arrows[path[0]]
        for b in path[1:]:
            th = g.arrows[b] @ th + self.homotopies[b] @ cone_map(fa)
            fa = f.arrows[b] @ fa
        return th


def validate_hnat(theta: HNatTrans) -> list[str]:
    """Empty iff theta is a homotopy natural transformation on its finite diagram."""
    out = []
    f, g = theta.source, theta.target
    D = theta.diagram
    out += [f"source: {v}" for v in f.violations()]
    out += [f"target: {v}" for v in g.violations()]
    for i in D.objects:
        if not theta.components[i].is_chain_map():
            out.append(f"theta_{i} is not a chain map")
    for key, h in theta.homotopies.items():
        if isinstance(key, tuple) and key and key[0] == "id":
            if not h.is_zero():
                out.append(f"theta at the identity of {key[1]} is not zero")
    for a, (i, j) in D.generators.items():
        h = theta.homotopies[a]
        bad = not h.is_chain_map() or (
            h @ iota(f.objects[i])
            != theta.components[j] @ f.arrows[a] - g.arrows[a] @ theta.components[i])
        if bad:
            out.append(f"theta_{a} is not a C-homotopy from theta_j f_a to g_a theta_i")
    for p1, p2 in D.relations:
        s, _ = D.path_ends(p1)
        if theta.along(p1, s) != theta.along(p2, s):
            out.append(f"cocycle fails on relation {p1} = {p2}")
    return out


def whisker_pre(beta: HNatTrans, alpha: HNatTrans) -> HNatTrans:
    """beta alpha for a strict alpha: f -> g and beta: g => h."""
    comps = {i: beta.components[i] @ alpha.components[i] for i in beta.diagram.objects}
    hom = {a: beta.homotopies[a] @ cone_map(alpha.components[i])
           for a, (i, _) in beta.diagram.generators.items()}
    return HNatTrans(alpha.source, beta.target, comps, hom)


def whisker_post(gamma: HNatTrans, beta: HNatTrans) -> HNatTrans:
    """gamma beta for beta: g => h and a strict gamma: h -> k."""
    comps = {i: gamma.components[i] @ beta.components[i] for i in beta.diagram.objects}
    hom = {a: gamma.components[j] @ beta.homotopies[a]
           for a, (_, j) in beta.diagram.generators.items()}
    return HNatTrans(beta.source, gamma.target, comps, hom)


@dataclass
class Cylinder:
    Y: DiagramFunctor
    J1: HNatTrans
    J2: HNatTrans
    report: dict


def mapping_cylinder(theta: HNatTrans, check_equivalences: bool = True) -> Cylinder:
    """Y(theta) with J1: f -> Y(theta) <- g: J2, plus the checks behind the zig-zag."""
    bad = validate_hnat(theta)
    if bad:
        raise InvalidHNat("; ".join(bad))
    f, g = theta.source, theta.target
    D = theta.diagram
    th = theta.components
    objs = {i: y_of(th[i]) for i in D.objects}
    arrows = {}
    for a, (i, j) in D.generators.items():
        sq = HSquare(th[i], th[j], f.arrows[a], g.arrows[a], theta.homotopies[a])
        arrows[a] = y_of_square(sq)
    Y = DiagramFunctor(D, objs, arrows)
    J1 = HNatTrans.strict(f, Y, {i: j1(th[i]) for i in D.objects})
    J2 = HNatTrans.strict(g, Y, {i: j2(th[i]) for i in D.objects})
    report = {
        "d_squared": all(not objs[i].d_squared_violations() for i in D.objects),
        "functor": not Y.violations(),
        "J1_natural": not validate_hnat(J1),
        "J2_natural": not validate_hnat(J2),
    }
    funct = True
    for a, b in D.composable_pairs():
        i, _ = D.generators[a]
        _, k = D.generators[b]
        sq = HSquare(th[i], th[k], f.along((a, b)), g.along((a, b)), theta.along((a, b)))
        if y_of_square(sq) != arrows[b] @ arrows[a]:
            funct = False
    report["composites"] = funct
    if check_equivalences:
        report["J2_equivalences"] = all(
            is_homotopy_equivalence_witnessed(j2(th[i]), p_of(th[i]),
                                              ChainMap.zero(cone(th[i].target), th[i].target),
                                              j2p_witness(th[i]))
            for i in D.objects)
        report["J1_quasi_iso"] = all(is_quasi_iso(j1(th[i])) for i in D.objects)
    return Cylinder(Y, J1, J2, report)


# simplicial families


@dataclass
class StructureMap:
    """For phi: [m] -> [n]: J_n -> J_m on objects and generators, plus a base change."""

    phi: tuple
    m: int
    n: int
    objects: dict
    arrows: dict
    base: Callable = None

    def apply(self, c):
        return c if self.base is None else self.base(c)


def validate_simplicial_hnat(family: dict, structure: Iterable[StructureMap]) -> list[str]:
    """family: n -> HNatTrans on J_n.  Checks each level and theta_n f_phi = g_phi theta_m."""
    out = []
    for n, th in sorted(family.items()):
        out += [f"level {n}: {v}" for v in validate_hnat(th)]
    for sm in structure:
        src, dst = family[sm.n], family[sm.m]
        tag = f"phi={sm.phi}"
        for i in src.diagram.objects:
            i2 = sm.objects[i]
            for which, a, b in (("f", src.source.objects[i], dst.source.objects[i2]),
                                ("g", src.target.objects[i], dst.target.objects[i2])):
                if sm.apply(a) != b:
                    out.append(f"{tag}: {which} object {i}")
            if sm.apply(src.components[i]) != dst.components[i2]:
                out.append(f"{tag}: component at {i}")
        for a, (i, _) in src.diagram.generators.items():
            path = sm.arrows[a]
            start = sm.objects[i]
            if sm.apply(src.homotopies[a]) != dst.along(path, start):
                out.append(f"{tag}: homotopy at {a}")
            if sm.apply(src.source.arrows[a]) != dst.source.along(path, start):
                out.append(f"{tag}: f arrow {a}")
            if sm.apply(src.target.arrows[a]) != dst.target.along(path, start):
                out.append(f"{tag}: g arrow {a}")
    return out


def monotone_maps(m: int, n: int):
    """All order-preserving maps [m] -> [n] as tuples."""
    def rec(prefix, lo):
        if len(prefix) == m + 1:
            yield tuple(prefix)
            return
        for v in range(lo, n + 1):
            yield from rec(prefix + [v], v)
    yield from rec([], 0)


def constant_family(theta: HNatTrans, N: int = 3):
    """theta as a constant simplicial homotopy natural transformation up to level N."""
    family = {n: theta for n in range(N + 1)}
    D = theta.diagram
    ident_obj = {i: i for i in D.objects}
    ident_arr = {a: (a,) for a in D.generators}
    structure = [StructureMap(phi, m, n, ident_obj, ident_arr)
                 for m in range(N + 1) for n in range(N + 1) for phi in monotone_maps(m, n)]
    return family, structure


def cylinder_family(family: dict) -> dict:
    """The degreewise mapping cylinders Y(theta_n)."""
    return {n: mapping_cylinder(th) for n, th in family.items()}
