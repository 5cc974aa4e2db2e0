"""Named property suites run by ``koszul verify``.

Every case draws from its own ``random.Random`` seeded by (seed, suite, case
index), so a report depends only on its arguments and ``--jobs`` never
changes the output.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import generate as gen
from . import zeromap as zm
from .chain import ChainMap, betti_fraction_field, homology_dvr
from .cube import check_restriction_homology_identity, direct_sum, total_complex
from .errors import H0NotExact, InvalidParams, NotSimple, UnknownSuite
from .homotopy import (Diagram, DiagramFunctor, HNatTrans, cone, is_c_homotopy,
                       j2, j2p_witness, mapping_cylinder, p_of, rmap, compose_squares,
                       triangle_check, validate_hnat, is_homotopy_equivalence_witnessed)
from .normalize import normalize_simple
from .typical import (Signature, blocks_of, comonotone, direct_sum_obstruction, h0_of_lift,
                      iso_characterization, lift_h0, make_typical, morphism_of_blocks,
                      naive_sum_type, split_exact_from_h0, split_nondeg_deg, typ_direct_sum,
                      ud_morphism, ud_signature, fundamental_morphism)

MAX_S = 4
MAX_RANK = 4
MAX_FAILURES = 5


@dataclass(frozen=True)
class Params:
    max_s: int = 3
    max_rank: int = 4

    def __post_init__(self):
        if not 1 <= self.max_s <= MAX_S:
            raise InvalidParams(f"--max-s must be between 1 and {MAX_S}")
        if not 0 <= self.max_rank <= MAX_RANK:
            raise InvalidParams(f"--max-rank must be between 0 and {MAX_RANK}")


def case_rng(seed: int, suite: str, i: int) -> random.Random:
    return random.Random(f"{seed}:{suite}:{i}")


def _d(i: int, p: Params) -> int:
    return 1 + i % p.max_s


# typ-direct-sum


def case_typ_direct_sum(rng, i, p: Params):
    d = _d(i, p)
    ctx = gen.context(d)
    S = ctx.indices
    r1 = rng.randint(0, p.max_rank)
    t1 = gen.typical_type(rng, S, r1, r1)
    t2 = gen.typical_type(rng, S, p.max_rank - r1)
    out, iso = typ_direct_sum(ctx, t1, t2)
    res = {}
    res["sum_iso"] = (iso.is_natural() and iso.is_iso()
                      and iso.source == direct_sum(make_typical(ctx, t1), make_typical(ctx, t2)))
    if comonotone(t1, t2):
        res["sum_type"] = out == naive_sum_type(t1, t2)
    else:
        res["sum_type"] = isinstance(out, Signature) and direct_sum_obstruction(t1, t2) is not None
    t = gen.typical_type(rng, S, p.max_rank)
    t_other = gen.typical_type(rng, S, p.max_rank)
    nd_ok = True
    for s in S:
        _, _, split = split_nondeg_deg(ctx, t, s)
        nd_ok = nd_ok and split.is_natural() and split.is_iso()
    res["nondeg_deg"] = nd_ok
    phi = gen.typical_morphism(ctx, t, t_other, rng)
    psi = gen.typical_morphism(ctx, t_other, t, rng)
    inv = func = rt = True
    for s in S:
        sig, sig2 = t.signature(), t_other.signature()
        u1, u2 = ud_signature(sig, s), ud_signature(sig2, s)
        back = ud_morphism(ud_morphism(phi, s, sig, sig2), s, u1, u2)
        inv = inv and back == phi and ud_signature(u1, s) == sig
        lhs = ud_morphism(psi @ phi, s, sig, sig)
        rhs = ud_morphism(psi, s, sig2, sig) @ ud_morphism(phi, s, sig, sig2)
        func = func and lhs == rhs
        rt = rt and morphism_of_blocks(blocks_of(phi, s, sig, sig2)) == phi
    res["ud_involution"] = inv
    res["ud_functor"] = func
    res["blocks_roundtrip"] = rt
    return res, {"t1": str(t1), "t2": str(t2), "sum": str(out), "t": str(t)}


# iso-char


def case_iso_char(rng, i, p: Params):
    d = _d(i, p)
    ctx = gen.context(d)
    m = rng.randint(1, max(1, p.max_rank))
    invertible = i % 2 == 0
    M = gen.fundamental_endomorphism(ctx, m, rng, invertible)
    rep = iso_characterization(fundamental_morphism(ctx, M))
    res = {
        "equivalent_1_2_3": rep.iso == rep.h0_some == rep.h0_all,
        "constructed_kind": rep.iso == invertible,
        "one_implies_four": (not rep.iso) or rep.tot_quasi_iso,
        "four_implies_one_L1": (rep.iso == rep.tot_quasi_iso) if d == 1 else None,
    }
    return res, {"d": d, "M": M.to_strings(), "report": list(rep.as_tuple())}


# lifting


def case_lifting(rng, i, p: Params):
    d = _d(i, p)
    ctx = gen.context(d)
    S = ctx.indices
    src = gen.typical_type(rng, S, p.max_rank)
    tgt = gen.typical_type(rng, S, p.max_rank)
    T = [s for s in S if rng.random() < 0.5] or [rng.choice(S)]
    phi = gen.typical_morphism(ctx, src, tgt, rng)
    gbar = h0_of_lift(ctx, phi, src, tgt, T)
    g = lift_h0(ctx, gbar, src, tgt, T)
    res = {"natural": g.is_natural(), "reduces_to_given": h0_of_lift(ctx, g, src, tgt, T) == gbar}
    return res, {"src": str(src), "tgt": str(tgt), "T": T}


# structure


def case_structure(rng, i, p: Params):
    d = _d(i, p)
    ctx = gen.context(d)
    if i % 6 == 5:
        x = gen.non_simple_koszul(ctx, rng, p.max_rank)
        try:
            normalize_simple(x)
            rejected = False
        except NotSimple:
            rejected = True
        return {"non_simple_rejected": rejected}, {"d": d, "kind": "non-simple"}
    t = gen.typical_type(rng, ctx.indices, p.max_rank)
    x = gen.conjugated_simple(ctx, t, rng)
    out = normalize_simple(x)
    cert = out.certificate
    res = {
        "matches_oracle": out.type == t,
        "theta_verified": out.ok and out.theta.is_natural() and out.theta.is_iso(),
        "h0_ranks": cert["h0_ranks_match"],
    }
    return res, {"hidden": str(t), "found": str(out.type)}


# split-exact


def case_split_exact(rng, i, p: Params):
    d = _d(i, p)
    ctx = gen.context(d)
    ring = ctx.ring
    exact = i % 6 != 5
    l = rng.randint(1 if not exact else 0, max(1, p.max_rank))
    n = rng.randint(0, max(0, p.max_rank - l))
    alpha, beta = gen.split_sequence(ring, l, n, rng, exact)
    if not exact:
        try:
            split_exact_from_h0(ctx, alpha, beta)
            return {"inexact_rejected": False}, {"l": l, "n": n}
        except H0NotExact:
            return {"inexact_rejected": True}, {"l": l, "n": n}
    out = split_exact_from_h0(ctx, alpha, beta)
    res = {
        "beta_gamma_id": (beta @ out.gamma).is_identity(),
        "kernel_factorization": out.kernel @ out.delta == alpha,
        "delta_iso": out.report.iso and out.report.consistent(),
    }
    return res, {"l": l, "n": n}


# homotopy-calc


def case_homotopy_calc(rng, i, p: Params):
    ring = zm.base_ring()
    x = gen.two_term(ring, rng)
    y = gen.two_term(ring, rng)
    f = gen.chain_map(x, y, rng)
    sq1 = gen.random_square(f, rng)
    sq2 = gen.random_square(sq1.g, rng)
    sq3 = gen.random_square(sq2.g, rng)
    res = {}
    res["cone_d_squared"] = all(not c.d_squared_violations()
                                for c in (cone(x), cone(y), cone(cone(x))))
    res["r_homotopy"] = is_c_homotopy(rmap(x), ChainMap.identity(cone(x)),
                                      ChainMap.zero(cone(x), cone(x)))
    res["squares_valid"] = sq1.is_valid() and sq2.is_valid() and sq3.is_valid()
    left = compose_squares(sq3, compose_squares(sq2, sq1))
    right = compose_squares(compose_squares(sq3, sq2), sq1)
    res["star_associative"] = left.H == right.H and left.is_valid()
    tc = triangle_check(sq1)
    res["p_j2_identity"] = tc["id_object"] and tc["id_morphism"]
    res["eps_factorization"] = tc["eps_object"] and tc["eps_morphism"]
    res["j2p_witness"] = is_homotopy_equivalence_witnessed(
        j2(f), p_of(f), ChainMap.zero(cone(f.target), f.target), j2p_witness(f))
    # a three-object chain 0 -> 1 -> 2 with theta from the squares sq1, sq2
    D = Diagram((0, 1, 2), {"a": (0, 1), "b": (1, 2)})
    F = DiagramFunctor(D, {0: sq1.f.source, 1: sq2.f.source, 2: sq2.g.source},
                       {"a": sq1.a, "b": sq2.a})
    G = DiagramFunctor(D, {0: sq1.f.target, 1: sq2.f.target, 2: sq2.g.target},
                       {"a": sq1.b, "b": sq2.b})
    theta = HNatTrans(F, G, {0: sq1.f, 1: sq2.f, 2: sq2.g}, {"a": sq1.H, "b": sq2.H})
    res["hnat_valid"] = not validate_hnat(theta)
    cyl = mapping_cylinder(theta)
    # j1 is a quasi-isomorphism only when theta is; these thetas are arbitrary
    res["cylinder"] = all(v for k, v in cyl.report.items() if k != "J1_quasi_iso")
    return res, {"x": [x.rank(0), x.rank(1)], "y": [y.rank(0), y.rank(1)]}


# zero-map


def case_zero_map(rng, i, p: Params):
    ring = zm.base_ring()
    o = zm.random_object(rng)
    phi = zm.random_c_iso(ring, o, rng)
    low = zm.ut(phi)
    res = {
        "triangulation": zm.compose_c(phi, low) == zm.triangulation_rhs(phi) and low.is_lower(),
        "mu1_equals_mu2": zm.mu1_equals_mu2(zm.random_c_morphism(ring, o, zm.random_object(rng),
                                                                 rng)),
        "mu_iso": all(zm.mu_iso(phi)),
    }
    kind = rng.choice(["upper", "lower"])
    psi = zm.random_c_morphism(ring, o, zm.random_object(rng), rng, kind)
    dd = zm.delta_data(psi)
    res["delta_square"] = dd.square.is_valid() and (dd.strict or kind == "upper")
    res["delta_unique"] = zm.homotopy_nullity(zm.eta(ring, psi.source),
                                              zm.mu_object(ring, psi.target, 1)) == 0
    zd = zm.random_mixed_diagram(ring, rng)
    cert = zm.assemble_eta_to_mu1(zd)
    res["eta_certificate"] = cert["valid"]
    return res, {"object": str(o), "diagram": sorted(zd.arrows)}


# res-h0


def case_res_h0(rng, i, p: Params):
    d = _d(i, p)
    ctx = gen.context(d)
    S = list(ctx.indices)
    rng.shuffle(S)
    cut = rng.randint(0, d)
    Y = sorted(S[:cut])
    X = sorted(s for s in S[cut:] if rng.random() < 0.7)
    if len(Y) <= 1 and rng.random() < 0.3:
        c = gen.non_simple_koszul(ctx, rng, p.max_rank)
        kind = "non-simple"
    else:
        c = gen.conjugated_simple(ctx, gen.typical_type(rng, ctx.indices, p.max_rank), rng)
        kind = "simple"
    return ({"restriction_homology": check_restriction_homology_identity(c, X, Y)},
            {"d": d, "X": X, "Y": Y, "kind": kind})


# totisom


def case_totisom(rng, i, p: Params):
    d = _d(i, p)
    ctx = gen.context(d)
    t = gen.typical_type(rng, ctx.indices, p.max_rank)
    c = make_typical(ctx, t)
    tot = total_complex(c)
    if d == 1:
        h = homology_dvr(tot)
        ok = all(free == 0 and not tors for n, (free, tors) in h.items() if n > 0)
    else:
        b = betti_fraction_field(tot)
        ok = all(v == 0 for n, v in b.items() if n > 0)
    return {"higher_homology_vanishes": ok}, {"type": str(t), "d": d}


SUITES = {
    "typ-direct-sum": case_typ_direct_sum,
    "iso-char": case_iso_char,
    "lifting": case_lifting,
    "structure": case_structure,
    "split-exact": case_split_exact,
    "homotopy-calc": case_homotopy_calc,
    "zero-map": case_zero_map,
    "res-h0": case_res_h0,
    "totisom": case_totisom,
}

DEFAULT_CASES = {"zero-map": 20}


def _run_case(args):
    name, seed, i, p = args
    fn = SUITES[name]
    rng = case_rng(seed, name, i)
    try:
        res, info = fn(rng, i, p)
    except Exception as e:  # a crash is a failure of every invariant of the case
        return i, {"no_exception": False}, {"error": f"{type(e).__name__}: {e}"}
    return i, res, info


def run_suite(name: str, seed: int = 0, cases: int | None = None, params: Params | None = None,
              jobs: int = 1) -> dict:
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; known: {', '.join(sorted(SUITES))}")
    params = params or Params()
    cases = DEFAULT_CASES.get(name, 100) if cases is None else cases
    if cases < 0:
        raise InvalidParams("--cases must be non-negative")
    work = [(name, seed, i, params) for i in range(cases)]
    if jobs > 1 and cases > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_run_case, work))
    else:
        results = [_run_case(w) for w in work]
    invariants: dict = {}
    failures = []
    for i, res, info in sorted(results, key=lambda r: r[0]):
        for k, v in res.items():
            slot = invariants.setdefault(k, {"pass": 0, "fail": 0, "skipped": 0})
            if v is None:
                slot["skipped"] += 1
            elif v:
                slot["pass"] += 1
            else:
                slot["fail"] += 1
                if len(failures) < MAX_FAILURES:
                    failures.append({"case": i, "invariant": k, "counterexample": info})
    ok = all(v["fail"] == 0 for v in invariants.values())
    return {
        "suite": name,
        "seed": seed,
        "cases": cases,
        "params": {"max_s": params.max_s, "max_rank": params.max_rank},
        "invariants": {k: invariants[k] for k in sorted(invariants)},
        "failures": failures,
        "ok": ok,
    }


def zero_map_certificate(seed: int) -> dict:
    """The eta ~ 0 certificate for the seeded mixed diagram (printable summary)."""
    ring = zm.base_ring()
    rng = case_rng(seed, "zero-map-certificate", 0)
    zd = zm.random_mixed_diagram(ring, rng)
    cert = zm.assemble_eta_to_mu1(zd)
    return {
        "objects": {k: str(v) for k, v in sorted(zd.objects.items())},
        "arrows": {a: {"source": s, "target": t,
                       "kind": "upper" if phi.is_upper() else "lower"}
                   for a, (s, t, phi) in sorted(zd.arrows.items())},
        "checks": {k: v for k, v in cert.items() if isinstance(v, bool)},
        "cylinder": cert.get("cylinder", {}),
        "valid": cert["valid"],
    }
