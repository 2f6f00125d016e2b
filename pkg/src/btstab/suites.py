"""Verification suites behind ``btstab verify``.

Each suite returns a list of JSON-ready records and an overall pass flag.
"""
from __future__ import annotations

import logging
import random
from itertools import combinations

from .grp import (DEFAULT_CLOSURE_BUDGET, DEFAULT_ENUM_BUDGET, closure_subgroup, elements_of_shape,
                  subgroup_shape)
from .quadext import ExtCtx, classify_extensions, make_extension, norm_fiber_check, norm_kernel_check
from .ring import FieldCtx
from .stab import (conjugation_spot_check, normalized_points, tan_containment, verify_lemma_j,
                   verify_theorem)
from .tree import (barb_diameter, distance, embed_F_vertex, galois_act_vertex, is_embedded_vertex,
                   measure_barbs, vertices_up_to)

log = logging.getLogger(__name__)

SUITES = ("lf", "casselman", "lemma-j", "theorem", "trees", "filtrations")


def _work(ext: ExtCtx, depth: int) -> ExtCtx:
    return ext if ext.precision >= depth else ext.with_precision(depth)


def suite_lf(exts, max_level=3, working_level=None, **_):
    out = []
    for ext in exts:
        for n in range(1, max_level + 1):
            chk = norm_fiber_check(ext, n, working_level)
            out.append({"ext": ext.desc.spec(), **chk.to_json()})
    return out, all(r["holds"] for r in out)


def suite_casselman(exts, max_level=3, working_level=None, **_):
    out = []
    for ext in exts:
        if not ext.ramified:
            continue
        for chk in norm_kernel_check(ext, max_level, working_level):
            out.append({"ext": ext.desc.spec(), **chk.to_json()})
    return out, all(r["holds"] for r in out)


def suite_lemma_j(exts, max_level=2, precision=None, budget_enum=DEFAULT_ENUM_BUDGET, **_):
    out = []
    for ext in exts:
        for n in range(max_level + 1):
            for rep in verify_lemma_j(ext, n, precision, budget_enum):
                out.append(rep.to_json())
    return out, all(r["equal"] for r in out)


def suite_theorem(exts, max_level=None, precision=None, parse="union_first", mode="orbit", jobs=1,
                  seed=0, budget_enum=DEFAULT_ENUM_BUDGET, **_):
    """Oracle vs closed form, the one-sided containment, and a conjugation spot check per level."""
    rng = random.Random(seed)
    out = []
    ok = True
    for ext in exts:
        top = max_level if max_level is not None else (2 if ext.ramified else 3)
        reps = verify_theorem(ext, top, precision, parse, mode, jobs=jobs, budget=budget_enum)
        for rep in reps:
            out.append({"check": "equality", **rep.to_json()})
            ok &= rep.verdict == "equal"
            tan = tan_containment(rep.point, rep.precision_N, mode, rep.oracle_set, budget_enum)
            out.append({"check": "containment", **tan.to_json()})
            ok &= tan.holds
        for n in range(1, top + 1):
            N = precision if precision is not None else n + 2
            pts = normalized_points(_work(ext, n * ext.e_EF), n)
            p = pts[rng.randrange(len(pts))]
            eq = conjugation_spot_check(p, N, rng, mode, parse, budget_enum)
            out.append({"check": "equivariance", **eq.to_json()})
            ok &= eq.oracle_equivariant and eq.closed_equivariant
    return out, ok


def check_dilation(ext: ExtCtx, depth: int) -> dict:
    """distance(embed u, embed v) = e_{E/F} distance(u, v) over all pairs of T_F vertices."""
    F = ext.base.with_precision(max(ext.base.precision, depth))
    X = _work(ext, depth * ext.e_EF)
    verts = vertices_up_to(F, depth)
    img = {v: embed_F_vertex(v, X) for v in verts}
    bad = None
    pairs = 0
    for u, v in combinations(verts, 2):
        pairs += 1
        if distance(img[u], img[v]) != ext.e_EF * distance(u, v):
            bad = [u.label(), v.label()]
            break
    return {"ext": ext.desc.spec(), "check": "dilation", "depth": depth, "factor": ext.e_EF,
            "pairs": pairs, "holds": bad is None, "witness": bad}


def check_galois(ext: ExtCtx, depth: int) -> dict:
    """Galois is an involution and an isometry of T_E and fixes the embedded T_F."""
    X = _work(ext, depth)
    verts = vertices_up_to(X, depth)
    sigma = {v: galois_act_vertex(v) for v in verts}
    problems = []
    for v in verts:
        if galois_act_vertex(sigma[v]) != v:
            problems.append(("involution", v.label()))
        if is_embedded_vertex(v) and sigma[v] != v:
            problems.append(("fixes_T_F", v.label()))
    for u, v in combinations(verts, 2):
        if distance(sigma[u], sigma[v]) != distance(u, v):
            problems.append(("isometry", f"{u.label()} {v.label()}"))
            break
    return {"ext": ext.desc.spec(), "check": "galois", "depth": depth, "vertices": len(verts),
            "holds": not problems, "witness": list(problems[0]) if problems else None}


def check_barbs(ext: ExtCtx, depth: int) -> dict:
    meas = measure_barbs(ext, depth)
    want = barb_diameter(ext)
    return {"ext": ext.desc.spec(), "check": "barbs", "depth": depth, "expected": want,
            "measured": meas.diameter, "components": len(meas.components), "truncated": meas.truncated,
            "holds": meas.diameter == want and not meas.truncated, "witness": None}


def suite_trees(exts, depth=None, **_):
    out = []
    for ext in exts:
        out.append(check_dilation(ext, 3))
        out.append(check_galois(ext, 4))
        out.append(check_barbs(ext, depth or 4))
    return out, all(r["holds"] for r in out)


def _keys(F: FieldCtx, shape, N: int) -> set:
    return {g.key() for g in elements_of_shape(F, shape, N)}


def filtration_records(F: FieldCtx, max_level: int, budget_closure=DEFAULT_CLOSURE_BUDGET) -> list[dict]:
    """Jr_{2n} = J_n n PJ_n, Jr_{2n+1} = J_{n+1} * PJ_{n+1} and the strict inclusion J_n < K_n."""
    N = F.precision
    e = F.e
    out = []
    for n in range(max_level + 1):
        J = subgroup_shape("J", n, e)
        jr_even = _keys(F, subgroup_shape("Jr", 2 * n, e), N)
        meet = _keys(F, J, N) & _keys(F, J.conj_P(), N)
        out.append({"identity": f"Jr_{2 * n} = J_{n} n PJ_{n}", "n": n, "N": N, "holds": jr_even == meet,
                    "sizes": [len(jr_even), len(meet)]})
        jr_odd = _keys(F, subgroup_shape("Jr", 2 * n + 1, e), N)
        gen = {g.key() for g in closure_subgroup(F, "Jr", 2 * n + 1, budget_closure)}
        out.append({"identity": f"Jr_{2 * n + 1} = J_{n + 1} * PJ_{n + 1}", "n": n, "N": N,
                    "holds": jr_odd == gen, "sizes": [len(jr_odd), len(gen)]})
        if n >= 1:
            Jn = _keys(F, J, N)
            Kn = _keys(F, subgroup_shape("K", n, e), N)
            out.append({"identity": f"J_{n} < K_{n}", "n": n, "N": N, "holds": Jn < Kn,
                        "sizes": [len(Jn), len(Kn)], "J_in_K": Jn <= Kn, "K_in_J": Kn <= Jn})
    return out


def suite_filtrations(exts, max_level=2, precision=None, base=None, budget_closure=DEFAULT_CLOSURE_BUDGET, **_):
    F = base.with_precision(precision or 3)
    out = filtration_records(F, max_level, budget_closure)
    return out, all(r["holds"] for r in out)


def _rand(F: FieldCtx, rng):
    return F(tuple(rng.randrange(2 ** F.precision) for _ in range(F.degree)))


def selftest(base: FieldCtx, seed: int = 0, trials: int = 200) -> tuple[list, bool]:
    """Randomized ring and extension identities (a quick health check, not a proof)."""
    rng = random.Random(seed)
    F = base
    results = {}

    def record(name, ok):
        results.setdefault(name, [0, 0])
        results[name][0] += 1
        results[name][1] += not ok

    for _ in range(trials):
        a, b, c = (_rand(F, rng) for _ in range(3))
        record("ring:distributive", a * (b + c) == a * b + a * c)
        record("ring:associative", (a * b) * c == a * (b * c))
        record("ring:additive_inverse", (a + (-a)).is_zero())
        if a.is_unit():
            record("ring:unit_inverse", a * a.inverse() == F.one)
    exts = [make_extension(F, d, 2 * F.precision) for d in classify_extensions(F)]
    for ext in exts:
        for _ in range(trials // len(exts) + 1):
            z = ext(_rand(ext.base, rng), _rand(ext.base, rng))
            w = ext(_rand(ext.base, rng), _rand(ext.base, rng))
            record("ext:norm_multiplicative", (z * w).norm() == z.norm() * w.norm())
            record("ext:conj_involution", z.conj().conj() == z)
            record("ext:conj_multiplicative", (z * w).conj() == z.conj() * w.conj())
            record("ext:trace_norm", z * z - ext.embed(z.trace()) * z + ext.embed(z.norm()) == ext.zero)
            if z.is_unit():
                record("ext:unit_inverse", z * z.inverse() == ext.one)
    out = [{"check": k, "trials": v[0], "failures": v[1], "holds": v[1] == 0} for k, v in sorted(results.items())]
    return out, all(r["holds"] for r in out)


RUNNERS = {
    "lf": suite_lf,
    "casselman": suite_casselman,
    "lemma-j": suite_lemma_j,
    "theorem": suite_theorem,
    "trees": suite_trees,
    "filtrations": suite_filtrations,
}


def run_suite(name: str, exts, **kw):
    if name not in RUNNERS:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    log.info("suite %s over %d extension(s)", name, len(exts))
    return RUNNERS[name](exts, **kw)
