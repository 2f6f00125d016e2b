"""Stabilizers of quadratic points: a brute-force oracle and the t.j.s closed form.

Everything is compared as sets of canonical representatives mod K_N. A
point is in normalized position when it is [1:y:n] (unramified, y outside
the residue field) or [1:y:2n] with val_E(y) = 1 (ramified); these are the
points whose nearest T_F vertices are the root and, in the ramified case,
the edge through [1:0:1].
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from .errors import NotNormalized, PrecisionTooSmall
from .grp import (DEFAULT_ENUM_BUDGET, GroupElem, Shape, closure_subgroup, elements_of_shape,
                  enumerate_sl2, norm_one_torus, preimage, special_matrix, subgroup_shape,
                  torus_members, trace_zero_for_point, act)
from .quadext import ExtCtx, different_valuation
from .ring import ABOVE_PRECISION, FieldCtx
from .tree import (QuadraticPoint, Vertex, distance, galois_act_vertex, neighbors, normalize_point,
                   quadratic_point_from_vertex, root, vertices_at_depth)

log = logging.getLogger(__name__)

PARSES = ("union_first", "difference_last")
MODES = ("orbit", "vertex")
MAX_WITNESSES = 5


@dataclass(frozen=True)
class TheoremParams:
    n: int
    m: int
    t: int | None
    eps: int
    delta: int | None  # the "partial" correction; None when unramified

    def to_json(self) -> dict:
        return {"m": self.m, "t": self.t, "eps": self.eps, "del": self.delta}


def theorem_params(ext: ExtCtx, n: int) -> TheoremParams:
    if n < 1:
        raise ValueError("n must be at least 1")
    m = min(n // 2, ext.e_F)
    eps = ext.e_EF - 1
    if not ext.ramified:
        return TheoremParams(n, m, None, eps, None)
    diff = different_valuation(ext)
    t = min(n, diff - 1)
    delta = math.ceil((ext.e_E + 1 - diff) / ext.e_E)
    return TheoremParams(n, m, t, eps, delta)


@dataclass(frozen=True)
class RangeBounds:
    """Exponents of the s-factor ranges: x in {1} u U^A \\ U^B, y in {0} u p^C \\ p^D."""
    A: int
    B: int
    C: int
    D: int

    @classmethod
    def from_params(cls, p: TheoremParams) -> "RangeBounds":
        t, dl = p.t or 0, p.delta or 0
        return cls(p.n - math.ceil(t / 2) + dl, p.n - p.m, p.n - t // 2 + 1 - dl, p.n - 1)


@dataclass
class Mutation:
    """Perturbations used to check that the comparison is not vacuous."""
    params: dict = field(default_factory=dict)
    bounds: dict = field(default_factory=dict)

    def apply(self, p: TheoremParams) -> TheoremParams:
        """Add the parameter offsets; parameters the branch does not use stay None."""
        changes = {k: getattr(p, k) + v for k, v in self.params.items() if getattr(p, k) is not None}
        return replace(p, **changes) if changes else p

    def shift(self, b: RangeBounds) -> RangeBounds:
        if not self.bounds:
            return b
        return RangeBounds(**{k: getattr(b, k) + self.bounds.get(k, 0) for k in "ABCD"})

    def label(self) -> str:
        parts = [f"{k}{v:+d}" for k, v in sorted(self.params.items())]
        parts += [f"{k}{v:+d}" for k, v in sorted(self.bounds.items())]
        return ",".join(parts) or "none"


# -- normalized position -------------------------------------------------------


def theorem_level(point: QuadraticPoint) -> int:
    e = point.ext.e_EF
    if point.depth % e:
        raise NotNormalized("depth is not a multiple of e_{E/F}")
    return point.depth // e


def is_normalized(v: Vertex) -> bool:
    ext = v.ctx
    if not isinstance(ext, ExtCtx) or v.depth == 0 or v.depth % ext.e_EF:
        return False
    if v.x.valuation() != 0:
        return False
    y = v.y
    if ext.ramified:
        v0 = y.c0.valuation()
        return y.c1.valuation() == 0 and (v0 is ABOVE_PRECISION or v0 >= 1)
    return y.c1.valuation() == 0


def base_point(ext: ExtCtx, n: int) -> QuadraticPoint:
    """[1:x:n] unramified, [1:-x:2n] ramified (an eigenline of P_E)."""
    y0 = -ext.gen if ext.ramified else ext.gen
    depth = n * ext.e_EF
    ctx = ext if ext.precision >= depth else ext.with_precision(depth)
    return quadratic_point_from_vertex(normalize_point(ctx.one, ctx.coerce(y0), depth))


def normalized_points(ext: ExtCtx, n: int) -> list[QuadraticPoint]:
    depth = n * ext.e_EF
    ctx = ext if ext.precision >= depth else ext.with_precision(depth)
    return [quadratic_point_from_vertex(v) for v in vertices_at_depth(ctx, depth) if is_normalized(v)]


def _require_normalized(point: QuadraticPoint):
    if not is_normalized(point.rep):
        raise NotNormalized(f"{point.rep.label()} is not in normalized position; conjugate it first")


def normalizing_element(point: QuadraticPoint, budget=DEFAULT_ENUM_BUDGET) -> GroupElem | None:
    """Some g in SL2(O) with g.rep normalized, or None if the K-orbit misses normalized position."""
    ext = point.ext
    r = -(-point.depth // ext.e_EF)
    if is_normalized(point.rep):
        return GroupElem.identity(ext.base.with_precision(r))
    for g in enumerate_sl2(ext.base, r, budget):
        if is_normalized(act(g, point.rep)):
            return g
    return None


# -- oracle ------------------------------------------------------------------


def _action_precision(point: QuadraticPoint) -> int:
    return -(-point.depth // point.ext.e_EF)


def _scan_chunk(args):
    ctx, r, index, parts, rep, conj_rep, mode = args
    targets = {rep} if mode == "vertex" else {rep, conj_rep}
    out = []
    for g in enumerate_sl2(ctx, r, None).chunk(index, parts):
        if act(g, rep) in targets:
            out.append(g.key())
    return out


def brute_force_stabilizer(point: QuadraticPoint, N: int, mode: str = "orbit", jobs: int = 1,
                           budget: int = DEFAULT_ENUM_BUDGET) -> set:
    """All g in SL2(O/p^N) with g.rep in the orbit {rep, conj_rep} (mode 'orbit') or g.rep = rep."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    r = _action_precision(point)
    if N < r:
        raise PrecisionTooSmall(f"precision {N} below the action precision {r}")
    F = point.ext.base
    enum = enumerate_sl2(F, N, budget)  # budget check on the full group
    parts = max(1, jobs)
    tasks = [(F.with_precision(r), r, i, parts, point.rep, point.conj_rep, mode) for i in range(parts)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_scan_chunk, tasks))
    else:
        chunks = [_scan_chunk(t) for t in tasks]
    small = set()
    for c in chunks:
        small.update(c)
    del enum
    return preimage(small, F, r, N, budget)


# -- closed form -------------------------------------------------------------


def _unit_range(F: FieldCtx, lo: int, hi: int, r: int, parse: str) -> list:
    """{1} u U^lo \\ U^hi (union_first) or ({1} u U^lo) \\ U^hi, as residues mod p^r."""
    lo, hi = max(lo, 0), max(hi, 0)

    def in_U(u, k):
        if k == 0:
            return True
        v = (u - 1).valuation()
        return v is ABOVE_PRECISION or v >= k

    units = [u for u in F.residues(r) if u.is_unit()]
    body = {u.key() for u in units if in_U(u, lo) and not in_U(u, hi)}
    if parse == "union_first":
        keys = body | {F.one.key()}
    else:
        keys = {u.key() for u in units if (in_U(u, lo) or u == F.one) and not in_U(u, hi)}
    return [u for u in units if u.key() in keys]


def _ideal_range(F: FieldCtx, lo: int, hi: int, r: int, parse: str) -> list:
    lo, hi = max(lo, 0), max(hi, 0)

    def in_p(z, k):
        v = z.valuation()
        return k == 0 or v is ABOVE_PRECISION or v >= k

    elems = list(F.residues(r))
    if parse == "union_first":
        keys = {z.key() for z in elems if in_p(z, lo) and not in_p(z, hi)} | {F.zero.key()}
    else:
        keys = {z.key() for z in elems if (in_p(z, lo) or z.is_zero()) and not in_p(z, hi)}
    return [z for z in elems if z.key() in keys]


def s_factors(ext: ExtCtx, params: TheoremParams, bounds: RangeBounds, r: int, parse: str) -> list:
    F = ext.base.with_precision(r)
    if not ext.ramified:
        return [GroupElem.identity(F)]
    P = special_matrix("P_E", ext).reduce(r) if ext.base.precision >= r else None
    if P is None:
        P = special_matrix("P_E", ext.with_precision(r * ext.e_EF)).reduce(r)
    out = []
    for x in _unit_range(F, bounds.A, bounds.B, r, parse):
        for y in _ideal_range(F, bounds.C, bounds.D, r, parse):
            lin = GroupElem(F, x + y * P.a, y * P.b, y * P.c, x + y * P.d, check=False)
            det = lin.det()
            if not det.is_unit():
                continue
            z = det.inverse()
            out.append(GroupElem(F, lin.a, lin.b, lin.c * z, lin.d * z, check=False))
    return out


def j_shape(params: TheoremParams) -> Shape:
    n = params.n
    return Shape(max(n - params.m, 0), max(n - params.eps, 0), max(n, 0))


@dataclass
class ClosedForm:
    params: TheoremParams
    bounds: RangeBounds
    precision: int
    torus: list
    j: list
    s: list
    keys: set


def closed_form_pieces(point: QuadraticPoint, N: int, parse: str = "union_first",
                       mutation: Mutation | None = None) -> ClosedForm:
    _require_normalized(point)
    if parse not in PARSES:
        raise ValueError(f"parse must be one of {PARSES}")
    ext = point.ext
    n = theorem_level(point)
    if N < n + 1:
        raise PrecisionTooSmall(f"precision {N} < n + 1 = {n + 1}")
    params = theorem_params(ext, n)
    bounds = RangeBounds.from_params(params)
    if mutation:
        params = mutation.apply(params)
        bounds = RangeBounds.from_params(params)
        bounds = mutation.shift(bounds)
    shape = j_shape(params)
    r = min(max(shape.max_level(), 1), N)
    F = ext.base.with_precision(r)
    tz = trace_zero_for_point(point.rep.x, point.rep.y, ext.with_precision(max(ext.precision, r * ext.e_EF)))
    torus = [GroupElem(F, *k, check=False) for k in sorted(norm_one_torus(tz, r))]
    js = elements_of_shape(F, shape, r)
    ss = s_factors(ext, params, bounds, r, parse)
    keys = set()
    for t in torus:
        for j in js:
            tj = t * j
            for s in ss:
                keys.add((tj * s).key())
    return ClosedForm(params, bounds, r, torus, js, ss, keys)


def closed_form_stabilizer(point: QuadraticPoint, N: int, parse: str = "union_first",
                           mutation: Mutation | None = None, budget: int = DEFAULT_ENUM_BUDGET) -> set:
    """The set T_alpha . J . S mod K_N (compact part of the torus)."""
    cf = closed_form_pieces(point, N, parse, mutation)
    return preimage(cf.keys, point.ext.base, cf.precision, N, budget)


def transported_closed_form(point: QuadraticPoint, N: int, parse: str = "union_first",
                            budget: int = DEFAULT_ENUM_BUDGET) -> set:
    """Closed form for any point: g^-1 Stab(g.alpha) g with g.alpha normalized.

    g is only known mod p^r; any lift with unit determinant works because
    SL2 is normal in GL2.
    """
    if is_normalized(point.rep):
        return closed_form_stabilizer(point, N, parse, budget=budget)
    g = normalizing_element(point, budget)
    if g is None:
        raise NotNormalized(f"no SL2(O) translate of {point.rep.label()} is in normalized position")
    F = point.ext.base.with_precision(N)
    g = GroupElem(F, *(F.coerce(z) for z in (g.a, g.b, g.c, g.d)), check=False)
    moved = quadratic_point_from_vertex(act(g, point.rep))
    ginv = g.inverse()
    return {(ginv * GroupElem(F, *k, check=False) * g).key()
            for k in closed_form_stabilizer(moved, N, parse, budget=budget)}


# -- reports -----------------------------------------------------------------


def _literal(F, key) -> str:
    return GroupElem(F, *key, check=False).literal()


@dataclass
class StabilizerReport:
    point: QuadraticPoint
    precision_N: int
    params: TheoremParams
    parse: str
    mode: str
    oracle_set: set
    closed_set: set
    verdict: str
    witnesses: list
    orbit: int = 0
    mutation: str = "none"

    def to_json(self) -> dict:
        ext = self.point.ext
        return {
            "ext": ext.desc.spec(),
            "point": self.point.rep.label(),
            "orbit": self.orbit,
            "n": self.params.n,
            "tree_level": self.point.level,
            "N": self.precision_N,
            "params": self.params.to_json(),
            "parse_choice": self.parse,
            "mode": self.mode,
            "torus": "compact",
            "mutation": self.mutation,
            "oracle_size": len(self.oracle_set),
            "closed_size": len(self.closed_set),
            "verdict": self.verdict,
            "witnesses": self.witnesses,
        }


def compare_sets(oracle: set, closed: set) -> tuple[str, list]:
    if oracle == closed:
        return "equal", []
    if closed < oracle:
        return "closed_subset_strict", sorted(oracle - closed)[:MAX_WITNESSES]
    diff = sorted(closed - oracle)[:MAX_WITNESSES] + sorted(oracle - closed)[:MAX_WITNESSES]
    return "mismatch", diff[:MAX_WITNESSES]


def stabilizer_report(point: QuadraticPoint, N: int, parse: str = "union_first", mode: str = "orbit",
                      mutation: Mutation | None = None, jobs: int = 1, oracle: set | None = None,
                      budget: int = DEFAULT_ENUM_BUDGET) -> StabilizerReport:
    if oracle is None:
        oracle = brute_force_stabilizer(point, N, mode, jobs, budget)
    closed = closed_form_stabilizer(point, N, parse, mutation, budget)
    verdict, wit = compare_sets(oracle, closed)
    F = point.ext.base.with_precision(N)
    params = theorem_params(point.ext, theorem_level(point))
    if mutation:
        params = mutation.apply(params)
    return StabilizerReport(point, N, params, parse, mode, oracle, closed, verdict,
                            [_literal(F, k) for k in wit], mutation=mutation.label() if mutation else "none")


def orbit_classes(points: list[QuadraticPoint], budget=DEFAULT_ENUM_BUDGET) -> list[int]:
    """Orbit index of each point under SL2(O) together with Galois conjugation."""
    if not points:
        return []
    ext = points[0].ext
    r = _action_precision(points[0])
    group = list(enumerate_sl2(ext.base, r, budget))
    index = {}
    labels = []
    for p in points:
        if p.rep in index:
            labels.append(index[p.rep])
            continue
        k = len(set(index.values()))
        for g in group:
            for v in (p.rep, p.conj_rep):
                index[act(g, v)] = k
        labels.append(k)
    return labels


def verify_theorem(ext: ExtCtx, n_max: int, N: int | None = None, parse: str = "union_first",
                   mode: str = "orbit", mutation: Mutation | None = None, jobs: int = 1,
                   budget: int = DEFAULT_ENUM_BUDGET, oracle_cache: dict | None = None) -> list[StabilizerReport]:
    """Compare oracle and closed form for every normalized point with n <= n_max.

    N defaults to n + 2 for each level. ``oracle_cache`` (keyed by point label
    and N) lets mutation sweeps reuse the expensive oracle runs.
    """
    reports = []
    for n in range(1, n_max + 1):
        NN = N if N is not None else n + 2
        pts = normalized_points(ext.with_precision(max(ext.precision, n * ext.e_EF)), n)
        orbits = orbit_classes(pts, budget)
        for p, orb in zip(pts, orbits):
            ck = (ext.base.kind, ext.base.poly, ext.desc.spec(), p.rep.label(), NN, mode)
            oracle = None if oracle_cache is None else oracle_cache.get(ck)
            if oracle is None:
                oracle = brute_force_stabilizer(p, NN, mode, jobs, budget)
                if oracle_cache is not None:
                    oracle_cache[ck] = oracle
            rep = stabilizer_report(p, NN, parse, mode, mutation, jobs, oracle, budget)
            rep.orbit = orb
            reports.append(rep)
            log.info("%s %s n=%d N=%d: %s", ext.desc.spec(), p.rep.label(), n, NN, rep.verdict)
    return reports


# -- one-sided containment --------------------------------------------------------


@dataclass
class TanReport:
    ext: str
    point: str
    n: int
    N: int
    mode: str
    holds: bool
    witnesses: list

    def to_json(self) -> dict:
        return {"ext": self.ext, "point": self.point, "n": self.n, "N": self.N, "mode": self.mode,
                "holds": self.holds, "witnesses": self.witnesses}


def tan_containment(point: QuadraticPoint, N: int, mode: str = "orbit", oracle: set | None = None,
                    budget: int = DEFAULT_ENUM_BUDGET) -> TanReport:
    """Check oracle <= T_{alpha,n} . J' with J' = J_n (unramified) or Jr_{2n-1} (ramified).

    T_{alpha,n} is {x + yC : det = 1 mod p^n}; the product is read mod p^n,
    where both factors are saturated.
    """
    _require_normalized(point)
    ext = point.ext
    n = theorem_level(point)
    if oracle is None:
        oracle = brute_force_stabilizer(point, N, mode, budget=budget)
    shape = subgroup_shape("Jr", 2 * n - 1, ext.e_F) if ext.ramified else subgroup_shape("J", n, ext.e_F)
    r = min(max(shape.max_level(), n), N)
    F = ext.base.with_precision(r)
    tz = trace_zero_for_point(point.rep.x, point.rep.y, ext.with_precision(max(ext.precision, r * ext.e_EF)))
    tz_gen = tz.gen.reduce(r)
    tz = replace(tz, gen=tz_gen)
    torus = [GroupElem(F, *k, check=False) for k in torus_members(tz, n, r)]
    js = elements_of_shape(F, shape, r)
    prod = {(t * j).key() for t in torus for j in js}
    FN = ext.base.with_precision(N)
    missing = []
    for k in sorted(oracle):
        g = GroupElem(FN, *k, check=False)
        if g.reduce(r).key() not in prod:
            missing.append(g.literal())
            if len(missing) >= MAX_WITNESSES:
                break
    return TanReport(ext.desc.spec(), point.rep.label(), n, N, mode, not missing, missing)


# -- Lemma J ---------------------------------------------------------------------


def ball(center: Vertex, radius: int) -> list[Vertex]:
    seen = {center}
    frontier = [center]
    for _ in range(radius):
        nxt = []
        for v in frontier:
            for w in neighbors(v):
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return sorted(seen)


@dataclass
class LemmaJReport:
    ext: str
    n: int
    N: int
    center: str
    radius: int
    target: str
    stabilizer_size: int
    target_size: int
    equal: bool
    witnesses: list

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in ("ext", "n", "N", "center", "radius", "target",
                                               "stabilizer_size", "target_size", "equal", "witnesses")}


def pointwise_ball_stabilizer(ext: ExtCtx, center: Vertex, radius: int, within: Shape, N: int,
                              budget=DEFAULT_ENUM_BUDGET) -> set:
    """Elements of `within` (mod K_N) fixing every vertex of the ball."""
    verts = ball(center, radius)
    deepest = max(v.depth for v in verts)
    r = max(1, -(-deepest // ext.e_EF))
    if r > N:
        raise PrecisionTooSmall(f"ball needs precision {r} > N = {N}")
    F = ext.base.with_precision(r)
    boundary = [v for v in verts if distance(v, center) == radius] or verts
    keys = set()
    for g in elements_of_shape(F, within, r, budget):
        if all(act(g, v) == v for v in boundary):
            keys.add(g.key())
    return preimage(keys, ext.base, r, N, budget)


def _shape_set(F: FieldCtx, shape: Shape, N: int) -> set:
    return {g.key() for g in elements_of_shape(F, shape, N)}


def verify_lemma_j(ext: ExtCtx, n: int, N: int | None = None, budget=DEFAULT_ENUM_BUDGET) -> list[LemmaJReport]:
    """Pointwise ball stabilizers inside K_{n-m} against J_n and Jr_{2n+1} / P J_{n+1}."""
    N = N if N is not None else n + 2
    e = ext.e_EF
    need = n * e + 2
    X = ext if ext.precision >= need else ext.with_precision(need)
    F = ext.base.with_precision(N)
    m = min(n // 2, ext.e_F)
    within = subgroup_shape("K", n - m, ext.e_F)
    reports = []

    def report(center, radius, target_name, target, stab):
        wit = sorted(stab ^ target)[:MAX_WITNESSES]
        return LemmaJReport(ext.desc.spec(), n, N, center.label(), radius, target_name, len(stab),
                            len(target), stab == target, [_literal(F, k) for k in wit])

    # ball about the root
    stab = pointwise_ball_stabilizer(X, root(X), n * e, within, N, budget)
    target = _shape_set(F, subgroup_shape("J", n, ext.e_F), N)
    reports.append(report(root(X), n * e, f"J_{n}", target, stab))

    # ball about [1:0:1]
    center = normalize_point(X.one, X.zero, 1)
    if N < -(-(n * e + 2) // e):
        raise PrecisionTooSmall("precision too small for the second ball")
    stab2 = pointwise_ball_stabilizer(X, center, n * e + 1, within, N, budget)
    if ext.ramified:
        shape_target = _shape_set(F, subgroup_shape("Jr", 2 * n + 1, ext.e_F), N)
        reports.append(report(center, n * e + 1, f"Jr_{2 * n + 1}", shape_target, stab2))
        closure = {g.key() for g in closure_subgroup(F, "Jr", 2 * n + 1, budget)}
        reports.append(report(center, n * e + 1, f"J_{n + 1}*PJ_{n + 1}", closure, stab2))
    else:
        shape = subgroup_shape("J", n + 1, ext.e_F).conj_P()
        reports.append(report(center, n * e + 1, f"PJ_{n + 1}", _shape_set(F, shape, N), stab2))
    return reports


# -- conjugation equivariance ----------------------------------------------------


@dataclass
class EquivarianceReport:
    ext: str
    point: str
    N: int
    mode: str
    h: str
    oracle_equivariant: bool
    g: str
    moved_point: str
    closed_equivariant: bool

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in ("ext", "point", "N", "mode", "h", "oracle_equivariant",
                                               "g", "moved_point", "closed_equivariant")} | {
            "holds": self.oracle_equivariant and self.closed_equivariant}


def _unipotents(F: FieldCtx, b, c):
    return (GroupElem(F, F.one, b, F.zero, F.one), GroupElem(F, F.one, F.zero, c, F.one))


def conjugation_spot_check(point: QuadraticPoint, N: int, rng, mode: str = "orbit",
                           parse: str = "union_first", budget=DEFAULT_ENUM_BUDGET) -> EquivarianceReport:
    """Stab(g.alpha) = g Stab(alpha) g^-1 for random g.

    The oracle is tested with a random product of unipotents. The closed form
    needs a normalized point, so it is tested with g = [[1,0],[c,1]], c in p
    when E/F is ramified; c is taken nonzero mod p^r when that is possible so
    that the point actually moves.
    """
    _require_normalized(point)
    ext = point.ext
    F = ext.base.with_precision(N)
    res = list(F.residues(N))
    pick = lambda pool: pool[rng.randrange(len(pool))]
    u1, l1 = _unipotents(F, pick(res), pick(res))
    _, l2 = _unipotents(F, F.zero, pick(res))
    h = l1 * u1 * l2
    hinv = h.inverse()

    def conj_set(keys, x, xinv):
        return {(x * GroupElem(F, *k, check=False) * xinv).key() for k in keys}

    o1 = brute_force_stabilizer(point, N, mode, budget=budget)
    o_h = brute_force_stabilizer(quadratic_point_from_vertex(act(h, point.rep)), N, mode, budget=budget)

    r = _action_precision(point)
    cs = [c for c in res if not ext.ramified or c.valuation() != 0]
    moving = [c for c in cs if not c.reduce(r).is_zero()]
    c = pick(moving or cs)
    g = GroupElem(F, F.one, F.zero, c, F.one)
    moved = quadratic_point_from_vertex(act(g, point.rep))
    c1 = closed_form_stabilizer(point, N, parse, budget=budget)
    c2 = closed_form_stabilizer(moved, N, parse, budget=budget)
    return EquivarianceReport(ext.desc.spec(), point.rep.label(), N, mode, h.literal(),
                              conj_set(o1, h, hinv) == o_h, g.literal(), moved.rep.label(),
                              conj_set(c1, g, g.inverse()) == c2)
