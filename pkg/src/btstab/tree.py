"""Finite-depth Bruhat-Tits trees in [x:y:n] coordinates.

A vertex at depth n is a point of P^1(O/p^n); the root is [0:0:0]. Points are
stored canonically: (1, y) when x is a unit, else (x, 1) with x in p. The
same code serves T_F (coordinates in a FieldCtx) and T_E (an ExtCtx).
Group elements act on column vectors.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import NotUnimodular, PointIsRational, PrecisionTooSmall
from .quadext import ExtCtx, ExtElem
from .ring import ABOVE_PRECISION, RingElem, format_element


class Vertex:
    __slots__ = ("depth", "x", "y", "_key")

    def __init__(self, depth: int, x, y):
        self.depth = depth
        self.x = x
        self.y = y
        self._key = (depth, x.key(depth), y.key(depth)) if depth else (0,)

    @property
    def ctx(self):
        return self.x.ctx

    def key(self):
        return self._key

    def __eq__(self, other):
        return isinstance(other, Vertex) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __lt__(self, other):
        return self._key < other._key

    def __repr__(self):
        return f"[{self.label()}]"

    def label(self) -> str:
        if self.depth == 0:
            return "0:0:0"
        return f"{_fmt(self.x)}:{_fmt(self.y)}:{self.depth}"


def _fmt(z) -> str:
    if isinstance(z, RingElem):
        return format_element(z)
    c0, c1 = format_element(z.c0), format_element(z.c1)
    if z.c1.is_zero():
        return c0
    wrap = (lambda s: f"({s})" if "+" in s else s)
    return f"{wrap(c0)}+{wrap(c1)}*x"


def root(ctx) -> Vertex:
    return Vertex(0, ctx.zero, ctx.zero)


def normalize_point(x, y, n: int) -> Vertex:
    """Canonical vertex [x:y:n] for a unimodular pair."""
    ctx = x.ctx
    if n == 0:
        return root(ctx)
    if n > ctx.precision:
        raise PrecisionTooSmall(f"depth {n} exceeds working precision {ctx.precision}")
    if x.valuation() == 0:
        return Vertex(n, ctx.one, (y * x.inverse()).reduce(n))
    if y.valuation() == 0:
        return Vertex(n, (x * y.inverse()).reduce(n), ctx.one)
    raise NotUnimodular("neither coordinate is a unit")


def ancestor(v: Vertex, k: int) -> Vertex:
    if k >= v.depth:
        return v
    return normalize_point(v.x, v.y, k)


def parent(v: Vertex) -> Vertex:
    if v.depth == 0:
        raise ValueError("the root has no parent")
    return ancestor(v, v.depth - 1)


def meet_depth(u: Vertex, v: Vertex) -> int:
    k = min(u.depth, v.depth)
    while k > 0 and ancestor(u, k) != ancestor(v, k):
        k -= 1
    return k


def distance(u: Vertex, v: Vertex) -> int:
    return u.depth + v.depth - 2 * meet_depth(u, v)


def children(v: Vertex) -> list[Vertex]:
    ctx = v.ctx
    d = v.depth
    if d + 1 > ctx.precision:
        raise PrecisionTooSmall("children would exceed working precision")
    if d == 0:
        return [Vertex(1, ctx.one, r) for r in ctx.residues(1)] + [Vertex(1, ctx.zero, ctx.one)]
    step = ctx.power_of_uniformizer(d)
    if v.x.valuation() == 0:
        return [Vertex(d + 1, ctx.one, (v.y + step * r).reduce(d + 1)) for r in ctx.residues(1)]
    return [Vertex(d + 1, (v.x + step * r).reduce(d + 1), ctx.one) for r in ctx.residues(1)]


def neighbors(v: Vertex) -> list[Vertex]:
    out = [] if v.depth == 0 else [parent(v)]
    if v.depth < v.ctx.precision:
        out.extend(children(v))
    return out


def vertices_at_depth(ctx, n: int) -> list[Vertex]:
    """All of P^1(O/p^n), sorted."""
    if n == 0:
        return [root(ctx)]
    if n > ctx.precision:
        raise PrecisionTooSmall(f"depth {n} exceeds working precision {ctx.precision}")
    out = [Vertex(n, ctx.one, r) for r in ctx.residues(n)]
    out += [Vertex(n, r, ctx.one) for r in ctx.residues(n) if r.valuation() != 0]
    out.sort()
    return out


def vertices_up_to(ctx, n: int) -> list[Vertex]:
    out = []
    for k in range(n + 1):
        out.extend(vertices_at_depth(ctx, k))
    return out


# -- T_F inside T_E ---------------------------------------------------------


def _free_coordinate(v: Vertex):
    return v.y if v.x.valuation() == 0 else v.x


def is_rational(v: Vertex) -> bool:
    """True when v lies on the embedded image of T_F (including subdivided edges)."""
    if v.depth == 0:
        return True
    z = _free_coordinate(v)
    if not isinstance(z, ExtElem):
        return True
    off = ExtElem(z.ctx, z.ctx.base.zero, z.c1).valuation()
    return off is ABOVE_PRECISION or off >= v.depth


def is_embedded_vertex(v: Vertex) -> bool:
    """True when v is the image of a vertex of T_F (not an interior edge point)."""
    if not is_rational(v):
        return False
    e_EF = v.ctx.e_EF if isinstance(v.ctx, ExtCtx) else 1
    return v.depth % e_EF == 0


def embed_F_vertex(v: Vertex, ext: ExtCtx) -> Vertex:
    """Image of a T_F vertex in T_E; depths dilate by e_{E/F}."""
    depth = ext.e_EF * v.depth
    if depth > ext.precision:
        raise PrecisionTooSmall(f"image depth {depth} exceeds E precision {ext.precision}")
    if v.depth == 0:
        return root(ext)
    return normalize_point(ext.embed(v.x), ext.embed(v.y), depth)


def galois_act_vertex(v: Vertex) -> Vertex:
    if v.depth == 0:
        return v
    return normalize_point(v.x.conj(), v.y.conj(), v.depth)


def is_galois_fixed(v: Vertex) -> bool:
    return galois_act_vertex(v) == v


def level_of(v: Vertex) -> int:
    """Graph distance from v to the nearest embedded T_F vertex (BFS).

    Descendants of a non-rational vertex are never rational, so BFS only
    expands children of rational vertices; the horizon is 2 * depth.
    """
    horizon = max(2 * v.depth, 1)
    seen = {v}
    queue = deque([(v, 0)])
    while queue:
        cur, dist = queue.popleft()
        if is_embedded_vertex(cur):
            return dist
        if dist >= horizon:
            continue
        nxt = [] if cur.depth == 0 else [parent(cur)]
        if is_rational(cur) and cur.depth < cur.ctx.precision:
            nxt.extend(children(cur))
        for w in nxt:
            if w not in seen:
                seen.add(w)
                queue.append((w, dist + 1))
    raise AssertionError("no embedded vertex within the BFS horizon")  # pragma: no cover


@dataclass(frozen=True)
class QuadraticPoint:
    ext: ExtCtx
    rep: Vertex
    conj_rep: Vertex
    level: int

    @property
    def depth(self) -> int:
        return self.rep.depth

    def orbit(self) -> frozenset:
        return frozenset((self.rep, self.conj_rep))

    def to_json(self) -> dict:
        return {"rep": self.rep.label(), "conj_rep": self.conj_rep.label(),
                "depth": self.depth, "level": self.level,
                "galois_fixed": self.rep == self.conj_rep}


def quadratic_point_from_vertex(v: Vertex) -> QuadraticPoint:
    if is_rational(v):
        raise PointIsRational(f"{v.label()} lies on the embedded T_F")
    return QuadraticPoint(v.ctx, v, galois_act_vertex(v), level_of(v))


def quadratic_point(x: ExtElem, y: ExtElem, ext: ExtCtx, n: int) -> QuadraticPoint:
    return quadratic_point_from_vertex(normalize_point(ext.coerce(x), ext.coerce(y), n))


# -- barbs --------------------------------------------------------------------


def barb_diameter(ext: ExtCtx) -> int:
    """e_E - 1, or e_E when E has a trace-zero uniformizer; 0 when unramified."""
    if not ext.ramified:
        return 0
    trace_zero = ext.desc.diff_val == 2 * ext.e_F + 1
    return ext.e_E if trace_zero else ext.e_E - 1


@dataclass
class BarbMeasurement:
    depth: int
    components: list
    diameter: int
    truncated: bool

    def to_json(self) -> dict:
        return {"depth": self.depth, "diameter": self.diameter, "truncated": self.truncated,
                "components": [[v.label() for v in comp] for comp in self.components]}


def measure_barbs(ext: ExtCtx, depth: int) -> BarbMeasurement:
    """Galois-fixed, non-rational vertices up to ``depth``, grouped into components.

    Each component is measured together with the rational vertex it hangs
    from, i.e. as the closure of a region of the geometric tree. Components
    reaching ``depth`` may continue below it and are left out of the diameter.
    """
    if depth > ext.precision:
        ext = ext.with_precision(depth)
    fixed = [v for v in vertices_up_to(ext, depth) if not is_rational(v) and is_galois_fixed(v)]
    fixed_set = set(fixed)
    comp_of = {}
    comps = []
    for v in fixed:  # depth-major, so parents come first
        p = parent(v)
        if p in fixed_set:
            idx = comp_of[p]
        else:
            idx = len(comps)
            comps.append([p])
        comp_of[v] = idx
        comps[idx].append(v)
    diam = 0
    complete = 0
    for comp in comps:
        if any(v.depth == depth for v in comp):
            continue
        complete += 1
        for i, u in enumerate(comp):
            for w in comp[i + 1:]:
                diam = max(diam, distance(u, w))
    return BarbMeasurement(depth, [c[1:] for c in comps], diam, bool(comps) and not complete)


# -- export ---------------------------------------------------------------


def _tree_records(ctx, depth: int):
    verts = vertices_up_to(ctx, depth)
    index = {v: i for i, v in enumerate(verts)}
    edges = [[index[parent(v)], index[v]] for v in verts if v.depth > 0]
    recs = []
    for v in verts:
        ext = isinstance(ctx, ExtCtx)
        recs.append({
            "id": index[v],
            "label": v.label(),
            "n": v.depth,
            "rational": is_embedded_vertex(v) if ext else True,
            "on_tree_F": is_rational(v) if ext else True,
            "galois_fixed": is_galois_fixed(v) if ext else True,
        })
    return recs, edges


def export_json(ctx, depth: int) -> dict:
    recs, edges = _tree_records(ctx, depth)
    vertices = []
    for r in recs:
        x, y, _ = r["label"].rsplit(":", 2) if r["n"] else ("0", "0", "0")
        vertices.append({"id": r["id"], "x": x, "y": y, "n": r["n"], "rational": r["rational"],
                         "on_tree_F": r["on_tree_F"], "galois_fixed": r["galois_fixed"]})
    return {"depth": depth, "vertices": vertices, "edges": edges}


def export_dot(ctx, depth: int) -> str:
    recs, edges = _tree_records(ctx, depth)
    lines = ["graph tree {", "  node [shape=circle, fontsize=9];"]
    for r in recs:
        attrs = [f'label="{r["label"]}"']
        if r["rational"]:
            attrs.append("style=filled, fillcolor=lightblue")
        elif r["on_tree_F"]:
            attrs.append("style=filled, fillcolor=lightcyan")
        elif r["galois_fixed"]:
            attrs.append("style=filled, fillcolor=orange, shape=doublecircle")
        lines.append(f'  v{r["id"]} [{", ".join(attrs)}];')
    for a, b in edges:
        lines.append(f"  v{a} -- v{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
