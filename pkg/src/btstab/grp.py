"""SL2 over truncated rings: the action on tree vertices, congruence subgroups, tori.

Matrices act on column vectors. Congruence subgroups are described by a
``Shape`` (delta, beta, gamma): a - 1 and d - 1 lie in p^delta (no diagonal
condition when delta is 0), b in p^beta and c in p^gamma.
"""
from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass

from .errors import BudgetExceeded, CtxMismatch, NotUnimodular, PrecisionTooSmall, RationalLine
from .quadext import ExtCtx, ExtElem
from .ring import ABOVE_PRECISION, FieldCtx, RingElem, format_element, parse_element
from .tree import Vertex, normalize_point

DEFAULT_ENUM_BUDGET = 300_000
DEFAULT_CLOSURE_BUDGET = 100_000


class GroupElem:
    """2x2 matrix over O_F / p_F^N. SL2 unless built with ``check=False``."""

    __slots__ = ("ctx", "a", "b", "c", "d", "_key")

    def __init__(self, ctx: FieldCtx, a, b, c, d, check: bool = True):
        self.ctx = ctx
        self.a, self.b, self.c, self.d = (ctx(z) for z in (a, b, c, d))
        self._key = (self.a.coeffs, self.b.coeffs, self.c.coeffs, self.d.coeffs)
        if check and self.det() != ctx.one:
            raise NotUnimodular(f"determinant of {self.literal()} is not 1")

    @classmethod
    def identity(cls, ctx: FieldCtx) -> "GroupElem":
        return cls(ctx, 1, 0, 0, 1, check=False)

    def key(self):
        return self._key

    def __eq__(self, other):
        return isinstance(other, GroupElem) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __lt__(self, other):
        return self._key < other._key

    def __repr__(self):
        return f"GroupElem({self.literal()})"

    def rows(self):
        return ((self.a, self.b), (self.c, self.d))

    def literal(self) -> str:
        f = format_element
        return f"[[{f(self.a)},{f(self.b)}],[{f(self.c)},{f(self.d)}]]"

    def det(self) -> RingElem:
        return self.a * self.d - self.b * self.c

    def __mul__(self, h: "GroupElem") -> "GroupElem":
        a, b, c, d = self.a, self.b, self.c, self.d
        return GroupElem(self.ctx, a * h.a + b * h.c, a * h.b + b * h.d,
                         c * h.a + d * h.c, c * h.b + d * h.d, check=False)

    def scale(self, s) -> "GroupElem":
        return GroupElem(self.ctx, self.a * s, self.b * s, self.c * s, self.d * s, check=False)

    def inverse(self) -> "GroupElem":
        u = self.det().inverse()
        return GroupElem(self.ctx, self.d * u, -self.b * u, -self.c * u, self.a * u, check=False)

    def reduce(self, n: int) -> "GroupElem":
        """Image mod p^n (a matrix over the precision-n context)."""
        if n == self.ctx.precision:
            return self
        if n > self.ctx.precision:
            raise PrecisionTooSmall(f"cannot lift from precision {self.ctx.precision} to {n}")
        ctx = self.ctx.with_precision(n)
        return GroupElem(ctx, self.a, self.b, self.c, self.d, check=False)

    def conj(self, h: "GroupElem") -> "GroupElem":
        """h g h^-1."""
        return h * self * h.inverse()


def matrix(ctx: FieldCtx, rows, check: bool = True) -> GroupElem:
    (a, b), (c, d) = rows
    return GroupElem(ctx, a, b, c, d, check=check)


_LITERAL = re.compile(r"^\[\[(.+),(.+)\],\[(.+),(.+)\]\]$")


def parse_matrix(ctx: FieldCtx, text: str, check: bool = True) -> GroupElem:
    """``[[a,b],[c,d]]`` with element literals."""
    m = _LITERAL.match(text.replace(" ", ""))
    if not m:
        raise ValueError(f"bad matrix literal {text!r}")
    a, b, c, d = (parse_element(ctx, s) for s in m.groups())
    return GroupElem(ctx, a, b, c, d, check=check)


# -- action on T_E ----------------------------------------------------------


def act(g: GroupElem, v: Vertex) -> Vertex:
    """g . v for g with unit determinant; depth is preserved."""
    if v.depth == 0:
        return v
    vctx = v.ctx
    if isinstance(vctx, ExtCtx):
        need = -(-v.depth // vctx.e_EF)
        base = vctx.base
        if g.ctx.precision < need:
            raise PrecisionTooSmall(f"matrix precision {g.ctx.precision} < {need}")
        a, b, c, d = (base.coerce(z.reduce(need)) for z in (g.a, g.b, g.c, g.d))
        x = v.x * a + v.y * b
        y = v.x * c + v.y * d
    else:
        if g.ctx.precision < v.depth:
            raise PrecisionTooSmall(f"matrix precision {g.ctx.precision} < {v.depth}")
        a, b, c, d = (vctx.coerce(z.reduce(v.depth)) for z in (g.a, g.b, g.c, g.d))
        x = a * v.x + b * v.y
        y = c * v.x + d * v.y
    return normalize_point(x, y, v.depth)


# -- special matrices -------------------------------------------------------


def special_matrix(name: str, ctx) -> GroupElem:
    """P = ((0,1),(w_F,0)), W = ((0,1),(-1,0)) over F; P_E needs an ExtCtx."""
    if name == "P":
        return GroupElem(ctx, 0, 1, ctx.uniformizer, 0, check=False)
    if name == "W":
        return GroupElem(ctx, 0, 1, -1, 0)
    if name == "P_E":
        if not isinstance(ctx, ExtCtx):
            raise TypeError("P_E needs an extension context")
        F = ctx.base.with_precision(ctx.base.precision)
        if not ctx.ramified:
            u = F.uniformizer
            return GroupElem(F, u, 0, 0, u, check=False)
        pi = ctx.uniformizer
        return GroupElem(F, pi.trace(), 1, -pi.norm(), 0, check=False)
    raise ValueError(f"unknown special matrix {name!r}")


def conj_by_P(g: GroupElem) -> GroupElem | None:
    """P^-1 g P = ((d, c/w), (w b, a)), or None when c is not in p."""
    if g.c.valuation() == 0:
        return None
    ctx = g.ctx
    # c/w is only known mod p^(N-1); the top digit is ambiguous, so the
    # result is meaningful mod p^(N-1) only.
    return GroupElem(ctx, g.d, g.c.divide_by_uniformizer(), g.b * ctx.uniformizer, g.a, check=False)


# -- congruence shapes ----------------------------------------------------


@dataclass(frozen=True, order=True)
class Shape:
    delta: int
    beta: int
    gamma: int

    def conj_P(self) -> "Shape":
        """Shape of P X P^-1."""
        return Shape(self.delta, max(self.gamma - 1, 0), self.beta + 1)

    def levels(self) -> tuple[int, int, int]:
        return (self.delta, self.beta, self.gamma)

    def max_level(self) -> int:
        return max(self.levels())

    def contains(self, g: GroupElem) -> bool:
        """Membership of the class of g; levels above the precision are read mod p^N."""
        N = g.ctx.precision

        def inside(z, k):
            k = min(k, N)
            if k <= 0:
                return True
            v = z.valuation()
            return v is ABOVE_PRECISION or v >= k

        if not (inside(g.b, self.beta) and inside(g.c, self.gamma)):
            return False
        if self.delta > 0:
            return inside(g.a - 1, self.delta) and inside(g.d - 1, self.delta)
        return True

    def __str__(self):
        return f"({self.delta},{self.beta},{self.gamma})"


def m_param(n: int, e_F: int) -> int:
    return min(n // 2, e_F)


SUBGROUPS = ("K", "I", "J", "Jr", "B")


def subgroup_shape(name: str, n: int, e_F: int) -> Shape:
    """Shape of a congruence subgroup given by a displayed congruence.

    K_n, J_n (J_0 = K), Jr_k, B_n and I_{2k}. I_{2k+1} has no single shape
    and is realized through ``generated_closure``.
    """
    if n < 0:
        raise ValueError("subgroup index must be non-negative")
    if name == "K":
        return Shape(n, n, n)
    if name == "J":
        if n == 0:
            return Shape(0, 0, 0)
        return Shape(n - m_param(n, e_F), n, n)
    if name == "Jr":
        # m is that of J_{ceil(n/2)}: the value for which Jr_{2k} = J_k n PJ_k,
        # Jr_{2k+1} = J_{k+1} * PJ_{k+1} and Jr_{2k-1} is the j-family of level k
        k, eps = divmod(n, 2)
        return Shape(max(k - m_param(k + eps, e_F) + eps, 0), k, k + 1)
    if name == "B":
        return Shape(0, 0, n)
    if name == "I":
        k, odd = divmod(n, 2)
        if odd:
            raise ValueError("odd Iwahori filtration steps are defined by closure")
        return Shape(k, k, k + 1)
    raise ValueError(f"unknown subgroup {name!r}")


def subgroup_member(g: GroupElem, name: str, n: int, conj_P: bool = False, method: str = "shape",
                    budget: int = DEFAULT_CLOSURE_BUDGET) -> bool:
    """Membership of g (mod K_N) in a filtration subgroup, optionally P-conjugated."""
    N = g.ctx.precision
    if n > N + 1:
        raise PrecisionTooSmall(f"precision {N} cannot resolve index {n}")
    e_F = g.ctx.e
    closure_needed = (name == "I" and n % 2) or (name == "Jr" and n % 2 and method == "closure")
    if closure_needed:
        group = closure_subgroup(g.ctx, name, n, budget=budget)
        if conj_P:
            return conj_by_P_set_member(g, group)
        return g in group
    shape = subgroup_shape(name, n, e_F)
    if conj_P:
        shape = shape.conj_P()
    return shape.contains(g)


def conj_by_P_set_member(g: GroupElem, group: set) -> bool:
    h = conj_by_P(g)
    if h is None:
        return False
    N = g.ctx.precision
    hk = h.reduce(N - 1).key()
    return any(x.reduce(N - 1).key() == hk for x in group)


# -- enumeration --------------------------------------------------------------


def sl2_order(ctx: FieldCtx, N: int) -> int:
    q = ctx.residue_count(1)
    return q ** (3 * N) - q ** (3 * N - 2)


class SL2Enumeration:
    """SL2(O/p^N) as a sequence of independent chunks keyed by the top-left entry."""

    def __init__(self, ctx: FieldCtx, N: int, budget: int | None = DEFAULT_ENUM_BUDGET):
        self.ctx = ctx.with_precision(N)
        self.N = N
        size = sl2_order(ctx, N)
        if budget is not None and size > budget:
            raise BudgetExceeded(f"|SL2(O/p^{N})| = {size} exceeds the enumeration budget {budget}")
        self._a_values = list(self.ctx.residues(N))

    def __len__(self):
        return sl2_order(self.ctx, self.N)

    def __iter__(self):
        return self.chunk(0, 1)

    def partition(self, parts: int) -> list[tuple[int, int]]:
        return [(i, parts) for i in range(parts)]

    def chunk(self, index: int, parts: int):
        ctx = self.ctx
        R = list(ctx.residues(self.N))
        units = [r for r in R if r.is_unit()]
        for a in self._a_values[index::parts]:
            if a.is_unit():
                ainv = a.inverse()
                for b in R:
                    for c in R:
                        yield GroupElem(ctx, a, b, c, (1 + b * c) * ainv, check=False)
            else:
                for b in units:
                    binv = b.inverse()
                    for d in R:
                        yield GroupElem(ctx, a, b, (a * d - 1) * binv, d, check=False)


def enumerate_sl2(ctx: FieldCtx, N: int, budget: int | None = DEFAULT_ENUM_BUDGET) -> SL2Enumeration:
    return SL2Enumeration(ctx, N, budget)


def preimage(keys_mod_n: set, ctx: FieldCtx, n: int, N: int, budget=DEFAULT_ENUM_BUDGET) -> set:
    """All g in SL2(O/p^N) whose reduction mod p^n lies in the given key set.

    Each class is lifted directly: three entries move freely by p^n and the
    fourth is solved from the determinant.
    """
    if n == N:
        return set(keys_mod_n)
    fiber = ctx.residue_count(N - n) ** 3
    if budget is not None and len(keys_mod_n) * fiber > budget:
        raise BudgetExceeded(f"preimage of {len(keys_mod_n)} classes exceeds the budget {budget}")
    C = ctx.with_precision(N)
    step = C.power_of_uniformizer(n)
    shifts = [step * t for t in C.residues(N - n)]
    out = set()
    for key in keys_mod_n:
        a0, b0, c0, d0 = (C(k) for k in key)
        if a0.is_unit():
            for sa in shifts:
                a = a0 + sa
                ainv = a.inverse()
                for sb in shifts:
                    b = b0 + sb
                    for sc in shifts:
                        c = c0 + sc
                        out.add(GroupElem(C, a, b, c, (1 + b * c) * ainv, check=False).key())
        else:
            for sb in shifts:
                b = b0 + sb
                binv = b.inverse()
                for sa in shifts:
                    a = a0 + sa
                    for sd in shifts:
                        d = d0 + sd
                        out.add(GroupElem(C, a, b, (a * d - 1) * binv, d, check=False).key())
    return out


def elements_of_shape(ctx: FieldCtx, shape: Shape, N: int, budget=DEFAULT_ENUM_BUDGET) -> list[GroupElem]:
    """Members of a shape subgroup mod K_N, built directly instead of by filtering."""
    C = ctx.with_precision(N)

    def ideal(k):
        k = min(max(k, 0), N)
        return [r for r in C.residues(N) if k == 0 or r.valuation() is ABOVE_PRECISION or r.valuation() >= k]

    diag = ideal(shape.delta) if shape.delta > 0 else list(C.residues(N))
    out = []
    bs, cs = ideal(shape.beta), ideal(shape.gamma)
    if len(diag) * len(bs) * len(cs) > budget * 4:
        raise BudgetExceeded("shape enumeration exceeds budget")
    for a0 in diag:
        a = a0 + 1 if shape.delta > 0 else a0
        if a.is_unit():
            ainv = a.inverse()
            for b in bs:
                for c in cs:
                    g = GroupElem(C, a, b, c, (1 + b * c) * ainv, check=False)
                    if shape.contains(g):
                        out.append(g)
        else:
            for b in bs:
                if not b.is_unit():
                    continue
                binv = b.inverse()
                for d0 in diag:
                    d = d0 + 1 if shape.delta > 0 else d0
                    c = (a * d - 1) * binv
                    g = GroupElem(C, a, b, c, d, check=False)
                    if shape.contains(g):
                        out.append(g)
    return out


def generated_closure(A, B, N: int | None = None, budget: int = DEFAULT_CLOSURE_BUDGET) -> set:
    """Smallest subgroup of SL2(O/p^N) containing A and B (breadth-first)."""
    gens = [g if N is None else g.reduce(N) for g in itertools.chain(A, B)]
    if not gens:
        raise ValueError("closure of an empty set")
    one = GroupElem.identity(gens[0].ctx)
    seen = {one}
    queue = deque([one])
    while queue:
        h = queue.popleft()
        for g in gens:
            x = h * g
            if x not in seen:
                seen.add(x)
                if len(seen) > budget:
                    raise BudgetExceeded(f"closure exceeds {budget} elements")
                queue.append(x)
    return seen


_closure_cache: dict = {}


def closure_subgroup(ctx: FieldCtx, name: str, n: int, budget: int = DEFAULT_CLOSURE_BUDGET) -> set:
    """I_{2k+1} = K_{k+1} * P K_{k+1}, Jr_{2k+1} = J_{k+1} * P J_{k+1}, as subsets mod K_N."""
    key = (ctx.kind, ctx.poly, ctx.precision, name, n)
    if key in _closure_cache:
        return _closure_cache[key]
    k = n // 2
    inner = {"I": "K", "Jr": "J"}[name]
    shape = subgroup_shape(inner, k + 1, ctx.e)
    N = ctx.precision
    A = elements_of_shape(ctx, shape, N)
    B = elements_of_shape(ctx, shape.conj_P(), N)
    group = generated_closure(A, B, N, budget)
    _closure_cache[key] = group
    return group


# -- tori -------------------------------------------------------------------


@dataclass(frozen=True)
class TraceZeroMatrix:
    """A trace-zero integral matrix tau whose eigenlines are a conjugate pair.

    ``gen`` is the companion-type matrix C with C (x, y)^T = lam (x, y)^T;
    O[C] is the full integral part of F[tau], and tau is C made trace zero
    (C - Tr/2 when Tr is even, else 2C - Tr).
    """
    entries: GroupElem
    gen: GroupElem
    disc: RingElem
    eigenvalue: ExtElem
    line: tuple

    def to_json(self) -> dict:
        return {"tau": self.entries.literal(), "gen": self.gen.literal(),
                "disc": format_element(self.disc)}


def trace_zero_for_point(x: ExtElem, y: ExtElem, ext: ExtCtx) -> TraceZeroMatrix:
    x, y = ext.coerce(x), ext.coerce(y)
    F = ext.base
    if x.is_unit():
        lam = y * x.inverse()
        T, Nm = lam.trace(), lam.norm()
        C = GroupElem(F, 0, 1, -Nm, T, check=False)
        line = (ext.one, lam)
    elif y.is_unit():
        lam = x * y.inverse()
        T, Nm = lam.trace(), lam.norm()
        C = GroupElem(F, T, -Nm, 1, 0, check=False)
        line = (lam, ext.one)
    else:
        raise NotUnimodular("neither coordinate is a unit")
    if lam.c1.is_zero():
        raise RationalLine("the line is defined over F")
    if T.valuation() is not ABOVE_PRECISION and T.valuation() < F.e:
        tau = C.scale(2)
        tau = GroupElem(F, tau.a - T, tau.b, tau.c, tau.d - T, check=False)
    else:
        half = _halve(T)
        tau = GroupElem(F, C.a - half, C.b, C.c, C.d - half, check=False)
    return TraceZeroMatrix(tau, C, tau.det(), lam, line)


def _halve(t: RingElem) -> RingElem:
    F = t.ctx
    out = t
    for _ in range(F.e):
        out = out.divide_by_uniformizer()
    # 2 = w^e * unit; divide the unit out as well
    two = F(2)
    u = two
    for _ in range(F.e):
        u = u.divide_by_uniformizer()
    return F.coerce(out) * F.coerce(u).inverse()


def torus_members(tz: TraceZeroMatrix, n: int, N: int) -> set:
    """{x + y C mod p^N : det = 1 mod p^n} as a key set (unit-determinant GL2 elements)."""
    if N < n:
        raise PrecisionTooSmall("N must be at least n")
    C = tz.gen.reduce(N) if tz.gen.ctx.precision >= N else None
    if C is None:
        raise PrecisionTooSmall("torus generator known to lower precision than N")
    F = C.ctx
    out = set()
    for x in F.residues(N):
        for y in F.residues(N):
            g = GroupElem(F, x + y * C.a, y * C.b, y * C.c, x + y * C.d, check=False)
            dt = g.det()
            if not dt.is_unit():
                continue
            if n == 0 or (dt - 1).valuation() is ABOVE_PRECISION or (dt - 1).valuation() >= n:
                out.add(g.key())
    return out


def norm_one_torus(tz: TraceZeroMatrix, r: int) -> set:
    """Reduction mod p^r of the compact torus T_alpha (exact, determinant 1).

    Every norm-one z in O_E is w / conj(w) with w a unit or a uniformizer
    times a unit; z = X + Y lam gives the matrix X + Y C.
    """
    lam0 = tz.eigenvalue
    ext0 = lam0.ctx
    F0 = ext0.base
    k = lam0.c1.valuation()
    L = ext0.e_EF * (r + k) + 2
    ext = ext0.with_precision(L)
    F = ext.base
    lam = ExtElem(ext, F.coerce(lam0.c0), F.coerce(lam0.c1))
    Fr = F0.with_precision(r)
    T = lam.trace()
    Nm = lam.norm()
    if tz.line[0].is_unit():
        Cr = GroupElem(Fr, 0, 1, -Nm, T, check=False)
    else:
        Cr = GroupElem(Fr, T, -Nm, 1, 0, check=False)
    shifts = [ext.one]
    if ext.ramified:
        A = ext._A
        b = ext.base(ext.desc.b)
        shifts.append(ExtElem(ext, -F.one, -(F.coerce(A.divide_by_uniformizer()) * b.inverse())))
    out = set()
    for w in ext.units(L):
        base_z = w * w.conj().inverse()
        for s in shifts:
            z = base_z * s
            Y = _divide_exact(z.c1, lam.c1, k)
            X = z.c0 - Y * lam.c0
            Xr, Yr = Fr.coerce(X.reduce(r)), Fr.coerce(Y.reduce(r))
            g = GroupElem(Fr, Xr + Yr * Cr.a, Yr * Cr.b, Yr * Cr.c, Xr + Yr * Cr.d, check=False)
            out.add(g.key())
    return out


def _divide_exact(num: RingElem, den: RingElem, k: int) -> RingElem:
    if k:
        v = num.valuation()
        if v is not ABOVE_PRECISION and v < k:
            raise CtxMismatch("norm-one element outside O[lam]")
        for _ in range(k):
            num = num.divide_by_uniformizer()
            den = den.divide_by_uniformizer()
        F = num.ctx
        return F.coerce(num) * F.coerce(den).inverse()
    return num * den.inverse()
