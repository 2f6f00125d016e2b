"""Truncated local rings O_F / p_F^N for F = Q_2 or a one-step extension of Q_2.

Elements are stored in the power basis 1, w, ..., w^(d-1) of the defining
polynomial, with each coefficient reduced to the exact power of 2 that makes
the basis truncation agree with truncation mod p_F^N. In the Eisenstein case
the basis monomials have pairwise distinct valuations mod e, so

    val(sum c_i w^i) = min(e * v2(c_i) + i)

and reducing c_i mod 2^ceil((N - i) / e) is exactly reduction mod p_F^N.
"""
from __future__ import annotations

import itertools
import re

from .errors import (
    CtxMismatch,
    LevelOutOfRange,
    NotAUnit,
    NotEisenstein,
    PrecisionTooSmall,
    ResidueReducible,
)

KINDS = ("trivial", "unramified", "eisenstein")


class _Sentinel:
    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name


ABOVE_PRECISION = _Sentinel("ABOVE_PRECISION")
NOT_A_UNIT = _Sentinel("NOT_A_UNIT")


def v2(n: int) -> int:
    """2-adic valuation of a nonzero integer."""
    return (n & -n).bit_length() - 1


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


class FieldCtx:
    """Immutable description of O_F / p_F^N.

    ``poly`` is the monic defining polynomial, coefficients low to high,
    including the leading 1. For ``trivial`` it is ``(0, 1)`` (the element
    ``w`` is then 0 and never used).
    """

    prime = 2

    def __init__(self, kind: str, poly: tuple[int, ...], precision: int):
        self.kind = kind
        self.poly = tuple(poly)
        self.precision = precision
        self.degree = len(self.poly) - 1
        self.e = self.degree if kind == "eisenstein" else 1
        self.f = self.degree if kind == "unramified" else 1
        self._exps = self.digit_exponents(precision)
        self._mods = tuple(1 << k for k in self._exps)
        self.zero = RingElem(self, (0,) * self.degree)
        self.one = self(1)
        self._residue_inverses = None

    # identity -------------------------------------------------------------
    def _ident(self):
        return (self.kind, self.poly, self.precision)

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and self._ident() == other._ident()

    def __hash__(self):
        return hash(self._ident())

    def __repr__(self):
        return f"FieldCtx({self.kind!r}, poly={list(self.poly)}, N={self.precision})"

    def same_field(self, other) -> bool:
        return isinstance(other, FieldCtx) and (self.kind, self.poly) == (other.kind, other.poly)

    def with_precision(self, precision: int) -> "FieldCtx":
        if precision == self.precision:
            return self
        return FieldCtx(self.kind, self.poly, precision)

    def to_json(self) -> dict:
        return {"kind": self.kind, "poly": list(self.poly), "precision": self.precision}

    # construction ---------------------------------------------------------
    def digit_exponents(self, n: int) -> tuple[int, ...]:
        """Powers of 2 to which each basis coefficient is reduced mod p^n."""
        if self.kind == "eisenstein":
            return tuple(max(0, _ceil_div(n - i, self.e)) for i in range(self.degree))
        return (max(0, n),) * self.degree

    def __call__(self, value) -> "RingElem":
        if isinstance(value, RingElem):
            return self.coerce(value)
        if isinstance(value, int):
            coeffs = (value,) + (0,) * (self.degree - 1)
        else:
            coeffs = tuple(value)
            coeffs = coeffs + (0,) * (self.degree - len(coeffs))
        return RingElem(self, tuple(c % m for c, m in zip(coeffs, self._mods)))

    def coerce(self, a: "RingElem") -> "RingElem":
        """Move an element of the same field (any precision) into this context."""
        if a.ctx is self:
            return a
        if not self.same_field(a.ctx):
            raise CtxMismatch(f"{a.ctx!r} is not a precision variant of {self!r}")
        return self(a.coeffs)

    @property
    def uniformizer(self) -> "RingElem":
        if self.kind == "eisenstein":
            return self((0, 1))
        return self(2)

    def power_of_uniformizer(self, k: int) -> "RingElem":
        if self.kind != "eisenstein":
            return self(1 << k)
        return self.uniformizer ** k

    # enumeration ----------------------------------------------------------
    def residues(self, n: int):
        """Canonical representatives of O_F / p_F^n, lexicographic order."""
        exps = self.digit_exponents(n)
        for coeffs in itertools.product(*(range(1 << k) for k in exps)):
            yield RingElem(self, tuple(c % m for c, m in zip(coeffs, self._mods)))

    def residue_count(self, n: int) -> int:
        return 1 << sum(self.digit_exponents(n))


class RingElem:
    """Element of O_F / p_F^N in canonical form."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FieldCtx, coeffs: tuple[int, ...]):
        self.ctx = ctx
        self.coeffs = coeffs

    # plumbing -------------------------------------------------------------
    def _other(self, b):
        if isinstance(b, int):
            return self.ctx(b)
        if b.ctx is not self.ctx and b.ctx != self.ctx:
            raise CtxMismatch(f"{self.ctx!r} vs {b.ctx!r}")
        return b

    def __repr__(self):
        return f"RingElem({format_element(self)})"

    def __eq__(self, b):
        if isinstance(b, int):
            b = self.ctx(b)
        if not isinstance(b, RingElem):
            return NotImplemented
        return self.coeffs == b.coeffs and (b.ctx is self.ctx or b.ctx == self.ctx)

    def __hash__(self):
        return hash(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    # arithmetic -----------------------------------------------------------
    def __add__(self, b):
        b = self._other(b)
        mods = self.ctx._mods
        return RingElem(self.ctx, tuple((x + y) % m for x, y, m in zip(self.coeffs, b.coeffs, mods)))

    __radd__ = __add__

    def __sub__(self, b):
        b = self._other(b)
        mods = self.ctx._mods
        return RingElem(self.ctx, tuple((x - y) % m for x, y, m in zip(self.coeffs, b.coeffs, mods)))

    def __rsub__(self, b):
        return self._other(b) - self

    def __neg__(self):
        return RingElem(self.ctx, tuple(-x % m for x, m in zip(self.coeffs, self.ctx._mods)))

    def __mul__(self, b):
        if isinstance(b, int):
            return RingElem(self.ctx, tuple(x * b % m for x, m in zip(self.coeffs, self.ctx._mods)))
        b = self._other(b)
        ctx = self.ctx
        d = ctx.degree
        if d == 1:
            return RingElem(ctx, ((self.coeffs[0] * b.coeffs[0]) % ctx._mods[0],))
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    prod[i + j] += x * y
        poly = ctx.poly
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if c:
                for i in range(d):
                    prod[k - d + i] -= c * poly[i]
        return RingElem(ctx, tuple(prod[i] % ctx._mods[i] for i in range(d)))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self.ctx.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def valuation(self):
        """val_F, or ABOVE_PRECISION when the element is 0 mod p_F^N."""
        ctx = self.ctx
        best = None
        for i, c in enumerate(self.coeffs):
            if c:
                v = ctx.e * v2(c) + i if ctx.kind == "eisenstein" else v2(c)
                if best is None or v < best:
                    best = v
        return ABOVE_PRECISION if best is None else best

    def is_unit(self) -> bool:
        return self.valuation() == 0

    def inverse(self) -> "RingElem":
        ctx = self.ctx
        if not self.is_unit():
            raise NotAUnit(f"{format_element(self)} has positive valuation")
        if ctx.degree == 1:
            m = ctx._mods[0]
            return RingElem(ctx, (pow(self.coeffs[0], -1, m) if m > 1 else 0,))
        x = _residue_inverse(self)
        # Newton: x <- x (2 - a x) doubles the number of correct digits
        for _ in range(ctx.precision.bit_length() + 2):
            err = self * x
            if err == ctx.one:
                break
            x = x * (2 - err)
        return x

    def reduce(self, n: int) -> "RingElem":
        """Canonical representative of the class mod p_F^n (n <= N)."""
        if n >= self.ctx.precision:
            return self
        exps = self.ctx.digit_exponents(n)
        return RingElem(self.ctx, tuple(c & ((1 << k) - 1) for c, k in zip(self.coeffs, exps)))

    def key(self, n: int | None = None) -> tuple[int, ...]:
        return self.coeffs if n is None else self.reduce(n).coeffs

    def divide_by_uniformizer(self) -> "RingElem":
        """Exact a / w for val(a) >= 1; the top digit of the result is unknown (set to 0)."""
        ctx = self.ctx
        v = self.valuation()
        if v is not ABOVE_PRECISION and v < 1:
            raise NotAUnit("element is a unit; not divisible by the uniformizer")
        if ctx.kind != "eisenstein":
            return ctx(tuple(c >> 1 for c in self.coeffs)).reduce(ctx.precision - 1)
        d = ctx.degree
        poly = ctx.poly
        u = poly[0] // 2
        uinv = pow(u, -1, 1 << (ctx.precision + 4))
        # w * (w^(d-1) + a_(d-1) w^(d-2) + ... + a_1) = -a_0 = -2u
        q = ctx(poly[1:d + 1])
        two_over_w = -(q * uinv)
        shifted = ctx(self.coeffs[1:] + (0,))
        result = shifted + two_over_w * (self.coeffs[0] >> 1)
        return result.reduce(ctx.precision - 1)


def _residue_inverse(a: RingElem) -> RingElem:
    ctx = a.ctx
    if ctx._residue_inverses is None:
        table = {}
        for r in ctx.residues(1):
            if r.is_zero():
                continue
            for s in ctx.residues(1):
                if (r * s - 1).valuation() != 0:
                    table[r.key(1)] = s
                    break
        ctx._residue_inverses = table
    return ctx._residue_inverses[a.key(1)]


# ---------------------------------------------------------------------------
# spec-level operations


def _is_irreducible_mod2(coeffs: list[int]) -> bool:
    """Irreducibility over F_2 by trial division with every monic polynomial of degree <= deg/2."""
    f = [c & 1 for c in coeffs]
    while f and f[-1] == 0:
        f.pop()
    deg = len(f) - 1
    if deg < 1:
        return False
    fbits = sum(c << i for i, c in enumerate(f))
    for dd in range(1, deg // 2 + 1):
        for low in range(1 << dd):
            g = low | (1 << dd)
            r = fbits
            while r and r.bit_length() - 1 >= dd:
                r ^= g << (r.bit_length() - 1 - dd)
            if r == 0:
                return False
    return True


def make_base_field(kind: str, poly_coeffs=None, precision_N: int = 8) -> FieldCtx:
    """Build O_F / p_F^N.

    ``poly_coeffs`` lists the monic defining polynomial low to high; a
    trailing leading coefficient 1 may be omitted.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
    if precision_N < 1:
        raise PrecisionTooSmall(f"precision_N must be >= 1, got {precision_N}")
    if kind == "trivial":
        return FieldCtx("trivial", (0, 1), precision_N)
    coeffs = [int(c) for c in poly_coeffs or ()]
    if not coeffs:
        raise ValueError("a defining polynomial is required")
    if coeffs[-1] != 1 or len(coeffs) < 3:
        coeffs.append(1)
    if len(coeffs) < 3:
        raise ValueError("defining polynomial must have degree >= 2")
    if kind == "eisenstein":
        if coeffs[0] == 0 or v2(coeffs[0]) != 1:
            raise NotEisenstein("constant term must have 2-adic valuation exactly 1")
        if any(c % 2 for c in coeffs[1:-1]):
            raise NotEisenstein("non-leading coefficients must be even")
    else:
        if not _is_irreducible_mod2(coeffs):
            raise ResidueReducible("residue polynomial is reducible over F_2")
    return FieldCtx(kind, tuple(coeffs), precision_N)


def arith(op: str, a: RingElem, b: RingElem | None = None) -> RingElem:
    if op in ("add", "mul") and b is None:
        raise TypeError(f"{op} needs two operands")
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    raise ValueError(f"unknown op {op!r}")


def valuation(a: RingElem):
    return a.valuation()


def unit_level(a: RingElem):
    """Largest n < N with a in U^n; NOT_A_UNIT for non-units."""
    if not a.is_unit():
        return NOT_A_UNIT
    v = (a - 1).valuation()
    top = a.ctx.precision - 1
    return top if v is ABOVE_PRECISION else min(v, top)


def enumerate_residues(ctx: FieldCtx, n: int) -> list[RingElem]:
    if not 1 <= n <= ctx.precision:
        raise LevelOutOfRange(f"level {n} outside [1, {ctx.precision}]")
    return list(ctx.residues(n))


# ---------------------------------------------------------------------------
# literals

_TERM = re.compile(r"([+-]?)\s*(\d*)\s*(\*?\s*w(?:\^(\d+))?)?")


def parse_element(ctx: FieldCtx, text: str) -> RingElem:
    """Parse ``c0``, ``c0+c1*w`` or more generally a sum of ``c*w^i`` terms."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty element literal")
    coeffs = [0] * max(ctx.degree, 1)
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad element literal {text!r}")
        sign, digits, wpart, power = m.groups()
        if not digits and not wpart:
            raise ValueError(f"bad element literal {text!r}")
        c = int(digits) if digits else 1
        if sign == "-":
            c = -c
        i = 0 if not wpart else (int(power) if power else 1)
        if i >= ctx.degree:
            if ctx.kind == "trivial":
                raise ValueError("w is not defined over Q_2")
            raise ValueError(f"power w^{i} exceeds the field degree")
        coeffs[i] += c
        pos = m.end()
    return ctx(tuple(coeffs))


def format_element(a: RingElem) -> str:
    parts = []
    for i, c in enumerate(a.coeffs):
        if i == 0:
            parts.append(str(c))
        elif c:
            parts.append(f"{c}*w" if i == 1 else f"{c}*w^{i}")
    return "+".join(parts)


NAMED_BASES = {
    "q2": ("trivial", None),
    "q2sqrt2": ("eisenstein", (-2, 0, 1)),
    "q2sqrt-2": ("eisenstein", (2, 0, 1)),
    "q2unr": ("unramified", (1, 1, 1)),
}


def parse_base(spec: str, precision: int) -> FieldCtx:
    """``q2`` | ``q2sqrt2`` | ``eisenstein:c0,c1,...`` | ``unramified:c0,c1,...``."""
    spec = spec.strip().lower()
    if spec in NAMED_BASES:
        kind, poly = NAMED_BASES[spec]
        return make_base_field(kind, poly, precision)
    kind, _, rest = spec.partition(":")
    if kind not in ("eisenstein", "unramified") or not rest:
        raise ValueError(f"bad base field spec {spec!r}")
    return make_base_field(kind, [int(c) for c in rest.split(",")], precision)
