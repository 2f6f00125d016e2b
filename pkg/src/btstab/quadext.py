"""Quadratic extensions E/F: arithmetic, Galois data, classification, norm lemmas.

E is presented over F as O_F[x] with

* ramified:   x^2 + a x + b w_F   (Eisenstein, b a unit, a = 0 or 1 <= val_F(a) <= e_F)
* unramified: x^2 + a x + b       (residue polynomial irreducible; we use a = 1)

so an element is a pair (c0, c1) meaning c0 + c1 x.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import InvalidDescriptor, NotRamified, PrecisionTooSmall
from .ring import ABOVE_PRECISION, FieldCtx, RingElem, format_element, parse_element

TRACE_ZERO = "TRACE_ZERO"


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


@dataclass(frozen=True)
class ExtDescriptor:
    kind: str  # "unramified" | "ramified"
    a: RingElem
    b: RingElem
    d: object = None  # val_F(a), TRACE_ZERO when a = 0, None when unramified
    diff_val: int = 0

    def spec(self) -> str:
        if self.kind == "unramified":
            return "unram"
        return f"eis:{format_element(self.a)},{format_element(self.b)}"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "spec": self.spec(),
            "a": format_element(self.a),
            "b": format_element(self.b),
            "d": self.d if self.d is None or isinstance(self.d, int) else str(self.d),
            "diff_val": self.diff_val,
        }


def ramified_descriptor(base: FieldCtx, a, b) -> ExtDescriptor:
    """Descriptor for x^2 + a x + b w_F, validating the Eisenstein shape."""
    a, b = base(a), base(b)
    if not b.is_unit():
        raise InvalidDescriptor("b must be a unit")
    va = a.valuation()
    if va is ABOVE_PRECISION:
        return ExtDescriptor("ramified", a, b, TRACE_ZERO, 2 * base.e + 1)
    if not 1 <= va <= base.e:
        raise InvalidDescriptor(f"val_F(a) = {va} outside [1, e_F = {base.e}]")
    return ExtDescriptor("ramified", a, b, va, 2 * va)


def unramified_descriptor(base: FieldCtx) -> ExtDescriptor:
    """x^2 + x + c with c of residue trace 1 (Artin-Schreier shape, irreducible mod p)."""
    for c in base.residues(1):
        # x^2 + x + c has a root in the residue field iff some r satisfies it
        if all((r * r + r + c).valuation() == 0 for r in base.residues(1)):
            return ExtDescriptor("unramified", base.one, c, None, 0)
    raise InvalidDescriptor("no irreducible Artin-Schreier polynomial found")  # pragma: no cover


class ExtCtx:
    """Arithmetic context for O_E / p_E^M."""

    def __init__(self, base: FieldCtx, desc: ExtDescriptor, precision: int | None = None):
        self.desc = desc
        self.e_EF = 2 if desc.kind == "ramified" else 1
        if precision is None:
            precision = self.e_EF * base.precision
        self.precision = precision
        self.base = base.with_precision(max(1, _ceil_div(precision, self.e_EF)))
        self.e_F = base.e
        self.e = self.e_E = base.e * self.e_EF
        self.f = base.f * (2 // self.e_EF)
        self.ramified = desc.kind == "ramified"
        F = self.base
        self._A = F(desc.a)
        self._B = F(desc.b) * F.uniformizer if self.ramified else F(desc.b)
        self.zero = ExtElem(self, F.zero, F.zero)
        self.one = ExtElem(self, F.one, F.zero)
        self.gen = ExtElem(self, F.zero, F.one)

    def __repr__(self):
        return f"ExtCtx({self.desc.spec()}, M={self.precision})"

    def __eq__(self, other):
        return isinstance(other, ExtCtx) and (self.base, self.desc.spec(), self.precision) == (
            other.base, other.desc.spec(), other.precision)

    def __hash__(self):
        return hash((self.base, self.desc.spec(), self.precision))

    def with_precision(self, precision: int) -> "ExtCtx":
        if precision == self.precision:
            return self
        return ExtCtx(self.base, self.desc, precision)

    @property
    def uniformizer(self) -> "ExtElem":
        return self.gen if self.ramified else self.embed(self.base.uniformizer)

    def power_of_uniformizer(self, k: int) -> "ExtElem":
        out = self.one
        for _ in range(k):
            out = out * self.uniformizer
        return out

    def embed(self, c) -> "ExtElem":
        return ExtElem(self, self.base(c), self.base.zero)

    def __call__(self, c0, c1=0) -> "ExtElem":
        return ExtElem(self, self.base(c0), self.base(c1))

    def coerce(self, z) -> "ExtElem":
        if isinstance(z, ExtElem):
            return z if z.ctx is self else ExtElem(self, self.base(z.c0), self.base(z.c1))
        return self.embed(z)

    def coefficient_levels(self, n: int) -> tuple[int, int]:
        """F-precisions of (c0, c1) that realize truncation mod p_E^n."""
        if self.ramified:
            return _ceil_div(n, 2), n // 2
        return n, n

    def residues(self, n: int):
        k0, k1 = self.coefficient_levels(n)
        F = self.base
        r0 = list(F.residues(k0)) if k0 else [F.zero]
        r1 = list(F.residues(k1)) if k1 else [F.zero]
        for c0, c1 in itertools.product(r0, r1):
            yield ExtElem(self, c0, c1)

    def residue_count(self, n: int) -> int:
        k0, k1 = self.coefficient_levels(n)
        return self.base.residue_count(k0) * self.base.residue_count(k1)

    def units(self, n: int):
        for z in self.residues(n):
            if z.is_unit():
                yield z

    def to_json(self) -> dict:
        return {"base": self.base.to_json(), **self.desc.to_json(), "precision": self.precision}


class ExtElem:
    __slots__ = ("ctx", "c0", "c1")

    def __init__(self, ctx: ExtCtx, c0: RingElem, c1: RingElem):
        self.ctx = ctx
        self.c0 = c0
        self.c1 = c1

    def __repr__(self):
        return f"ExtElem({format_element(self.c0)}, {format_element(self.c1)})"

    def _other(self, w):
        if isinstance(w, ExtElem):
            return w
        return self.ctx.embed(w)

    def __eq__(self, w):
        if isinstance(w, (int, RingElem)):
            w = self.ctx.embed(w)
        if not isinstance(w, ExtElem):
            return NotImplemented
        return self.c0 == w.c0 and self.c1 == w.c1

    def __hash__(self):
        return hash((self.c0.coeffs, self.c1.coeffs))

    def __add__(self, w):
        w = self._other(w)
        return ExtElem(self.ctx, self.c0 + w.c0, self.c1 + w.c1)

    __radd__ = __add__

    def __sub__(self, w):
        w = self._other(w)
        return ExtElem(self.ctx, self.c0 - w.c0, self.c1 - w.c1)

    def __rsub__(self, w):
        return self._other(w) - self

    def __neg__(self):
        return ExtElem(self.ctx, -self.c0, -self.c1)

    def __mul__(self, w):
        if isinstance(w, (int, RingElem)):
            return ExtElem(self.ctx, self.c0 * w, self.c1 * w)
        ctx = self.ctx
        hh = self.c1 * w.c1
        return ExtElem(ctx, self.c0 * w.c0 - hh * ctx._B, self.c0 * w.c1 + self.c1 * w.c0 - hh * ctx._A)

    __rmul__ = __mul__

    def conj(self) -> "ExtElem":
        # x + conj(x) = -a
        return ExtElem(self.ctx, self.c0 - self.ctx._A * self.c1, -self.c1)

    def trace(self) -> RingElem:
        return self.c0 * 2 - self.ctx._A * self.c1

    def norm(self) -> RingElem:
        ctx = self.ctx
        return self.c0 * self.c0 - ctx._A * self.c0 * self.c1 + ctx._B * self.c1 * self.c1

    def valuation(self):
        v0, v1 = self.c0.valuation(), self.c1.valuation()
        ctx = self.ctx
        if ctx.ramified:
            cands = [2 * v0] if v0 is not ABOVE_PRECISION else []
            if v1 is not ABOVE_PRECISION:
                cands.append(2 * v1 + 1)
        else:
            cands = [v for v in (v0, v1) if v is not ABOVE_PRECISION]
        if not cands or min(cands) >= ctx.precision:
            return ABOVE_PRECISION
        return min(cands)

    def is_unit(self) -> bool:
        return self.valuation() == 0

    def is_zero(self) -> bool:
        return self.valuation() is ABOVE_PRECISION

    def inverse(self) -> "ExtElem":
        return self.conj() * self.norm().inverse()

    def reduce(self, n: int) -> "ExtElem":
        k0, k1 = self.ctx.coefficient_levels(n)
        return ExtElem(self.ctx, self.c0.reduce(k0), self.c1.reduce(k1))

    def key(self, n: int | None = None) -> tuple:
        z = self.reduce(self.ctx.precision if n is None else n)
        return (z.c0.coeffs, z.c1.coeffs)

    def in_base(self) -> RingElem:
        """The F-coordinate of an element whose x-coordinate vanishes."""
        return self.c0


def format_ext_element(z: ExtElem) -> str:
    return f"{format_element(z.c0)},{format_element(z.c1)}"


def parse_ext_element(ext: ExtCtx, text: str) -> ExtElem:
    """``c0,c1`` meaning c0 + c1 x, each an F element literal."""
    c0, _, c1 = text.partition(",")
    return ExtElem(ext, parse_element(ext.base, c0), parse_element(ext.base, c1 or "0"))


# ---------------------------------------------------------------------------
# public operations


def make_extension(base: FieldCtx, desc: ExtDescriptor, precision: int | None = None) -> ExtCtx:
    if desc.kind == "ramified":
        checked = ramified_descriptor(base, desc.a, desc.b)
        if checked.diff_val != desc.diff_val:
            raise InvalidDescriptor("diff_val inconsistent with a")
    elif desc.kind == "unramified":
        for r in base.residues(1):
            if (r * r + base(desc.a) * r + base(desc.b)).valuation() != 0:
                raise InvalidDescriptor("unramified polynomial has a residue root")
    else:
        raise InvalidDescriptor(f"unknown kind {desc.kind!r}")
    return ExtCtx(base, desc, precision)


def parse_extension(base: FieldCtx, spec: str) -> ExtDescriptor:
    """``unram`` | ``eis:<a>,<b>`` for x^2 + a x + b w_F."""
    spec = spec.strip()
    if spec == "unram":
        return unramified_descriptor(base)
    if not spec.startswith("eis:"):
        raise ValueError(f"bad extension spec {spec!r}")
    a, _, b = spec[4:].partition(",")
    if not b:
        raise ValueError(f"bad extension spec {spec!r}")
    return ramified_descriptor(base, parse_element(base, a), parse_element(base, b))


def galois_data(z: ExtElem) -> tuple[ExtElem, RingElem, RingElem]:
    return z.conj(), z.trace(), z.norm()


def different_valuation(ext: ExtCtx) -> int:
    """val_E(w_E - conj(w_E)) computed in E arithmetic; 0 when unramified."""
    if not ext.ramified:
        return 0
    pi = ext.uniformizer
    v = (pi - pi.conj()).valuation()
    if v is ABOVE_PRECISION:
        raise PrecisionTooSmall("precision too small to see the different")
    return v


# -- square classes and classification --------------------------------------


def _divide_by_uniformizer_power(a: RingElem, k: int) -> RingElem:
    for _ in range(k):
        a = a.divide_by_uniformizer()
    return a


def unit_square_classes(base: FieldCtx) -> list[RingElem]:
    """Representatives of U_F / U_F^2, found by exhaustive squaring mod p^(2e+1)."""
    level = 2 * base.e + 1
    F = base.with_precision(level)
    units = [u for u in F.residues(level) if u.is_unit()]
    squares = {(u * u).key() for u in units}
    seen, reps = set(), []
    for u in units:
        if u.key() in seen:
            continue
        reps.append(u)
        for s in squares:
            seen.add((u * F(s)).key())
    return reps


def square_class(c: RingElem) -> tuple:
    """Invariant of c F^x^2: (val mod 2, canonical unit-class key)."""
    F = c.ctx
    v = c.valuation()
    if v is ABOVE_PRECISION:
        raise PrecisionTooSmall("cannot classify zero")
    level = 2 * F.e + 1
    if F.precision < v + level:
        raise PrecisionTooSmall("not enough digits to read the unit part")
    u = _divide_by_uniformizer_power(c, v)
    Fl = F.with_precision(level)
    u = Fl(u)
    units = [r for r in Fl.residues(level) if r.is_unit()]
    cls = min((u * r * r).key() for r in units)
    return (v % 2, cls)


def classify_extensions(base: FieldCtx) -> list[ExtDescriptor]:
    """One descriptor per quadratic extension of F, unramified first.

    Every Eisenstein polynomial x^2 + a x + b w_F (a, b taken modulo enough
    digits) is sorted by the square class of its discriminant; the class of
    1 - 4c for the unramified polynomial is excluded, and the lexicographically
    least (a, b) represents each ramified class.
    """
    e = base.e
    if base.precision < 2 * e + 2:
        raise PrecisionTooSmall(f"base precision must be >= {2 * e + 2}")
    work = base.with_precision(4 * e + 4)
    unram = unramified_descriptor(work)
    unram_class = square_class(1 - work(unram.b) * 4)
    trivial_class = square_class(work.one)
    by_class = {}
    a_range = [a for a in work.residues(e + 2)
               if a.is_zero() or 1 <= a.valuation() <= e]
    b_range = [b for b in work.residues(2 * e + 2) if b.is_unit()]
    for a in a_range:
        for b in b_range:
            disc = a * a - b * work.uniformizer * 4
            cls = square_class(disc)
            if cls in (unram_class, trivial_class):
                raise AssertionError("Eisenstein discriminant in an unramified class")  # pragma: no cover
            by_class.setdefault(cls, (a.coeffs, b.coeffs, a, b))
    out = [unramified_descriptor(base)]
    ram = [ramified_descriptor(base, base(a.coeffs), base(b.coeffs)) for _, _, a, b in by_class.values()]
    ram.sort(key=lambda d: (d.diff_val, d.a.coeffs, d.b.coeffs))
    expected = 2 * len(unit_square_classes(base)) - 2
    if len(ram) != expected:
        raise AssertionError(f"found {len(ram)} ramified classes, expected {expected}")  # pragma: no cover
    return out + ram


def square_class_representatives(base: FieldCtx) -> list[RingElem]:
    """All of F^x / F^x^2 as {u, w_F u} for u in U/U^2."""
    us = unit_square_classes(base)
    return us + [u * base.with_precision(u.ctx.precision).uniformizer for u in us]


# -- norm lemmas ----------------------------------------------------------


def default_working_level(ext: ExtCtx, max_n: int) -> int:
    if ext.ramified:
        return different_valuation(ext) + 2 * max_n + 2
    return max_n + 2


@dataclass
class NormCheck:
    name: str
    n: int
    holds: bool
    t: int | None = None
    exponent: int | None = None
    details: dict = field(default_factory=dict)
    witness: str | None = None

    def to_json(self) -> dict:
        return {"name": self.name, "n": self.n, "holds": self.holds, "t": self.t,
                "exponent": self.exponent, "details": self.details, "witness": self.witness}


def _approx_norm_one(ext: ExtCtx, level: int) -> list[ExtElem]:
    """Units mod p_E^level whose norm is 1 mod p_F^ceil(level / e_EF)."""
    k = _ceil_div(level, ext.e_EF)
    out = []
    for u in ext.units(level):
        if (u.norm() - 1).reduce(k).is_zero():
            out.append(u)
    return out


def norm_fiber_check(ext: ExtCtx, n: int, working_level: int | None = None) -> NormCheck:
    """Finite-level check of N^-1(U_F^n) = N^1 U_E^k, k = 2n - t (ramified) or n.

    Both sides are computed as subsets of U_E / U_E^L. The right side is a
    union of U_E^k cosets, so u lies in it iff u mod p_E^k is the reduction
    of a norm-one class.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    L = working_level or default_working_level(ext, n)
    if L > ext.precision:
        ext = ext.with_precision(L)
    if L < (2 * n + different_valuation(ext) - 1 if ext.ramified else n + 1):
        raise PrecisionTooSmall(f"working level {L} too small for n = {n}")
    if ext.ramified:
        t = min(n, different_valuation(ext) - 1)
        k = 2 * n - t
    else:
        t = None
        k = n
    norm_one = {u.key(k) for u in _approx_norm_one(ext, L)}
    witness = None
    lhs_count = 0
    for u in ext.units(L):
        left = (u.norm() - 1).reduce(n).is_zero()
        right = u.key(k) in norm_one
        lhs_count += left
        if left != right and witness is None:
            witness = format_ext_element(u)
    name = "LF(a)" if ext.ramified else "LF(b)"
    return NormCheck(name, n, witness is None, t=t, exponent=k,
                     details={"working_level": L, "lhs_size": lhs_count}, witness=witness)


def norm_kernel_check(ext: ExtCtx, max_n: int, working_level: int | None = None) -> list[NormCheck]:
    """Casselman's lemma parts (a) and (b) at finite level."""
    if not ext.ramified:
        raise NotRamified("norm kernel structure is only checked for ramified E/F")
    dv = different_valuation(ext)
    L = working_level or default_working_level(ext, max_n)
    if L <= dv + 2 * max_n:
        raise PrecisionTooSmall(f"working level must exceed {dv + 2 * max_n}")
    if L > ext.precision:
        ext = ext.with_precision(L)
    n1 = _approx_norm_one(ext, L)
    levels = [(u - 1).valuation() for u in n1]
    lv = [L if v is ABOVE_PRECISION else v for v in levels]
    low = [format_ext_element(u) for u, v in zip(n1, lv) if v < dv - 1]
    checks = [NormCheck("casselman(a):containment", 0, not low, details={"bound": dv - 1},
                        witness=low[0] if low else None)]
    quotient = sorted({u.key(dv) for u in n1})
    checks.append(NormCheck("casselman(a):order", 0, len(quotient) == 2,
                            details={"order": len(quotient)}))
    for n in range(1, max_n + 1):
        k = dv + 2 * n - 1
        bad = [format_ext_element(u) for u, v in zip(n1, lv) if v == k]
        checks.append(NormCheck("casselman(b)", n, not bad, details={"level": k},
                                witness=bad[0] if bad else None))
    return checks
