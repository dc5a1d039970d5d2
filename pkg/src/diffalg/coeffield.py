"""Finitely presented differential coefficient fields.

A field is presented by named generators over QQ together with a table
giving the action of every declared derivation on every generator.  Field
elements are canonical fractions of sparse polynomials in the generators
with arbitrary-precision rational coefficients; there is no floating point
anywhere.

The derivations are partitioned into two classes, ``dd`` (the relative
directions, usually written D_1, ..., D_r) and ``delta`` (the base
directions).  Commutativity of the table is verified eagerly when the
field is declared, because everything downstream assumes commuting
derivations.
"""

from __future__ import annotations

import re
from fractions import Fraction

from . import _polyops
from .errors import (
    DivisionByZero,
    NonCommutingTable,
    UndefinedSymbol,
)

DD = "dd"
DELTA = "delta"

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class DerivationName:
    """A named derivation with its class (``dd`` or ``delta``)."""

    __slots__ = ("name", "kind")

    def __init__(self, name, kind):
        if kind not in (DD, DELTA):
            raise ValueError(f"derivation class must be {DD!r} or {DELTA!r}, got {kind!r}")
        if not _IDENT.match(name):
            raise ValueError(f"bad derivation name {name!r}")
        self.name = name
        self.kind = kind

    def __repr__(self):
        return f"DerivationName({self.name!r}, {self.kind!r})"

    def __eq__(self, other):
        return (
            isinstance(other, DerivationName)
            and self.name == other.name
            and self.kind == other.kind
        )

    def __hash__(self):
        return hash((self.name, self.kind))


def _grlex_key(exps):
    return (sum(exps), exps)


class Poly:
    """Sparse polynomial over QQ in the field generators.

    ``terms`` maps exponent tuples (one slot per generator, declaration
    order) to nonzero Fractions.  The canonical monomial order is graded
    lexicographic by declaration order.
    """

    __slots__ = ("field", "terms")

    def __init__(self, field, terms):
        self.field = field
        self.terms = terms

    # -- constructors ---------------------------------------------------

    @staticmethod
    def const(field, value):
        value = Fraction(value)
        if value == 0:
            return Poly(field, {})
        return Poly(field, {(0,) * len(field.generators): value})

    @staticmethod
    def gen(field, index):
        exps = [0] * len(field.generators)
        exps[index] = 1
        return Poly(field, {tuple(exps): Fraction(1)})

    # -- queries ---------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_const(self):
        return _polyops.is_constant_terms(self.terms)

    def const_value(self):
        if not self.terms:
            return Fraction(0)
        return next(iter(self.terms.values()))

    def is_one(self):
        return self.is_const() and self.const_value() == 1

    def leading_key(self):
        return max(self.terms, key=_grlex_key)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            elif e in out:
                del out[e]
        return Poly(self.field, out)

    def __neg__(self):
        return Poly(self.field, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return Poly(self.field, _polyops.mul_terms(self.terms, other.terms))

    def scale(self, value):
        value = Fraction(value)
        if value == 0:
            return Poly(self.field, {})
        return Poly(self.field, {e: c * value for e, c in self.terms.items()})

    def __pow__(self, k):
        out = Poly.const(self.field, 1)
        base = self
        k = int(k)
        if k < 0:
            raise ValueError("negative power of a polynomial")
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and self.field is other.field
            and self.terms == other.terms
        )

    __hash__ = None

    # -- printing ----------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms, key=_grlex_key, reverse=True):
            c = self.terms[exps]
            mono = "*".join(
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(self.field.generators, exps)
                if e
            )
            parts.append((c < 0, _term_str(abs(c), mono)))
        return _join_signed(parts)

    def __repr__(self):
        return f"Poly({self})"


def _term_str(coeff, mono):
    if not mono:
        return str(coeff)
    if coeff == 1:
        return mono
    return f"{coeff}*{mono}"


def _join_signed(parts):
    out = []
    for i, (neg, body) in enumerate(parts):
        if i == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


class FieldElement:
    """Canonical fraction of generator polynomials.

    Invariants: gcd(num, den) = 1; the denominator has integer coprime
    coefficients with a positive leading coefficient (graded-lex order);
    zero is represented as 0/1.  Equality of elements is equality of the
    canonical forms.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        # Trusted constructor; use FieldElement.make for normalization.
        self.num = num
        self.den = den

    @staticmethod
    def make(num, den):
        field = num.field
        if den.is_zero():
            raise DivisionByZero("zero denominator in field element")
        if num.is_zero():
            return field.zero
        if den.is_const():
            return FieldElement(num.scale(1 / den.const_value()), field.poly_one)
        n = len(field.generators)
        g = _polyops.gcd_terms(num.terms, den.terms, n)
        if not _polyops.is_constant_terms(g):
            num = Poly(field, _polyops.div_exact(num.terms, g, n))
            den = Poly(field, _polyops.div_exact(den.terms, g, n))
        if den.is_const():
            return FieldElement(num.scale(1 / den.const_value()), field.poly_one)
        content, sign = _polyops.content_and_sign(den.terms, _grlex_key)
        factor = 1 / (content * sign)
        return FieldElement(num.scale(factor), den.scale(factor))

    # -- queries ---------------------------------------------------------

    @property
    def field(self):
        return self.num.field

    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.den.is_one() and self.num.is_one()

    def is_const(self):
        return self.num.is_const() and self.den.is_one()

    def const_value(self):
        if not self.is_const():
            raise ValueError(f"{self} is not a rational constant")
        return self.num.const_value()

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.element(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den.is_one() and other.den.is_one():
            return FieldElement.make(self.num + other.num, self.field.poly_one)
        return FieldElement.make(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den.is_one() and other.den.is_one():
            return FieldElement.make(self.num * other.num, self.field.poly_one)
        return FieldElement.make(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise DivisionByZero("division by zero field element")
        return FieldElement.make(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self.field.element(other) / self

    def inverse(self):
        return self.field.one / self

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.element(other)
        return (
            isinstance(other, FieldElement)
            and self.num == other.num
            and self.den == other.den
        )

    __hash__ = None

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"FieldElement({self})"


class FieldDescriptor:
    """A differential coefficient field: generators plus a derivation table.

    Instances are created through :func:`declare_field` and are immutable
    afterwards; elements hold a reference to their descriptor.
    """

    __slots__ = (
        "generators",
        "derivations",
        "table",
        "_gen_index",
        "_deriv_index",
        "poly_one",
        "zero",
        "one",
    )

    def __init__(self, generators, derivations):
        generators = tuple(generators)
        derivations = tuple(derivations)
        seen = set()
        for g in generators:
            if not _IDENT.match(g):
                raise ValueError(f"bad generator name {g!r}")
            if g in seen:
                raise ValueError(f"duplicate generator {g!r}")
            seen.add(g)
        for d in derivations:
            if d.name in seen:
                raise ValueError(f"name {d.name!r} used for both generator and derivation")
            seen.add(d.name)
        self.generators = generators
        self.derivations = derivations
        self._gen_index = {g: i for i, g in enumerate(generators)}
        self._deriv_index = {d.name: i for i, d in enumerate(derivations)}
        self.table = {}
        self.poly_one = Poly.const(self, 1)
        self.zero = FieldElement(Poly.const(self, 0), self.poly_one)
        self.one = FieldElement(self.poly_one, self.poly_one)

    # -- lookups -----------------------------------------------------------

    def gen_index(self, name):
        try:
            return self._gen_index[name]
        except KeyError:
            raise UndefinedSymbol(f"unknown generator {name!r}") from None

    def derivation(self, d):
        if isinstance(d, DerivationName):
            if d.name not in self._deriv_index:
                raise UndefinedSymbol(f"unknown derivation {d.name!r}")
            return d
        try:
            return self.derivations[self._deriv_index[d]]
        except KeyError:
            raise UndefinedSymbol(f"unknown derivation {d!r}") from None

    def derivation_index(self, d):
        name = d.name if isinstance(d, DerivationName) else d
        try:
            return self._deriv_index[name]
        except KeyError:
            raise UndefinedSymbol(f"unknown derivation {name!r}") from None

    def dd(self):
        return tuple(d for d in self.derivations if d.kind == DD)

    def delta(self):
        return tuple(d for d in self.derivations if d.kind == DELTA)

    # -- element construction ------------------------------------------------

    def element(self, value):
        if isinstance(value, FieldElement):
            return value
        return FieldElement(Poly.const(self, Fraction(value)), self.poly_one)

    def gen_element(self, name):
        return FieldElement(Poly.gen(self, self.gen_index(name)), self.poly_one)

    def parse(self, text):
        from .parsing import parse_expression

        return parse_expression(text).evaluate(_FieldScope(self))

    def __repr__(self):
        gens = ", ".join(self.generators) or "-"
        ders = ", ".join(f"{d.name}:{d.kind}" for d in self.derivations)
        return f"FieldDescriptor(generators=[{gens}], derivations=[{ders}])"


class _FieldScope:
    """Parser scope resolving names to field elements."""

    def __init__(self, field):
        self.field = field

    def resolve(self, name):
        return self.field.gen_element(name)

    def derive(self, dname, value):
        return coeff_derive(self.field.derivation(dname), value)

    def const(self, value):
        return self.field.element(value)


def _poly_derive(d, poly):
    """Derivative of a generator polynomial via the table; the result is a
    field element because table entries may be fractions."""
    field = poly.field
    out = field.zero
    didx = field.derivation_index(d)
    for exps, c in poly.terms.items():
        for k, e in enumerate(exps):
            if not e:
                continue
            entry = field.table[(field.derivations[didx].name, field.generators[k])]
            if entry.is_zero():
                continue
            lowered = list(exps)
            lowered[k] -= 1
            base = Poly(field, {tuple(lowered): c * e})
            out = out + FieldElement(base, field.poly_one) * entry
    return out


def coeff_derive(d, a):
    """Apply a declared derivation to a field element (quotient rule)."""
    field = a.field
    d = field.derivation(d)
    dn = _poly_derive(d, a.num)
    if a.den.is_one():
        return dn
    dd_ = _poly_derive(d, a.den)
    den_el = FieldElement(a.den, field.poly_one)
    num_el = FieldElement(a.num, field.poly_one)
    return (dn * den_el - num_el * dd_) / (den_el * den_el)


def normalize(a):
    """Recompute the canonical form of a field element (idempotent)."""
    return FieldElement.make(a.num, a.den)


def declare_field(generators, derivations, table):
    """Declare and validate a differential coefficient field.

    ``table`` maps ``(derivation name, generator name)`` to an expression
    string (or field element, int, Fraction) and must be total.  Raises
    :class:`NonCommutingTable` when some bracket does not vanish and
    :class:`UndefinedSymbol` for unparseable references.
    """
    ders = []
    for d in derivations:
        if isinstance(d, DerivationName):
            ders.append(d)
        else:
            name, kind = d
            ders.append(DerivationName(name, kind))
    field = FieldDescriptor(generators, ders)

    for d in field.derivations:
        for g in field.generators:
            key = (d.name, g)
            if key not in table:
                raise UndefinedSymbol(f"table entry missing for ({d.name}, {g})")
            entry = table[key]
            if isinstance(entry, str):
                entry = field.parse(entry)
            else:
                entry = field.element(entry)
            field.table[key] = entry

    for g in field.generators:
        gel = field.gen_element(g)
        for i, d1 in enumerate(field.derivations):
            for d2 in field.derivations[i + 1 :]:
                residual = coeff_derive(d1, coeff_derive(d2, gel)) - coeff_derive(
                    d2, coeff_derive(d1, gel)
                )
                if not residual.is_zero():
                    raise NonCommutingTable(g, d1.name, d2.name, residual)
    return field
