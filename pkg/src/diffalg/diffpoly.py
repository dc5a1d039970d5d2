"""Differential polynomials and rational functions in derivative variables.

A derivative variable pairs an indeterminate index with a multi-index over
the declared derivations (declaration order).  Polynomials are sparse maps
from monomials (sorted tuples of ``(variable, exponent)``) to coefficients
in the ambient field; rationals are canonical fractions of polynomials.

The only ranking in this version is the orderly one, with ties broken by
reversed-lex comparison of the multi-index and then by indeterminate
index.  In the two-derivation order-2 case this gives, for derivations
declared as (d1, d2):

    x < d1(x) < d2(x) < d1^2(x) < d1(d2(x)) < d2^2(x)

and indeterminates of equal derivative compare by declaration position.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from . import _polyops
from .coeffield import FieldElement, Poly
from .errors import (
    ConstantPolynomial,
    DivisionByZero,
    UndefinedSymbol,
)


class DerivativeVar(NamedTuple):
    ind: int
    orders: tuple

    def order(self):
        return sum(self.orders)


class Ranking:
    """Orderly ranking; custom rankings are not supported in this version."""

    kind = "orderly"
    tie_break = ("total order", "reversed-lex on the multi-index", "indeterminate index")

    def key(self, v):
        return (sum(v.orders), tuple(reversed(v.orders)), v.ind)


ORDERLY = Ranking()


def rank_key(v):
    return ORDERLY.key(v)


def rank_compare(u, v, ranking=ORDERLY):
    ku, kv = ranking.key(u), ranking.key(v)
    if ku < kv:
        return -1
    if ku > kv:
        return 1
    return 0


def _mono_key(mono):
    return tuple((rank_key(v), e) for v, e in reversed(mono))


def _mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        va, ea = a[i]
        vb, eb = b[j]
        ka, kb = rank_key(va), rank_key(vb)
        if ka < kb:
            out.append(a[i])
            i += 1
        elif kb < ka:
            out.append(b[j])
            j += 1
        else:
            out.append((va, ea + eb))
            i += 1
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def _mono_without(mono, v, drop=1):
    out = []
    for w, e in mono:
        if w == v:
            if e > drop:
                out.append((w, e - drop))
        else:
            out.append((w, e))
    return tuple(out)


class DiffRing:
    """Context for differential polynomials: a field plus named indeterminates."""

    __slots__ = ("field", "inds", "_ind_index")

    def __init__(self, field, inds):
        inds = tuple(inds)
        taken = set(field.generators) | {d.name for d in field.derivations}
        seen = set()
        for name in inds:
            if name in taken or name in seen:
                raise ValueError(f"indeterminate name {name!r} collides with another symbol")
            seen.add(name)
        self.field = field
        self.inds = inds
        self._ind_index = {name: i for i, name in enumerate(inds)}

    def __eq__(self, other):
        return (
            isinstance(other, DiffRing)
            and self.field is other.field
            and self.inds == other.inds
        )

    def __hash__(self):
        return hash((id(self.field), self.inds))

    def __repr__(self):
        return f"DiffRing({', '.join(self.inds)})"

    # -- lookups ----------------------------------------------------------

    @property
    def nderiv(self):
        return len(self.field.derivations)

    def ind_index(self, name):
        if isinstance(name, int):
            return name
        try:
            return self._ind_index[name]
        except KeyError:
            raise UndefinedSymbol(f"unknown indeterminate {name!r}") from None

    def dvar(self, ind, orders=None):
        idx = self.ind_index(ind)
        if orders is None:
            orders = (0,) * self.nderiv
        return DerivativeVar(idx, tuple(orders))

    # -- element construction ----------------------------------------------

    def zero_poly(self):
        return DiffPolynomial(self, {})

    def one_poly(self):
        return DiffPolynomial(self, {(): self.field.one})

    def const_poly(self, value):
        value = value if isinstance(value, FieldElement) else self.field.element(value)
        if value.is_zero():
            return self.zero_poly()
        return DiffPolynomial(self, {(): value})

    def poly_var(self, ind, orders=None):
        return DiffPolynomial(self, {((self.dvar(ind, orders), 1),): self.field.one})

    def var(self, ind, orders=None):
        return self.poly_var(ind, orders).as_rational()

    def vars(self):
        return tuple(self.var(i) for i in range(len(self.inds)))

    def zero(self):
        return DiffRational(self.zero_poly(), self.one_poly())

    def one(self):
        return DiffRational(self.one_poly(), self.one_poly())

    def const(self, value):
        return DiffRational(self.const_poly(value), self.one_poly())

    # -- ring maps ----------------------------------------------------------

    def extend(self, names):
        return DiffRing(self.field, self.inds + tuple(names))

    def is_prefix_of(self, other):
        return (
            self.field is other.field
            and other.inds[: len(self.inds)] == self.inds
        )

    def lift(self, obj):
        """Retag an element of a prefix ring into this ring."""
        if isinstance(obj, DiffRational):
            if obj.ring == self:
                return obj
            if not obj.ring.is_prefix_of(self):
                raise ValueError(f"{obj.ring!r} is not a prefix of {self!r}")
            return DiffRational(
                DiffPolynomial(self, obj.num.terms), DiffPolynomial(self, obj.den.terms)
            )
        if isinstance(obj, DiffPolynomial):
            if obj.ring == self:
                return obj
            if not obj.ring.is_prefix_of(self):
                raise ValueError(f"{obj.ring!r} is not a prefix of {self!r}")
            return DiffPolynomial(self, obj.terms)
        raise TypeError(f"cannot lift {type(obj).__name__}")

    def parse(self, text):
        from .parsing import parse_expression

        return as_rational(parse_expression(text).evaluate(_RingScope(self)), self)


class _RingScope:
    def __init__(self, ring):
        self.ring = ring

    def resolve(self, name):
        if name in self.ring._ind_index:
            return self.ring.var(name)
        return self.ring.const(self.ring.field.gen_element(name))

    def derive(self, dname, value):
        return value.derive(self.ring.field.derivation(dname))

    def const(self, value):
        return self.ring.const(value)


class DiffPolynomial:
    """Sparse differential polynomial with field-element coefficients."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms

    @staticmethod
    def make(ring, terms):
        pruned = {m: c for m, c in terms.items() if not c.is_zero()}
        return DiffPolynomial(ring, pruned)

    # -- queries -----------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_const(self):
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def const_value(self):
        if not self.terms:
            return self.ring.field.zero
        return self.terms[()]

    def dvars(self):
        out = set()
        for mono in self.terms:
            for v, _ in mono:
                out.add(v)
        return out

    def inds_used(self):
        return {v.ind for v in self.dvars()}

    def order(self):
        return max((v.order() for v in self.dvars()), default=0)

    def uses_only(self, positions):
        """True when every derivative multi-index is supported on ``positions``."""
        allowed = set(positions)
        for v in self.dvars():
            for k, e in enumerate(v.orders):
                if e and k not in allowed:
                    return False
        return True

    def leading_monomial(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=_mono_key)

    def degree_in(self, v):
        deg = 0
        for mono in self.terms:
            for w, e in mono:
                if w == v and e > deg:
                    deg = e
        return deg

    def coeff_of_power(self, v, k):
        out = {}
        for mono, c in self.terms.items():
            e = 0
            for w, ew in mono:
                if w == v:
                    e = ew
                    break
            if e == k:
                out[_mono_without(mono, v, drop=e)] = c
        return DiffPolynomial(self.ring, out)

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, DiffPolynomial):
            return other
        if isinstance(other, (int, Fraction, FieldElement)):
            return self.ring.const_poly(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = out.get(mono)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(mono, None)
            else:
                out[mono] = s
        return DiffPolynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return DiffPolynomial(self.ring, {m: -c for m, c in self.terms.items()})

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
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                c = c1 * c2
                if c.is_zero():
                    continue
                key = _mono_mul(m1, m2)
                s = out.get(key)
                s = c if s is None else s + c
                if s.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = s
        return DiffPolynomial(self.ring, out)

    __rmul__ = __mul__

    def scale(self, value):
        if not isinstance(value, FieldElement):
            value = self.ring.field.element(value)
        if value.is_zero():
            return self.ring.zero_poly()
        return DiffPolynomial(self.ring, {m: c * value for m, c in self.terms.items()})

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            raise ValueError("negative power of a differential polynomial")
        out = self.ring.one_poly()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, FieldElement)):
            other = self.ring.const_poly(other)
        return (
            isinstance(other, DiffPolynomial)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    __hash__ = None

    # -- differential structure -------------------------------------------------

    def partial(self, v):
        """Formal partial derivative with respect to one derivative variable."""
        out = {}
        for mono, c in self.terms.items():
            for w, e in mono:
                if w == v:
                    out_mono = _mono_without(mono, v, drop=1)
                    s = out.get(out_mono)
                    add = c * e
                    s = add if s is None else s + add
                    if s.is_zero():
                        out.pop(out_mono, None)
                    else:
                        out[out_mono] = s
                    break
        return DiffPolynomial(self.ring, out)

    def derive(self, d, frozen=frozenset()):
        """Formal total derivative: coefficients via the table, and the usual
        chain rule on derivative variables whose indeterminate is not frozen."""
        from .coeffield import coeff_derive

        field = self.ring.field
        d = field.derivation(d)
        didx = field.derivation_index(d)
        out = self.ring.zero_poly()
        for mono, c in self.terms.items():
            dc = coeff_derive(d, c)
            if not dc.is_zero():
                out = out + DiffPolynomial(self.ring, {mono: dc})
            for v, e in mono:
                if v.ind in frozen:
                    continue
                orders = list(v.orders)
                orders[didx] += 1
                nv = DerivativeVar(v.ind, tuple(orders))
                base = _mono_without(mono, v, drop=1)
                new_mono = _mono_mul(base, ((nv, 1),))
                out = out + DiffPolynomial(self.ring, {new_mono: c * e})
        return out

    def coeff_derivative(self, d):
        """Apply a derivation to the coefficients only (the f^D part)."""
        return self.derive(d, frozen=frozenset(range(len(self.ring.inds))))

    # -- conversions -----------------------------------------------------------

    def as_rational(self):
        return DiffRational(self, self.ring.one_poly())

    def as_field_element(self):
        if not self.is_const():
            raise ValueError("polynomial involves derivative variables")
        return self.const_value()

    # -- printing ----------------------------------------------------------------

    def _dvar_str(self, v):
        s = self.ring.inds[v.ind]
        pieces = [
            (d.name, e)
            for d, e in zip(self.ring.field.derivations, v.orders)
            if e
        ]
        for dname, e in reversed(pieces):
            s = f"d[{dname}]({s})" if e == 1 else f"d[{dname}]^{e}({s})"
        return s

    def _mono_str(self, mono):
        return "*".join(
            self._dvar_str(v) if e == 1 else f"{self._dvar_str(v)}^{e}" for v, e in mono
        )

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms, key=_mono_key, reverse=True):
            c = self.terms[mono]
            neg, ctext = _coeff_parts(c)
            mtext = self._mono_str(mono)
            if not mtext:
                body = ctext if ctext is not None else "1"
            elif ctext is None:
                body = mtext
            else:
                body = f"{ctext}*{mtext}"
            parts.append((neg, body))
        out = []
        for i, (neg, body) in enumerate(parts):
            if i == 0:
                out.append(f"-{body}" if neg else body)
            else:
                out.append(f" - {body}" if neg else f" + {body}")
        return "".join(out)

    def __repr__(self):
        return f"DiffPolynomial({self})"


def _coeff_parts(c):
    """Sign and body text of a coefficient; body None means coefficient one."""
    if c.is_const():
        frac = c.const_value()
        neg = frac < 0
        mag = abs(frac)
        return neg, (None if mag == 1 else str(mag))
    if c.den.is_one() and len(c.num.terms) == 1:
        ((exps, frac),) = c.num.terms.items()
        body = str(Poly(c.field, {exps: abs(frac)}))
        return frac < 0, body
    return False, f"({c})"


class DiffRational:
    """Canonical fraction of differential polynomials.

    After :meth:`make`, numerator and denominator are coprime in the flat
    polynomial ring over QQ spanned by the field generators and the
    derivative variables, and the denominator is integer, coprime and
    positive on its leading term.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        self.num = num
        self.den = den

    @staticmethod
    def make(num, den):
        num2, den2 = _normalize_pair(num, den)
        return DiffRational(num2, den2)

    @property
    def ring(self):
        return self.num.ring

    # -- queries -------------------------------------------------------------

    def is_zero(self):
        return self.num.is_zero()

    def is_const(self):
        return self.num.is_const() and self.den.is_const()

    def const_value(self):
        if not self.is_const():
            raise ValueError(f"{self} is not a field constant")
        return self.num.const_value() / self.den.const_value()

    def order(self):
        return max(self.num.order(), self.den.order())

    def inds_used(self):
        return self.num.inds_used() | self.den.inds_used()

    def uses_only(self, positions):
        return self.num.uses_only(positions) and self.den.uses_only(positions)

    # -- arithmetic -------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, DiffRational):
            return other
        if isinstance(other, DiffPolynomial):
            return other.as_rational()
        if isinstance(other, (int, Fraction, FieldElement)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return DiffRational.make(self.num + other.num, self.den)
        return DiffRational.make(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self):
        return DiffRational(-self.num, self.den)

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
        return DiffRational.make(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise DivisionByZero("division by the zero differential rational")
        return DiffRational.make(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def inverse(self):
        return self.ring.one() / self

    def __pow__(self, k):
        k = int(k)
        if k < 0:
            return self.inverse() ** (-k)
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, FieldElement, DiffPolynomial)):
            other = self._coerce(other)
        return (
            isinstance(other, DiffRational)
            and self.num == other.num
            and self.den == other.den
        )

    __hash__ = None

    # -- differential structure ----------------------------------------------------

    def derive(self, d, frozen=frozenset()):
        dn = self.num.derive(d, frozen)
        if self.den.is_const():
            return DiffRational.make(dn, self.den)
        dd_ = self.den.derive(d, frozen)
        return DiffRational.make(dn * self.den - self.num * dd_, self.den * self.den)

    # -- printing ---------------------------------------------------------------------

    def __str__(self):
        if self.den.is_const() and self.den.const_value().is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"DiffRational({self})"


def as_rational(value, ring):
    """Interpret a value as a differential rational over ``ring``.

    Values from a prefix ring are lifted; values from an extension ring
    are restricted when they only use this ring's indeterminates.
    """
    if isinstance(value, DiffPolynomial):
        value = value.as_rational()
    if isinstance(value, DiffRational):
        if value.ring == ring or value.ring.is_prefix_of(ring):
            return ring.lift(value)
        if ring.is_prefix_of(value.ring):
            used = value.inds_used()
            if used and max(used) >= len(ring.inds):
                names = [value.ring.inds[i] for i in sorted(used) if i >= len(ring.inds)]
                raise ValueError(
                    f"value uses indeterminate(s) {', '.join(names)} outside the target ring"
                )
            return DiffRational(
                DiffPolynomial(ring, value.num.terms),
                DiffPolynomial(ring, value.den.terms),
            )
        raise ValueError(f"rings {value.ring!r} and {ring!r} are unrelated")
    if isinstance(value, (int, Fraction, FieldElement)):
        return ring.const(value)
    raise TypeError(f"cannot interpret {type(value).__name__} as a differential rational")


def reindex(value, target_ring, mapping):
    """Rename indeterminates through an order-preserving index map.

    Order preservation keeps rankings, monomial sorting and the canonical
    fraction normalization intact, so terms are retagged without any
    renormalization.
    """
    items = sorted(mapping.items())
    for (a1, b1), (a2, b2) in zip(items, items[1:]):
        if not (a1 < a2 and b1 < b2):
            raise ValueError("reindex mapping must be strictly order-preserving")

    def map_poly(poly):
        out = {}
        for mono, c in poly.terms.items():
            new = tuple(
                (DerivativeVar(mapping[v.ind], v.orders), e) for v, e in mono
            )
            out[new] = c
        return DiffPolynomial(target_ring, out)

    if isinstance(value, DiffPolynomial):
        return map_poly(value)
    if isinstance(value, DiffRational):
        return DiffRational(map_poly(value.num), map_poly(value.den))
    raise TypeError(f"cannot reindex {type(value).__name__}")


# -- canonicalization ------------------------------------------------------------


def _normalize_pair(num, den):
    ring = num.ring
    if den.is_zero():
        raise DivisionByZero("zero denominator in differential rational")
    if num.is_zero():
        return ring.zero_poly(), ring.one_poly()
    if den.is_const():
        c = den.const_value()
        if c.is_one():
            return num, ring.one_poly()
        return num.scale(c.inverse()), ring.one_poly()
    if num.is_const() and den.is_const():
        return num, den
    field = ring.field
    ngens = len(field.generators)
    dvars = sorted(set(num.dvars()) | set(den.dvars()), key=rank_key)
    dpos = {v: i for i, v in enumerate(dvars)}
    nflat = ngens + len(dvars)

    lam = field.poly_one
    for c in list(num.terms.values()) + list(den.terms.values()):
        if not c.den.is_one():
            g = _polyops.gcd_terms(lam.terms, c.den.terms, ngens)
            lam = Poly(field, _polyops.mul_terms(
                lam.terms, _polyops.div_exact(c.den.terms, g, ngens)))

    def flatten(poly):
        out = {}
        for mono, c in poly.terms.items():
            coeff_poly = c.num
            if not lam.is_one():
                coeff_poly = Poly(field, _polyops.mul_terms(
                    c.num.terms, _polyops.div_exact(lam.terms, c.den.terms, ngens)))
            elif not c.den.is_one():
                raise AssertionError("denominator survived clearing")
            tail = [0] * len(dvars)
            for v, e in mono:
                tail[dpos[v]] = e
            tail = tuple(tail)
            for gexps, frac in coeff_poly.terms.items():
                out[gexps + tail] = frac
        return out

    flat_num = flatten(num)
    flat_den = flatten(den)
    g = _polyops.gcd_terms(flat_num, flat_den, nflat)
    if not _polyops.is_constant_terms(g):
        flat_num = _polyops.div_exact(flat_num, g, nflat)
        flat_den = _polyops.div_exact(flat_den, g, nflat)

    def flat_key(exps):
        return (sum(exps), exps)

    content, sign = _polyops.content_and_sign(flat_den, flat_key)
    factor = 1 / (content * sign)

    def unflatten(flat):
        grouped = {}
        for exps, frac in flat.items():
            gexps, tail = exps[:ngens], exps[ngens:]
            mono = tuple(
                (dvars[i], e) for i, e in enumerate(tail) if e
            )
            mono = tuple(sorted(mono, key=lambda p: rank_key(p[0])))
            grouped.setdefault(mono, {})[gexps] = frac * factor
        terms = {
            mono: FieldElement(Poly(field, gterms), field.poly_one)
            for mono, gterms in grouped.items()
        }
        return DiffPolynomial(ring, terms)

    new_num = unflatten(flat_num)
    new_den = unflatten(flat_den)
    if new_den.is_const():
        # constant in the derivative variables: absorb into the coefficients
        c = new_den.const_value()
        if c.is_one():
            return new_num, ring.one_poly()
        return new_num.scale(c.inverse()), ring.one_poly()
    return new_num, new_den


# -- module-level operations -----------------------------------------------------


def derive(d, f, frozen=frozenset()):
    """Formal derivation of a polynomial, rational or field element."""
    if isinstance(f, FieldElement):
        from .coeffield import coeff_derive

        return coeff_derive(d, f)
    return f.derive(d, frozen)


def partial(f, v):
    return f.partial(v)


def leader_initial_separant(f, ranking=ORDERLY):
    """Leader, initial and separant of a differential polynomial."""
    dvars = f.dvars()
    if not dvars:
        raise ConstantPolynomial(f"{f} lies in the coefficient field")
    leader = max(dvars, key=ranking.key)
    deg = f.degree_in(leader)
    initial = f.coeff_of_power(leader, deg)
    separant = f.partial(leader)
    return leader, initial, separant


def substitute(f, images):
    """Replace indeterminates by values, derivative-consistently.

    ``images`` maps indeterminate names or indices of ``f.ring`` to field
    elements or differential rationals and must cover every indeterminate
    occurring in ``f``.  Returns a field element when every image lies in
    the field, otherwise a differential rational over the images' ring.
    """
    ring = f.ring
    num, den = (f.num, f.den) if isinstance(f, DiffRational) else (f, None)

    base = {}
    for key, value in images.items():
        base[ring.ind_index(key)] = value

    used = num.inds_used() | (den.inds_used() if den is not None else set())
    missing = [ring.inds[i] for i in sorted(used) if i not in base]
    if missing:
        raise UndefinedSymbol(f"no image for indeterminate(s) {', '.join(missing)}")

    field_mode = all(
        isinstance(v, (FieldElement, int, Fraction)) for v in base.values()
    )
    field = ring.field

    if field_mode:
        values = {i: field.element(v) for i, v in base.items()}
        target = None
    else:
        target = None
        for v in base.values():
            if isinstance(v, (DiffRational, DiffPolynomial)):
                r = v.ring
                if target is None or target.is_prefix_of(r):
                    target = r
        values = {i: as_rational(v, target) for i, v in base.items()}

    cache = {}

    def value_of(v):
        got = cache.get(v)
        if got is not None:
            return got
        if not any(v.orders):
            out = values[v.ind]
        else:
            pos = max(k for k, e in enumerate(v.orders) if e)
            lowered = list(v.orders)
            lowered[pos] -= 1
            prev = value_of(DerivativeVar(v.ind, tuple(lowered)))
            out = derive(field.derivations[pos], prev)
        cache[v] = out
        return out

    def eval_poly(poly, zero):
        total = zero
        for mono, c in poly.terms.items():
            term = c if field_mode else target.const(c)
            for v, e in mono:
                term = term * value_of(v) ** e
            total = total + term
        return total

    if field_mode:
        num_val = eval_poly(num, field.zero)
        if den is None:
            return num_val
        den_val = eval_poly(den, field.zero)
        if den_val.is_zero():
            raise DivisionByZero("denominator vanishes under substitution")
        return num_val / den_val

    num_val = eval_poly(num, target.zero())
    if den is None:
        return num_val
    den_val = eval_poly(den, target.zero())
    if den_val.is_zero():
        raise DivisionByZero("denominator vanishes under substitution")
    return num_val / den_val
