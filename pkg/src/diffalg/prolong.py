"""Relative prolongations: the d operator, prolongation presentations, the
nabla section and prolongation of maps.

For a relative direction D and a polynomial f in the delta subring, the
relative derivative is

    d_rel(D, f)(x, u) = sum over theta, i of df/d(theta x_i) * theta u_i + f^D(x)

with f^D applying D to the coefficients; fractions extend by the quotient
rule.  Fresh fiber variables are named deterministically ``u<i>_<j>`` with
``i`` the 1-based position of D among the relative directions and ``j``
the 1-based coordinate.  An empty delta set is fully supported (purely
algebraic prolongation).
"""

from __future__ import annotations

from fractions import Fraction

from .coeffield import DD, FieldElement, coeff_derive
from .diffpoly import (
    DerivativeVar,
    DiffPolynomial,
    DiffRational,
    DiffRing,
    as_rational,
    substitute,
)
from .errors import DimensionMismatch
from .reduction import AutoreducedSet


class TauPoint:
    """A point of a prolongation fiber: a base tuple plus one derivative
    tuple per relative direction."""

    __slots__ = ("base", "fibers")

    def __init__(self, base, fibers):
        base = tuple(base)
        fibers = tuple(tuple(f) for f in fibers)
        for f in fibers:
            if len(f) != len(base):
                raise DimensionMismatch(
                    f"fiber arity {len(f)} differs from base arity {len(base)}"
                )
        self.base = base
        self.fibers = fibers

    @property
    def arity(self):
        return len(self.base)

    @property
    def nfibers(self):
        return len(self.fibers)

    def __eq__(self, other):
        if not isinstance(other, TauPoint):
            return NotImplemented
        if len(self.base) != len(other.base) or len(self.fibers) != len(other.fibers):
            return False
        for a, b in zip(self.base, other.base):
            if not entries_equal(a, b):
                return False
        for fa, fb in zip(self.fibers, other.fibers):
            for a, b in zip(fa, fb):
                if not entries_equal(a, b):
                    return False
        return True

    __hash__ = None

    def __repr__(self):
        flat = "; ".join(
            ", ".join(str(e) for e in block) for block in (self.base,) + self.fibers
        )
        return f"TauPoint({flat})"


def entries_equal(a, b):
    """Equality of point entries across the field/rational divide."""
    if isinstance(a, (int, Fraction)) or isinstance(b, (int, Fraction)):
        if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
            return Fraction(a) == Fraction(b)
    if isinstance(a, FieldElement) and isinstance(b, FieldElement):
        return a == b
    if isinstance(a, DiffPolynomial):
        a = a.as_rational()
    if isinstance(b, DiffPolynomial):
        b = b.as_rational()
    if isinstance(a, DiffRational) and isinstance(b, DiffRational):
        if a.ring == b.ring:
            return a == b
        if a.ring.is_prefix_of(b.ring):
            return b.ring.lift(a) == b
        if b.ring.is_prefix_of(a.ring):
            return a.ring.lift(b) == a
        return False
    rational = a if isinstance(a, DiffRational) else b
    other = b if rational is a else a
    if isinstance(other, (int, Fraction)):
        other = rational.ring.field.element(other)
    if not isinstance(other, FieldElement):
        return False
    return rational.is_const() and rational.const_value() == other


def entry_derive(d, entry):
    """Apply a derivation to a point entry (table action or formal)."""
    if isinstance(entry, FieldElement):
        return coeff_derive(d, entry)
    if isinstance(entry, (DiffPolynomial, DiffRational)):
        return entry.derive(d)
    raise TypeError(f"cannot derive entry of type {type(entry).__name__}")


def _dd_list(field, dd=None):
    if dd is None:
        dd = field.dd()
    return tuple(field.derivation(d) for d in dd)


def delta_positions(field, delta=None):
    if delta is None:
        delta = field.delta()
    return frozenset(field.derivation_index(d) for d in delta)


def prolongation_ring(ring, dd=None):
    """Extend a coordinate ring with one fresh fiber block per relative
    direction; returns the extension and the index blocks."""
    dd = _dd_list(ring.field, dd)
    n = len(ring.inds)
    names = []
    for i in range(1, len(dd) + 1):
        names.extend(f"u{i}_{j}" for j in range(1, n + 1))
    try:
        ext = ring.extend(names)
    except ValueError as exc:
        raise ValueError(
            f"fiber naming scheme collides with declared indeterminates: {exc}"
        ) from None
    blocks = tuple(
        tuple(n + i * n + j for j in range(n)) for i in range(len(dd))
    )
    return ext, blocks


def _scratch_names(ring, tag, count):
    suffix = ""
    k = 0
    while True:
        names = tuple(f"${tag}{suffix}{i}" for i in range(count))
        if not any(name in ring._ind_index for name in names):
            return names
        k += 1
        suffix = f"_{k}"


def extend_scratch(ring, tag, count):
    names = _scratch_names(ring, tag, count)
    ext = ring.extend(names)
    indices = tuple(ext.ind_index(name) for name in names)
    return ext, indices


def lin_part(poly, active, u_of, ring):
    """Sum of df/d(theta x_i) * theta u_i over the active indeterminates."""
    poly = ring.lift(poly)
    out = ring.zero_poly()
    for v in sorted(poly.dvars()):
        if v.ind not in active:
            continue
        direction = DiffPolynomial(
            ring, {((DerivativeVar(u_of[v.ind], v.orders), 1),): ring.field.one}
        )
        out = out + poly.partial(v) * direction
    return out


def lin_rational(f, active, u_of, ring):
    """Quotient-rule extension of the linear part to rational functions."""
    f = as_rational(f, ring)
    dn = lin_part(f.num, active, u_of, ring)
    if f.den.is_const():
        return DiffRational.make(dn, f.den)
    dd_ = lin_part(f.den, active, u_of, ring)
    return DiffRational.make(dn * f.den - f.num * dd_, f.den * f.den)


def rel_derive(D, f, active, u_of, ring):
    """Relative derivative of a rational map component, treating inds
    outside ``active`` as parameters derived formally."""
    f = as_rational(f, ring)
    frozen = frozenset(active)

    def on_poly(p):
        return lin_part(p, active, u_of, ring) + p.derive(D, frozen=frozen)

    dn = on_poly(f.num)
    if f.den.is_const():
        return DiffRational.make(dn, f.den)
    dd_ = on_poly(f.den)
    return DiffRational.make(dn * f.den - f.num * dd_, f.den * f.den)


def d_lin(f, u, ring=None):
    """The linear part alone: no coefficient-derivative term.

    ``u`` names the fresh direction tuple inside ``ring`` (default: the
    ring of ``f``), one entry per indeterminate of ``f``'s ring.
    """
    if ring is None:
        ring = f.ring
    u_of = {j: ring.ind_index(t) for j, t in enumerate(u)}
    active = set(range(len(f.ring.inds)))
    return lin_part(f, active, u_of, ring)


def _validate_delta_input(f, positions, what="d_rel"):
    if not f.uses_only(positions):
        raise ValueError(
            f"{what} is defined on the delta subring; the input mentions "
            "derivatives outside the declared delta set"
        )


def d_rel(D, f, context=None, delta=None):
    """Relative derivative of a delta-polynomial or delta-rational function.

    ``context`` may carry ``(ext_ring, blocks)`` from
    :func:`prolongation_ring` so that several calls share fiber names.
    """
    ring = f.ring
    field = ring.field
    D = field.derivation(D)
    dd = _dd_list(field)
    if D not in dd:
        raise ValueError(f"{D.name} is not a relative direction")
    positions = delta_positions(field, delta)
    _validate_delta_input(f, positions)
    if context is None:
        context = prolongation_ring(ring, dd)
    ext, blocks = context
    i = dd.index(D)
    u_of = dict(enumerate(blocks[i]))
    active = set(range(len(ring.inds)))
    return rel_derive(D, f, active, u_of, ext)


class ProlongationPresentation:
    """Base presentation together with its lifted generators, one block of
    fresh fiber variables per relative direction."""

    __slots__ = ("base", "ring", "fiber_blocks", "lifted", "dd")

    def __init__(self, base, ring, fiber_blocks, lifted, dd):
        self.base = base
        self.ring = ring
        self.fiber_blocks = fiber_blocks
        self.lifted = lifted
        self.dd = dd

    @property
    def all_generators(self):
        out = [self.ring.lift(e) for e in self.base.elements]
        for block in self.lifted:
            out.extend(block)
        return tuple(out)

    def generator_strings(self):
        return tuple(str(g) for g in self.all_generators)

    def __repr__(self):
        return f"ProlongationPresentation({len(self.base)} base, r={len(self.lifted)})"


def prolongation_gens(V, dd=None, delta=None):
    """Lifted generators of the relative prolongation of a presented variety.

    An empty presentation (the whole affine space) lifts to an empty set of
    new generators over the extended ring.
    """
    ring = V.ring
    field = ring.field
    dd = _dd_list(field, dd)
    positions = delta_positions(field, delta)
    ext, blocks = prolongation_ring(ring, dd)
    lifted = []
    active = set(range(len(ring.inds)))
    for i, D in enumerate(dd):
        u_of = dict(enumerate(blocks[i]))
        block = []
        for gen in V.elements:
            _validate_delta_input(gen, positions, what="prolongation")
            image = rel_derive(D, gen, active, u_of, ext)
            if not image.den.is_const():
                raise AssertionError("polynomial generator lifted to a fraction")
            block.append(image.num)
        lifted.append(tuple(block))
    return ProlongationPresentation(V, ext, blocks, tuple(lifted), dd)


def nabla(a, field=None, dd=None):
    """The canonical section x -> (x, D_1 x, ..., D_r x).

    Entries may be field elements (table action) or symbolic rationals
    (formal derivatives); the two may be mixed.
    """
    a = tuple(a)
    if field is None:
        for entry in a:
            if isinstance(entry, FieldElement):
                field = entry.field
                break
            if isinstance(entry, (DiffPolynomial, DiffRational)):
                field = entry.ring.field
                break
        else:
            raise TypeError("cannot infer the field from the point entries")
    dd = _dd_list(field, dd)
    fibers = tuple(tuple(entry_derive(D, e) for e in a) for D in dd)
    return TauPoint(a, fibers)


def tau_apply(f, p, dd=None, delta=None):
    """Prolongation of a delta-map applied to a point:
    (x, u_i) -> (f(x), d_rel(D_i, f)(x, u_i))."""
    f = tuple(f)
    ring = f[0].ring
    field = ring.field
    dd = _dd_list(field, dd)
    if len(p.base) != len(ring.inds):
        raise DimensionMismatch(
            f"point arity {len(p.base)} differs from map domain {len(ring.inds)}"
        )
    if len(p.fibers) != len(dd):
        raise DimensionMismatch(
            f"point has {len(p.fibers)} fibers for {len(dd)} relative directions"
        )
    positions = delta_positions(field, delta)
    for comp in f:
        _validate_delta_input(comp, positions, what="tau_apply")
    ctx = prolongation_ring(ring, dd)
    ext, blocks = ctx
    base_images = dict(enumerate(p.base))
    base = tuple(substitute(comp, base_images) for comp in f)
    fibers = []
    for i, D in enumerate(dd):
        images = dict(base_images)
        for j, idx in enumerate(blocks[i]):
            images[idx] = p.fibers[i][j]
        rel = [d_rel(D, comp, context=ctx, delta=delta) for comp in f]
        fibers.append(tuple(substitute(rc, images) for rc in rel))
    return TauPoint(base, tuple(fibers))
