"""Shared field and ring builders plus randomized generators for tests."""

from __future__ import annotations

import random
from fractions import Fraction

from diffalg import (
    DD,
    DELTA,
    AutoreducedSet,
    DiffRing,
    RationalGroupLaw,
    RelativeDGroup,
    RelativeDVariety,
    declare_field,
)


def coordinate_field():
    """Q(t, w) with dw relative and dt base, acting as partials."""
    return declare_field(
        ["t", "w"],
        [("dw", DD), ("dt", DELTA)],
        {("dt", "t"): 1, ("dt", "w"): 0, ("dw", "t"): 0, ("dw", "w"): 1},
    )


def exp_field():
    """Q(t, w, E2) where E2 plays exp(t*w): dt E2 = w E2, dw E2 = t E2."""
    return declare_field(
        ["t", "w", "E2"],
        [("dw", DD), ("dt", DELTA)],
        {
            ("dt", "t"): 1,
            ("dt", "w"): 0,
            ("dt", "E2"): "w*E2",
            ("dw", "t"): 0,
            ("dw", "w"): 1,
            ("dw", "E2"): "t*E2",
        },
    )


def example1_field():
    """Q(t, w, E) with E playing exp(2*w*t + w^2); both derivations relative."""
    return declare_field(
        ["t", "w", "E"],
        [("dt", DD), ("dw", DD)],
        {
            ("dt", "t"): 1,
            ("dt", "w"): 0,
            ("dt", "E"): "2*w*E",
            ("dw", "t"): 0,
            ("dw", "w"): 1,
            ("dw", "E"): "(2*t + 2*w)*E",
        },
    )


def twist_field():
    """Abstract first-order twist: dt(alpha) = alphap, dt(alphap) = 0."""
    return declare_field(
        ["alpha", "alphap"],
        [("dw", DD), ("dt", DELTA)],
        {
            ("dt", "alpha"): "alphap",
            ("dt", "alphap"): 0,
            ("dw", "alpha"): 0,
            ("dw", "alphap"): 0,
        },
    )


def parametrized_field():
    """Q(t, w, L, X): L plays log(w) and X plays w^t, so dw X = (t/w) X and
    dt X = L X; realizes the parametrized linear equation exactly."""
    return declare_field(
        ["t", "w", "L", "X"],
        [("dw", DD), ("dt", DELTA)],
        {
            ("dt", "t"): 1,
            ("dt", "w"): 0,
            ("dt", "L"): 0,
            ("dt", "X"): "L*X",
            ("dw", "t"): 0,
            ("dw", "w"): 1,
            ("dw", "L"): "1/w",
            ("dw", "X"): "(t/w)*X",
        },
    )


def gm_presentation(ring):
    """The multiplicative-group subvariety {x*y - 1, x*dt^2(x) - dt(x)^2}."""
    return AutoreducedSet(
        [ring.parse("x*y - 1").num, ring.parse("x*d[dt]^2(x) - d[dt](x)^2").num],
        prime=True,
    )


def ga_group(field):
    ring = DiffRing(field, ("x",))
    law = RationalGroupLaw(ring, ["x + x_2"], ["-x"], [0])
    dv = RelativeDVariety(
        AutoreducedSet([], ring=ring),
        [tuple(ring.zero() for _ in ring.inds) for _ in field.dd()],
    )
    return RelativeDGroup(dv, law)


def gm_group(field):
    ring = DiffRing(field, ("x",))
    law = RationalGroupLaw(ring, ["x*x_2"], ["1/x"], [1])
    dv = RelativeDVariety(
        AutoreducedSet([], ring=ring),
        [tuple(ring.zero() for _ in ring.inds) for _ in field.dd()],
    )
    return RelativeDGroup(dv, law)


def gl2_group(field):
    """GL_2 affinized with the determinant-inverse coordinate z."""
    ring = DiffRing(field, ("a", "b", "c", "d", "z"))
    law = RationalGroupLaw(
        ring,
        ["a*a_2 + b*c_2", "a*b_2 + b*d_2", "c*a_2 + d*c_2", "c*b_2 + d*d_2", "z*z_2"],
        ["z*d", "-z*b", "-z*c", "z*a", "a*d - b*c"],
        [1, 0, 0, 1, 1],
    )
    pres = AutoreducedSet([ring.parse("z*(a*d - b*c) - 1").num], prime=True)
    dv = RelativeDVariety(
        pres, [tuple(ring.zero() for _ in ring.inds) for _ in field.dd()]
    )
    return RelativeDGroup(dv, law)


def example1_group(field=None):
    field = field or example1_field()
    ring = DiffRing(field, ("x", "y"))
    law = RationalGroupLaw(ring, ["x*x_2", "y + y_2"], ["1/x", "-y"], [1, 0])
    sec = [(ring.parse("x*y"), ring.zero()), (ring.parse("x*y"), ring.zero())]
    dv = RelativeDVariety(AutoreducedSet([], ring=ring), sec)
    return RelativeDGroup(dv, law)


def example3_group():
    field = declare_field([], [("d1", DELTA), ("d2", DD)], {})
    ring = DiffRing(field, ("x", "y"))
    law = RationalGroupLaw(ring, ["x*x_2", "y + y_2"], ["1/x", "-y"], [1, 0])
    sec = [(ring.parse("x*y"), ring.parse("d[d1](y)"))]
    dv = RelativeDVariety(AutoreducedSet([], ring=ring), sec)
    return RelativeDGroup(dv, law)


def random_field_element(rng, field, max_terms=2, allow_fraction=True):
    gens = list(field.generators)
    def poly():
        total = field.zero
        for _ in range(rng.randint(1, max_terms)):
            term = field.element(Fraction(rng.randint(-3, 3)))
            if term.is_zero():
                term = field.one
            for _ in range(rng.randint(0, 2)):
                term = term * field.gen_element(rng.choice(gens))
            total = total + term
        return total
    value = poly()
    if allow_fraction and gens and rng.random() < 0.3:
        den = field.zero
        while den.is_zero():
            den = poly()
        value = value / den
    return value


def random_delta_poly(rng, ring, max_order=2, max_terms=3):
    """Random polynomial in the delta subring with field coefficients."""
    field = ring.field
    delta_pos = [field.derivation_index(d) for d in field.delta()]
    total = ring.zero_poly()
    for _ in range(rng.randint(1, max_terms)):
        coeff = random_field_element(rng, field, allow_fraction=False)
        mono = ring.const_poly(coeff)
        for _ in range(rng.randint(0, 2)):
            orders = [0] * len(field.derivations)
            for _ in range(rng.randint(0, max_order)):
                if delta_pos:
                    orders[rng.choice(delta_pos)] += 1
            mono = mono * ring.poly_var(rng.randrange(len(ring.inds)), orders)
        total = total + mono
    return total
