import pytest

from diffalg import (
    AutoreducedSet,
    DiffRing,
    DimensionMismatch,
    NotOnVariety,
    RelativeDVariety,
    Status,
    check_integrability,
    coeff_derive,
    is_subdvariety,
    nabla,
    prolongation_gens,
    sharp_member,
    substitute,
    validate_section,
)
from _support import (
    example1_field,
    gm_presentation,
    parametrized_field,
    twist_field,
)


@pytest.fixture(scope="module")
def gm_twist():
    ring = DiffRing(twist_field(), ("x", "y"))
    V = gm_presentation(ring)
    return RelativeDVariety(V, [(ring.parse("alpha*x"), ring.parse("-alpha*y"))])


@pytest.fixture(scope="module")
def ex1_group_variety():
    field = example1_field()
    ring = DiffRing(field, ("x", "y"))
    G = AutoreducedSet([], ring=ring)
    section = [(ring.parse("x*y"), ring.zero()), (ring.parse("x*y"), ring.zero())]
    return RelativeDVariety(G, section)


def test_section_validates_gm_twist(gm_twist):
    report = validate_section(gm_twist)
    assert report.status is Status.PASS
    for row in report.rows:
        assert row.certificate is not None


def test_zero_section_over_constants(gm_twist):
    ring = gm_twist.ring
    dz = RelativeDVariety(gm_twist.variety, [(ring.zero(), ring.zero())])
    assert validate_section(dz).status is Status.PASS


def test_bad_section_fails(gm_twist):
    ring = gm_twist.ring
    bad = RelativeDVariety(gm_twist.variety, [(ring.var("x"), ring.var("x"))])
    report = validate_section(bad)
    assert report.status is Status.FAIL


def test_integrability_vacuous_single_direction(gm_twist):
    report = check_integrability(gm_twist)
    assert report.status is Status.PASS
    assert not report.rows


def test_integrability_example1(ex1_group_variety):
    report = check_integrability(ex1_group_variety)
    assert report.status is Status.PASS
    assert len(report.rows) == 2


def test_integrability_failing_perturbation(ex1_group_variety):
    # s_w = (y, 0): the mixed condition compares 0 against y^2
    ring = ex1_group_variety.ring
    bad = RelativeDVariety(
        ex1_group_variety.variety,
        [(ring.parse("x*y"), ring.zero()), (ring.parse("y"), ring.zero())],
    )
    report = check_integrability(bad)
    assert report.status is Status.FAIL


def test_mu_convention(gm_twist, ex1_group_variety):
    assert gm_twist.mu == 1
    assert ex1_group_variety.mu == 1
    ring = gm_twist.ring
    higher = RelativeDVariety(
        gm_twist.variety,
        [(ring.parse("d[dt](x)"), ring.parse("-d[dt](y) - 2*y*d[dt](x)*y"))],
    )
    assert higher.mu == 1
    second = RelativeDVariety(
        gm_twist.variety, [(ring.parse("d[dt]^2(x)"), ring.zero())]
    )
    assert second.mu == 2


def test_sharp_member_example1_twisted(ex1_group_variety):
    field = ex1_group_variety.ring.field
    ring = ex1_group_variety.ring
    twisted = RelativeDVariety(
        ex1_group_variety.variety,
        [
            (ring.parse("x*y"), ring.zero()),
            (ring.parse("x*y + 2*t*x"), ring.const(2)),
        ],
    )
    report = sharp_member((field.gen_element("E"), field.parse("2*w")), twisted)
    assert report.status is Status.PASS


def test_sharp_member_identity_and_nonsharp(ex1_group_variety):
    field = ex1_group_variety.ring.field
    assert sharp_member((field.one, field.zero), ex1_group_variety).status is Status.PASS
    assert sharp_member((field.parse("t"), field.zero), ex1_group_variety).status is Status.FAIL


def test_sharp_member_requires_point_on_variety(gm_twist):
    field = gm_twist.ring.field
    with pytest.raises(NotOnVariety):
        sharp_member((field.parse("2"), field.parse("2")), gm_twist)


def test_sharp_member_parametrized_example():
    # X plays w^t: dw X = (t/w) X, so (X, 1/X) is sharp for the t/w twist
    field = parametrized_field()
    ring = DiffRing(field, ("x", "y"))
    V = gm_presentation(ring)
    alpha = field.parse("t/w")
    dv = RelativeDVariety(
        V, [(ring.const(alpha) * ring.var("x"), ring.const(-alpha) * ring.var("y"))]
    )
    assert validate_section(dv).status is Status.PASS
    X = field.gen_element("X")
    point = (X, field.one / X)
    assert sharp_member(point, dv).status is Status.PASS
    # sharp points satisfy every lifted generator at nabla(a), exactly
    pres = prolongation_gens(V)
    np_ = nabla(point, field=field)
    images = {0: point[0], 1: point[1], 2: np_.fibers[0][0], 3: np_.fibers[0][1]}
    for gen in pres.all_generators:
        assert substitute(gen, images).is_zero()
    # and the coefficient-level derivative of every generator vanishes
    for gen in V.elements:
        value = substitute(gen, {0: point[0], 1: point[1]})
        assert coeff_derive("dw", value).is_zero()


def test_is_subdvariety_reflexive(gm_twist):
    assert is_subdvariety(gm_twist, gm_twist).status is Status.PASS


def test_is_subdvariety_point(gm_twist):
    ring = gm_twist.ring
    W = AutoreducedSet(
        [ring.parse("x - 1").num, ring.parse("y - 1").num], prime=True
    )
    zero_sub = RelativeDVariety(W, [(ring.zero(), ring.zero())])
    zero_amb = RelativeDVariety(gm_twist.variety, [(ring.zero(), ring.zero())])
    assert is_subdvariety(zero_sub, zero_amb).status is Status.PASS
    # against the alpha twist the sections disagree on W
    assert is_subdvariety(zero_sub, gm_twist).status is Status.FAIL


def test_is_subdvariety_not_contained(gm_twist):
    ring = gm_twist.ring
    W = AutoreducedSet([ring.parse("x - 1").num], prime=True)
    sub = RelativeDVariety(W, [(ring.zero(), ring.zero())])
    assert is_subdvariety(sub, gm_twist).status is Status.FAIL


def test_section_shape_validation(gm_twist):
    ring = gm_twist.ring
    with pytest.raises(DimensionMismatch):
        RelativeDVariety(gm_twist.variety, [(ring.zero(),)])
    with pytest.raises(ValueError):
        RelativeDVariety(gm_twist.variety, [(ring.parse("d[dw](x)"), ring.zero())])
