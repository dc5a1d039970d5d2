import random

import pytest

from diffalg import (
    AutoreducedSet,
    DiffRing,
    TauPoint,
    coeff_derive,
    d_lin,
    d_rel,
    nabla,
    prolongation_gens,
    prolongation_ring,
    reindex,
    substitute,
    tau_apply,
)
from _support import (
    coordinate_field,
    example1_field,
    exp_field,
    gm_presentation,
    random_delta_poly,
    random_field_element,
    twist_field,
)


@pytest.fixture(scope="module")
def gm_ring():
    return DiffRing(twist_field(), ("x", "y"))


def test_d_lin_group_law(gm_ring):
    ext, blocks = prolongation_ring(gm_ring)
    f = gm_ring.parse("x*y").num
    out = d_lin(f, [ext.inds[i] for i in blocks[0]], ring=ext)
    assert out == ext.parse("y*u1_1 + x*u1_2").num


def test_d_lin_additive(gm_ring):
    ext, blocks = prolongation_ring(gm_ring)
    f = gm_ring.parse("x + y").num
    out = d_lin(f, [ext.inds[i] for i in blocks[0]], ring=ext)
    assert out == ext.parse("u1_1 + u1_2").num


def test_d_lin_constant_coefficients(gm_ring):
    ext, blocks = prolongation_ring(gm_ring)
    f = gm_ring.parse("x*d[dt]^2(x) - d[dt](x)^2").num
    out = d_lin(f, [ext.inds[i] for i in blocks[0]], ring=ext)
    expect = ext.parse(
        "d[dt]^2(x)*u1_1 - 2*d[dt](x)*d[dt](u1_1) + x*d[dt]^2(u1_1)"
    ).num
    assert out == expect


def test_d_rel_displayed_generators(gm_ring):
    f = gm_ring.parse("x*y - 1")
    out = d_rel("dw", f)
    assert str(out) == "x*u1_2 + y*u1_1"
    g = gm_ring.parse("x*d[dt]^2(x) - d[dt](x)^2")
    outg = d_rel("dw", g)
    assert (
        str(outg)
        == "x*d[dt]^2(u1_1) + u1_1*d[dt]^2(x) - 2*d[dt](x)*d[dt](u1_1)"
    )


def test_d_rel_coefficient_action():
    field = coordinate_field()
    ring = DiffRing(field, ("x",))
    # dw kills t, so the coefficient term vanishes
    assert str(d_rel("dw", ring.parse("t*x"))) == "t*u1_1"
    field2 = exp_field()
    # swap roles: make dt relative by redeclaring
    from diffalg import DD, DELTA, declare_field

    f3 = declare_field(
        ["t", "w"],
        [("dt", DD), ("dw", DELTA)],
        {("dt", "t"): 1, ("dt", "w"): 0, ("dw", "t"): 0, ("dw", "w"): 1},
    )
    ring3 = DiffRing(f3, ("x",))
    assert str(d_rel("dt", ring3.parse("t*x"))) == "t*u1_1 + x"


def test_d_rel_rejects_relative_derivatives(gm_ring):
    f = gm_ring.parse("d[dw](x)")
    with pytest.raises(ValueError):
        d_rel("dw", f)


def test_d_rel_rejects_base_direction(gm_ring):
    with pytest.raises(ValueError):
        d_rel("dt", gm_ring.parse("x"))


def test_prolongation_gens_gm(gm_ring):
    V = gm_presentation(gm_ring)
    pres = prolongation_gens(V)
    assert [str(g) for g in pres.lifted[0]] == [
        "x*u1_2 + y*u1_1",
        "x*d[dt]^2(u1_1) + u1_1*d[dt]^2(x) - 2*d[dt](x)*d[dt](u1_1)",
    ]
    assert len(pres.all_generators) == 4


def test_prolongation_gens_empty(gm_ring):
    V = AutoreducedSet([], ring=gm_ring)
    pres = prolongation_gens(V)
    assert pres.all_generators == ()
    assert pres.ring.inds == ("x", "y", "u1_1", "u1_2")


def test_prolongation_two_directions():
    field = example1_field()
    ring = DiffRing(field, ("x", "y"))
    V = AutoreducedSet([ring.parse("x*y - 1").num], prime=True)
    pres = prolongation_gens(V)
    assert pres.ring.inds == ("x", "y", "u1_1", "u1_2", "u2_1", "u2_2")
    assert [str(g) for g in pres.lifted[0]] == ["x*u1_2 + y*u1_1"]
    assert [str(g) for g in pres.lifted[1]] == ["x*u2_2 + y*u2_1"]


def test_fiber_name_collision_rejected():
    field = coordinate_field()
    ring = DiffRing(field, ("x", "u1_1"))
    V = AutoreducedSet([ring.parse("x*u1_1 - 1").num], prime=True)
    with pytest.raises(ValueError):
        prolongation_gens(V)


def test_nabla_concrete_and_symbolic():
    field = example1_field()
    E = field.gen_element("E")
    point = nabla((E,), field=field)
    assert point.fibers[0][0] == field.parse("2*w*E")
    assert point.fibers[1][0] == field.parse("(2*t + 2*w)*E")
    one = nabla((field.one,), field=field)
    assert all(f[0].is_zero() for f in one.fibers)
    ring = DiffRing(field, ("x",))
    sym = nabla((ring.var("x"),))
    assert str(sym.fibers[0][0]) == "d[dt](x)"
    assert str(sym.fibers[1][0]) == "d[dw](x)"


def test_tau_apply_identity_and_squaring():
    field = coordinate_field()
    ring = DiffRing(field, ("x",))
    ident = (ring.var("x"),)
    p = TauPoint((field.parse("t"),), ((field.parse("w"),),))
    assert tau_apply(ident, p) == p
    sq = (ring.parse("x^2"),)
    out = tau_apply(sq, p)
    assert out.base[0] == field.parse("t^2")
    assert out.fibers[0][0] == field.parse("2*t*w")


def test_tau_apply_chain_randomized():
    field = coordinate_field()
    ring = DiffRing(field, ("x",))
    rng = random.Random(83)
    atoms = ["x", "x^2", "t*x", "d[dt](x)", "x + 1"]
    p0 = TauPoint((ring.var("x"),), ((ring.parse("d[dw](x)"),),))
    for _ in range(12):
        f = (ring.parse(rng.choice(atoms) + " + " + rng.choice(atoms)),)
        g = (ring.parse(rng.choice(atoms) + "*" + rng.choice(atoms)),)
        comp = (substitute(g[0], {0: f[0]}),)
        assert tau_apply(comp, p0) == tau_apply(g, tau_apply(f, p0))


def test_specialization_identity_randomized():
    field = exp_field()
    ring = DiffRing(field, ("x", "y"))
    rng = random.Random(89)
    ctx = prolongation_ring(ring)
    D = field.dd()[0]
    for _ in range(25):
        f = random_delta_poly(rng, ring).as_rational()
        a = tuple(
            random_field_element(rng, field, allow_fraction=False) for _ in range(2)
        )
        da = tuple(coeff_derive(D, v) for v in a)
        images = {0: a[0], 1: a[1], 2: da[0], 3: da[1]}
        lhs = coeff_derive(D, substitute(f, {0: a[0], 1: a[1]}))
        rhs = substitute(d_rel(D, f, context=ctx), images)
        assert lhs == rhs


def test_functoriality_randomized():
    field = exp_field()
    ring = DiffRing(field, ("x", "y"))
    rng = random.Random(97)
    ctx = prolongation_ring(ring)
    ext, blocks = ctx
    D = field.dd()[0]
    for _ in range(10):
        fmap = tuple(random_delta_poly(rng, ring, max_terms=2).as_rational() for _ in range(2))
        gmap = tuple(random_delta_poly(rng, ring, max_terms=2).as_rational() for _ in range(2))
        comp = tuple(substitute(g, {0: fmap[0], 1: fmap[1]}) for g in gmap)
        lhs = tuple(d_rel(D, c, context=ctx) for c in comp)
        dfs = tuple(d_rel(D, f, context=ctx) for f in fmap)
        images = {0: fmap[0], 1: fmap[1], blocks[0][0]: dfs[0], blocks[0][1]: dfs[1]}
        rhs = tuple(substitute(d_rel(D, g, context=ctx), images) for g in gmap)
        for a, b in zip(lhs, rhs):
            diff = ext.lift(a) - ext.lift(b)
            assert diff.is_zero()


def test_product_decomposition():
    field = twist_field()
    ra = DiffRing(field, ("x",))
    rb = DiffRing(field, ("y",))
    Va = AutoreducedSet([ra.parse("x*d[dt]^2(x) - d[dt](x)^2").num], prime=True)
    Vb = AutoreducedSet([rb.parse("d[dt](y) - alpha*y").num], prime=True)
    rp = DiffRing(field, ("x", "y"))
    product = AutoreducedSet(
        [reindex(Va.elements[0], rp, {0: 0}), reindex(Vb.elements[0], rp, {0: 1})],
        prime=True,
    )
    lift_p = prolongation_gens(product)
    lift_a = prolongation_gens(Va)
    lift_b = prolongation_gens(Vb)
    # interleaving bijection: (x, u) -> (x slot 0, u slot 2); (y, u) -> (1, 3)
    mapped_a = reindex(lift_a.lifted[0][0], lift_p.ring, {0: 0, 1: 2})
    mapped_b = reindex(lift_b.lifted[0][0], lift_p.ring, {0: 1, 1: 3})
    assert {str(g) for g in lift_p.lifted[0]} == {str(mapped_a), str(mapped_b)}


def test_d_rel_is_derivation_in_f(gm_ring):
    rng = random.Random(103)
    ctx = prolongation_ring(gm_ring)
    ext, _ = ctx
    for _ in range(10):
        f = random_delta_poly(rng, gm_ring).as_rational()
        g = random_delta_poly(rng, gm_ring).as_rational()
        left = d_rel("dw", f * g, context=ctx)
        right = d_rel("dw", f, context=ctx) * ext.lift(g) + ext.lift(f) * d_rel(
            "dw", g, context=ctx
        )
        assert left == right
        assert d_rel("dw", f + g, context=ctx) == d_rel("dw", f, context=ctx) + d_rel(
            "dw", g, context=ctx
        )
