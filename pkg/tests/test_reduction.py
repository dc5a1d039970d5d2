import random

import pytest

from diffalg import (
    AutoreducedSet,
    DiffRing,
    Verdict,
    is_autoreduced,
    membership_verdict,
    ritt_reduce,
)
from _support import coordinate_field, gm_presentation, random_delta_poly, twist_field


@pytest.fixture(scope="module")
def ring():
    return DiffRing(twist_field(), ("x", "y"))


@pytest.fixture(scope="module")
def gm(ring):
    return gm_presentation(ring)


def test_is_autoreduced_examples(ring):
    f = ring.parse("x*y - 1").num
    g = ring.parse("x*d[dt]^2(x) - d[dt](x)^2").num
    ok, witness = is_autoreduced([f, g])
    assert ok and witness is None
    bad1 = ring.parse("d[dt](x)").num
    bad2 = ring.parse("d[dt]^2(x)").num
    ok, witness = is_autoreduced([bad1, bad2])
    assert not ok and witness == (0, 1)
    ok, witness = is_autoreduced([])
    assert ok and witness is None


def test_elements_sorted_by_leader(ring, gm):
    # x*y - 1 has leader y (order 0), the other has leader dt^2(x)
    assert str(gm.elements[0]) == "x*y - 1"


def test_reduce_derivative_of_generator(ring, gm):
    f = ring.parse("x*d[dt]^3(x) - d[dt](x)*d[dt]^2(x)").num
    cert = ritt_reduce(f, gm)
    assert cert.remainder.is_zero()
    assert cert.verify()
    # f is exactly dt applied to the second generator
    assert dict(cert.combination) == {(1, (0, 1)): ring.one_poly()}


def test_reduce_already_reduced(ring, gm):
    f = ring.parse("d[dt](x) + alpha").num
    cert = ritt_reduce(f, gm)
    assert cert.remainder == f
    assert cert.init_pows == (0, 0) and cert.sep_pows == (0, 0)
    assert not cert.combination


def test_reduce_set_element(ring, gm):
    f = gm.elements[0]
    cert = ritt_reduce(f, gm)
    assert cert.remainder.is_zero()
    assert dict(cert.combination) == {(0, (0, 0)): ring.one_poly()}
    assert cert.h_poly() == ring.one_poly()


def test_reduce_zero(ring, gm):
    cert = ritt_reduce(ring.zero_poly(), gm)
    assert cert.remainder.is_zero() and not cert.combination and cert.verify()


def test_membership_one_not_in_proper_ideal(ring, gm):
    verdict, _ = membership_verdict(ring.one_poly(), gm)
    assert verdict is Verdict.NOT_IN_IDEAL


def test_membership_unknown_without_primality(ring, gm):
    loose = gm.with_prime(False)
    verdict, cert = membership_verdict(ring.parse("x").num, loose)
    assert verdict is Verdict.UNKNOWN
    assert cert.remainder == ring.parse("x").num


def test_twist_residual_in_ideal(ring, gm):
    residual = ring.parse(
        "alpha*x*d[dt]^2(x) - 2*d[dt](x)*(alphap*x + alpha*d[dt](x))"
        " + x*(2*alphap*d[dt](x) + alpha*d[dt]^2(x))"
    ).num
    verdict, cert = membership_verdict(residual, gm)
    assert verdict is Verdict.IN_IDEAL
    assert cert.verify()
    # the residual is exactly 2*alpha times the second generator
    assert dict(cert.combination) == {(1, (0, 0)): ring.parse("2*alpha").num}


def test_remainder_is_reduced(ring, gm):
    rng = random.Random(71)
    for _ in range(25):
        f = random_delta_poly(rng, ring, max_order=3)
        cert = ritt_reduce(f, gm)
        assert cert.verify()
        rem = cert.remainder
        for leader, elem in zip(gm.leaders, gm.elements):
            for v in rem.dvars():
                if v.ind != leader.ind:
                    continue
                dominated = all(a >= b for a, b in zip(v.orders, leader.orders))
                if dominated and v != leader:
                    raise AssertionError(f"proper derivative {v} survives in {rem}")
            assert rem.degree_in(leader) < elem.degree_in(leader)


def test_certificates_replay_on_random_corpus(ring, gm):
    rng = random.Random(73)
    for _ in range(40):
        f = random_delta_poly(rng, ring, max_order=3)
        assert ritt_reduce(f, gm).verify()


def test_empty_set_reduction(ring):
    empty = AutoreducedSet([], ring=ring)
    f = ring.parse("x*y").num
    verdict, cert = membership_verdict(f, empty)
    assert verdict is Verdict.NOT_IN_IDEAL
    assert cert.remainder == f
    verdict, _ = membership_verdict(ring.zero_poly(), empty)
    assert verdict is Verdict.IN_IDEAL


def test_pi_dominance_reduces_dd_derivatives():
    # reducing an expression containing relative-direction derivatives
    # against a delta characteristic set uses derivatives over all of Pi
    ring = DiffRing(coordinate_field(), ("x",))
    A = AutoreducedSet([ring.parse("d[dt](x) - x").num], prime=True)
    f = ring.parse("d[dw](d[dt](x)) - d[dw](x)").num
    verdict, cert = membership_verdict(f, A)
    assert verdict is Verdict.IN_IDEAL
    assert cert.verify()
