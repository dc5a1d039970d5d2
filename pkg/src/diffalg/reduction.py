"""Ritt partial and full reduction with exact reduction certificates.

Reduction is performed modulo a user-supplied autoreduced set under the
orderly ranking.  Every reduction returns a certificate for the identity

    H * f  =  sum over (k, theta) of  cofactor * theta(A_k)  +  remainder

where H is a product of initials and separants of the set.  The identity
is re-expanded and checked after every reduction, so a returned
certificate always replays.

Derivative dominance is taken over the full declared derivation set, so a
verdict of ``IN_IDEAL`` certifies membership in the saturation ideal
generated by the set in the ambient (all-derivations) ring; for inputs
whose derivatives stay in the delta subring this is the usual delta-ideal
membership.
"""

from __future__ import annotations

import enum

from .diffpoly import (
    DiffRational,
    ORDERLY,
    leader_initial_separant,
    rank_key,
)
from .errors import CertificateError, ConstantPolynomial


class Verdict(enum.Enum):
    IN_IDEAL = "InIdeal"
    NOT_IN_IDEAL = "NotInIdeal"
    UNKNOWN = "Unknown"

    def __str__(self):
        return self.value


def _is_proper_derivative(v, leader):
    if v.ind != leader.ind or v == leader:
        return False
    return all(a >= b for a, b in zip(v.orders, leader.orders))


def is_autoreduced(polys, ranking=ORDERLY):
    """Check pairwise autoreduction; returns ``(flag, witness)`` where the
    witness names an offending pair of element indices or None."""
    info = []
    for k, p in enumerate(polys):
        if not p.dvars():
            raise ConstantPolynomial(f"element {k} lies in the coefficient field")
        leader, _, _ = leader_initial_separant(p, ranking)
        info.append((leader, p.degree_in(leader)))
    for i, (li, di) in enumerate(info):
        for j, p in enumerate(polys):
            if i == j:
                continue
            for v in p.dvars():
                if _is_proper_derivative(v, li):
                    return False, (i, j)
                if v == li and p.degree_in(v) >= di:
                    return False, (i, j)
    return True, None


class AutoreducedSet:
    """An ordered autoreduced set, optionally asserted to present a prime
    differential ideal (the assertion is the user's, never computed)."""

    __slots__ = ("elements", "ranking", "prime", "_leaders", "_ring")

    def __init__(self, elements, prime=False, ranking=ORDERLY, ring=None):
        elements = tuple(elements)
        for e in elements[1:]:
            if e.ring != elements[0].ring:
                raise ValueError("autoreduced set elements must share one ring")
        ok, witness = is_autoreduced(elements, ranking)
        if not ok:
            i, j = witness
            raise ValueError(f"elements {i} and {j} are not pairwise autoreduced")
        leaders = [leader_initial_separant(e, ranking)[0] for e in elements]
        order = sorted(range(len(elements)), key=lambda k: rank_key(leaders[k]))
        self.elements = tuple(elements[k] for k in order)
        self._leaders = tuple(leaders[k] for k in order)
        self.ranking = ranking
        # an empty presentation cuts out the whole space, whose ideal is prime
        self.prime = bool(prime) if elements else True
        self._ring = elements[0].ring if elements else ring

    @property
    def ring(self):
        if self._ring is None:
            raise ValueError("empty autoreduced set was built without a ring")
        return self._ring

    @property
    def leaders(self):
        return self._leaders

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def with_prime(self, prime):
        return AutoreducedSet(self.elements, prime=prime, ranking=self.ranking, ring=self._ring)

    def __repr__(self):
        return f"AutoreducedSet({len(self.elements)} elements, prime={self.prime})"


def _theta_of(v, leader):
    return tuple(a - b for a, b in zip(v.orders, leader.orders))


def theta_str(field, theta):
    pieces = [
        d.name if e == 1 else f"{d.name}^{e}"
        for d, e in zip(field.derivations, theta)
        if e
    ]
    return "*".join(pieces) if pieces else "id"


class ReductionCertificate:
    """Exact witness for one Ritt reduction."""

    __slots__ = ("aset", "f", "init_pows", "sep_pows", "combination", "remainder")

    def __init__(self, aset, f, init_pows, sep_pows, combination, remainder):
        self.aset = aset
        self.f = f
        self.init_pows = tuple(init_pows)
        self.sep_pows = tuple(sep_pows)
        self.combination = dict(combination)
        self.remainder = remainder

    def h_poly(self):
        ring = self.f.ring
        out = ring.one_poly()
        for k, elem in enumerate(self.aset.elements):
            if self.init_pows[k] or self.sep_pows[k]:
                _, initial, separant = leader_initial_separant(elem, self.aset.ranking)
                if self.init_pows[k]:
                    out = out * initial ** self.init_pows[k]
                if self.sep_pows[k]:
                    out = out * separant ** self.sep_pows[k]
        return out

    def verify(self):
        """Re-expand the certificate identity; True only on an exact match."""
        lhs = self.h_poly() * self.f
        acc = self.remainder
        for (k, theta), cofactor in self.combination.items():
            elem = self.f.ring.lift(self.aset.elements[k])
            for pos, e in enumerate(theta):
                for _ in range(e):
                    elem = elem.derive(self.f.ring.field.derivations[pos])
            acc = acc + cofactor * elem
        return (lhs - acc).is_zero()

    def as_dict(self):
        field = self.f.ring.field
        comb = [
            {
                "element": k,
                "theta": theta_str(field, theta),
                "cofactor": str(cof),
            }
            for (k, theta), cof in sorted(self.combination.items())
        ]
        return {
            "input": str(self.f),
            "set": [str(e) for e in self.aset.elements],
            "initial_powers": list(self.init_pows),
            "separant_powers": list(self.sep_pows),
            "combination": comb,
            "remainder": str(self.remainder),
        }

    def __repr__(self):
        return f"ReductionCertificate(remainder={self.remainder})"


def _var_power(ring, v, e):
    from .diffpoly import DiffPolynomial

    return DiffPolynomial(ring, {((v, e),): ring.field.one})


def _find_offender(g, aset, lifted_leaders):
    """Highest-ranked derivative variable of ``g`` that is reducible, with
    the element and derivative operator to use; None when reduced."""
    best = None
    for v in g.dvars():
        choice = None
        for k, leader in enumerate(lifted_leaders):
            if _is_proper_derivative(v, leader):
                if choice is None or rank_key(leader) > rank_key(lifted_leaders[choice[0]]):
                    choice = (k, _theta_of(v, leader))
            elif v == leader:
                dk = aset.elements[k].degree_in(leader)
                if g.degree_in(v) >= dk:
                    choice = (k, None)
        if choice is not None and (best is None or rank_key(v) > rank_key(best[0])):
            best = (v, choice[0], choice[1])
    return best


def ritt_reduce(f, aset):
    """Partial and full Ritt reduction of ``f`` modulo an autoreduced set.

    The highest-ranked reducible derivative is eliminated first;
    pseudo-division tracks initial and separant powers exactly.
    """
    ring = f.ring
    field = ring.field
    n_elem = len(aset.elements)
    init_pows = [0] * n_elem
    sep_pows = [0] * n_elem
    combination = {}
    g = f

    if n_elem == 0 or f.is_zero():
        cert = ReductionCertificate(aset, f, init_pows, sep_pows, combination, f)
        if not cert.verify():
            raise CertificateError("trivial certificate failed to replay")
        return cert

    lifted = [ring.lift(e) for e in aset.elements]
    lifted_leaders = list(aset.leaders)
    theta_cache = {}

    def theta_elem(k, theta):
        key = (k, theta)
        got = theta_cache.get(key)
        if got is not None:
            return got
        elem = lifted[k]
        for pos, e in enumerate(theta):
            for _ in range(e):
                elem = elem.derive(field.derivations[pos])
        theta_cache[key] = elem
        return elem

    info = [leader_initial_separant(e, aset.ranking) for e in lifted]

    while True:
        offender = _find_offender(g, aset, lifted_leaders)
        if offender is None:
            break
        v, k, theta = offender
        if theta is None:
            divisor = lifted[k]
            lead_coeff = info[k][1]
            theta_key = (0,) * len(field.derivations)
            kind = "init"
        else:
            divisor = theta_elem(k, theta)
            lead_coeff = info[k][2]
            theta_key = theta
            kind = "sep"
        e_div = divisor.degree_in(v)
        quot = ring.zero_poly()
        used = 0
        while True:
            d_cur = g.degree_in(v)
            if d_cur < e_div:
                break
            lc = g.coeff_of_power(v, d_cur)
            shift = (
                ring.one_poly()
                if d_cur == e_div
                else _var_power(ring, v, d_cur - e_div)
            )
            ratio = DiffRational.make(lc, lead_coeff)
            if ratio.den.is_const():
                # lc divides exactly; no need to multiply through
                q_term = ratio.num.scale(ratio.den.const_value().inverse()) * shift
                g = g - q_term * divisor
                quot = quot + q_term
            else:
                q_term = lc * shift
                g = lead_coeff * g - q_term * divisor
                quot = lead_coeff * quot + q_term
                used += 1
        if used or not quot.is_zero():
            if used:
                if kind == "init":
                    init_pows[k] += used
                else:
                    sep_pows[k] += used
                factor = lead_coeff ** used
                combination = {
                    key: factor * cof for key, cof in combination.items()
                }
            key = (k, theta_key)
            combination[key] = combination.get(key, ring.zero_poly()) + quot

    combination = {k: c for k, c in combination.items() if not c.is_zero()}
    cert = ReductionCertificate(aset, f, init_pows, sep_pows, combination, g)
    if not cert.verify():
        raise CertificateError("reduction certificate failed to replay")
    return cert


def membership_verdict(f, aset):
    """Three-valued ideal membership of a polynomial against a set.

    Zero remainder certifies membership; a nonzero remainder refutes it
    only when the set is asserted prime, and is otherwise inconclusive.
    """
    cert = ritt_reduce(f, aset)
    if cert.remainder.is_zero():
        return Verdict.IN_IDEAL, cert
    if aset.prime:
        return Verdict.NOT_IN_IDEAL, cert
    return Verdict.UNKNOWN, cert
