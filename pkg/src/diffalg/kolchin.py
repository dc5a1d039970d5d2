"""Numerical polynomials in the binomial basis and dimension counting.

A numerical polynomial is stored by its integer coefficients d_0..d_m in
the basis C(h+i, i).  The dimension polynomial of a leader set counts, for
each indeterminate, the multi-indices of order at most h outside the cones
spanned by the leaders; it is computed by inclusion-exclusion over leader
subsets and is exact for h at least the maximum combined leader order.
Small h are covered by direct enumeration, which doubles as the
independent oracle for the closed form.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .errors import DimensionMismatch
from .reports import CheckSection, Status


def binomial_eval(h, i):
    """C(h+i, i) as a polynomial in h, exact for every integer h."""
    num = 1
    for j in range(1, i + 1):
        num *= h + j
    value = Fraction(num, math.factorial(i))
    assert value.denominator == 1
    return int(value)


def _poly_eval(coeffs, x):
    out = Fraction(0)
    for c in reversed(coeffs):
        out = out * x + c
    return out


def _poly_shift_minus_one(coeffs):
    """Coefficients of f(h-1) from those of f(h)."""
    out = [Fraction(0)] * len(coeffs)
    for k, c in enumerate(coeffs):
        # (h-1)^k expanded
        for j in range(k + 1):
            out[j] += c * math.comb(k, j) * (-1) ** (k - j)
    return out


class NumericalPolynomial:
    """Integer combination of the binomials C(h+i, i); representation is
    unique after trailing zeros are trimmed."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coeffs = tuple(int(c) for c in coeffs)

    @staticmethod
    def zero():
        return NumericalPolynomial(())

    @staticmethod
    def constant(c):
        return NumericalPolynomial((c,))

    @staticmethod
    def from_monomial_coeffs(coeffs):
        """Convert from the monomial basis (Fraction coefficients in h) by
        repeated backward differences evaluated at h = -1."""
        coeffs = [Fraction(c) for c in coeffs]
        out = []
        current = coeffs
        for _ in range(len(coeffs) + 1):
            value = _poly_eval(current, -1)
            assert value.denominator == 1, "not integer-valued in the binomial basis"
            out.append(int(value))
            shifted = _poly_shift_minus_one(current)
            current = [a - b for a, b in zip(current, shifted)]
        return NumericalPolynomial(out)

    @staticmethod
    def shifted_binomial(c, m):
        """The polynomial C(h - c + m, m) in the binomial basis."""
        coeffs = [Fraction(1)]
        for j in range(1, m + 1):
            # multiply by (h + j - c)
            new = [Fraction(0)] * (len(coeffs) + 1)
            for k, a in enumerate(coeffs):
                new[k + 1] += a
                new[k] += a * (j - c)
            coeffs = new
        coeffs = [a / math.factorial(m) for a in coeffs]
        return NumericalPolynomial.from_monomial_coeffs(coeffs)

    # -- queries -----------------------------------------------------------

    def is_zero(self):
        return not self.coeffs

    @property
    def degree(self):
        """Degree, with the zero polynomial assigned degree 0 by convention."""
        return len(self.coeffs) - 1 if self.coeffs else 0

    def leading_coeff(self):
        return self.coeffs[-1] if self.coeffs else 0

    def eval(self, h):
        return sum(c * binomial_eval(h, i) for i, c in enumerate(self.coeffs))

    # -- arithmetic -----------------------------------------------------------

    def _padded(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return a, b

    def __add__(self, other):
        a, b = self._padded(other)
        return NumericalPolynomial(x + y for x, y in zip(a, b))

    def __sub__(self, other):
        a, b = self._padded(other)
        return NumericalPolynomial(x - y for x, y in zip(a, b))

    def __neg__(self):
        return NumericalPolynomial(-c for c in self.coeffs)

    def scale(self, k):
        return NumericalPolynomial(k * c for c in self.coeffs)

    def __eq__(self, other):
        return isinstance(other, NumericalPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def eventually_leq(self, other):
        """Eventual-domination order: compare leading coefficients of the
        difference, consistent with evaluation at all large h."""
        diff = other - self
        return diff.is_zero() or diff.leading_coeff() > 0

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if i == 0:
                parts.append(str(c))
            else:
                parts.append(f"{c}*C(h+{i},{i})")
        return " + ".join(parts)

    def __repr__(self):
        return f"NumericalPolynomial({self})"


def type_and_dim(omega):
    """Degree and leading binomial coefficient; the zero polynomial has
    both equal to zero by convention."""
    if omega.is_zero():
        return 0, 0
    return omega.degree, omega.leading_coeff()


class LeaderSet:
    """Per indeterminate, an antichain of leader multi-indices in N^m.

    Dominated leaders are pruned at construction, so the stored vectors
    form antichains under the componentwise order.
    """

    __slots__ = ("m", "leaders")

    def __init__(self, m, leaders):
        self.m = int(m)
        cleaned = []
        for vectors in leaders:
            vecs = []
            for v in vectors:
                v = tuple(int(e) for e in v)
                if len(v) != self.m:
                    raise DimensionMismatch(
                        f"leader {v} has length {len(v)}, expected {self.m}"
                    )
                if any(e < 0 for e in v):
                    raise ValueError(f"leader {v} has a negative entry")
                vecs.append(v)
            antichain = []
            for v in sorted(set(vecs), key=lambda x: (sum(x), x)):
                if not any(_dominates(v, w) for w in antichain):
                    antichain.append(v)
            cleaned.append(tuple(antichain))
        self.leaders = tuple(cleaned)

    @property
    def n_inds(self):
        return len(self.leaders)

    def max_order(self):
        return max(
            (sum(v) for vectors in self.leaders for v in vectors), default=0
        )

    def exactness_order(self):
        """Smallest bound from which the inclusion-exclusion polynomial is
        guaranteed to match the enumeration: the maximum order of a
        componentwise join of leaders (the count function is not
        polynomial below it)."""
        worst = 0
        for vectors in self.leaders:
            for size in range(1, len(vectors) + 1):
                for subset in itertools.combinations(vectors, size):
                    join = tuple(max(v[k] for v in subset) for k in range(self.m))
                    worst = max(worst, sum(join))
        return worst

    def __repr__(self):
        return f"LeaderSet(m={self.m}, {list(self.leaders)})"


def _dominates(v, w):
    """True when v >= w componentwise (v lies in the cone of w)."""
    return all(a >= b for a, b in zip(v, w))


def dim_poly(leaders, m=None):
    """Dimension polynomial of a leader set by inclusion-exclusion.

    For each indeterminate the contribution is
    sum over subsets S of the leaders of (-1)^|S| C(h - |max(S)| + m, m);
    exact for h at least the maximum combined order of a leader subset.
    """
    if m is None:
        m = leaders.m
    if m != leaders.m:
        raise DimensionMismatch(f"leader set has m={leaders.m}, given m={m}")
    total = NumericalPolynomial.zero()
    for vectors in leaders.leaders:
        for size in range(len(vectors) + 1):
            for subset in itertools.combinations(vectors, size):
                if subset:
                    join = tuple(max(v[k] for v in subset) for k in range(m))
                    weight = sum(join)
                else:
                    weight = 0
                term = NumericalPolynomial.shifted_binomial(weight, m)
                if size % 2:
                    total = total - term
                else:
                    total = total + term
    return total


def _multi_indices(m, h):
    if m == 0:
        yield ()
        return
    for total in range(h + 1):
        for cuts in itertools.combinations(range(total + m - 1), m - 1):
            out = []
            prev = -1
            for c in cuts:
                out.append(c - prev - 1)
                prev = c
            out.append(total + m - 2 - prev)
            yield tuple(out)


def brute_force_count(leaders, h):
    """Direct enumeration of free derivatives of order at most h; the
    independent oracle for :func:`dim_poly`."""
    if h < 0:
        raise ValueError("order bound must be nonnegative")
    count = 0
    for vectors in leaders.leaders:
        for e in _multi_indices(leaders.m, h):
            if not any(_dominates(e, v) for v in vectors):
                count += 1
    return count


def sharp_leaders(base, r, dd_positions=None):
    """Leader set of the sharp system when the section has order at most
    one: the base leaders embedded into the delta slots plus one order-one
    leader per relative direction and indeterminate."""
    m = base.m + r
    if dd_positions is None:
        dd_positions = tuple(range(r))
    dd_positions = tuple(dd_positions)
    if len(dd_positions) != r:
        raise DimensionMismatch("dd position count differs from r")
    delta_slots = [k for k in range(m) if k not in set(dd_positions)]
    if len(delta_slots) != base.m:
        raise DimensionMismatch("dd positions leave the wrong number of delta slots")
    out = []
    for vectors in base.leaders:
        vecs = []
        for v in vectors:
            vec = [0] * m
            for slot, e in zip(delta_slots, v):
                vec[slot] = e
            vecs.append(tuple(vec))
        for p in dd_positions:
            unit = [0] * m
            unit[p] = 1
            vecs.append(tuple(unit))
        out.append(vecs)
    return LeaderSet(m, out)


def sharp_bound_check(base, r, mu, H, dd_positions=None):
    """Numerical verification of the sharp-point dimension bound.

    Checks omega_sharp(h) <= omega_V(mu h) for h = 0..H by enumeration and
    compares the degrees of the two polynomials.  For sections of order at
    most one the sharp side uses the leader-cone closed form; higher-order
    sections fall back to the rewrite-closure bound (free delta
    multi-indices of order up to mu*h).
    """
    section = CheckSection("sharp dimension bound")
    omega_v = dim_poly(base)
    sharp = sharp_leaders(base, r, dd_positions)
    omega_sharp = dim_poly(sharp)
    closed_form = mu <= 1
    if not closed_form:
        section.note(
            "section order exceeds one: sharp counts use the rewrite-closure "
            "bound (free delta multi-indices of order <= mu*h)"
        )
    for h in range(H + 1):
        if closed_form:
            sharp_count = brute_force_count(sharp, h)
        else:
            sharp_count = brute_force_count(base, mu * h)
        v_count = brute_force_count(base, mu * h)
        section.add(
            f"h = {h}",
            Status.PASS if sharp_count <= v_count else Status.FAIL,
            detail=f"sharp {sharp_count} <= base {v_count}",
        )
    t_sharp, d_sharp = type_and_dim(omega_sharp)
    t_v, d_v = type_and_dim(omega_v)
    section.add(
        "type equality",
        Status.PASS if t_sharp == t_v else Status.FAIL,
        detail=f"sharp type {t_sharp} (typical dim {d_sharp}), base type {t_v} (typical dim {d_v})",
    )
    section.note(f"omega_sharp = {omega_sharp}")
    section.note(f"omega_V = {omega_v}")
    return section


def leaders_of(aset, delta_positions):
    """Project the leaders of a characteristic set onto the delta slots."""
    ring = aset.ring
    m_all = len(ring.field.derivations)
    delta_positions = sorted(delta_positions)
    vectors = [[] for _ in ring.inds]
    for leader in aset.leaders:
        for k, e in enumerate(leader.orders):
            if e and k not in delta_positions:
                raise ValueError(
                    "characteristic set leader uses a derivative outside delta"
                )
        vectors[leader.ind].append(tuple(leader.orders[k] for k in delta_positions))
    return LeaderSet(len(delta_positions), vectors)
