"""Flat polynomial kernels shared by the coefficient field and the
differential layer.

A "flat" polynomial is a dict mapping exponent tuples (fixed width) to
nonzero Fractions.  Everything here is exact; gcd and exact division are
delegated to sympy over QQ, with fast paths that avoid the round trip for
the constant and monomial cases that dominate in practice.
"""

from __future__ import annotations

import math
from fractions import Fraction

import sympy

_SYMBOLS: list = []


def _symbols(n):
    while len(_SYMBOLS) < n:
        _SYMBOLS.append(sympy.Symbol(f"_v{len(_SYMBOLS)}"))
    return _SYMBOLS[:n]


def _to_sympy(terms, n):
    rep = {e: sympy.Rational(c.numerator, c.denominator) for e, c in terms.items()}
    return sympy.Poly.from_dict(rep, *_symbols(n), domain=sympy.QQ)


def _from_sympy(poly):
    out = {}
    for exps, coeff in poly.terms():
        out[tuple(int(v) for v in exps)] = Fraction(int(coeff.p), int(coeff.q))
    return out


def is_constant_terms(terms):
    if not terms:
        return True
    if len(terms) > 1:
        return False
    (exps,) = terms
    return not any(exps)


def mul_terms(a, b):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            key = tuple(x + y for x, y in zip(ea, eb))
            c = out.get(key, 0) + ca * cb
            if c:
                out[key] = c
            elif key in out:
                del out[key]
    return out


def _monomial_gcd(a, b, n):
    exps = [min(min(e[k] for e in a), min(e[k] for e in b)) for k in range(n)]
    return {tuple(exps): Fraction(1)}


def gcd_terms(a, b, n):
    """gcd of two flat polynomials; result normalization is left to callers."""
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    if is_constant_terms(a) or is_constant_terms(b):
        return {(0,) * n: Fraction(1)}
    if len(a) == 1 or len(b) == 1:
        return _monomial_gcd(a, b, n)
    return _from_sympy(_to_sympy(a, n).gcd(_to_sympy(b, n)))


def div_exact(a, b, n):
    """Exact division a / b; raises if the division leaves a remainder."""
    if not a:
        return {}
    if is_constant_terms(b):
        c = b[(0,) * n]
        return {e: v / c for e, v in a.items()}
    if len(b) == 1:
        ((eb, cb),) = b.items()
        out = {}
        for ea, ca in a.items():
            key = tuple(x - y for x, y in zip(ea, eb))
            if any(v < 0 for v in key):
                raise ArithmeticError("inexact monomial division")
            out[key] = ca / cb
        return out
    q, r = divmod(_to_sympy(a, n), _to_sympy(b, n))
    if not r.is_zero:
        raise ArithmeticError("inexact polynomial division")
    return _from_sympy(q)


def content_and_sign(terms, order_key):
    """Positive rational content and the sign of the leading coefficient.

    Dividing by ``content * sign`` makes the polynomial integer, coprime and
    positive on its leading term under ``order_key``.
    """
    num_gcd = 0
    den_lcm = 1
    for c in terms.values():
        num_gcd = math.gcd(num_gcd, abs(c.numerator))
        den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
    content = Fraction(num_gcd, den_lcm)
    lead = max(terms, key=order_key)
    sign = 1 if terms[lead] > 0 else -1
    return content, sign
