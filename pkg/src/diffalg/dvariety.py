"""Relative D-varieties: a presented variety together with a section of
its relative prolongation.

The section is a list of tuples s = (Id, s_1, ..., s_r), one tuple per
relative direction, each component a delta-rational function of the
coordinates.  Validation checks that every lifted generator vanishes along
the section modulo the presentation, and the integrability condition
compares the mixed relative derivatives of the section componentwise.
Verdicts are three-valued: what reduction proves, no more.
"""

from __future__ import annotations

from .coeffield import FieldElement
from .diffpoly import DiffRational, as_rational, substitute
from .errors import DimensionMismatch, NotOnVariety
from .prolong import (
    TauPoint,
    _dd_list,
    delta_positions,
    entry_derive,
    nabla,
    prolongation_ring,
    rel_derive,
)
from .reduction import membership_verdict
from .reports import CheckSection, Status, status_of_verdict


class RelativeDVariety:
    """A presentation of V together with a candidate section of its
    relative prolongation.  Construction validates shapes only; the
    section and integrability conditions are checked by the operations
    below, which report rather than raise."""

    __slots__ = ("variety", "section", "dd", "mu")

    def __init__(self, variety, section, dd=None):
        ring = variety.ring
        field = ring.field
        self.variety = variety
        self.dd = _dd_list(field, dd)
        section = tuple(tuple(as_rational(c, ring) for c in tup) for tup in section)
        if len(section) != len(self.dd):
            raise DimensionMismatch(
                f"section has {len(section)} tuples for {len(self.dd)} relative directions"
            )
        n = len(ring.inds)
        positions = delta_positions(field)
        for tup in section:
            if len(tup) != n:
                raise DimensionMismatch(
                    f"section tuple arity {len(tup)} differs from coordinate count {n}"
                )
            for comp in tup:
                if not comp.uses_only(positions):
                    raise ValueError(
                        "section components must lie in the delta subring"
                    )
        self.section = section
        order = max((c.order() for tup in section for c in tup), default=0)
        self.mu = max(1, order)

    @property
    def ring(self):
        return self.variety.ring

    def section_point(self):
        """The section as a symbolic prolongation point (x, s_1(x), ...)."""
        return TauPoint(self.ring.vars(), self.section)

    def __repr__(self):
        return f"RelativeDVariety({len(self.variety)} generators, r={len(self.dd)})"


def _section_images(dv, ext, blocks, i):
    """Images substituting the i-th fiber block by the section components."""
    images = {}
    for j in range(len(dv.ring.inds)):
        images[j] = ext.var(j)
    for j, idx in enumerate(blocks[i]):
        images[idx] = ext.lift(dv.section[i][j])
    return images


def validate_section(dv):
    """Residuals of every lifted generator along the section, reduced
    modulo the presentation; one row per (generator, direction)."""
    section = CheckSection("section residuals")
    V = dv.variety
    ring = dv.ring
    ext, blocks = prolongation_ring(ring, dv.dd)
    active = set(range(len(ring.inds)))
    for i, D in enumerate(dv.dd):
        u_of = dict(enumerate(blocks[i]))
        images = _section_images(dv, ext, blocks, i)
        for k, gen in enumerate(V.elements):
            lifted = rel_derive(D, gen, active, u_of, ext)
            residual = substitute(lifted, images)
            residual = as_rational(residual, ring)
            verdict, cert = membership_verdict(residual.num, V)
            section.add(
                f"generator {k}, direction {D.name}",
                status_of_verdict(verdict),
                detail=f"residual {residual}",
                certificate=cert.as_dict(),
            )
    if not V.elements:
        section.note("empty presentation: nothing to check")
    return section


def check_integrability(dv):
    """The mixed-derivative compatibility of the section, componentwise per
    unordered pair of relative directions; vacuous when r = 1."""
    section = CheckSection("integrability")
    ring = dv.ring
    ext, blocks = prolongation_ring(ring, dv.dd)
    active = set(range(len(ring.inds)))
    r = len(dv.dd)
    if r <= 1:
        section.note("single relative direction: condition is vacuous")
        return section
    for i in range(r):
        for j in range(r):
            if i >= j:
                continue
            Di, Dj = dv.dd[i], dv.dd[j]
            u_of_i = dict(enumerate(blocks[i]))
            u_of_j = dict(enumerate(blocks[j]))
            images_i = _section_images(dv, ext, blocks, i)
            images_j = _section_images(dv, ext, blocks, j)
            for c in range(len(ring.inds)):
                lhs = substitute(
                    rel_derive(Di, ext.lift(dv.section[j][c]), active, u_of_i, ext),
                    images_i,
                )
                rhs = substitute(
                    rel_derive(Dj, ext.lift(dv.section[i][c]), active, u_of_j, ext),
                    images_j,
                )
                residual = as_rational(lhs, ring) - as_rational(rhs, ring)
                verdict, cert = membership_verdict(residual.num, dv.variety)
                section.add(
                    f"pair ({Di.name}, {Dj.name}), component {c}",
                    status_of_verdict(verdict),
                    detail=f"residual {residual}",
                    certificate=cert.as_dict(),
                )
    return section


def sharp_member(a, dv):
    """Exact sharpness test of a concrete point: s_i(a) = D_i a for all i.

    Raises :class:`NotOnVariety` when the point fails the presentation.
    """
    ring = dv.ring
    field = ring.field
    a = tuple(field.element(v) for v in a)
    if len(a) != len(ring.inds):
        raise DimensionMismatch(
            f"point arity {len(a)} differs from coordinate count {len(ring.inds)}"
        )
    images = dict(enumerate(a))
    for k, gen in enumerate(dv.variety.elements):
        value = substitute(gen, images)
        if not value.is_zero():
            raise NotOnVariety(f"generator {k} evaluates to {value}")
    section = CheckSection("sharpness")
    for i, D in enumerate(dv.dd):
        for j in range(len(a)):
            expected = substitute(dv.section[i][j], images)
            actual = entry_derive(D, a[j])
            ok = expected == actual
            section.add(
                f"{D.name}({ring.inds[j]})",
                Status.PASS if ok else Status.FAIL,
                detail=f"derivative {actual}, section {expected}",
            )
    return section


def is_subdvariety(sub, sup):
    """Containment test: the big presentation vanishes on the small variety
    and the sections agree there."""
    section = CheckSection("subvariety")
    W = sub.variety
    ring = sub.ring
    if sup.ring != ring or len(sub.dd) != len(sup.dd):
        raise DimensionMismatch("subvariety comparison requires matching contexts")
    for k, gen in enumerate(sup.variety.elements):
        verdict, cert = membership_verdict(ring.lift(gen), W)
        section.add(
            f"generator {k} of the ambient variety",
            status_of_verdict(verdict),
            certificate=cert.as_dict(),
        )
    for i, D in enumerate(sub.dd):
        for j in range(len(ring.inds)):
            diff = sup.section[i][j] - sub.section[i][j]
            verdict, cert = membership_verdict(diff.num, W)
            section.add(
                f"section difference, {D.name}({ring.inds[j]})",
                status_of_verdict(verdict),
                detail=f"difference {diff}",
                certificate=cert.as_dict(),
            )
    return section
