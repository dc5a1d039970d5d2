"""Three-valued check results shared by the verification operations.

A check row records one residual test; sections aggregate rows.  The
pass/fail/inconclusive split mirrors ideal membership: reduction to zero
passes, a nonzero remainder against a prime characteristic set fails, and
a nonzero remainder without the primality assertion is inconclusive.
"""

from __future__ import annotations

import enum


class Status(enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"
    ERROR = "error"

    def __str__(self):
        return self.value


def aggregate(statuses):
    statuses = list(statuses)
    if any(s is Status.ERROR for s in statuses):
        return Status.ERROR
    if any(s is Status.FAIL for s in statuses):
        return Status.FAIL
    if any(s is Status.INCONCLUSIVE for s in statuses):
        return Status.INCONCLUSIVE
    return Status.PASS


def status_of_verdict(verdict):
    from .reduction import Verdict

    return {
        Verdict.IN_IDEAL: Status.PASS,
        Verdict.NOT_IN_IDEAL: Status.FAIL,
        Verdict.UNKNOWN: Status.INCONCLUSIVE,
    }[verdict]


class CheckRow:
    __slots__ = ("label", "status", "detail", "certificate")

    def __init__(self, label, status, detail="", certificate=None):
        self.label = label
        self.status = status
        self.detail = detail
        self.certificate = certificate

    def as_dict(self):
        out = {"label": self.label, "status": str(self.status)}
        if self.detail:
            out["detail"] = self.detail
        if self.certificate is not None:
            out["certificate"] = self.certificate
        return out

    def __repr__(self):
        return f"CheckRow({self.label}: {self.status})"


class CheckSection:
    __slots__ = ("title", "rows", "notes")

    def __init__(self, title, rows=None, notes=None):
        self.title = title
        self.rows = list(rows or [])
        self.notes = list(notes or [])

    def add(self, label, status, detail="", certificate=None):
        self.rows.append(CheckRow(label, status, detail, certificate))

    def note(self, text):
        self.notes.append(text)

    @property
    def status(self):
        if not self.rows:
            return Status.PASS
        return aggregate(r.status for r in self.rows)

    def as_dict(self):
        return {
            "title": self.title,
            "status": str(self.status),
            "rows": [r.as_dict() for r in self.rows],
            "notes": list(self.notes),
        }

    def __repr__(self):
        return f"CheckSection({self.title}: {self.status})"
