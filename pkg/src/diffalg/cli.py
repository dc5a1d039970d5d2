"""Command dispatch over session files, with deterministic reports.

Commands: field-check, prolong V, dvariety-check DV, dgroup-check DG,
logderiv DG [--at P | --symbolic], integrable DG ALPHA [--witness P],
ppv M, kolchin L | kolchin sharp:DV, reduce EXPR mod V.

Exit codes: 0 pass, 1 fail, 2 inconclusive, 3 error.  Reports are
byte-identical for identical inputs except for the trailing timing field.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .coeffield import coeff_derive
from .dgroup import (
    check_crossed_hom,
    hom_check,
    integrable_point_check,
    law_check,
    linear_integrability,
    log_derivative,
)
from .dvariety import check_integrability, validate_section
from .errors import DiffAlgError, SessionError
from .kolchin import (
    brute_force_count,
    dim_poly,
    leaders_of,
    sharp_bound_check,
    sharp_leaders,
    type_and_dim,
)
from .prolong import delta_positions, prolongation_gens
from .reduction import membership_verdict
from .reports import CheckSection, Status, aggregate, status_of_verdict
from .session import load_session


class Flags:
    __slots__ = ("max_order", "check_assoc", "at", "witness", "symbolic", "fmt")

    def __init__(self, max_order=6, check_assoc=False, at=None, witness=None,
                 symbolic=False, fmt="text"):
        self.max_order = max_order
        self.check_assoc = check_assoc
        self.at = at
        self.witness = witness
        self.symbolic = symbolic
        self.fmt = fmt


class Report:
    """Structured command result; rendering is deterministic apart from
    the timing line, which is always last."""

    def __init__(self, command, sections=None, payload=None, status=None):
        self.command = command
        self.sections = list(sections or [])
        self.payload = dict(payload or {})
        self._status = status
        self.time_ms = 0

    @property
    def status(self):
        if self._status is not None:
            return self._status
        if not self.sections:
            return Status.PASS
        return aggregate(s.status for s in self.sections)

    def exit_code(self):
        return {
            Status.PASS: 0,
            Status.FAIL: 1,
            Status.INCONCLUSIVE: 2,
            Status.ERROR: 3,
        }[self.status]

    def to_text(self):
        out = [f"command: {self.command}", f"status: {self.status}"]
        for key in sorted(self.payload):
            value = self.payload[key]
            if isinstance(value, (list, tuple)):
                out.append(f"{key}:")
                for item in value:
                    out.append(f"  - {item}")
            elif isinstance(value, dict):
                out.append(f"{key}:")
                for sub in sorted(value):
                    entry = value[sub]
                    if isinstance(entry, (list, tuple)):
                        out.append(f"  {sub}: " + ", ".join(str(x) for x in entry))
                    else:
                        out.append(f"  {sub}: {entry}")
            else:
                out.append(f"{key}: {value}")
        for section in self.sections:
            out.append(f"[{section.title}] {section.status}")
            for row in section.rows:
                line = f"  {row.label}: {row.status}"
                if row.detail:
                    line += f" ({row.detail})"
                out.append(line)
                if row.certificate is not None:
                    out.append(f"    certificate: {json.dumps(row.certificate, sort_keys=True)}")
            for note in section.notes:
                out.append(f"  note: {note}")
        out.append(f"time_ms: {self.time_ms}")
        return "\n".join(out) + "\n"

    def to_json(self):
        doc = {
            "command": self.command,
            "status": str(self.status),
            "payload": self.payload,
            "sections": [s.as_dict() for s in self.sections],
            "time_ms": self.time_ms,
        }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"

    def render(self, fmt):
        return self.to_json() if fmt == "structured" else self.to_text()


def _cmd_field_check(session, args, flags):
    field = session.field
    section = CheckSection("derivation table commutation")
    for g in field.generators:
        gel = field.gen_element(g)
        for a, d1 in enumerate(field.derivations):
            for d2 in field.derivations[a + 1:]:
                residual = coeff_derive(d1, coeff_derive(d2, gel)) - coeff_derive(
                    d2, coeff_derive(d1, gel)
                )
                section.add(
                    f"[{d1.name}, {d2.name}] on {g}",
                    Status.PASS if residual.is_zero() else Status.FAIL,
                    detail=f"residual {residual}",
                )
    if not field.generators:
        section.note("no generators declared; table is trivially commutative")
    payload = {
        "generators": list(field.generators),
        "derivations": [f"{d.name} ({d.kind})" for d in field.derivations],
    }
    return Report("field-check", [section], payload)


def _cmd_prolong(session, args, flags):
    if len(args) != 1:
        raise SessionError("usage: prolong VARIETY")
    name = args[0]
    if name in session.varieties:
        pres = session.varieties[name].presentation
    elif name in session.groups:
        pres = session.groups[name].presentation
    else:
        raise SessionError(f"unknown variety or group {name!r}")
    result = prolongation_gens(pres)
    section = CheckSection("lifted generators")
    for k, gen in enumerate(result.all_generators):
        section.add(f"generator {k}", Status.PASS, detail=str(gen))
    payload = {
        "base_generators": [str(g) for g in pres.elements],
        "lifted_generators": [
            str(g) for block in result.lifted for g in block
        ],
        "fiber_variables": [
            result.ring.inds[i] for block in result.fiber_blocks for i in block
        ],
    }
    return Report(f"prolong {name}", [section], payload)


def _get_dvariety(session, name):
    if name in session.dvarieties:
        return session.dvarieties[name]
    if name in session.dgroups:
        return session.dgroups[name].dvariety
    raise SessionError(f"unknown dvariety {name!r}")


def _get_dgroup(session, name):
    if name in session.dgroups:
        return session.dgroups[name]
    raise SessionError(f"unknown dgroup {name!r}")


def _cmd_dvariety_check(session, args, flags):
    if len(args) != 1:
        raise SessionError("usage: dvariety-check DVARIETY")
    dv = _get_dvariety(session, args[0])
    sections = [validate_section(dv), check_integrability(dv)]
    payload = {"mu": dv.mu}
    return Report(f"dvariety-check {args[0]}", sections, payload)


def _cmd_dgroup_check(session, args, flags):
    if len(args) != 1:
        raise SessionError("usage: dgroup-check DGROUP")
    group = _get_dgroup(session, args[0])
    sections = [
        law_check(group, check_assoc=flags.check_assoc),
        hom_check(group),
        validate_section(group.dvariety),
        check_integrability(group.dvariety),
        check_crossed_hom(group),
    ]
    return Report(f"dgroup-check {args[0]}", sections)


def _cmd_logderiv(session, args, flags):
    if len(args) != 1:
        raise SessionError("usage: logderiv DGROUP [--at POINT | --symbolic]")
    group = _get_dgroup(session, args[0])
    if flags.at is not None:
        if flags.at not in session.points:
            raise SessionError(f"unknown point {flags.at!r}")
        g = session.points[flags.at]
        mode = f"at {flags.at}"
    else:
        g = None
        mode = "symbolic"
    ell = log_derivative(group, g)
    section = CheckSection("logarithmic derivative")
    for j, entry in enumerate(ell.base):
        section.add(f"base component {j}", Status.PASS, detail=str(entry))
    for i, D in enumerate(group.dd):
        for j, entry in enumerate(ell.fibers[i]):
            section.add(f"fiber {D.name}, component {j}", Status.PASS, detail=str(entry))
    payload = {
        "mode": mode,
        "base": [str(e) for e in ell.base],
        "fibers": {
            D.name: [str(e) for e in ell.fibers[i]] for i, D in enumerate(group.dd)
        },
    }
    return Report(f"logderiv {args[0]}", [section], payload)


def _cmd_integrable(session, args, flags):
    if len(args) != 2:
        raise SessionError("usage: integrable DGROUP TAUPOINT [--witness POINT]")
    group = _get_dgroup(session, args[0])
    decl = session.taupoints.get(args[1])
    if decl is None:
        raise SessionError(f"unknown taupoint {args[1]!r}")
    witness = None
    if flags.witness is not None:
        if flags.witness not in session.points:
            raise SessionError(f"unknown point {flags.witness!r}")
        witness = session.points[flags.witness]
    report = integrable_point_check(group, decl.point, witness=witness)
    return Report(f"integrable {args[0]} {args[1]}", [report])


def _cmd_ppv(session, args, flags):
    if len(args) != 1:
        raise SessionError("usage: ppv MATRICES")
    system = session.matrices.get(args[0])
    if system is None:
        raise SessionError(f"unknown matrices block {args[0]!r}")
    section = linear_integrability(system)
    payload = {"size": system.size, "directions": [d.name for d in system.dd]}
    return Report(f"ppv {args[0]}", [section], payload)


def _kolchin_payload(omega):
    tau, dim = type_and_dim(omega)
    return {
        "omega": str(omega),
        "type": tau,
        "typical_dimension": dim,
    }


def _cmd_kolchin(session, args, flags):
    if len(args) != 1:
        raise SessionError("usage: kolchin LEADERS | kolchin sharp:DVARIETY")
    name = args[0]
    if name.startswith("sharp:"):
        dv = _get_dvariety(session, name[len("sharp:"):])
        field = session.field
        delta_pos = sorted(delta_positions(field))
        dd_pos = sorted(
            field.derivation_index(d) for d in field.dd()
        )
        base = leaders_of(dv.variety, delta_pos) if len(dv.variety) else _free_leaders(
            dv, delta_pos
        )
        sharp = sharp_leaders(base, len(dd_pos), dd_positions=_sharp_positions(delta_pos, dd_pos))
        omega = dim_poly(sharp)
        bound = sharp_bound_check(
            base,
            r=len(dd_pos),
            mu=dv.mu,
            H=flags.max_order,
            dd_positions=_sharp_positions(delta_pos, dd_pos),
        )
        payload = _kolchin_payload(omega)
        payload["omega_base"] = str(dim_poly(base))
        payload["mu"] = dv.mu
        return Report(f"kolchin {name}", [bound], payload)
    leaders = session.leaders.get(name)
    if leaders is None:
        raise SessionError(f"unknown leaders block {name!r}")
    omega = dim_poly(leaders)
    section = CheckSection("enumeration cross-check")
    start = leaders.exactness_order()
    for h in range(start, start + min(flags.max_order, 8) + 1):
        count = brute_force_count(leaders, h)
        value = omega.eval(h)
        section.add(
            f"h = {h}",
            Status.PASS if count == value else Status.FAIL,
            detail=f"polynomial {value}, enumeration {count}",
        )
    section.note(f"polynomial exact for h >= {start}; below, use the enumeration")
    return Report(f"kolchin {name}", [section], _kolchin_payload(omega))


def _free_leaders(dv, delta_pos):
    from .kolchin import LeaderSet

    return LeaderSet(len(delta_pos), [[] for _ in dv.ring.inds])


def _sharp_positions(delta_pos, dd_pos):
    """Positions of the relative directions inside the combined multi-index
    (declaration order of all derivations)."""
    order = sorted(delta_pos + dd_pos)
    return tuple(order.index(p) for p in dd_pos)


def _cmd_reduce(session, args, flags):
    if len(args) != 3 or args[1] != "mod":
        raise SessionError("usage: reduce EXPR mod VARIETY")
    pres = session.presentation_of(args[2])
    ring = session.ring_of(args[2])
    value = ring.parse(args[0])
    verdict, cert = membership_verdict(value.num, pres)
    section = CheckSection("reduction")
    section.add(
        "membership",
        status_of_verdict(verdict),
        detail=f"verdict {verdict}, remainder {cert.remainder}",
        certificate=cert.as_dict(),
    )
    payload = {
        "input": str(value),
        "remainder": str(cert.remainder),
        "verdict": str(verdict),
        "replayed": cert.verify(),
    }
    return Report(f"reduce {args[0]} mod {args[2]}", [section], payload)


_COMMANDS = {
    "field-check": _cmd_field_check,
    "prolong": _cmd_prolong,
    "dvariety-check": _cmd_dvariety_check,
    "dgroup-check": _cmd_dgroup_check,
    "logderiv": _cmd_logderiv,
    "integrable": _cmd_integrable,
    "ppv": _cmd_ppv,
    "kolchin": _cmd_kolchin,
    "reduce": _cmd_reduce,
}


def run(command, session, flags=None):
    """Execute one command against a loaded session; returns the report."""
    flags = flags or Flags()
    if isinstance(command, str):
        command = command.split()
    if not command:
        raise SessionError("no command given")
    name, args = command[0], list(command[1:])
    handler = _COMMANDS.get(name)
    if handler is None:
        raise SessionError(f"unknown command {name!r}")
    started = time.perf_counter()
    report = handler(session, args, flags)
    report.time_ms = int((time.perf_counter() - started) * 1000)
    return report


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="diffalg",
        description="Exact checks for relative prolongations, D-varieties, "
        "D-groups and Kolchin polynomials.",
    )
    parser.add_argument("--session", required=True, help="session file to load")
    parser.add_argument("--max-order", type=int, default=6, dest="max_order")
    parser.add_argument("--assert-prime", action="append", default=[], dest="assert_prime")
    parser.add_argument("--check-assoc", action="store_true", dest="check_assoc")
    parser.add_argument("--format", choices=("text", "structured"), default="text")
    parser.add_argument("--at", default=None, help="evaluate at a named point")
    parser.add_argument("--symbolic", action="store_true", help="symbolic evaluation")
    parser.add_argument("--witness", default=None, help="witness point name")
    parser.add_argument("command", help="command name")
    parser.add_argument("args", nargs="*", help="command arguments")
    ns = parser.parse_args(argv)

    flags = Flags(
        max_order=ns.max_order,
        check_assoc=ns.check_assoc,
        at=ns.at,
        witness=ns.witness,
        symbolic=ns.symbolic,
        fmt=ns.format,
    )
    try:
        session = load_session(ns.session)
        for name in ns.assert_prime:
            session.assert_prime(name)
        report = run([ns.command] + ns.args, session, flags)
    except DiffAlgError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3
    sys.stdout.write(report.render(flags.fmt))
    return report.exit_code()


if __name__ == "__main__":
    sys.exit(main())
