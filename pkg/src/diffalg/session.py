"""Line-oriented session files: named declarations feeding the CLI.

A session declares exactly one coefficient field followed by any number of
named objects.  Blocks are opened by a keyword line and closed by ``end``;
single-line declarations bind pairs.  Expressions use the shared grammar.

    field
      generator t
      derivation dt delta
      derivation dw dd
      rule dt(t) = 1
      ...
    end

    variety V
      vars x y
      equation x*y - 1
      prime
    end

    group G
      vars x y
      mul x*x_2, y + y_2
      inv 1/x, -y
      identity 1, 0
    end

    section s on V
      fiber dw: alpha*x, -alpha*y
    end

    dvariety DV = (V, s)
    dgroup DG = (G, s)
    point P = E, 2*w
    taupoint A on G = 1, 0 | 0, 0 | 2*t, 2

    matrices M
      matrix dw [[t/w]]
    end

    leaders L
      derivations 2
      ind x: (0,2) (1,0)
      ind y: (0,0)
    end
"""

from __future__ import annotations

import re

from .coeffield import DD, DELTA, declare_field
from .diffpoly import DiffRing
from .dgroup import LinearSystem, RationalGroupLaw, RelativeDGroup
from .dvariety import RelativeDVariety
from .errors import DiffAlgError, ParseError, SessionError
from .kolchin import LeaderSet
from .parsing import split_tuple
from .reduction import AutoreducedSet

_FIBER_NAME = re.compile(r"u\d+_\d+\Z")
_VECTOR = re.compile(r"\(([^()]*)\)")


class VarietyDecl:
    __slots__ = ("name", "ring", "presentation")

    def __init__(self, name, ring, presentation):
        self.name = name
        self.ring = ring
        self.presentation = presentation


class GroupDecl:
    __slots__ = ("name", "law", "presentation")

    def __init__(self, name, law, presentation):
        self.name = name
        self.law = law
        self.presentation = presentation

    @property
    def ring(self):
        return self.law.ring


class SectionDecl:
    __slots__ = ("name", "on", "fibers")

    def __init__(self, name, on, fibers):
        self.name = name
        self.on = on
        self.fibers = fibers  # dict: derivation name -> tuple of DiffRational


class TauPointDecl:
    __slots__ = ("name", "on", "point")

    def __init__(self, name, on, point):
        self.name = name
        self.on = on
        self.point = point


class Session:
    """Parsed session contents, keyed by declaration name."""

    def __init__(self):
        self.field = None
        self.varieties = {}
        self.groups = {}
        self.sections = {}
        self.dvarieties = {}
        self.dgroups = {}
        self.points = {}
        self.taupoints = {}
        self.matrices = {}
        self.leaders = {}
        self._names = set()

    def _bind(self, kind, name, line):
        if name in self._names:
            raise SessionError(f"line {line}: name {name!r} is already declared")
        self._names.add(name)

    def presentation_of(self, name):
        if name in self.varieties:
            return self.varieties[name].presentation
        if name in self.groups:
            return self.groups[name].presentation
        raise SessionError(f"unknown variety or group {name!r}")

    def ring_of(self, name):
        if name in self.varieties:
            return self.varieties[name].ring
        if name in self.groups:
            return self.groups[name].ring
        raise SessionError(f"unknown variety or group {name!r}")

    def assert_prime(self, name):
        """Override the primality assertion of a named presentation,
        propagating into already-bound D-varieties and D-groups."""
        if name in self.varieties:
            decl = self.varieties[name]
        elif name in self.groups:
            decl = self.groups[name]
        else:
            raise SessionError(f"unknown variety or group {name!r}")
        old = decl.presentation
        new = old.with_prime(True)
        decl.presentation = new
        for dv in list(self.dvarieties.values()) + [
            g.dvariety for g in self.dgroups.values()
        ]:
            if dv.variety is old:
                dv.variety = new


def _strip(line):
    if "#" in line:
        line = line.split("#", 1)[0]
    return line.strip()


def load_session(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_session(fh.read())


def parse_session(text):
    session = Session()
    lines = text.splitlines()
    i = 0
    n = len(lines)

    def error(lineno, message):
        return SessionError(f"line {lineno}: {message}")

    def expr_error(lineno, exc):
        if isinstance(exc, ParseError):
            return SessionError(f"line {lineno}, column {exc.column}: {exc.args[0].split(': ', 1)[-1]}")
        return SessionError(f"line {lineno}: {exc}")

    while i < n:
        raw = lines[i]
        lineno = i + 1
        line = _strip(raw)
        i += 1
        if not line:
            continue
        head = line.split()
        kw = head[0]

        if kw == "field":
            if session.field is not None:
                raise error(lineno, "a session declares exactly one field")
            i = _parse_field(session, lines, i, error)
        elif kw == "variety":
            if len(head) != 2:
                raise error(lineno, "usage: variety NAME")
            i = _parse_variety(session, head[1], lines, i, lineno, error, expr_error)
        elif kw == "group":
            if len(head) != 2:
                raise error(lineno, "usage: group NAME")
            i = _parse_group(session, head[1], lines, i, lineno, error, expr_error)
        elif kw == "section":
            m = re.match(r"section\s+(\w+)\s+on\s+(\w+)\s*\Z", line)
            if not m:
                raise error(lineno, "usage: section NAME on OBJECT")
            i = _parse_section(session, m.group(1), m.group(2), lines, i, lineno, error, expr_error)
        elif kw == "dvariety":
            m = re.match(r"dvariety\s+(\w+)\s*=\s*\(\s*(\w+)\s*,\s*(\w+)\s*\)\s*\Z", line)
            if not m:
                raise error(lineno, "usage: dvariety NAME = (VARIETY, SECTION)")
            _bind_dvariety(session, m.group(1), m.group(2), m.group(3), lineno, error)
        elif kw == "dgroup":
            m = re.match(r"dgroup\s+(\w+)\s*=\s*\(\s*(\w+)\s*,\s*(\w+)\s*\)\s*\Z", line)
            if not m:
                raise error(lineno, "usage: dgroup NAME = (GROUP, SECTION)")
            _bind_dgroup(session, m.group(1), m.group(2), m.group(3), lineno, error)
        elif kw == "point":
            m = re.match(r"point\s+(\w+)\s*=\s*(.+)\Z", line)
            if not m:
                raise error(lineno, "usage: point NAME = expr, expr, ...")
            name = m.group(1)
            session._bind("point", name, lineno)
            try:
                session.points[name] = tuple(
                    session.field.parse(part) for part in split_tuple(m.group(2))
                )
            except DiffAlgError as exc:
                raise expr_error(lineno, exc) from None
        elif kw == "taupoint":
            m = re.match(r"taupoint\s+(\w+)\s+on\s+(\w+)\s*=\s*(.+)\Z", line)
            if not m:
                raise error(lineno, "usage: taupoint NAME on OBJECT = base | fiber | ...")
            _bind_taupoint(session, m.group(1), m.group(2), m.group(3), lineno, error, expr_error)
        elif kw == "matrices":
            if len(head) != 2:
                raise error(lineno, "usage: matrices NAME")
            i = _parse_matrices(session, head[1], lines, i, lineno, error, expr_error)
        elif kw == "leaders":
            if len(head) != 2:
                raise error(lineno, "usage: leaders NAME")
            i = _parse_leaders(session, head[1], lines, i, lineno, error)
        else:
            raise error(lineno, f"unknown declaration {kw!r}")

    if session.field is None:
        raise SessionError("session declares no field")
    return session


def _require_field(session, lineno, error):
    if session.field is None:
        raise error(lineno, "the field block must come first")
    return session.field


def _parse_field(session, lines, i, error):
    generators = []
    derivations = []
    table = {}
    n = len(lines)
    while i < n:
        lineno = i + 1
        line = _strip(lines[i])
        i += 1
        if not line:
            continue
        if line == "end":
            try:
                session.field = declare_field(generators, derivations, table)
            except DiffAlgError as exc:
                raise SessionError(f"field block: {exc}") from None
            return i
        head = line.split()
        if head[0] == "generator" and len(head) == 2:
            generators.append(head[1])
        elif head[0] == "derivation" and len(head) == 3:
            kind = head[2].lower()
            if kind not in (DD, DELTA):
                raise error(lineno, f"derivation class must be 'dd' or 'delta', got {head[2]!r}")
            derivations.append((head[1], kind))
        elif head[0] == "rule":
            m = re.match(r"rule\s+(\w+)\s*\(\s*(\w+)\s*\)\s*=\s*(.+)\Z", line)
            if not m:
                raise error(lineno, "usage: rule DERIVATION(GENERATOR) = expr")
            table[(m.group(1), m.group(2))] = m.group(3)
        else:
            raise error(lineno, f"unexpected field line {line!r}")
    raise error(len(lines), "field block is not closed by 'end'")


def _check_vars(names, lineno, error):
    for name in names:
        if _FIBER_NAME.match(name):
            raise error(
                lineno,
                f"indeterminate {name!r} collides with the fiber naming scheme u<i>_<j>",
            )


def _parse_equations(ring, raw_equations, error, expr_error):
    gens = []
    for lineno, text in raw_equations:
        try:
            value = ring.parse(text)
        except DiffAlgError as exc:
            raise expr_error(lineno, exc) from None
        if not value.den.is_const():
            raise error(lineno, "equations must be polynomial")
        gens.append(value.num)
    return gens


def _parse_variety(session, name, lines, i, open_line, error, expr_error):
    field = _require_field(session, open_line, error)
    session._bind("variety", name, open_line)
    vars_ = None
    equations = []
    prime = False
    n = len(lines)
    while i < n:
        lineno = i + 1
        line = _strip(lines[i])
        i += 1
        if not line:
            continue
        if line == "end":
            if vars_ is None:
                raise error(open_line, "variety block declares no vars")
            ring = DiffRing(field, vars_)
            gens = _parse_equations(ring, equations, error, expr_error)
            try:
                aset = AutoreducedSet(gens, prime=prime, ring=ring)
            except (ValueError, DiffAlgError) as exc:
                raise error(open_line, f"presentation is not autoreduced: {exc}") from None
            session.varieties[name] = VarietyDecl(name, ring, aset)
            return i
        head = line.split()
        if head[0] == "vars":
            vars_ = tuple(head[1:])
            _check_vars(vars_, lineno, error)
        elif head[0] == "equation":
            equations.append((lineno, line[len("equation"):].strip()))
        elif line == "prime":
            prime = True
        else:
            raise error(lineno, f"unexpected variety line {line!r}")
    raise error(open_line, "variety block is not closed by 'end'")


def _parse_group(session, name, lines, i, open_line, error, expr_error):
    field = _require_field(session, open_line, error)
    session._bind("group", name, open_line)
    vars_ = None
    mul = inv = identity = None
    equations = []
    prime = False
    n = len(lines)
    while i < n:
        lineno = i + 1
        line = _strip(lines[i])
        i += 1
        if not line:
            continue
        if line == "end":
            if vars_ is None:
                raise error(open_line, "group block declares no vars")
            if mul is None or inv is None or identity is None:
                raise error(open_line, "group block needs mul, inv and identity")
            ring = DiffRing(field, vars_)
            try:
                law = RationalGroupLaw(ring, mul, inv, identity)
            except DiffAlgError as exc:
                raise error(open_line, str(exc)) from None
            gens = _parse_equations(ring, equations, error, expr_error)
            try:
                aset = AutoreducedSet(gens, prime=prime, ring=ring)
            except (ValueError, DiffAlgError) as exc:
                raise error(open_line, f"presentation is not autoreduced: {exc}") from None
            session.groups[name] = GroupDecl(name, law, aset)
            return i
        head = line.split()
        if head[0] == "vars":
            vars_ = tuple(head[1:])
            _check_vars(vars_, lineno, error)
        elif head[0] == "mul":
            mul = split_tuple(line[len("mul"):].strip())
        elif head[0] == "inv":
            inv = split_tuple(line[len("inv"):].strip())
        elif head[0] == "identity":
            identity = split_tuple(line[len("identity"):].strip())
        elif head[0] == "equation":
            equations.append((lineno, line[len("equation"):].strip()))
        elif line == "prime":
            prime = True
        else:
            raise error(lineno, f"unexpected group line {line!r}")
    raise error(open_line, "group block is not closed by 'end'")


def _parse_section(session, name, on, lines, i, open_line, error, expr_error):
    field = _require_field(session, open_line, error)
    session._bind("section", name, open_line)
    ring = session.ring_of(on)
    fibers = {}
    n = len(lines)
    while i < n:
        lineno = i + 1
        line = _strip(lines[i])
        i += 1
        if not line:
            continue
        if line == "end":
            dd_names = [d.name for d in field.dd()]
            missing = [d for d in dd_names if d not in fibers]
            if missing:
                raise error(
                    open_line,
                    f"section lacks fiber tuples for relative direction(s) {', '.join(missing)}",
                )
            session.sections[name] = SectionDecl(name, on, fibers)
            return i
        m = re.match(r"fiber\s+(\w+)\s*:\s*(.+)\Z", line)
        if not m:
            raise error(lineno, "usage: fiber DERIVATION: expr, expr, ...")
        dname = m.group(1)
        if dname not in {d.name for d in field.dd()}:
            raise error(lineno, f"{dname!r} is not a relative (dd) derivation")
        parts = split_tuple(m.group(2))
        if len(parts) != len(ring.inds):
            raise error(
                lineno,
                f"fiber tuple has {len(parts)} components for {len(ring.inds)} coordinates",
            )
        try:
            fibers[dname] = tuple(ring.parse(p) for p in parts)
        except DiffAlgError as exc:
            raise expr_error(lineno, exc) from None
    raise error(open_line, "section block is not closed by 'end'")


def _section_tuples(session, on, section_name, lineno, error):
    decl = session.sections.get(section_name)
    if decl is None:
        raise error(lineno, f"unknown section {section_name!r}")
    if decl.on != on:
        raise error(lineno, f"section {section_name!r} is declared on {decl.on!r}, not {on!r}")
    field = session.field
    return tuple(decl.fibers[d.name] for d in field.dd())


def _bind_dvariety(session, name, vname, sname, lineno, error):
    session._bind("dvariety", name, lineno)
    if vname not in session.varieties:
        raise error(lineno, f"unknown variety {vname!r}")
    decl = session.varieties[vname]
    section = _section_tuples(session, vname, sname, lineno, error)
    try:
        session.dvarieties[name] = RelativeDVariety(decl.presentation, section)
    except DiffAlgError as exc:
        raise error(lineno, str(exc)) from None


def _bind_dgroup(session, name, gname, sname, lineno, error):
    session._bind("dgroup", name, lineno)
    if gname not in session.groups:
        raise error(lineno, f"unknown group {gname!r}")
    decl = session.groups[gname]
    section = _section_tuples(session, gname, sname, lineno, error)
    try:
        dv = RelativeDVariety(decl.presentation, section)
        session.dgroups[name] = RelativeDGroup(dv, decl.law)
    except DiffAlgError as exc:
        raise error(lineno, str(exc)) from None


def _bind_taupoint(session, name, on, rest, lineno, error, expr_error):
    from .prolong import TauPoint

    session._bind("taupoint", name, lineno)
    ring = session.ring_of(on)
    blocks = [b.strip() for b in rest.split("|")]
    field = session.field
    expected = len(field.dd()) + 1
    if len(blocks) != expected:
        raise error(
            lineno,
            f"taupoint needs a base tuple plus {expected - 1} fiber tuple(s), got {len(blocks)}",
        )
    parsed = []
    for block in blocks:
        parts = split_tuple(block)
        if len(parts) != len(ring.inds):
            raise error(
                lineno,
                f"tuple has {len(parts)} components for {len(ring.inds)} coordinates",
            )
        try:
            parsed.append(tuple(field.parse(p) for p in parts))
        except DiffAlgError as exc:
            raise expr_error(lineno, exc) from None
    session.taupoints[name] = TauPointDecl(name, on, TauPoint(parsed[0], parsed[1:]))


def _parse_matrix_literal(field, text, lineno, error, expr_error):
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise error(lineno, "matrix literal must be a nested array [[...],[...]]")
    rows_raw = split_tuple(text[1:-1])
    rows = []
    for row in rows_raw:
        row = row.strip()
        if not (row.startswith("[") and row.endswith("]")):
            raise error(lineno, "matrix rows must be bracketed")
        try:
            rows.append(tuple(field.parse(p) for p in split_tuple(row[1:-1])))
        except DiffAlgError as exc:
            raise expr_error(lineno, exc) from None
    return tuple(rows)


def _parse_matrices(session, name, lines, i, open_line, error, expr_error):
    field = _require_field(session, open_line, error)
    session._bind("matrices", name, open_line)
    by_name = {}
    n = len(lines)
    while i < n:
        lineno = i + 1
        line = _strip(lines[i])
        i += 1
        if not line:
            continue
        if line == "end":
            dd = field.dd()
            missing = [d.name for d in dd if d.name not in by_name]
            if missing:
                raise error(
                    open_line, f"matrices block lacks matrix for {', '.join(missing)}"
                )
            try:
                system = LinearSystem(field, [by_name[d.name] for d in dd])
            except DiffAlgError as exc:
                raise error(open_line, str(exc)) from None
            session.matrices[name] = system
            return i
        m = re.match(r"matrix\s+(\w+)\s+(.+)\Z", line)
        if not m:
            raise error(lineno, "usage: matrix DERIVATION [[...],[...]]")
        dname = m.group(1)
        if dname not in {d.name for d in field.dd()}:
            raise error(lineno, f"{dname!r} is not a relative (dd) derivation")
        by_name[dname] = _parse_matrix_literal(field, m.group(2), lineno, error, expr_error)
    raise error(open_line, "matrices block is not closed by 'end'")


def _parse_leaders(session, name, lines, i, open_line, error):
    field = _require_field(session, open_line, error)
    session._bind("leaders", name, open_line)
    m_count = len(field.derivations)
    vectors = []
    names = []
    n = len(lines)
    while i < n:
        lineno = i + 1
        line = _strip(lines[i])
        i += 1
        if not line:
            continue
        if line == "end":
            try:
                session.leaders[name] = LeaderSet(m_count, vectors)
            except DiffAlgError as exc:
                raise error(open_line, str(exc)) from None
            return i
        head = line.split()
        if head[0] == "derivations" and len(head) == 2:
            m_count = int(head[1])
        elif head[0] == "ind":
            m = re.match(r"ind\s+(\w+)\s*:\s*(.*)\Z", line)
            if not m:
                raise error(lineno, "usage: ind NAME: (a,b) (c,d) ...")
            names.append(m.group(1))
            vecs = []
            for grp in _VECTOR.findall(m.group(2)):
                entries = [p.strip() for p in grp.split(",") if p.strip()]
                vecs.append(tuple(int(p) for p in entries))
            vectors.append(vecs)
        else:
            raise error(lineno, f"unexpected leaders line {line!r}")
    raise error(open_line, "leaders block is not closed by 'end'")
