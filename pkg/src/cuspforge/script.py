"""Construction DSL: parse, render and execute divisor-configuration scripts.

A script declares a starting configuration in the plane and then drives the
surface engine through blow-ups, contractions, point (re)naming, assertions,
and a final read-off of the tracked curve:

    config {
      ambient p2
      tracked L degree 1
      divisor C1 degree 2
      point q { C1, L ; meets (C1,L)=2 }
    }
    blowup q -> E
    assert selfint E == -1
    blowdown E
    finalize expect degree 1 cusps []

'#' starts a line comment.  Identifiers may contain '@' and '~' after the
first character, so auto-generated point names stay addressable.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from cuspforge.invariants import CurveProfile, genus_check, normalize_multseq
from cuspforge.surface import (
    Configuration,
    DivisorRecord,
    PointRecord,
    SurfaceError,
    TrackedCurve,
    adjunction_ledger,
    blow_down,
    blow_up,
    finalize,
    to_dot,
    validate_configuration,
)


class ScriptError(Exception):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        where = f" (line {line}, column {col})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.col = col


# ---------------------------------------------------------------------------
# lexer


_TOKEN_SPEC = [
    ("comment", r"\#[^\n]*"),
    ("ws", r"[ \t\r]+"),
    ("nl", r"\n"),
    ("arrow", r"->"),
    ("eqeq", r"=="),
    ("repint", r"\d+_\d+"),
    ("int", r"-?\d+"),
    ("ident", r"[A-Za-z_][A-Za-z0-9_@~]*"),
    ("sym", r"[{}()\[\],;:=]"),
]
_LEXER = re.compile("|".join(f"(?P<{n}>{p})" for n, p in _TOKEN_SPEC))

_KEYWORDS = {
    "config", "ambient", "p2", "tracked", "divisor", "point", "degree",
    "selfint", "kdot", "meets", "blowup", "name", "meet", "blowdown",
    "assert", "multseq", "at", "finalize", "expect", "cusps",
}


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    col: int


def _tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _LEXER.match(text, pos)
        if not m:
            raise ScriptError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind == "nl":
            line += 1
            col = 1
        elif kind in ("ws", "comment"):
            col += len(value)
        else:
            if kind == "sym":
                kind = value
            elif kind == "ident" and value in _KEYWORDS:
                kind = value
            tokens.append(Token(kind, value, line, col))
            col += len(value)
        pos = m.end()
    tokens.append(Token("end", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class GermDecl:
    owner: str
    entries: tuple[int, ...] | None = None  # None: bare (smooth) germ


@dataclass(frozen=True)
class PointDecl:
    name: str
    germs: tuple[GermDecl, ...]
    meets: tuple[tuple[str, str, int], ...]


@dataclass(frozen=True)
class TrackedDecl:
    name: str
    degree: int | None = None
    selfint: int | None = None
    kdot: int | None = None


@dataclass(frozen=True)
class DivisorDecl:
    name: str
    degree: int | None = None
    selfint: int | None = None


@dataclass(frozen=True)
class ConfigBlock:
    tracked: TrackedDecl
    divisors: tuple[DivisorDecl, ...]
    points: tuple[PointDecl, ...]


@dataclass(frozen=True)
class Blowup:
    point: str
    divisor: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class NameMeet:
    point: str
    a: str
    b: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Blowdown:
    divisor: str
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class AssertSelfint:
    owner: str
    value: int
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class AssertMultseq:
    owner: str
    point: str
    entries: tuple[int, ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class AssertMeet:
    a: str
    b: str
    point: str
    value: int
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Finalize:
    degree: int
    cusps: tuple[tuple[int, ...], ...]
    line: int = field(default=0, compare=False)


Statement = Blowup | NameMeet | Blowdown | AssertSelfint | AssertMultseq | AssertMeet | Finalize


@dataclass(frozen=True)
class Script:
    config: ConfigBlock
    statements: tuple[Statement, ...]


# ---------------------------------------------------------------------------
# parser


class _P:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0

    def peek(self) -> Token:
        return self.toks[self.i]

    def take(self, kind: str | None = None) -> Token:
        tok = self.toks[self.i]
        if kind is not None and tok.kind != kind:
            raise ScriptError(f"expected {kind!r}, found {tok.value!r}", tok.line, tok.col)
        self.i += 1
        return tok

    def take_name(self) -> str:
        tok = self.toks[self.i]
        if tok.kind not in ("ident",):
            raise ScriptError(f"expected an identifier, found {tok.value!r}", tok.line, tok.col)
        self.i += 1
        return tok.value

    def take_int(self) -> int:
        tok = self.take("int")
        return int(tok.value)

    def multseq(self) -> tuple[int, ...]:
        self.take("[")
        entries: list[int] = []
        if self.peek().kind != "]":
            while True:
                tok = self.peek()
                if tok.kind == "repint":
                    self.take()
                    n, k = tok.value.split("_")
                    entries.extend([int(n)] * int(k))
                elif tok.kind == "int":
                    entries.append(self.take_int())
                else:
                    raise ScriptError(
                        f"expected a multiplicity entry, found {tok.value!r}", tok.line, tok.col
                    )
                if self.peek().kind == ",":
                    self.take(",")
                else:
                    break
        self.take("]")
        return tuple(entries)


def parse(text: str) -> Script:
    p = _P(_tokenize(text))
    p.take("config")
    p.take("{")
    tracked: TrackedDecl | None = None
    divisors: list[DivisorDecl] = []
    points: list[PointDecl] = []
    seen: set[str] = set()

    def declare(name: str, tok: Token):
        if name in seen:
            raise ScriptError(f"duplicate identifier {name!r}", tok.line, tok.col)
        seen.add(name)

    while p.peek().kind != "}":
        tok = p.peek()
        if tok.kind == "ambient":
            p.take()
            p.take("p2")
        elif tok.kind == "tracked":
            p.take()
            name_tok = p.peek()
            name = p.take_name()
            declare(name, name_tok)
            if tracked is not None:
                raise ScriptError("only one tracked curve is allowed", tok.line, tok.col)
            if p.peek().kind == "degree":
                p.take()
                tracked = TrackedDecl(name, degree=p.take_int())
            else:
                p.take("selfint")
                s = p.take_int()
                p.take("kdot")
                tracked = TrackedDecl(name, selfint=s, kdot=p.take_int())
        elif tok.kind == "divisor":
            p.take()
            name_tok = p.peek()
            name = p.take_name()
            declare(name, name_tok)
            if p.peek().kind == "degree":
                p.take()
                divisors.append(DivisorDecl(name, degree=p.take_int()))
            else:
                p.take("selfint")
                divisors.append(DivisorDecl(name, selfint=p.take_int()))
        elif tok.kind == "point":
            p.take()
            name_tok = p.peek()
            name = p.take_name()
            declare(name, name_tok)
            p.take("{")
            germs: list[GermDecl] = []
            while True:
                owner = p.take_name()
                entries = None
                if p.peek().kind == ":":
                    p.take(":")
                    entries = p.multseq()
                germs.append(GermDecl(owner, entries))
                if p.peek().kind == ",":
                    p.take(",")
                else:
                    break
            meets: list[tuple[str, str, int]] = []
            if p.peek().kind == ";":
                p.take(";")
                p.take("meets")
                while True:
                    p.take("(")
                    a = p.take_name()
                    p.take(",")
                    b = p.take_name()
                    p.take(")")
                    p.take("=")
                    meets.append((a, b, p.take_int()))
                    if p.peek().kind == ",":
                        p.take(",")
                    else:
                        break
            p.take("}")
            points.append(PointDecl(name, tuple(germs), tuple(meets)))
        else:
            raise ScriptError(f"unexpected token {tok.value!r} in config block", tok.line, tok.col)
    p.take("}")
    if tracked is None:
        raise ScriptError("config block must declare a tracked curve")

    statements: list[Statement] = []
    while p.peek().kind != "end":
        tok = p.peek()
        if tok.kind == "blowup":
            p.take()
            pt = p.take_name()
            p.take("arrow")
            statements.append(Blowup(pt, p.take_name(), tok.line))
        elif tok.kind == "name":
            p.take()
            nm = p.take_name()
            p.take("=")
            p.take("meet")
            p.take("(")
            a = p.take_name()
            p.take(",")
            b = p.take_name()
            p.take(")")
            statements.append(NameMeet(nm, a, b, tok.line))
        elif tok.kind == "blowdown":
            p.take()
            statements.append(Blowdown(p.take_name(), tok.line))
        elif tok.kind == "assert":
            p.take()
            kind = p.peek().kind
            if kind == "selfint":
                p.take()
                owner = p.take_name()
                p.take("eqeq")
                statements.append(AssertSelfint(owner, p.take_int(), tok.line))
            elif kind == "multseq":
                p.take()
                owner = p.take_name()
                p.take("at")
                pt = p.take_name()
                p.take("eqeq")
                statements.append(AssertMultseq(owner, pt, p.multseq(), tok.line))
            elif kind == "meet":
                p.take()
                p.take("(")
                a = p.take_name()
                p.take(",")
                b = p.take_name()
                p.take(")")
                p.take("at")
                pt = p.take_name()
                p.take("eqeq")
                statements.append(AssertMeet(a, b, pt, p.take_int(), tok.line))
            else:
                raise ScriptError(f"unknown assertion {p.peek().value!r}", tok.line, tok.col)
        elif tok.kind == "finalize":
            p.take()
            p.take("expect")
            p.take("degree")
            d = p.take_int()
            p.take("cusps")
            p.take("[")
            cusps: list[tuple[int, ...]] = []
            if p.peek().kind != "]":
                while True:
                    cusps.append(p.multseq())
                    if p.peek().kind == ",":
                        p.take(",")
                    else:
                        break
            p.take("]")
            statements.append(Finalize(d, tuple(cusps), tok.line))
            break
        else:
            raise ScriptError(f"unexpected token {tok.value!r}", tok.line, tok.col)
    if p.peek().kind != "end":
        tok = p.peek()
        raise ScriptError("finalize must be the last statement", tok.line, tok.col)
    return Script(ConfigBlock(tracked, tuple(divisors), tuple(points)), tuple(statements))


# ---------------------------------------------------------------------------
# renderer


def _fmt_multseq(entries) -> str:
    return "[" + ",".join(str(e) for e in entries) + "]"


def render(script: Script) -> str:
    out: list[str] = ["config {"]
    out.append("  ambient p2")
    t = script.config.tracked
    if t.degree is not None:
        out.append(f"  tracked {t.name} degree {t.degree}")
    else:
        out.append(f"  tracked {t.name} selfint {t.selfint} kdot {t.kdot}")
    for d in script.config.divisors:
        if d.degree is not None:
            out.append(f"  divisor {d.name} degree {d.degree}")
        else:
            out.append(f"  divisor {d.name} selfint {d.selfint}")
    for pt in script.config.points:
        germs = ", ".join(
            g.owner if g.entries is None else f"{g.owner}:{_fmt_multseq(g.entries)}"
            for g in pt.germs
        )
        meets = ", ".join(f"({a},{b})={v}" for a, b, v in pt.meets)
        inner = germs + (f" ; meets {meets}" if meets else "")
        out.append(f"  point {pt.name} {{ {inner} }}")
    out.append("}")
    for s in script.statements:
        if isinstance(s, Blowup):
            out.append(f"blowup {s.point} -> {s.divisor}")
        elif isinstance(s, NameMeet):
            out.append(f"name {s.point} = meet({s.a},{s.b})")
        elif isinstance(s, Blowdown):
            out.append(f"blowdown {s.divisor}")
        elif isinstance(s, AssertSelfint):
            out.append(f"assert selfint {s.owner} == {s.value}")
        elif isinstance(s, AssertMultseq):
            out.append(f"assert multseq {s.owner} at {s.point} == {_fmt_multseq(s.entries)}")
        elif isinstance(s, AssertMeet):
            out.append(f"assert meet({s.a},{s.b}) at {s.point} == {s.value}")
        elif isinstance(s, Finalize):
            cusps = ",".join(_fmt_multseq(c) for c in s.cusps)
            out.append(f"finalize expect degree {s.degree} cusps [{cusps}]")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# execution


def build_configuration(config: ConfigBlock) -> Configuration:
    t = config.tracked
    if t.degree is not None:
        tracked = TrackedCurve(t.name, t.degree ** 2, -3 * t.degree, t.degree)
    else:
        tracked = TrackedCurve(t.name, t.selfint, t.kdot, None)
    divisors = {}
    for d in config.divisors:
        if d.degree is not None:
            divisors[d.name] = DivisorRecord(d.name, d.degree ** 2, d.degree)
        else:
            divisors[d.name] = DivisorRecord(d.name, d.selfint, None)
    points = {}
    owners = set(divisors) | {tracked.name}
    for pd in config.points:
        germs: dict[str, tuple[int, ...]] = {}
        for g in pd.germs:
            if g.owner not in owners:
                raise ScriptError(f"point {pd.name}: unknown owner {g.owner!r}")
            if g.owner in germs:
                raise ScriptError(f"point {pd.name}: owner {g.owner!r} declared twice")
            entries = normalize_multseq(g.entries or ()).entries
            if entries and g.owner != tracked.name:
                raise ScriptError(f"point {pd.name}: divisor {g.owner} cannot carry a cusp")
            germs[g.owner] = entries
        pairmult: dict[tuple[str, str], int] = {}
        mult = {o: (germs[o][0] if germs[o] else 1) for o in germs}
        names = sorted(germs)
        for i, a in enumerate(names):
            for b in names[i + 1:]:
                pairmult[(a, b)] = mult[a] * mult[b]
        for a, b, v in pd.meets:
            key = (a, b) if a <= b else (b, a)
            if a not in germs or b not in germs:
                raise ScriptError(f"point {pd.name}: meets entry for absent germ ({a},{b})")
            pairmult[key] = v
        points[pd.name] = PointRecord(pd.name, germs, pairmult)
    return Configuration(tracked, divisors, points, 0)


@dataclass
class ExecutionReport:
    ok: bool = True
    lines: list[str] = field(default_factory=list)
    profile: CurveProfile | None = None
    failed_assertions: int = 0
    error: str | None = None

    @property
    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def _check_state(cfg: Configuration, report: ExecutionReport, idx: int, desc: str) -> None:
    ledger = adjunction_ledger(cfg)
    vr = validate_configuration(cfg)
    status = "ok" if vr.ok else "INVALID " + "; ".join(vr.issues)
    report.lines.append(f"{idx:03d} {desc} ledger={ledger} {status}")
    if not vr.ok or ledger != 0:
        report.ok = False


def execute(script: Script, dot_dir: str | None = None) -> ExecutionReport:
    """Run a script; the report lists every step with the adjunction ledger."""
    report = ExecutionReport()
    try:
        cfg = build_configuration(script.config)
    except (ScriptError, SurfaceError) as exc:
        report.ok = False
        report.error = str(exc)
        report.lines.append(f"000 config FAILED: {exc}")
        report.lines.append("RESULT ERROR")
        return report
    _check_state(cfg, report, 0, "config")
    if dot_dir is not None:
        Path(dot_dir).mkdir(parents=True, exist_ok=True)
        (Path(dot_dir) / "step_000.dot").write_text(to_dot(cfg))

    for n, stmt in enumerate(script.statements, start=1):
        try:
            if isinstance(stmt, Blowup):
                cfg = blow_up(cfg, stmt.point, stmt.divisor)
                _check_state(cfg, report, n, f"blowup {stmt.point} -> {stmt.divisor}")
            elif isinstance(stmt, Blowdown):
                cfg = blow_down(cfg, stmt.divisor)
                _check_state(cfg, report, n, f"blowdown {stmt.divisor}")
            elif isinstance(stmt, NameMeet):
                old = cfg.meet_point(stmt.a, stmt.b)
                if stmt.point != old:
                    if stmt.point in cfg.points:
                        raise SurfaceError(f"point name {stmt.point!r} is already in use")
                    cfg = cfg.copy()
                    pt = cfg.points.pop(old)
                    pt.name = stmt.point
                    cfg.points[stmt.point] = pt
                report.lines.append(
                    f"{n:03d} name {stmt.point} = meet({stmt.a},{stmt.b}) [{old}] ok"
                )
            elif isinstance(stmt, AssertSelfint):
                actual = cfg.self_int_of(stmt.owner)
                passed = actual == stmt.value
                report.lines.append(
                    f"{n:03d} assert selfint {stmt.owner} == {stmt.value} "
                    f"{'PASS' if passed else f'FAIL (actual {actual})'}"
                )
                if not passed:
                    report.ok = False
                    report.failed_assertions += 1
            elif isinstance(stmt, AssertMultseq):
                if stmt.point not in cfg.points:
                    raise SurfaceError(f"unknown point {stmt.point!r}")
                actual = cfg.points[stmt.point].germs.get(stmt.owner)
                if actual is None:
                    raise SurfaceError(f"{stmt.owner} has no germ at {stmt.point}")
                expected = normalize_multseq(stmt.entries).entries
                passed = actual == expected
                report.lines.append(
                    f"{n:03d} assert multseq {stmt.owner} at {stmt.point} == "
                    f"{_fmt_multseq(expected)} "
                    f"{'PASS' if passed else f'FAIL (actual {_fmt_multseq(actual)})'}"
                )
                if not passed:
                    report.ok = False
                    report.failed_assertions += 1
            elif isinstance(stmt, AssertMeet):
                if stmt.point not in cfg.points:
                    raise SurfaceError(f"unknown point {stmt.point!r}")
                actual = cfg.points[stmt.point].meet(stmt.a, stmt.b)
                passed = actual == stmt.value
                report.lines.append(
                    f"{n:03d} assert meet({stmt.a},{stmt.b}) at {stmt.point} == {stmt.value} "
                    f"{'PASS' if passed else f'FAIL (actual {actual})'}"
                )
                if not passed:
                    report.ok = False
                    report.failed_assertions += 1
            elif isinstance(stmt, Finalize):
                profile = finalize(cfg)
                report.profile = profile
                expected = sorted(
                    (normalize_multseq(c).entries for c in stmt.cusps), reverse=True
                )
                expected = [e for e in expected if e]
                actual_cusps = [ms.entries for ms in profile.cusps]
                passed = profile.degree == stmt.degree and actual_cusps == expected
                gr = genus_check(profile)
                report.lines.append(
                    f"{n:03d} finalize degree={profile.degree} "
                    f"cusps={','.join(_fmt_multseq(c) for c in actual_cusps) or '[]'} "
                    f"genus {gr.lhs}={gr.rhs} "
                    f"{'PASS' if passed else 'FAIL (expected degree ' + str(stmt.degree) + ' cusps ' + ','.join(_fmt_multseq(c) for c in expected) + ')'}"
                )
                if not passed:
                    report.ok = False
                    report.failed_assertions += 1
            if dot_dir is not None:
                (Path(dot_dir) / f"step_{n:03d}.dot").write_text(to_dot(cfg))
        except (SurfaceError, ScriptError) as exc:
            report.ok = False
            report.error = f"statement {n} (line {getattr(stmt, 'line', '?')}): {exc}"
            report.lines.append(f"{n:03d} FAILED: {report.error}")
            break
    report.lines.append("RESULT " + ("PASS" if report.ok else "FAIL"))
    return report


def run_file(path: str, dot_dir: str | None = None) -> ExecutionReport:
    return execute(parse(Path(path).read_text()), dot_dir=dot_dir)
