"""Combinatorial divisor configurations with exact blow-up / blow-down rules.

A configuration stores smooth rational divisors, one tracked (possibly
cuspidal) curve, and the points where any of them meet, with every pairwise
local intersection multiplicity recorded.  Blowing up a point and contracting
a (-1)-divisor follow the classical transformation rules:

* blow-up at a point of multiplicity m: self-intersection drops by m^2, the
  tracked multiplicity sequence pops its first entry, pairwise local
  multiplicities drop by the product of multiplicities, germs stay together
  on the new exceptional divisor exactly when the residual is positive, and
  each germ meets the exceptional divisor with its old multiplicity;
* contraction inverts all of that.

The conserved quantity (self + K.C)/2 + 1 - sum of deltas (the adjunction
ledger) stays 0 along every transformation of a rational curve.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import isqrt

from cuspforge.invariants import (
    CurveProfile,
    MultiplicitySequence,
    genus_check,
    multseq_delta,
    normalize_multseq,
)


class SurfaceError(Exception):
    """A transformation was applied to data it cannot be applied to."""


Seq = tuple[int, ...]


def _germ_mult(seq: Seq) -> int:
    return seq[0] if seq else 1


def _pair_key(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class DivisorRecord:
    name: str
    self_int: int
    degree: int | None = None
    origin_point: str | None = None
    # True only while the divisor is an untouched exceptional divisor; then a
    # contraction is the exact inverse of the blow-up and restores the name of
    # the blown-up point.  Internal naming hint, not part of the geometry.
    pristine: bool = False


@dataclass(frozen=True)
class TrackedCurve:
    name: str
    self_int: int
    k_dot: int
    degree: int | None = None


@dataclass
class PointRecord:
    name: str
    germs: dict[str, Seq] = field(default_factory=dict)
    pairmult: dict[tuple[str, str], int] = field(default_factory=dict)

    def copy(self) -> "PointRecord":
        return PointRecord(self.name, dict(self.germs), dict(self.pairmult))

    def meet(self, a: str, b: str) -> int:
        return self.pairmult.get(_pair_key(a, b), 0)


@dataclass
class Configuration:
    tracked: TrackedCurve
    divisors: dict[str, DivisorRecord] = field(default_factory=dict)
    points: dict[str, PointRecord] = field(default_factory=dict)
    blowup_depth: int = 0

    # -- helpers

    def copy(self) -> "Configuration":
        return Configuration(
            self.tracked,
            dict(self.divisors),
            {n: p.copy() for n, p in self.points.items()},
            self.blowup_depth,
        )

    def owner_names(self) -> list[str]:
        return sorted(self.divisors) + [self.tracked.name]

    def is_plane(self) -> bool:
        return self.blowup_depth == 0

    def self_int_of(self, owner: str) -> int:
        if owner == self.tracked.name:
            return self.tracked.self_int
        return self.divisors[owner].self_int

    def total_meet(self, a: str, b: str) -> int:
        return sum(pt.meet(a, b) for pt in self.points.values())

    def points_of(self, owner: str) -> list[str]:
        return sorted(n for n, pt in self.points.items() if owner in pt.germs)

    def meet_point(self, a: str, b: str) -> str:
        """The unique point where owners a and b both have germs."""
        hits = [n for n, pt in sorted(self.points.items()) if a in pt.germs and b in pt.germs]
        if not hits:
            raise SurfaceError(f"{a} and {b} share no recorded point")
        if len(hits) > 1:
            raise SurfaceError(f"{a} and {b} meet at several points: {hits}")
        return hits[0]

    def to_json(self) -> dict:
        return {
            "tracked": {
                "name": self.tracked.name,
                "self_int": self.tracked.self_int,
                "k_dot": self.tracked.k_dot,
                "degree": self.tracked.degree,
            },
            "divisors": [
                {
                    "name": d.name,
                    "self_int": d.self_int,
                    "degree": d.degree,
                }
                for _, d in sorted(self.divisors.items())
            ],
            "points": [
                {
                    "name": pt.name,
                    "germs": [
                        {"owner": o, "multseq": list(pt.germs[o])} for o in sorted(pt.germs)
                    ],
                    "meets": [
                        {"pair": list(k), "mult": v}
                        for k, v in sorted(pt.pairmult.items())
                    ],
                }
                for _, pt in sorted(self.points.items())
            ],
            "blowup_depth": self.blowup_depth,
        }

    def __eq__(self, other) -> bool:
        return isinstance(other, Configuration) and self.to_json() == other.to_json()


def adjunction_ledger(cfg: Configuration) -> Fraction:
    """(self + K.C)/2 + 1 - sum of deltas; 0 along rational-curve replays."""
    total_delta = 0
    for pt in cfg.points.values():
        seq = pt.germs.get(cfg.tracked.name)
        if seq:
            total_delta += multseq_delta(MultiplicitySequence(seq))
    return Fraction(cfg.tracked.self_int + cfg.tracked.k_dot, 2) + 1 - total_delta


# ---------------------------------------------------------------------------
# blow-up


def blow_up(cfg: Configuration, point: str, new_divisor: str, on: str | None = None) -> Configuration:
    """Blow up a point, introducing the named exceptional divisor.

    Unknown point names denote fresh generic points (optionally constrained
    to lie on one divisor via ``on``).
    """
    out = cfg.copy()
    if new_divisor in out.divisors or new_divisor == out.tracked.name:
        raise SurfaceError(f"divisor name {new_divisor!r} is already in use")
    if point not in out.points:
        germs: dict[str, Seq] = {}
        if on is not None:
            if on not in out.divisors and on != out.tracked.name:
                raise SurfaceError(f"unknown divisor {on!r} for a constrained generic point")
            germs[on] = ()
        pt = PointRecord(point, germs, {})
    else:
        pt = out.points.pop(point)

    owners = sorted(pt.germs)
    mults = {o: _germ_mult(pt.germs[o]) for o in owners}

    # update self-intersections, canonical intersection, tracked germ pop
    popped: dict[str, Seq] = {}
    for o in owners:
        m = mults[o]
        if o == out.tracked.name:
            out.tracked = replace(
                out.tracked,
                self_int=out.tracked.self_int - m * m,
                k_dot=out.tracked.k_dot + m,
            )
            popped[o] = pt.germs[o][1:] if pt.germs[o] else ()
        else:
            d = out.divisors[o]
            out.divisors[o] = replace(d, self_int=d.self_int - m * m)
            popped[o] = ()

    # residual pairwise multiplicities
    residual: dict[tuple[str, str], int] = {}
    for i, a in enumerate(owners):
        for b in owners[i + 1:]:
            old = pt.meet(a, b)
            r = old - mults[a] * mults[b]
            if r < 0:
                raise SurfaceError(
                    f"pair ({a},{b}) at {point!r} has multiplicity {old} < product "
                    f"{mults[a] * mults[b]}; inconsistent configuration"
                )
            residual[(a, b)] = r

    # partition into sharing classes; the relation must be transitive
    parent = {o: o for o in owners}

    def find(o):
        while parent[o] != o:
            parent[o] = parent[parent[o]]
            o = parent[o]
        return o

    for (a, b), r in residual.items():
        if r > 0:
            parent[find(a)] = find(b)
    classes: dict[str, list[str]] = {}
    for o in owners:
        classes.setdefault(find(o), []).append(o)
    for members in classes.values():
        for i, a in enumerate(members):
            for b in members[i + 1:]:
                key = (a, b) if (a, b) in residual else (b, a)
                if len(members) > 2 and residual[key] == 0:
                    raise SurfaceError(
                        f"non-transitive tangency data at {point!r}: "
                        f"{a} and {b} are linked only through a third germ"
                    )

    leaving_plane = out.blowup_depth == 0
    out.blowup_depth += 1
    if leaving_plane:
        out.tracked = replace(out.tracked, degree=None)
        for n, d in list(out.divisors.items()):
            out.divisors[n] = replace(d, degree=None)
    for o in owners:
        if o in out.divisors:
            out.divisors[o] = replace(out.divisors[o], pristine=False)
    out.divisors[new_divisor] = DivisorRecord(new_divisor, -1, None, point, True)

    ordered = sorted(classes.values(), key=lambda ms: tuple(sorted(ms)))
    for idx, members in enumerate(ordered):
        name = f"{new_divisor}@{idx}"
        if name in out.points:
            raise SurfaceError(f"auto-generated point name {name!r} collides")
        npt = PointRecord(name)
        for o in sorted(members):
            npt.germs[o] = popped[o]
        npt.germs[new_divisor] = ()
        for i, a in enumerate(sorted(members)):
            for b in sorted(members)[i + 1:]:
                key = (a, b) if (a, b) in residual else (b, a)
                r = residual[key]
                prod = _germ_mult(npt.germs[a]) * _germ_mult(npt.germs[b])
                if r < prod:
                    raise SurfaceError(
                        f"blow-up at {point!r} would leave ({a},{b}) with contact {r} "
                        f"below the multiplicity product {prod}; inconsistent data"
                    )
                npt.pairmult[_pair_key(a, b)] = r
        for o in sorted(members):
            npt.pairmult[_pair_key(o, new_divisor)] = mults[o]
        out.points[name] = npt
    return out


# ---------------------------------------------------------------------------
# blow-down


def blow_down(cfg: Configuration, divisor: str) -> Configuration:
    """Contract a (-1)-divisor, merging all points on it into its image."""
    if divisor == cfg.tracked.name:
        raise SurfaceError("cannot contract the tracked curve")
    if divisor not in cfg.divisors:
        raise SurfaceError(f"unknown divisor {divisor!r}")
    if cfg.divisors[divisor].self_int != -1:
        raise SurfaceError(
            f"{divisor} has self-intersection {cfg.divisors[divisor].self_int}, not -1"
        )
    if cfg.blowup_depth == 0:
        raise SurfaceError("the ambient surface is already the plane")
    out = cfg.copy()
    on_e = [n for n, pt in sorted(out.points.items()) if divisor in pt.germs]

    # every other owner may sit on at most one point of the contracted divisor
    seen: dict[str, str] = {}
    for n in on_e:
        for o in out.points[n].germs:
            if o == divisor:
                continue
            if o in seen:
                raise SurfaceError(
                    f"contracting {divisor} would glue two germs of {o} "
                    f"(at {seen[o]} and {n}) into a node"
                )
            seen[o] = n

    degree_with_e = {
        o: sum(out.points[n].meet(o, divisor) for n in on_e) for o in seen
    }

    # surviving germs, with the tracked sequence regrown
    merged_germs: dict[str, Seq] = {}
    for n in on_e:
        for o, seq in out.points[n].germs.items():
            if o == divisor:
                continue
            if o == out.tracked.name:
                me = degree_with_e[o]
                if me >= 2:
                    first = _germ_mult(seq)
                    if me < first:
                        raise SurfaceError(
                            f"contraction contact {me} is below the first multiplicity "
                            f"{first}; would not form a multiplicity sequence"
                        )
                    merged_germs[o] = (me,) + seq
                else:
                    if seq:
                        raise SurfaceError(
                            f"tracked germ with sequence {list(seq)} cannot meet "
                            f"{divisor} with total contact 1"
                        )
                    merged_germs[o] = seq
            else:
                merged_germs[o] = seq

    merged_pairs: dict[tuple[str, str], int] = {}
    survivors = sorted(merged_germs)
    for i, a in enumerate(survivors):
        for b in survivors[i + 1:]:
            total = sum(out.points[n].meet(a, b) for n in on_e)
            total += degree_with_e[a] * degree_with_e[b]
            if total:
                merged_pairs[_pair_key(a, b)] = total

    # self-intersections and the canonical ledger
    for o, k in degree_with_e.items():
        if k == 0:
            continue
        if o == out.tracked.name:
            out.tracked = replace(
                out.tracked,
                self_int=out.tracked.self_int + k * k,
                k_dot=out.tracked.k_dot - k,
            )
        else:
            d = out.divisors[o]
            out.divisors[o] = replace(d, self_int=d.self_int + k * k)

    origin = out.divisors[divisor].origin_point if out.divisors[divisor].pristine else None
    for o in degree_with_e:
        if o in out.divisors and degree_with_e[o] > 0:
            out.divisors[o] = replace(out.divisors[o], pristine=False)
    for n in on_e:
        del out.points[n]
    del out.divisors[divisor]
    out.blowup_depth -= 1

    keep = len(merged_germs) >= 2 or any(
        o == out.tracked.name and seq for o, seq in merged_germs.items()
    )
    if keep:
        name = origin if origin and origin not in out.points else f"{divisor}~"
        while name in out.points:
            name += "~"
        out.points[name] = PointRecord(name, merged_germs, merged_pairs)

    if out.blowup_depth == 0:
        d = isqrt(max(out.tracked.self_int, 0))
        degree = d if d >= 1 and d * d == out.tracked.self_int and out.tracked.k_dot == -3 * d else None
        out.tracked = replace(out.tracked, degree=degree)
        for n, rec in list(out.divisors.items()):
            deg = {1: 1, 4: 2}.get(rec.self_int)
            out.divisors[n] = replace(rec, degree=deg)
    return out


# ---------------------------------------------------------------------------
# validation / finalization


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    issues: tuple[str, ...]
    ledger: Fraction
    bezout_checked: tuple[tuple[str, str, int, int], ...]


def validate_configuration(cfg: Configuration) -> ValidationReport:
    issues: list[str] = []
    tracked = cfg.tracked.name
    alive = set(cfg.divisors) | {tracked}
    if tracked in cfg.divisors:
        issues.append(f"tracked curve name {tracked!r} collides with a divisor")

    for n, pt in sorted(cfg.points.items()):
        owners = sorted(pt.germs)
        for o in owners:
            if o not in alive:
                issues.append(f"point {n}: germ of unknown owner {o!r}")
            seq = pt.germs[o]
            if o != tracked and seq:
                issues.append(f"point {n}: divisor {o} carries a singular germ {list(seq)}")
            try:
                normalize_multseq(seq)
                if tuple(m for m in seq if m > 1) != tuple(seq):
                    issues.append(f"point {n}: germ of {o} is not normalized: {list(seq)}")
            except Exception as exc:  # noqa: BLE001 - collect, do not raise
                issues.append(f"point {n}: bad multiplicity sequence for {o}: {exc}")
        if len(owners) == 1 and not pt.germs[owners[0]]:
            issues.append(f"point {n}: single smooth germ carries no information")
        for i, a in enumerate(owners):
            for b in owners[i + 1:]:
                v = pt.meet(a, b)
                prod = _germ_mult(pt.germs[a]) * _germ_mult(pt.germs[b])
                if v < prod:
                    issues.append(
                        f"point {n}: contact ({a},{b}) = {v} below multiplicity product {prod}"
                    )
        for (a, b) in pt.pairmult:
            if a not in pt.germs or b not in pt.germs:
                issues.append(f"point {n}: contact recorded for absent germ pair ({a},{b})")

    ledger = adjunction_ledger(cfg)
    if ledger != 0:
        issues.append(f"adjunction ledger is {ledger}, expected 0")

    bezout: list[tuple[str, str, int, int]] = []
    if cfg.is_plane():
        degrees: dict[str, int | None] = {tracked: cfg.tracked.degree}
        if cfg.tracked.degree is not None:
            d = cfg.tracked.degree
            if cfg.tracked.self_int != d * d or cfg.tracked.k_dot != -3 * d:
                issues.append(
                    f"tracked curve of degree {d} must have self-intersection {d * d} "
                    f"and canonical intersection {-3 * d}"
                )
        for n, rec in sorted(cfg.divisors.items()):
            degrees[n] = rec.degree
            if rec.degree is not None and rec.self_int != rec.degree ** 2:
                issues.append(f"divisor {n} of degree {rec.degree} has self-intersection {rec.self_int}")
        names = sorted(degrees)
        for i, a in enumerate(names):
            for b in names[i + 1:]:
                da, db = degrees[a], degrees[b]
                if da is None or db is None:
                    continue
                total = cfg.total_meet(a, b)
                bezout.append((a, b, total, da * db))
                if total != da * db:
                    issues.append(
                        f"plane intersection total {a}.{b} = {total}, expected {da * db}"
                    )
    return ValidationReport(not issues, tuple(issues), ledger, tuple(bezout))


def finalize(cfg: Configuration) -> CurveProfile:
    """Read off the tracked plane curve once every exceptional divisor is gone.

    Helper curves may survive as honest plane curves (their degrees must be
    restorable); what must be gone is the exceptional rank of the blow-ups.
    """
    if not cfg.is_plane():
        raise SurfaceError(f"ambient surface is {cfg.blowup_depth} blow-ups away from the plane")
    stray = sorted(n for n, rec in cfg.divisors.items() if rec.degree is None)
    if stray:
        raise SurfaceError(f"divisors without a plane degree remain: {stray}")
    s = cfg.tracked.self_int
    d = isqrt(max(s, 0))
    if d < 1 or d * d != s:
        raise SurfaceError(f"tracked self-intersection {s} is not a positive square")
    if cfg.tracked.k_dot != -3 * d:
        raise SurfaceError(
            f"canonical intersection {cfg.tracked.k_dot} does not match degree {d}"
        )
    cusps = []
    for n, pt in sorted(cfg.points.items()):
        seq = pt.germs.get(cfg.tracked.name)
        if seq:
            cusps.append(MultiplicitySequence(seq))
    cusps.sort(key=lambda ms: ms.entries, reverse=True)
    profile = CurveProfile(d, tuple(cusps))
    report = genus_check(profile)
    if not report.ok:
        raise SurfaceError(
            f"degree {d} with deltas {report.deltas} fails the genus identity "
            f"({report.lhs} != {report.rhs}); bookkeeping bug or invalid script"
        )
    return profile


def to_dot(cfg: Configuration) -> str:
    """Deterministic DOT graph: owners as nodes, shared points as edges."""
    lines = ["graph configuration {"]
    tracked = cfg.tracked.name
    lines.append(
        f'  "{tracked}" [shape=doublecircle, label="{tracked}\\nself={cfg.tracked.self_int}"];'
    )
    for n, rec in sorted(cfg.divisors.items()):
        lines.append(f'  "{n}" [shape=circle, label="{n}\\nself={rec.self_int}"];')
    for n, pt in sorted(cfg.points.items()):
        owners = sorted(pt.germs)
        for i, a in enumerate(owners):
            for b in owners[i + 1:]:
                lines.append(f'  "{a}" -- "{b}" [label="{n}:{pt.meet(a, b)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
