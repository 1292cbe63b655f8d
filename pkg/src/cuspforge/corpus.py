"""Generators for the shipped construction scripts.

Each generator simulates a construction on the surface engine while emitting
the corresponding script statements, so every auto-generated point name in
the output is the one the engine will produce when the script is replayed.
Assertions are taken from the catalog formulas (never from the simulation),
and are checked during generation: a generator raises if its own emitted
assertion would fail, so a shipped script is already a passing replay.

Construction shapes:

* (a1)-(a4) and (e): repeated quadratic Cremona transformations with two
  proper base points and one infinitely near base point, realized as three
  blow-ups followed by three contractions.  One step grows both cusps.
* (b): two conics tangent to the tracked curve are rolled up by a chain of
  four blow-ups at one point plus two side blow-ups, then six contractions.
* (c): like (b) but with a 3+1 contact split between the two conics.
* (d1)/(d2): a conic/line pair is rolled along a chain of four blow-ups and
  one extra blow-up, then five contractions; each pass alternates between
  the two families.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from cuspforge.catalog import FamilyParams, family_profile, initial_curve
from cuspforge.invariants import MultiplicitySequence
from cuspforge.script import (
    AssertMeet,
    AssertMultseq,
    AssertSelfint,
    Blowdown,
    Blowup,
    ConfigBlock,
    DivisorDecl,
    Finalize,
    GermDecl,
    PointDecl,
    Script,
    Statement,
    TrackedDecl,
    build_configuration,
    render,
)
from cuspforge.surface import Configuration, blow_down, blow_up


class GenerationError(Exception):
    """The simulated construction contradicts the catalog claims."""


@dataclass
class _Emitter:
    config: ConfigBlock
    cfg: Configuration = field(init=False)
    stmts: list[Statement] = field(default_factory=list)

    def __post_init__(self):
        self.cfg = build_configuration(self.config)

    def blowup(self, point: str, divisor: str) -> None:
        self.cfg = blow_up(self.cfg, point, divisor)
        self.stmts.append(Blowup(point, divisor))

    def blowdown(self, divisor: str) -> None:
        self.cfg = blow_down(self.cfg, divisor)
        self.stmts.append(Blowdown(divisor))

    def assert_selfint(self, owner: str, value: int) -> None:
        actual = self.cfg.self_int_of(owner)
        if actual != value:
            raise GenerationError(f"selfint {owner} is {actual}, claimed {value}")
        self.stmts.append(AssertSelfint(owner, value))

    def assert_multseq(self, owner: str, point: str, entries: tuple[int, ...]) -> None:
        actual = self.cfg.points[point].germs.get(owner)
        if actual != entries:
            raise GenerationError(
                f"multseq of {owner} at {point} is {actual}, claimed {entries}"
            )
        self.stmts.append(AssertMultseq(owner, point, entries))

    def assert_meet(self, a: str, b: str, point: str, value: int) -> None:
        actual = self.cfg.points[point].meet(a, b)
        if actual != value:
            raise GenerationError(f"meet({a},{b}) at {point} is {actual}, claimed {value}")
        self.stmts.append(AssertMeet(a, b, point, value))

    def finalize(self, degree: int, cusps) -> None:
        self.stmts.append(Finalize(degree, tuple(tuple(c) for c in cusps)))

    def meet_point(self, a: str, b: str) -> str:
        return self.cfg.meet_point(a, b)

    def cusp_points(self) -> dict[str, tuple[int, ...]]:
        name = self.cfg.tracked.name
        return {
            n: pt.germs[name]
            for n, pt in sorted(self.cfg.points.items())
            if pt.germs.get(name)
        }

    def script(self) -> Script:
        return Script(self.config, tuple(self.stmts))


def _match_cusps(em: _Emitter, expected: tuple[MultiplicitySequence, ...]) -> dict[str, tuple[int, ...]]:
    """Map cusp points to the claimed sequences; raise when they disagree."""
    found = em.cusp_points()
    want = sorted((ms.entries for ms in expected if ms.entries), reverse=True)
    have = sorted(found.values(), reverse=True)
    if want != have:
        raise GenerationError(f"cusps {have} do not match the claimed {want}")
    return found


def _assert_profile(em: _Emitter, profile, cusps) -> None:
    em.assert_selfint(em.cfg.tracked.name, profile.degree ** 2)
    for point, entries in _match_cusps(em, cusps).items():
        em.assert_multseq(em.cfg.tracked.name, point, entries)


def _transverse_point(em: _Emitter, a: str, b: str) -> str:
    """The unique point where a and b meet transversally away from any cusp."""
    tracked = em.cfg.tracked.name
    hits = [
        n
        for n, pt in sorted(em.cfg.points.items())
        if a in pt.germs and b in pt.germs and pt.meet(a, b) == 1
        and not (tracked in (a, b) and pt.germs.get(tracked))
    ]
    if len(hits) != 1:
        raise GenerationError(f"expected one transverse point of {a} and {b}, found {hits}")
    return hits[0]


# ---------------------------------------------------------------------------
# (a1)-(a4) and (e): quadratic Cremona steps


def _config_a(family: str, l: int, m: int) -> ConfigBlock:
    ic = initial_curve(family, l, m)
    mult_p = ic.at_p.multseq.multiplicity
    mult_q = ic.at_q.multseq.multiplicity
    germ_p = GermDecl("C", ic.at_p.multseq.entries)
    germ_q = GermDecl("C", ic.at_q.multseq.entries)
    line = GermDecl
    if family == "a1":
        # L1 = tangent at the p-cusp (one extra transverse point x),
        # L2 = the line through both cusps
        points = (
            PointDecl("p", (germ_p, line("L1"), line("L2")),
                      (("C", "L1", ic.at_p.tangent_order), ("C", "L2", mult_p), ("L1", "L2", 1))),
            PointDecl("q", (germ_q, line("L2")), (("C", "L2", mult_q),)),
            PointDecl("x", (GermDecl("C"), line("L1")), ()),
        )
    elif family == "a2":
        # L1 = tangent at the q-cusp, L2 = the line through both cusps
        points = (
            PointDecl("p", (germ_p, line("L2")), (("C", "L2", mult_p),)),
            PointDecl("q", (germ_q, line("L1"), line("L2")),
                      (("C", "L1", ic.at_q.tangent_order), ("C", "L2", mult_q), ("L1", "L2", 1))),
            PointDecl("x", (GermDecl("C"), line("L1")), ()),
        )
    elif family == "a3":
        # L1 = tangent at the q-cusp, L2 = tangent at the p-cusp; they meet
        # at a point s away from the curve
        points = (
            PointDecl("p", (germ_p, line("L2")), (("C", "L2", ic.at_p.tangent_order),)),
            PointDecl("q", (germ_q, line("L1")), (("C", "L1", ic.at_q.tangent_order),)),
            PointDecl("x", (GermDecl("C"), line("L1")), ()),
            PointDecl("s", (line("L1"), line("L2")), ()),
        )
    elif family == "a4":
        # L1 = tangent at the p-cusp, L2 = tangent at the q-cusp
        points = (
            PointDecl("p", (germ_p, line("L1")), (("C", "L1", ic.at_p.tangent_order),)),
            PointDecl("q", (germ_q, line("L2")), (("C", "L2", ic.at_q.tangent_order),)),
            PointDecl("x", (GermDecl("C"), line("L1")), ()),
            PointDecl("s", (line("L1"), line("L2")), ()),
        )
    else:
        raise ValueError(family)
    return ConfigBlock(
        TrackedDecl("C", degree=ic.degree),
        (DivisorDecl("L1", degree=1), DivisorDecl("L2", degree=1)),
        points,
    )


def _config_e() -> ConfigBlock:
    # quartic with one [2,2,2] cusp; L1 = an inflectional tangent (contact 3
    # at p, transverse at r), L2 = the line with contact 4 at the cusp
    return ConfigBlock(
        TrackedDecl("C", degree=4),
        (DivisorDecl("L1", degree=1), DivisorDecl("L2", degree=1)),
        (
            PointDecl("q", (GermDecl("C", (2, 2, 2)), GermDecl("L2")), (("C", "L2", 4),)),
            PointDecl("p", (GermDecl("C"), GermDecl("L1")), (("C", "L1", 3),)),
            PointDecl("r", (GermDecl("C"), GermDecl("L1")), ()),
            PointDecl("s", (GermDecl("L1"), GermDecl("L2")), ()),
        ),
    )


def _cremona_step(em: _Emitter, a: str, b: str, x_point: str, idx: int) -> tuple[str, str, str]:
    """Three blow-ups (base, transverse point, infinitely near) + three contractions."""
    e, a2, b2 = f"E{idx}", f"L1_{idx}", f"L2_{idx}"
    em.blowup(em.meet_point(a, b), e)
    em.blowup(x_point, a2)
    em.blowup(em.meet_point(e, b), b2)
    for owner, value in ((a, -1), (b, -1), (e, -2), (a2, -1), (b2, -1)):
        em.assert_selfint(owner, value)
    em.blowdown(a)
    em.blowdown(b)
    em.blowdown(e)
    return a2, b2, _transverse_point(em, em.cfg.tracked.name, a2)


def script_a(family: str, l: int, m: int, steps: int = 2) -> Script:
    """Initial curve plus ``steps`` Cremona steps; verified against the catalog."""
    em = _Emitter(_config_a(family, l, m))
    a, b, x = "L1", "L2", "x"
    for i in range(1, steps + 1):
        a, b, x = _cremona_step(em, a, b, x, i)
        profile, cusps = family_profile(FamilyParams(family, u=i + 1, l=l, m=m))
        _assert_profile(em, profile, cusps)
    profile, cusps = family_profile(FamilyParams(family, u=steps + 1, l=l, m=m))
    em.finalize(profile.degree, [ms.entries for ms in cusps if ms.entries])
    return em.script()


def script_e(k: int) -> Script:
    em = _Emitter(_config_e())
    a, b, x = "L1", "L2", "r"
    for i in range(1, k + 1):
        a, b, x = _cremona_step(em, a, b, x, i)
        profile, cusps = family_profile(FamilyParams("e", k=i))
        _assert_profile(em, profile, cusps)
    profile, cusps = family_profile(FamilyParams("e", k=k))
    em.finalize(profile.degree, [ms.entries for ms in cusps if ms.entries])
    return em.script()


# ---------------------------------------------------------------------------
# (b): two conics with a four-fold contact point


def _config_b() -> ConfigBlock:
    return ConfigBlock(
        TrackedDecl("L", degree=1),
        (DivisorDecl("C1", degree=2), DivisorDecl("C2", degree=2)),
        (
            PointDecl("p", (GermDecl("C1"), GermDecl("C2")), (("C1", "C2", 4),)),
            PointDecl("q", (GermDecl("C1"), GermDecl("L")), (("C1", "L", 2),)),
            PointDecl("r", (GermDecl("C2"), GermDecl("L")), ()),
            PointDecl("s", (GermDecl("C2"), GermDecl("L")), ()),
        ),
    )


def script_b(k: int) -> Script:
    em = _Emitter(_config_b())
    c1, c2, side = "C1", "C2", "s"
    for j in range(1, k + 1):
        base = em.meet_point(c1, c2)
        em.blowup(base, "E1")
        for prev, nxt in (("E1", "E2"), ("E2", "E3"), ("E3", "E4")):
            em.blowup(em.meet_point(c1, prev), nxt)
        c1n, c2n = f"C1_{j}", f"C2_{j}"
        em.blowup(em.meet_point(c1, "E4"), c1n)
        em.blowup(side, c2n)
        for owner, value in ((c1, -1), (c2, -1), (c1n, -1), (c2n, -1),
                             ("E1", -2), ("E2", -2), ("E3", -2), ("E4", -2)):
            em.assert_selfint(owner, value)
        if j >= 2:
            shared = em.meet_point("L", "E4")
            em.assert_meet("L", "E4", shared, j - 1)
        for e in (c1, c2, "E4", "E3", "E2", "E1"):
            em.blowdown(e)
        profile, cusps = family_profile(FamilyParams("b", k=j))
        _assert_profile(em, profile, cusps)
        small = next(
            n for n, seq in em.cusp_points().items() if seq == (2,) * j
        )
        em.assert_meet("L", c1n, small, 2)
        big = em.meet_point(c1n, c2n)
        em.assert_meet(c1n, c2n, big, 4)
        em.assert_meet("L", c1n, big, 4 * j)
        em.assert_meet("L", c2n, big, 4 * j + 1)
        c1, c2 = c1n, c2n
        side = _transverse_point(em, "L", c2)
    profile, cusps = family_profile(FamilyParams("b", k=k))
    em.finalize(profile.degree, [ms.entries for ms in cusps if ms.entries])
    return em.script()


# ---------------------------------------------------------------------------
# (c): conics with a 3+1 contact split


def _config_c() -> ConfigBlock:
    return ConfigBlock(
        TrackedDecl("L", degree=1),
        (DivisorDecl("C1", degree=2), DivisorDecl("C2", degree=2)),
        (
            PointDecl("p", (GermDecl("C1"), GermDecl("C2")), (("C1", "C2", 3),)),
            PointDecl("q", (GermDecl("C1"), GermDecl("C2")), ()),
            PointDecl("r", (GermDecl("C1"), GermDecl("L")), (("C1", "L", 2),)),
            PointDecl("s", (GermDecl("C2"), GermDecl("L")), (("C2", "L", 2),)),
        ),
    )


def _conic_points(em: _Emitter, c1: str, c2: str) -> tuple[str, str]:
    """(triple-contact point, transverse point) of the two conic roles."""
    hits = {
        n: pt.meet(c1, c2)
        for n, pt in sorted(em.cfg.points.items())
        if c1 in pt.germs and c2 in pt.germs
    }
    triple = [n for n, v in hits.items() if v == 3]
    simple = [n for n, v in hits.items() if v == 1]
    if len(triple) != 1 or len(simple) != 1:
        raise GenerationError(f"unexpected conic contact pattern {hits}")
    return triple[0], simple[0]


def script_c(k: int) -> Script:
    em = _Emitter(_config_c())
    c1, c2 = "C1", "C2"
    for j in range(1, k + 1):
        base, qpt = _conic_points(em, c1, c2)
        em.blowup(base, "E1")
        em.blowup(em.meet_point(c1, "E1"), "E2")
        em.blowup(em.meet_point(c1, "E2"), "E3")
        em.blowup(qpt, "E0")
        c1n, c2n = f"C1_{j}", f"C2_{j}"
        em.blowup(em.meet_point(c1, "E3"), c1n)
        em.blowup(em.meet_point(c2, "E0"), c2n)
        for owner, value in ((c1, -1), (c2, -1), (c1n, -1), (c2n, -1),
                             ("E0", -2), ("E1", -2), ("E2", -2), ("E3", -2)):
            em.assert_selfint(owner, value)
        if j >= 2:
            cusp3 = em.meet_point("L", "E3")
            em.assert_multseq("L", cusp3, ((2,) * (j - 1)))
            em.assert_meet("L", "E3", cusp3, 2 * (j - 1))
            em.assert_meet("L", c2, cusp3, 2)
            cusp0 = em.meet_point("L", "E0")
            em.assert_multseq("L", cusp0, ((2,) * (j - 1)))
            em.assert_meet("L", "E0", cusp0, 2 * (j - 1))
            em.assert_meet("L", c1, cusp0, 2)
        for e in (c1, c2, "E0", "E3", "E2", "E1"):
            em.blowdown(e)
        profile, cusps = family_profile(FamilyParams("c", k=j))
        _assert_profile(em, profile, cusps)
        big, small = _conic_points(em, c1n, c2n)
        em.assert_meet("L", c1n, big, 6 * j)
        em.assert_meet("L", c2n, big, 6 * j + 2)
        em.assert_meet("L", c1n, small, 2 * j + 2)
        em.assert_meet("L", c2n, small, 2 * j)
        c1, c2 = c1n, c2n
    profile, cusps = family_profile(FamilyParams("c", k=k))
    em.finalize(profile.degree, [ms.entries for ms in cusps if ms.entries])
    return em.script()


# ---------------------------------------------------------------------------
# (d1)/(d2): alternating chain transformations


def _config_d() -> ConfigBlock:
    return ConfigBlock(
        TrackedDecl("T", degree=2),
        (DivisorDecl("C0", degree=2), DivisorDecl("L0", degree=1)),
        (
            PointDecl("p", (GermDecl("C0"), GermDecl("L0")), ()),
            PointDecl("q", (GermDecl("C0"), GermDecl("L0")), ()),
            PointDecl("r", (GermDecl("T"), GermDecl("C0")), (("T", "C0", 4),)),
            PointDecl("s", (GermDecl("T"), GermDecl("L0")), (("T", "L0", 2),)),
        ),
    )


def _d_expected(t: int):
    """Profile after t chain transformations (odd: one family, even: the other)."""
    if t % 2 == 1:
        j = (t - 1) // 2
        if j == 0:
            return 6, [(4,), (2, 2, 2, 2)]
        profile, cusps = family_profile(FamilyParams("d2", k=j))
        return profile.degree, [ms.entries for ms in cusps if ms.entries]
    profile, cusps = family_profile(FamilyParams("d1", k=t // 2))
    return profile.degree, [ms.entries for ms in cusps if ms.entries]


def _script_d(transforms: int) -> Script:
    em = _Emitter(_config_d())
    c, ln = "C0", "L0"
    for t in range(1, transforms + 1):
        # the chain starts at the conic/line intersection point where the
        # tracked curve has the smaller contact with the conic role
        tracked = em.cfg.tracked.name
        hits = sorted(
            (pt.meet(tracked, c), n)
            for n, pt in sorted(em.cfg.points.items())
            if c in pt.germs and ln in pt.germs
        )
        if len(hits) != 2:
            raise GenerationError(f"expected two conic/line points, found {hits}")
        start = hits[0][1]
        e1, e2, e3 = f"E1_{t}", f"E2_{t}", f"E3_{t}"
        em.blowup(start, e1)
        em.blowup(em.meet_point(e1, c), e2)
        em.blowup(em.meet_point(e2, c), e3)
        lnew, cnew = f"L{t}", f"C{t}"
        em.blowup(em.meet_point(e3, c), lnew)
        em.blowup(em.meet_point(ln, c), cnew)
        for owner, value in ((c, -1), (ln, -1), (e1, -2), (e2, -2), (e3, -2),
                             (lnew, -1), (cnew, -1)):
            em.assert_selfint(owner, value)
        for e in (c, ln, e1, e2, e3):
            em.blowdown(e)
        degree, cusps = _d_expected(t)
        em.assert_selfint(tracked, degree ** 2)
        found = em.cusp_points()
        if sorted(found.values(), reverse=True) != sorted(cusps, reverse=True):
            raise GenerationError(
                f"transform {t}: cusps {sorted(found.values())} != claimed {sorted(cusps)}"
            )
        for point, entries in found.items():
            em.assert_multseq(tracked, point, entries)
        c, ln = cnew, lnew
    degree, cusps = _d_expected(transforms)
    em.finalize(degree, cusps)
    return em.script()


def script_d1(k: int) -> Script:
    return _script_d(2 * k)


def script_d2(k: int) -> Script:
    return _script_d(2 * k + 1)


# ---------------------------------------------------------------------------
# the shipped corpus


_HEADERS = {
    "a": (
        "# Cremona induction on an explicit bicuspidal curve: each step blows up\n"
        "# the base point of the two helper lines, the transverse point of the\n"
        "# tracked curve with the first line, and the infinitely near point on\n"
        "# the second line, then contracts the two lines and the first\n"
        "# exceptional divisor.\n"
    ),
    "b": (
        "# Two conics with a single 4-fold contact point and a tracked line: a\n"
        "# chain of four blow-ups at the contact point plus two side blow-ups,\n"
        "# then six contractions, grow both cusps of the tracked curve.\n"
    ),
    "c": (
        "# Two conics meeting with contact 3 + 1 and a tracked bitangent line:\n"
        "# three blow-ups at the triple contact, one at the transverse point,\n"
        "# two side blow-ups, then six contractions.\n"
    ),
    "d": (
        "# A conic and a secant line rolled along a chain of four blow-ups and\n"
        "# one side blow-up, then five contractions; each pass swaps the conic\n"
        "# and line roles and alternates between the two profile families.\n"
    ),
    "e": (
        "# A unicuspidal quartic with an inflectional tangent and the line of\n"
        "# maximal contact at the cusp; the same Cremona step as for the (a)\n"
        "# families grows both cusps.\n"
    ),
}


def standard_corpus() -> dict[str, str]:
    """Filename -> script text for every shipped construction replay."""
    out: dict[str, str] = {}
    for family in ("a1", "a2", "a3", "a4"):
        for l in (2, 3):
            for m in (2, 3):
                text = _HEADERS["a"] + render(script_a(family, l, m))
                out[f"{family}_l{l}_m{m}.cusp"] = text
    for k in range(1, 7):
        out[f"b_k{k}.cusp"] = _HEADERS["b"] + render(script_b(k))
        out[f"c_k{k}.cusp"] = _HEADERS["c"] + render(script_c(k))
        out[f"e_k{k}.cusp"] = _HEADERS["e"] + render(script_e(k))
    for k in (1, 2):
        out[f"d1_k{k}.cusp"] = _HEADERS["d"] + render(script_d1(k))
        out[f"d2_k{k}.cusp"] = _HEADERS["d"] + render(script_d2(k))
    return out
