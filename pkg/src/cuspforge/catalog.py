"""Catalog of ten families of rational bicuspidal plane curves.

Each family instance carries the printed degree and both cusp encodings
(multiplicity sequences and Newton pairs); ``verify_instance`` machine-checks
the genus identity and the agreement of the two encodings.  The catalog also
ships the explicit initial curves behind the four three-parameter families
and the degree-14 parametrized curve.

Related families in the literature: the u = 2 slices of (a1)-(a4) are
Tono's four two-parameter bicuspidal series (with parameter a = l-1, l, l+1,
l-1 respectively), the l-edge slices of (a1)-(a3) are Fenske's 6th, 5th and
4th bicuspidal series.  These correspondences are documentation only; the
verification grids never special-case them.
"""
from __future__ import annotations

from dataclasses import dataclass

from cuspforge.invariants import (
    CurveProfile,
    CuspType,
    GenusReport,
    MultiplicitySequence,
    NewtonPairs,
    cbar_squared,
    char_to_multseq,
    genus_check,
    newton_to_char,
    normalize_multseq,
    validate_newton_pairs,
)
from cuspforge.polynomials import dehomogenize, parse_polynomial
from cuspforge.series import (
    LocalBranch,
    ProjectiveParametrization,
    char_from_branch,
    default_precision,
    multseq_from_branch,
    newton_puiseux_rational,
    pullback_order,
    with_precision_retry,
)

FAMILY_IDS = ("a1", "a2", "a3", "a4", "b", "c", "d1", "d2", "e", "f")


@dataclass(frozen=True)
class FamilyParams:
    family: str
    u: int | None = None
    l: int | None = None
    m: int | None = None
    k: int | None = None

    def label(self) -> str:
        parts = [self.family]
        for name in ("u", "l", "m", "k"):
            v = getattr(self, name)
            if v is not None:
                parts.append(f"{name}={v}")
        return " ".join(parts)


@dataclass(frozen=True)
class FamilyInstance:
    params: FamilyParams
    profile: CurveProfile
    cusps: tuple[MultiplicitySequence, ...]
    pairs: tuple[NewtonPairs, ...]


def _rep(n: int, k: int) -> list[int]:
    return [n] * k


def _family_data(p: FamilyParams) -> tuple[int, list[list[int]], list[list[tuple[int, int]]]]:
    """Degree, cusp multiplicity entries and Newton pairs, before normalization."""
    f, u, l, m, k = p.family, p.u, p.l, p.m, p.k
    if f == "a1":
        d = u * (l - 1) * m + m - u + 1
        ms = [
            [(u - 1) * (l - 1) * m + m - u + 1] + _rep(m * (l - 1) - 1, u - 1) + _rep(m, l - 2) + [m - 1],
            _rep((l - 1) * m, u) + _rep(m, l - 1),
        ]
        np = [
            [((u - 1) * (l - 1) * m + m - u + 1, u * (l - 1) * m + m - u)],
            [(l - 1, u * (l - 1) + 1), (m, 1)],
        ]
    elif f == "a2":
        d = u * l * m + m + 1
        ms = [
            _rep(l * m + 1, u) + _rep(m, l),
            [(u - 1) * m * l + m] + _rep(l * m, u - 1) + _rep(m, l),
        ]
        np = [
            [(l * m + 1, m * (u * l + 1) + u)],
            [((u - 1) * l + 1, u * l + 1), (m, 1)],
        ]
    elif f == "a3":
        d = u * l * m + u * m + 1
        ms = [
            _rep((l + 1) * m + 1, u - 1) + [l * m + 1] + _rep(m, l),
            [(u - 1) * (l + 1) * m] + _rep((l + 1) * m, u - 1) + _rep(m, l + 1),
        ]
        np = [
            [(m * (l + 1) + 1, m * (u * (l + 1) - 1) + u)],
            [(u - 1, u), (l + 1, 1), (m, 1)],
        ]
    elif f == "a4":
        d = u * l * m - u + 1
        ms = [
            [(u - 1) * (l * m - 1)] + _rep(l * m - 1, u - 1) + _rep(m, l - 1) + [m - 1],
            _rep(l * m, u - 1) + [(l - 1) * m] + _rep(m, l - 1),
        ]
        np = [
            [(u - 1, u), (l * m - 1, m)],
            [(l, u * l - 1), (m, 1)],
        ]
    elif f == "b":
        d = 2 * k + 1
        ms = [_rep(k, 4), _rep(2, k)]
        np = [[(k, 4 * k + 1)], [(2, 2 * k + 1)]]
    elif f == "c":
        d = 4 * k + 1
        ms = [_rep(2 * k, 3) + _rep(2, k), [2 * k] + _rep(2, k)]
        np = [[(k, 3 * k + 1), (2, 1)], [(k, k + 1), (2, 1)]]
    elif f == "d1":
        d = 8 * k + 2
        ms = [[4 * k + 2, 4 * k - 2] + _rep(4, k - 1) + _rep(2, 2), _rep(4 * k, 2) + _rep(4, k)]
        np = [[(2 * k + 1, 4 * k), (2, 1)], [(k, 2 * k + 1), (4, 1)]]
    elif f == "d2":
        d = 8 * k + 6
        ms = [[4 * k + 4, 4 * k] + _rep(4, k), _rep(4 * k + 2, 2) + _rep(4, k) + _rep(2, 2)]
        np = [[(k + 1, 2 * k + 1), (4, 1)], [(2 * k + 1, 4 * k + 4), (2, 1)]]
    elif f == "e":
        d = 3 * k + 4
        ms = [[3 * k] + _rep(3, k), _rep(4, k) + _rep(2, 3)]
        np = [[(k, k + 1), (3, 1)], [(2, 2 * k + 1), (2, 3)]]
    elif f == "f":
        d = 14
        ms = [[8, 4, 4, 2, 2], [6, 6, 3, 3]]
        np = [[(2, 3), (2, 1), (2, 1)], [(2, 5), (3, 1)]]
    else:
        raise ValueError(f"unknown family {f!r}")
    return d, ms, np


_RANGES = {
    "a1": {"u": 2, "l": 2, "m": 2},
    "a2": {"u": 2, "l": 1, "m": 2},
    "a3": {"u": 2, "l": 1, "m": 2},
    "a4": {"u": 2, "l": 2, "m": 2},
    "b": {"k": 2},
    "c": {"k": 1},
    "d1": {"k": 1},
    "d2": {"k": 1},
    "e": {"k": 1},
    "f": {},
}


def check_params(p: FamilyParams) -> None:
    if p.family not in _RANGES:
        raise ValueError(f"unknown family {p.family!r}")
    needed = _RANGES[p.family]
    for name in ("u", "l", "m", "k"):
        v = getattr(p, name)
        if name in needed:
            if v is None or v < needed[name]:
                raise ValueError(f"family {p.family}: needs {name} >= {needed[name]}, got {v}")
        elif v is not None:
            raise ValueError(f"family {p.family}: parameter {name} does not apply")


def _canonical_profile(d: int, cusps) -> CurveProfile:
    nonempty = sorted((ms for ms in cusps if ms.entries), key=lambda ms: ms.entries, reverse=True)
    return CurveProfile(d, tuple(nonempty))


def family_profile(p: FamilyParams) -> tuple[CurveProfile, tuple[MultiplicitySequence, ...]]:
    """Degree and normalized cusps from the family formulas (no range check).

    The profile's cusps are in canonical (descending) order; the second value
    keeps the catalog's printed order.
    """
    d, ms_raw, _ = _family_data(p)
    cusps = tuple(normalize_multseq(entries) for entries in ms_raw)
    return _canonical_profile(d, cusps), cusps


def instantiate(p: FamilyParams) -> FamilyInstance:
    check_params(p)
    d, ms_raw, np_raw = _family_data(p)
    cusps = tuple(normalize_multseq(entries) for entries in ms_raw)
    pairs = tuple(validate_newton_pairs(ps) for ps in np_raw)
    return FamilyInstance(p, _canonical_profile(d, cusps), cusps, pairs)


@dataclass(frozen=True)
class InstanceReport:
    instance: FamilyInstance
    genus: GenusReport
    encodings_match: tuple[bool, ...]
    cbar: int

    @property
    def ok(self) -> bool:
        return self.genus.ok and all(self.encodings_match)


def verify_instance(fi: FamilyInstance) -> InstanceReport:
    """Genus identity plus agreement of the two printed cusp encodings."""
    matches = []
    for ms, np_ in zip(fi.cusps, fi.pairs):
        derived = char_to_multseq(newton_to_char(np_))
        matches.append(derived == ms)
    return InstanceReport(fi, genus_check(fi.profile), tuple(matches), cbar_squared(fi.profile))


def default_grid(umax: int = 6, lmax: int = 6, mmax: int = 6, kmax: int = 12, families=None):
    """All in-range parameter tuples up to the given bounds, in catalog order."""
    for f in families or FAMILY_IDS:
        if f in ("a1", "a4"):
            for u in range(2, umax + 1):
                for l in range(2, lmax + 1):
                    for m in range(2, mmax + 1):
                        yield FamilyParams(f, u=u, l=l, m=m)
        elif f in ("a2", "a3"):
            for u in range(2, umax + 1):
                for l in range(1, lmax + 1):
                    for m in range(2, mmax + 1):
                        yield FamilyParams(f, u=u, l=l, m=m)
        elif f == "b":
            for k in range(2, kmax + 1):
                yield FamilyParams(f, k=k)
        elif f in ("c", "d1", "d2", "e"):
            for k in range(1, kmax + 1):
                yield FamilyParams(f, k=k)
        elif f == "f":
            yield FamilyParams(f)
        else:
            raise ValueError(f"unknown family {f!r}")


# ---------------------------------------------------------------------------
# explicit initial curves of the (a) families


@dataclass(frozen=True)
class LocalData:
    point: tuple[int, int, int]
    multseq: MultiplicitySequence
    pairs: NewtonPairs
    tangent: str  # projective line, as polynomial text
    tangent_order: int


@dataclass(frozen=True)
class InitialCurve:
    family: str
    l: int
    m: int
    degree: int
    equation: str
    at_p: LocalData
    at_q: LocalData

    @property
    def profile(self) -> CurveProfile:
        return CurveProfile(self.degree, (self.at_p.multseq, self.at_q.multseq))


def initial_curve(family: str, l: int, m: int) -> InitialCurve:
    """The explicit bicuspidal curve a Cremona induction starts from."""
    if family in ("a1", "a4"):
        if l < 2 or m < 2:
            raise ValueError(f"family {family}: needs l >= 2 and m >= 2")
        eq = f"(y^{l - 1}*z - x^{l})^{m} - x^{l * m - 1}*y"
        d = l * m
        at_p = LocalData(
            (0, 1, 0),
            normalize_multseq(_rep(m, l - 1) + [m - 1]),
            validate_newton_pairs([(m, l * m - 1)]),
            "z",
            l * m - 1,
        )
        at_q = LocalData(
            (0, 0, 1),
            normalize_multseq([(l - 1) * m] + _rep(m, l - 1)),
            validate_newton_pairs([(l - 1, l), (m, 1)]),
            "y",
            l * m,
        )
    elif family in ("a2", "a3"):
        if l < 1 or m < 2:
            raise ValueError(f"family {family}: needs l >= 1 and m >= 2")
        eq = f"x*(y*x^{l} + z^{l + 1})^{m} - z^{(l + 1) * m + 1}"
        d = (l + 1) * m + 1
        at_p = LocalData(
            (0, 1, 0),
            normalize_multseq([l * m + 1] + _rep(m, l)),
            validate_newton_pairs([(l * m + 1, (l + 1) * m + 1)]),
            "x",
            (l + 1) * m + 1,
        )
        at_q = LocalData(
            (1, 0, 0),
            normalize_multseq(_rep(m, l + 1)),
            validate_newton_pairs([(m, (l + 1) * m + 1)]),
            "y",
            (l + 1) * m,
        )
    else:
        raise ValueError(f"no initial curve for family {family!r}")
    return InitialCurve(family, l, m, d, eq, at_p, at_q)


@dataclass(frozen=True)
class LocalCheck:
    point: tuple[int, int, int]
    multseq_ok: bool
    pairs_ok: bool
    tangent_ok: bool
    computed_multseq: MultiplicitySequence
    computed_tangent_order: int


@dataclass(frozen=True)
class InitialCurveReport:
    curve: InitialCurve
    cbar: int
    checks: tuple[LocalCheck, ...]

    @property
    def ok(self) -> bool:
        return self.cbar == 0 and all(
            c.multseq_ok and c.pairs_ok and c.tangent_ok for c in self.checks
        )


def _analyze_point(equation: str, data: LocalData, prec: int) -> LocalCheck:
    f3 = parse_polynomial(equation, ("x", "y", "z"))
    local, _ = dehomogenize(f3, data.point)
    t3 = parse_polynomial(data.tangent, ("x", "y", "z"))
    tangent_local, _ = dehomogenize(t3, data.point)
    branches = newton_puiseux_rational(local, prec)
    if len(branches) != 1:
        raise ValueError(
            f"expected a unibranch germ at {data.point}, found {len(branches)} branches"
        )
    branch: LocalBranch = branches[0]
    ms = multseq_from_branch(branch)
    ce = char_from_branch(branch)
    order = pullback_order(branch, tangent_local)
    return LocalCheck(
        data.point,
        ms == data.multseq,
        ce == newton_to_char(data.pairs),
        order == data.tangent_order,
        ms,
        order,
    )


def verify_initial_curve(family: str, l: int, m: int, prec: int | None = None) -> InitialCurveReport:
    """Resolve the explicit equation at both singular points and compare claims."""
    curve = initial_curve(family, l, m)
    checks = []
    for data in (curve.at_p, curve.at_q):
        if prec is not None:
            base = prec
        else:
            # the claims bound every exponent the analysis must reach; the
            # doubling retry makes a low start safe (never a wrong answer)
            ce = newton_to_char(data.pairs)
            reach = max(data.tangent_order, ce.b[-1] if ce.b else ce.a)
            base = min(reach + 8, default_precision(curve.degree))
        checks.append(
            with_precision_retry(lambda n, d=data: _analyze_point(curve.equation, d, n), base)
        )
    return InitialCurveReport(curve, cbar_squared(curve.profile), tuple(checks))


# ---------------------------------------------------------------------------
# the degree-14 curve


_F_PARAM = (
    "3*t^14 + 3*s*t^13 + 2*s^2*t^12",
    "3*s^12*t^2 - 3*s^13*t + s^14",
    "3*s^6*t^8",
)


def parametrization_f() -> ProjectiveParametrization:
    """The explicit degree-14 parametrization with two cusps."""
    return ProjectiveParametrization(
        parse_polynomial(_F_PARAM[0], ("t", "s")),
        parse_polynomial(_F_PARAM[1], ("t", "s")),
        parse_polynomial(_F_PARAM[2], ("t", "s")),
    )


def instance_json(fi: FamilyInstance) -> dict:
    types = [CuspType.from_newton(np_) for np_ in fi.pairs]
    return {
        "family": fi.params.family,
        "params": {
            n: getattr(fi.params, n)
            for n in ("u", "l", "m", "k")
            if getattr(fi.params, n) is not None
        },
        "degree": fi.profile.degree,
        "cusps": [
            {
                "multseq": list(ms.entries),
                "newton": [[p, q] for p, q in np_.pairs],
                "char": {"a": ct.char.a, "b": list(ct.char.b)},
                "delta": ct.delta,
            }
            for ms, np_, ct in zip(fi.cusps, fi.pairs, types)
        ],
    }
