"""Exact calculus of cusp encodings and global numerology of cuspidal curves.

A cusp (unibranch plane curve singularity) is described interchangeably by

* Newton pairs ``(p_1,q_1)...(p_r,q_r)``, coprime in each pair,
* characteristic exponents ``(a; b_1,...,b_r)`` of a normalized
  parametrization ``x = t^a, y = t^b_1 + ... + t^b_r``,
* its multiplicity sequence ``[m_1,...,m_s]`` under iterated blow-ups.

Everything here is integer arithmetic; no floating point is involved.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd, prod


class EncodingError(ValueError):
    """Raised when an encoding violates its structural constraints."""


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class NewtonPairs:
    pairs: tuple[tuple[int, int], ...]

    @property
    def degenerate(self) -> bool:
        """True when some p_i equals 1 (folds away in the exponent chain)."""
        return any(p == 1 for p, _ in self.pairs)

    def __str__(self) -> str:
        return format_newton_pairs(self)


@dataclass(frozen=True)
class CharacteristicExponents:
    a: int
    b: tuple[int, ...]

    def __str__(self) -> str:
        return format_char_exponents(self)


@dataclass(frozen=True)
class MultiplicitySequence:
    entries: tuple[int, ...]

    def __str__(self) -> str:
        return format_multseq(self)

    @property
    def multiplicity(self) -> int:
        """First entry, or 1 for a smooth germ."""
        return self.entries[0] if self.entries else 1


@dataclass(frozen=True)
class CuspType:
    """One topological type with all three encodings, mutually consistent."""

    newton: NewtonPairs
    char: CharacteristicExponents
    multseq: MultiplicitySequence

    @classmethod
    def from_newton(cls, pairs) -> "CuspType":
        np_ = pairs if isinstance(pairs, NewtonPairs) else validate_newton_pairs(pairs)
        ce = newton_to_char(np_)
        return cls(np_, ce, char_to_multseq(ce))

    @property
    def delta(self) -> int:
        return multseq_delta(self.multseq)


@dataclass(frozen=True)
class CurveProfile:
    """Degree plus the multiplicity sequences of all cusps of a plane curve."""

    degree: int
    cusps: tuple[MultiplicitySequence, ...]

    def __post_init__(self):
        if self.degree < 1:
            raise EncodingError(f"degree must be >= 1, got {self.degree}")


# ---------------------------------------------------------------------------
# constructors / validation


def validate_newton_pairs(pairs) -> NewtonPairs:
    """Validate a raw list of (p, q) pairs.

    Pairs with p_i = 1 are accepted (they occur in printed classifications)
    and are folded away by the conversion to characteristic exponents.
    """
    ps = tuple((int(p), int(q)) for p, q in pairs)
    if not ps:
        raise EncodingError("at least one Newton pair is required")
    for i, (p, q) in enumerate(ps):
        if p < 1 or q < 1:
            raise EncodingError(f"pair {i + 1}: entries must be positive, got ({p},{q})")
        if gcd(p, q) != 1:
            raise EncodingError(f"pair {i + 1}: ({p},{q}) is not coprime")
    p1, q1 = ps[0]
    if p1 > 1 and p1 >= q1:
        raise EncodingError(f"first pair must satisfy p < q, got ({p1},{q1})")
    return NewtonPairs(ps)


def validate_char_exponents(a: int, b) -> CharacteristicExponents:
    bs = tuple(int(x) for x in b)
    if a < 1:
        raise EncodingError(f"multiplicity must be positive, got {a}")
    last = a
    for x in bs:
        if x <= last:
            raise EncodingError(f"exponents must increase strictly: {a}, {bs}")
        last = x
    g = a
    for x in bs:
        g2 = gcd(g, x)
        if g2 == g:
            raise EncodingError(f"exponent {x} does not decrease the gcd chain of ({a}; {bs})")
        g = g2
    if g != 1:
        raise EncodingError(f"gcd chain of ({a}; {bs}) ends at {g}, not 1")
    return CharacteristicExponents(a, bs)


def normalize_multseq(entries) -> MultiplicitySequence:
    """Drop entries equal to 1 and check the result is non-increasing >= 2."""
    kept = tuple(int(m) for m in entries if int(m) > 1)
    if any(int(m) < 1 for m in entries):
        raise EncodingError(f"multiplicities must be positive: {list(entries)}")
    for x, y in zip(kept, kept[1:]):
        if x < y:
            raise EncodingError(f"multiplicity sequence must be non-increasing: {list(kept)}")
    return MultiplicitySequence(kept)


# ---------------------------------------------------------------------------
# conversions


def newton_to_char(np_: NewtonPairs) -> CharacteristicExponents:
    """Accumulate the nested fractional-power exponents and keep the gcd drops.

    With a = prod(p_i), the candidate exponents are
    e_i = sum_{j<=i} q_j * prod_{k>j} p_k; exactly those that strictly
    decrease the running gcd are characteristic.  Pairs with p_i = 1 never
    decrease it, so degenerate pairs fold away here.
    """
    ps = [p for p, _ in np_.pairs]
    a = prod(ps)
    tail = a
    e = 0
    g = a
    b: list[int] = []
    for i, (p, q) in enumerate(np_.pairs):
        tail //= p
        e += q * tail
        g2 = gcd(g, e)
        if g2 < g:
            b.append(e)
            g = g2
    return validate_char_exponents(a, b)


def char_to_newton(ce: CharacteristicExponents) -> NewtonPairs:
    """Invert the exponent accumulation; output pairs all have p_i >= 2."""
    if not ce.b:
        raise EncodingError("a smooth germ has no Newton pairs")
    pairs = []
    g = ce.a
    prev = 0
    for x in ce.b:
        g2 = gcd(g, x)
        pairs.append((g // g2, (x - prev) // g2))
        g, prev = g2, x
    return NewtonPairs(tuple(pairs))


def _euclid_mults(p: int, q: int) -> list[int]:
    """Minima of the subtractive gcd chain on (p, q), in order."""
    out: list[int] = []
    while p > 0 and q > 0:
        if p > q:
            p, q = q, p
        k, r = divmod(q, p)
        out.extend([p] * k)
        p, q = r, p
    return out


def char_to_multseq(ce: CharacteristicExponents) -> MultiplicitySequence:
    """Multiplicity sequence as concatenated Euclidean blocks.

    Block i is the subtractive gcd chain on (g_{i-1}, b_i - b_{i-1}) with
    g_0 = a and b_0 = 0; trailing 1-entries are dropped.  Agrees with the
    blow-up oracle on parametrized branches (tested against it).
    """
    out: list[int] = []
    g = ce.a
    prev = 0
    for x in ce.b:
        d = x - prev
        out.extend(_euclid_mults(g, d))
        g = gcd(g, d)
        prev = x
    return normalize_multseq(out)


# ---------------------------------------------------------------------------
# numeric invariants


def multseq_delta(ms: MultiplicitySequence) -> int:
    """Delta invariant: sum of m(m-1)/2 over the multiplicity sequence."""
    return sum(m * (m - 1) // 2 for m in ms.entries)


@dataclass(frozen=True)
class GenusReport:
    ok: bool
    lhs: int
    rhs: int
    deltas: tuple[int, ...]


def genus_check(cp: CurveProfile) -> GenusReport:
    """Rationality test: (d-1)(d-2)/2 must equal the sum of the deltas."""
    d = cp.degree
    deltas = tuple(multseq_delta(ms) for ms in cp.cusps)
    lhs = (d - 1) * (d - 2) // 2
    rhs = sum(deltas)
    return GenusReport(lhs == rhs, lhs, rhs, deltas)


def cbar_squared(cp: CurveProfile) -> int:
    """Self-intersection of the strict transform under minimal good resolution.

    d^2 minus the squares of all multiplicities minus the last multiplicity
    of each cusp; d^2 for a smooth curve.
    """
    total = cp.degree ** 2
    for ms in cp.cusps:
        total -= sum(m * m for m in ms.entries)
        if ms.entries:
            total -= ms.entries[-1]
    return total


# ---------------------------------------------------------------------------
# textual encodings


_PAIR_RE = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")
_ENTRY_RE = re.compile(r"(\d+)(?:_(\d+))?$")


def parse_newton_pairs(text: str) -> NewtonPairs:
    """Parse '(p1,q1)(p2,q2)...'."""
    s = text.strip()
    pairs = []
    pos = 0
    while pos < len(s):
        m = _PAIR_RE.match(s, pos)
        if not m:
            raise EncodingError(f"cannot parse Newton pairs at ...{s[pos:]!r}")
        pairs.append((int(m.group(1)), int(m.group(2))))
        pos = m.end()
        while pos < len(s) and s[pos].isspace():
            pos += 1
    if not pairs:
        raise EncodingError(f"no Newton pairs in {text!r}")
    return validate_newton_pairs(pairs)


def format_newton_pairs(np_: NewtonPairs) -> str:
    return "".join(f"({p},{q})" for p, q in np_.pairs)


def parse_char_exponents(text: str) -> CharacteristicExponents:
    """Parse '(a;b1,b2,...)'; '(a;)' or '(a)' denote a smooth germ only if a=1."""
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise EncodingError(f"characteristic exponents must look like '(a;b1,b2)': {text!r}")
    inner = s[1:-1]
    head, _, rest = inner.partition(";")
    try:
        a = int(head.strip())
    except ValueError:
        raise EncodingError(f"bad multiplicity in {text!r}") from None
    rest = rest.strip()
    bs = []
    if rest:
        for piece in rest.split(","):
            try:
                bs.append(int(piece.strip()))
            except ValueError:
                raise EncodingError(f"bad exponent {piece!r} in {text!r}") from None
    return validate_char_exponents(a, bs)


def format_char_exponents(ce: CharacteristicExponents) -> str:
    return f"({ce.a};{','.join(str(x) for x in ce.b)})"


def parse_multseq(text: str) -> MultiplicitySequence:
    """Parse '[8,4,4,2,2]', with optional repetition shorthand '[4_2,2_3]'."""
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise EncodingError(f"multiplicity sequence must be bracketed: {text!r}")
    inner = s[1:-1].strip()
    entries: list[int] = []
    if inner:
        for piece in inner.split(","):
            m = _ENTRY_RE.match(piece.strip())
            if not m:
                raise EncodingError(f"bad multiplicity entry {piece!r} in {text!r}")
            value = int(m.group(1))
            count = int(m.group(2)) if m.group(2) is not None else 1
            entries.extend([value] * count)
    return normalize_multseq(entries)


def format_multseq(ms: MultiplicitySequence) -> str:
    return "[" + ",".join(str(m) for m in ms.entries) + "]"


def cusp_type_json(ct: CuspType) -> dict:
    return {
        "newton": [[p, q] for p, q in ct.newton.pairs],
        "char": {"a": ct.char.a, "b": list(ct.char.b)},
        "multseq": list(ct.multseq.entries),
        "delta": ct.delta,
    }
