"""Sparse exact polynomials over the rationals, plus the tiny input language.

Polynomials are dicts mapping exponent tuples to nonzero Fractions.  The
parser accepts integer coefficients, the variables it is given, and the
operators + - * ^ with parentheses, e.g. ``(y*z - x^2)^3 - x^5*y``.
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import comb, gcd

Term = tuple[int, ...]
Poly = dict[Term, Fraction]


class PolynomialError(ValueError):
    pass


# ---------------------------------------------------------------------------
# arithmetic


def p_zero() -> Poly:
    return {}


def p_const(c, nvars: int) -> Poly:
    c = Fraction(c)
    return {} if c == 0 else {(0,) * nvars: c}


def p_var(index: int, nvars: int) -> Poly:
    e = [0] * nvars
    e[index] = 1
    return {tuple(e): Fraction(1)}


def p_add(f: Poly, g: Poly) -> Poly:
    out = dict(f)
    for t, c in g.items():
        s = out.get(t, Fraction(0)) + c
        if s:
            out[t] = s
        else:
            out.pop(t, None)
    return out


def p_neg(f: Poly) -> Poly:
    return {t: -c for t, c in f.items()}


def p_sub(f: Poly, g: Poly) -> Poly:
    return p_add(f, p_neg(g))


def p_mul(f: Poly, g: Poly) -> Poly:
    out: Poly = {}
    for t1, c1 in f.items():
        for t2, c2 in g.items():
            t = tuple(a + b for a, b in zip(t1, t2))
            s = out.get(t, Fraction(0)) + c1 * c2
            if s:
                out[t] = s
            else:
                out.pop(t, None)
    return out


def p_scale(f: Poly, c) -> Poly:
    c = Fraction(c)
    if c == 0:
        return {}
    return {t: v * c for t, v in f.items()}


def p_pow(f: Poly, n: int) -> Poly:
    if n < 0:
        raise PolynomialError("negative power")
    nvars = _nvars(f)
    out = p_const(1, nvars) if nvars is not None else {(): Fraction(1)}
    base = f
    while n:
        if n & 1:
            out = p_mul(out, base)
        base = p_mul(base, base)
        n >>= 1
    return out


def _nvars(f: Poly) -> int | None:
    for t in f:
        return len(t)
    return None


def p_eval(f: Poly, point) -> Fraction:
    total = Fraction(0)
    for t, c in f.items():
        v = c
        for e, x in zip(t, point):
            v *= Fraction(x) ** e
        total += v
    return total


def p_degree(f: Poly) -> int:
    return max((sum(t) for t in f), default=-1)


def p_is_homogeneous(f: Poly) -> bool:
    degs = {sum(t) for t in f}
    return len(degs) <= 1


# ---------------------------------------------------------------------------
# parsing


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            break
        if m.group(1) is not None:
            tokens.append(("int", m.group(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2)))
        else:
            ch = m.group(3)
            if ch in "+-*^()":
                tokens.append((ch, ch))
            elif ch.strip():
                raise PolynomialError(f"unexpected character {ch!r} in polynomial")
        pos = m.end()
    tokens.append(("end", ""))
    return tokens


class _Parser:
    def __init__(self, tokens, variables):
        self.tokens = tokens
        self.pos = 0
        self.variables = list(variables)
        self.nvars = len(self.variables)

    def peek(self):
        return self.tokens[self.pos][0]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expr(self) -> Poly:
        if self.peek() == "-":
            self.next()
            out = p_neg(self.term())
        else:
            out = self.term()
        while self.peek() in "+-":
            op, _ = self.next()
            rhs = self.term()
            out = p_add(out, rhs) if op == "+" else p_sub(out, rhs)
        return out

    def term(self) -> Poly:
        out = self.factor()
        while self.peek() == "*":
            self.next()
            out = p_mul(out, self.factor())
        return out

    def factor(self) -> Poly:
        base = self.atom()
        if self.peek() == "^":
            self.next()
            kind, val = self.next()
            if kind != "int":
                raise PolynomialError("exponent must be a literal integer")
            base = p_pow(base, int(val))
        return base

    def atom(self) -> Poly:
        kind, val = self.next()
        if kind == "int":
            return p_const(int(val), self.nvars)
        if kind == "name":
            if val not in self.variables:
                raise PolynomialError(f"unknown variable {val!r} (allowed: {self.variables})")
            return p_var(self.variables.index(val), self.nvars)
        if kind == "(":
            inner = self.expr()
            kind2, _ = self.next()
            if kind2 != ")":
                raise PolynomialError("missing closing parenthesis")
            return inner
        if kind == "-":
            return p_neg(self.atom())
        raise PolynomialError(f"unexpected token {val!r} in polynomial")


def parse_polynomial(text: str, variables=("x", "y")) -> Poly:
    parser = _Parser(_tokenize(text), variables)
    out = parser.expr()
    if parser.peek() != "end":
        raise PolynomialError(f"trailing input in polynomial {text!r}")
    return out


def format_polynomial(f: Poly, variables=("x", "y")) -> str:
    if not f:
        return "0"
    pieces = []
    for t in sorted(f, key=lambda t: (-sum(t), t)):
        c = f[t]
        mono = "*".join(
            f"{v}^{e}" if e > 1 else v for v, e in zip(variables, t) if e > 0
        )
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        sign = "-" if c < 0 else "+"
        pieces.append((sign, body))
    head_sign, head = pieces[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# substitutions used by the local analysis


def p_shift(f: Poly, offsets) -> Poly:
    """Substitute variable_i -> variable_i + offset_i (binomial expansion)."""
    offsets = [Fraction(v) for v in offsets]
    out: Poly = {}
    for t, c in f.items():
        expansions = []
        for e, off in zip(t, offsets):
            if off == 0:
                expansions.append([(e, Fraction(1))])
            else:
                expansions.append([(k, comb(e, k) * off ** (e - k)) for k in range(e + 1)])
        stack = [((), c)]
        for choices in expansions:
            stack = [(t0 + (k,), c0 * w) for t0, c0 in stack for k, w in choices]
        for t0, c0 in stack:
            s = out.get(t0, Fraction(0)) + c0
            if s:
                out[t0] = s
            else:
                out.pop(t0, None)
    return out


def dehomogenize(f3: Poly, point) -> tuple[Poly, dict]:
    """Local equation at a projective point, in chart coordinates (x, y).

    The chart divides by the last nonzero homogeneous coordinate; the two
    remaining coordinates, kept in their original order, become (x, y), and
    the point is translated to the origin.  Returns the chart polynomial and
    a description of the chart.
    """
    pt = [Fraction(v) for v in point]
    if len(pt) != 3 or all(v == 0 for v in pt):
        raise PolynomialError(f"bad projective point {point!r}")
    pivot = max(i for i, v in enumerate(pt) if v != 0)
    scale = pt[pivot]
    affine = [v / scale for v in pt]
    others = [i for i in range(3) if i != pivot]
    out: Poly = {}
    for t, c in f3.items():
        key = (t[others[0]], t[others[1]])
        s = out.get(key, Fraction(0)) + c
        if s:
            out[key] = s
        else:
            out.pop(key, None)
    shifted = p_shift(out, (affine[others[0]], affine[others[1]]))
    if shifted and p_eval(shifted, (0, 0)) != 0:
        raise PolynomialError(f"point {point!r} does not lie on the curve")
    names = ("x", "y", "z")
    chart = {
        "pivot": names[pivot],
        "x": names[others[0]],
        "y": names[others[1]],
        "center": (affine[others[0]], affine[others[1]]),
    }
    return shifted, chart


def p_divides_var(f: Poly, index: int) -> bool:
    return bool(f) and all(t[index] > 0 for t in f)


def p_div_var(f: Poly, index: int, power: int = 1) -> Poly:
    out = {}
    for t, c in f.items():
        if t[index] < power:
            raise PolynomialError("not divisible")
        t2 = list(t)
        t2[index] -= power
        out[tuple(t2)] = c
    return out


def p_diff(f: Poly, index: int) -> Poly:
    out: Poly = {}
    for t, c in f.items():
        if t[index] == 0:
            continue
        t2 = list(t)
        t2[index] -= 1
        out[tuple(t2)] = c * t[index]
    return out


# ---------------------------------------------------------------------------
# univariate helpers (rational roots, gcd)


def univ_normalize(coeffs: list[Fraction]) -> list[Fraction]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return out


def univ_eval(coeffs: list[Fraction], x: Fraction) -> Fraction:
    total = Fraction(0)
    for c in reversed(coeffs):
        total = total * x + c
    return total


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def rational_roots(coeffs: list[Fraction]) -> tuple[list[tuple[Fraction, int]], int]:
    """All rational roots with multiplicities, plus the leftover degree.

    The leftover degree is the degree of the factor with no rational roots
    (0 when the polynomial splits completely over the rationals).
    """
    cs = univ_normalize(coeffs)
    if not cs:
        raise PolynomialError("zero polynomial has every root")
    # strip roots at 0
    zero_mult = 0
    while cs and cs[0] == 0:
        zero_mult += 1
        cs = cs[1:]
    den = 1
    for c in cs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in cs]
    content = 0
    for v in ints:
        content = gcd(content, v)
    if content > 1:
        ints = [v // content for v in ints]
    roots: list[tuple[Fraction, int]] = []
    if zero_mult:
        roots.append((Fraction(0), zero_mult))
    while len(ints) > 1:
        while len(ints) > 1 and ints[0] == 0:
            ints = ints[1:]  # cannot occur after the initial strip; defensive
        if len(ints) <= 1:
            break
        found = None
        lead, const = ints[-1], ints[0]
        for num in _divisors(const):
            for d in _divisors(lead):
                for sign in (1, -1):
                    cand = Fraction(sign * num, d)
                    if univ_eval([Fraction(v) for v in ints], cand) == 0:
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            break
        # synthetic division by (x - found)
        mult = 0
        while True:
            quo = [Fraction(0)] * (len(ints) - 1)
            carry = Fraction(0)
            for i in range(len(ints) - 1, 0, -1):
                carry = Fraction(ints[i]) + carry * found
                quo[i - 1] = carry
            rem = Fraction(ints[0]) + carry * found
            if rem != 0:
                break
            mult += 1
            den2 = 1
            for c in quo:
                den2 = den2 * c.denominator // gcd(den2, c.denominator)
            ints = [int(c * den2) for c in quo]
            if len(ints) <= 1:
                break
        roots.append((found, mult))
    leftover = len(ints) - 1 if len(ints) > 1 else 0
    return roots, leftover


def univ_mod(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    """Remainder of a modulo b (b nonzero)."""
    a = univ_normalize(a)
    b = univ_normalize(b)
    if not b:
        raise PolynomialError("division by zero polynomial")
    a = list(a)
    while len(a) >= len(b):
        factor = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] -= factor * c
        a = univ_normalize(a)
        if not a:
            break
    return a


def univ_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    """Monic gcd of two univariate polynomials."""
    a, b = univ_normalize(a), univ_normalize(b)
    while b:
        a, b = b, univ_mod(a, b)
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a
