"""Exact truncated power series over the rationals and branch-level algorithms.

A :class:`TruncatedSeries` knows its coefficients below an explicit precision
bound and nothing above it; every operation propagates the largest sound
precision.  On top of that sit parametrized curve germs (:class:`LocalBranch`)
with iterated blow-ups, local intersection orders, a Newton polygon expansion
restricted to rational edge roots, and localization of projective
parametrizations.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd

from cuspforge.invariants import (
    CharacteristicExponents,
    MultiplicitySequence,
    normalize_multseq,
    validate_char_exponents,
)
from cuspforge.polynomials import (
    Poly,
    PolynomialError,
    p_degree,
    p_diff,
    p_div_var,
    p_divides_var,
    p_eval,
    p_is_homogeneous,
    rational_roots,
    univ_gcd,
    univ_normalize,
)


class PrecisionExhausted(Exception):
    """A coefficient or order query cannot be answered below the precision."""


class IrrationalCoefficient(Exception):
    """A Newton polygon edge polynomial has no full set of rational roots."""


DEFAULT_PRECISION_FACTOR = 4
MAX_RETRY_FACTOR = 1024


def default_precision(scale: int) -> int:
    """Working precision for an object of the given degree-like size."""
    env = os.environ.get("CUSPFORGE_PRECISION")
    if env:
        return max(4, int(env))
    return DEFAULT_PRECISION_FACTOR * max(int(scale), 1)


def with_precision_retry(compute, base: int):
    """Run ``compute(N)`` with doubling N until it stops raising precision errors."""
    factor = 1
    last: Exception | None = None
    while factor <= MAX_RETRY_FACTOR:
        try:
            return compute(base * factor)
        except PrecisionExhausted as exc:
            last = exc
            factor *= 2
    raise PrecisionExhausted(
        f"no answer below precision {base * MAX_RETRY_FACTOR}"
    ) from last


# ---------------------------------------------------------------------------
# truncated series


class TruncatedSeries:
    """Map exponent -> rational coefficient, unknown from ``prec`` upward."""

    __slots__ = ("coeffs", "prec")

    def __init__(self, coeffs: dict[int, Fraction], prec: int):
        self.prec = int(prec)
        self.coeffs = {
            e: Fraction(c)
            for e, c in coeffs.items()
            if e < self.prec and c != 0
        }

    # -- construction helpers

    @staticmethod
    def zero(prec: int) -> "TruncatedSeries":
        return TruncatedSeries({}, prec)

    @staticmethod
    def monomial(exp: int, prec: int, coeff=1) -> "TruncatedSeries":
        return TruncatedSeries({exp: Fraction(coeff)}, prec)

    @staticmethod
    def from_terms(terms, prec: int) -> "TruncatedSeries":
        out: dict[int, Fraction] = {}
        for e, c in terms:
            out[e] = out.get(e, Fraction(0)) + Fraction(c)
        return TruncatedSeries(out, prec)

    # -- queries

    def __repr__(self) -> str:
        body = " + ".join(
            f"{c}*t^{e}" for e, c in sorted(self.coeffs.items())
        ) or "0"
        return f"<{body} + O(t^{self.prec})>"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TruncatedSeries)
            and self.prec == other.prec
            and self.coeffs == other.coeffs
        )

    def coefficient(self, exp: int) -> Fraction:
        if exp >= self.prec:
            raise PrecisionExhausted(f"coefficient of t^{exp} unknown beyond O(t^{self.prec})")
        return self.coeffs.get(exp, Fraction(0))

    def order(self) -> int:
        """Least exponent with a nonzero coefficient; fails on a zero tail."""
        if not self.coeffs:
            raise PrecisionExhausted(f"no nonzero term below O(t^{self.prec})")
        return min(self.coeffs)

    def order_lower_bound(self) -> int:
        return min(self.coeffs) if self.coeffs else self.prec

    def is_zero_to_precision(self) -> bool:
        return not self.coeffs

    def constant_term(self) -> Fraction:
        return self.coefficient(0) if self.prec > 0 else Fraction(0)

    # -- arithmetic

    def add(self, other: "TruncatedSeries") -> "TruncatedSeries":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, Fraction(0)) + c
        return TruncatedSeries(out, min(self.prec, other.prec))

    def sub(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self.add(other.scale(-1))

    def scale(self, c) -> "TruncatedSeries":
        c = Fraction(c)
        return TruncatedSeries({e: v * c for e, v in self.coeffs.items()}, self.prec)

    def add_const(self, c) -> "TruncatedSeries":
        out = dict(self.coeffs)
        out[0] = out.get(0, Fraction(0)) + Fraction(c)
        return TruncatedSeries(out, self.prec)

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by t^k (k may be negative when every exponent allows it)."""
        if k < 0 and any(e + k < 0 for e in self.coeffs):
            raise ValueError("shift would create negative exponents")
        return TruncatedSeries({e + k: c for e, c in self.coeffs.items()}, self.prec + k)

    def truncate(self, prec: int) -> "TruncatedSeries":
        return TruncatedSeries(self.coeffs, min(self.prec, prec))

    def mul(self, other: "TruncatedSeries") -> "TruncatedSeries":
        prec = min(
            self.prec + other.order_lower_bound(),
            other.prec + self.order_lower_bound(),
        )
        out: dict[int, Fraction] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = e1 + e2
                if e >= prec:
                    continue
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return TruncatedSeries(out, prec)

    def inverse_unit(self) -> "TruncatedSeries":
        c0 = self.coeffs.get(0, Fraction(0))
        if c0 == 0:
            raise ValueError("inverse requires a nonzero constant term")
        n = self.prec
        tail = sorted((e, c) for e, c in self.coeffs.items() if e > 0)
        inv = [Fraction(0)] * n
        inv[0] = 1 / c0
        for k in range(1, n):
            acc = Fraction(0)
            for j, cj in tail:
                if j > k:
                    break
                if inv[k - j]:
                    acc += cj * inv[k - j]
            if acc:
                inv[k] = -acc / c0
        return TruncatedSeries(
            {e: c for e, c in enumerate(inv) if c}, n
        )

    def divide(self, other: "TruncatedSeries") -> "TruncatedSeries":
        """Divide by a series with ord(other) <= ord(self)."""
        v = other.order()
        if any(e < v for e in self.coeffs):
            raise ValueError("division would create negative exponents")
        num = self.shift(-v)
        den = other.shift(-v)
        return num.mul(den.inverse_unit())

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """Substitute ``inner`` (with positive order) for the variable."""
        og = inner.order_lower_bound()
        if og < 1:
            raise ValueError("substitution requires ord(inner) >= 1")
        prec = min(self.prec * og, inner.prec)
        out = TruncatedSeries({}, prec)
        power = TruncatedSeries({0: Fraction(1)}, prec)
        for e in range(0, self.prec):
            if e > 0:
                if power.order_lower_bound() >= prec:
                    break
                power = power.mul(inner).truncate(prec)
            c = self.coeffs.get(e)
            if c:
                out = out.add(power.scale(c))
        return TruncatedSeries(out.coeffs, prec)

    def nth_root_unit(self, n: int) -> "TruncatedSeries":
        """n-th root of a series with constant term 1 (binomial expansion)."""
        if self.coeffs.get(0) != 1:
            raise ValueError("nth root requires constant term 1")
        h = TruncatedSeries({e: c for e, c in self.coeffs.items() if e > 0}, self.prec)
        out = TruncatedSeries({0: Fraction(1)}, self.prec)
        power = TruncatedSeries({0: Fraction(1)}, self.prec)
        binom = Fraction(1)
        alpha = Fraction(1, n)
        oh = h.order_lower_bound()
        if oh >= self.prec:
            return out
        k = 0
        while (k + 1) * oh < self.prec:
            k += 1
            binom = binom * (alpha - (k - 1)) / k
            power = power.mul(h).truncate(self.prec)
            out = out.add(power.scale(binom))
        return out

    def compositional_inverse(self) -> "TruncatedSeries":
        """Series psi with psi(self(t)) = t; requires order exactly 1."""
        if self.order_lower_bound() != 1 or 1 not in self.coeffs:
            raise ValueError("compositional inverse requires order 1")
        n = self.prec
        c1 = self.coeffs[1]
        d = {1: 1 / c1}
        powers = {1: self}
        cur = self
        for j in range(2, n):
            cur = cur.mul(self).truncate(n)
            powers[j] = cur
        for k in range(2, n):
            acc = Fraction(0)
            for j in range(1, k):
                acc += d[j] * powers[j].coeffs.get(k, Fraction(0))
            d[k] = -acc / (c1 ** k)
        return TruncatedSeries(d, n)


def eval_poly_on_series(
    f: Poly, sx: TruncatedSeries, sy: TruncatedSeries, prec: int | None = None
) -> TruncatedSeries:
    """Evaluate a bivariate polynomial on a pair of series (Horner in y)."""
    if prec is None:
        prec = min(sx.prec, sy.prec)
    if not f:
        return TruncatedSeries.zero(prec)
    by_y: dict[int, dict[int, Fraction]] = {}
    for (i, j), c in f.items():
        by_y.setdefault(j, {})[i] = c
    xpowers: dict[int, TruncatedSeries] = {0: TruncatedSeries({0: Fraction(1)}, prec)}

    def xpow(i: int) -> TruncatedSeries:
        if i not in xpowers:
            xpowers[i] = xpow(i - 1).mul(sx).truncate(prec)
        return xpowers[i]

    def row(j: int) -> TruncatedSeries:
        r = TruncatedSeries.zero(prec)
        for i, c in sorted(by_y[j].items()):
            r = r.add(xpow(i).scale(c))
        return r

    max_j = max(by_y)
    acc = row(max_j)
    for j in range(max_j - 1, -1, -1):
        acc = acc.mul(sy).truncate(prec)
        if j in by_y:
            acc = acc.add(row(j))
    return acc.truncate(prec)


# ---------------------------------------------------------------------------
# branches


@dataclass(frozen=True)
class LocalBranch:
    """Germ t |-> (x(t), y(t)) with both coordinates vanishing at 0."""

    x: TruncatedSeries
    y: TruncatedSeries

    def __post_init__(self):
        for s in (self.x, self.y):
            if s.order_lower_bound() < 1:
                raise ValueError("branch coordinates must vanish at the origin")
        if self.x.is_zero_to_precision() and self.y.is_zero_to_precision():
            raise PrecisionExhausted("branch is zero to precision in both coordinates")


def monomial_branch(ce: CharacteristicExponents, prec: int | None = None) -> LocalBranch:
    """The branch t -> (t^a, sum of t^b_i) realizing given exponents."""
    if prec is None:
        prec = default_precision((ce.b[-1] if ce.b else ce.a) + ce.a)
    x = TruncatedSeries.monomial(ce.a, prec)
    y = TruncatedSeries({e: Fraction(1) for e in ce.b}, prec)
    return LocalBranch(x, y)


def _branch_orders(b: LocalBranch) -> tuple[int, bool]:
    """(multiplicity, x_is_minimal); sound or PrecisionExhausted."""
    ox, oy = b.x.order_lower_bound(), b.y.order_lower_bound()
    x_known, y_known = bool(b.x.coeffs), bool(b.y.coeffs)
    if x_known and y_known:
        return (ox, True) if ox <= oy else (oy, False)
    if x_known:
        if ox <= oy:  # oy is the precision bound of the unknown tail
            return ox, True
        raise PrecisionExhausted("cannot compare branch orders")
    if y_known:
        if oy <= ox:
            return oy, False
        raise PrecisionExhausted("cannot compare branch orders")
    raise PrecisionExhausted("branch orders unknown to precision")


def branch_blowup(b: LocalBranch) -> tuple[int, LocalBranch]:
    """One blow-up: multiplicity plus the strict-transform branch.

    The chart keeps the coordinate of minimal order and divides the other by
    it; a nonzero constant term of the quotient is subtracted (translation to
    the center of the next chart).
    """
    m, x_min = _branch_orders(b)
    num, den = (b.y, b.x) if x_min else (b.x, b.y)
    if num.is_zero_to_precision():
        quot = TruncatedSeries.zero(num.prec - den.order())
    else:
        quot = num.divide(den)
    if quot.prec >= 1:
        quot = quot.add_const(-quot.constant_term())
    if quot.prec < 1:
        raise PrecisionExhausted("blow-up exhausted the precision")
    if x_min:
        return m, LocalBranch(b.x, quot)
    return m, LocalBranch(quot, b.y)


_SMOOTH_CONFIRMATIONS = 3


def multseq_from_branch(b: LocalBranch, max_steps: int = 10_000) -> MultiplicitySequence:
    """Iterated blow-ups until the branch stays smooth; trailing 1s dropped."""
    mults: list[int] = []
    cur = b
    for _ in range(max_steps):
        m, nxt = branch_blowup(cur)
        if m == 1:
            for _ in range(_SMOOTH_CONFIRMATIONS):
                m2, nxt = branch_blowup(nxt)
                if m2 != 1:
                    raise ValueError("multiplicity increased after reaching 1; invalid branch data")
            return normalize_multseq(mults)
        mults.append(m)
        cur = nxt
    raise RuntimeError("blow-up sequence did not terminate; non-primitive parametrization?")


def pullback_order(b: LocalBranch, g: Poly) -> int:
    """Local intersection multiplicity of the branch with {g = 0}."""
    if p_eval(g, (0, 0)) != 0:
        raise ValueError("the curve {g=0} does not pass through the origin")
    return eval_poly_on_series(g, b.x, b.y).order()


def char_from_branch(b: LocalBranch) -> CharacteristicExponents:
    """Characteristic exponents of a parametrized germ.

    Reparametrizes so the minimal-order coordinate becomes c*s^a exactly
    (the needed a-th root of the unit part is a binomial series with rational
    coefficients), then reads off the exponents of the other coordinate that
    strictly decrease the running gcd.
    """
    x, y = b.x, b.y
    _, x_min = _branch_orders(b)
    if not x_min:
        x, y = y, x
    a = x.order()
    if a == 1:
        return validate_char_exponents(1, ())
    unit = x.shift(-a)
    c0 = unit.constant_term()
    root = unit.scale(1 / c0).nth_root_unit(a)
    s = root.shift(1)  # s(t) = t * root(t)
    psi = s.compositional_inverse()
    y_new = y.compose(psi)
    g = a
    bs: list[int] = []
    for e in sorted(y_new.coeffs):
        g2 = gcd(g, e)
        if g2 < g:
            bs.append(e)
            g = g2
        if g == 1:
            break
    if g != 1:
        raise PrecisionExhausted(
            f"gcd chain stuck at {g} below O(t^{y_new.prec}); raise the precision"
        )
    return validate_char_exponents(a, tuple(bs))


# ---------------------------------------------------------------------------
# Newton polygon expansion (rational edge roots only)


def _lower_hull(points: list[tuple[int, int]]) -> list[tuple[int, int]]:
    pts = sorted(set(points))
    hull: list[tuple[int, int]] = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _newton_edges(f: Poly):
    """Edges of the local Newton polygon carrying branches through the origin.

    Yields (p, q, psi, e): branch exponent q/p in lowest terms, the edge
    polynomial psi (indexed by lattice steps, roots are the values c^p), and
    the weighted order e = min(p*i + q*j).
    """
    support = list(f.keys())
    hull = _lower_hull(support)
    edges = []
    for (i0, j0), (i1, j1) in zip(hull, hull[1:]):
        if j0 <= j1:
            continue
        di, dj = i1 - i0, j0 - j1
        h = gcd(di, dj)
        q, p = di // h, dj // h
        psi = [Fraction(0)] * (h + 1)
        for (i, j), c in f.items():
            if j < j1 or j > j0 or (j - j1) % p != 0:
                continue
            k = (j - j1) // p
            if i == i1 - k * q:
                psi[k] = c
        e = p * i1 + q * j1
        edges.append((p, q, psi, e))
    return edges


def _nth_root_fraction(v: Fraction, n: int) -> Fraction | None:
    """Rational n-th root of v, or None."""
    if v == 0:
        return Fraction(0)
    sign = 1
    if v < 0:
        if n % 2 == 0:
            return None
        sign = -1
        v = -v

    def iroot(m: int) -> int | None:
        if m == 1:
            return 1
        r = 1 << (m.bit_length() // n + 1)
        while True:
            r2 = ((n - 1) * r + m // (r ** (n - 1))) // n
            if r2 >= r:
                break
            r = r2
        return r if r ** n == m else None

    num = iroot(v.numerator)
    den = iroot(v.denominator)
    if num is None or den is None:
        return None
    return Fraction(sign * num, den)


def _twist_pair(p: int, q: int, sigma: Fraction) -> tuple[Fraction, Fraction]:
    """Rational (lambda, c) with c^p = sigma * lambda^q.

    This is the scaling freedom x = lambda * t^p of a rational-coefficient
    parametrization; it makes every rational edge root usable without leaving
    the rationals.  lambda in {1, -1} is preferred (small coefficients); the
    general solution lambda = sigma^beta, c = sigma^alpha with
    alpha*p - beta*q = 1 always exists since p and q are coprime.
    """
    for lam in (Fraction(1), Fraction(-1)):
        c = _nth_root_fraction(sigma * lam ** q, p)
        if c is not None:
            return lam, c
    alpha = pow(p, -1, q)
    beta = (alpha * p - 1) // q
    return sigma ** beta, sigma ** alpha


def _np_transform(f: Poly, p: int, q: int, c: Fraction, e: int, lam: Fraction) -> Poly:
    """f(lambda * x^p, x^q (c + y)) / x^e on sparse polynomials."""
    out: Poly = {}
    for (i, j), coef in f.items():
        base = p * i + q * j - e
        scaled = coef * lam ** i
        for k in range(j + 1):
            w = scaled * comb(j, k) * c ** (j - k)
            if w == 0:
                continue
            key = (base, k)
            s = out.get(key, Fraction(0)) + w
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def _implicit_series(g: Poly, prec: int) -> TruncatedSeries:
    """Solve g(x, Y(x)) = 0 with g(0,0) = 0 and g_y(0,0) != 0, by Newton steps."""
    gy = p_diff(g, 1)
    if p_eval(g, (0, 0)) != 0 or p_eval(gy, (0, 0)) == 0:
        raise ValueError("implicit solve requires a simple root at the origin")
    x_series = TruncatedSeries.monomial(1, prec)
    y = TruncatedSeries.zero(1)
    known = 1
    while known < prec:
        known = min(2 * known, prec)
        xk = x_series.truncate(known)
        yk = TruncatedSeries(y.coeffs, known)
        val = eval_poly_on_series(g, xk, yk, known)
        dval = eval_poly_on_series(gy, xk, yk, known)
        y = yk.sub(val.mul(dval.inverse_unit()).truncate(known))
    return TruncatedSeries(y.coeffs, prec)


_MAX_NP_DEPTH = 64


def newton_puiseux_rational(f: Poly, prec: int | None = None) -> list[LocalBranch]:
    """All local branches of {f = 0} at the origin, parametrized over Q.

    Raises IrrationalCoefficient as soon as an edge polynomial fails to split
    with rational roots (including roots whose required p-th root is not
    rational).  Axis components (x | f or y | f) come out as exact smooth
    branches.
    """
    if not f:
        raise PolynomialError("zero polynomial")
    if prec is None:
        prec = default_precision(p_degree(f))
    if p_eval(f, (0, 0)) != 0:
        raise PolynomialError("the curve does not pass through the origin")
    branches: list[LocalBranch] = []
    work = dict(f)
    if p_divides_var(work, 0):
        work = p_div_var(work, 0)
        branches.append(LocalBranch(TruncatedSeries.zero(prec), TruncatedSeries.monomial(1, prec)))
    if p_divides_var(work, 1):
        work = p_div_var(work, 1)
        branches.append(LocalBranch(TruncatedSeries.monomial(1, prec), TruncatedSeries.zero(prec)))
    if work and p_eval(work, (0, 0)) != 0:
        return branches
    branches.extend(_np_recurse(work, prec, 0))
    return branches


def _np_recurse(f: Poly, prec: int, depth: int) -> list[LocalBranch]:
    if depth > _MAX_NP_DEPTH:
        raise RuntimeError("Newton polygon recursion too deep; is the input squarefree?")
    out: list[LocalBranch] = []
    for p, q, psi, e in _newton_edges(f):
        roots, leftover = rational_roots(psi)
        if leftover:
            raise IrrationalCoefficient("edge polynomial does not split with rational roots")
        for sigma, mu in roots:
            if sigma == 0:
                continue  # cannot occur: edge polynomials have nonzero constant term
            lam, c = _twist_pair(p, q, sigma)
            g = _np_transform(f, p, q, c, e, lam)
            if mu == 1:
                # simple root: one branch, tail solved by the implicit series
                tail = _implicit_series(g, prec).add_const(c)
                x = TruncatedSeries.monomial(p, prec, lam)
                out.append(LocalBranch(x, tail.shift(q).truncate(prec)))
            else:
                for sub in _np_recurse(g, prec, depth + 1):
                    # sub.x = mu1 * t^a, sub.y = inner tail;
                    # lift through x = lambda * x1^p, y = x1^q (c + y1)
                    a_inner = sub.x.order()
                    mu1 = sub.x.coefficient(a_inner)
                    x = TruncatedSeries.monomial(p * a_inner, prec, lam * mu1 ** p)
                    y = sub.y.add_const(c).shift(q * a_inner).scale(mu1 ** q)
                    out.append(LocalBranch(x, y.truncate(prec)))
    return out


# ---------------------------------------------------------------------------
# projective parametrizations


@dataclass(frozen=True)
class ProjectiveParametrization:
    """Three homogeneous polynomials of equal degree in (t, s), no common factor."""

    x: Poly
    y: Poly
    z: Poly

    def __post_init__(self):
        degs = set()
        for g in (self.x, self.y, self.z):
            if not g:
                raise PolynomialError("parametrization coordinates must be nonzero")
            if not p_is_homogeneous(g):
                raise PolynomialError("parametrization coordinates must be homogeneous")
            degs.add(p_degree(g))
            for c in g.values():
                if c.denominator != 1:
                    raise PolynomialError("parametrization coefficients must be integers")
        if len(degs) != 1:
            raise PolynomialError(f"coordinate degrees differ: {sorted(degs)}")
        if self._common_factor():
            raise PolynomialError("parametrization coordinates share a common factor")

    @property
    def degree(self) -> int:
        return p_degree(self.x)

    def _common_factor(self) -> bool:
        d = p_degree(self.x)
        univs = []
        s_divides = True
        for g in (self.x, self.y, self.z):
            coeffs = [Fraction(0)] * (d + 1)
            max_t = 0
            for (i, j), c in g.items():
                coeffs[i] = c
                max_t = max(max_t, i)
            univs.append(coeffs)
            if max_t == d:
                s_divides = False
        if s_divides:
            return True
        g01 = univ_gcd(univs[0], univs[1])
        g012 = univ_gcd(g01, univs[2])
        return len(univ_normalize(g012)) > 1  # nonconstant common univariate factor


def localize_parametrization(
    par: ProjectiveParametrization, at, prec: int | None = None
) -> tuple[LocalBranch, tuple[Fraction, Fraction, Fraction], dict]:
    """Local branch of the image curve at a rational parameter value [t0:s0].

    The chart denominator is the image coordinate with the lowest vanishing
    order; the two remaining coordinate ratios, constants subtracted, give
    the branch.  Returns (branch, image point, chart description).
    """
    t0, s0 = (Fraction(v) for v in at)
    if t0 == 0 and s0 == 0:
        raise PolynomialError("parameter point must be nonzero")
    if prec is None:
        prec = default_precision(par.degree)

    def expand(g: Poly) -> TruncatedSeries:
        # substitute (t, s) = (t0/s0 + tau, 1), or (1, tau) at [1:0]
        terms: dict[int, Fraction] = {}
        if s0 != 0:
            a0 = t0 / s0
            for (i, j), c in g.items():
                for k in range(i + 1):
                    w = c * comb(i, k) * a0 ** (i - k)
                    if w:
                        terms[k] = terms.get(k, Fraction(0)) + w
        else:
            for (i, j), c in g.items():
                terms[j] = terms.get(j, Fraction(0)) + c
        return TruncatedSeries(terms, prec)

    coords = [expand(par.x), expand(par.y), expand(par.z)]
    orders = [c.order_lower_bound() if c.coeffs else None for c in coords]
    known = [o for o in orders if o is not None]
    if not known:
        raise PolynomialError("all coordinates vanish identically; common factor upstream")
    if all(o is None or o > 0 for o in orders):
        raise PolynomialError("all coordinates vanish at the point; common factor upstream")
    pivot = min(
        (i for i in range(3) if orders[i] is not None),
        key=lambda i: orders[i],
    )
    image = tuple(c.constant_term() for c in coords)
    inv = coords[pivot].inverse_unit() if orders[pivot] == 0 else None
    if inv is None:
        raise PolynomialError("pivot coordinate vanishes; degenerate image")
    others = [i for i in range(3) if i != pivot]
    ratios = []
    for i in others:
        r = coords[i].mul(inv)
        ratios.append(r.add_const(-r.constant_term()))
    names = ("x", "y", "z")
    chart = {"pivot": names[pivot], "x": names[others[0]], "y": names[others[1]]}
    return LocalBranch(ratios[0], ratios[1]), image, chart
