from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cuspforge.invariants import parse_char_exponents
from cuspforge.polynomials import parse_polynomial
from cuspforge.series import (
    IrrationalCoefficient,
    LocalBranch,
    PrecisionExhausted,
    TruncatedSeries,
    branch_blowup,
    char_from_branch,
    eval_poly_on_series,
    localize_parametrization,
    monomial_branch,
    multseq_from_branch,
    newton_puiseux_rational,
    pullback_order,
    with_precision_retry,
)


def S(terms, prec):
    return TruncatedSeries.from_terms(terms, prec)


# -- series arithmetic


def test_order_basic():
    assert S([(3, 1), (5, 1)], 10).order() == 3


def test_order_zero_series_exhausts():
    with pytest.raises(PrecisionExhausted):
        TruncatedSeries.zero(10).order()


def test_mul_monomials():
    out = S([(2, 1)], 10).mul(S([(3, 1)], 10))
    assert out.coeffs == {5: Fraction(1)}


def test_mul_precision_rule():
    # unknown tails enter at prec + ord(other)
    f = S([(1, 1)], 4)
    g = S([(2, 1)], 7)
    assert f.mul(g).prec == min(4 + 2, 7 + 1)


def test_divide_and_inverse():
    num = S([(5, 1)], 12)
    den = S([(2, 1), (3, 1)], 12)
    q = num.divide(den)
    assert q.mul(den).coeffs == {5: Fraction(1)}


def test_compose():
    f = S([(1, 1), (2, 1)], 8)  # t + t^2
    g = S([(2, 1)], 8)  # t^2
    out = f.compose(g)
    assert out.coeffs == {2: Fraction(1), 4: Fraction(1)}


def test_compositional_inverse():
    s = S([(1, 1), (2, 3)], 9)
    psi = s.compositional_inverse()
    back = s.compose(psi)
    assert back.coeffs == {1: Fraction(1)}


def test_nth_root_unit():
    u = S([(0, 1), (2, 1)], 9)
    r = u.nth_root_unit(3)
    assert r.mul(r).mul(r).coeffs == u.coeffs


@given(st.integers(1, 6), st.integers(1, 6))
def test_precision_monotone_under_truncate(a, b):
    f = S([(a, 1), (a + b, 2)], 20)
    g = f.truncate(10)
    for e, c in g.coeffs.items():
        assert f.coeffs[e] == c


# -- blow-ups


def test_blowup_cusp():
    m, nxt = branch_blowup(LocalBranch(S([(2, 1)], 20), S([(3, 1)], 20)))
    assert m == 2
    assert nxt.x.coeffs == {2: Fraction(1)}
    assert nxt.y.coeffs == {1: Fraction(1)}


def test_blowup_division_step():
    m, nxt = branch_blowup(LocalBranch(S([(4, 1)], 30), S([(10, 1), (11, 1)], 30)))
    assert m == 4
    assert nxt.y.coeffs == {6: Fraction(1), 7: Fraction(1)}


def test_blowup_subtracts_constant():
    m, nxt = branch_blowup(LocalBranch(S([(3, 1)], 20), S([(3, 1), (4, 1)], 20)))
    assert m == 3
    assert nxt.y.coeffs == {1: Fraction(1)}


def test_multseq_examples():
    assert multseq_from_branch(LocalBranch(S([(2, 1)], 20), S([(3, 1)], 20))).entries == (2,)
    b = LocalBranch(S([(6, 1)], 44), S([(15, 1), (16, 1)], 44))
    assert multseq_from_branch(b).entries == (6, 6, 3, 3)


def test_multseq_first_entry_is_min_order():
    b = monomial_branch(parse_char_exponents("(8;12,14,15)"))
    ms = multseq_from_branch(b)
    assert ms.entries == (8, 4, 4, 2, 2)
    assert ms.entries[0] == min(b.x.order(), b.y.order())
    # dropping the first entry reproduces the blown-up branch's sequence
    _, nxt = branch_blowup(b)
    assert multseq_from_branch(nxt).entries == ms.entries[1:]


def test_multseq_retry_on_precision():
    def compute(n):
        return multseq_from_branch(monomial_branch(parse_char_exponents("(6;15,16)"), n))

    assert with_precision_retry(compute, 4).entries == (6, 6, 3, 3)


# -- pullback orders


def test_pullback_tangent_of_cusp():
    b = LocalBranch(S([(2, 1)], 20), S([(3, 1)], 20))
    assert pullback_order(b, parse_polynomial("y")) == 3


def test_pullback_additive_on_products():
    b = LocalBranch(S([(2, 1)], 40), S([(5, 1)], 40))
    g = parse_polynomial("y")
    h = parse_polynomial("y - x^2")
    gh = parse_polynomial("y*(y - x^2)")
    assert pullback_order(b, gh) == pullback_order(b, g) + pullback_order(b, h)


# -- Newton polygon expansion


def test_np_ordinary_cusp():
    branches = newton_puiseux_rational(parse_polynomial("y^2 - x^3"), 20)
    assert len(branches) == 1
    assert branches[0].x.coeffs == {2: Fraction(1)}
    assert branches[0].y.coeffs == {3: Fraction(1)}


def test_np_tangential_double_point():
    branches = newton_puiseux_rational(parse_polynomial("(y + x^2)^2 - x^5"), 20)
    assert len(branches) == 1
    b = branches[0]
    assert b.x.coeffs == {2: Fraction(1)}
    assert b.y.coeffs == {4: Fraction(-1), 5: Fraction(1)}
    assert multseq_from_branch(b).entries == (2, 2)


def test_np_vertical_tangent_needs_scaling_twist():
    branches = newton_puiseux_rational(parse_polynomial("(x + y^2)^2 - y^5"), 20)
    assert len(branches) == 1
    assert multseq_from_branch(branches[0]).entries == (2, 2)
    assert char_from_branch(branches[0]) == parse_char_exponents("(2;5)")


def test_np_two_transverse_branches():
    branches = newton_puiseux_rational(parse_polynomial("y^2 - x^2 - x^3"), 24)
    assert len(branches) == 2
    for b in branches:
        assert multseq_from_branch(b).entries == ()


def test_np_axis_components():
    branches = newton_puiseux_rational(parse_polynomial("x*y"), 10)
    assert len(branches) == 2


def test_np_vanishing_on_curve():
    f = parse_polynomial("(y^1 - x^2)^2 - x^3*y")
    for b in newton_puiseux_rational(f, 30):
        val = eval_poly_on_series(f, b.x, b.y)
        assert val.is_zero_to_precision()


def test_np_irrational_edge_root_raises():
    with pytest.raises(IrrationalCoefficient):
        newton_puiseux_rational(parse_polynomial("y^3 - 2*x^3"), 20)


def test_np_irrational_pair_raises():
    # y^2 + x^2 has only complex-conjugate branches
    with pytest.raises(IrrationalCoefficient):
        newton_puiseux_rational(parse_polynomial("y^2 + x^2"), 20)


# -- characteristic exponents from parametrizations


def test_char_from_branch_with_unit():
    b = LocalBranch(S([(2, 1)], 24), S([(2, 1), (3, 1)], 24))
    assert char_from_branch(b) == parse_char_exponents("(2;3)")


def test_char_from_branch_swapped_coordinates():
    b = LocalBranch(S([(15, 1), (16, 1)], 44), S([(6, 1)], 44))
    assert char_from_branch(b) == parse_char_exponents("(6;15,16)")


def test_char_from_branch_smooth():
    b = LocalBranch(S([(1, 1)], 10), S([(4, 1)], 10))
    assert char_from_branch(b).a == 1


def test_char_from_branch_scaled():
    # (x, y) = (-16 t^4, 4 t^2 + 3 t^5): with s^2 = y/4 the other coordinate
    # expands as -s^4 + O(s^7), so the characteristic exponent is 7, which
    # matches the blow-up sequence [2,2,2]
    b = LocalBranch(S([(4, -16)], 30), S([(2, 4), (5, 3)], 30))
    ce = char_from_branch(b)
    assert (ce.a, ce.b) == (2, (7,))
    assert multseq_from_branch(b).entries == (2, 2, 2)


# -- projective parametrization localization


def _param_f():
    from cuspforge.catalog import parametrization_f

    return parametrization_f()


def test_localize_image_points():
    par = _param_f()
    b1, img1, _ = localize_parametrization(par, (0, 1), 56)
    assert [v == 0 for v in img1] == [True, False, True]
    assert sorted((b1.x.order(), b1.y.order())) == [8, 12]
    b2, img2, _ = localize_parametrization(par, (1, 0), 56)
    assert [v == 0 for v in img2] == [False, True, True]
    assert sorted((b2.x.order(), b2.y.order())) == [6, 12]


def test_localize_smooth_point():
    par = _param_f()
    b, _, _ = localize_parametrization(par, (1, 1), 56)
    assert multseq_from_branch(b).entries == ()


def test_localize_rejects_degenerate():
    from cuspforge.polynomials import PolynomialError

    with pytest.raises(PolynomialError):
        # shared factor t: rejected at construction time
        from cuspforge.series import ProjectiveParametrization

        ProjectiveParametrization(
            parse_polynomial("t^2", ("t", "s")),
            parse_polynomial("t*s", ("t", "s")),
            parse_polynomial("t^2 + t*s", ("t", "s")),
        )


# -- oracle agreement with the combinatorial conversion


@given(st.data())
def test_oracle_agreement_small(data):
    from math import gcd as _gcd

    from cuspforge.invariants import char_to_multseq, newton_to_char, validate_newton_pairs

    p1, q1 = data.draw(
        st.tuples(st.integers(2, 5), st.integers(3, 11)).filter(
            lambda pq: _gcd(pq[0], pq[1]) == 1 and pq[0] < pq[1]
        )
    )
    pairs = [(p1, q1)]
    if data.draw(st.booleans()):
        p2, q2 = data.draw(
            st.tuples(st.integers(2, 4), st.integers(1, 7)).filter(
                lambda pq: _gcd(pq[0], pq[1]) == 1
            )
        )
        pairs.append((p2, q2))
    ce = newton_to_char(validate_newton_pairs(pairs))
    expected = char_to_multseq(ce)

    def compute(n):
        return multseq_from_branch(monomial_branch(ce, n))

    assert with_precision_retry(compute, 2 * (ce.b[-1] + ce.a)) == expected


def test_default_precision_env_override(monkeypatch):
    from cuspforge.series import default_precision

    monkeypatch.delenv("CUSPFORGE_PRECISION", raising=False)
    assert default_precision(14) == 56
    monkeypatch.setenv("CUSPFORGE_PRECISION", "99")
    assert default_precision(14) == 99


def test_precision_monotonicity_of_answers():
    from cuspforge.invariants import parse_char_exponents as pce

    b_lo = monomial_branch(pce("(6;15,16)"), 44)
    b_hi = monomial_branch(pce("(6;15,16)"), 88)
    assert multseq_from_branch(b_lo) == multseq_from_branch(b_hi)
    assert char_from_branch(b_lo) == char_from_branch(b_hi)


def test_np_vanishing_on_second_curve():
    f = parse_polynomial("x*(y*x^1 + 1*y^0*x^0*1 + y^2 - 1 - y^2 + y^2)^2 - y^5")
    # simplifies to x*(x*y + y^2)^2 - y^5; regression guard for the parser too
    for b in newton_puiseux_rational(f, 24):
        assert eval_poly_on_series(f, b.x, b.y).is_zero_to_precision()
