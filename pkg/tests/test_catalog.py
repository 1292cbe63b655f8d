import pytest

from cuspforge.catalog import (
    FAMILY_IDS,
    FamilyParams,
    default_grid,
    initial_curve,
    instance_json,
    instantiate,
    parametrization_f,
    verify_initial_curve,
    verify_instance,
)
from cuspforge.invariants import parse_multseq
from cuspforge.polynomials import p_eval


def entries(fi):
    return [list(ms.entries) for ms in fi.cusps]


def pairs(fi):
    return [list(np_.pairs) for np_ in fi.pairs]


def test_instantiate_b2():
    fi = instantiate(FamilyParams("b", k=2))
    assert fi.profile.degree == 5
    assert entries(fi) == [[2, 2, 2, 2], [2, 2]]
    assert pairs(fi) == [[(2, 9)], [(2, 5)]]


def test_instantiate_a1_smallest():
    fi = instantiate(FamilyParams("a1", u=2, l=2, m=2))
    assert fi.profile.degree == 5
    assert entries(fi) == [[3], [2, 2, 2]]


def test_instantiate_d2_k1():
    fi = instantiate(FamilyParams("d2", k=1))
    assert fi.profile.degree == 14
    assert entries(fi) == [[8, 4, 4], [6, 6, 4, 2, 2]]


def test_instantiate_f():
    fi = instantiate(FamilyParams("f"))
    assert fi.profile.degree == 14
    assert entries(fi) == [[8, 4, 4, 2, 2], [6, 6, 3, 3]]


def test_instantiate_range_checks():
    with pytest.raises(ValueError):
        instantiate(FamilyParams("b", k=1))
    with pytest.raises(ValueError):
        instantiate(FamilyParams("a1", u=1, l=2, m=2))
    with pytest.raises(ValueError):
        instantiate(FamilyParams("f", k=3))


def test_verify_instance_degenerate_pairs():
    fi = instantiate(FamilyParams("a3", u=2, l=1, m=2))
    assert fi.profile.degree == 9
    report = verify_instance(fi)
    assert report.ok
    assert report.genus.lhs == report.genus.rhs == 28
    assert fi.pairs[1].pairs == ((1, 2), (2, 1), (2, 1))
    assert entries(fi)[1] == [4, 4, 2, 2]


def test_verify_instance_negative_control():
    fi = instantiate(FamilyParams("b", k=3))
    corrupted = fi.__class__(
        fi.params, fi.profile, (fi.cusps[0], parse_multseq("[3,3]")), fi.pairs
    )
    report = verify_instance(corrupted)
    assert not report.ok


def test_default_grid_counts():
    grid = list(default_grid())
    assert len(grid) == 125 + 150 + 150 + 125 + 11 + 12 * 4 + 1
    assert {p.family for p in grid} == set(FAMILY_IDS)


def test_instance_json_fields():
    payload = instance_json(instantiate(FamilyParams("f")))
    assert payload["degree"] == 14
    assert payload["cusps"][0]["newton"] == [[2, 3], [2, 1], [2, 1]]
    assert payload["cusps"][0]["delta"] == 42
    assert payload["cusps"][1]["char"] == {"a": 6, "b": [15, 16]}


# -- explicit initial curves


def test_initial_curve_a1_data():
    ic = initial_curve("a1", 2, 2)
    assert ic.equation == "(y^1*z - x^2)^2 - x^3*y"
    assert ic.degree == 4
    assert ic.at_p.point == (0, 1, 0) and ic.at_q.point == (0, 0, 1)
    assert list(ic.at_p.multseq.entries) == [2]
    assert list(ic.at_q.multseq.entries) == [2, 2]
    assert (ic.at_p.tangent_order, ic.at_q.tangent_order) == (3, 4)


def test_initial_curve_claims_have_zero_cbar():
    from cuspforge.invariants import cbar_squared

    for fam, ls in [("a1", range(2, 5)), ("a2", range(1, 5))]:
        for l in ls:
            for m in range(2, 5):
                assert cbar_squared(initial_curve(fam, l, m).profile) == 0


@pytest.mark.parametrize("fam,l,m", [("a1", 2, 2), ("a2", 1, 2), ("a3", 2, 2), ("a4", 3, 2)])
def test_initial_curve_resolution(fam, l, m):
    report = verify_initial_curve(fam, l, m)
    assert report.ok, report


def test_initial_curve_rejects_out_of_range():
    with pytest.raises(ValueError):
        initial_curve("a1", 1, 2)
    with pytest.raises(ValueError):
        initial_curve("b", 2, 2)


# -- the degree-14 parametrization


def test_parametrization_f_values():
    par = parametrization_f()
    assert p_eval(par.x, (1, 1)) == 8
    assert par.degree == 14


def test_parametrization_f_no_common_factor():
    parametrization_f()  # construction validates gcd = 1


def test_parametrization_f_image_is_the_claimed_curve():
    # the two branch degrees seen from the parameter line add up over the
    # coordinate charts; spot-check one more rational point on the curve
    from cuspforge.polynomials import p_eval as ev

    par = parametrization_f()
    pt = [ev(par.x, (2, 1)), ev(par.y, (2, 1)), ev(par.z, (2, 1))]
    assert pt[2] != 0
