from fractions import Fraction

import pytest

import ncwaring


def test_commutator_value_matches_hand_product():
    a = [[1, 2], [0, 1]]
    b = [[0, 1], [1, 0]]
    value = ncwaring.evaluate("x1*x2-x2*x1", [a, b])
    # ab - ba computed by hand
    assert value == [[2, 0], [0, -2]]
    assert ncwaring.evaluate("x1*x2-x2*x1", [a, b], pencil=True) == value


def test_inverse_through_pencil():
    a = [[2, 1], [1, 1]]
    assert ncwaring.evaluate("x1^-1", [a], pencil=True) == [[1, -1], [-1, 2]]


def test_commutator_inverse_size():
    inner = ncwaring.realize("x1*x2-x2*x1")
    outer = ncwaring.realize("x1*x2-x2*x1", commutator_inverse=True)
    assert outer["delta"] == 2 * inner["delta"] + 1


def test_thresholds_delta_four():
    t = ncwaring.thresholds(4)
    assert t["bertrand_bound"] == 24
    assert (t["p"], t["q"], t["n_distinct"]) == (11, 13, 120)


def test_witness_round_trip():
    cert = ncwaring.find_witness("x1*x2-x2*x1", 3, seed=5)
    assert cert["disc_nonzero"] and cert["det_nonzero"]
    assert ncwaring.verify_certificate("x1*x2-x2*x1", cert)
    cert["value"][0][0] += 1
    assert not ncwaring.verify_certificate("x1*x2-x2*x1", cert)


def test_difference_decomposition_replays():
    target = [[1, 2, 0], [3, -4, 1], [0, 5, 3]]
    d = ncwaring.decompose("difference", "x1*x2-x2*x1", target, seed=1)
    assert d["kind"] == "difference"
    assert len(d["terms"]) == 2
    assert ncwaring.verify(d)["pass"]


def test_product_two_squares():
    target = [[2, 1, 0], [0, 3, 1], [1, 0, 1]]
    d = ncwaring.decompose("product2", ["x1^2", "x2^2"], target, seed=3)
    report = ncwaring.verify(d)
    assert report["pass"], report["message"]


def test_scalar_quotient_is_unsupported():
    with pytest.raises(ncwaring.NcwError) as info:
        ncwaring.decompose("quotient", "x1", [[2, 0], [0, 2]])
    assert info.value.code == "ScalarTarget"
    assert info.value.unsupported


def test_exact_entries_are_fractions():
    value = ncwaring.evaluate("x1^-1", [[[2, 0], [0, 4]]])
    assert value == [[Fraction(1, 2), 0], [0, Fraction(1, 4)]]
    assert isinstance(value[0][0], Fraction)


def test_twelve_factor_replays():
    target = [[1, 2, 0, 1], [3, -4, 1, 0], [0, 5, 3, 2], [1, 1, 1, 0]]
    d = ncwaring.decompose("product12", "x1^2", target, seed=9)
    assert d["kind"] == "product12"
    assert len(d["terms"]) <= 12
    report = ncwaring.verify(d)
    assert report["pass"], report["message"]
