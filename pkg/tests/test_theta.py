"""Two-variable theta series: frozen slices, box bookkeeping, product identities."""

from fractions import Fraction as QQ

import pytest
from hypothesis import given, settings, strategies as st

from ospq.qseries import EmptySeries, QSeries, qs_eta
from ospq.theta import (
    InvalidIndex,
    WQSeries,
    theta_big,
    theta_q,
    vartheta1_times_i,
    vartheta2,
    weyl_denominator,
    wq_add,
    wq_div,
    wq_equal_on_box,
    wq_from_q,
    wq_invert,
    wq_mul,
    wq_scalar,
    wq_scale_w,
    wq_shift,
    wq_specialize_w1,
    wq_specialize_w_signed,
    wq_to_q,
)

st_qexp = st.fractions(min_value=QQ(0), max_value=QQ(4), max_denominator=2)
st_wexp = st.fractions(min_value=QQ(-2), max_value=QQ(2), max_denominator=2)
st_coeff = st.fractions(min_value=QQ(-4), max_value=QQ(4), max_denominator=3)
st_laurent = st.dictionaries(st.tuples(st_qexp, st_wexp), st_coeff, max_size=6)


def make_wq(pairs, q_trunc=None, w_floor=None):
    return WQSeries(((qe, we, c) for (qe, we), c in pairs.items()), q_trunc, w_floor)


def brute_product(pa, pb):
    """Dense dict-of-dict convolution oracle for finite Laurent polynomials."""
    out = {}
    for (qa, wa), ca in pa.items():
        for (qb, wb), cb in pb.items():
            key = (qa + qb, wa + wb)
            out[key] = out.get(key, QQ(0)) + ca * cb
    return {k: v for k, v in out.items() if v != 0}


# -- frozen theta slices --------------------------------------------------------


def test_square_lattice_theta_slices():
    th = theta_big(0, 1, 1, 1, 5)
    assert th.q_slice(QQ(0)) == {QQ(0): QQ(1)}
    assert th.q_slice(QQ(1)) == {QQ(1): QQ(1), QQ(-1): QQ(1)}
    assert th.q_slice(QQ(4)) == {QQ(2): QQ(1), QQ(-2): QQ(1)}
    assert set(th.terms) == {QQ(0), QQ(1), QQ(4)}
    assert th.q_trunc == QQ(5)
    assert th.w_floor is None


def test_shifted_theta_slices():
    # index (1, 2): w-exponent 2(m + 1/4), q-exponent 2(m + 1/4)^2
    th = theta_big(1, 2, 1, 1, 4)
    assert th.q_slice(QQ(1, 8)) == {QQ(1, 2): QQ(1)}
    assert th.q_slice(QQ(9, 8)) == {QQ(-3, 2): QQ(1)}
    assert th.q_slice(QQ(25, 8)) == {QQ(5, 2): QQ(1)}
    assert set(th.terms) == {QQ(1, 8), QQ(9, 8), QQ(25, 8)}


def test_theta_index_validation():
    with pytest.raises(InvalidIndex):
        theta_big(1, 0, 1, 1, 4)
    with pytest.raises(InvalidIndex):
        theta_big(QQ(1, 2), 2, 1, 1, 4)
    with pytest.raises(ValueError):
        theta_big(1, 2, 1, -1, 4)
    with pytest.raises(ValueError):
        theta_big(1, 2, 1, 1, 0)


def test_theta_q_is_classical_sum_of_squares_series():
    t3 = theta_q(0, 1, 1, 12)
    assert t3.terms == {QQ(0): QQ(1), QQ(1): QQ(2), QQ(4): QQ(2), QQ(9): QQ(2)}


def test_half_integer_thetas():
    t2 = vartheta2(3)
    assert t2.q_slice(QQ(1, 8)) == {QQ(1, 2): QQ(1), QQ(-1, 2): QQ(1)}
    assert t2.q_slice(QQ(9, 8)) == {QQ(3, 2): QQ(1), QQ(-3, 2): QQ(1)}
    t1 = vartheta1_times_i(3)
    assert t1.q_slice(QQ(1, 8)) == {QQ(1, 2): QQ(1), QQ(-1, 2): QQ(-1)}
    assert t1.q_slice(QQ(9, 8)) == {QQ(3, 2): QQ(-1), QQ(-3, 2): QQ(1)}


def test_odd_weyl_denominator_leading_slice():
    pi = weyl_denominator(4)
    assert pi.min_q() == QQ(1, 24)
    assert pi.q_slice(QQ(1, 24)) == {QQ(1, 4): QQ(1), QQ(-1, 4): QQ(-1)}


def test_weyl_denominator_product_form_matches_theta_form():
    ok, bad, box = wq_equal_on_box(
        weyl_denominator(10, "theta"), weyl_denominator(10, "product")
    )
    assert ok, bad
    assert box[0] == QQ(10)
    with pytest.raises(ValueError):
        weyl_denominator(4, "series")


def test_denominator_bridge_identity():
    # product of the odd denominator with the half-argument even theta equals
    # the alternating half-integer theta times eta, exactly on the common box
    N = QQ(8)
    lhs = wq_mul(weyl_denominator(N), vartheta2(N, w_scale=QQ(1, 2)))
    rhs = wq_mul(vartheta1_times_i(N), wq_from_q(qs_eta(N)))
    ok, bad, _ = wq_equal_on_box(lhs, rhs)
    assert ok, bad


# -- structural operations --------------------------------------------------------


def test_items_ordering_q_ascending_w_descending():
    a = make_wq({(1, -1): QQ(2), (1, 1): QQ(3), (0, 0): QQ(1)}, q_trunc=4)
    assert list(a.items()) == [
        (QQ(0), QQ(0), QQ(1)),
        (QQ(1), QQ(1), QQ(3)),
        (QQ(1), QQ(-1), QQ(2)),
    ]


def test_min_q_raises_on_empty():
    empty = WQSeries((), 3, None)
    with pytest.raises(EmptySeries):
        empty.min_q()
    assert empty.min_q_bound() == QQ(3)


def test_w_slice_and_q_slice():
    a = make_wq({(0, 0): QQ(1), (1, 0): QQ(5), (1, 2): QQ(7)}, q_trunc=3)
    ws = a.w_slice(QQ(0))
    assert ws.terms == {QQ(0): QQ(1), QQ(1): QQ(5)}
    assert ws.trunc == QQ(3)
    assert a.q_slice(QQ(1)) == {QQ(0): QQ(5), QQ(2): QQ(7)}
    assert a.q_slice(QQ(2)) == {}


def test_scale_w_moves_exponents_and_floor():
    a = make_wq({(0, 1): QQ(1), (1, -2): QQ(3)}, q_trunc=2, w_floor=-2)
    b = wq_scale_w(a, QQ(1, 2))
    assert b.q_slice(QQ(0)) == {QQ(1, 2): QQ(1)}
    assert b.q_slice(QQ(1)) == {QQ(-1): QQ(3)}
    assert b.w_floor == QQ(-1)
    with pytest.raises(ValueError):
        wq_scale_w(a, 0)


def test_shift_moves_both_exponents():
    a = make_wq({(0, 0): QQ(1)}, q_trunc=2)
    b = wq_shift(a, QQ(1, 3), QQ(-1, 2), coeff=QQ(5))
    assert b.q_slice(QQ(1, 3)) == {QQ(-1, 2): QQ(5)}
    assert b.q_trunc == QQ(2) + QQ(1, 3)


def test_specializations():
    t2 = vartheta2(3)
    w1 = wq_specialize_w1(t2)
    assert w1.terms == {QQ(1, 8): QQ(2), QQ(9, 8): QQ(2)}
    signed = wq_specialize_w_signed(t2)
    # w-exponents are half-odd integers, so every term flips sign
    assert signed.terms == {QQ(1, 8): QQ(-2), QQ(9, 8): QQ(-2)}
    floored = WQSeries(((0, 0, 1),), 2, w_floor=0)
    with pytest.raises(ValueError):
        wq_specialize_w1(floored)


def test_to_q_round_trip_and_rejection():
    a = QSeries({QQ(0): 1, QQ(1, 2): 3}, trunc=QQ(2))
    back = wq_to_q(wq_from_q(a))
    assert back == a
    with pytest.raises(ValueError):
        wq_to_q(make_wq({(0, 1): QQ(1)}, q_trunc=2))


# -- multiplication against a dense oracle ----------------------------------------


@settings(max_examples=100, deadline=None)
@given(st_laurent, st_laurent)
def test_complete_product_matches_dense_convolution(pa, pb):
    a, b = make_wq(pa), make_wq(pb)
    prod = wq_mul(a, b)
    expected = brute_product(pa, pb)
    got = {
        (qe, we): c for qe, sl in prod.terms.items() for we, c in sl.items()
    }
    assert got == expected
    assert prod.q_trunc is None and prod.w_floor is None


@settings(max_examples=100, deadline=None)
@given(st_laurent, st_laurent, st_qexp, st_wexp)
def test_boxed_product_is_sound(pa, pb, t, f):
    """Multiplying floored/truncated inputs agrees with the dense product on the box."""
    t = t + 1
    a = make_wq(pa, q_trunc=t, w_floor=f)
    b = make_wq(pb, q_trunc=t, w_floor=f)
    if a.is_zero or b.is_zero:
        return  # an empty floored factor has no well-defined product box
    prod = wq_mul(a, b)
    dense = make_wq(brute_product(pa, pb))
    ok, bad, _ = wq_equal_on_box(prod, dense)
    assert ok, bad


@settings(max_examples=100, deadline=None)
@given(st_laurent, st_laurent)
def test_add_commutes(pa, pb):
    a, b = make_wq(pa, q_trunc=3), make_wq(pb, q_trunc=4)
    ok, bad, _ = wq_equal_on_box(wq_add(a, b), wq_add(b, a))
    assert ok, bad


@settings(max_examples=100, deadline=None)
@given(st_laurent)
def test_scalar_distributes_over_slices(pa):
    a = make_wq(pa, q_trunc=5)
    tripled = wq_scalar(a, 3)
    ok, bad, _ = wq_equal_on_box(tripled, wq_add(a, wq_add(a, a)))
    assert ok, bad


# -- inversion and division --------------------------------------------------------


def test_invert_theta_on_box():
    b = weyl_denominator(6)
    inv = wq_invert(b, w_floor=QQ(-8))
    prod = wq_mul(b, inv)
    one = WQSeries(((0, 0, 1),), None, None)
    ok, bad, box = wq_equal_on_box(prod, one)
    assert ok, bad
    assert box[0] is not None and box[0] > 0


def test_invert_requires_floor_for_multiterm_lead():
    with pytest.raises(ValueError):
        wq_invert(weyl_denominator(6))
    with pytest.raises(EmptySeries):
        wq_invert(WQSeries((), 3, None))


def test_invert_monomial_is_exact():
    m = WQSeries(((QQ(1, 8), QQ(1, 2), QQ(2)),), None, None)
    inv = wq_invert(m, q_trunc=QQ(3))
    assert inv.q_slice(QQ(-1, 8)) == {QQ(-1, 2): QQ(1, 2)}


def test_division_round_trip():
    N = QQ(6)
    a = vartheta2(N, w_scale=QQ(1, 2))
    b = weyl_denominator(N)
    quot = wq_div(a, b, w_floor=QQ(-6))
    back = wq_mul(b, quot)
    ok, bad, _ = wq_equal_on_box(back, a)
    assert ok, bad
