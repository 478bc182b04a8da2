"""Lattice coset sectors: branchings, phase sums, reassembly, modular data."""

from fractions import Fraction as QQ

import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from ospq.characters import AdmissibleLevel, InvalidLabel, VirLabel, char_w1, vir_char
from ospq.coset import (
    CosetLabel,
    InconsistentBranching,
    LatticeData,
    coset_char_direct,
    coset_char_phase_sum,
    coset_labels,
    coset_reassembly,
    coset_smatrix,
    coset_t_phase,
    lattice_theta,
)
from ospq.fusion import OutOfRange, parafermion_fusion
from ospq.modular import derived_tolerance, s_small, st_cube_defect, t_matrix, verlinde_standard
from ospq.qseries import qs_equal_below

st_k = st.integers(min_value=1, max_value=4)


# -- labels and lattice bookkeeping ------------------------------------------------


def test_label_grid():
    assert coset_labels(1) == (
        CosetLabel(0, 1),
        CosetLabel(0, 3),
        CosetLabel(1, 1),
        CosetLabel(1, 3),
    )
    assert len(coset_labels(2)) == 12
    assert len(coset_labels(3)) == 24  # 2k charges x (k+1) odd module indices


def test_lattice_data():
    L = LatticeData(2)
    assert L.gram == 4
    assert L.dual_order == 4
    assert L.pairing(1, 3) == QQ(3, 4)
    assert L.pairing(2, 2) == 1


def test_label_validation():
    with pytest.raises(InvalidLabel):
        coset_char_direct(1, (0, 2), 4)  # even module index
    with pytest.raises(InvalidLabel):
        coset_char_direct(1, (0, 5), 4)  # outside the window
    with pytest.raises(OutOfRange):
        coset_labels(0)


@settings(max_examples=40, deadline=None)
@given(st_k, st.integers(min_value=-8, max_value=8))
def test_charge_is_periodic_mod_2k(k, nu):
    r = 1
    a = coset_char_direct(k, (nu % (2 * k), r), 3)
    b = coset_char_direct(k, (nu, r), 3)
    ok, bad = qs_equal_below(a, b, order=3)
    assert ok, bad


# -- frozen lattice thetas ------------------------------------------------------------


def test_rank_one_lattice_theta():
    t0 = lattice_theta(1, 0, 6)
    assert t0.terms == {QQ(0): QQ(1), QQ(1): QQ(2), QQ(4): QQ(2)}
    t1 = lattice_theta(1, 1, 6)
    assert t1.terms == {QQ(1, 4): QQ(2), QQ(9, 4): QQ(2)}


@settings(max_examples=30, deadline=None)
@given(st_k, st.integers(min_value=0, max_value=7))
def test_lattice_theta_charge_conjugation(k, nu):
    a = lattice_theta(k, nu % (2 * k), 5)
    b = lattice_theta(k, (-nu) % (2 * k), 5)
    ok, bad = qs_equal_below(a, b, order=5)
    assert ok, bad


# -- sector characters ------------------------------------------------------------------


def test_level_one_sectors_are_the_u3_p5_minimal_model():
    lvl = AdmissibleLevel.from_integer_level(1)
    correspondence = {
        (0, 1): VirLabel(1, 1),
        (1, 1): VirLabel(1, 4),
        (0, 3): VirLabel(1, 3),
        (1, 3): VirLabel(1, 2),
    }
    for lab, vlab in correspondence.items():
        sector = coset_char_direct(1, lab, 10)
        minimal = vir_char(lvl, vlab, 10)
        ok, bad = qs_equal_below(sector, minimal, order=10)
        assert ok, (lab, bad)


def test_vacuum_sector_leading_exponent():
    ch = coset_char_direct(1, (0, 1), 6)
    assert ch.min_exp() == QQ(1, 40)  # -c/24 with c = -3/5
    assert ch.coeff(QQ(1, 40)) == 1
    # no weight-one current survives in the quotient
    assert ch.coeff(QQ(41, 40)) == 0


def test_charge_conjugation_symmetry():
    for k, nu, r in ((2, 1, 3), (3, 2, 5)):
        a = coset_char_direct(k, (nu, r), 4)
        b = coset_char_direct(k, (2 * k - nu, r), 4)
        ok, bad = qs_equal_below(a, b, order=4)
        assert ok, bad


def test_phase_sum_route_agrees_with_direct():
    for k, lab, variant in (
        (1, (0, 1), "plus"),
        (1, (1, 3), "plus"),
        (1, (1, 1), "minus"),
        (2, (1, 1), "plus"),
        (2, (2, 3), "minus"),
    ):
        direct = coset_char_direct(k, lab, 6)
        phased = coset_char_phase_sum(k, lab, 6, variant=variant)
        ok, bad = qs_equal_below(direct, phased, order=6)
        assert ok, (k, lab, variant, bad)


def test_phase_sum_integer_gate_fires():
    with pytest.raises(InconsistentBranching):
        coset_char_phase_sum(3, (1, 1), 3, tolerance=1e-60)


# -- sector T phases -----------------------------------------------------------------


def test_t_phase_frozen_values():
    with mp.workprec(300):
        vac = coset_t_phase(1, (0, 1))
        assert abs(vac - mp.expjpi(QQ(1, 20))) < mp.mpf(10) ** -60
        charged = coset_t_phase(1, (1, 1))
        assert abs(charged - mp.expjpi(2 * QQ(-9, 40))) < mp.mpf(10) ** -60
        assert abs(abs(charged) - 1) < mp.mpf(10) ** -60


def test_t_phase_matches_t_matrix_family():
    T = t_matrix("coset", 2)
    with mp.workprec(300):
        for lab in coset_labels(2):
            assert abs(T.phase(lab) - coset_t_phase(2, lab)) < mp.mpf(10) ** -60


# -- reassembly of the one-variable characters ------------------------------------------


@pytest.mark.parametrize("signed", [False, True])
def test_reassembly_identity(signed):
    for k, r in ((1, 1), (1, 3), (2, 3)):
        rep = coset_reassembly(k, r, 8, signed=signed)
        assert rep.ok, (k, r, rep.detail)


def test_reassembly_covers_local_modules_only():
    with pytest.raises(InvalidLabel):
        coset_reassembly(1, 2, 4)


def test_reassembly_matches_specialised_character():
    # independent cross-check of the identity's left side at one data point
    ch = char_w1(AdmissibleLevel.from_integer_level(1), 1, 6)
    assert ch.coeff(QQ(-1, 60)) == 1


# -- modular data over the sectors --------------------------------------------------------


def test_coset_smatrix_frozen_entries():
    S = coset_smatrix(1, verify=False)
    with mp.workprec(300):
        root2 = mp.sqrt(mp.mpf(2))
        eps = mp.mpf(10) ** -60
        assert abs(S.entry((0, 1), (0, 1)) - root2 * s_small(1, 1, 1)) < eps
        # opposite-parity charges flip the sign; the pairing phase is trivial
        assert abs(S.entry((0, 1), (1, 1)) + root2 * s_small(1, 1, 1)) < eps
        # equal odd charges contribute the exact pairing phase e^{i pi}
        assert abs(S.entry((1, 1), (1, 1)) + root2 * s_small(1, 1, 1)) < eps
        assert abs(S.entry((0, 1), (0, 3)) - root2 * s_small(1, 1, 3)) < eps


@pytest.mark.parametrize("k", [1, 2, 3])
def test_coset_modular_consistency(k):
    S = coset_smatrix(k)  # verify=True: unitarity + Verlinde integrality inside
    assert S.unitarity_defect() < derived_tolerance(S.precision)
    assert verlinde_standard(S) == parafermion_fusion(k)
    T = t_matrix("coset", k)
    assert st_cube_defect(S, T) < mp.mpf(10) ** -60


def test_coset_smatrix_squares_to_charge_conjugation():
    S = coset_smatrix(2, verify=False)
    with mp.workprec(300):
        M = S.as_matrix()
        sq = M * M
        eps = mp.mpf(10) ** -60
        for i, a in enumerate(S.labels):
            ones = []
            for j, b in enumerate(S.labels):
                v = sq[i, j]
                near_one = abs(v - 1) < eps
                near_zero = abs(v) < eps
                assert near_one or near_zero, (a, b, v)
                if near_one:
                    ones.append(b)
            # exactly one partner: the conjugate sector (-nu, r)
            assert ones == [CosetLabel((-a.nu) % 4, a.r)], (a, ones)
