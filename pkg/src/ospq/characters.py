"""Characters of the admissible-level superalgebra, affine sl2, and Virasoro
minimal-model families, plus exact verification of the character
decomposition that ties the three together.

Levels are parametrised by a coprime pair (p, p') with p + p' even; the
boundary data are

* level          k = p/(2p') - 3/2,
* index sum      delta = p + p',
* half index     u = delta/2.

Integer levels correspond to p' = 1.  All characters are produced as exact
truncated series by dividing theta-function numerators by the relevant
denominator (two-variable Weyl denominator, i*theta_1, or eta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

from .qseries import QQ, QSeries, Rat, as_fraction, qs_eta, qs_invert, qs_mul
from .theta import (
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
    wq_mul,
    wq_scalar,
    wq_specialize_w1,
    wq_specialize_w_signed,
)


class InvalidLabel(ValueError):
    """Raised when a module label is outside the valid range for a level."""


@dataclass(frozen=True)
class OspLabel:
    """Superalgebra highest-weight label (r, s): 1 <= r <= p-1, 0 <= s <= p'-1,
    r + s odd."""

    r: int
    s: int = 0


@dataclass(frozen=True)
class Sl2Label:
    """Affine sl2 label (r, s): 1 <= r <= u-1, 0 <= s <= p'-1."""

    r: int
    s: int = 0


@dataclass(frozen=True)
class VirLabel:
    """Virasoro minimal-model label (r, s): 1 <= r <= u-1, 1 <= s <= p-1,
    identified with (u-r, p-s)."""

    r: int
    s: int


@dataclass(frozen=True)
class AdmissibleLevel:
    """Admissible level data determined by the coprime pair (p, p')."""

    p: int
    p_prime: int

    def __post_init__(self):
        p, pp = self.p, self.p_prime
        if not (isinstance(p, int) and isinstance(pp, int)):
            raise ValueError("level indices must be integers")
        if p <= 1 or pp < 1:
            raise ValueError("need p > 1 and p' >= 1, got (%d, %d)" % (p, pp))
        if math.gcd(p, pp) != 1:
            raise ValueError("p and p' must be coprime, got (%d, %d)" % (p, pp))
        if (p + pp) % 2 != 0:
            raise ValueError("p + p' must be even, got (%d, %d)" % (p, pp))
        if math.gcd(p, (p + pp) // 2) != 1:
            raise ValueError("p and (p+p')/2 must be coprime")

    @classmethod
    def from_integer_level(cls, k: int) -> "AdmissibleLevel":
        if not isinstance(k, int) or k < 1:
            raise ValueError("integer level must be a positive integer")
        return cls(2 * k + 3, 1)

    @property
    def k(self) -> QQ:
        return QQ(self.p, 2 * self.p_prime) - QQ(3, 2)

    @property
    def delta(self) -> int:
        return self.p + self.p_prime

    @property
    def u(self) -> int:
        return (self.p + self.p_prime) // 2

    @property
    def is_integer_level(self) -> bool:
        return self.p_prime == 1

    def __str__(self):
        return "(p=%d, p'=%d, k=%s)" % (self.p, self.p_prime, self.k)

    # -- central charges and conformal weights -------------------------------

    @property
    def c_sl2(self) -> QQ:
        return 3 * self.k / (self.k + 2)

    @property
    def c_vir(self) -> QQ:
        u, p = self.u, self.p
        return 1 - QQ(6 * (u - p) ** 2, u * p)

    @property
    def c_osp(self) -> QQ:
        return self.c_sl2 + self.c_vir

    def h_sl2(self, r: int) -> QQ:
        """Conformal weight of the untwisted affine sl2 module with label (r, 0)."""
        return QQ(r * r - 1) / (4 * (self.k + 2))

    def h_vir(self, r: int, s: int) -> QQ:
        u, p = self.u, self.p
        return QQ((u * s - p * r) ** 2 - (u - p) ** 2, 4 * u * p)

    def component_weight(self, i: int, r: int) -> QQ:
        """Conformal weight of the i-th branching component of the r-th
        superalgebra module (integer level): h_sl2(i) + h_vir(i, r)."""
        if not self.is_integer_level:
            raise InvalidLabel("component weights require an integer level")
        return self.h_sl2(i) + self.h_vir(i, r)

    # -- label validation and enumeration ------------------------------------

    def check_osp(self, label: OspLabel) -> OspLabel:
        r, s = label.r, label.s
        if not (1 <= r <= self.p - 1):
            raise InvalidLabel("first index %d outside [1, %d]" % (r, self.p - 1))
        if not (0 <= s <= self.p_prime - 1):
            raise InvalidLabel(
                "second index %d outside [0, %d]" % (s, self.p_prime - 1)
            )
        if (r + s) % 2 != 1:
            raise InvalidLabel("indices (%d, %d) must have odd sum" % (r, s))
        return label

    def check_sl2(self, label: Sl2Label) -> Sl2Label:
        r, s = label.r, label.s
        if not (1 <= r <= self.u - 1):
            raise InvalidLabel("first index %d outside [1, %d]" % (r, self.u - 1))
        if not (0 <= s <= self.p_prime - 1):
            raise InvalidLabel(
                "second index %d outside [0, %d]" % (s, self.p_prime - 1)
            )
        if self.is_integer_level and s != 0:
            raise InvalidLabel("integer level uses only s = 0 labels")
        return label

    def check_vir(self, label: VirLabel) -> VirLabel:
        r, s = label.r, label.s
        if not (1 <= r <= self.u - 1):
            raise InvalidLabel("first index %d outside [1, %d]" % (r, self.u - 1))
        if not (1 <= s <= self.p - 1):
            raise InvalidLabel("second index %d outside [1, %d]" % (s, self.p - 1))
        return label

    def vir_canonical(self, label: VirLabel) -> VirLabel:
        self.check_vir(label)
        r, s = label.r, label.s
        r2, s2 = self.u - r, self.p - s
        return label if (r, s) <= (r2, s2) else VirLabel(r2, s2)

    def osp_labels(self) -> List[OspLabel]:
        return [
            OspLabel(r, s)
            for r in range(1, self.p)
            for s in range(self.p_prime)
            if (r + s) % 2 == 1
        ]

    def sl2_labels(self) -> List[Sl2Label]:
        smax = 1 if self.is_integer_level else self.p_prime
        return [Sl2Label(r, s) for r in range(1, self.u) for s in range(smax)]

    def vir_labels(self) -> List[VirLabel]:
        out = []
        seen = set()
        for r in range(1, self.u):
            for s in range(1, self.p):
                lab = self.vir_canonical(VirLabel(r, s))
                if lab not in seen:
                    seen.add(lab)
                    out.append(lab)
        return out


# -- theta numerators ---------------------------------------------------------


def osp_numerator(level: AdmissibleLevel, label: OspLabel, N: Rat) -> WQSeries:
    """Two-variable theta numerator of the superalgebra character."""
    level.check_osp(label)
    p, pp = level.p, level.p_prime
    a = p * pp
    b_plus = pp * label.r - p * label.s
    b_minus = -pp * label.r - p * label.s
    ws, qs = QQ(1, 2 * pp), QQ(1, 2)
    return wq_add(
        theta_big(b_plus, a, ws, qs, N),
        wq_scalar(theta_big(b_minus, a, ws, qs, N), -1),
    )


def sl2_numerator(level: AdmissibleLevel, label: Sl2Label, N: Rat) -> WQSeries:
    """Two-variable theta numerator of the affine sl2 character."""
    level.check_sl2(label)
    d, pp = level.delta, level.p_prime
    a = d * pp
    b_plus = 2 * pp * label.r - d * label.s
    b_minus = -2 * pp * label.r - d * label.s
    ws, qs = QQ(1, 2 * pp), QQ(1, 2)
    return wq_add(
        theta_big(b_plus, a, ws, qs, N),
        wq_scalar(theta_big(b_minus, a, ws, qs, N), -1),
    )


def vir_numerator(level: AdmissibleLevel, label: VirLabel, N: Rat) -> QSeries:
    """One-variable theta numerator of the Virasoro character."""
    level.check_vir(label)
    d, p = level.delta, level.p
    a = d * p
    b_plus = 2 * p * label.r - d * label.s
    b_minus = -2 * p * label.r - d * label.s
    num = theta_q(b_plus, a, QQ(1, 2), N) - theta_q(b_minus, a, QQ(1, 2), N)
    return num


# -- characters ---------------------------------------------------------------


def _integer_level_floor(level: AdmissibleLevel, N: QQ) -> QQ:
    # every true term of an integer-level character has w-exponent of
    # magnitude <= top isospin + depth < p/2 + (N + 1); one unit of margin
    return -(QQ(level.p, 2) + N + 2)


def _default_floor(N: QQ) -> QQ:
    return -(N + 4)


def osp_char(level: AdmissibleLevel, label: OspLabel, N: Rat,
             w_floor: Optional[Rat] = None) -> WQSeries:
    """Character of the superalgebra module, exact on the returned box.

    For integer levels the result carries the complete w-support of every
    q-slice (no floor).  For fractional levels the slices are genuinely
    infinite descending series in w and the result is cut at ``w_floor``
    (default -(N+4)).
    """
    N = as_fraction(N)
    num = osp_numerator(level, label, N + 1)
    if num.is_zero:
        return WQSeries((), N, None)
    m_num = num.min_q()
    M_den = N - math.floor(min(m_num, 0)) + 2
    den = weyl_denominator(M_den, "theta")
    if level.is_integer_level and w_floor is None:
        ch = wq_div(num, den, q_trunc=N, w_floor=_integer_level_floor(level, N))
        return ch.truncate_q(N)._with_floor(None)
    F = _default_floor(N) if w_floor is None else as_fraction(w_floor)
    return wq_div(num, den, q_trunc=N, w_floor=F).truncate_q(N)


def sl2_char(level: AdmissibleLevel, label: Sl2Label, N: Rat,
             w_floor: Optional[Rat] = None) -> WQSeries:
    """Character of the affine sl2 module, exact on the returned box.

    Same floor policy as :func:`osp_char`: complete w-support at integer
    level, floored descending expansion otherwise.
    """
    N = as_fraction(N)
    num = sl2_numerator(level, label, N + 1)
    if num.is_zero:
        return WQSeries((), N, None)
    m_num = num.min_q()
    M_den = N - math.floor(min(m_num, 0)) + 2
    den = vartheta1_times_i(M_den)
    if level.is_integer_level and w_floor is None:
        ch = wq_div(num, den, q_trunc=N, w_floor=_integer_level_floor(level, N))
        return ch.truncate_q(N)._with_floor(None)
    F = _default_floor(N) if w_floor is None else as_fraction(w_floor)
    return wq_div(num, den, q_trunc=N, w_floor=F).truncate_q(N)


def vir_char(level: AdmissibleLevel, label: VirLabel, N: Rat) -> QSeries:
    """Virasoro minimal-model character, exact to order N."""
    N = as_fraction(N)
    num = vir_numerator(level, label, N + 1)
    if num.is_zero:
        return QSeries({}, N)
    m = num.min_exp()
    M_eta = N - math.floor(min(m, 0)) + 2
    inv_eta = qs_invert(qs_eta(M_eta))
    return qs_mul(num, inv_eta).truncate(N)


# -- identity verification ----------------------------------------------------


@dataclass(frozen=True)
class IdentityReport:
    """Outcome of an exact series identity check."""

    ok: bool
    order: QQ
    first_discrepancy: Optional[Tuple[QQ, QQ, QQ, QQ]]  # (q, w, lhs, rhs)
    detail: str

    def __bool__(self):
        return self.ok


def _report(ok, order, bad, what) -> IdentityReport:
    if ok:
        return IdentityReport(True, order, None, "%s holds to order %s" % (what, order))
    qe, we, ca, cb = bad
    return IdentityReport(
        False,
        order,
        bad,
        "%s FAILS first at q^%s w^%s: lhs %s != rhs %s" % (what, qe, we, ca, cb),
    )


def verify_theta_identity(level: AdmissibleLevel, label: OspLabel,
                          N: Rat) -> IdentityReport:
    """Exact numerator-level identity underlying the character decomposition.

    Compares (theta numerator of the superalgebra character) * vartheta_2 at
    the half argument against the sum over the branching index i of
    sl2-numerator(i, s) * Virasoro-numerator(i, r), all to order N.
    """
    N = as_fraction(N)
    level.check_osp(label)
    lhs = wq_mul(osp_numerator(level, label, N), vartheta2(N, w_scale=QQ(1, 2)))
    rhs = WQSeries((), N, None)
    for i in range(1, level.u):
        part_w = sl2_numerator(level, Sl2Label(i, label.s), N)
        part_q = vir_numerator(level, VirLabel(i, label.r), N)
        rhs = wq_add(rhs, wq_mul(part_w, wq_from_q(part_q)))
    ok, bad, _ = wq_equal_on_box(lhs, rhs, order=N)
    what = "theta identity at %s, label (%d,%d)" % (level, label.r, label.s)
    return _report(ok, N, bad, what)


def verify_decomposition(level: AdmissibleLevel, label: OspLabel,
                         N: Rat) -> IdentityReport:
    """Exact character-level branching check.

    Compares the superalgebra character against the sum over i of
    (affine sl2 character at label (i, s)) * (Virasoro character at label
    (i, r)), on the common guarantee box up to order N.
    """
    N = as_fraction(N)
    level.check_osp(label)
    margin = QQ(4)
    for _ in range(6):
        M = N + margin
        lhs = osp_char(level, label, M)
        total = WQSeries((), None, None)
        for i in range(1, level.u):
            part_w = sl2_char(level, Sl2Label(i, label.s), M)
            part_q = vir_char(level, VirLabel(i, label.r), M)
            total = wq_add(total, wq_mul(part_w, wq_from_q(part_q)))
        T = total.q_trunc
        if T is None or T >= N:
            break
        margin += N - T
    ok, bad, _ = wq_equal_on_box(lhs, total, order=N)
    what = "character decomposition at %s, label (%d,%d)" % (level, label.r, label.s)
    return _report(ok, N, bad, what)


def osp_vacuum_central_charge(level: AdmissibleLevel) -> QQ:
    """Central charge read off the vacuum character's lowest exponent."""
    ch = osp_char(level, OspLabel(1, 0), 2)
    return -24 * ch.min_q()


# -- specialised one-variable characters (integer level) ----------------------


def char_w1(level: AdmissibleLevel, r: int, N: Rat, signed: bool = False) -> QSeries:
    """w -> 1 specialisation of the r-th module's character (integer level).

    Built from the branching components, so it is defined for every
    1 <= r <= p-1 including the twisted (even r) modules.  With ``signed``
    the odd components (even branching index) enter with a minus sign.
    """
    if not level.is_integer_level:
        raise InvalidLabel("one-variable specialisations require an integer level")
    if not (1 <= r <= level.p - 1):
        raise InvalidLabel("module index %d outside [1, %d]" % (r, level.p - 1))
    N = as_fraction(N)
    margin = QQ(2)
    while True:
        M = N + margin
        total = QSeries({}, None)
        for i in range(1, level.u):
            part = qs_mul(
                wq_specialize_w1(sl2_char(level, Sl2Label(i, 0), M)),
                vir_char(level, VirLabel(i, r), M),
            )
            if signed and i % 2 == 0:
                part = -1 * part
            total = total + part
        if total.trunc is None or total.trunc >= N:
            return total.truncate(N)
        margin += N - total.trunc


def component_chars_w1(level: AdmissibleLevel, N: Rat
                       ) -> Dict[int, Tuple[QSeries, QSeries]]:
    """All (plain, signed) w -> 1 characters for r = 1..p-1, sharing work."""
    if not level.is_integer_level:
        raise InvalidLabel("one-variable specialisations require an integer level")
    N = as_fraction(N)
    margin = QQ(2)
    while True:
        M = N + margin
        sl2_parts = {
            i: wq_specialize_w1(sl2_char(level, Sl2Label(i, 0), M))
            for i in range(1, level.u)
        }
        out = {}
        worst = None
        for r in range(1, level.p):
            plus = QSeries({}, None)
            minus = QSeries({}, None)
            for i in range(1, level.u):
                part = qs_mul(sl2_parts[i], vir_char(level, VirLabel(i, r), M))
                plus = plus + part
                minus = minus + (part if i % 2 == 1 else -1 * part)
            if plus.trunc is not None and (worst is None or plus.trunc < worst):
                worst = plus.trunc
            out[r] = (plus.truncate(N), minus.truncate(N))
        if worst is None or worst >= N:
            return out
        margin += N - worst


def char_w_signed_direct(level: AdmissibleLevel, label: OspLabel, N: Rat) -> QSeries:
    """Signed specialisation w^x -> (-1)^{2x} applied directly to the
    two-variable character (integer level, local modules only); used to
    cross-check the component-built signed character."""
    if not level.is_integer_level:
        raise InvalidLabel("direct specialisation requires an integer level")
    return wq_specialize_w_signed(osp_char(level, label, N))


def is_integer_graded(level: AdmissibleLevel, r: int, N: Rat = 6) -> bool:
    """Whether the r-th module's conformal weights are integer-spaced.

    Inspects the exponent support of the w -> 1 character relative to its
    lowest exponent.  Local modules (odd r) are integer-graded; twisted
    modules (even r) contain half-odd-integer spacings.
    """
    ch = char_w1(level, r, N)
    e0 = ch.min_exp()
    return all((e - e0).denominator == 1 for e in ch.terms)
