"""Combinatorial fusion rings.

Everything here reduces to one 0/1 coefficient rule on a window of size w
(:func:`n_coeff`): Virasoro minimal models fold two copies of it through the
label identification, integrable affine sl2 uses it at window k+2, the
superalgebra family at window 2k+3 with a locality flag per label, and the
parafermion coset crosses the superalgebra rule with a cyclic group.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Mapping, Optional, Tuple

from .characters import VirLabel


class OutOfRange(ValueError):
    """Raised when a fusion label lies outside the ring's label set."""


@dataclass(frozen=True)
class SuperFusionEntry:
    """Dimensions of a parity-decorated space of intertwining operators."""

    even_dim: int
    odd_dim: int

    @property
    def sdim(self) -> int:
        return self.even_dim - self.odd_dim

    @property
    def total_dim(self) -> int:
        return self.even_dim + self.odd_dim


Label = Hashable


class FusionTensor:
    """Immutable fusion-coefficient tensor over an ordered label set."""

    __slots__ = ("labels", "unit", "_coeffs", "label_flags", "_index")

    def __init__(self, labels, unit, coeffs: Mapping[Tuple, int],
                 label_flags: Optional[Mapping[Label, str]] = None):
        self.labels = tuple(labels)
        self._index = {a: i for i, a in enumerate(self.labels)}
        if unit not in self._index:
            raise OutOfRange("unit %r is not a label" % (unit,))
        self.unit = unit
        self._coeffs = {key: int(n) for key, n in coeffs.items() if n}
        self.label_flags = dict(label_flags) if label_flags else None

    def _check(self, a: Label) -> Label:
        if a not in self._index:
            raise OutOfRange("label %r is not in the ring" % (a,))
        return a

    def coeff(self, a: Label, b: Label, c: Label) -> int:
        self._check(a), self._check(b), self._check(c)
        return self._coeffs.get((a, b, c), 0)

    def product(self, a: Label, b: Label) -> Dict[Label, int]:
        self._check(a), self._check(b)
        out = {}
        for c in self.labels:
            n = self._coeffs.get((a, b, c), 0)
            if n:
                out[c] = n
        return out

    def items(self):
        return self._coeffs.items()

    def __eq__(self, other):
        if not isinstance(other, FusionTensor):
            return NotImplemented
        return (set(self.labels) == set(other.labels)
                and self.unit == other.unit
                and self._coeffs == other._coeffs)

    def __repr__(self):
        return "FusionTensor(%d labels, %d nonzero entries)" % (
            len(self.labels), len(self._coeffs))

    # -- ring axioms ----------------------------------------------------------

    def verify_unit(self) -> bool:
        for b in self.labels:
            for c in self.labels:
                want = 1 if b == c else 0
                if self.coeff(self.unit, b, c) != want:
                    return False
        return True

    def verify_commutativity(self) -> bool:
        for a in self.labels:
            for b in self.labels:
                for c in self.labels:
                    if self.coeff(a, b, c) != self.coeff(b, a, c):
                        return False
        return True

    def verify_associativity(self) -> bool:
        """Exhaustive check of sum_e N(a,b,e)N(e,c,d) = sum_f N(b,c,f)N(a,f,d)."""
        L = self.labels
        for a in L:
            ab = {b: self.product(a, b) for b in L}
            for b in L:
                for c in L:
                    bc = self.product(b, c)
                    for d in L:
                        lhs = sum(n * self._coeffs.get((e, c, d), 0)
                                  for e, n in ab[b].items())
                        rhs = sum(n * self._coeffs.get((a, f, d), 0)
                                  for f, n in bc.items())
                        if lhs != rhs:
                            return False
        return True

    def dual(self, a: Label) -> Label:
        self._check(a)
        partners = [b for b in self.labels if self.coeff(a, b, self.unit) == 1]
        if len(partners) != 1:
            raise OutOfRange("label %r has %d dual candidates" % (a, len(partners)))
        return partners[0]

    def verify_duality(self) -> bool:
        """Each label has a unique dual and N(a,b,c) = N(a*,c,b)."""
        try:
            duals = {a: self.dual(a) for a in self.labels}
        except OutOfRange:
            return False
        for a in self.labels:
            for b in self.labels:
                for c in self.labels:
                    if self.coeff(a, b, c) != self.coeff(duals[a], c, b):
                        return False
        return True


def n_coeff(w: int, t: int, t_prime: int, t_second: int) -> int:
    """0/1 window fusion rule at size w.

    Returns 1 iff |t-t'|+1 <= t'' <= min(t+t'-1, 2w-t-t') and t+t'+t''
    is odd.  The two input labels must lie in [1, w-1]; the candidate
    output label may be any integer (the rule is 0 outside the window).
    """
    if not isinstance(w, int) or w < 2:
        raise OutOfRange("window size must be an integer >= 2, got %r" % (w,))
    for t_ in (t, t_prime):
        if not isinstance(t_, int) or not (1 <= t_ <= w - 1):
            raise OutOfRange("label %r outside [1, %d]" % (t_, w - 1))
    if not isinstance(t_second, int):
        raise OutOfRange("candidate label %r is not an integer" % (t_second,))
    if (t + t_prime + t_second) % 2 == 0:
        return 0
    lo = abs(t - t_prime) + 1
    hi = min(t + t_prime - 1, 2 * w - t - t_prime)
    return 1 if lo <= t_second <= hi else 0


def _vir_canon(u: int, p: int, r: int, s: int) -> VirLabel:
    return VirLabel(r, s) if (r, s) <= (u - r, p - s) else VirLabel(u - r, p - s)


def vir_fusion(u: int, p: int) -> FusionTensor:
    """Fusion tensor of the (u, p) Virasoro minimal model.

    Coefficients are products of the two window rules, folded onto canonical
    representatives by summing the contributions of both preimages of each
    target label.
    """
    if u < 2 or p < 2 or math.gcd(u, p) != 1:
        raise OutOfRange("need coprime u, p >= 2, got (%r, %r)" % (u, p))
    labels: List[VirLabel] = []
    seen = set()
    for r in range(1, u):
        for s in range(1, p):
            lab = _vir_canon(u, p, r, s)
            if lab not in seen:
                seen.add(lab)
                labels.append(lab)
    labels.sort(key=lambda l: (l.r, l.s))
    coeffs = {}
    for a in labels:
        for b in labels:
            for r2 in range(1, u):
                nr = n_coeff(u, a.r, b.r, r2)
                if not nr:
                    continue
                for s2 in range(1, p):
                    ns = n_coeff(p, a.s, b.s, s2)
                    if not ns:
                        continue
                    c = _vir_canon(u, p, r2, s2)
                    key = (a, b, c)
                    coeffs[key] = coeffs.get(key, 0) + nr * ns
    return FusionTensor(labels, VirLabel(1, 1), coeffs)


def sl2_fusion(k: int) -> FusionTensor:
    """Fusion tensor of integrable affine sl2 at positive integer level k."""
    if not isinstance(k, int) or k < 1:
        raise OutOfRange("level must be a positive integer, got %r" % (k,))
    labels = tuple(range(1, k + 2))
    coeffs = {}
    for a in labels:
        for b in labels:
            for c in labels:
                n = n_coeff(k + 2, a, b, c)
                if n:
                    coeffs[(a, b, c)] = n
    return FusionTensor(labels, 1, coeffs)


def osp_fusion(k: int) -> FusionTensor:
    """Fusion tensor of the superalgebra family at positive integer level k.

    Labels r = 1..2k+2 with the window rule at 2k+3; each label carries a
    locality flag: odd r is local (integer-graded), even r is twisted.
    """
    if not isinstance(k, int) or k < 1:
        raise OutOfRange("level must be a positive integer, got %r" % (k,))
    labels = tuple(range(1, 2 * k + 3))
    coeffs = {}
    for a in labels:
        for b in labels:
            for c in labels:
                n = n_coeff(2 * k + 3, a, b, c)
                if n:
                    coeffs[(a, b, c)] = n
    flags = {r: ("local" if r % 2 == 1 else "twisted") for r in labels}
    return FusionTensor(labels, 1, coeffs, label_flags=flags)


def super_fusion(k: int, r: int, eps: int, r_prime: int, eps_prime: int,
                 r_second: int, eps_second: int) -> SuperFusionEntry:
    """Parity-resolved fusion multiplicity for the superalgebra family.

    The signed dimension is eps*eps'*eps'' times the window coefficient; the
    multiplicity sits entirely in the even or odd part according to that
    sign.
    """
    for e in (eps, eps_prime, eps_second):
        if e not in (1, -1):
            raise OutOfRange("parity signs must be +1 or -1, got %r" % (e,))
    n = n_coeff(2 * k + 3, r, r_prime, r_second)
    sign = eps * eps_prime * eps_second
    if n == 0:
        return SuperFusionEntry(0, 0)
    return SuperFusionEntry(n, 0) if sign > 0 else SuperFusionEntry(0, n)


def parafermion_fusion(k: int) -> FusionTensor:
    """Fusion tensor of the parafermion coset at positive integer level k.

    Labels are pairs (nu mod 2k, r) with r odd in 1..2k+2; the cyclic charge
    adds and the r-indices fuse by the window rule at 2k+3.
    """
    if not isinstance(k, int) or k < 1:
        raise OutOfRange("level must be a positive integer, got %r" % (k,))
    n_charge = 2 * k
    r_vals = tuple(r for r in range(1, 2 * k + 3) if r % 2 == 1)
    labels = tuple((nu, r) for nu in range(n_charge) for r in r_vals)
    coeffs = {}
    for (nu, r) in labels:
        for (lam, rp) in labels:
            mu = (nu + lam) % n_charge
            for rs in r_vals:
                n = n_coeff(2 * k + 3, r, rp, rs)
                if n:
                    coeffs[((nu, r), (lam, rp), (mu, rs))] = n
    return FusionTensor(labels, (0, 1), coeffs)
