#!/usr/bin/env python
# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""
Exact angles on the upper unit semicircle and certified comparisons.

An angle θ ∈ [0, π] is identified with ``cos θ``; θ increases as the cosine
decreases.  Every angle knows the minimal polynomial of its cosine over the
rationals and can produce an ``arb`` ball around it at any precision.  Two
cosines with different minimal polynomials are different numbers, so
refining balls until they separate always terminates in principle; two
cosines sharing a minimal polynomial are compared by locating each of them
in the isolating intervals of that polynomial.
"""
import logging
import os
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from functools import lru_cache

import sympy as sp
from flint import arb
from flint import ctx
from flint import fmpq

from .exceptions import PrecisionExhausted
from .exceptions import Undecidable

logger = logging.getLogger(__name__)

X = sp.Symbol('x')
START_PREC = 64
DEFAULT_MAX_PREC = 4096


def max_precision():
    """precision cap in bits, overridable with ``GROPETOWER_MAX_PREC``"""
    return int(os.environ.get('GROPETOWER_MAX_PREC', DEFAULT_MAX_PREC))


@contextmanager
def working_precision(bits):
    saved = ctx.prec
    ctx.prec = bits
    try:
        yield
    finally:
        ctx.prec = saved


def refine(decide, what='sign', exc=PrecisionExhausted):
    """
    Call ``decide()`` at 64, 128, ... bits until it returns something other
    than ``None``; raise ``exc`` once the cap is passed.
    """
    prec = START_PREC
    cap = max_precision()
    while prec <= cap:
        with working_precision(prec):
            out = decide()
        if out is not None:
            return out
        logger.debug("could not decide %s at %d bits, doubling", what, prec)
        prec *= 2
    msg = "could not decide {what} within {cap} bits of precision".format(what=what, cap=cap)
    raise exc(msg, prec=cap)


def to_arb(value):
    value = Fraction(value)
    return arb(fmpq(value.numerator, value.denominator))


def _as_fraction(value):
    value = sp.Rational(value)
    return Fraction(int(value.p), int(value.q))


def _primitive(poly):
    """primitive integer polynomial in ``x`` with positive leading coefficient"""
    poly = sp.Poly(poly, X, domain='QQ')
    _, poly = poly.clear_denoms(convert=True)
    poly = poly.primitive()[1]
    if poly.LC() < 0:
        poly = -poly
    return poly


@lru_cache(maxsize=None)
def _isolating_intervals(coeffs):
    poly = sp.Poly(list(coeffs), X)
    return [(_as_fraction(lo), _as_fraction(hi)) for (lo, hi), _ in poly.intervals()]


class ExactAngle(object):
    """base class of exact angles; subclasses supply the cosine"""

    def cos_rational(self):
        """the cosine as a Fraction, or None if it is irrational"""
        return None

    def cos_minpoly(self):
        raise NotImplementedError

    def cos_ball(self):
        """``arb`` enclosure of the cosine at the current context precision"""
        raise NotImplementedError

    def minpoly_key(self):
        return tuple(int(c) for c in self.cos_minpoly().all_coeffs())

    def root_index(self):
        """position of the cosine among the real roots of its minimal polynomial"""
        key = self.minpoly_key()
        intervals = _isolating_intervals(key)
        if len(intervals) == 1:
            return 0

        def decide():
            ball = self.cos_ball()
            hits = [k for k, (lo, hi) in enumerate(intervals)
                    if ball > to_arb(lo) and ball < to_arb(hi)]
            return hits[0] if len(hits) == 1 else None

        return refine(decide, what='root index of {a}'.format(a=self), exc=Undecidable)


def compare_cos(a, b):
    """-1, 0 or 1 as ``cos a`` is less than, equal to or greater than ``cos b``"""
    qa, qb = a.cos_rational(), b.cos_rational()
    if qa is not None and qb is not None:
        return (qa > qb) - (qa < qb)

    def decide():
        ca, cb = a.cos_ball(), b.cos_ball()
        if ca < cb:
            return -1
        if ca > cb:
            return 1
        return None

    with working_precision(START_PREC):
        quick = decide()
    if quick is not None:
        return quick
    if a.minpoly_key() == b.minpoly_key():
        ia, ib = a.root_index(), b.root_index()
        # isolating intervals are listed in increasing order
        return (ia > ib) - (ia < ib)
    return refine(decide, what='{a} against {b}'.format(a=a, b=b), exc=Undecidable)


def angle_less(a, b):
    """θ_a < θ_b, decided exactly or by certified refinement"""
    return compare_cos(a, b) > 0


def angles_equal(a, b):
    return compare_cos(a, b) == 0


def sort_angles(angles):
    """sort by increasing θ"""
    return sorted(angles, key=cmp_to_key(lambda a, b: -compare_cos(a, b)))


def sign_at(coeffs, angle):
    """
    Exact sign of the integer polynomial ``coeffs`` (highest degree first) at
    ``cos`` of the angle.
    """
    poly = sp.Poly(list(coeffs), X)
    if poly.is_zero:
        return 0
    q = angle.cos_rational()
    if q is not None:
        return int(sp.sign(poly.eval(sp.Rational(q.numerator, q.denominator))))
    if poly.to_field().rem(angle.cos_minpoly().to_field()).is_zero:
        return 0
    ints = [int(c) for c in poly.all_coeffs()]

    def decide():
        c = angle.cos_ball()
        acc = arb(0)
        for coeff in ints:
            acc = acc * c + coeff
        if acc > 0:
            return 1
        if acc < 0:
            return -1
        return None

    return refine(decide, what='sign at {a}'.format(a=angle))


@lru_cache(maxsize=None)
def _turn_minpoly(r, p):
    return _primitive(sp.minimal_polynomial(sp.cos(2 * sp.pi * sp.Rational(r, p)), X))


_RATIONAL_TURN_COS = {
    Fraction(0): Fraction(1),
    Fraction(1, 6): Fraction(1, 2),
    Fraction(1, 4): Fraction(0),
    Fraction(1, 3): Fraction(-1, 2),
    Fraction(1, 2): Fraction(-1),
}


@dataclass(frozen=True)
class RationalTurn(ExactAngle):
    """θ = 2πr/p, stored reduced with 0 ≤ r < p"""

    r: int
    p: int

    def __post_init__(self):
        if self.p < 1:
            msg = "turn denominator must be positive, got {p}".format(p=self.p)
            raise ValueError(msg)
        turn = Fraction(self.r, self.p) % 1
        object.__setattr__(self, 'r', turn.numerator)
        object.__setattr__(self, 'p', turn.denominator)

    @property
    def folded(self):
        """the turn mapped into [0, 1/2] by θ -> -θ"""
        turn = Fraction(self.r, self.p)
        return min(turn, 1 - turn)

    def cos_rational(self):
        return _RATIONAL_TURN_COS.get(self.folded)

    def cos_minpoly(self):
        folded = self.folded
        return _turn_minpoly(folded.numerator, folded.denominator)

    def cos_ball(self):
        return arb.cos_pi_fmpq(fmpq(2 * self.r, self.p))

    def __str__(self):
        return 'turn({r}/{p})'.format(r=self.r, p=self.p)


@dataclass(frozen=True)
class CosValue(ExactAngle):
    """
    Angle given by its cosine.

    kind ``'rational'`` carries ``value``; kind ``'cbrt'`` carries ``m`` with
    cosine ``1 - 1/(2·∛m)``; kind ``'algebraic'`` carries the integer minimal
    polynomial ``poly`` (highest degree first) and a rational isolating
    interval ``(lo, hi)``.
    """

    kind: str
    value: Fraction = None
    m: int = None
    poly: tuple = None
    lo: Fraction = None
    hi: Fraction = None

    def __post_init__(self):
        if self.kind == 'cbrt':
            if self.m is None or self.m < 1:
                msg = "cube-root cosine needs m >= 1, got {m}".format(m=self.m)
                raise ValueError(msg)
            root, exact = sp.integer_nthroot(self.m, 3)
            if exact:
                object.__setattr__(self, 'value', 1 - Fraction(1, 2 * int(root)))
        elif self.kind == 'rational':
            object.__setattr__(self, 'value', Fraction(self.value))
            if not -1 <= self.value <= 1:
                msg = "cosine {v} is outside [-1, 1]".format(v=self.value)
                raise ValueError(msg)
        elif self.kind == 'algebraic':
            object.__setattr__(self, 'poly', tuple(int(c) for c in self.poly))
            object.__setattr__(self, 'lo', Fraction(self.lo))
            object.__setattr__(self, 'hi', Fraction(self.hi))
            if len(self.poly) == 2:
                object.__setattr__(self, 'value', Fraction(-self.poly[1], self.poly[0]))
        else:
            msg = "unknown cosine kind {k}".format(k=self.kind)
            raise ValueError(msg)

    @classmethod
    def rational(cls, value):
        return cls('rational', value=Fraction(value))

    @classmethod
    def cbrt(cls, m):
        return cls('cbrt', m=int(m))

    @classmethod
    def algebraic(cls, poly, lo, hi):
        return cls('algebraic', poly=tuple(poly), lo=Fraction(lo), hi=Fraction(hi))

    def cos_rational(self):
        return self.value

    def cos_minpoly(self):
        if self.value is not None:
            return _primitive(X - sp.Rational(self.value.numerator, self.value.denominator))
        if self.kind == 'cbrt':
            return _primitive(8 * self.m * (1 - X) ** 3 - 1)
        return sp.Poly(list(self.poly), X)

    def cos_ball(self):
        if self.value is not None:
            return to_arb(self.value)
        if self.kind == 'cbrt':
            return 1 - 1 / (2 * arb(self.m) ** (arb(1) / 3))
        lo, hi = _refined_interval(self.poly, self.lo, self.hi, ctx.prec)
        return to_arb(lo).union(to_arb(hi))

    def __str__(self):
        if self.kind == 'cbrt':
            return 'cos=1-1/(2*cbrt({m}))'.format(m=self.m)
        if self.value is not None:
            return 'cos={v}'.format(v=self.value)
        return 'cos=root({poly}) in [{lo}, {hi}]'.format(
            poly=','.join(str(c) for c in self.poly), lo=self.lo, hi=self.hi)


@lru_cache(maxsize=4096)
def _refined_interval(poly, lo, hi, prec):
    width = Fraction(1, 2 ** prec)
    refined = sp.Poly(list(poly), X).refine_root(
        sp.Rational(lo.numerator, lo.denominator),
        sp.Rational(hi.numerator, hi.denominator),
        eps=sp.Rational(width.numerator, width.denominator))
    return _as_fraction(refined[0]), _as_fraction(refined[1])


def theta_cos(m):
    """the angle θ_m with ``cos θ_m = 1 - 1/(2·∛m)``"""
    if m < 1:
        msg = "theta_cos needs m >= 1, got {m}".format(m=m)
        raise ValueError(msg)
    return CosValue.cbrt(m)
