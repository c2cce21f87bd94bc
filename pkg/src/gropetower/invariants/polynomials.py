#!/usr/bin/env python
# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""
Integer Laurent polynomials in one variable ``t``.
"""
from dataclasses import dataclass
from fractions import Fraction

import sympy as sp

T = sp.Symbol('t')


@dataclass(frozen=True)
class LaurentPoly(object):
    """Sparse Laurent polynomial; ``terms`` holds (exponent, coefficient)
    pairs sorted by exponent with no zero coefficients."""

    terms: tuple = ()

    @classmethod
    def from_dict(cls, coeffs):
        terms = tuple(sorted((int(e), int(c)) for e, c in coeffs.items() if c != 0))
        return cls(terms)

    @classmethod
    def from_coefficients(cls, coeffs, low=0):
        """``coeffs[k]`` is the coefficient of ``t**(low + k)``"""
        return cls.from_dict({low + k: c for k, c in enumerate(coeffs)})

    @classmethod
    def from_expr(cls, expr, var=T):
        expr = sp.expand(expr)
        if expr == 0:
            return cls()
        num, den = sp.fraction(sp.together(expr))
        shift = 0
        if den != 1:
            den_poly = sp.Poly(den, var)
            if len(den_poly.terms()) != 1:
                msg = "{expr} is not a Laurent polynomial".format(expr=expr)
                raise ValueError(msg)
            (deg,), lead = den_poly.terms()[0]
            num = sp.expand(num / lead)
            shift = -deg
        poly = sp.Poly(num, var)
        coeffs = {}
        for (deg,), coeff in poly.terms():
            if not coeff.is_integer:
                msg = "non-integer coefficient {c} in {expr}".format(c=coeff, expr=expr)
                raise ValueError(msg)
            coeffs[deg + shift] = int(coeff)
        return cls.from_dict(coeffs)

    @classmethod
    def one(cls):
        return cls(((0, 1),))

    @property
    def coeffs(self):
        return dict(self.terms)

    def is_zero(self):
        return not self.terms

    @property
    def low(self):
        return self.terms[0][0] if self.terms else 0

    @property
    def high(self):
        return self.terms[-1][0] if self.terms else 0

    @property
    def span(self):
        return self.high - self.low

    def dense(self):
        """coefficient list from the lowest to the highest exponent"""
        coeffs = self.coeffs
        return [coeffs.get(e, 0) for e in range(self.low, self.high + 1)]

    def normalize(self):
        """representative with lowest exponent 0 and positive leading coefficient"""
        if not self.terms:
            return self
        sign = 1 if self.terms[-1][1] > 0 else -1
        low = self.low
        return LaurentPoly(tuple((e - low, sign * c) for e, c in self.terms))

    def associates(self, other):
        """equal up to a unit ``±t^k``"""
        return self.normalize() == other.normalize()

    def __add__(self, other):
        coeffs = self.coeffs
        for e, c in other.terms:
            coeffs[e] = coeffs.get(e, 0) + c
        return LaurentPoly.from_dict(coeffs)

    def __neg__(self):
        return LaurentPoly(tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        coeffs = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                coeffs[e1 + e2] = coeffs.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly.from_dict(coeffs)

    def __pow__(self, k):
        result = LaurentPoly.one()
        for _ in range(k):
            result = result * self
        return result

    def substitute_inverse(self):
        """``p(1/t)``"""
        return LaurentPoly(tuple(sorted((-e, c) for e, c in self.terms)))

    def is_symmetric(self):
        """``p(t) = ±t^k p(1/t)`` for some k"""
        return self.associates(self.substitute_inverse())

    def evaluate(self, value):
        """exact value at a rational, integer or sympy number"""
        if isinstance(value, (int, Fraction)):
            return sum(Fraction(value) ** e * c for e, c in self.terms)
        return sp.expand(sum(c * sp.S(value) ** e for e, c in self.terms))

    def to_expr(self, var=T):
        return sum((c * var ** e for e, c in self.terms), sp.S(0))

    def to_poly(self, var=T):
        """sympy Poly of the normalized representative"""
        return sp.Poly(self.normalize().to_expr(var), var)

    def __str__(self):
        if not self.terms:
            return '0'
        out = ''
        for e, c in reversed(self.terms):
            sign = '-' if c < 0 else '+'
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                power = 't' if e == 1 else 't^{e}'.format(e=e)
                body = power if mag == 1 else '{m}{p}'.format(m=mag, p=power)
            if not out:
                out = body if sign == '+' else '-' + body
            else:
                out += sign + body
        return out


def compact_form(p):
    """
    Given a palindromic polynomial ``p(x)`` of degree 2n, return the integer
    coefficients (lowest degree first) of ``g`` with ``p(x) = x^n g(x + 1/x)``.

    For an Alexander polynomial and ``ω = exp(iθ)`` this gives
    ``Δ(ω) = ω^n g(2 cos θ)``, so zeros of Δ on the circle are read off
    from real roots of ``g`` in ``[-2, 2]``.
    """
    coeffs = p.normalize().dense()
    if len(coeffs) % 2 != 1 or coeffs != list(reversed(coeffs)):
        msg = "{p} is not palindromic of even degree".format(p=p)
        raise ValueError(msg)
    x = sp.Symbol('x')
    f = sp.Poly(list(reversed(coeffs)), x)
    g = sp.Poly(0, x)
    while not f.is_zero:
        c = f.LC()
        d = f.degree() // 2
        g += sp.Poly(c * x ** d, x)
        f = f - sp.Poly(c * (x ** 2 + 1) ** d, x)
        if not f.is_zero:
            low = min(m[0] for m in f.monoms())
            f = sp.Poly(sp.cancel(f.as_expr() / x ** low), x)
    out = [int(c) for c in reversed(g.all_coeffs())]
    return out
