#!/usr/bin/env python
# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""
Branched cyclic covers: first homology, the linking form of the double
cover, metabolizers and the Gilmer-Livingston inequality.

Group elements are coordinate tuples ``(c_1, ..., c_k)`` with
``0 <= c_i < d_i`` on a basis adapted to the invariant factors.
"""
import logging
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import sympy as sp
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors as _invariant_factors

from .exceptions import CapExceeded
from .exceptions import InfiniteHomology
from .exceptions import InternalConsistencyError
from .exceptions import PreconditionError
from .polynomials import T
from .seifert import alexander_polynomial

logger = logging.getLogger(__name__)

DEFAULT_MAX_SUBGROUPS = 10 ** 6


def max_subgroups():
    return int(os.environ.get('GROPETOWER_MAX_SUBGROUPS', DEFAULT_MAX_SUBGROUPS))


@dataclass(frozen=True)
class FinAbGroup(object):
    """finite abelian group ``Z/d_1 + ... + Z/d_k`` with ``d_1 | d_2 | ...``"""

    invariant_factors: tuple = ()

    def __post_init__(self):
        factors = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, 'invariant_factors', factors)
        if any(d < 2 for d in factors):
            msg = "invariant factors must be >= 2, got {f}".format(f=factors)
            raise ValueError(msg)
        if any(b % a for a, b in zip(factors, factors[1:])):
            msg = "invariant factors {f} do not form a divisibility chain".format(f=factors)
            raise ValueError(msg)

    @property
    def rank(self):
        return len(self.invariant_factors)

    @property
    def order(self):
        return math.prod(self.invariant_factors)

    def is_trivial(self):
        return not self.invariant_factors

    def zero(self):
        return (0,) * self.rank

    def add(self, x, y):
        return tuple((a + b) % d for a, b, d in zip(x, y, self.invariant_factors))

    def multiple(self, k, x):
        return tuple((k * a) % d for a, d in zip(x, self.invariant_factors))

    def elements(self):
        return product(*(range(d) for d in self.invariant_factors))

    def span(self, generators):
        """the subgroup generated, as a frozenset of elements"""
        seen = {self.zero()}
        frontier = [self.zero()]
        while frontier:
            x = frontier.pop()
            for g in generators:
                y = self.add(x, g)
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return frozenset(seen)

    def __str__(self):
        if self.is_trivial():
            return '0'
        return ' + '.join('Z/{d}'.format(d=d) for d in self.invariant_factors)


@dataclass(frozen=True)
class LinkingForm(object):
    """symmetric form with values in Q/Z, given by its gram matrix on the basis"""

    gram: tuple = ()

    def __post_init__(self):
        gram = tuple(tuple(Fraction(x) % 1 for x in row) for row in self.gram)
        object.__setattr__(self, 'gram', gram)
        if any(gram[i][j] != gram[j][i] for i in range(len(gram)) for j in range(len(gram))):
            raise ValueError("linking form gram matrix is not symmetric")

    def value(self, x, y):
        total = Fraction(0)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    if b:
                        total += a * b * self.gram[i][j]
        return total % 1


@dataclass(frozen=True)
class GLInput(object):
    sigma_value: int
    d: int
    beta1_bar: int

    def __post_init__(self):
        if self.d < 0 or self.beta1_bar < 0:
            msg = "d and beta1_bar must be nonnegative, got {d} and {b}".format(
                d=self.d, b=self.beta1_bar)
            raise ValueError(msg)

    @classmethod
    def from_cover(cls, group, q, sigma_value, beta1_bar):
        """``d`` taken from ``H_1(L^n)`` as half its Z/q-dimension"""
        return cls(sigma_value, half_mod_q_rank(group, q), beta1_bar)


@dataclass(frozen=True)
class MetabolizerSplit(object):
    """metabolizers as bases of coordinate tuples; splitting is a pair of bases or None"""

    metabolizers: tuple = ()
    splitting: tuple = None


def _smith_factors(M):
    dm = DomainMatrix.from_Matrix(M).convert_to(ZZ)
    return [abs(int(d)) for d in _invariant_factors(dm)]


def _circulant(V, n):
    size = V.size
    M = V.matrix()
    B = sp.zeros(size * n, size * n)
    for i in range(n):
        j = (i + 1) % n
        B[i * size:(i + 1) * size, i * size:(i + 1) * size] = M
        B[i * size:(i + 1) * size, j * size:(j + 1) * size] = \
            B[i * size:(i + 1) * size, j * size:(j + 1) * size] - M.T
    return B


def resultant_order(V, n):
    """``|Res(Δ, t^n - 1)| / |Δ(1)|``; zero when Δ has an n-th root of unity as a root"""
    delta = alexander_polynomial(V).to_poly(T)
    res = sp.resultant(delta.as_expr(), T ** n - 1, T)
    return abs(int(res)) // abs(int(alexander_polynomial(V).evaluate(1)))


def branched_homology(V, n):
    """H_1 of the n-fold branched cover from the block-circulant presentation"""
    if n < 2:
        msg = "cover degree must be >= 2, got {n}".format(n=n)
        raise PreconditionError(msg)
    expected = resultant_order(V, n)
    if V.size == 0:
        return FinAbGroup()
    if expected == 0:
        msg = "Delta vanishes at an {n}-th root of unity; H_1 is infinite".format(n=n)
        raise InfiniteHomology(msg)
    factors = _smith_factors(_circulant(V, n))
    if 0 in factors:
        if expected != 0:
            msg = "Smith form has a free part but the resultant is {r}".format(r=expected)
            raise InternalConsistencyError(msg)
        msg = "H_1 of the {n}-fold cover is infinite".format(n=n)
        raise InfiniteHomology(msg)
    group = FinAbGroup(tuple(d for d in factors if d != 1))
    if group.order != expected:
        msg = "cover order {o} disagrees with resultant {r}".format(o=group.order, r=expected)
        raise InternalConsistencyError(msg)
    return group


def _cyclic_basis(elements, add, order_of, factors, cap):
    """
    Elements b_1, ..., b_k of orders d_1, ..., d_k whose multiples span the
    group directly; chosen greedily from the sorted elements, largest factor
    first.
    """
    basis = [None] * len(factors)
    span = {tuple(0 for _ in elements[0])}
    for slot in reversed(range(len(factors))):
        d = factors[slot]
        for x in elements:
            if order_of(x) != d:
                continue
            multiples = []
            y = x
            for _ in range(d - 1):
                multiples.append(y)
                y = add(y, x)
            if any(m in span for m in multiples):
                continue
            basis[slot] = x
            new_span = set(span)
            for s in span:
                y = s
                for _ in range(d - 1):
                    y = add(y, x)
                    new_span.add(y)
            span = new_span
            break
        else:
            raise InternalConsistencyError("could not find a cyclic basis")
        if len(span) > cap:
            raise CapExceeded("group enumeration exceeds the cap", required=len(span), cap=cap)
    if len(span) != len(elements):
        raise InternalConsistencyError("cyclic basis does not span the group")
    return basis


def linking_form_2fold(V):
    """group ``coker(V + Vᵀ)`` with ``λ(x, y) = xᵀ(V + Vᵀ)^{-1} y`` on an adapted basis"""
    if V.size == 0:
        return FinAbGroup(), LinkingForm()
    A = V.matrix() + V.matrix().T
    det = A.det()
    if det == 0:
        raise PreconditionError("V + V^T is singular")
    cap = max_subgroups()
    if abs(det) > cap:
        msg = "group of order {o} exceeds the cap {cap}".format(o=abs(det), cap=cap)
        raise CapExceeded(msg, required=abs(det), cap=cap)
    factors = [d for d in _smith_factors(A) if d != 1]
    group = FinAbGroup(tuple(factors))
    if group.order != abs(det):
        raise InternalConsistencyError("Smith form order disagrees with det(V + V^T)")
    if group.is_trivial():
        return group, LinkingForm()

    # an element of coker(A) is the class of A^{-1} x modulo Z^n
    Ainv = A.inv()
    n = V.size

    def reduce(u):
        return tuple(Fraction(int(sp.Rational(c).p), int(sp.Rational(c).q)) % 1 for c in u)

    def add(u, v):
        return tuple((a + b) % 1 for a, b in zip(u, v))

    columns = [reduce(Ainv[:, j]) for j in range(n)]
    zero = tuple(Fraction(0) for _ in range(n))
    seen = {zero}
    frontier = [zero]
    while frontier:
        u = frontier.pop()
        for c in columns:
            w = add(u, c)
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    elements = sorted(seen)

    def order_of(u):
        return math.lcm(*(x.denominator for x in u))

    basis = _cyclic_basis(elements, add, order_of, factors, cap)
    Aint = [[int(A[i, j]) for j in range(n)] for i in range(n)]

    def pair(u, v):
        total = Fraction(0)
        for i in range(n):
            for j in range(n):
                total += u[i] * Aint[i][j] * v[j]
        return total % 1

    gram = tuple(tuple(pair(b, c) for c in basis) for b in basis)
    return group, LinkingForm(gram)


def _basis_of(group, subgroup):
    """greedy generating set: smallest elements not yet in the span"""
    basis = []
    span = frozenset([group.zero()])
    for x in sorted(subgroup):
        if x not in span:
            basis.append(x)
            span = group.span(basis)
            if span == subgroup:
                break
    return tuple(basis)


def metabolizer_split(group, form):
    """every subgroup H with |H|^2 = |G| on which the form vanishes, plus a splitting"""
    order = group.order
    root = math.isqrt(order)
    if root * root != order:
        logger.info("|G| = %d is not a square; no metabolizers", order)
        return MetabolizerSplit()
    if group.is_trivial():
        return MetabolizerSplit(((),), ((), ()))
    cap = max_subgroups()
    required = order * max(1, order.bit_length())
    if required > cap:
        msg = "metabolizer search needs about {req} candidates, cap is {cap}".format(
            req=required, cap=cap)
        raise CapExceeded(msg, required=required, cap=cap)

    isotropic = [x for x in sorted(group.elements()) if x != group.zero() and
                 form.value(x, x) == 0]
    found = set()
    visited = set()
    stack = [(frozenset([group.zero()]), ())]
    while stack:
        subgroup, generators = stack.pop()
        if subgroup in visited:
            continue
        visited.add(subgroup)
        if len(subgroup) == root:
            found.add(subgroup)
            continue
        for x in isotropic:
            if x in subgroup:
                continue
            if any(form.value(x, g) != 0 for g in generators):
                continue
            bigger = group.span(generators + (x,))
            if len(bigger) <= root and bigger not in visited:
                stack.append((bigger, generators + (x,)))

    metabolizers = sorted(found, key=lambda h: sorted(h))
    for h in metabolizers:
        if len(h) ** 2 != order or any(form.value(x, y) for x in h for y in h):
            raise InternalConsistencyError("reported metabolizer fails re-verification")
    bases = tuple(_basis_of(group, h) for h in metabolizers)
    splitting = None
    for i, h1 in enumerate(metabolizers):
        for j in range(i + 1, len(metabolizers)):
            h2 = metabolizers[j]
            if h1 & h2 == {group.zero()} and len(h1) * len(h2) == order:
                splitting = (bases[i], bases[j])
                break
        if splitting is not None:
            break
    return MetabolizerSplit(bases, splitting)


def gl_inequality(gl):
    """1 iff ``|σ| + |d - 1 - β̄₁| <= d``"""
    return int(abs(gl.sigma_value) + abs(gl.d - 1 - gl.beta1_bar) <= gl.d)


def half_mod_q_rank(group, q):
    """half the Z/q-dimension of the group, for prime q"""
    if not sp.isprime(q):
        msg = "q must be prime, got {q}".format(q=q)
        raise PreconditionError(msg)
    count = sum(1 for d in group.invariant_factors if d % q == 0)
    if count % 2:
        msg = "Z/{q}-dimension {c} is odd".format(q=q, c=count)
        raise PreconditionError(msg)
    return count // 2
