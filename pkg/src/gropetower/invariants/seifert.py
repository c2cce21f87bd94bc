#!/usr/bin/env python
# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""
Knot invariants read from an integer Seifert matrix V.

Conventions: ``Δ(t) = det(V - t Vᵀ)`` normalized to lowest exponent 0 and a
positive leading coefficient, and ``σ(ω)`` is the signature of the Hermitian
matrix ``(1 - ω)V + (1 - ω̄)Vᵀ``.
"""
import logging
import os
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
import pandas as pd
import sympy as sp

from .angles import X
from .angles import CosValue
from .angles import RationalTurn
from .angles import compare_cos
from .angles import sign_at
from .exceptions import CapExceeded
from .exceptions import InternalConsistencyError
from .exceptions import InvalidSeifertMatrix
from .exceptions import JumpPoint
from .polynomials import T
from .polynomials import LaurentPoly
from .polynomials import compact_form
from .signatures import StepSignature

logger = logging.getLogger(__name__)

DEFAULT_MAX_WORDS = 10 ** 6


@dataclass(frozen=True)
class SeifertMatrix(object):
    """2g × 2g integer matrix with ``det(V - Vᵀ) = ±1``; 0 × 0 is the unknot"""

    entries: tuple = ()

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        object.__setattr__(self, 'entries', rows)
        size = len(rows)
        if any(len(row) != size for row in rows):
            raise InvalidSeifertMatrix("Seifert matrix must be square")
        if size % 2:
            msg = "Seifert matrix must have even dimension, got {n}".format(n=size)
            raise InvalidSeifertMatrix(msg)
        if size:
            det = (self.matrix() - self.matrix().T).det()
            if det not in (1, -1):
                msg = "det(V - V^T) = {d}, expected +1 or -1".format(d=det)
                raise InvalidSeifertMatrix(msg)

    @classmethod
    def from_rows(cls, rows):
        return cls(tuple(tuple(row) for row in rows))

    @property
    def size(self):
        return len(self.entries)

    @property
    def genus(self):
        return self.size // 2

    def matrix(self):
        return sp.Matrix(self.size, self.size, [x for row in self.entries for x in row])

    def array(self):
        return np.array(self.entries, dtype=object).reshape(self.size, self.size)

    def to_rows(self):
        return [list(row) for row in self.entries]

    def transpose(self):
        return SeifertMatrix(tuple(zip(*self.entries)))


@dataclass(frozen=True)
class CatalogKnot(object):
    """
    A named knot with a Seifert matrix, crossing number and optional Arf
    flag.  ``hypotheses`` holds asserted certificate flags such as
    ``ribbon``; ``axes`` names unknotted curves in the complement that the
    family constructions infect along.
    """

    name: str
    seifert: SeifertMatrix
    crossing_number: int = 0
    arf_flag: int = None
    hypotheses: tuple = ()
    axes: tuple = ()

    def __post_init__(self):
        if self.crossing_number < 0:
            msg = "{name}: negative crossing number".format(name=self.name)
            raise InvalidSeifertMatrix(msg)
        nontrivial = not alexander_polynomial(self.seifert).associates(LaurentPoly.one())
        if nontrivial and self.crossing_number < 3:
            msg = "{name}: nontrivial knot with crossing number {c} < 3".format(
                name=self.name, c=self.crossing_number)
            raise InvalidSeifertMatrix(msg)
        if self.arf_flag is not None and self.arf_flag != arf(self.seifert):
            msg = "{name}: Arf flag {flag} disagrees with Delta(-1)".format(
                name=self.name, flag=self.arf_flag)
            raise InvalidSeifertMatrix(msg)

    def flag(self, name):
        return dict(self.hypotheses).get(name, False)


@lru_cache(maxsize=None)
def alexander_polynomial(V):
    """normalized ``det(V - t Vᵀ)``"""
    if V.size == 0:
        return LaurentPoly.one()
    M = V.matrix()
    delta = LaurentPoly.from_expr((M - T * M.T).det(method='berkowitz')).normalize()
    if delta.evaluate(1) not in (1, -1):
        msg = "Delta(1) = {v} for a valid Seifert matrix".format(v=delta.evaluate(1))
        raise InternalConsistencyError(msg)
    return delta


@lru_cache(maxsize=None)
def _jump_polynomial(V):
    """integer coefficients, highest first, of ``h(x) = g(2x)`` where
    ``Δ(e^{iθ}) = e^{inθ} g(2 cos θ)``"""
    g = compact_form(alexander_polynomial(V))
    return tuple(reversed([c * 2 ** k for k, c in enumerate(g)]))


def is_jump(V, angle):
    """``Δ(ω) = 0``, decided exactly"""
    return sign_at(_jump_polynomial(V), angle) == 0


@lru_cache(maxsize=None)
def _hermitian_charpoly(V):
    """
    Coefficients (constant term first) of the characteristic polynomial of
    ``(1 - c)(V + Vᵀ) - i s (V - Vᵀ)`` with ``s² = 1 - c²`` eliminated; each
    coefficient is an integer polynomial in ``x = c``, highest degree first.
    """
    s = sp.Symbol('s')
    lam = sp.Symbol('lam')
    M = V.matrix()
    H = (1 - X) * (M + M.T) - sp.I * s * (M - M.T)
    char = sp.expand(H.charpoly(lam).as_expr())
    by_s = sp.Poly(char, s)
    reduced = sp.S(0)
    for (k,), coeff in by_s.terms():
        if k % 2:
            if sp.expand(coeff) != 0:
                raise InternalConsistencyError("odd powers of sin survived in the charpoly")
            continue
        reduced += coeff * (1 - X ** 2) ** (k // 2)
    reduced = sp.expand(reduced)
    if reduced.has(sp.I):
        raise InternalConsistencyError("Hermitian charpoly has non-real coefficients")
    by_lam = sp.Poly(reduced, lam)
    coeffs = []
    for k in range(by_lam.degree() + 1):
        coeffs.append(tuple(int(c) for c in sp.Poly(by_lam.coeff_monomial(lam ** k), X)
                            .all_coeffs()))
    return tuple(coeffs)


def _sign_changes(signs):
    signs = [x for x in signs if x != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def signature_at(V, angle):
    """
    Levine-Tristram signature at an exact angle, certified: the characteristic
    polynomial of a Hermitian matrix is real-rooted, so Descartes' rule of
    signs counts its positive and negative eigenvalues exactly once every
    coefficient sign is decided.
    """
    if V.size == 0:
        return 0
    if compare_cos(angle, CosValue.rational(1)) == 0:
        return 0
    if is_jump(V, angle):
        msg = "Delta vanishes at {a}".format(a=angle)
        raise JumpPoint(msg, angle=angle)
    signs = [sign_at(coeff, angle) for coeff in _hermitian_charpoly(V)]
    positive = _sign_changes(signs)
    negative = _sign_changes([s if k % 2 == 0 else -s for k, s in enumerate(signs)])
    if positive + negative != V.size:
        msg = "matrix at {a} is singular although Delta does not vanish".format(a=angle)
        raise InternalConsistencyError(msg)
    return positive - negative


def signature_function(V):
    """the whole signature of V as a StepSignature with algebraic jump cosines"""
    if V.size == 0:
        return StepSignature()
    h = sp.Poly(list(_jump_polynomial(V)), X)
    roots = []
    for factor, _ in h.factor_list()[1]:
        if factor.degree() < 1:
            continue
        coeffs = [int(c) for c in factor.all_coeffs()]
        if coeffs[0] < 0:
            coeffs = [-c for c in coeffs]
        # Δ(±1) != 0, so no root sits at an endpoint
        for (lo, hi), _ in factor.intervals(inf=-1, sup=1):
            lo, hi = Fraction(int(lo.p), int(lo.q)), Fraction(int(hi.p), int(hi.q))
            roots.append(CosValue.algebraic(coeffs, lo, hi))
    # increasing cosine, i.e. decreasing θ
    roots.sort(key=lambda a: a.lo)
    roots = _order_by_cos(roots)
    tests = [CosValue.rational(-1)]
    for left, right in zip(roots, roots[1:]):
        tests.append(CosValue.rational(_point_between(h, left, right)))
    if roots:
        tests.append(CosValue.rational(_point_between(h, roots[-1], None)))
    values = [signature_at(V, t) for t in tests]
    if values[-1] != 0:
        msg = "signature near theta = 0 is {v}, expected 0".format(v=values[-1])
        raise InternalConsistencyError(msg)
    jumps = []
    for k, root in enumerate(roots):
        # root k sits between test k (smaller cosine) and test k + 1
        jumps.append((root, values[k] - values[k + 1]))
    return StepSignature.from_jumps(jumps)


def _order_by_cos(roots):
    ordered = []
    for root in roots:
        k = len(ordered)
        while k > 0 and compare_cos(ordered[k - 1], root) > 0:
            k -= 1
        ordered.insert(k, root)
    return ordered


def _point_between(h, left, right):
    """a rational in (left, right) that is not a root of h; right=None means 1"""
    lo = left.hi
    hi = right.lo if right is not None else Fraction(1)
    while True:
        if lo < hi:
            point = (lo + hi) / 2
        else:
            point = lo
        if h.eval(sp.Rational(point.numerator, point.denominator)) != 0 and \
                compare_cos(left, CosValue.rational(point)) < 0 and \
                (right is None or compare_cos(right, CosValue.rational(point)) > 0):
            return point
        # shrink the isolating intervals and retry
        left = _shrunk(left)
        lo = left.hi
        if right is not None:
            right = _shrunk(right)
            hi = right.lo


def _shrunk(root):
    poly = sp.Poly(list(root.poly), X)
    a, b = poly.refine_root(sp.Rational(root.lo.numerator, root.lo.denominator),
                            sp.Rational(root.hi.numerator, root.hi.denominator),
                            steps=4)
    return CosValue.algebraic(root.poly, Fraction(int(a.p), int(a.q)),
                              Fraction(int(b.p), int(b.q)))


def signature_limits(V, angle):
    """one-sided limits (σ(θ-), σ(θ+)) of the signature at any angle"""
    sig = signature_function(V)
    below = sum(d for a, d in sig.jumps if compare_cos(a, angle) > 0)
    at = sum(d for a, d in sig.jumps if compare_cos(a, angle) == 0)
    return below, below + at


def arf(V):
    """0 iff ``|Δ(-1)| ≡ ±1 (mod 8)``"""
    value = abs(alexander_polynomial(V).evaluate(-1))
    return 0 if value % 8 in (1, 7) else 1


def compose(kind, *operands):
    """
    ``connected_sum`` takes any number of operands and returns their block
    sum with empty blocks dropped; ``mirror`` returns ``-Vᵀ`` and
    ``reverse_orientation`` returns ``Vᵀ`` of a single operand.
    """
    if kind == 'connected_sum':
        blocks = [op for op in operands if op.size]
        size = sum(op.size for op in blocks)
        rows = [[0] * size for _ in range(size)]
        offset = 0
        for op in blocks:
            for i, row in enumerate(op.entries):
                for j, x in enumerate(row):
                    rows[offset + i][offset + j] = x
            offset += op.size
        return SeifertMatrix.from_rows(rows)
    if len(operands) != 1:
        msg = "{kind} takes exactly one operand, got {n}".format(kind=kind, n=len(operands))
        raise ValueError(msg)
    (V,) = operands
    if kind == 'mirror':
        return SeifertMatrix(tuple(tuple(-x for x in row) for row in zip(*V.entries)))
    if kind == 'reverse_orientation':
        return V.transpose()
    msg = "unknown composition {kind}".format(kind=kind)
    raise ValueError(msg)


@dataclass(frozen=True)
class HyperbolicityVerdict(object):
    """status is one of ``hyperbolic``, ``fails_necessary``, ``unknown``"""

    status: str
    witness: tuple = None
    reason: str = ''

    @property
    def is_hyperbolic(self):
        return self.status == 'hyperbolic'


def _has_hyperbolic_shape(rows):
    g = len(rows) // 2
    return all(rows[i][j] == 0 for i in range(g) for j in range(g)) and \
        all(rows[i][j] == 0 for i in range(g, 2 * g) for j in range(g, 2 * g))


def _identity(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _reciprocal(poly):
    coeffs = poly.all_coeffs()
    out = sp.Poly(list(reversed(coeffs)), poly.gen)
    return out


def _factorization_condition(V):
    """``Δ ≐ f(t)·t^{deg f} f(1/t)``: every self-reciprocal irreducible factor
    has even multiplicity and the others pair with their reciprocals"""
    delta = alexander_polynomial(V).to_poly(T)
    content, factors = delta.factor_list()
    mult = {}
    for factor, e in factors:
        if factor.LC() < 0:
            factor = -factor
        mult[factor] = mult.get(factor, 0) + e
    for factor, e in mult.items():
        recip = _reciprocal(factor)
        if recip.LC() < 0:
            recip = -recip
        if recip == factor:
            if e % 2:
                return False, "self-reciprocal factor {f} has odd multiplicity {e}".format(
                    f=factor.as_expr(), e=e)
        elif mult.get(recip, 0) != e:
            return False, "factor {f} is not matched by its reciprocal".format(
                f=factor.as_expr())
    return True, "Delta = f(t) t^deg f f(1/t) is possible"


def max_words():
    return int(os.environ.get('GROPETOWER_MAX_WORDS', DEFAULT_MAX_WORDS))


def hyperbolicity_check(V, mode='shape', bound=None):
    """
    mode ``shape`` tests the block form ``[[0, A], [B, 0]]`` exactly;
    ``factorization`` tests the necessary condition on Δ; ``search`` also
    runs a breadth-first search over products of at most ``bound``
    elementary matrices P for a congruent ``PᵀVP`` of block form.
    """
    if mode == 'shape':
        if _has_hyperbolic_shape(V.entries):
            return HyperbolicityVerdict('hyperbolic', _identity(V.size), 'block form')
        return HyperbolicityVerdict('unknown', reason='not in block form')
    passes, reason = _factorization_condition(V)
    if not passes:
        return HyperbolicityVerdict('fails_necessary', reason=reason)
    if mode == 'factorization':
        return HyperbolicityVerdict('unknown', reason=reason)
    if mode != 'search':
        msg = "unknown hyperbolicity mode {mode}".format(mode=mode)
        raise ValueError(msg)
    if bound is None or bound < 0:
        raise ValueError("search mode needs a nonnegative word-length bound")
    return _search_congruence(V, bound)


def _search_congruence(V, bound):
    n = V.size
    generators = []
    for i in range(n):
        for j in range(n):
            if i != j:
                for e in (1, -1):
                    E = sp.eye(n)
                    E[i, j] = e
                    generators.append(E)
    required = sum(len(generators) ** k for k in range(bound + 1))
    cap = max_words()
    logger.info("unimodular search over up to %d words (cap %d)", required, cap)
    if required > cap:
        msg = "search over {req} words exceeds the cap {cap}".format(req=required, cap=cap)
        raise CapExceeded(msg, required=required, cap=cap)
    M = V.matrix()
    start = sp.eye(n)
    seen = {tuple(start)}
    queue = deque([(start, 0)])
    while queue:
        P, depth = queue.popleft()
        C = P.T * M * P
        rows = tuple(tuple(int(C[i, j]) for j in range(n)) for i in range(n))
        if _has_hyperbolic_shape(rows):
            witness = tuple(tuple(int(P[i, j]) for j in range(n)) for i in range(n))
            return HyperbolicityVerdict('hyperbolic', witness,
                                        'congruent block form at word length {d}'.format(d=depth))
        if depth == bound:
            continue
        for E in generators:
            Q = P * E
            key = tuple(Q)
            if key not in seen:
                seen.add(key)
                queue.append((Q, depth + 1))
    return HyperbolicityVerdict(
        'unknown', reason='no witness within word length {b}; factorization passes'.format(
            b=bound))


def orthogonal_sum_hyperbolic(A, B):
    """
    Block sum of two block-form matrices, rearranged so the result is again
    in block form; returns the matrix and the permutation witness P with
    ``Pᵀ (A ⊕ B) P`` equal to it.
    """
    for V in (A, B):
        if not _has_hyperbolic_shape(V.entries):
            msg = "operand is not in hyperbolic block form"
            raise ValueError(msg)
    ga, gb = A.genus, B.genus
    n = A.size + B.size
    order = list(range(ga)) + list(range(2 * ga, 2 * ga + gb)) + \
        list(range(ga, 2 * ga)) + list(range(2 * ga + gb, n))
    P = sp.zeros(n, n)
    for new, old in enumerate(order):
        P[old, new] = 1
    S = compose('connected_sum', A, B).matrix()
    C = P.T * S * P
    rows = tuple(tuple(int(C[i, j]) for j in range(n)) for i in range(n))
    if not _has_hyperbolic_shape(rows):
        raise InternalConsistencyError("reordered block sum lost its block form")
    witness = tuple(tuple(int(P[i, j]) for j in range(n)) for i in range(n))
    return SeifertMatrix(rows), witness


def sample_signature(V, turns):
    """
    One row per turn ``(r, p)``: the signature at ``2πr/p`` and its one-sided
    limits.  ``value`` is empty at jump points.
    """
    rows = []
    for r, p in turns:
        angle = RationalTurn(r, p)
        below, above = signature_limits(V, angle)
        try:
            value = signature_at(V, angle)
        except JumpPoint:
            value = None
        rows.append({'turn': '{r}/{p}'.format(r=angle.r, p=angle.p),
                     'value': value, 'below': below, 'above': above})
    return pd.DataFrame(rows, columns=['turn', 'value', 'below', 'above'])
