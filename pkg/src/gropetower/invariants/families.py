#!/usr/bin/env python
# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""
Knot expressions and the iterated satellite families.

The Horn knots P_m enter only through their signature: 0 below θ_m and 2
above it, where ``cos θ_m = 1 - 1/(2∛m)``.  Families are built in three
steps: ``interleave`` certifies twist parameters and primes with
``θ_{m_{i+1}} < 2π/p_i < θ_{m_i}``, ``build_J0`` forms the seeds
``J_0^i = N·(P_{m_{i+1}} # -P_{m_i})`` and checks their signature sums, and
``build_Jmn`` iterates the winding-zero infections.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import sympy as sp

from .angles import RationalTurn
from .angles import angle_less
from .angles import theta_cos
from .exceptions import CapExceeded
from .exceptions import InternalConsistencyError
from .exceptions import MissingHypothesis
from .exceptions import PreconditionError
from .exceptions import Undecidable
from .exceptions import Unsupported
from .polynomials import LaurentPoly
from .seifert import CatalogKnot
from .seifert import alexander_polynomial
from .seifert import arf
from .seifert import signature_function
from .signatures import StepSignature
from .signatures import sum_over_roots

logger = logging.getLogger(__name__)

DEFAULT_MAX_PRIME = 10 ** 5
DEFAULT_MAX_TWIST = 10 ** 7

# (G1) on the seed, (G2) on every stage input, (N1) on stage inputs for exclusions
SEED_FLAGS = ('arf_zero', 'grope_height2')
STAGE_FLAGS = ('grope_height1', 'ribbon')
NONMEMBERSHIP_FLAGS = ('cyclic_alexander',)


@dataclass(frozen=True)
class ModelKnot(object):
    """a knot known only through its signature function and asserted data"""

    name: str
    signature: StepSignature
    arf_flag: int = 0
    crossing_number: int = None
    hypotheses: tuple = ()

    def flag(self, name):
        return dict(self.hypotheses).get(name, False)


def horn_knot(m):
    """P_m: signature jumps by 2 at θ_m"""
    return ModelKnot('P_{m}'.format(m=m), StepSignature(((theta_cos(m), 2),)),
                     hypotheses=(('arf_zero', True),))


@dataclass(frozen=True)
class Atom(object):
    knot: object


@dataclass(frozen=True)
class Sum(object):
    children: tuple = ()
    multiplicities: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'children', tuple(self.children))
        mult = tuple(self.multiplicities) or (1,) * len(self.children)
        object.__setattr__(self, 'multiplicities', mult)
        if len(mult) != len(self.children):
            raise ValueError("one multiplicity per summand")
        if any(k < 1 for k in mult):
            raise ValueError("multiplicities must be positive; use Mirror for negatives")


@dataclass(frozen=True)
class Mirror(object):
    child: object


@dataclass(frozen=True)
class Infect(object):
    """pattern(axis; companion) along an unknotted curve of the given winding number"""

    pattern: object
    axis: str
    winding: int
    companion: object
    crossing_bound: int = None


@dataclass(frozen=True)
class ExprInvariants(object):
    alexander: LaurentPoly
    step_signature: StepSignature
    crossing_bound: int
    arf: int


def expr_depth(e):
    """number of Infect layers above the atoms"""
    if isinstance(e, Atom):
        return 0
    if isinstance(e, Mirror):
        return expr_depth(e.child)
    if isinstance(e, Sum):
        return max((expr_depth(c) for c in e.children), default=0)
    return 1 + max(expr_depth(e.companion), _pattern_depth(e.pattern))


def _pattern_depth(pattern):
    return 0 if isinstance(pattern, (CatalogKnot, ModelKnot)) else expr_depth(pattern)


def _atom_invariants(knot):
    if isinstance(knot, CatalogKnot):
        return ExprInvariants(alexander_polynomial(knot.seifert),
                              signature_function(knot.seifert),
                              knot.crossing_number, arf(knot.seifert))
    if isinstance(knot, ModelKnot):
        return ExprInvariants(None, knot.signature, knot.crossing_number, knot.arf_flag)
    msg = "cannot take invariants of {t}".format(t=type(knot).__name__)
    raise PreconditionError(msg)


@lru_cache(maxsize=None)
def expr_invariants(e):
    """
    Abelian invariants of an expression.  Δ is multiplicative over sums and
    left alone by mirrors; signatures add and change sign under mirrors;
    winding-zero infection keeps the pattern's Δ, signature and Arf
    invariant.  ``None`` marks a value that is not known.
    """
    if isinstance(e, Atom):
        return _atom_invariants(e.knot)
    if isinstance(e, Mirror):
        inner = expr_invariants(e.child)
        return ExprInvariants(inner.alexander, -inner.step_signature,
                              inner.crossing_bound, inner.arf)
    if isinstance(e, Sum):
        delta = LaurentPoly.one()
        sig = StepSignature()
        crossings = 0
        arf_bit = 0
        for child, k in zip(e.children, e.multiplicities):
            inner = expr_invariants(child)
            if delta is not None:
                delta = None if inner.alexander is None else delta * inner.alexander ** k
            sig = sig + inner.step_signature.scale(k)
            if crossings is not None:
                crossings = None if inner.crossing_bound is None else \
                    crossings + k * inner.crossing_bound
            if arf_bit is not None and k % 2:
                arf_bit = None if inner.arf is None else arf_bit ^ inner.arf
        return ExprInvariants(delta.normalize() if delta is not None else None,
                              sig, crossings, arf_bit)
    if isinstance(e, Infect):
        if e.winding != 0:
            msg = "infection along {a} has winding number {w}; only 0 is supported".format(
                a=e.axis, w=e.winding)
            raise Unsupported(msg)
        # the companion must itself be winding-zero throughout
        expr_invariants(e.companion)
        if isinstance(e.pattern, (CatalogKnot, ModelKnot)):
            inner = _atom_invariants(e.pattern)
        else:
            inner = expr_invariants(e.pattern)
        return ExprInvariants(inner.alexander, inner.step_signature, e.crossing_bound, inner.arf)
    msg = "unknown expression node {t}".format(t=type(e).__name__)
    raise PreconditionError(msg)


@dataclass(frozen=True)
class Interleaving(object):
    """twists m_1 < ... < m_{count+1} and primes p_1 < ... < p_count"""

    twists: tuple
    primes: tuple

    def pairs(self):
        return tuple(zip(self.twists, self.primes))


def _smallest_twist_below(p, start, max_twist):
    """smallest m > start with θ_m < 2π/p, by galloping then bisection"""
    turn = RationalTurn(1, p)

    def below(m):
        return angle_less(theta_cos(m), turn)

    step = 1
    lo = start
    hi = start + step
    while not below(hi):
        lo = hi
        step *= 2
        hi = start + step
        if hi > max_twist:
            if below(max_twist):
                hi = max_twist
                break
            msg = "no twist parameter up to {cap} below 2pi/{p}".format(cap=max_twist, p=p)
            raise CapExceeded(msg, cap=max_twist)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if below(mid):
            hi = mid
        else:
            lo = mid
    return hi


def interleave(A, count, max_prime=DEFAULT_MAX_PRIME, max_twist=DEFAULT_MAX_TWIST):
    """
    Smallest twists and primes with ``A < p_1`` and
    ``θ_{m_{i+1}} < 2π/p_i < θ_{m_i}``, starting from ``m_1 = 1``.
    """
    if A < 0 or count < 1:
        msg = "interleave needs A >= 0 and count >= 1, got A={A}, count={c}".format(
            A=A, c=count)
        raise PreconditionError(msg)
    twists = [1]
    primes = []
    p = A
    while len(primes) < count:
        p = sp.nextprime(p)
        if p > max_prime:
            msg = "no prime up to {cap} fits after {found}".format(cap=max_prime, found=primes)
            raise CapExceeded(msg, cap=max_prime)
        try:
            if not angle_less(RationalTurn(1, p), theta_cos(twists[-1])):
                continue
            nxt = _smallest_twist_below(p, twists[-1], max_twist)
        except Undecidable as err:
            logger.warning("skipping prime %d: %s", p, err)
            continue
        primes.append(int(p))
        twists.append(nxt)
        logger.debug("interleave step %d: p = %d, m = %d", len(primes), p, nxt)
    return Interleaving(tuple(twists), tuple(primes))


def j0_multiplicity(C0):
    """N = floor(C0 / 4) + 1"""
    C0 = Fraction(C0)
    if C0 < 0:
        msg = "C0 must be nonnegative, got {c}".format(c=C0)
        raise PreconditionError(msg)
    return math.floor(C0 / 4) + 1


@dataclass(frozen=True)
class J0Entry(object):
    """
    J_0^i with its verification record: ``signature_sum`` is the sum over
    p_i-th roots and ``earlier_sums`` the sums over p_j-th roots, j < i
    """

    index: int
    twist_low: int
    twist_high: int
    prime: int
    N: int
    expr: object
    signature: StepSignature
    signature_sum: int
    earlier_sums: tuple


def build_J0(C0, A, count, max_prime=DEFAULT_MAX_PRIME, max_twist=DEFAULT_MAX_TWIST):
    C0 = Fraction(C0)
    N = j0_multiplicity(C0)
    inter = interleave(A, count, max_prime=max_prime, max_twist=max_twist)
    entries = []
    for i, p in enumerate(inter.primes, start=1):
        low, high = inter.twists[i - 1], inter.twists[i]
        expr = Sum((Atom(horn_knot(high)), Mirror(Atom(horn_knot(low)))), (N, N))
        sig = expr_invariants(expr).step_signature
        total = sum_over_roots(sig, p)
        if total <= C0:
            msg = "J_0^{i}: sum over {p}-th roots is {s}, not above C0 = {c}".format(
                i=i, p=p, s=total, c=C0)
            raise InternalConsistencyError(msg)
        earlier = tuple(sum_over_roots(sig, q) for q in inter.primes[:i - 1])
        if any(earlier):
            msg = "J_0^{i}: sums at earlier primes {e} do not vanish".format(i=i, e=earlier)
            raise InternalConsistencyError(msg)
        entries.append(J0Entry(i, low, high, p, N, expr, sig, total, earlier))
    return tuple(entries)


@dataclass(frozen=True)
class SeedKnot(object):
    """the seed J_0 with its asserted flags (grope_height2 is (G1))"""

    expr: object
    flags: tuple = ()

    def flag(self, name):
        return dict(self.flags).get(name, False)


@dataclass(frozen=True)
class FamilySpec(object):
    """
    One member J_{m,n}^i of a family.  ``inputs`` lists (K_k, axis) for
    k = 0, 1, ...; a single input is reused at every stage.  ``variant`` is
    ``'bi'`` for R(α', β'; J_{m-1}, J_{n-1}) and ``'slice'`` for R(α'; J_{m-1}).
    """

    m: int
    n: int
    index: int
    inputs: tuple
    seed: SeedKnot
    pattern: CatalogKnot
    primes: tuple = ()
    twists: tuple = ()
    N: int = 1
    variant: str = 'bi'

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            msg = "m and n must be >= 1, got {m}, {n}".format(m=self.m, n=self.n)
            raise PreconditionError(msg)
        if self.variant not in ('bi', 'slice'):
            msg = "unknown family variant {v}".format(v=self.variant)
            raise PreconditionError(msg)
        if self.variant == 'slice' and self.m != self.n:
            raise PreconditionError("the slice variant has m = n")
        if self.N < 1:
            raise PreconditionError("N must be >= 1")
        if any(not sp.isprime(p) for p in self.primes):
            msg = "primes {p} contain a composite".format(p=self.primes)
            raise PreconditionError(msg)
        if not self.inputs:
            raise PreconditionError("at least one (K, axis) input is needed")

    def input_at(self, k):
        return self.inputs[min(k, len(self.inputs) - 1)]

    def stage_inputs(self):
        """the (K_k, axis) used to build J_1, ..., J_{max(m,n)-1}"""
        return [self.input_at(k) for k in range(max(self.m, self.n) - 1)]

    @property
    def prime(self):
        return self.primes[self.index - 1] if self.primes else None


def _seed_arf(seed):
    try:
        return expr_invariants(seed.expr).arf
    except (PreconditionError, Unsupported):
        return None


def missing_hypotheses(spec, need_nonmembership=False):
    """
    labels of the unmet hypotheses among (G1), (G2), (N1).  (G1) also fails
    when the seed's Arf invariant can be computed and is 1.
    """
    missing = []
    if not all(spec.seed.flag(f) for f in SEED_FLAGS) or _seed_arf(spec.seed) == 1:
        missing.append('(G1)')
    stages = spec.stage_inputs()
    if any(not all(K.flag(f) for f in STAGE_FLAGS) for K, _ in stages):
        missing.append('(G2)')
    if need_nonmembership and any(not all(K.flag(f) for f in NONMEMBERSHIP_FLAGS)
                                  for K, _ in stages):
        missing.append('(N1)')
    return missing


def checked_hypotheses(spec, need_nonmembership=False):
    """sorted ``('(G1) arf_zero', True)`` pairs for every flag a certificate relies on"""
    names = ['(G1) ' + f for f in SEED_FLAGS]
    if spec.stage_inputs():
        names += ['(G2) ' + f for f in STAGE_FLAGS]
        if need_nonmembership:
            names += ['(N1) ' + f for f in NONMEMBERSHIP_FLAGS]
    return tuple((name, True) for name in sorted(names))


def member_depth(spec):
    """number of Infect layers in the expression ``build_Jmn`` returns"""
    if spec.variant == 'slice':
        return spec.m
    return max(spec.m + 1, spec.n)


def _require_axes(knot, axes):
    absent = [a for a in axes if a not in knot.axes]
    if absent:
        msg = "{name} has no curve named {a}".format(name=knot.name, a=', '.join(absent))
        raise PreconditionError(msg)


def tower(spec):
    """J_0, J_1, ..., J_{max(m,n)-1} with J_{k+1} = K_k(η_k; J_k)"""
    levels = [spec.seed.expr]
    for K, axis in spec.stage_inputs():
        _require_axes(K, (axis,))
        levels.append(Infect(K, axis, 0, levels[-1]))
    return levels


def build_Jmn(spec):
    missing = missing_hypotheses(spec)
    if missing:
        msg = "J_{{{m},{n}}}^{i}: unmet hypotheses {h}".format(
            m=spec.m, n=spec.n, i=spec.index, h=' '.join(missing))
        raise MissingHypothesis(msg, hypotheses=missing)
    levels = tower(spec)
    if spec.variant == 'slice':
        _require_axes(spec.pattern, ("alpha'",))
        return Infect(spec.pattern, "alpha'", 0, levels[spec.m - 1])
    _require_axes(spec.pattern, ("alpha'", "beta'"))
    inner = Infect(spec.pattern, "alpha'", 0, levels[spec.m - 1])
    return Infect(inner, "beta'", 0, levels[spec.n - 1])


@dataclass(frozen=True)
class Family(object):
    """members J_{m,n}^1, ..., J_{m,n}^count with their seeds"""

    m: int
    n: int
    variant: str
    C0: Fraction
    A: int
    entries: tuple
    specs: tuple
    members: tuple

    def __len__(self):
        return len(self.members)


def build_family(m, n, count, C0, A, inputs, pattern, seed_flags=(), variant='bi',
                 max_prime=DEFAULT_MAX_PRIME, max_twist=DEFAULT_MAX_TWIST):
    """
    Seeds from ``build_J0`` and one FamilySpec and J_{m,n} expression per
    seed.  ``seed_flags`` are asserted for every seed.
    """
    if variant == 'slice':
        n = m
    entries = build_J0(C0, A, count, max_prime=max_prime, max_twist=max_twist)
    primes = tuple(e.prime for e in entries)
    twists = (entries[0].twist_low,) + tuple(e.twist_high for e in entries)
    specs = []
    members = []
    for entry in entries:
        spec = FamilySpec(m, n, entry.index, tuple(inputs),
                          SeedKnot(entry.expr, tuple(seed_flags)), pattern,
                          primes, twists, entry.N, variant)
        specs.append(spec)
        members.append(build_Jmn(spec))
    return Family(m, n, variant, Fraction(C0), A, entries, tuple(specs), tuple(members))
