#!/usr/bin/env python
# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""
Membership and non-membership certificates for the grope (G), Whitney
tower (W) and solvable (F) bi-filtrations.

Levels are pairs of :class:`~gropetower.invariants.gropes.HalfInt`.  The
containments ``G_x ⊆ W_x ⊆ F_{x - (2, 2)}`` and the monotonicity
``G_{k,l} ⊆ G_{m,n}`` for ``k >= m, l >= n`` close a report grid.
"""
import logging
from dataclasses import dataclass
from dataclasses import field
from fractions import Fraction
from functools import reduce

import pandas as pd
import sympy as sp

from .exceptions import InconsistentGrid
from .exceptions import InternalConsistencyError
from .exceptions import MissingHypothesis
from .exceptions import NoCertificate
from .exceptions import PreconditionError
from .families import checked_hypotheses
from .families import expr_depth
from .families import member_depth
from .families import missing_hypotheses
from .gropes import HalfInt
from .gropes import grope_height
from .gropes import model_grope
from .gropes import product
from .signatures import sum_over_roots

logger = logging.getLogger(__name__)

UNIVERSAL_BOUND = 69713280
STRUCTURAL_AUDIT_MAX = 8
FILTRATIONS = ('G', 'W', 'F')
SHIFT = 4  # twice-value of the (2, 2) shift


def c_K(crossings):
    """universal bound on ρ-invariants of the zero surgery of a knot with n crossings"""
    if crossings < 0:
        msg = "crossing number must be nonnegative, got {c}".format(c=crossings)
        raise PreconditionError(msg)
    return UNIVERSAL_BOUND * crossings


def rho_abelian(sig, p):
    """ρ-invariant of the zero surgery under an order-p abelian character"""
    if not sp.isprime(p):
        msg = "rho_abelian needs a prime, got {p}".format(p=p)
        raise PreconditionError(msg)
    return sum_over_roots(sig, p)


def level(a, b):
    return (a if isinstance(a, HalfInt) else HalfInt.of(a),
            b if isinstance(b, HalfInt) else HalfInt.of(b))


def level_str(lev):
    return '({a}, {b})'.format(a=lev[0], b=lev[1])


def member_label(m, n, index, variant='bi'):
    if variant == 'slice':
        return 'J_{m}^{i}'.format(m=m, i=index)
    return 'J_{{{m},{n}}}^{i}'.format(m=m, n=n, i=index)


def combination_label(coeffs, m, n, variant='bi'):
    terms = [(i, a) for i, a in enumerate(coeffs, start=1) if a]
    if len(terms) == 1 and terms[0][1] == 1:
        return member_label(m, n, terms[0][0], variant)
    parts = []
    for i, a in terms:
        name = member_label(m, n, i, variant)
        parts.append(name if a == 1 else '{a}{name}'.format(a=a, name=name))
    return ' # '.join(parts)


@dataclass(frozen=True)
class SolvencyBound(object):
    """bound on the ρ-terms contributed by the K_k"""

    rho_terms_bound: Fraction

    def __post_init__(self):
        object.__setattr__(self, 'rho_terms_bound', Fraction(self.rho_terms_bound))
        if self.rho_terms_bound < 0:
            raise ValueError("a solvency bound is nonnegative")


@dataclass(frozen=True)
class MembershipCertificate(object):
    """
    ``grope_heights`` of None marks a knot inside every level (the unknot);
    ``product_audit`` lists the heights of the product factors per side
    """

    label: str
    knot: object = None
    grope_heights: tuple = None
    whitney_heights: tuple = None
    solvable_heights: tuple = None
    hypotheses: tuple = ()
    chain: tuple = ()
    product_audit: tuple = ()

    @classmethod
    def unbounded(cls, label, knot=None):
        return cls(label, knot, chain=('slice disks exist at every level',))

    def inside(self):
        """(filtration, level) pairs known to contain the knot"""
        if self.grope_heights is None:
            return None
        return (('G', self.grope_heights), ('W', self.whitney_heights),
                ('F', self.solvable_heights))


@dataclass(frozen=True)
class NonMembershipCertificate(object):
    label: str
    combination: tuple
    leading_index: int
    prime: int
    signature_sum: int
    threshold: Fraction
    margin: Fraction
    excluded_levels: tuple
    mirrored: bool = False
    earlier_sums: tuple = field(default=())

    def __post_init__(self):
        if self.margin != abs(self.combination[self.leading_index - 1]) * \
                self.signature_sum - self.threshold:
            raise InternalConsistencyError("margin disagrees with its terms")

    @property
    def valid(self):
        return self.margin > 0

    def outside(self):
        return tuple(('F', lev) for lev in self.excluded_levels)


def _product_audit(m):
    """heights of the factors of the satellite grope concordance on one side"""
    return (1,) + (1,) * (m - 1) + (2,)


def _structural_height(m):
    """build the product grope itself and read off its height"""
    concordance = model_grope(2, boundary_components=2, cap_strands=1, label='H')
    chain = concordance
    for k in range(m - 1):
        chain = product(model_grope(1, cap_strands=1, label='H{k}'.format(k=k)), chain)
    return grope_height(product(model_grope(1, cap_strands=1, label='R'), chain))


def certify_membership(spec, knot=None):
    missing = missing_hypotheses(spec)
    if missing:
        msg = "cannot certify {name}: unmet hypotheses {h}".format(
            name=member_label(spec.m, spec.n, spec.index, spec.variant), h=' '.join(missing))
        raise MissingHypothesis(msg, hypotheses=missing)
    if knot is not None and expr_depth(knot) != member_depth(spec):
        msg = "{name} has {d} infection layers, expected {e}".format(
            name=member_label(spec.m, spec.n, spec.index, spec.variant),
            d=expr_depth(knot), e=member_depth(spec))
        raise InternalConsistencyError(msg)
    audits = []
    for side in (spec.m, spec.n):
        audit = _product_audit(side)
        if sum(audit) != side + 2:
            raise InternalConsistencyError("product heights do not add up to m + 2")
        if side <= STRUCTURAL_AUDIT_MAX and _structural_height(side) != HalfInt.of(side + 2):
            raise InternalConsistencyError("product grope does not have height m + 2")
        audits.append(audit)
    grope = level(spec.m + 2, spec.n + 2)
    cert = MembershipCertificate(
        label=member_label(spec.m, spec.n, spec.index, spec.variant),
        knot=knot,
        grope_heights=grope,
        whitney_heights=grope,
        solvable_heights=level(spec.m, spec.n),
        hypotheses=checked_hypotheses(spec),
        chain=('satellite capped grope concordance of height (m+2, n+2)',
               'grope slice of height (m, n) implies Whitney slice of height (m, n)',
               'Whitney slice of height (m+2, n+2) implies (m, n)-solvable'),
        product_audit=tuple(audits))
    logger.info("membership certificate for %s at %s", cert.label, level_str(grope))
    return cert


def threshold_of(spec):
    """Σ c_K over K_0, ..., K_{m-2}"""
    total = 0
    for K, _ in spec.stage_inputs()[:spec.m - 1]:
        if not K.crossing_number:
            msg = "{name} needs a crossing number for the bound".format(name=K.name)
            raise PreconditionError(msg)
        total += c_K(K.crossing_number)
    return Fraction(total)


def excluded_levels(m, n, variant='bi'):
    half = Fraction(1, 2)
    if variant == 'slice':
        return (level(m + half, m + half),)
    return (level(m + half, n), level(m, n + half))


def certify_nonmembership(family, coeffs):
    """
    Certify that ``#_i a_i J^i`` lies outside the excluded solvable levels.
    Raises NoCertificate when the margin is not positive.
    """
    coeffs = tuple(int(a) for a in coeffs)
    if len(coeffs) > len(family):
        msg = "{k} coefficients for a family of {n}".format(k=len(coeffs), n=len(family))
        raise PreconditionError(msg)
    coeffs = coeffs + (0,) * (len(family) - len(coeffs))
    if not any(coeffs):
        raise PreconditionError("all coefficients are zero")
    w = next(i for i, a in enumerate(coeffs, start=1) if a)
    mirrored = coeffs[w - 1] < 0
    if mirrored:
        coeffs = tuple(-a for a in coeffs)
    spec = family.specs[w - 1]
    missing = [h for h in missing_hypotheses(spec, need_nonmembership=True)]
    if missing:
        msg = "cannot certify exclusion: unmet hypotheses {h}".format(h=' '.join(missing))
        raise MissingHypothesis(msg, hypotheses=missing)
    entry = family.entries[w - 1]
    p = entry.prime
    later = []
    for i, a in enumerate(coeffs, start=1):
        if i > w and a:
            s = rho_abelian(family.entries[i - 1].signature, p)
            if s != 0:
                msg = "J_0^{i} does not vanish at p_{w} = {p}: sum {s}".format(
                    i=i, w=w, p=p, s=s)
                raise InternalConsistencyError(msg)
            later.append(s)
    own = rho_abelian(entry.signature, p)
    if own != entry.signature_sum:
        raise InternalConsistencyError("J_0 signature sum changed since construction")
    combined = reduce(lambda acc, sig: acc + sig,
                      [family.entries[i - 1].signature.scale(a)
                       for i, a in enumerate(coeffs, start=1) if a > 0] +
                      [-family.entries[i - 1].signature.scale(-a)
                       for i, a in enumerate(coeffs, start=1) if a < 0])
    if rho_abelian(combined, p) != coeffs[w - 1] * own:
        raise InternalConsistencyError("combination sum is not a_w times the leading sum")
    threshold = threshold_of(spec)
    margin = abs(coeffs[w - 1]) * own - threshold
    label = combination_label(coeffs if not mirrored else tuple(-a for a in coeffs),
                              family.m, family.n, family.variant)
    if margin <= 0:
        msg = "{label}: margin {margin} is not positive".format(label=label, margin=margin)
        raise NoCertificate(msg, margin=margin)
    cert = NonMembershipCertificate(
        label=label,
        combination=coeffs,
        leading_index=w,
        prime=p,
        signature_sum=own,
        threshold=threshold,
        margin=margin,
        excluded_levels=excluded_levels(family.m, family.n, family.variant),
        mirrored=mirrored,
        earlier_sums=entry.earlier_sums)
    logger.info("exclusion certificate for %s with margin %s", label, margin)
    return cert


def _shift(lev, twice):
    a, b = lev[0].twice_value + twice, lev[1].twice_value + twice
    if a < 2 or b < 2:
        return None
    return HalfInt(a), HalfInt(b)


def bifiltration_report(certs):
    """
    Grid of known memberships: one row per (knot, filtration), one column per
    level, cells ``'in'``, ``'out'`` or empty.
    """
    inside = {}
    outside = {}
    unbounded = set()
    top = 4
    for cert in certs:
        inside.setdefault(cert.label, set())
        outside.setdefault(cert.label, set())
        if isinstance(cert, MembershipCertificate):
            facts = cert.inside()
            if facts is None:
                unbounded.add(cert.label)
                continue
            for filt, lev in facts:
                inside[cert.label].add((filt, lev))
                top = max(top, lev[0].twice_value, lev[1].twice_value)
            # G_x ⊆ W_x ⊆ F_{x - (2, 2)}
            g = cert.grope_heights
            inside[cert.label].add(('W', g))
            low = _shift(g, -SHIFT)
            if low is not None:
                inside[cert.label].add(('F', low))
        else:
            for filt, lev in cert.outside():
                outside[cert.label].add((filt, lev))
                top = max(top, lev[0].twice_value + SHIFT, lev[1].twice_value + SHIFT)
                # outside F_x puts the knot outside W and G at x + (2, 2)
                for smaller in ('W', 'G'):
                    outside[cert.label].add((smaller, _shift(lev, SHIFT)))
    grid = [(HalfInt(a), HalfInt(b)) for a in range(2, top + 1) for b in range(2, top + 1)]
    columns = [level_str(lev) for lev in grid]
    rows = []
    index = []
    for label in sorted(inside):
        for filt in FILTRATIONS:
            cells = []
            for lev in grid:
                is_in = label in unbounded or any(
                    f == filt and lev[0] <= x[0] and lev[1] <= x[1] for f, x in inside[label])
                is_out = any(f == filt and lev[0] >= x[0] and lev[1] >= x[1]
                             for f, x in outside[label])
                if is_in and is_out:
                    msg = "{label} is both inside and outside {f}{lev}".format(
                        label=label, f=filt, lev=level_str(lev))
                    raise InconsistentGrid(msg)
                cells.append('in' if is_in else 'out' if is_out else '')
            rows.append(cells)
            index.append((label, filt))
    frame = pd.DataFrame(rows, columns=columns,
                         index=pd.MultiIndex.from_tuples(index, names=['knot', 'filtration']))
    return frame
