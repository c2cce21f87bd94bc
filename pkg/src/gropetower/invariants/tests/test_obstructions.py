from dataclasses import replace
from fractions import Fraction
from itertools import product as cartesian

import pytest

from ..exceptions import InconsistentGrid
from ..exceptions import InternalConsistencyError
from ..exceptions import MissingHypothesis
from ..exceptions import NoCertificate
from ..exceptions import PreconditionError
from ..families import SeedKnot
from ..families import horn_knot
from ..obstructions import MembershipCertificate
from ..obstructions import NonMembershipCertificate
from ..obstructions import SolvencyBound
from ..obstructions import bifiltration_report
from ..obstructions import c_K
from ..obstructions import certify_membership
from ..obstructions import certify_nonmembership
from ..obstructions import combination_label
from ..obstructions import excluded_levels
from ..obstructions import level
from ..obstructions import member_label
from ..obstructions import rho_abelian
from ..obstructions import threshold_of

SIGMA = 836559364
THRESHOLD = 836559360


def test_c_K():
    assert c_K(6) == 418279680
    assert c_K(0) == 0
    with pytest.raises(PreconditionError):
        c_K(-1)


def test_rho_abelian():
    assert rho_abelian(horn_knot(1).signature, 7) == 8
    with pytest.raises(PreconditionError, match="prime"):
        rho_abelian(horn_knot(1).signature, 9)


def test_labels():
    assert member_label(3, 3, 1) == 'J_{3,3}^1'
    assert member_label(3, 3, 2, variant='slice') == 'J_3^2'
    assert combination_label((1, 0, 2), 3, 3) == 'J_{3,3}^1 # 2J_{3,3}^3'
    assert combination_label((0, 1), 2, 4) == 'J_{2,4}^2'


def test_solvency_bound():
    assert SolvencyBound(3).rho_terms_bound == Fraction(3)
    with pytest.raises(ValueError):
        SolvencyBound(-1)


def test_certify_membership(family_3_3):
    cert = certify_membership(family_3_3.specs[0])
    assert cert.label == 'J_{3,3}^1'
    assert cert.grope_heights == level(5, 5)
    assert cert.whitney_heights == level(5, 5)
    assert cert.solvable_heights == level(3, 3)
    assert [sum(side) for side in cert.product_audit] == [5, 5]


def test_certify_membership_needs_g1(family_3_3):
    spec = family_3_3.specs[0]
    unflagged = replace(spec, seed=SeedKnot(spec.seed.expr, ()))
    with pytest.raises(MissingHypothesis, match=r"\(G1\)"):
        certify_membership(unflagged)


@pytest.mark.parametrize("flags", [
    (('grope_height2', True),),
    (('arf_zero', False), ('grope_height2', True)),
])
def test_exclusion_needs_vanishing_arf(family_3_3, flags):
    spec = replace(family_3_3.specs[0], seed=SeedKnot(family_3_3.specs[0].seed.expr, flags))
    family = replace(family_3_3, specs=(spec,) + family_3_3.specs[1:])
    with pytest.raises(MissingHypothesis, match=r"\(G1\)"):
        certify_nonmembership(family, (1,))
    with pytest.raises(MissingHypothesis):
        certify_membership(spec)


def test_membership_records_checked_flags(family_3_3):
    cert = certify_membership(family_3_3.specs[0], family_3_3.members[0])
    assert dict(cert.hypotheses)['(G1) arf_zero'] is True
    assert dict(cert.hypotheses)['(G2) ribbon'] is True
    with pytest.raises(InternalConsistencyError, match="infection layers"):
        certify_membership(family_3_3.specs[0], family_3_3.specs[0].seed.expr)


def test_threshold(family_3_3):
    assert threshold_of(family_3_3.specs[0]) == THRESHOLD


def test_excluded_levels():
    assert excluded_levels(3, 3) == (level('3.5', 3), level(3, '3.5'))
    assert excluded_levels(2, 2, variant='slice') == (level('2.5', '2.5'),)


def test_single_member_exclusion(family_3_3):
    cert = certify_nonmembership(family_3_3, (1,))
    assert cert.valid
    assert cert.leading_index == 1
    assert cert.prime == 7
    assert cert.signature_sum == SIGMA
    assert cert.threshold == THRESHOLD
    assert cert.margin == 4
    assert cert.combination == (1, 0, 0, 0, 0)
    assert cert.outside() == (('F', level('3.5', 3)), ('F', level(3, '3.5')))


@pytest.mark.parametrize("coeffs", [c for c in cartesian((0, 1), repeat=5) if any(c)])
def test_every_zero_one_combination(family_3_3, coeffs):
    cert = certify_nonmembership(family_3_3, coeffs)
    assert cert.margin == 4
    assert cert.prime == family_3_3.specs[cert.leading_index - 1].prime


def test_multiples_and_mirrors(family_3_3):
    cert = certify_nonmembership(family_3_3, (0, 2, 1))
    assert cert.leading_index == 2
    assert cert.prime == 11
    assert cert.margin == 2 * SIGMA - THRESHOLD
    mirrored = certify_nonmembership(family_3_3, (-1,))
    assert mirrored.mirrored
    assert mirrored.margin == 4
    assert mirrored.label == '-1J_{3,3}^1'


def test_bad_combinations(family_3_3):
    with pytest.raises(PreconditionError, match="zero"):
        certify_nonmembership(family_3_3, (0, 0))
    with pytest.raises(PreconditionError):
        certify_nonmembership(family_3_3, (1,) * 6)


def test_no_certificate(weak_family):
    with pytest.raises(NoCertificate) as err:
        certify_nonmembership(weak_family, (1,))
    assert err.value.margin == 4 - THRESHOLD


def test_margin_must_match():
    with pytest.raises(InternalConsistencyError):
        NonMembershipCertificate('K', (1,), 1, 7, 4, Fraction(0), Fraction(3),
                                 excluded_levels(3, 3))


def test_bifiltration_report(family_3_3):
    certs = [certify_membership(family_3_3.specs[0]),
             certify_nonmembership(family_3_3, (1,))]
    frame = bifiltration_report(certs)
    assert list(frame.index) == [('J_{3,3}^1', 'G'), ('J_{3,3}^1', 'W'), ('J_{3,3}^1', 'F')]
    row = frame.loc[('J_{3,3}^1', 'F')]
    assert row['(3, 3)'] == 'in'
    assert row['(3.5, 3)'] == 'out'
    assert row['(4, 4)'] == 'out'
    assert row['(1, 1)'] == 'in'
    grope = frame.loc[('J_{3,3}^1', 'G')]
    assert grope['(5, 5)'] == 'in'
    assert grope['(5.5, 5)'] == 'out'
    assert grope['(5, 1)'] == 'in'


def test_unknot_is_everywhere():
    frame = bifiltration_report([MembershipCertificate.unbounded('unknot')])
    assert (frame.values == 'in').all()


def test_inconsistent_grid():
    inside = MembershipCertificate('K', grope_heights=level(6, 6), whitney_heights=level(6, 6),
                                   solvable_heights=level(4, 4))
    outside = NonMembershipCertificate('K', (1,), 1, 7, 4, Fraction(0), Fraction(4),
                                       excluded_levels(3, 3))
    with pytest.raises(InconsistentGrid):
        bifiltration_report([inside, outside])
