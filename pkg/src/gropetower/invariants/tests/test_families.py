from dataclasses import replace
from fractions import Fraction

import pytest

from ..angles import RationalTurn
from ..angles import angle_less
from ..angles import theta_cos
from ..exceptions import CapExceeded
from ..exceptions import MissingHypothesis
from ..exceptions import PreconditionError
from ..exceptions import Unsupported
from ..families import Atom
from ..families import Infect
from ..families import Mirror
from ..families import SeedKnot
from ..families import Sum
from ..families import build_J0
from ..families import build_Jmn
from ..families import build_family
from ..families import checked_hypotheses
from ..families import expr_depth
from ..families import expr_invariants
from ..families import horn_knot
from ..families import interleave
from ..families import j0_multiplicity
from ..families import member_depth
from ..families import missing_hypotheses
from ..families import tower
from ..obstructions import c_K
from ..signatures import sum_over_roots


def test_interleave_first_step():
    inter = interleave(2, 1)
    assert inter.twists[0] == 1
    assert inter.primes == (7,)


def test_interleave_acceptance():
    inter = interleave(2, 5)
    assert inter.primes == (7, 11, 13, 17, 19)
    assert inter.twists == (1, 3, 32, 84, 406, 786)


def test_interleave_is_interleaved():
    inter = interleave(2, 4)
    for i, p in enumerate(inter.primes):
        turn = RationalTurn(1, p)
        assert angle_less(theta_cos(inter.twists[i + 1]), turn)
        assert angle_less(turn, theta_cos(inter.twists[i]))
        # the twist is the smallest one below 2π/p
        assert not angle_less(theta_cos(inter.twists[i + 1] - 1), turn)


def test_interleave_skips_small_primes():
    # 2π/5 = 72 degrees lies above θ_1 = 60 degrees
    assert interleave(3, 1).primes == (7,)
    assert interleave(0, 1).primes == (7,)


def test_interleave_caps():
    with pytest.raises(CapExceeded):
        interleave(2, 3, max_prime=12)
    with pytest.raises(CapExceeded):
        interleave(2, 2, max_twist=10)
    with pytest.raises(PreconditionError):
        interleave(2, 0)


@pytest.mark.parametrize("C0,N", [
    (0, 1), (3, 1), (4, 2), (Fraction(15, 2), 2), (836559360, 209139841),
])
def test_j0_multiplicity(C0, N):
    assert j0_multiplicity(C0) == N


def test_build_J0_small():
    entries = build_J0(3, 2, 3)
    first = entries[0]
    assert (first.twist_low, first.twist_high, first.prime, first.N) == (1, 3, 7, 1)
    assert first.signature_sum == 4
    assert first.earlier_sums == ()
    for entry in entries:
        assert entry.signature_sum > 3
        assert entry.signature_sum == sum_over_roots(entry.signature, entry.prime)
        assert all(s == 0 for s in entry.earlier_sums)
        assert len(entry.earlier_sums) == entry.index - 1


def test_build_J0_scales_with_N():
    entry = build_J0(2 * c_K(6), 2, 1)[0]
    assert entry.N == 209139841
    assert entry.signature_sum == 4 * entry.N


def test_expr_invariants_of_sums(catalog):
    trefoil = Atom(catalog['trefoil'])
    twice = Sum((trefoil,), (2,))
    inv = expr_invariants(twice)
    assert str(inv.alexander) == 't^4-2t^3+3t^2-2t+1'
    assert inv.crossing_bound == 6
    assert inv.arf == 0
    assert inv.step_signature.total() == -4
    mirrored = expr_invariants(Mirror(trefoil))
    assert mirrored.step_signature.total() == 2
    assert mirrored.alexander == expr_invariants(trefoil).alexander


def test_expr_invariants_of_models():
    expr = Sum((Atom(horn_knot(3)), Mirror(Atom(horn_knot(1)))))
    inv = expr_invariants(expr)
    assert inv.alexander is None
    assert inv.crossing_bound is None
    assert inv.step_signature.total() == 0
    assert len(inv.step_signature.jumps) == 2


def test_infection_keeps_pattern_invariants(catalog):
    expr = Infect(catalog['9_46'], "alpha'", 0, Atom(horn_knot(1)), crossing_bound=40)
    inv = expr_invariants(expr)
    assert str(inv.alexander) == '2t^2-5t+2'
    assert inv.step_signature.is_zero()
    assert inv.crossing_bound == 40
    assert expr_depth(expr) == 1


def test_infection_with_winding(catalog):
    expr = Infect(catalog['9_46'], "alpha'", 1, Atom(horn_knot(1)))
    with pytest.raises(Unsupported):
        expr_invariants(expr)


def test_sum_validation():
    with pytest.raises(ValueError):
        Sum((Atom(horn_knot(1)),), (0,))
    with pytest.raises(ValueError):
        Sum((Atom(horn_knot(1)),), (1, 1))


def test_family_members(family_3_3):
    assert len(family_3_3) == 5
    assert family_3_3.specs[0].prime == 7
    for member in family_3_3.members:
        # R(α', J_2)(β', J_2) with J_2 = K_1(η; K_0(η; J_0))
        assert expr_depth(member) == 4


def test_tower_levels(family_3_3):
    levels = tower(family_3_3.specs[0])
    assert len(levels) == 3
    assert all(isinstance(level, Infect) for level in levels[1:])
    assert [level.axis for level in levels[1:]] == ['eta', 'eta']


def test_missing_hypotheses(catalog, family_3_3):
    spec = family_3_3.specs[0]
    assert missing_hypotheses(spec, need_nonmembership=True) == []
    unflagged = replace(spec, seed=SeedKnot(spec.seed.expr, ()))
    assert missing_hypotheses(unflagged) == ['(G1)']
    trefoil = replace(spec, inputs=((catalog['trefoil'], 'eta'),))
    assert missing_hypotheses(trefoil, need_nonmembership=True) == ['(G2)', '(N1)']
    with pytest.raises(MissingHypothesis) as err:
        build_Jmn(unflagged)
    assert err.value.hypotheses == ('(G1)',)


@pytest.mark.parametrize("flags", [
    (('grope_height2', True),),
    (('arf_zero', False), ('grope_height2', True)),
])
def test_seed_needs_vanishing_arf_flag(family_3_3, flags):
    spec = family_3_3.specs[0]
    assert missing_hypotheses(replace(spec, seed=SeedKnot(spec.seed.expr, flags))) == ['(G1)']


def test_seed_with_computed_arf_one(catalog, family_3_3):
    spec = family_3_3.specs[0]
    flags = (('arf_zero', True), ('grope_height2', True))
    assert expr_invariants(Atom(catalog['trefoil'])).arf == 1
    trefoil_seed = replace(spec, seed=SeedKnot(Atom(catalog['trefoil']), flags))
    assert missing_hypotheses(trefoil_seed) == ['(G1)']
    with pytest.raises(MissingHypothesis):
        build_Jmn(trefoil_seed)


def test_checked_hypotheses(family_3_3):
    spec = family_3_3.specs[0]
    assert dict(checked_hypotheses(spec)) == {
        '(G1) arf_zero': True, '(G1) grope_height2': True,
        '(G2) grope_height1': True, '(G2) ribbon': True}
    assert '(N1) cyclic_alexander' in dict(checked_hypotheses(spec, need_nonmembership=True))


def test_member_depth(family_3_3):
    spec = family_3_3.specs[0]
    assert member_depth(spec) == expr_depth(family_3_3.members[0]) == 4
    assert member_depth(replace(spec, n=6)) == 6


def test_missing_axis(catalog, family_3_3):
    spec = replace(family_3_3.specs[0], pattern=catalog['6_1'])
    with pytest.raises(PreconditionError, match="alpha'"):
        build_Jmn(spec)


def test_spec_validation(family_3_3):
    spec = family_3_3.specs[0]
    with pytest.raises(PreconditionError):
        replace(spec, m=0)
    with pytest.raises(PreconditionError):
        replace(spec, variant='slice', n=2)
    with pytest.raises(PreconditionError):
        replace(spec, primes=(7, 9))
    with pytest.raises(PreconditionError):
        replace(spec, inputs=())


def test_slice_variant(catalog):
    family = build_family(2, 5, 2, 3, 2, [(catalog['6_1'], 'eta')], catalog['9_46'],
                          (('arf_zero', True), ('grope_height2', True)), variant='slice')
    assert (family.m, family.n) == (2, 2)
    member = family.members[0]
    assert member.axis == "alpha'"
    assert expr_depth(member) == 2
