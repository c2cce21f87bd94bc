import json
from fractions import Fraction

import pytest

from ...invariants.exceptions import CatalogError
from ...invariants.exceptions import PreconditionError
from ...invariants.families import horn_knot
from ...invariants.gropes import grope_height
from ...invariants.obstructions import certify_membership
from ...invariants.obstructions import certify_nonmembership
from ...invariants.obstructions import level
from ..utils import canonical_json
from ..utils import certificate_from_json
from ..utils import certificate_to_json
from ..utils import family_from_json
from ..utils import family_to_json
from ..utils import fraction_from_json
from ..utils import grope_from_json
from ..utils import knot_from_file
from ..utils import level_from_json
from ..utils import level_to_json
from ..utils import load_catalog
from ..utils import load_certificate
from ..utils import lookup
from ..utils import parse_catalog
from ..utils import save_certificate
from ..utils import signature_from_json
from ..utils import signature_to_json


def test_embedded_catalog(catalog):
    assert set(catalog) == {'unknot', 'trefoil', 'figure-8', '6_1', '9_46'}
    assert catalog['6_1'].flag('cyclic_alexander')
    assert catalog['9_46'].axes == ("alpha'", "beta'")


def test_merge_catalog(catalog_file):
    catalog = load_catalog([str(catalog_file)])
    assert catalog['5_2'].crossing_number == 5
    assert 'trefoil' in catalog


def test_identical_duplicates_merge(tmpdir, catalog_doc):
    path = tmpdir.join('same.json')
    path.write(json.dumps({'version': 1, 'knots': catalog_doc['knots'][1:2]}))
    assert load_catalog([str(path)])['trefoil'].crossing_number == 3


def test_conflicting_catalog(tmpdir, catalog_doc):
    trefoil = dict(catalog_doc['knots'][1], arf=None)
    path = tmpdir.join('conflict.json')
    path.write(json.dumps({'version': 1, 'knots': [trefoil]}))
    with pytest.raises(CatalogError, match="redefines trefoil") as err:
        load_catalog([str(path)])
    assert err.value.pointer == '/knots/0/name'


@pytest.mark.parametrize("edit,pointer", [
    (lambda doc: doc.update(version=2), '/version'),
    (lambda doc: doc['knots'][1].update(seifert=[[1, 0], [0, 1]]), '/knots/1/seifert'),
    (lambda doc: doc['knots'][1].update(arf=0), '/knots/1'),
    (lambda doc: doc['knots'][1].update(crossings=-3), '/knots/1/crossings'),
    (lambda doc: doc['knots'][1].pop('seifert'), '/knots/1'),
    (lambda doc: doc['knots'][3].update(axes='eta'), '/knots/3/axes'),
    (lambda doc: doc['knots'].append(dict(doc['knots'][0])), '/knots/5/name'),
])
def test_catalog_errors_carry_pointers(catalog_doc, edit, pointer):
    edit(catalog_doc)
    with pytest.raises(CatalogError) as err:
        parse_catalog(catalog_doc)
    assert err.value.pointer == pointer
    assert str(err.value).startswith(pointer + ':')


def test_unreadable_catalog(tmpdir):
    path = tmpdir.join('broken.json')
    path.write('{"version": 1,')
    with pytest.raises(CatalogError, match="could not read"):
        load_catalog([str(path)])


def test_lookup(catalog):
    assert lookup(catalog, 'trefoil').crossing_number == 3
    with pytest.raises(PreconditionError, match="unknown knot 7_4"):
        lookup(catalog, '7_4')


def test_knot_from_file(knot_file):
    knot = knot_from_file(str(knot_file))
    assert knot.name == '5_2'
    assert knot.arf_flag == 0


def test_canonical_json():
    assert canonical_json({'b': 1, 'a': [1, 'é']}) == '{"a":[1,"é"],"b":1}'


def test_fraction_errors():
    assert fraction_from_json({'num': -3, 'den': 4}) == Fraction(-3, 4)
    with pytest.raises(CatalogError):
        fraction_from_json({'num': 1, 'den': 0}, '/c0')
    with pytest.raises(CatalogError):
        fraction_from_json(0.5)


def test_level_and_signature_documents():
    lev = level('3.5', 3)
    assert level_to_json(lev) == [{'num': 7, 'den': 2}, {'num': 3, 'den': 1}]
    assert level_from_json(level_to_json(lev)) == lev
    sig = horn_knot(27).signature
    assert signature_to_json(sig) == [{'angle': {'kind': 'cbrt', 'm': 27}, 'delta': 2}]
    assert signature_from_json(signature_to_json(sig)) == sig


def test_family_document(catalog, weak_family):
    doc = family_to_json(weak_family)
    assert doc['type'] == 'family'
    assert doc['c0'] == {'num': 3, 'den': 1}
    assert [e['prime'] for e in doc['entries']] == [7, 11, 13]
    rebuilt = family_from_json(json.loads(canonical_json(doc)), catalog)
    assert family_to_json(rebuilt) == doc


def test_family_document_is_checked(catalog, weak_family):
    doc = family_to_json(weak_family)
    doc['entries'][1]['signature_sum'] += 1
    with pytest.raises(CatalogError) as err:
        family_from_json(doc, catalog)
    assert err.value.pointer == '/entries/1'
    doc = family_to_json(weak_family)
    doc['pattern'] = 'square'
    with pytest.raises(CatalogError) as err:
        family_from_json(doc, catalog)
    assert err.value.pointer == '/pattern'
    with pytest.raises(CatalogError):
        family_from_json({'type': 'certificate'}, catalog)


def test_family_documents_are_deterministic(catalog, weak_family):
    again = family_from_json(family_to_json(weak_family), catalog)
    assert canonical_json(family_to_json(again)) == canonical_json(family_to_json(weak_family))


def test_membership_certificate_file(tmpdir, catalog, family_3_3):
    cert = certify_membership(family_3_3.specs[1], family_3_3.members[1])
    path = save_certificate(cert, str(tmpdir.join('membership.json')))
    assert load_certificate(path, catalog) == cert
    doc = certificate_to_json(cert)
    assert doc['type'] == 'membership'
    assert doc['grope_heights'] == [{'num': 5, 'den': 1}, {'num': 5, 'den': 1}]


def test_exclusion_certificate_file(tmpdir, family_3_3):
    cert = certify_nonmembership(family_3_3, (1, 1))
    path = save_certificate(cert, str(tmpdir.join('exclusion.json')))
    with open(path) as fp:
        doc = json.load(fp)
    assert doc['margin'] == {'num': 4, 'den': 1}
    assert doc['combination'] == [1, 1, 0, 0, 0]
    assert certificate_from_json(doc) == cert


def test_unknown_certificate_type():
    with pytest.raises(CatalogError) as err:
        certificate_from_json({'type': 'maybe'})
    assert err.value.pointer == '/type'


def test_grope_document(grope_file):
    with open(str(grope_file)) as fp:
        doc = json.load(fp)
    G = grope_from_json(doc['grope'])
    assert str(grope_height(G)) == '2'
    assert G.pairs[0][0].pairs[0][0].strands == 1
    with pytest.raises(CatalogError) as err:
        grope_from_json({'label': 'S', 'pairs': [[{'cap': {'label': 'a'}}]]})
    assert err.value.pointer == '/pairs/0'


@pytest.mark.parametrize("doc,match", [
    ({'label': 'S', 'pairs': [[{'cap': {'label': 'a'}}, {'cap': {'label': 'a'}}]]},
     "duplicate labels"),
    ({'label': 'S', 'pairs': [[{'cap': {'label': 'a', 'intersections': ['T']}},
                               {'cap': {'label': 'b'}}]]},
     "unknown sheets"),
    ({'label': 'S', 'pairs': [[{'label': 'T', 'pairs': []}, {'cap': {'label': 'b'}}]]},
     "genus 0"),
])
def test_malformed_grope_document(doc, match):
    with pytest.raises(CatalogError, match=match) as err:
        grope_from_json(doc, '/grope')
    assert err.value.pointer == '/grope'
