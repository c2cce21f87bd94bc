#!/usr/bin/env python
# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
'''
Knot catalog loading and the JSON formats of families, certificates and
gropes.  Every rational is written as ``{"num": n, "den": d}`` and every
angle in symbolic form, so documents round-trip exactly; ``canonical_json``
sorts keys and drops whitespace so files are diff-stable.
'''
import json
import logging
import os.path as op
from fractions import Fraction

import pkg_resources

from ..invariants.angles import CosValue
from ..invariants.angles import RationalTurn
from ..invariants.exceptions import CatalogError
from ..invariants.exceptions import GropetowerError
from ..invariants.exceptions import PreconditionError
from ..invariants.families import Atom
from ..invariants.families import Infect
from ..invariants.families import Mirror
from ..invariants.families import ModelKnot
from ..invariants.families import Sum
from ..invariants.families import build_family
from ..invariants.gropes import Cap
from ..invariants.gropes import GropeTree
from ..invariants.gropes import HalfInt
from ..invariants.gropes import validate_grope
from ..invariants.obstructions import MembershipCertificate
from ..invariants.obstructions import NonMembershipCertificate
from ..invariants.seifert import CatalogKnot
from ..invariants.seifert import SeifertMatrix
from ..invariants.signatures import StepSignature

logger = logging.getLogger(__name__)

CATALOG_VERSION = 1


def canonical_json(doc):
    return json.dumps(doc, sort_keys=True, separators=(',', ':'), ensure_ascii=False)


def _read_json(path):
    try:
        with open(path) as fp:
            return json.load(fp)
    except (OSError, ValueError) as e:
        msg = "could not read JSON from {p}: {e}".format(p=path, e=e)
        raise CatalogError(msg) from e


def _expect(cond, msg, pointer):
    if not cond:
        raise CatalogError(msg, pointer=pointer)


def _knot_from_entry(entry, ptr):
    _expect(isinstance(entry, dict), "knot entry must be an object", ptr)
    for key in ('name', 'seifert', 'crossings'):
        _expect(key in entry, "missing field {k}".format(k=key), ptr)
    name = entry['name']
    _expect(isinstance(name, str) and name, "name must be a nonempty string", ptr + '/name')
    rows = entry['seifert']
    _expect(isinstance(rows, list) and all(
        isinstance(row, list) and all(isinstance(x, int) for x in row) for row in rows),
        "seifert must be a list of integer rows", ptr + '/seifert')
    crossings = entry['crossings']
    _expect(isinstance(crossings, int) and crossings >= 0,
            "crossings must be a nonnegative integer", ptr + '/crossings')
    arf_flag = entry.get('arf')
    _expect(arf_flag in (0, 1, None), "arf must be 0, 1 or null", ptr + '/arf')
    hypotheses = entry.get('hypotheses', {})
    _expect(isinstance(hypotheses, dict) and all(
        isinstance(v, bool) for v in hypotheses.values()),
        "hypotheses must map names to booleans", ptr + '/hypotheses')
    axes = entry.get('axes', [])
    _expect(isinstance(axes, list) and all(isinstance(a, str) for a in axes),
            "axes must be a list of strings", ptr + '/axes')
    try:
        seifert = SeifertMatrix.from_rows(rows)
    except GropetowerError as e:
        raise CatalogError(str(e), pointer=ptr + '/seifert') from e
    try:
        return CatalogKnot(name, seifert, crossings, arf_flag,
                           tuple(sorted(hypotheses.items())), tuple(axes))
    except GropetowerError as e:
        raise CatalogError(str(e), pointer=ptr) from e


def parse_catalog(doc, source='<catalog>'):
    """validate a catalog document and return {name: CatalogKnot}"""
    _expect(isinstance(doc, dict), "{s}: catalog must be an object".format(s=source), '')
    _expect(doc.get('version') == CATALOG_VERSION,
            "unsupported catalog version {v}".format(v=doc.get('version')), '/version')
    knots = doc.get('knots')
    _expect(isinstance(knots, list), "knots must be a list", '/knots')
    out = {}
    for i, entry in enumerate(knots):
        ptr = '/knots/{i}'.format(i=i)
        knot = _knot_from_entry(entry, ptr)
        _expect(knot.name not in out, "duplicate knot {n}".format(n=knot.name), ptr + '/name')
        out[knot.name] = knot
    return out


def load_catalog(paths=()):
    """the embedded catalog merged with user catalog files"""
    cfg = pkg_resources.resource_string("gropetower", op.join("data", "catalog.json"))
    catalog = parse_catalog(json.loads(cfg.decode('utf-8')), source='embedded')
    for path in paths:
        extra = parse_catalog(_read_json(path), source=path)
        for i, (name, knot) in enumerate(extra.items()):
            if name in catalog and catalog[name] != knot:
                msg = "{p} redefines {n}".format(p=path, n=name)
                raise CatalogError(msg, pointer='/knots/{i}/name'.format(i=i))
            catalog[name] = knot
        logger.info("merged %d knots from %s", len(extra), path)
    return catalog


def lookup(catalog, name):
    try:
        return catalog[name]
    except KeyError:
        msg = "unknown knot {n}; known: {k}".format(n=name, k=', '.join(sorted(catalog)))
        raise PreconditionError(msg) from None


def knot_from_file(path):
    """a single-knot JSON file in the catalog entry format"""
    return _knot_from_entry(_read_json(path), '')


# exact values

def fraction_to_json(value):
    value = Fraction(value)
    return {'num': value.numerator, 'den': value.denominator}


def fraction_from_json(doc, ptr=''):
    _expect(isinstance(doc, dict) and isinstance(doc.get('num'), int) and
            isinstance(doc.get('den'), int) and doc['den'] > 0,
            "expected a rational {num, den}", ptr)
    return Fraction(doc['num'], doc['den'])


def angle_to_json(angle):
    if isinstance(angle, RationalTurn):
        return {'kind': 'turn', 'r': angle.r, 'p': angle.p}
    if angle.kind == 'cbrt':
        return {'kind': 'cbrt', 'm': angle.m}
    if angle.kind == 'rational':
        return {'kind': 'cos', 'value': fraction_to_json(angle.value)}
    return {'kind': 'root', 'poly': list(angle.poly),
            'lo': fraction_to_json(angle.lo), 'hi': fraction_to_json(angle.hi)}


def angle_from_json(doc, ptr=''):
    _expect(isinstance(doc, dict), "angle must be an object", ptr)
    kind = doc.get('kind')
    if kind == 'turn':
        return RationalTurn(doc['r'], doc['p'])
    if kind == 'cbrt':
        return CosValue.cbrt(doc['m'])
    if kind == 'cos':
        return CosValue.rational(fraction_from_json(doc['value'], ptr + '/value'))
    if kind == 'root':
        return CosValue.algebraic(doc['poly'], fraction_from_json(doc['lo'], ptr + '/lo'),
                                  fraction_from_json(doc['hi'], ptr + '/hi'))
    raise CatalogError("unknown angle kind {k}".format(k=kind), pointer=ptr + '/kind')


def signature_to_json(sig):
    return [{'angle': angle_to_json(a), 'delta': d} for a, d in sig.jumps]


def signature_from_json(doc, ptr=''):
    _expect(isinstance(doc, list), "signature must be a list of jumps", ptr)
    return StepSignature(tuple(
        (angle_from_json(j['angle'], '{p}/{i}/angle'.format(p=ptr, i=i)), int(j['delta']))
        for i, j in enumerate(doc)))


def level_to_json(lev):
    return [fraction_to_json(h.value) for h in lev]


def level_from_json(doc, ptr=''):
    _expect(isinstance(doc, list) and len(doc) == 2, "a level is a pair", ptr)
    return tuple(HalfInt.of(fraction_from_json(h, '{p}/{i}'.format(p=ptr, i=i)))
                 for i, h in enumerate(doc))


# knot expressions

def _knot_to_json(knot):
    if isinstance(knot, CatalogKnot):
        return {'type': 'catalog', 'name': knot.name}
    return {'type': 'model', 'name': knot.name, 'signature': signature_to_json(knot.signature),
            'arf': knot.arf_flag, 'crossings': knot.crossing_number,
            'hypotheses': dict(knot.hypotheses)}


def _knot_from_json(doc, catalog, ptr):
    if doc.get('type') == 'catalog':
        try:
            return lookup(catalog, doc['name'])
        except PreconditionError as e:
            raise CatalogError(str(e), pointer=ptr + '/name') from e
    _expect(doc.get('type') == 'model', "unknown knot type", ptr + '/type')
    return ModelKnot(doc['name'], signature_from_json(doc['signature'], ptr + '/signature'),
                     doc.get('arf'), doc.get('crossings'),
                     tuple(sorted(doc.get('hypotheses', {}).items())))


def expr_to_json(e):
    if isinstance(e, Atom):
        return {'type': 'atom', 'knot': _knot_to_json(e.knot)}
    if isinstance(e, Sum):
        return {'type': 'sum', 'children': [expr_to_json(c) for c in e.children],
                'multiplicities': list(e.multiplicities)}
    if isinstance(e, Mirror):
        return {'type': 'mirror', 'child': expr_to_json(e.child)}
    pattern = _knot_to_json(e.pattern) if isinstance(e.pattern, (CatalogKnot, ModelKnot)) \
        else expr_to_json(e.pattern)
    return {'type': 'infect', 'pattern': pattern, 'axis': e.axis, 'winding': e.winding,
            'companion': expr_to_json(e.companion), 'crossing_bound': e.crossing_bound}


def expr_from_json(doc, catalog, ptr=''):
    _expect(isinstance(doc, dict), "expression must be an object", ptr)
    kind = doc.get('type')
    if kind == 'atom':
        return Atom(_knot_from_json(doc['knot'], catalog, ptr + '/knot'))
    if kind == 'sum':
        return Sum(tuple(expr_from_json(c, catalog, '{p}/children/{i}'.format(p=ptr, i=i))
                         for i, c in enumerate(doc['children'])),
                   tuple(doc['multiplicities']))
    if kind == 'mirror':
        return Mirror(expr_from_json(doc['child'], catalog, ptr + '/child'))
    if kind == 'infect':
        pdoc = doc['pattern']
        if pdoc.get('type') in ('catalog', 'model'):
            pattern = _knot_from_json(pdoc, catalog, ptr + '/pattern')
        else:
            pattern = expr_from_json(pdoc, catalog, ptr + '/pattern')
        return Infect(pattern, doc['axis'], doc['winding'],
                      expr_from_json(doc['companion'], catalog, ptr + '/companion'),
                      doc.get('crossing_bound'))
    raise CatalogError("unknown expression type {k}".format(k=kind), pointer=ptr + '/type')


# families

def family_to_json(family):
    spec = family.specs[0]
    return {
        'type': 'family',
        'm': family.m,
        'n': family.n,
        'variant': family.variant,
        'c0': fraction_to_json(family.C0),
        'A': family.A,
        'count': len(family),
        'inputs': [{'knot': K.name, 'axis': axis} for K, axis in spec.inputs],
        'pattern': spec.pattern.name,
        'seed_flags': dict(spec.seed.flags),
        'entries': [{'index': e.index, 'twist_low': e.twist_low, 'twist_high': e.twist_high,
                     'prime': e.prime, 'N': e.N, 'signature_sum': e.signature_sum,
                     'earlier_sums': list(e.earlier_sums)} for e in family.entries],
    }


def family_from_json(doc, catalog):
    """rebuild the family from its parameters and check it against the recorded seeds"""
    _expect(isinstance(doc, dict) and doc.get('type') == 'family',
            "not a family document", '/type')
    for key in ('m', 'n', 'variant', 'c0', 'A', 'count', 'inputs', 'pattern'):
        _expect(key in doc, "missing field {k}".format(k=key), '')
    inputs = []
    for i, item in enumerate(doc['inputs']):
        ptr = '/inputs/{i}'.format(i=i)
        try:
            inputs.append((lookup(catalog, item['knot']), item['axis']))
        except (KeyError, PreconditionError) as e:
            raise CatalogError(str(e), pointer=ptr) from e
    try:
        pattern = lookup(catalog, doc['pattern'])
    except PreconditionError as e:
        raise CatalogError(str(e), pointer='/pattern') from e
    family = build_family(doc['m'], doc['n'], doc['count'], fraction_from_json(doc['c0'], '/c0'),
                          doc['A'], inputs, pattern,
                          tuple(sorted(doc.get('seed_flags', {}).items())), doc['variant'])
    recorded = doc.get('entries')
    if recorded is not None:
        rebuilt = family_to_json(family)['entries']
        for i, (a, b) in enumerate(zip(recorded, rebuilt)):
            _expect(a == b, "recorded seed differs from the rebuilt one",
                    '/entries/{i}'.format(i=i))
    return family


# certificates

def certificate_to_json(cert):
    if isinstance(cert, MembershipCertificate):
        return {
            'type': 'membership',
            'label': cert.label,
            'knot': None if cert.knot is None else expr_to_json(cert.knot),
            'grope_heights': None if cert.grope_heights is None
            else level_to_json(cert.grope_heights),
            'whitney_heights': None if cert.whitney_heights is None
            else level_to_json(cert.whitney_heights),
            'solvable_heights': None if cert.solvable_heights is None
            else level_to_json(cert.solvable_heights),
            'hypotheses': dict(cert.hypotheses),
            'chain': list(cert.chain),
            'product_audit': [list(a) for a in cert.product_audit],
        }
    return {
        'type': 'nonmembership',
        'label': cert.label,
        'combination': list(cert.combination),
        'leading_index': cert.leading_index,
        'prime': cert.prime,
        'signature_sum': cert.signature_sum,
        'threshold': fraction_to_json(cert.threshold),
        'margin': fraction_to_json(cert.margin),
        'excluded_levels': [level_to_json(lev) for lev in cert.excluded_levels],
        'filtration': 'F',
        'mirrored': cert.mirrored,
        'earlier_sums': list(cert.earlier_sums),
    }


def certificate_from_json(doc, catalog=None):
    _expect(isinstance(doc, dict), "certificate must be an object", '')
    kind = doc.get('type')
    if kind == 'membership':
        knot = None
        if doc.get('knot') is not None:
            knot = expr_from_json(doc['knot'], catalog if catalog is not None
                                  else load_catalog(), '/knot')

        def lev(key):
            return None if doc.get(key) is None else level_from_json(doc[key], '/' + key)

        return MembershipCertificate(
            doc['label'], knot, lev('grope_heights'), lev('whitney_heights'),
            lev('solvable_heights'), tuple(sorted(doc.get('hypotheses', {}).items())),
            tuple(doc.get('chain', ())), tuple(tuple(a) for a in doc.get('product_audit', ())))
    if kind == 'nonmembership':
        return NonMembershipCertificate(
            doc['label'], tuple(doc['combination']), doc['leading_index'], doc['prime'],
            doc['signature_sum'], fraction_from_json(doc['threshold'], '/threshold'),
            fraction_from_json(doc['margin'], '/margin'),
            tuple(level_from_json(x, '/excluded_levels/{i}'.format(i=i))
                  for i, x in enumerate(doc['excluded_levels'])),
            doc.get('mirrored', False), tuple(doc.get('earlier_sums', ())))
    raise CatalogError("unknown certificate type {k}".format(k=kind), pointer='/type')


def save_certificate(cert, path):
    with open(path, 'w') as fp:
        fp.write(canonical_json(certificate_to_json(cert)) + '\n')
    return path


def load_certificate(path, catalog=None):
    return certificate_from_json(_read_json(path), catalog)


# gropes

def grope_to_json(node):
    if isinstance(node, Cap):
        return {'cap': {'label': node.label, 'intersections': list(node.intersections),
                        'strands': node.strands}}
    return {'label': node.label, 'boundary_components': node.boundary_components,
            'pairs': [[grope_to_json(b) for b in pair] for pair in node.pairs],
            'body_intersections': list(node.body_intersections)}


def _grope_node(doc, ptr):
    _expect(isinstance(doc, dict), "grope node must be an object", ptr)
    if 'cap' in doc:
        cap = doc['cap']
        return Cap(cap['label'], tuple(cap.get('intersections', ())), cap.get('strands', 0))
    _expect('label' in doc, "surface needs a label", ptr)
    pairs = []
    for i, pair in enumerate(doc.get('pairs', [])):
        _expect(isinstance(pair, list) and len(pair) == 2, "a dual pair has two branches",
                '{p}/pairs/{i}'.format(p=ptr, i=i))
        pairs.append(tuple(_grope_node(b, '{p}/pairs/{i}/{s}'.format(p=ptr, i=i, s=s))
                           for s, b in enumerate(pair)))
    try:
        return GropeTree(doc['label'], tuple(pairs), doc.get('boundary_components', 1),
                         tuple(doc.get('body_intersections', ())))
    except ValueError as e:
        raise CatalogError(str(e), pointer=ptr) from e


def grope_from_json(doc, ptr=''):
    """decode a grope tree and check its labels, references and subgrope genera"""
    G = _grope_node(doc, ptr)
    try:
        return validate_grope(G)
    except PreconditionError as e:
        raise CatalogError(str(e), pointer=ptr) from e
