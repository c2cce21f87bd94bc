import json
from fractions import Fraction

import pkg_resources
import pytest
import os.path as op

from gropetower.invariants.families import build_family
from gropetower.invariants.gropes import model_grope
from gropetower.invariants.obstructions import c_K
from gropetower.workflows.utils import canonical_json
from gropetower.workflows.utils import family_to_json
from gropetower.workflows.utils import grope_to_json
from gropetower.workflows.utils import load_catalog

# the embedded catalog, read the way the package reads it
catalog_cfg = pkg_resources.resource_string("gropetower", op.join("data", "catalog.json"))
embedded_doc = json.loads(catalog_cfg.decode('utf-8'))

seed_flags = (('arf_zero', True), ('grope_height2', True))

# a knot outside the embedded catalog
extra_knot = {
    "name": "5_2",
    "seifert": [[-1, 1], [0, -2]],
    "crossings": 5,
    "arf": 0,
}


@pytest.fixture
def catalog_doc():
    return json.loads(json.dumps(embedded_doc))


@pytest.fixture(scope='session')
def catalog():
    return load_catalog()


@pytest.fixture(scope='session')
def family_3_3(catalog):
    return build_family(3, 3, 5, Fraction(2 * c_K(6)), 2,
                        [(catalog['6_1'], 'eta')], catalog['9_46'], seed_flags)


@pytest.fixture(scope='session')
def weak_family(catalog):
    return build_family(3, 3, 3, Fraction(3), 2,
                        [(catalog['6_1'], 'eta')], catalog['9_46'], seed_flags)


@pytest.fixture(scope='session')
def base_dir(tmpdir_factory):
    return tmpdir_factory.mktemp('gropetower')


@pytest.fixture(scope='session')
def family_file(base_dir, family_3_3):
    family_file = base_dir.join('family.json')
    family_file.write(canonical_json(family_to_json(family_3_3)) + '\n')
    return family_file


@pytest.fixture(scope='session')
def weak_family_file(base_dir, weak_family):
    family_file = base_dir.join('weak_family.json')
    family_file.write(canonical_json(family_to_json(weak_family)) + '\n')
    return family_file


@pytest.fixture(scope='session')
def catalog_file(tmpdir_factory):
    catalog_file = tmpdir_factory.mktemp('catalog').join('extra.json')
    catalog_file.write(json.dumps({"version": 1, "knots": [extra_knot]}))
    return catalog_file


@pytest.fixture(scope='session')
def knot_file(tmpdir_factory):
    knot_file = tmpdir_factory.mktemp('knot').join('5_2.json')
    knot_file.write(json.dumps(extra_knot))
    return knot_file


@pytest.fixture(scope='session')
def grope_file(tmpdir_factory):
    grope_file = tmpdir_factory.mktemp('grope').join('grope.json')
    G = model_grope(2, cap_strands=1)
    grope_file.write(canonical_json({'kind': 'pushed_3d_satellite',
                                     'grope': grope_to_json(G)}))
    return grope_file
