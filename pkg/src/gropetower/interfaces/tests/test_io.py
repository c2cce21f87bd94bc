''' Testing module for gropetower.interfaces.io '''
import json
import os

import pytest

from ..io import CertificateSink, certificate_name


@pytest.fixture(scope='session')
def sink_dir(tmpdir_factory):
    return tmpdir_factory.mktemp('sink')


@pytest.fixture(scope='session')
def exclusion_doc(sink_dir):
    doc = sink_dir.join('exclusion.json')
    doc.write(json.dumps({'type': 'nonmembership', 'label': 'J_{3,3}^1',
                          'combination': [1, 0, 2]}))
    return doc


@pytest.fixture(scope='session')
def report_tsv(sink_dir):
    return sink_dir.ensure('bifiltration.tsv')


@pytest.mark.parametrize("doc,name", [
    ({'type': 'membership', 'label': 'J_{3,3}^1'}, 'membership_J--3-3--1.json'),
    ({'type': 'nonmembership', 'label': 'J_{3,3}^1', 'combination': [1, 0]},
     'nonmembership_a-1_0.json'),
    ({'type': 'no_certificate', 'combination': [-1, 2]}, 'no_certificate_a--1_2.json'),
    ({'type': 'family', 'm': 3, 'n': 4}, 'family_m3-n4.json'),
])
def test_certificate_name(doc, name):
    assert certificate_name(doc) == name


def test_certificate_sink_json(sink_dir, exclusion_doc):

    expected_out = os.path.join(str(sink_dir), 'gropetower', 'nonmembership_a-1_0_2.json')

    sink = CertificateSink(base_directory=str(sink_dir), in_file=str(exclusion_doc))
    res = sink.run()

    assert res.outputs.out_file == expected_out
    with open(expected_out) as fp:
        assert json.load(fp)['combination'] == [1, 0, 2]


def test_certificate_sink_other(sink_dir, report_tsv):

    expected_out = os.path.join(str(sink_dir), 'results', 'run1_bifiltration.tsv')

    sink = CertificateSink(base_directory=str(sink_dir), in_file=str(report_tsv),
                           prefix='run1_', out_path_base='results')
    res = sink.run()

    assert res.outputs.out_file == expected_out
