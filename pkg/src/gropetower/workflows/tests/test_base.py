import json
import os.path as op

from nipype import config as ncfg
import pandas as pd
import pytest

from ..base import init_certify_wf, _merge_certificates


def _configure(work_dir):
    ncfg.update_config({
        'logging': {'log_directory': work_dir,
                    'log_to_file': True},
        'execution': {'crashdump_dir': work_dir,
                      'crashfile_format': 'txt',
                      'parameterize_dirs': False},
    })


@pytest.mark.parametrize(
    "indices,combinations,expected",
    [
        ([1], [[1], [0, 1]], ['membership_J--3-3--1.json',
                              'nonmembership_a-1_0_0_0_0.json',
                              'nonmembership_a-0_1_0_0_0.json']),
        ([], [[1, 1]], ['nonmembership_a-1_1_0_0_0.json']),
        ([2, 3], [], ['membership_J--3-3--2.json', 'membership_J--3-3--3.json']),
    ]
)
def test_valid_init_certify_wf(base_dir, family_file, indices, combinations, expected):
    output_dir = op.join(str(base_dir), 'out')
    work_dir = op.join(str(base_dir), 'work')
    _configure(work_dir)

    test_wf = init_certify_wf(
        family_file=str(family_file),
        indices=indices,
        combinations=combinations,
        output_dir=output_dir,
        work_dir=work_dir,
        name='certify_{n}'.format(n=len(expected)))

    assert test_wf.run(plugin='Linear')

    for name in expected:
        assert op.isfile(op.join(output_dir, 'gropetower', name))
    report = pd.read_csv(op.join(output_dir, 'gropetower', 'bifiltration.tsv'),
                         sep='\t', index_col=[0, 1])
    assert list(report.index.names) == ['knot', 'filtration']


def test_weak_family_records_no_certificate(base_dir, weak_family_file):
    output_dir = op.join(str(base_dir), 'weak_out')
    work_dir = op.join(str(base_dir), 'weak_work')
    _configure(work_dir)

    test_wf = init_certify_wf(
        family_file=str(weak_family_file),
        indices=[1],
        combinations=[[1]],
        output_dir=output_dir,
        work_dir=work_dir)

    assert test_wf.run(plugin='Linear')

    with open(op.join(output_dir, 'gropetower', 'no_certificate_a-1.json')) as fp:
        doc = json.load(fp)
    assert doc['type'] == 'no_certificate'
    assert doc['margin'] == {'num': 4 - 836559360, 'den': 1}


def test_generated_family_is_certified(base_dir):
    output_dir = op.join(str(base_dir), 'generated_out')
    work_dir = op.join(str(base_dir), 'generated_work')
    _configure(work_dir)

    test_wf = init_certify_wf(
        family_file=None,
        indices=[1],
        combinations=[[1]],
        output_dir=output_dir,
        work_dir=work_dir,
        family_params={'m': 3, 'n': 3, 'count': 2, 'c0': '3', 'A': 2},
        name='certify_generated')

    assert test_wf.run(plugin='Linear')

    with open(op.join(output_dir, 'gropetower', 'family_m3-n3.json')) as fp:
        family = json.load(fp)
    assert [e['prime'] for e in family['entries']] == [7, 11]
    assert op.isfile(op.join(output_dir, 'gropetower', 'membership_J--3-3--1.json'))
    assert op.isfile(op.join(output_dir, 'gropetower', 'no_certificate_a-1.json'))


def test_family_is_required(base_dir):
    with pytest.raises(ValueError, match="family_file or family_params"):
        init_certify_wf(family_file=None, indices=[1], combinations=[],
                        output_dir=str(base_dir), work_dir=str(base_dir))


def test_nothing_to_certify(base_dir, family_file):
    with pytest.raises(ValueError, match="nothing to certify"):
        init_certify_wf(family_file=str(family_file), indices=[], combinations=[],
                        output_dir=str(base_dir), work_dir=str(base_dir))


@pytest.mark.parametrize("members,exclusions,expected", [
    (['a.json'], ['b.json'], ['a.json', 'b.json']),
    ('a.json', [], ['a.json']),
    ([], None, []),
])
def test_merge_certificates(members, exclusions, expected):
    assert _merge_certificates(members, exclusions) == expected
