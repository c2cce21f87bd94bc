''' Testing module for gropetower.interfaces.certificates '''
import json

import pandas as pd
import pytest

from ..certificates import (
    BifiltrationReport, CertifyExclusion, CertifyMembership, GenerateFamily,
)


def test_generate_family(tmpdir, monkeypatch, catalog_file):
    monkeypatch.chdir(str(tmpdir))
    gen = GenerateFamily(m=3, n=3, count=2, c0='3', A=2, catalog_files=[str(catalog_file)])
    res = gen.run()

    with open(res.outputs.family_file) as fp:
        doc = json.load(fp)
    assert doc['type'] == 'family'
    assert doc['count'] == 2
    assert doc['inputs'] == [{'knot': '6_1', 'axis': 'eta'}]
    assert doc['pattern'] == '9_46'
    assert doc['seed_flags'] == {'arf_zero': True, 'grope_height2': True}
    assert [e['twist_high'] for e in doc['entries']] == [3, 32]


def test_generate_slice_family(tmpdir, monkeypatch):
    monkeypatch.chdir(str(tmpdir))
    res = GenerateFamily(m=2, n=2, count=1, c0='1/2', variant='slice').run()

    with open(res.outputs.family_file) as fp:
        doc = json.load(fp)
    assert doc['variant'] == 'slice'
    assert doc['c0'] == {'num': 1, 'den': 2}


def test_certify_membership(tmpdir, monkeypatch, family_file):
    monkeypatch.chdir(str(tmpdir))
    res = CertifyMembership(family_file=str(family_file), index=2).run()

    with open(res.outputs.certificate_file) as fp:
        doc = json.load(fp)
    assert doc['type'] == 'membership'
    assert doc['label'] == 'J_{3,3}^2'
    assert doc['solvable_heights'] == [{'num': 3, 'den': 1}, {'num': 3, 'den': 1}]


def test_certify_membership_index(tmpdir, monkeypatch, family_file):
    monkeypatch.chdir(str(tmpdir))
    with pytest.raises(ValueError, match="outside the family"):
        CertifyMembership(family_file=str(family_file), index=6).run()


def test_certify_exclusion(tmpdir, monkeypatch, family_file):
    monkeypatch.chdir(str(tmpdir))
    res = CertifyExclusion(family_file=str(family_file), coefficients=[0, 1, 1]).run()

    assert res.outputs.outcome == 'certified'
    with open(res.outputs.certificate_file) as fp:
        doc = json.load(fp)
    assert doc['leading_index'] == 2
    assert doc['prime'] == 11
    assert doc['margin'] == {'num': 4, 'den': 1}


def test_certify_exclusion_without_margin(tmpdir, monkeypatch, weak_family_file):
    monkeypatch.chdir(str(tmpdir))
    res = CertifyExclusion(family_file=str(weak_family_file), coefficients=[1]).run()

    assert res.outputs.outcome == 'no_certificate'
    with open(res.outputs.certificate_file) as fp:
        doc = json.load(fp)
    assert doc['type'] == 'no_certificate'
    assert doc['combination'] == [1]
    assert 'not positive' in doc['reason']


def test_bifiltration_report(tmpdir, monkeypatch, family_file, weak_family_file):
    monkeypatch.chdir(str(tmpdir))
    member = CertifyMembership(family_file=str(family_file), index=1).run()
    monkeypatch.chdir(str(tmpdir.mkdir('exclusion')))
    excluded = CertifyExclusion(family_file=str(family_file), coefficients=[1]).run()
    monkeypatch.chdir(str(tmpdir.mkdir('weak')))
    weak = CertifyExclusion(family_file=str(weak_family_file), coefficients=[1]).run()
    monkeypatch.chdir(str(tmpdir.mkdir('report')))

    res = BifiltrationReport(certificate_files=[
        member.outputs.certificate_file,
        excluded.outputs.certificate_file,
        weak.outputs.certificate_file,
    ]).run()

    report = pd.read_csv(res.outputs.report_file, sep='\t', index_col=[0, 1])
    assert report.loc[('J_{3,3}^1', 'F'), '(3, 3)'] == 'in'
    assert report.loc[('J_{3,3}^1', 'F'), '(3.5, 3)'] == 'out'
    assert len(report) == 3
