#!/usr/bin/env python
# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""
gropetower batch certificate workflows
"""
import os

from nipype.pipeline import engine as pe
from nipype.interfaces import utility as niu

from nipype import __version__ as nipype_ver
from sympy import __version__ as sympy_ver

from .. import __version__
from ..interfaces.certificates import BifiltrationReport
from ..interfaces.certificates import CertifyExclusion
from ..interfaces.certificates import CertifyMembership
from ..interfaces.certificates import GenerateFamily
from ..interfaces.io import CertificateSink


def init_certify_wf(family_file, indices, combinations, output_dir, work_dir,
                    catalog_files=None, family_params=None, name='gropetower_certify_wf'):
    """
    Certify membership of every listed family member and exclusion of every
    listed combination, then tabulate all certificates in one grid.

    .. workflow::
        :graph2use: orig
        :simple_form: yes

        from gropetower.workflows.base import init_certify_wf
        wf = init_certify_wf(
            family_file='family.json',
            indices=[1, 2],
            combinations=[[1, 0], [0, 1], [1, 1]],
            output_dir='.',
            work_dir='.')

    Parameters
    ----------

        family_file : str
            path to a family document written by ``gtow family generate``
        indices : list
            member indices (starting at 1) to certify membership for
        combinations : list
            coefficient lists to certify exclusion for
        output_dir : str
            directory where certificates and the report are saved
        work_dir : str
            directory in which to store workflow execution state
        catalog_files : list or None
            extra catalog files
        family_params : dict or None
            inputs of :class:`~gropetower.interfaces.certificates.GenerateFamily`;
            when given, the family is generated inside the workflow and
            ``family_file`` may be None
        name : str
            name of the workflow (default: ``gropetower_certify_wf``)

    Outputs
    -------

        certificate_files
            sorted certificate documents: memberships, then exclusions
        report_file
            bifiltration grid (tsv)
    """
    workflow = pe.Workflow(name=name)
    workflow.base_dir = os.path.join(work_dir, 'gropetower_work')
    os.makedirs(workflow.base_dir, exist_ok=True)

    workflow.__desc__ = """
Certificates were produced with *gropetower* {ver} using exact arithmetic
from *SymPy* {sympy_ver}, scheduled with *Nipype* {nipype_ver}.
""".format(ver=__version__, sympy_ver=sympy_ver, nipype_ver=nipype_ver)

    catalog_files = list(catalog_files or [])

    input_node = pe.Node(niu.IdentityInterface(fields=['family_file']),
                         name='input_node')
    if family_params is not None:
        generate = pe.Node(GenerateFamily(catalog_files=catalog_files, **family_params),
                           name='generate_family')
        ds_family = pe.Node(CertificateSink(base_directory=output_dir), name='ds_family')
        workflow.connect([
            (generate, input_node, [('family_file', 'family_file')]),
            (generate, ds_family, [('family_file', 'in_file')]),
        ])
    elif family_file is not None:
        input_node.inputs.family_file = os.path.abspath(family_file)
    else:
        raise ValueError("give a family_file or family_params")

    output_node = pe.Node(niu.IdentityInterface(fields=['certificate_files', 'report_file']),
                          name='output_node')

    if not indices and not combinations:
        raise ValueError("nothing to certify: no indices and no combinations")

    merge = pe.Node(niu.Function(function=_merge_certificates,
                                 output_names=['certificate_files']),
                    name='merge_certificates')
    merge.inputs.members = []
    merge.inputs.exclusions = []

    if indices:
        member = pe.MapNode(CertifyMembership(catalog_files=catalog_files),
                            iterfield=['index'], name='certify_membership')
        member.inputs.index = list(indices)
        workflow.connect([
            (input_node, member, [('family_file', 'family_file')]),
            (member, merge, [('certificate_file', 'members')]),
        ])

    if combinations:
        exclude = pe.MapNode(CertifyExclusion(catalog_files=catalog_files),
                             iterfield=['coefficients'], name='certify_exclusion')
        exclude.inputs.coefficients = [list(c) for c in combinations]
        workflow.connect([
            (input_node, exclude, [('family_file', 'family_file')]),
            (exclude, merge, [('certificate_file', 'exclusions')]),
        ])

    report = pe.Node(BifiltrationReport(catalog_files=catalog_files), name='report')

    ds_certificates = pe.MapNode(CertificateSink(base_directory=output_dir),
                                 iterfield=['in_file'], name='ds_certificates')
    ds_report = pe.Node(CertificateSink(base_directory=output_dir), name='ds_report')

    workflow.connect([
        (merge, report, [('certificate_files', 'certificate_files')]),
        (merge, ds_certificates, [('certificate_files', 'in_file')]),
        (report, ds_report, [('report_file', 'in_file')]),
        (ds_certificates, output_node, [('out_file', 'certificate_files')]),
        (ds_report, output_node, [('out_file', 'report_file')]),
    ])

    return workflow


def _merge_certificates(members, exclusions):
    """memberships first, then exclusions, each in request order"""
    if not isinstance(members, list):
        members = [members] if members else []
    if not isinstance(exclusions, list):
        exclusions = [exclusions] if exclusions else []
    return list(members) + list(exclusions)
