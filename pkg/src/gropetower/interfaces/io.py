#!/usr/bin/env python
# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
import os
from shutil import copy
from nipype.interfaces.base import (
    traits, isdefined, TraitedSpec, BaseInterfaceInputSpec,
    File, SimpleInterface
)


class CertificateSinkInputSpec(BaseInterfaceInputSpec):
    base_directory = traits.Directory(
        desc='Path to the base directory for storing certificates.')
    in_file = File(exists=True, mandatory=True)
    prefix = traits.Str('', usedefault=True, desc='prepended to the output name')


class CertificateSinkOutputSpec(TraitedSpec):
    out_file = File(exists=True, desc='written file path')


class CertificateSink(SimpleInterface):
    """
    Copy a certificate, report or family file into the output directory,
    naming it after its label (json) or its own name (anything else).
    """

    input_spec = CertificateSinkInputSpec
    output_spec = CertificateSinkOutputSpec
    out_path_base = "gropetower"
    _always_run = True

    def __init__(self, out_path_base=None, **inputs):
        super(CertificateSink, self).__init__(**inputs)
        self._results['out_file'] = []
        if out_path_base:
            self.out_path_base = out_path_base

    def _run_interface(self, runtime):
        import json
        import os.path as op

        name = op.basename(self.inputs.in_file)
        if name.endswith('.json'):
            with open(self.inputs.in_file) as fp:
                doc = json.load(fp)
            name = certificate_name(doc)

        base_directory = runtime.cwd
        if isdefined(self.inputs.base_directory):
            base_directory = os.path.abspath(self.inputs.base_directory)

        out_path = op.join(base_directory, self.out_path_base, self.inputs.prefix + name)

        os.makedirs(op.dirname(out_path), exist_ok=True)

        # copy the file to the output directory
        copy(self.inputs.in_file, out_path)

        self._results['out_file'] = out_path

        return runtime


def certificate_name(doc):
    """file name for a JSON document: type plus its combination or label"""
    kind = doc.get('type', 'document')
    if 'combination' in doc:
        tag = 'a-' + '_'.join(str(a) for a in doc['combination'])
    elif 'label' in doc:
        tag = ''.join(c if c.isalnum() else '-' for c in doc['label']).strip('-')
    else:
        tag = 'm{m}-n{n}'.format(m=doc.get('m'), n=doc.get('n'))
    return '{kind}_{tag}.json'.format(kind=kind, tag=tag)
