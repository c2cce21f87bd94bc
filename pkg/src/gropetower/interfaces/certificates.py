#!/usr/bin/env python
# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
"""
Nipype interfaces around the family and certificate layer.  Nodes pass
JSON documents to each other by file name.
"""
from nipype.interfaces.base import (
    BaseInterfaceInputSpec, TraitedSpec,
    File, SimpleInterface, traits,
    )


class GenerateFamilyInputSpec(BaseInterfaceInputSpec):
    m = traits.Int(mandatory=True, desc='upper height parameter')
    n = traits.Int(mandatory=True, desc='lower height parameter')
    count = traits.Int(mandatory=True, desc='number of family members')
    c0 = traits.Str(mandatory=True, desc='the constant C0 as an integer or p/q')
    A = traits.Int(0, usedefault=True, desc='lower bound for the first prime')
    knot = traits.Str('6_1', usedefault=True, desc='catalog name of the K_k')
    axis = traits.Str('eta', usedefault=True, desc='infection curve in K_k')
    pattern = traits.Str('9_46', usedefault=True, desc='catalog name of the pattern')
    variant = traits.Enum('bi', 'slice', usedefault=True, desc='family variant')
    seed_flags = traits.List(traits.Str, ['grope_height2', 'arf_zero'], usedefault=True,
                             desc='hypotheses asserted for every seed J_0^i')
    catalog_files = traits.List(File(exists=True), desc='extra catalog files')


class GenerateFamilyOutputSpec(TraitedSpec):
    family_file = File(exists=True, desc='family document (json)')


class GenerateFamily(SimpleInterface):
    """build the seeds and members of a family and write its document"""

    input_spec = GenerateFamilyInputSpec
    output_spec = GenerateFamilyOutputSpec

    def _run_interface(self, runtime):
        import os
        from fractions import Fraction
        from gropetower.invariants.families import build_family
        from gropetower.workflows.utils import canonical_json
        from gropetower.workflows.utils import family_to_json
        from gropetower.workflows.utils import load_catalog
        from gropetower.workflows.utils import lookup

        catalog = load_catalog(self.inputs.catalog_files or ())
        family = build_family(self.inputs.m, self.inputs.n, self.inputs.count,
                              Fraction(self.inputs.c0), self.inputs.A,
                              [(lookup(catalog, self.inputs.knot), self.inputs.axis)],
                              lookup(catalog, self.inputs.pattern),
                              tuple((f, True) for f in sorted(self.inputs.seed_flags)),
                              self.inputs.variant)
        out = os.path.join(runtime.cwd, 'family.json')
        with open(out, 'w') as fp:
            fp.write(canonical_json(family_to_json(family)) + '\n')

        self._results['family_file'] = out

        return runtime


class CertifyMembershipInputSpec(BaseInterfaceInputSpec):
    family_file = File(exists=True, mandatory=True, desc='family document (json)')
    index = traits.Int(mandatory=True, desc='member index, starting at 1')
    catalog_files = traits.List(File(exists=True), desc='extra catalog files')


class CertifyMembershipOutputSpec(TraitedSpec):
    certificate_file = File(exists=True, desc='membership certificate (json)')


class CertifyMembership(SimpleInterface):
    input_spec = CertifyMembershipInputSpec
    output_spec = CertifyMembershipOutputSpec

    def _run_interface(self, runtime):
        import json
        import os
        from gropetower.invariants.obstructions import certify_membership
        from gropetower.workflows.utils import family_from_json
        from gropetower.workflows.utils import load_catalog
        from gropetower.workflows.utils import save_certificate

        catalog = load_catalog(self.inputs.catalog_files or ())
        with open(self.inputs.family_file) as fp:
            family = family_from_json(json.load(fp), catalog)
        if not 1 <= self.inputs.index <= len(family):
            msg = "index {i} outside the family of {n}".format(i=self.inputs.index,
                                                              n=len(family))
            raise ValueError(msg)
        k = self.inputs.index - 1
        cert = certify_membership(family.specs[k], family.members[k])
        out = os.path.join(runtime.cwd, 'membership.json')

        self._results['certificate_file'] = save_certificate(cert, out)

        return runtime


class CertifyExclusionInputSpec(BaseInterfaceInputSpec):
    family_file = File(exists=True, mandatory=True, desc='family document (json)')
    coefficients = traits.List(traits.Int, mandatory=True,
                               desc='coefficients a_1, a_2, ... of the combination')
    catalog_files = traits.List(File(exists=True), desc='extra catalog files')


class CertifyExclusionOutputSpec(TraitedSpec):
    certificate_file = File(exists=True, desc='exclusion certificate or outcome (json)')
    outcome = traits.Enum('certified', 'no_certificate', desc='what was established')


class CertifyExclusion(SimpleInterface):
    """
    Exclusion certificate for one combination.  A combination whose margin
    is not positive yields a ``no_certificate`` record instead of failing
    the node.
    """

    input_spec = CertifyExclusionInputSpec
    output_spec = CertifyExclusionOutputSpec

    def _run_interface(self, runtime):
        import json
        import os
        from gropetower.invariants.exceptions import NoCertificate
        from gropetower.invariants.obstructions import certify_nonmembership
        from gropetower.workflows.utils import canonical_json
        from gropetower.workflows.utils import family_from_json
        from gropetower.workflows.utils import fraction_to_json
        from gropetower.workflows.utils import load_catalog
        from gropetower.workflows.utils import save_certificate

        catalog = load_catalog(self.inputs.catalog_files or ())
        with open(self.inputs.family_file) as fp:
            family = family_from_json(json.load(fp), catalog)
        out = os.path.join(runtime.cwd, 'exclusion.json')
        try:
            cert = certify_nonmembership(family, self.inputs.coefficients)
        except NoCertificate as e:
            with open(out, 'w') as fp:
                fp.write(canonical_json({'type': 'no_certificate',
                                         'combination': list(self.inputs.coefficients),
                                         'margin': fraction_to_json(e.margin),
                                         'reason': str(e)}) + '\n')
            self._results['outcome'] = 'no_certificate'
        else:
            save_certificate(cert, out)
            self._results['outcome'] = 'certified'

        self._results['certificate_file'] = out

        return runtime


class BifiltrationReportInputSpec(BaseInterfaceInputSpec):
    certificate_files = traits.List(File(exists=True), mandatory=True,
                                    desc='certificate documents (json)')
    catalog_files = traits.List(File(exists=True), desc='extra catalog files')


class BifiltrationReportOutputSpec(TraitedSpec):
    report_file = File(exists=True, desc='membership grid (tsv)')


class BifiltrationReport(SimpleInterface):
    input_spec = BifiltrationReportInputSpec
    output_spec = BifiltrationReportOutputSpec

    def _run_interface(self, runtime):
        import json
        import os
        from gropetower.invariants.obstructions import bifiltration_report
        from gropetower.workflows.utils import certificate_from_json
        from gropetower.workflows.utils import load_catalog

        catalog = load_catalog(self.inputs.catalog_files or ())
        certs = []
        for path in self.inputs.certificate_files:
            with open(path) as fp:
                doc = json.load(fp)
            if doc.get('type') == 'no_certificate':
                continue
            certs.append(certificate_from_json(doc, catalog))
        out = os.path.join(runtime.cwd, 'bifiltration.tsv')
        bifiltration_report(certs).to_csv(out, sep='\t')

        self._results['report_file'] = out

        return runtime
