#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
The ``gtow`` command line app.

Single-knot queries (``knot``, ``cover``, ``grope``, ``schedule``) run in
process; ``family generate`` writes a family file and ``certify`` runs the
certification workflow through nipype.
"""
from __future__ import absolute_import
import os
import sys
import json
import argparse
from argparse import RawTextHelpFormatter
from fractions import Fraction
from glob import glob
from itertools import product
from multiprocessing import cpu_count
from nipype import config as ncfg
import logging

import pandas as pd

logger = logging.getLogger('cli')

EXIT_OK = 0
EXIT_PRECONDITION = 1
EXIT_PRECISION = 2
EXIT_INTERNAL = 3


def get_parser():
    """Build parser object"""
    from ..__init__ import __version__

    verstr = 'gtow v{}'.format(__version__)

    parser = argparse.ArgumentParser(description='gropetower: exact knot invariants, '
                                     'grope calculus and bi-filtration certificates',
                                     formatter_class=RawTextHelpFormatter)
    parser.add_argument('--version', action='version', version=verstr)

    # options shared by every subcommand
    common = argparse.ArgumentParser(add_help=False)
    out_opts = common.add_argument_group('Output options')
    out_opts.add_argument('--json', action='store_true', default=False,
                          help='print canonical JSON instead of tables')
    out_opts.add_argument('--out', action='store', default=None,
                          help='file (family generate) or directory (certify) '
                               'where results are written')
    out_opts.add_argument('--catalog', action='append', default=[], metavar='FILE',
                          help='extra knot catalog file, merged with the embedded one; '
                               'may be given more than once')
    out_opts.add_argument('-v', '--verbose', action='count', default=0,
                          help='increase log verbosity (-v info, -vv debug)')

    sub = parser.add_subparsers(dest='command', metavar='command')
    sub.required = True

    # knot
    knot = sub.add_parser('knot', help='invariants of a catalog knot')
    knot_sub = knot.add_subparsers(dest='knot_command', metavar='knot_command')
    knot_sub.required = True
    info = knot_sub.add_parser('info', parents=[common], formatter_class=RawTextHelpFormatter,
                               help='Seifert matrix, Alexander polynomial, Arf invariant '
                                    'and signature jumps')
    info.add_argument('knot', help='catalog name or path to a single-knot JSON file')
    signature = knot_sub.add_parser('signature', parents=[common],
                                    formatter_class=RawTextHelpFormatter,
                                    help='Levine-Tristram signature at roots of unity')
    signature.add_argument('knot', help='catalog name or path to a single-knot JSON file')
    signature.add_argument('--turns', nargs='+', default=None, metavar='R/P',
                           help='angles 2*pi*r/p to evaluate at')
    signature.add_argument('--samples', type=int, default=None, metavar='P',
                           help='evaluate at every 2*pi*r/p with 0 <= r <= p/2')
    signature.add_argument('--csv', action='store_true', default=False,
                           help='write the samples as CSV')

    # cover
    cover = sub.add_parser('cover', parents=[common], formatter_class=RawTextHelpFormatter,
                           help='homology of the n-fold branched cyclic cover')
    cover.add_argument('knot', help='catalog name or path to a single-knot JSON file')
    cover.add_argument('--n', type=int, default=2, help='order of the cover (default: 2)')
    cover.add_argument('--linking', action='store_true', default=False,
                       help='print the linking form (n = 2 only)')
    cover.add_argument('--metabolizers', action='store_true', default=False,
                       help='list the metabolizers of the linking form (n = 2 only)')
    cover.add_argument('--gl', nargs=3, type=int, default=None, metavar=('Q', 'SIGMA', 'BETA'),
                       help='check |SIGMA| + |d - 1 - BETA| <= d with d half the\n'
                            'Z/Q-dimension of the cover homology; SIGMA and BETA\n'
                            'are supplied by the caller')

    # family
    family = sub.add_parser('family', help='the J_{m,n} families')
    family_sub = family.add_subparsers(dest='family_command', metavar='family_command')
    family_sub.required = True
    generate = family_sub.add_parser('generate', parents=[common],
                                     formatter_class=RawTextHelpFormatter,
                                     help='build a family and write its document')
    generate.add_argument('--m', type=int, required=True, help='first height parameter')
    generate.add_argument('--n', type=int, required=True, help='second height parameter')
    generate.add_argument('--count', type=int, required=True, help='number of members')
    generate.add_argument('--c0', required=True,
                          help='the constant C0, an integer or a fraction p/q')
    generate.add_argument('--A', type=int, default=0, dest='A',
                          help='lower bound for the first prime (default: 0)')
    generate.add_argument('--knot', default='6_1',
                          help='catalog knot used for every K_k (default: 6_1)')
    generate.add_argument('--axis', default='eta',
                          help='infection curve in K_k (default: eta)')
    generate.add_argument('--pattern', default='9_46',
                          help='catalog knot used as the pattern R (default: 9_46)')
    generate.add_argument('--variant', choices=['bi', 'slice'], default='bi',
                          help='bi: J_{m,n}; slice: J_m (requires m = n)')

    # certify
    certify = sub.add_parser('certify', parents=[common], formatter_class=RawTextHelpFormatter,
                             help='membership and exclusion certificates for a family')
    certify.add_argument('mode', choices=['member', 'exclude'])
    certify.add_argument('family_file', help='document written by `gtow family generate`')
    certify.add_argument('--index', type=int, nargs='+', default=None,
                         help='member indices to certify (default: all)')
    certify.add_argument('--coeffs', action='append', default=None, metavar='A1,A2,...',
                         help='coefficients of a combination; may be given more than once '
                              '(default: every nonzero 0/1 combination)')
    g_perfm = certify.add_argument_group('Options to handle performance')
    g_perfm.add_argument('--nthreads', '-n-cpus', action='store', type=int,
                         help='maximum number of threads across all processes')
    g_perfm.add_argument('--use-plugin', action='store', default=None,
                         help='nipype plugin configuration file')
    g_perfm.add_argument('-w', '--work-dir', help='directory where temporary files '
                         'are stored (i.e. non-essential files). '
                         'This directory can be deleted once you are reasonably '
                         'certain gtow finished as expected.')

    # grope
    grope = sub.add_parser('grope', help='capped grope calculus')
    grope_sub = grope.add_subparsers(dest='grope_command', metavar='grope_command')
    grope_sub.required = True
    demo = grope_sub.add_parser('demo', parents=[common], formatter_class=RawTextHelpFormatter,
                                help='model grope and tower of a height, their '
                                     'transformations and schedule')
    demo.add_argument('--height', required=True, help='height, e.g. 3 or 2.5')
    demo.add_argument('--genus', type=int, default=1, help='base genus (default: 1)')
    demo.add_argument('--strands', type=int, default=1,
                      help='strands meeting each cap (default: 1)')

    # schedule
    schedule = sub.add_parser('schedule', parents=[common], formatter_class=RawTextHelpFormatter,
                              help='critical-level schedule of a pushed grope')
    schedule.add_argument('grope_file', help='grope JSON document')
    schedule.add_argument('--kind', default=None,
                          choices=['pushed_3d_satellite', 'pushed_3d_concordance'],
                          help='construction kind (default: from the file, else satellite)')
    schedule.add_argument('--csv', action='store_true', default=False,
                          help='write the schedule as CSV')

    return parser


def _emit(doc, table, opts):
    from ..workflows.utils import canonical_json

    if opts.json:
        print(canonical_json(doc))
    elif isinstance(table, pd.DataFrame):
        print(table.to_string(index=False))
    else:
        print(table)


def _resolve_knot(name, catalog):
    from ..workflows.utils import knot_from_file
    from ..workflows.utils import lookup

    if os.path.isfile(name):
        return knot_from_file(name)
    return lookup(catalog, name)


def _parse_turn(text):
    from ..invariants.angles import RationalTurn
    from ..invariants.exceptions import PreconditionError

    try:
        r, p = text.split('/')
        return RationalTurn(int(r), int(p))
    except ValueError:
        msg = "turn {t} is not of the form r/p".format(t=text)
        raise PreconditionError(msg) from None


def _knot_info(opts, catalog):
    from ..invariants.angles import RationalTurn
    from ..invariants.obstructions import c_K
    from ..invariants.seifert import alexander_polynomial
    from ..invariants.seifert import arf
    from ..invariants.seifert import signature_at
    from ..invariants.seifert import signature_function
    from ..workflows.utils import signature_to_json

    knot = _resolve_knot(opts.knot, catalog)
    V = knot.seifert
    sig = signature_function(V)
    doc = {
        'name': knot.name,
        'seifert': V.to_rows(),
        'genus': V.genus,
        'crossings': knot.crossing_number,
        'c_K': c_K(knot.crossing_number),
        'alexander': str(alexander_polynomial(V)),
        'arf': arf(V),
        'signature': signature_at(V, RationalTurn(1, 2)),
        'jumps': signature_to_json(sig),
        'hypotheses': dict(knot.hypotheses),
        'axes': list(knot.axes),
    }
    lines = ['{k:<12}{v}'.format(k=k, v=doc[k]) for k in
             ('name', 'seifert', 'genus', 'crossings', 'c_K', 'alexander', 'arf', 'signature')]
    lines += ['{k:<12}{a}: {d:+d}'.format(k='jump', a=a, d=d) for a, d in sig.jumps]
    if knot.hypotheses:
        lines.append('{k:<12}{v}'.format(
            k='hypotheses', v=', '.join(h for h, flag in knot.hypotheses if flag)))
    if knot.axes:
        lines.append('{k:<12}{v}'.format(k='axes', v=', '.join(knot.axes)))
    _emit(doc, '\n'.join(lines), opts)


def _knot_signature(opts, catalog):
    from ..invariants.exceptions import PreconditionError
    from ..invariants.seifert import sample_signature

    knot = _resolve_knot(opts.knot, catalog)
    if opts.turns:
        turns = [_parse_turn(t) for t in opts.turns]
        turns = [(a.r, a.p) for a in turns]
    elif opts.samples:
        if opts.samples < 1:
            raise PreconditionError("--samples needs p >= 1")
        turns = [(r, opts.samples) for r in range(opts.samples // 2 + 1)]
    else:
        raise PreconditionError("give --turns or --samples")
    frame = sample_signature(knot.seifert, turns)
    if opts.csv:
        frame.to_csv(sys.stdout, index=False)
        return
    doc = {'name': knot.name,
           'samples': [{k: (None if pd.isna(v) else (int(v) if k != 'turn' else v))
                        for k, v in row.items()} for row in frame.to_dict('records')]}
    _emit(doc, frame.fillna('jump'), opts)


def _cover(opts, catalog):
    from ..invariants.covers import GLInput
    from ..invariants.covers import branched_homology
    from ..invariants.covers import gl_inequality
    from ..invariants.covers import linking_form_2fold
    from ..invariants.covers import metabolizer_split
    from ..invariants.covers import resultant_order
    from ..invariants.exceptions import PreconditionError
    from ..workflows.utils import fraction_to_json

    knot = _resolve_knot(opts.knot, catalog)
    group = branched_homology(knot.seifert, opts.n)
    doc = {'name': knot.name, 'n': opts.n, 'homology': str(group),
           'invariant_factors': list(group.invariant_factors),
           'order': group.order, 'resultant_order': resultant_order(knot.seifert, opts.n)}
    lines = ['H_1(Sigma_{n}({k})) = {g}'.format(n=opts.n, k=knot.name, g=group)]
    if opts.gl:
        q, sigma, beta = opts.gl
        gl = GLInput.from_cover(group, q, sigma, beta)
        holds = gl_inequality(gl)
        doc['gl'] = {'q': q, 'sigma': gl.sigma_value, 'd': gl.d,
                     'beta1_bar': gl.beta1_bar, 'holds': holds}
        lines.append('GL inequality (q = {q}, d = {d}): {v}'.format(
            q=q, d=gl.d, v='holds' if holds else 'fails'))
    if opts.linking or opts.metabolizers:
        if opts.n != 2:
            msg = "linking forms are computed for the 2-fold cover only, got n = {n}".format(
                n=opts.n)
            raise PreconditionError(msg)
        group, form = linking_form_2fold(knot.seifert)
        if opts.linking:
            doc['linking_form'] = [[fraction_to_json(x) for x in row] for row in form.gram]
            lines.append('linking form:')
            lines += ['  ' + ' '.join(str(x) for x in row) for row in form.gram]
        if opts.metabolizers:
            split = metabolizer_split(group, form)
            doc['metabolizers'] = [[list(x) for x in basis] for basis in split.metabolizers]
            doc['splitting'] = None if split.splitting is None else [
                [list(x) for x in basis] for basis in split.splitting]
            lines.append('metabolizers: {c}'.format(c=len(split.metabolizers)))
            lines += ['  <{b}>'.format(b=', '.join(str(x) for x in basis))
                      for basis in split.metabolizers]
            lines.append('splitting: {s}'.format(
                s='yes' if split.splitting is not None else 'no'))
    _emit(doc, '\n'.join(lines), opts)


def _family_generate(opts, catalog):
    from ..invariants.exceptions import PreconditionError
    from ..invariants.families import build_family
    from ..invariants.obstructions import member_label
    from ..workflows.utils import canonical_json
    from ..workflows.utils import family_to_json
    from ..workflows.utils import lookup

    try:
        C0 = Fraction(opts.c0)
    except ValueError:
        msg = "--c0 {c} is not a rational number".format(c=opts.c0)
        raise PreconditionError(msg) from None
    family = build_family(opts.m, opts.n, opts.count, C0, opts.A,
                          [(lookup(catalog, opts.knot), opts.axis)],
                          lookup(catalog, opts.pattern),
                          (('arf_zero', True), ('grope_height2', True)), opts.variant)
    doc = family_to_json(family)
    if opts.out:
        with open(opts.out, 'w') as fp:
            fp.write(canonical_json(doc) + '\n')
        logger.info('family written to %s', opts.out)
    table = pd.DataFrame([{'member': member_label(family.m, family.n, e.index, family.variant),
                           'twists': '{lo} < {hi}'.format(lo=e.twist_low, hi=e.twist_high),
                           'prime': e.prime, 'N': e.N, 'signature_sum': e.signature_sum}
                          for e in family.entries])
    _emit(doc, table, opts)


def _combinations(opts, count):
    from ..invariants.exceptions import PreconditionError

    if not opts.coeffs:
        return [list(c) for c in product((0, 1), repeat=count) if any(c)]
    out = []
    for text in opts.coeffs:
        try:
            coeffs = [int(a) for a in text.split(',')]
        except ValueError:
            msg = "--coeffs {c} is not a comma separated list of integers".format(c=text)
            raise PreconditionError(msg) from None
        if len(coeffs) > count:
            msg = "{k} coefficients for a family of {n}".format(k=len(coeffs), n=count)
            raise PreconditionError(msg)
        if not any(coeffs):
            raise PreconditionError("the zero combination cannot be certified")
        out.append(coeffs + [0] * (count - len(coeffs)))
    return out


def _plugin_settings(opts):
    # Nipype plugin configuration
    # Load base plugin_settings from file if --use-plugin
    if opts.use_plugin is not None:
        from yaml import safe_load as loadyml
        with open(opts.use_plugin) as f:
            plugin_settings = loadyml(f)
        plugin_settings.setdefault('plugin_args', {})
    else:
        # Defaults
        plugin_settings = {
            'plugin': 'MultiProc',
            'plugin_args': {
                'raise_insufficient': False,
                'maxtasksperchild': 1,
            }
        }

    # Permit overriding plugin config with specific CLI options
    nthreads = plugin_settings['plugin_args'].get('n_procs')
    if nthreads is None or opts.nthreads is not None:
        nthreads = opts.nthreads
        if nthreads is None or nthreads < 1:
            nthreads = cpu_count()
        plugin_settings['plugin_args']['n_procs'] = nthreads
    return plugin_settings


def _certify(opts, catalog):
    from ..invariants.exceptions import InternalConsistencyError
    from ..invariants.exceptions import PreconditionError
    from ..workflows.base import init_certify_wf
    from ..workflows.utils import _read_json
    from ..workflows.utils import family_from_json

    family_file = os.path.abspath(opts.family_file)
    family = family_from_json(_read_json(family_file), catalog)

    indices, combinations = [], []
    if opts.mode == 'member':
        indices = opts.index or list(range(1, len(family) + 1))
        bad = [i for i in indices if not 1 <= i <= len(family)]
        if bad:
            msg = "indices {b} outside the family of {n}".format(b=bad, n=len(family))
            raise PreconditionError(msg)
    else:
        combinations = _combinations(opts, len(family))

    output_dir = os.path.abspath(opts.out or os.getcwd())
    os.makedirs(output_dir, exist_ok=True)
    log_dir = os.path.join(output_dir, 'gropetower', 'logs')
    os.makedirs(log_dir, exist_ok=True)
    if opts.work_dir:
        work_dir = os.path.abspath(opts.work_dir)
    else:
        work_dir = os.path.join(os.getcwd(), 'gropetower_work')
    os.makedirs(work_dir, exist_ok=True)

    # Nipype config (logs and execution)
    ncfg.update_config({
        'logging': {'log_directory': log_dir,
                    'log_to_file': True},
        'execution': {'crashdump_dir': log_dir,
                      'crashfile_format': 'txt',
                      'parameterize_dirs': False},
    })

    certify_wf = init_certify_wf(
        family_file=family_file,
        indices=indices,
        combinations=combinations,
        output_dir=output_dir,
        work_dir=work_dir,
        catalog_files=[os.path.abspath(c) for c in opts.catalog],
    )
    try:
        certify_wf.run(**_plugin_settings(opts))
    except RuntimeError as e:
        if "Workflow did not execute cleanly" in str(e):
            msg = "certificate workflow did not execute cleanly; crash files are in {d}".format(
                d=log_dir)
            raise InternalConsistencyError(msg) from e
        raise

    sink_dir = os.path.join(output_dir, 'gropetower')
    docs = []
    for path in sorted(glob(os.path.join(sink_dir, '*ship_*.json')) +
                       glob(os.path.join(sink_dir, 'no_certificate_*.json'))):
        with open(path) as fp:
            docs.append(json.load(fp))
    wanted = _wanted(opts.mode, family, indices, combinations)
    docs = [d for d in docs if _doc_key(d) in wanted]
    docs.sort(key=lambda d: wanted.index(_doc_key(d)))

    rows = []
    for d in docs:
        if d['type'] == 'membership':
            rows.append({'label': d['label'], 'outcome': 'member',
                         'grope': _level_text(d['grope_heights']),
                         'solvable': _level_text(d['solvable_heights']), 'margin': ''})
        else:
            margin = Fraction(d['margin']['num'], d['margin']['den'])
            rows.append({'label': d.get('label', ','.join(str(a) for a in d['combination'])),
                         'outcome': 'excluded' if d['type'] == 'nonmembership'
                         else 'no certificate',
                         'grope': '', 'solvable': '', 'margin': str(margin)})
    doc = {'family': family_file, 'certificates': docs,
           'report': os.path.join(sink_dir, 'bifiltration.tsv')}
    _emit(doc, pd.DataFrame(rows, columns=['label', 'outcome', 'grope', 'solvable', 'margin']),
          opts)


def _wanted(mode, family, indices, combinations):
    from ..invariants.obstructions import member_label

    if mode == 'member':
        return [('membership', member_label(family.m, family.n, i, family.variant))
                for i in indices]
    return [('combination', tuple(c)) for c in combinations]


def _doc_key(doc):
    if doc.get('type') == 'membership':
        return ('membership', doc['label'])
    return ('combination', tuple(doc.get('combination', ())))


def _level_text(lev):
    from ..workflows.utils import level_from_json

    if lev is None:
        return 'unbounded'
    a, b = level_from_json(lev)
    return '({a}, {b})'.format(a=a, b=b)


def _grope_demo(opts, catalog):
    from ..invariants.gropes import HalfInt
    from ..invariants.gropes import grope_height
    from ..invariants.gropes import model_grope
    from ..invariants.gropes import model_tower
    from ..invariants.gropes import schneiderman
    from ..invariants.gropes import split
    from ..invariants.gropes import tower_height
    from ..invariants.schedules import handle_count
    from ..invariants.schedules import level_euler_characteristic
    from ..invariants.schedules import schedule_of

    height = HalfInt.of(Fraction(opts.height))
    G = model_grope(height, genus=opts.genus, cap_strands=opts.strands)
    T = model_tower(height, chains=opts.genus)
    dyadic, split_delta = split(G)
    as_tower, to_tower = schneiderman(G)
    as_grope, to_grope = schneiderman(T)
    sched = schedule_of(G, 'pushed_3d_satellite')
    doc = {
        'height': str(height),
        'grope_height': str(grope_height(G)),
        'tower_height': str(tower_height(T)),
        'split': {'height': str(grope_height(dyadic)), 'delta': split_delta.as_dict()},
        'grope_to_tower': {'height': str(tower_height(as_tower)),
                           'delta': to_tower.as_dict()},
        'tower_to_grope': {'height': str(grope_height(as_grope)),
                           'delta': to_grope.as_dict()},
        'schedule': [str(lev) for lev in sched],
        'handle_count': handle_count(sched),
        'euler_check': -sum(level_euler_characteristic(lev) for lev in sched),
    }
    lines = [
        'model grope height   {h}'.format(h=doc['grope_height']),
        'model tower height   {h}'.format(h=doc['tower_height']),
        'split                height {h}, handles {d}'.format(
            h=doc['split']['height'], d=doc['split']['delta']),
        'grope -> tower       height {h}, handles {d}'.format(
            h=doc['grope_to_tower']['height'], d=doc['grope_to_tower']['delta']),
        'tower -> grope       height {h}, handles {d}'.format(
            h=doc['tower_to_grope']['height'], d=doc['tower_to_grope']['delta']),
        'schedule             {s}'.format(s=sched),
        '2-handles            {c} (levels: {e})'.format(c=doc['handle_count'],
                                                        e=doc['euler_check']),
    ]
    _emit(doc, '\n'.join(lines), opts)


def _schedule(opts, catalog):
    from ..invariants.exceptions import CatalogError
    from ..invariants.schedules import handle_count
    from ..invariants.schedules import schedule_frame
    from ..invariants.schedules import schedule_of
    from ..workflows.utils import _read_json
    from ..workflows.utils import grope_from_json

    doc = _read_json(opts.grope_file)
    if not isinstance(doc, dict):
        raise CatalogError("grope document must be an object", pointer='')
    kind = opts.kind
    if 'grope' in doc:
        kind = kind or doc.get('kind')
        G = grope_from_json(doc['grope'], '/grope')
    else:
        G = grope_from_json(doc)
    sched = schedule_of(G, kind or 'pushed_3d_satellite')
    frame = schedule_frame(sched)
    if opts.csv:
        frame.to_csv(sys.stdout, index=False)
        return
    out = {'schedule': [str(lev) for lev in sched], 'handle_count': handle_count(sched)}
    _emit(out, frame, opts)


COMMANDS = {
    ('knot', 'info'): _knot_info,
    ('knot', 'signature'): _knot_signature,
    ('cover', None): _cover,
    ('family', 'generate'): _family_generate,
    ('certify', None): _certify,
    ('grope', 'demo'): _grope_demo,
    ('schedule', None): _schedule,
}


def _exit_code(exc):
    if isinstance(exc, ArithmeticError):
        return EXIT_PRECISION
    if isinstance(exc, RuntimeError):
        return EXIT_INTERNAL
    return EXIT_PRECONDITION


def main(argv=None):
    from ..invariants.exceptions import GropetowerError
    from ..workflows.utils import load_catalog

    # get commandline options
    opts = get_parser().parse_args(argv)

    logging.basicConfig(format='%(levelname)s %(name)s: %(message)s',
                        level=max(logging.WARNING - 10 * opts.verbose, logging.DEBUG))

    sub = (getattr(opts, 'knot_command', None) or getattr(opts, 'family_command', None) or
           getattr(opts, 'grope_command', None))
    command = COMMANDS[(opts.command, sub)]

    try:
        catalog = load_catalog(opts.catalog)
        command(opts, catalog)
    except (GropetowerError, ValueError, ArithmeticError, RuntimeError, OSError) as e:
        print('gtow: {kind}: {msg}'.format(kind=type(e).__name__, msg=e),
              file=sys.stderr)
        logger.debug('traceback', exc_info=True)
        return _exit_code(e)
    return EXIT_OK


def init():
    if __name__ == "__main__":
        sys.exit(main())


init()
