# -*- coding: utf-8 -*-
"""
.. currentmodule:: chi2path.scenario

.. moduleauthor:: chi2path developers

Scenario documents: validated JSON descriptions of a medium, a pump, the nonlinear region, parameter sweeps and the
requested outputs. :py:func:`run_scenario` evaluates the Cartesian product of all sweep axes with a bounded worker
pool and writes the results and a run manifest atomically.

=========================================    ==========================================================================
Class / Function                             Characteristics
=========================================    ==========================================================================
:py:class:`Scenario`                         Validated document with defaults filled, builders for the model objects
:py:class:`RunResult`                        Status, written outputs and manifest of a run
:py:func:`parse_scenario`                    Parse and validate JSON text or a dictionary
:py:func:`read_scenario`                     Read a scenario file; relative paths refer to its directory
:py:func:`run_scenario`                      Evaluate the sweeps and write the outputs and the manifest
=========================================    ==========================================================================

Example document::

    {"pump": {"omega_p": 2.0},
     "phase_matching": {"length": 1.0},
     "sweeps": [{"parameter": "phase_matching.delta_k", "start": -31.4, "stop": 31.4, "points": 401}],
     "outputs": [{"quantity": "spdc_probability", "format": "csv", "path": "sinc2.csv"}]}
"""

import copy
import hashlib
import itertools
import json
import logging
import os
import time
from collections import namedtuple
from os.path import abspath, dirname, exists, isabs, join

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from .core import DEFAULTS, UNITS, ScenarioError, UnknownKeyError, save_json, save_table
from .diagrams import EvaluationContext
from .greens import DressedPropagator, PropagatorMode
from .media import HuttnerBarnettModel, MediumProfile, TabulatedFunction, effective_epsilon, \
    negative_frequency_epsilon
from .nonlinear import Chi2Medium, PumpField, ThreeWaveKinematics, biphoton_numeric, phase_matching_summary, \
    spdc_probability
from .squeezing import squeezing_1d_closed_form
from .version import __version__

__author__ = "chi2path developers"
__docformat__ = "restructuredtext en"

logger = logging.getLogger(__name__)

REQUIRED = object()


class Field(object):
    """Leaf of the scenario schema: ``kind`` is one of number, integer, string, bool or coordinates."""

    def __init__(self, kind, default=REQUIRED, choices=None):
        self.kind = kind
        self.default = default
        self.choices = choices


class Table(object):
    """Nested table; ``presence`` is ``required``, ``default`` (filled when absent) or ``optional`` (None)."""

    def __init__(self, fields, presence='default'):
        self.fields = fields
        self.presence = presence


class ListOf(object):
    def __init__(self, table):
        self.table = table


_REGION = Table({'x_start': Field('number', None), 'x_end': Field('number', None),
                 'epsilon_re': Field('number', 1.), 'epsilon_im': Field('number', 0.),
                 'epsilon_file': Field('string', None), 'use_model': Field('bool', False)}, 'required')

SCHEMA = Table({
    'description': Field('string', ''),
    'medium': Table({'label': Field('string', 'medium'), 'regions': ListOf(_REGION)}),
    'model': Table({'omega0': Field('number'), 'beta': Field('number'), 'rho': Field('number'),
                    'coupling': Field('number', 0.), 'coupling_file': Field('string', None),
                    'omega_cutoff': Field('number'), 'eta': Field('number', None), 'g': Field('number', 1.)},
                   'optional'),
    'pump': Table({'amplitude': Field('number', 1.), 'phase': Field('number', 0.), 'omega_p': Field('number'),
                   'k_p': Field('number', 0.)}, 'required'),
    'kinematics': Table({'omega_s': Field('number', None), 'omega_i': Field('number', None),
                         'k_s': Field('number', None), 'k_i': Field('number', None)}),
    'chi2': Table({'chi': Field('number'), 'x_start': Field('number', 0.), 'length': Field('number')}, 'optional'),
    'phase_matching': Table({'length': Field('number'), 'delta_k': Field('number', 0.)}, 'optional'),
    'probe': Table({'omega': Field('number', None), 'x': Field('number', 0.), 'y': Field('number', 0.)}),
    'coordinates': Field('coordinates', {}),
    'sweeps': ListOf(Table({'parameter': Field('string'), 'start': Field('number'), 'stop': Field('number'),
                            'points': Field('integer'), 'scale': Field('string', 'linear', ('linear', 'log'))},
                           'required')),
    'outputs': ListOf(Table({'quantity': Field('string'), 'format': Field('string', 'csv', ('csv', 'json')),
                             'path': Field('string')}, 'required')),
    'settings': Table({'n_jobs': Field('integer', None),
                       'propagator_mode': Field('string', 'analytic', ('analytic', 'numeric')),
                       'grid': Table({'xmin': Field('number'), 'xmax': Field('number'), 'points': Field('integer')},
                                     'optional'),
                       'manifest': Field('string', 'manifest.json'), 'output_dir': Field('string', '.')}),
}, 'required')

# quantity -> (columns, units, sections the quantity needs)
QUANTITIES = {
    'spdc_probability': (['L', 'dk', 'P', 'P_normalised'], {'L': 'm', 'dk': '1/m', 'P': 'm^2', 'P_normalised': '1'},
                         ('phase_matching',)),
    'squeezing': (['L', 's', 'theta', 'validity_margin'], {'L': 'm', 's': '1', 'theta': 'rad', 'validity_margin': '1'},
                  ('chi2',)),
    'epsilon': (['omega', 're_eps', 'im_eps'], {'omega': 'rad/s', 're_eps': '1', 'im_eps': '1'}, ()),
    'propagator': (['omega', 'x', 'y', 're_G', 'im_G'],
                   {'omega': 'rad/s', 'x': 'm', 'y': 'm', 're_G': 'm', 'im_G': 'm'}, ()),
    'biphoton': (['L', 're_X', 'im_X', 'abs_X'], {'L': 'm', 're_X': 'arb.', 'im_X': 'arb.', 'abs_X': 'arb.'},
                 ('chi2',)),
}


def _is_number(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _check_field(value, field, path):
    if value is None and field.default is None:
        return None
    ok = {'number': _is_number(value),
          'integer': isinstance(value, int) and not isinstance(value, bool),
          'string': isinstance(value, str),
          'bool': isinstance(value, bool)}.get(field.kind)
    if field.kind == 'coordinates':
        if not isinstance(value, dict):
            raise ScenarioError('coordinates must map labels to [omega, x]', field=path)
        for label, pair in value.items():
            if not (isinstance(pair, list) and len(pair) == 2 and all(_is_number(v) for v in pair)):
                raise ScenarioError("coordinate '%s' must be [omega, x]" % label, field='%s.%s' % (path, label))
        return dict((k, [float(v) for v in pair]) for k, pair in value.items())
    if not ok:
        raise ScenarioError('%s must be of type %s, got %r' % (path, field.kind, value), field=path)
    if field.choices is not None and value not in field.choices:
        raise ScenarioError('%s must be one of %s, got %r' % (path, field.choices, value), field=path)
    return float(value) if field.kind == 'number' else value


def _validate(value, schema, path):
    if isinstance(schema, Table):
        if value is None:
            if schema.presence == 'required':
                raise ScenarioError("missing table '%s'" % path, field=path)
            if schema.presence == 'optional':
                return None
            value = {}
        if not isinstance(value, dict):
            raise ScenarioError("'%s' must be a table" % path, field=path)
        for key in value:
            if key not in schema.fields:
                raise UnknownKeyError(key, field='%s.%s' % (path, key) if path else key)
        return dict((key, _validate(value.get(key), sub, '%s.%s' % (path, key) if path else key))
                    for key, sub in schema.fields.items())
    if isinstance(schema, ListOf):
        value = [] if value is None else value
        if not isinstance(value, list):
            raise ScenarioError("'%s' must be a list" % path, field=path)
        return [_validate(item, schema.table, '%s.%d' % (path, i)) for i, item in enumerate(value)]
    if value is None:
        if schema.default is REQUIRED:
            raise ScenarioError("missing key '%s'" % path, field=path)
        return copy.deepcopy(schema.default)
    return _check_field(value, schema, path)


def _axis_values(sweep):
    if sweep['scale'] == 'log':
        return np.geomspace(sweep['start'], sweep['stop'], sweep['points'])
    return np.linspace(sweep['start'], sweep['stop'], sweep['points'])


def _sweep_value(target, value, path):
    """Sweep value cast to the type of the field it replaces."""
    if isinstance(target, int):
        if abs(value - round(value)) > 1e-9 * max(1., abs(value)):
            raise ScenarioError("integer field '%s' cannot take the sweep value %r" % (path, float(value)), field=path)
        return int(round(value))
    return float(value)


def get_path(document, path):
    """Value at a dotted path; integer parts index lists.

    :Example:

    >>> get_path({'medium': {'regions': [{'epsilon_re': 2.25}]}}, 'medium.regions.0.epsilon_re')
    2.25
    """
    node = document
    for part in path.split('.'):
        if isinstance(node, list) and part.isdigit() and int(part) < len(node):
            node = node[int(part)]
        elif isinstance(node, dict) and part in node:
            node = node[part]
        else:
            raise ScenarioError("path '%s' does not resolve" % path, field=path)
    return node


def set_path(document, path, value):
    """Copy of ``document`` with ``value`` at the dotted ``path``."""
    document = copy.deepcopy(document)
    parts = path.split('.')
    parent = get_path(document, '.'.join(parts[:-1])) if len(parts) > 1 else document
    key = int(parts[-1]) if isinstance(parent, list) else parts[-1]
    parent[key] = value
    return document


class Scenario(object):
    """
    Validated scenario. :py:attr:`document` holds the full document with all defaults filled; the ``build_*``
    methods create the model objects of one sweep point.
    """

    def __init__(self, document, raw, base_dir=None):
        self.document = document
        self.raw = raw
        self.base_dir = abspath(base_dir or os.getcwd())
        self.input_sha256 = hashlib.sha256(json.dumps(raw, sort_keys=True).encode('utf-8')).hexdigest()

    def __getitem__(self, section):
        return self.document[section]

    @property
    def sweeps(self):
        return self.document['sweeps']

    @property
    def outputs(self):
        return self.document['outputs']

    @property
    def settings(self):
        return self.document['settings']

    def path(self, filename):
        return filename if isabs(filename) else join(self.base_dir, filename)

    def sweep_axes(self):
        """``(parameter, values)`` per sweep axis in document order."""
        return [(sw['parameter'], _axis_values(sw)) for sw in self.sweeps]

    def with_values(self, assignment):
        """Scenario with the sweep ``assignment`` (path to value) applied; integer fields stay integers."""
        document = self.document
        for path, value in assignment:
            document = set_path(document, path, _sweep_value(get_path(document, path), value, path))
        return Scenario(document, self.raw, self.base_dir)

    def build_model(self):
        m = self.document['model']
        if m is None:
            return None
        coupling = TabulatedFunction.from_csv(self.path(m['coupling_file'])) if m['coupling_file'] else m['coupling']
        return HuttnerBarnettModel(m['omega0'], m['beta'], m['rho'], coupling, m['omega_cutoff'], m['eta'])

    def build_medium(self):
        med = self.document['medium']
        model = self.build_model()
        regions = []
        for r in med['regions']:
            if r['use_model']:
                g_value = self.document['model']['g']
                eps = (lambda omega, g_value=g_value: effective_epsilon(model, g_value, omega) if omega >= 0. else
                       negative_frequency_epsilon(model, g_value, -omega))
            elif r['epsilon_file']:
                eps = TabulatedFunction.from_csv(self.path(r['epsilon_file']), complex_values=True)
            else:
                eps = complex(r['epsilon_re'], r['epsilon_im'])
            regions.append((-np.inf if r['x_start'] is None else r['x_start'],
                            np.inf if r['x_end'] is None else r['x_end'], eps))
        return MediumProfile(regions, label=med['label'])

    def build_pump(self):
        p = self.document['pump']
        return PumpField(p['amplitude'], p['phase'], p['omega_p'], p['k_p'])

    def build_kinematics(self):
        pump = self.build_pump()
        k = self.document['kinematics']
        half = pump.omega_p / 2.
        k_default = -pump.k_p.real / 2.
        return ThreeWaveKinematics(half if k['omega_s'] is None else k['omega_s'],
                                   half if k['omega_i'] is None else k['omega_i'],
                                   k_default if k['k_s'] is None else k['k_s'],
                                   k_default if k['k_i'] is None else k['k_i'], pump)

    def build_chi2(self):
        c = self.document['chi2']
        return Chi2Medium(c['chi'], (c['x_start'], c['x_start'] + c['length']), self.build_medium())

    def grid(self):
        g = self.settings['grid']
        return None if g is None else np.linspace(g['xmin'], g['xmax'], g['points'])

    def build_propagator(self, medium=None):
        return DressedPropagator(self.build_medium() if medium is None else medium,
                                 PropagatorMode(self.settings['propagator_mode']), self.grid())

    def evaluation_context(self):
        """:py:class:`chi2path.diagrams.EvaluationContext` of the scenario's nonlinear medium and coordinates."""
        return EvaluationContext(self.build_chi2(), self.build_kinematics(), self.settings['propagator_mode'],
                                 dict((k, tuple(v)) for k, v in self.document['coordinates'].items()), self.grid())

    def probe_omega(self):
        omega = self.document['probe']['omega']
        return self.document['pump']['omega_p'] if omega is None else omega


def _check_invariants(document):
    for i, sw in enumerate(document['sweeps']):
        field = 'sweeps.%d' % i
        if sw['points'] < 2:
            raise ScenarioError('a sweep axis needs points >= 2, got %d' % sw['points'], field=field + '.points')
        target = get_path(document, sw['parameter'])
        if not _is_number(target):
            raise ScenarioError("sweep parameter '%s' is not a numeric field" % sw['parameter'],
                                field=field + '.parameter')
        if sw['scale'] == 'log' and not (sw['start'] > 0. and sw['stop'] > 0.):
            raise ScenarioError('log sweeps need positive bounds', field=field + '.start')
        if isinstance(target, int):
            for value in _axis_values(sw):
                _sweep_value(target, value, sw['parameter'])
    for i, out in enumerate(document['outputs']):
        if out['quantity'] not in QUANTITIES:
            raise ScenarioError("unknown quantity '%s', choose from %s" % (out['quantity'], sorted(QUANTITIES)),
                                field='outputs.%d.quantity' % i)
        for section in QUANTITIES[out['quantity']][2]:
            if document[section] is None:
                raise ScenarioError("quantity '%s' needs the table '%s'" % (out['quantity'], section),
                                    field='outputs.%d.quantity' % i)
    if any(r['use_model'] for r in document['medium']['regions']) and document['model'] is None:
        raise ScenarioError("regions with use_model need the table 'model'", field='model')
    grid = document['settings']['grid']
    if grid is not None and (grid['points'] < 2 or not grid['xmin'] < grid['xmax']):
        raise ScenarioError('grid needs xmin < xmax and points >= 2', field='settings.grid')
    if document['settings']['n_jobs'] == 0:
        raise ScenarioError('n_jobs must not be 0', field='settings.n_jobs')


def parse_scenario(document, base_dir=None):
    """
    Parse and validate a scenario. Unknown keys are errors; absent optional keys get their defaults.

    :param document: {str or dict} JSON text or an already decoded document
    :param base_dir: {str} directory relative file names refer to, default the working directory
    :return: {Scenario} validated scenario
    :raises ScenarioError: for syntax errors (with ``line`` and ``column``) and failed invariants (with ``field``)
    :raises UnknownKeyError: for keys outside the schema
    :Example:

    >>> s = parse_scenario('{"pump": {"omega_p": 2.0}}')
    >>> s['kinematics']['omega_s'] is None, s.settings['propagator_mode']
    (True, 'analytic')
    """
    if isinstance(document, (str, bytes)):
        try:
            raw = json.loads(document)
        except json.JSONDecodeError as e:
            raise ScenarioError('invalid JSON: %s' % e.msg, line=e.lineno, column=e.colno)
    else:
        raw = copy.deepcopy(document)
    validated = _validate(raw, SCHEMA, '')
    _check_invariants(validated)
    return Scenario(validated, raw, base_dir)


def read_scenario(filename):
    """Read and validate a scenario file (see :py:func:`parse_scenario`)."""
    if not exists(filename):
        raise IOError('Path to scenario file is wrong or file does not exist!\n%s' % filename)
    with open(filename, 'r') as f:
        return parse_scenario(f.read(), base_dir=dirname(abspath(filename)))


def _evaluate_point(scenario, assignment, quantities):
    """All requested quantities at one sweep point; rows keyed by quantity."""
    point = scenario.with_values(assignment)
    probe = point['probe']
    rows = {}
    for q in quantities:
        if q == 'spdc_probability':
            L, dk = point['phase_matching']['length'], point['phase_matching']['delta_k']
            rows[q] = [L, dk, spdc_probability(L, dk)]
        elif q == 'squeezing':
            chi2 = point['chi2']
            kin = point.build_kinematics()
            param = squeezing_1d_closed_form(chi2['chi'], kin.pump, chi2['length'], kin, probe['x'], probe['y'])
            margin = 1. - abs(chi2['chi']) * kin.pump.amplitude * chi2['length'] / (4. * abs((kin.k_s * kin.k_i).real))
            rows[q] = [chi2['length'], param.s, param.theta, margin]
        elif q == 'epsilon':
            omega = point.probe_omega()
            eps = point.build_medium().epsilon(omega, probe['x'])
            rows[q] = [omega, eps.real, eps.imag]
        elif q == 'propagator':
            omega = point.probe_omega()
            g = point.build_propagator()(omega, probe['x'], probe['y'])
            rows[q] = [omega, probe['x'], probe['y'], g.real, g.imag]
        elif q == 'biphoton':
            chi2 = point.build_chi2()
            G = point.build_propagator(chi2.linear)
            X = biphoton_numeric(chi2, point.build_kinematics(), G, G, probe['x'], probe['y'])
            rows[q] = [chi2.length, X.real, X.imag, abs(X)]
    return [float(value) for _, value in assignment], rows


RunResult = namedtuple('RunResult', ['status', 'outputs', 'manifest'])


def _table(scenario, quantity, axes, points):
    columns = QUANTITIES[quantity][0]
    names = [name for name, _ in axes]
    values = []
    for sweep_values, rows in points:
        row = rows[quantity]
        if quantity == 'spdc_probability':
            row = row + [0.]
        values.append(sweep_values + row)
    frame = pd.DataFrame(values, columns=names + columns)
    summary = None
    if quantity == 'spdc_probability':
        peak = frame['P'].max()
        frame['P_normalised'] = frame['P'] / peak if peak > 0. else 0.
        if len(axes) == 1 and axes[0][0] == 'phase_matching.delta_k':
            summary = phase_matching_summary(frame['dk'].to_numpy(), frame['P'].to_numpy())
    return frame, summary


def run_scenario(scenario, output_dir=None, n_jobs=None):
    """
    Evaluate every requested quantity on the Cartesian product of the sweep axes and write the outputs and the run
    manifest. Sweep points run in a joblib worker pool; results are assembled in sweep order, so the written files
    do not depend on ``n_jobs``.

    :param scenario: {Scenario} validated scenario
    :param output_dir: {str} directory of the outputs, default ``settings.output_dir``
    :param n_jobs: {int} worker count, default ``settings.n_jobs`` or the package configuration
    :return: {RunResult} status ``0``, written output paths and the manifest
    """
    start = time.time()
    output_dir = scenario.path(scenario.settings['output_dir'] if output_dir is None else output_dir)
    n_jobs = n_jobs or scenario.settings['n_jobs'] or DEFAULTS['n_jobs']
    quantities = sorted(set(out['quantity'] for out in scenario.outputs))
    axes = scenario.sweep_axes()
    assignments = [list(zip([name for name, _ in axes], combo))
                   for combo in itertools.product(*[values for _, values in axes])]
    logger.info("running scenario %s: %d sweep points, quantities %s, n_jobs=%d",
                scenario.input_sha256[:12], len(assignments), quantities, n_jobs)

    points = []
    if quantities:
        points = Parallel(n_jobs=n_jobs)(delayed(_evaluate_point)(scenario, a, quantities) for a in assignments)

    written = []
    for out in scenario.outputs:
        q = out['quantity']
        frame, summary = _table(scenario, q, axes, points)
        path = join(output_dir, out['path'])
        units = dict(QUANTITIES[q][1])
        if out['format'] == 'csv':
            header = ['chi2path %s' % __version__, 'quantity: %s' % q, 'input_sha256: %s' % scenario.input_sha256,
                      'units: %s' % ', '.join('%s [%s]' % (c, units[c]) for c in QUANTITIES[q][0]),
                      'hbar = %g, SI units' % UNITS['hbar']]
            header += ['sweep: %s %s %.17g..%.17g (%d points)' % (sw['parameter'], sw['scale'], sw['start'],
                                                                  sw['stop'], sw['points']) for sw in scenario.sweeps]
            if summary is not None:
                header.append('summary: %s' % json.dumps(summary, sort_keys=True))
            save_table(path, frame, header)
        else:
            save_json(path, {'quantity': q, 'units': units, 'columns': list(frame.columns),
                             'rows': frame.to_numpy().tolist(), 'summary': summary})
        logger.info("wrote %s (%d rows)", path, len(frame))
        written.append({'quantity': q, 'format': out['format'], 'path': path, 'rows': len(frame)})

    manifest = {'tool': 'chi2path', 'version': __version__, 'input_sha256': scenario.input_sha256,
                'units': {'hbar': UNITS['hbar'], 'system': UNITS['system']},
                'wall_clock_seconds': time.time() - start, 'outputs': written, 'status': 'ok'}
    manifest_path = save_json(join(output_dir, scenario.settings['manifest']), manifest)
    logger.info("manifest written to %s", manifest_path)
    return RunResult(0, [w['path'] for w in written], manifest)
