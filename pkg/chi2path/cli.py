# -*- coding: utf-8 -*-
"""
.. currentmodule:: chi2path.cli

.. moduleauthor:: chi2path developers

Command line interface ``chi2path`` with the subcommands ``epsilon``, ``propagator``, ``spdc``, ``diagrams``,
``squeeze`` and ``run``. All quantities are SI (rad/s, m, 1/m) with hbar = 1; stationary quantities drop the
``exp(-i omega t)`` factor.

Exit codes: ``0`` success, ``1`` invalid input, ``2`` numerical failure. Failures print a JSON error report on stderr.

:Example:

.. code-block:: sh

    chi2path spdc --L-range 1e-3 1e-3 --dk-range -3.1e4 3.1e4 --points 401 --output sinc2.csv --summary sinc2.json
    chi2path diagrams --order 2 --propagators 4 --list
    chi2path run chi2path/data/example_scenario.json
"""

import argparse
import json
import logging
import sys

import numpy as np
import pandas as pd

from .core import NumericalError, ValidationError, save_json, save_table
from .diagrams import Process, enumerate_diagrams, evaluate_amplitude, symmetry_factor
from .greens import DressedPropagator, PropagatorMode
from .media import HuttnerBarnettModel, MediumProfile, TabulatedFunction, effective_epsilon, lorentz_epsilon
from .nonlinear import phase_matching_summary, spdc_probability
from .scenario import read_scenario, run_scenario
from .squeezing import squeezing_1d_closed_form, squeezing_sweep
from .version import __version__

__author__ = "chi2path developers"
__docformat__ = "restructuredtext en"

logger = logging.getLogger(__name__)

CONVENTIONS = 'SI units (rad/s, m, 1/m), hbar = 1, exp(-i omega t) factors dropped, sinc(u) = sin(u)/u'


def _emit(frame, output, header=None):
    if output:
        save_table(output, frame, header)
        logger.info("wrote %s (%d rows)", output, len(frame))
    else:
        frame.to_csv(sys.stdout, index=False, float_format='%.17g', lineterminator='\n')


def _axis(start, stop, points):
    return np.array([start]) if start == stop else np.linspace(start, stop, points)


def cmd_epsilon(args):
    omega = np.linspace(args.omega_range[0], args.omega_range[1], args.points)
    if args.lorentz:
        eps = lorentz_epsilon(args.omega0, args.beta, args.g, omega).astype(complex)
    else:
        coupling = TabulatedFunction.from_csv(args.coupling_file) if args.coupling_file else args.coupling
        model = HuttnerBarnettModel(args.omega0, args.beta, args.rho, coupling, args.cutoff, args.eta)
        eps = np.array([effective_epsilon(model, args.g, w) for w in omega])
    _emit(pd.DataFrame({'omega': omega, 're_eps': eps.real, 'im_eps': eps.imag}), args.output,
          ['chi2path %s epsilon' % __version__, CONVENTIONS])


def cmd_propagator(args):
    eps = complex(args.epsilon_re, args.epsilon_im)
    if args.slab:
        medium = MediumProfile([(args.slab[0], args.slab[1], eps)], label='slab')
    else:
        medium = MediumProfile.homogeneous(eps)
    x = np.linspace(args.xmin, args.xmax, args.points)
    grid = None if args.grid_points is None else np.linspace(args.xmin, args.xmax, args.grid_points)
    G = DressedPropagator(medium, PropagatorMode(args.mode), grid).sample(args.omega, x, args.y)
    _emit(pd.DataFrame({'omega': args.omega, 'x': x, 'y': args.y, 're_G': G.real, 'im_G': G.imag}), args.output,
          ['chi2path %s propagator (%s)' % (__version__, args.mode), CONVENTIONS])


def cmd_spdc(args):
    lengths = _axis(args.L_range[0], args.L_range[1], args.points)
    dks = _axis(args.dk_range[0], args.dk_range[1], args.points)
    L, dk = np.meshgrid(lengths, dks, indexing='ij')
    P = spdc_probability(L.ravel(), dk.ravel())
    frame = pd.DataFrame({'L': L.ravel(), 'dk': dk.ravel(), 'P_normalised': P / P.max()})
    _emit(frame, args.output, ['chi2path %s spdc' % __version__, CONVENTIONS])
    if args.summary:
        summaries = []
        for length in lengths:
            rows = frame[frame['L'] == length]
            s = phase_matching_summary(rows['dk'].to_numpy(), rows['P_normalised'].to_numpy())
            s['L'] = float(length)
            summaries.append(s)
        save_json(args.summary, {'quantity': 'spdc_probability', 'summaries': summaries})


def _diagram_record(d, ctx=None):
    record = {'topology': d.describe(), 'process': d.process.value, 'exchanged': d.exchanged,
              'sources': [{'label': s.label, 'direction': s.direction, 'mode': s.mode.value} for s in d.sources],
              'symmetry_factor': symmetry_factor(d)}
    if ctx is not None:
        if d.process is Process.VACUUM_LOOP:
            record.update(amplitude_re=None, amplitude_im=None, note='vacuum loop, dropped by renormalisation')
        else:
            a = evaluate_amplitude(d, ctx)
            record.update(amplitude_re=a.real, amplitude_im=a.imag)
    return record


def cmd_diagrams(args):
    diagrams = enumerate_diagrams(args.order, args.propagators)
    if args.list:
        for d in diagrams:
            print(d.describe())
    if args.evaluate or not args.list:
        ctx = read_scenario(args.evaluate).evaluation_context() if args.evaluate else None
        records = [_diagram_record(d, ctx) for d in diagrams]
        if args.output:
            save_json(args.output, {'diagrams': records})
        else:
            print(json.dumps(records, indent=2, sort_keys=True))


def cmd_squeeze(args):
    scenario = read_scenario(args.scenario)
    if scenario['chi2'] is None:
        raise ValidationError("squeeze needs the table 'chi2'", field='chi2')
    kin = scenario.build_kinematics()
    chi, length = scenario['chi2']['chi'], scenario['chi2']['length']
    x, y = scenario['probe']['x'], scenario['probe']['y']
    if args.lengths:
        lengths = np.linspace(args.lengths[0], args.lengths[1], int(args.lengths[2]))
        _emit(squeezing_sweep(chi, kin.pump, lengths, kin, x, y), args.output,
              ['chi2path %s squeeze' % __version__, CONVENTIONS])
        return
    param = squeezing_1d_closed_form(chi, kin.pump, length, kin, x, y)
    margin = 1. - abs(chi) * kin.pump.amplitude * length / (4. * abs((kin.k_s * kin.k_i).real))
    print(json.dumps({'s': param.s, 'theta': param.theta, 'validity_margin': margin}, sort_keys=True))


def cmd_run(args):
    result = run_scenario(read_scenario(args.scenario), output_dir=args.output_dir, n_jobs=args.n_jobs)
    print(json.dumps(result.manifest, indent=2, sort_keys=True))


def build_parser():
    parser = argparse.ArgumentParser(prog='chi2path', description='Second-order nonlinear optics in dressed media. '
                                                                  'Conventions: %s.' % CONVENTIONS)
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true', help='debug logging')
    verbosity.add_argument('-q', '--quiet', action='store_true', help='warnings and errors only')
    sub = parser.add_subparsers(dest='command')
    sub.required = True

    p = sub.add_parser('epsilon', help='effective dielectric function of the oscillator model (CSV)')
    p.add_argument('--omega0', type=float, required=True, help='resonance angular frequency [rad/s]')
    p.add_argument('--beta', type=float, required=True, help='static polarisability')
    p.add_argument('--rho', type=float, default=1., help='reservoir density')
    p.add_argument('--coupling', type=float, default=0., help='constant reservoir coupling f')
    p.add_argument('--coupling-file', help='CSV table omega, f(omega)')
    p.add_argument('--cutoff', type=float, help='reservoir cutoff [rad/s], default 10 omega0')
    p.add_argument('--eta', type=float, help='pole regulator [rad^2/s^2]')
    p.add_argument('--g', type=float, default=1., help='geometry factor')
    p.add_argument('--omega-range', type=float, nargs=2, required=True, metavar=('START', 'STOP'))
    p.add_argument('--points', type=int, default=101)
    p.add_argument('--lorentz', action='store_true', help='lossless Lorentz closed form instead of the model')
    p.add_argument('--output', help='CSV file, default stdout')
    p.set_defaults(func=cmd_epsilon)

    p = sub.add_parser('propagator', help='dressed propagator G(omega, x, y) on a grid of x (CSV)')
    p.add_argument('--omega', type=float, required=True, help='angular frequency [rad/s]')
    p.add_argument('--y', type=float, default=0., help='source position [m]')
    p.add_argument('--xmin', type=float, required=True)
    p.add_argument('--xmax', type=float, required=True)
    p.add_argument('--points', type=int, default=201)
    p.add_argument('--grid-points', type=int, help='points of the numeric solution grid on [xmin, xmax]')
    p.add_argument('--epsilon-re', type=float, default=1.)
    p.add_argument('--epsilon-im', type=float, default=0.)
    p.add_argument('--slab', type=float, nargs=2, metavar=('X_START', 'X_END'),
                   help='restrict the dielectric to a slab in vacuum')
    p.add_argument('--mode', choices=[m.value for m in PropagatorMode], default='analytic')
    p.add_argument('--output', help='CSV file, default stdout')
    p.set_defaults(func=cmd_propagator)

    p = sub.add_parser('spdc', help='phase-matching law L^2 sinc^2(L dk / 2) (CSV, JSON summary)')
    p.add_argument('--L-range', dest='L_range', type=float, nargs=2, required=True, metavar=('LMIN', 'LMAX'))
    p.add_argument('--dk-range', dest='dk_range', type=float, nargs=2, required=True, metavar=('DKMIN', 'DKMAX'))
    p.add_argument('--points', type=int, default=401)
    p.add_argument('--output', help='CSV file, default stdout')
    p.add_argument('--summary', help='JSON file with peak and first zeros per length')
    p.set_defaults(func=cmd_spdc)

    p = sub.add_parser('diagrams', help='enumerate and evaluate diagrams')
    p.add_argument('--order', type=int, default=1, help='number of vertices V')
    p.add_argument('--propagators', type=int, default=4, help='maximal number of propagator lines P')
    p.add_argument('--list', action='store_true', help='print ASCII adjacency descriptions')
    p.add_argument('--evaluate', metavar='SCENARIO', help='evaluate the amplitudes with a scenario file')
    p.add_argument('--output', help='JSON file, default stdout')
    p.set_defaults(func=cmd_diagrams)

    p = sub.add_parser('squeeze', help='squeezing parameter of a phase-matched 1D medium (JSON or CSV sweep)')
    p.add_argument('scenario', help='scenario file')
    p.add_argument('--lengths', type=float, nargs=3, metavar=('START', 'STOP', 'POINTS'), help='sweep s(L)')
    p.add_argument('--output', help='CSV file of the sweep, default stdout')
    p.set_defaults(func=cmd_squeeze)

    p = sub.add_parser('run', help='run a scenario file')
    p.add_argument('scenario', help='scenario file')
    p.add_argument('--output-dir', help='override settings.output_dir')
    p.add_argument('--n-jobs', type=int, help='override settings.n_jobs')
    p.set_defaults(func=cmd_run)
    return parser


def main(argv=None):
    """Entry point of the ``chi2path`` command; returns the exit code."""
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format='%(asctime)s %(name)s %(levelname)s: %(message)s', stream=sys.stderr)
    if getattr(args, 'cutoff', 'unset') is None:
        args.cutoff = 10. * args.omega0
    try:
        args.func(args)
    except (ValidationError, IOError) as e:
        report = e.report() if isinstance(e, ValidationError) else {'error': e.__class__.__name__, 'message': str(e)}
        sys.stderr.write(json.dumps(report, sort_keys=True) + '\n')
        return 1
    except NumericalError as e:
        sys.stderr.write(json.dumps(e.report(), sort_keys=True) + '\n')
        return 2
    return 0


if __name__ == '__main__':
    sys.exit(main())
