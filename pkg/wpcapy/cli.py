#!/usr/bin/env python

"""Command line front end: reads an experiment file, runs one command and
writes its table as CSV or JSON"""

from __future__ import division, print_function

import argparse
import codecs
import csv
import json
import logging
import sys

from wpcapy import __version__
from wpcapy.error import WPCAError
from wpcapy.asymptotics import Asymptotics
from wpcapy.config import ConfigValidationError, ExperimentConfig
from wpcapy.impact import ImpactAnalysis
from wpcapy.montecarlo import MonteCarlo
from wpcapy.sampling import SamplingDesign
from wpcapy.utils import Utils
from wpcapy.weighting import Weighting
from wpcapy.wpca_enum import OutputFormat, WeightKind

logger = logging.getLogger(__name__)

PREDICT_COLUMNS = ['theta2', 'scheme', 'alpha', 'beta', 'r_theta', 'r_u', 'r_z', 'cross',
                   'above_transition', 'truncated']
WEIGHTS_COLUMNS = ['group', 'p', 'sigma2', 'w2_uniform', 'w2_inverse', 'w2_square_inverse',
                   'w2_optimal']
SIMULATE_COLUMNS = ['component_index', 'metric', 'empirical', 'prediction']
IMPACT_COLUMNS = ['parameter', 'value', 'scheme', 'r_u', 'above_transition']
PATH_COLUMNS = ['series', 'w2_1', 'w2_2', 'r_u', 'above_transition']

class CommandResult(object):
    """Table produced by a command, with metadata for the JSON output."""

    def __init__(self, command, columns, rows, metadata=None):
        self.command = command
        self.columns = columns
        self.rows = rows
        self.metadata = metadata or {}

    def as_dict(self):
        return {'command': self.command,
                'columns': self.columns,
                'rows': Utils.to_jsonable(self.rows),
                'metadata': Utils.to_jsonable(self.metadata)}


def _scheme(weighting, config, kind, theta2):
    return weighting.make_scheme(kind,
                                 config.noise,
                                 theta2=theta2,
                                 binary_mask=config.binary_mask,
                                 normalization=config.normalization,
                                 custom_weights=config.custom_weights)

def cmd_predict(config, root_tol=None):
    """One row of asymptotic predictions per (theta^2, weight scheme)."""

    config.require('noise')
    spike = config.spike
    weighting = Weighting(root_tol=root_tol)
    asymptotics = Asymptotics(root_tol=root_tol)
    rows = []
    for theta2 in spike.amplitudes:
        for kind in config.schemes:
            scheme = _scheme(weighting, config, kind, theta2)
            cfg = asymptotics.config(spike.c, config.noise, scheme.per_group)
            prediction = asymptotics.predict(cfg, theta2)
            rows.append({'theta2': float(theta2),
                         'scheme': str(kind),
                         'alpha': prediction.alpha,
                         'beta': prediction.beta,
                         'r_theta': prediction.amplitude_limit,
                         'r_u': prediction.component_recovery,
                         'r_z': prediction.score_recovery,
                         'cross': prediction.cross_product,
                         'above_transition': prediction.above_transition,
                         'truncated': prediction.truncated})
    return CommandResult('predict', PREDICT_COLUMNS, rows, {'c': spike.c})

def cmd_weights(config, root_tol=None):
    """Weights of the standard schemes for every noise group."""

    config.require('noise')
    theta2 = config.amplitude()
    weighting = Weighting(root_tol=root_tol)
    noise = config.noise
    columns = {}
    for column, kind in (('w2_uniform', WeightKind.uniform),
                         ('w2_inverse', WeightKind.inverse_variance),
                         ('w2_square_inverse', WeightKind.square_inverse_variance),
                         ('w2_optimal', WeightKind.optimal)):
        columns[column] = weighting.make_scheme(kind, noise, theta2=theta2,
                                                normalization=config.normalization).per_group
    rows = []
    for group, (p, sigma2) in enumerate(noise.groups):
        row = {'group': group, 'p': p, 'sigma2': sigma2}
        for column, values in columns.items():
            row[column] = float(values[group])
        rows.append(row)
    return CommandResult('weights', WEIGHTS_COLUMNS, rows,
                         {'theta2': theta2, 'normalization': str(config.normalization)})

def cmd_sample_plan(config, root_tol=None, threads=None):
    """Vertex table of the budget polyhedron with the chosen plan marked."""

    config.require('budget')
    problem = config.budget
    plan = SamplingDesign(root_tol=root_tol, threads=threads).optimize_sampling(problem)
    rate_columns = ['c_%d' % (index + 1) for index in range(problem.L)]
    rows = []
    for index, (vertex, recovery) in enumerate(zip(plan.vertices, plan.vertex_recoveries)):
        row = {'vertex': index, 'recovery': recovery, 'chosen': vertex == plan.allocation.tolist()}
        row.update(zip(rate_columns, vertex))
        rows.append(row)
    return CommandResult('sample-plan', ['vertex'] + rate_columns + ['recovery', 'chosen'], rows,
                         {'plan': plan.as_dict(), 'problem': problem.as_dict()})

def cmd_sweep(config, root_tol=None, threads=None):
    """Lambda sweep table of empirical metrics against predictions."""

    config.require('sweep')
    spec = config.sweep
    table = MonteCarlo(root_tol=root_tol, threads=threads).run_sweep(spec)
    return CommandResult('sweep', list(table.COLUMNS), table.rows,
                         {'quantile_method': table.quantile_method, 'base_seed': spec.base_seed})

def cmd_simulate(config, lambda_value=None, trial_index=0, root_tol=None):
    """Single trial, at a lambda of the sweep grid or under the first
    configured scheme."""

    config.require('sweep')
    spec = config.sweep
    montecarlo = MonteCarlo(root_tol=root_tol, threads=1)
    if lambda_value is not None:
        record = montecarlo.run_trial(spec, lambda_value, trial_index)
    else:
        scheme = _scheme(Weighting(root_tol=root_tol), config, config.schemes[0],
                         float(spec.spike.amplitudes[0]))
        record = montecarlo.run_scheme_trial(spec, scheme, trial_index)
    rows = []
    for metric in spec.metrics:
        key = str(metric)
        empirical = record.metrics[key]
        prediction = record.predictions.get(key)
        if not isinstance(empirical, list):
            rows.append({'component_index': None, 'metric': key,
                         'empirical': empirical, 'prediction': prediction})
            continue
        for index, value in enumerate(empirical):
            rows.append({'component_index': index, 'metric': key, 'empirical': value,
                         'prediction': prediction[index] if prediction else None})
    return CommandResult('simulate', SIMULATE_COLUMNS, rows,
                         {'seed': record.seed, 'trial_index': record.trial_index,
                          'lambda': record.lambda_value, 'weights': record.weights})

def cmd_impact(config, weight_path=False, root_tol=None):
    """Parameter impact sweep, or the two-group weight path."""

    config.require('c', 'noise')
    theta2 = config.amplitude()
    analysis = ImpactAnalysis(root_tol=root_tol)
    if weight_path:
        rows = analysis.weight_path(config.c, config.noise, theta2)
        return CommandResult('impact', PATH_COLUMNS, rows, {'c': config.c, 'theta2': theta2})
    config.require('impact')
    rows = analysis.sweep(config.c, config.noise, theta2,
                          config.impact['parameter'], config.impact['values'])
    return CommandResult('impact', IMPACT_COLUMNS, rows, {'c': config.c, 'theta2': theta2})


def write_csv(result, stream):
    writer = csv.DictWriter(stream, fieldnames=result.columns, lineterminator='\n')
    writer.writeheader()
    for row in result.rows:
        writer.writerow(dict((column, Utils.format_number(row.get(column)))
                             for column in result.columns))

def write_json(result, stream):
    json.dump(result.as_dict(), stream, indent=2)
    stream.write('\n')

def write_result(result, path=None, output_format=OutputFormat.csv):
    """Writes a command result to path, or to stdout when path is None or '-'."""

    writer = write_json if OutputFormat(str(output_format)) == OutputFormat.json else write_csv
    if path is None or path == '-':
        writer(result, sys.stdout)
        return
    with codecs.open(path, mode='w', encoding='utf-8') as f:
        writer(result, f)
    logger.info('Wrote %d rows to %s', len(result.rows), path)


def build_parser():
    parser = argparse.ArgumentParser(
        prog='wpcapy',
        description='Optimally weighted PCA for heteroscedastic data: predictions, weights, '
                    'sampling plans and Monte Carlo sweeps'
    )
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', required=True, help='YAML or JSON experiment file')
    common.add_argument('--out', default=None, help='Output path, stdout when omitted')
    common.add_argument('--format', choices=[str(f) for f in OutputFormat], default=None,
                        help='Output format (default: the config output.format, else csv)')
    common.add_argument('--root-tol', type=float, default=None,
                        help='Relative tolerance of root searches (default 1e-12)')
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true', help='Log at DEBUG level')
    verbosity.add_argument('-q', '--quiet', action='store_true', help='Log warnings only')

    trials = argparse.ArgumentParser(add_help=False)
    trials.add_argument('--seed', type=int, default=None, help='Override sweep.base_seed')
    trials.add_argument('--paper-scale', '--full-scale', dest='full_scale', action='store_true',
                        help='Run 500 trials at n = d = 10000')

    subparsers = parser.add_subparsers(dest='command')
    subparsers.required = True
    subparsers.add_parser('predict', parents=[common],
                          help='Asymptotic recovery per amplitude and weight scheme')
    subparsers.add_parser('weights', parents=[common],
                          help='Per-group weights of the standard schemes')
    sample_plan = subparsers.add_parser('sample-plan', parents=[common],
                                        help='Budget constrained sampling design')
    sample_plan.add_argument('--threads', type=int, default=None,
                             help='Worker threads (default: WPCAPY_THREADS, else 1)')
    sweep = subparsers.add_parser('sweep', parents=[common, trials],
                                  help='Monte Carlo lambda sweep')
    sweep.add_argument('--threads', type=int, default=None,
                       help='Worker threads (default: WPCAPY_THREADS, else 1)')
    simulate = subparsers.add_parser('simulate', parents=[common, trials],
                                     help='Single Monte Carlo trial')
    simulate.add_argument('--lambda', dest='lambda_value', type=float, default=None,
                          help='Lambda of the sweep grid; the first configured scheme otherwise')
    simulate.add_argument('--trial', type=int, default=0, help='Trial index')
    impact = subparsers.add_parser('impact', parents=[common],
                                   help='Recovery as one parameter varies')
    impact.add_argument('--weight-path', action='store_true',
                        help='Emit the two-group weight path instead of the impact block')
    return parser

def _apply_overrides(config, args):
    if config.sweep is None:
        return
    if getattr(args, 'full_scale', False):
        config.sweep = MonteCarlo.full_scale(config.sweep)
    if getattr(args, 'seed', None) is not None:
        if args.seed < 0:
            raise ConfigValidationError('seed: must be nonnegative', field='seed')
        config.sweep.base_seed = args.seed

def run(args):
    config = ExperimentConfig.from_file(args.config)
    _apply_overrides(config, args)
    root_tol = args.root_tol
    if args.command == 'predict':
        result = cmd_predict(config, root_tol=root_tol)
    elif args.command == 'weights':
        result = cmd_weights(config, root_tol=root_tol)
    elif args.command == 'sample-plan':
        result = cmd_sample_plan(config, root_tol=root_tol, threads=args.threads)
    elif args.command == 'sweep':
        result = cmd_sweep(config, root_tol=root_tol, threads=args.threads)
    elif args.command == 'simulate':
        result = cmd_simulate(config, lambda_value=args.lambda_value, trial_index=args.trial,
                              root_tol=root_tol)
    else:
        result = cmd_impact(config, weight_path=args.weight_path, root_tol=root_tol)
    write_result(result, args.out or config.output_path, args.format or config.output_format)
    return result

def main(argv=None):
    """Entry point of the wpcapy command. Returns the exit code: 0 on
    success, 2 for invalid experiment files, 1 for other errors."""

    args = build_parser().parse_args(argv)
    level = logging.INFO
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    logging.basicConfig(level=level, stream=sys.stderr,
                        format='%(asctime)s %(name)s %(levelname)s %(message)s')
    try:
        run(args)
    except ConfigValidationError as err:
        print('wpcapy: invalid config: %s' % err.message, file=sys.stderr)
        return 2
    except WPCAError as err:
        print('wpcapy: %s: %s' % (type(err).__name__, err.message), file=sys.stderr)
        return 1
    except (IOError, OSError) as err:
        print('wpcapy: %s' % err, file=sys.stderr)
        return 1
    return 0
