#!/usr/bin/env python

from __future__ import division

import codecs
import logging

import numpy as np
import yaml

from wpcapy.error import WPCAError
from wpcapy.models import (
    UNBOUNDED,
    BudgetProblem,
    NoiseProfile,
    SpikeModel,
    SweepSpec
)
from wpcapy.wpca_enum import (
    ImpactParameter,
    Metric,
    Normalization,
    OutputFormat,
    ScoreDistribution,
    WeightKind
)

logger = logging.getLogger(__name__)

DEFAULT_SCHEMES = [WeightKind.uniform,
                   WeightKind.inverse_variance,
                   WeightKind.square_inverse_variance,
                   WeightKind.optimal]

class ExperimentConfig(object):
    """Parsed and validated experiment file. Blocks a command does not use
    may be missing; require() reports the ones it needs."""

    def __init__(self,
                 c=None,
                 amplitudes=None,
                 noise=None,
                 schemes=None,
                 normalization=Normalization.none,
                 binary_mask=None,
                 custom_weights=None,
                 theta2=None,
                 sweep=None,
                 budget=None,
                 impact=None,
                 output_path=None,
                 output_format=OutputFormat.csv):
        self.c = c
        self.amplitudes = amplitudes
        self.noise = noise
        self.schemes = schemes if schemes is not None else list(DEFAULT_SCHEMES)
        self.normalization = normalization
        self.binary_mask = binary_mask
        self.custom_weights = custom_weights
        self.theta2 = theta2
        self.sweep = sweep
        self.budget = budget
        self.impact = impact
        self.output_path = output_path
        self.output_format = output_format

    @classmethod
    def from_file(cls, path):
        """Reads a YAML (or JSON) experiment file.
        Args:
          path (str):
            path of the file.
        Returns:
          ExperimentConfig
        Raises:
          ConfigValidationError"""

        try:
            with codecs.open(path, mode='r', encoding='utf-8') as f:
                data = yaml.safe_load(f)
        except IOError as err:
            raise error_from_config_field('config', 'cannot read %s (%s)' % (path, err))
        except yaml.YAMLError as err:
            mark = getattr(err, 'problem_mark', None)
            where = 'line %d, column %d' % (mark.line + 1, mark.column + 1) if mark else 'unknown position'
            raise error_from_config_field('config', 'invalid YAML at %s: %s'
                                          % (where, getattr(err, 'problem', err)))
        logger.debug('Loaded experiment file %s', path)
        return cls.from_dict(data if data is not None else {})

    @classmethod
    def from_dict(cls, data):
        """Validates a parsed experiment mapping.
        Raises:
          ConfigValidationError"""

        if not isinstance(data, dict):
            raise error_from_config_field('config', 'must be a mapping of blocks')

        c = _positive(data, 'c') if 'c' in data else None
        amplitudes = None
        if 'amplitudes' in data:
            amplitudes = _float_list(data, 'amplitudes')
            if not amplitudes:
                raise error_from_config_field('amplitudes', 'must be a non-empty list')
            if any(not a > 0 for a in amplitudes):
                raise error_from_config_field('amplitudes', 'values must be positive')
        noise = _noise(data['noise']) if 'noise' in data else None
        schemes = None
        if 'schemes' in data:
            schemes = [_enum(WeightKind, v, 'schemes') for v in _list(data, 'schemes')]
        normalization = _enum(Normalization, data.get('normalization', 'none'), 'normalization')
        binary_mask = _float_list(data, 'binary_mask') if 'binary_mask' in data else None
        custom_weights = _float_list(data, 'custom_weights') if 'custom_weights' in data else None
        theta2 = _positive(data, 'theta2') if 'theta2' in data else None

        for field, values in (('binary_mask', binary_mask), ('custom_weights', custom_weights)):
            if values is not None and noise is not None and len(values) != noise.L:
                raise error_from_config_field(field, 'needs one entry per noise group (%d)' % noise.L)
        _check_scheme_inputs(schemes or [], binary_mask, custom_weights)

        config = cls(c=c,
                     amplitudes=amplitudes,
                     noise=noise,
                     schemes=schemes,
                     normalization=normalization,
                     binary_mask=binary_mask,
                     custom_weights=custom_weights,
                     theta2=theta2)

        if 'sweep' in data:
            config.sweep = config._sweep(data['sweep'])
        if 'budget' in data:
            config.budget = config._budget(data['budget'])
        if 'impact' in data:
            config.impact = _impact(data['impact'])
        if 'output' in data:
            output = data['output']
            if not isinstance(output, dict):
                raise error_from_config_field('output', 'must be a mapping with path and format')
            config.output_path = output.get('path')
            config.output_format = _enum(OutputFormat, output.get('format', 'csv'), 'output.format')
        return config

    def require(self, *fields):
        """Raises ConfigValidationError naming the first missing block."""
        for field in fields:
            if getattr(self, field) is None:
                raise error_from_config_field(field, 'is required by this command')

    @property
    def spike(self):
        self.require('c', 'amplitudes')
        return SpikeModel(c=self.c, amplitudes=self.amplitudes)

    def amplitude(self):
        """theta2 for the weights and sample-plan commands, the largest
        amplitude when theta2 is not given."""
        if self.theta2 is not None:
            return self.theta2
        if self.amplitudes:
            return max(self.amplitudes)
        raise error_from_config_field('theta2', 'is required by this command')

    def _sweep(self, block):
        if not isinstance(block, dict):
            raise error_from_config_field('sweep', 'must be a mapping')
        self.require('c', 'amplitudes', 'noise')
        for field in ('d', 'n'):
            if field not in block:
                raise error_from_config_field('sweep.%s' % field, 'is required')
        trials = _integer(block, 'trials', 'sweep.trials', default=100)
        if trials < 1:
            raise error_from_config_field('sweep.trials', 'must be >= 1')
        d = _integer(block, 'd', 'sweep.d')
        n = _integer(block, 'n', 'sweep.n')
        if d < 1 or n < 1:
            raise error_from_config_field('sweep.d' if d < 1 else 'sweep.n', 'must be >= 1')
        grid = block.get('lambda_grid')
        if isinstance(grid, dict):
            try:
                grid = np.linspace(float(grid['start']), float(grid['stop']), int(grid['num']))
            except (KeyError, TypeError, ValueError):
                raise error_from_config_field('sweep.lambda_grid', 'range needs numeric start, stop and num')
        elif grid is not None:
            grid = _float_list(block, 'lambda_grid', 'sweep.lambda_grid')
        metrics = block.get('metrics')
        if metrics is not None:
            metrics = [_enum(Metric, m, 'sweep.metrics') for m in _list(block, 'metrics', 'sweep.metrics')]
        score_distribution = _enum(ScoreDistribution, block.get('score_distribution', 'gaussian'),
                                   'sweep.score_distribution')
        try:
            return SweepSpec(spike=self.spike,
                             noise=self.noise,
                             d=d,
                             n=n,
                             trials=trials,
                             lambda_grid=grid,
                             base_seed=_integer(block, 'base_seed', 'sweep.base_seed', default=0),
                             metrics=metrics,
                             score_distribution=score_distribution)
        except WPCAError as err:
            field = 'sweep.lambda_grid' if 'lambda' in err.message else 'sweep'
            raise error_from_config_field(field, err.message)

    def _budget(self, block):
        if not isinstance(block, dict):
            raise error_from_config_field('budget', 'must be a mapping')
        sources = block.get('sources')
        if not isinstance(sources, list) or not sources:
            raise error_from_config_field('budget.sources', 'must be a non-empty list')
        variances, costs, availabilities = [], [], []
        for index, source in enumerate(sources):
            field = 'budget.sources[%d]' % index
            if not isinstance(source, dict):
                raise error_from_config_field(field, 'must be a mapping with variance and cost')
            variances.append(_positive(source, 'variance', '%s.variance' % field))
            costs.append(_number(source, 'cost', '%s.cost' % field))
            availability = source.get('availability_per_dim', UNBOUNDED)
            if availability != UNBOUNDED:
                availability = _number(source, 'availability_per_dim', '%s.availability_per_dim' % field)
            availabilities.append(availability)
        if 'theta2' in block:
            theta2 = _positive(block, 'theta2', 'budget.theta2')
        else:
            theta2 = self.amplitude()
        try:
            return BudgetProblem(variances=variances,
                                 costs=costs,
                                 availabilities=availabilities,
                                 budget_per_dim=_number(block, 'budget_per_dim', 'budget.budget_per_dim'),
                                 theta2=theta2)
        except WPCAError as err:
            raise error_from_config_field('budget', err.message)


def _list(block, key, field=None):
    value = block.get(key)
    if not isinstance(value, list):
        raise error_from_config_field(field or key, 'must be a non-empty list')
    return value

def _float_list(block, key, field=None):
    values = _list(block, key, field)
    try:
        return [float(v) for v in values]
    except (TypeError, ValueError):
        raise error_from_config_field(field or key, 'must be a list of numbers')

def _number(block, key, field=None):
    value = block.get(key)
    if isinstance(value, bool) or value is None:
        raise error_from_config_field(field or key, 'must be a number')
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise error_from_config_field(field or key, 'must be a number')
    if not np.isfinite(value) or value < 0:
        raise error_from_config_field(field or key, 'must be a nonnegative number')
    return value

def _positive(block, key, field=None):
    value = _number(block, key, field)
    if not value > 0:
        raise error_from_config_field(field or key, 'must be positive')
    return value

def _integer(block, key, field, default=None):
    value = block.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise error_from_config_field(field, 'must be an integer')
    return value

def _enum(enum_type, value, field):
    try:
        return enum_type(str(value))
    except ValueError:
        raise error_from_config_field(
            field, '%r is not one of %s' % (value, ', '.join(str(v) for v in enum_type)))

def _noise(block):
    if not isinstance(block, list) or not block:
        raise error_from_config_field('noise', 'must be a non-empty list of groups')
    groups = []
    for index, group in enumerate(block):
        field = 'noise[%d]' % index
        if not isinstance(group, dict):
            raise error_from_config_field(field, 'must be a mapping with proportion and variance')
        groups.append((_number(group, 'proportion', '%s.proportion' % field),
                       _number(group, 'variance', '%s.variance' % field)))
    try:
        return NoiseProfile.from_groups(groups)
    except WPCAError as err:
        raise error_from_config_field('noise', err.message)

def _check_scheme_inputs(schemes, binary_mask, custom_weights):
    if WeightKind.binary in schemes:
        if binary_mask is None:
            raise error_from_config_field('binary_mask', 'is required by the binary scheme')
        if any(v not in (0.0, 1.0) for v in binary_mask):
            raise error_from_config_field('binary_mask', 'entries must be 0 or 1')
    if WeightKind.custom in schemes:
        if custom_weights is None:
            raise error_from_config_field('custom_weights', 'is required by the custom scheme')
        if any(not np.isfinite(v) or v < 0 for v in custom_weights):
            raise error_from_config_field('custom_weights', 'values must be finite and nonnegative')

def _impact(block):
    if not isinstance(block, dict):
        raise error_from_config_field('impact', 'must be a mapping with parameter and values')
    parameter = _enum(ImpactParameter, block.get('parameter'), 'impact.parameter')
    values = _float_list(block, 'values', 'impact.values')
    if not values:
        raise error_from_config_field('impact.values', 'must be a non-empty list')
    return {'parameter': parameter, 'values': values}


class ConfigValidationError(WPCAError):

    """Config Validation Error Type.

    This error is returned when an experiment file cannot be read or one of
    its fields is missing or invalid. The field attribute holds the dotted
    path of the offending field.
    """

    def __init__(self, message, field=None):
        super(ConfigValidationError, self).__init__(message)
        self.field = field


def error_from_config_field(field, reason):
    """Creates a ConfigValidationError naming the offending field.
    Args:
      field (str):
        dotted path of the field, e.g. sweep.trials.
      reason (str):
        what is wrong with it.
    Returns:
      ConfigValidationError"""

    return ConfigValidationError('%s: %s' % (field, reason), field=field)
