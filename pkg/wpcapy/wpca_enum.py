#!/usr/bin/env python

from enum import Enum

class ScoreDistribution(Enum):
    """Distributions the underlying scores are drawn from."""

    gaussian = 'gaussian'
    rademacher = 'rademacher'

    def __str__(self):
        return '%s' % self._value_

class WeightKind(Enum):
    """Families of per-group weights."""

    uniform = 'uniform'
    binary = 'binary'
    inverse_variance = 'inverse_variance'
    square_inverse_variance = 'square_inverse_variance'
    optimal = 'optimal'
    custom = 'custom'

    def __str__(self):
        return '%s' % self._value_

class Normalization(Enum):
    """Rescaling applied to a weight scheme after it is built."""

    none = 'none'
    unit_average = 'unit_average'
    unit_max = 'unit_max'

    def __str__(self):
        return '%s' % self._value_

class Metric(Enum):
    """Empirical metrics recorded by Monte Carlo trials."""

    component = 'component'
    score_weighted = 'score_weighted'
    score_unweighted = 'score_unweighted'
    amplitude = 'amplitude'
    cross = 'cross'
    mse = 'mse'

    def __str__(self):
        return '%s' % self._value_

class OutputFormat(Enum):
    """Formats the command line tool writes tables in."""

    csv = 'csv'
    json = 'json'

    def __str__(self):
        return '%s' % self._value_

class ImpactParameter(Enum):
    """Model parameters an impact sweep can vary."""

    c = 'c'
    theta2 = 'theta2'
    p2 = 'p2'
    sigma2_1 = 'sigma2_1'
    sigma2_2 = 'sigma2_2'
    added_rate = 'added_rate'

    def __str__(self):
        return '%s' % self._value_
