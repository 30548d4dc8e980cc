# -*- coding: utf-8 -*-
from __future__ import division

import json
import math

import numpy as np

from wpcapy.error import WPCAError
from wpcapy.utils import Utils
from wpcapy.wpca_enum import (
    Metric,
    Normalization,
    ScoreDistribution,
    WeightKind
)

UNBOUNDED = 'unbounded'

class InvalidNoiseProfileError(WPCAError):

    """Invalid Noise Profile Error Type.

    This error is returned when proportions do not sum to one, a variance is
    negative, the profile is empty, or it is noiseless without asking for it.
    """


class InvalidSpikeModelError(WPCAError):

    """Invalid Spike Model Error Type.

    This error is returned when the sample-to-dimension ratio is not
    positive or the amplitude list is empty or holds a nonpositive value.
    """


class InvalidWeightsError(WPCAError):

    """Invalid Weights Error Type.

    This error is returned when a weight is negative or every weight that
    could influence the fit is zero.
    """


class InvalidConfigError(WPCAError):

    """Invalid Config Error Type.

    This error is returned when the per-group weights of an asymptotic
    configuration do not match its noise profile.
    """


class InvalidBudgetError(WPCAError):

    """Invalid Budget Error Type.

    This error is returned when a budget problem has a source that is both
    free and unlimited, a negative cost or availability, or a nonpositive
    noise variance.
    """


class InvalidSweepError(WPCAError):

    """Invalid Sweep Error Type.

    This error is returned when a sweep has no trials or a lambda grid that
    is unsorted or leaves [0, 1].
    """


class WPCAModel(object):
    """ Base class from which all wpcapy models will inherit."""

    def __init__(self, **kwargs):
        self.param_defaults = {}

    def __str__(self):
        """ Returns a string representation of WPCAModel. By default
        this is the same as as_json_string()."""
        return self.as_json_string()

    def __eq__(self, other):
        return other is not None and self.as_json_string() == other.as_json_string()

    def __ne__(self, other):
        return not self.__eq__(other)

    def as_json_string(self):
        """ Returns the WPCAModel as a JSON string based on key/value
        pairs returned from the as_dict() method."""
        return json.dumps(self.as_dict(), sort_keys=True)

    def as_dict(self):
        """ Create a dictionary representation of the object. Nested
        WPCAModels are converted with their own as_dict(), numpy values
        become plain python lists and numbers."""
        data = {}

        for key in self.param_defaults:
            value = getattr(self, key, None)
            if isinstance(value, (list, tuple, set)) and not isinstance(value, np.ndarray):
                data[key] = list()
                for subobj in value:
                    if getattr(subobj, 'as_dict', None):
                        data[key].append(subobj.as_dict())
                    else:
                        data[key].append(Utils.to_jsonable(subobj))
                if isinstance(value, set):
                    data[key] = sorted(data[key])
            elif getattr(value, 'as_dict', None):
                data[key] = value.as_dict()
            elif value is not None:
                data[key] = Utils.to_jsonable(value)
        return data

    @classmethod
    def new_from_jsondict(cls, data, **kwargs):
        """ Create a new instance based on a JSON dict. Any kwargs should be
        supplied by the inherited, calling class.

        Args:
            data (dict):
              A JSON dict, as produced by as_dict().
        """

        json_data = data.copy()
        if kwargs:
            for key, val in kwargs.items():
                json_data[key] = val

        c = cls(**json_data)
        c._json = data
        return c

    def _assign(self, kwargs):
        for (param, default) in self.param_defaults.items():
            setattr(self, param, kwargs.get(param, default))


class NoiseProfile(WPCAModel):
    """Noise groups (proportion p_l, variance sigma_l^2) of the samples."""

    def __init__(self, **kwargs):
        super(NoiseProfile, self).__init__()
        self.param_defaults = {
            'proportions': None,
            'variances': None,
            'allow_noiseless': False
        }
        self._assign(kwargs)

        if self.proportions is None or self.variances is None:
            raise InvalidNoiseProfileError('Noise profile needs proportions and variances')
        self.proportions = np.asarray(self.proportions, dtype=float).ravel()
        self.variances = np.asarray(self.variances, dtype=float).ravel()
        self._validate()

    def _validate(self):
        if self.proportions.size == 0:
            raise InvalidNoiseProfileError('Noise profile is empty')
        if self.proportions.size != self.variances.size:
            raise InvalidNoiseProfileError(
                'Got %d proportions for %d variances' % (self.proportions.size, self.variances.size))
        if not np.all(np.isfinite(self.proportions)) or not np.all(np.isfinite(self.variances)):
            raise InvalidNoiseProfileError('Proportions and variances must be finite')
        if np.any(self.proportions < 0) or np.any(self.proportions > 1):
            raise InvalidNoiseProfileError('Proportions must lie in [0, 1]')
        if abs(self.proportions.sum() - 1.0) > 1e-12:
            raise InvalidNoiseProfileError(
                'Proportions sum to %r instead of 1' % float(self.proportions.sum()))
        if np.any(self.variances < 0):
            raise InvalidNoiseProfileError('Variances must be nonnegative')
        if not self.allow_noiseless and not np.any(self.variances > 0):
            raise InvalidNoiseProfileError(
                'All variances are zero; pass allow_noiseless=True for noiseless data')
        if np.unique(self.variances).size != self.variances.size:
            raise InvalidNoiseProfileError(
                'Group variances must be distinct; build the profile with from_groups to merge them')

    @classmethod
    def from_groups(cls, groups, allow_noiseless=False):
        """Builds a profile from (proportion, variance) pairs, merging
        groups that share a variance by summing their proportions.
        Args:
          groups (list):
            list of (proportion, variance) pairs.
          allow_noiseless (bool):
            accept a profile whose variances are all zero.
        Returns:
          NoiseProfile"""

        merged = {}
        order = []
        for proportion, variance in groups:
            variance = float(variance)
            if variance not in merged:
                merged[variance] = 0.0
                order.append(variance)
            merged[variance] += float(proportion)
        return cls(proportions=[merged[v] for v in order],
                   variances=order,
                   allow_noiseless=allow_noiseless)

    @property
    def groups(self):
        return list(zip(self.proportions.tolist(), self.variances.tolist()))

    @property
    def L(self):
        return int(self.proportions.size)

    def inverse_average_variance(self):
        """Returns sigma_bar^2 with 1/sigma_bar^2 = sum_l p_l / sigma_l^2."""
        if np.any(self.variances[self.proportions > 0] == 0):
            return 0.0
        mask = self.proportions > 0
        return 1.0 / float(np.sum(self.proportions[mask] / self.variances[mask]))

    def average_variance(self):
        return float(np.dot(self.proportions, self.variances))


class SpikeModel(WPCAModel):
    """Sample-to-dimension ratio c and planted amplitudes theta_i^2."""

    def __init__(self, **kwargs):
        super(SpikeModel, self).__init__()
        self.param_defaults = {
            'c': None,
            'amplitudes': None
        }
        self._assign(kwargs)

        if self.c is None or not float(self.c) > 0 or not math.isfinite(float(self.c)):
            raise InvalidSpikeModelError('c must be a positive real, got %r' % (self.c,))
        self.c = float(self.c)
        amplitudes = np.asarray(self.amplitudes if self.amplitudes is not None else [],
                                dtype=float).ravel()
        if amplitudes.size == 0:
            raise InvalidSpikeModelError('amplitudes must hold at least one value')
        if np.any(~np.isfinite(amplitudes)) or np.any(amplitudes <= 0):
            raise InvalidSpikeModelError('amplitudes must be positive reals')
        # stable descending sort keeps equal amplitudes adjacent in input order
        order = np.argsort(-amplitudes, kind='stable')
        self.amplitudes = amplitudes[order]

    @property
    def k(self):
        return int(self.amplitudes.size)


class SyntheticDataset(WPCAModel):
    """Data drawn from the spiked heteroscedastic model with its ground truth."""

    def __init__(self, **kwargs):
        super(SyntheticDataset, self).__init__()
        self.param_defaults = {
            'data': None,
            'truth_components': None,
            'truth_scores': None,
            'truth_amplitudes': None,
            'noise_labels': None,
            'dims': None,
            'seed': None
        }
        self._assign(kwargs)
        self.data = np.asarray(self.data, dtype=float)
        self.truth_components = np.asarray(self.truth_components, dtype=float)
        self.truth_scores = np.asarray(self.truth_scores, dtype=float)
        self.truth_amplitudes = np.asarray(self.truth_amplitudes, dtype=float).ravel()
        self.noise_labels = np.asarray(self.noise_labels, dtype=int).ravel()
        if self.dims is None:
            self.dims = tuple(self.data.shape)
        self.dims = tuple(int(v) for v in self.dims)

    @property
    def signal(self):
        """The noiseless matrix X = U Theta Z^T."""
        return (self.truth_components * np.sqrt(self.truth_amplitudes)).dot(self.truth_scores.T)


class SampleWeights(WPCAModel):
    """Per-sample weight values omega_j^2."""

    def __init__(self, **kwargs):
        super(SampleWeights, self).__init__()
        self.param_defaults = {
            'values': None
        }
        self._assign(kwargs)
        self.values = np.asarray(self.values if self.values is not None else [],
                                 dtype=float).ravel()
        if self.values.size == 0:
            raise InvalidWeightsError('Sample weights are empty')
        if np.any(~np.isfinite(self.values)) or np.any(self.values < 0):
            raise InvalidWeightsError('Sample weights must be finite and nonnegative')
        if not np.any(self.values > 0):
            raise InvalidWeightsError('At least one sample weight must be positive')

    @classmethod
    def uniform(cls, n):
        return cls(values=np.ones(int(n)))

    @classmethod
    def from_groups(cls, per_group, labels):
        """Expands per-group weights w_l^2 to samples through group labels."""
        per_group = np.asarray(per_group, dtype=float).ravel()
        return cls(values=per_group[np.asarray(labels, dtype=int)])

    @property
    def n(self):
        return int(self.values.size)


class WpcaFit(WPCAModel):
    """Components, amplitudes and scores of a weighted PCA fit."""

    def __init__(self, **kwargs):
        super(WpcaFit, self).__init__()
        self.param_defaults = {
            'components': None,
            'amplitudes': None,
            'scores': None,
            'weights_used': None,
            'k': None,
            'requested_k': None,
            'rank_deficient': False
        }
        self._assign(kwargs)
        self.components = np.asarray(self.components, dtype=float)
        self.amplitudes = np.asarray(self.amplitudes, dtype=float).ravel()
        self.scores = np.asarray(self.scores, dtype=float)
        if isinstance(self.weights_used, dict):
            self.weights_used = SampleWeights.new_from_jsondict(self.weights_used)
        if self.k is None:
            self.k = int(self.amplitudes.size)
        if self.requested_k is None:
            self.requested_k = self.k


class AsymptoticConfig(WPCAModel):
    """Parameters of the asymptotic recovery predictions."""

    def __init__(self, **kwargs):
        super(AsymptoticConfig, self).__init__()
        self.param_defaults = {
            'c': None,
            'noise': None,
            'weights': None,
            'root_tol': 1e-12
        }
        self._assign(kwargs)
        if isinstance(self.noise, dict):
            self.noise = NoiseProfile.new_from_jsondict(self.noise)
        if not isinstance(self.noise, NoiseProfile):
            raise InvalidConfigError('noise must be a NoiseProfile')
        if self.c is None or not float(self.c) > 0:
            raise InvalidConfigError('c must be a positive real, got %r' % (self.c,))
        self.c = float(self.c)
        if self.weights is None:
            self.weights = np.ones(self.noise.L)
        self.weights = np.asarray(self.weights, dtype=float).ravel()
        if self.weights.size != self.noise.L:
            raise InvalidConfigError(
                'Got %d weights for %d noise groups' % (self.weights.size, self.noise.L))
        if np.any(~np.isfinite(self.weights)) or np.any(self.weights < 0):
            raise InvalidConfigError('Weights must be finite and nonnegative')
        if not np.any(self.weights * self.noise.proportions > 0):
            raise InvalidConfigError('At least one group needs a positive weight and proportion')
        self.root_tol = float(self.root_tol) if self.root_tol else 1e-12

    @property
    def active(self):
        """Mask of groups with p_l w_l^2 > 0."""
        return self.weights * self.noise.proportions > 0

    @property
    def poles(self):
        """w_l^2 sigma_l^2 for the active groups."""
        return (self.weights * self.noise.variances)[self.active]

    @property
    def pole_max(self):
        return float(np.max(self.poles))

    def with_weights(self, weights):
        return AsymptoticConfig(c=self.c, noise=self.noise, weights=weights, root_tol=self.root_tol)


class RecoveryPrediction(WPCAModel):
    """Asymptotic amplitude, recoveries and roots for one component."""

    def __init__(self, **kwargs):
        super(RecoveryPrediction, self).__init__()
        self.param_defaults = {
            'theta2': None,
            'amplitude_limit': None,
            'component_recovery': None,
            'score_recovery': None,
            'cross_product': None,
            'alpha': None,
            'beta': None,
            'above_transition': None,
            'truncated': False
        }
        self._assign(kwargs)


class WeightScheme(WPCAModel):
    """Per-group weights w_l^2 with the family and normalization that made them."""

    def __init__(self, **kwargs):
        super(WeightScheme, self).__init__()
        self.param_defaults = {
            'kind': WeightKind.custom,
            'per_group': None,
            'normalization': Normalization.none
        }
        self._assign(kwargs)
        self.kind = WeightKind(str(self.kind))
        self.normalization = Normalization(str(self.normalization))
        self.per_group = np.asarray(self.per_group if self.per_group is not None else [],
                                    dtype=float).ravel()
        if self.per_group.size == 0:
            raise InvalidWeightsError('Weight scheme has no groups')
        if np.any(~np.isfinite(self.per_group)) or np.any(self.per_group < 0):
            raise InvalidWeightsError('Group weights must be finite and nonnegative')


class BudgetProblem(WPCAModel):
    """Sources with noise variance, cost and availability under one budget."""

    def __init__(self, **kwargs):
        super(BudgetProblem, self).__init__()
        self.param_defaults = {
            'variances': None,
            'costs': None,
            'availabilities': None,
            'budget_per_dim': None,
            'theta2': None
        }
        self._assign(kwargs)
        self.variances = np.asarray(self.variances, dtype=float).ravel()
        self.costs = np.asarray(self.costs, dtype=float).ravel()
        availabilities = self.availabilities
        if availabilities is None:
            availabilities = [UNBOUNDED] * self.variances.size
        self.availabilities = np.array(
            [np.inf if a is None or a == UNBOUNDED else float(a) for a in availabilities],
            dtype=float)
        self._validate()

    def _validate(self):
        L = self.variances.size
        if L == 0:
            raise InvalidBudgetError('Budget problem has no sources')
        if self.costs.size != L or self.availabilities.size != L:
            raise InvalidBudgetError('Every source needs a variance, a cost and an availability')
        if np.any(~np.isfinite(self.variances)) or np.any(self.variances <= 0):
            raise InvalidBudgetError('Source variances must be positive reals')
        if np.any(~np.isfinite(self.costs)) or np.any(self.costs < 0):
            raise InvalidBudgetError('Source costs must be nonnegative reals')
        if np.any(self.availabilities < 0):
            raise InvalidBudgetError('Source availabilities must be nonnegative')
        free_and_unlimited = (self.costs == 0) & np.isinf(self.availabilities)
        if np.any(free_and_unlimited):
            raise InvalidBudgetError(
                'Sources %s have zero cost and unbounded availability; recovery grows without bound'
                % (np.flatnonzero(free_and_unlimited).tolist(),))
        if self.budget_per_dim is None or not float(self.budget_per_dim) >= 0:
            raise InvalidBudgetError('budget_per_dim must be a nonnegative real')
        self.budget_per_dim = float(self.budget_per_dim)
        if self.theta2 is None or not float(self.theta2) > 0:
            raise InvalidBudgetError('theta2 must be a positive real')
        self.theta2 = float(self.theta2)

    @property
    def L(self):
        return int(self.variances.size)

    def as_dict(self):
        data = super(BudgetProblem, self).as_dict()
        data['availabilities'] = [UNBOUNDED if math.isinf(a) else a
                                  for a in self.availabilities.tolist()]
        return data


class SamplingPlan(WPCAModel):
    """Chosen sampling rates c_l with their optimally weighted recovery."""

    def __init__(self, **kwargs):
        super(SamplingPlan, self).__init__()
        self.param_defaults = {
            'allocation': None,
            'recovery': None,
            'vertex': True,
            'saturated': None,
            'vertices': None,
            'vertex_recoveries': None
        }
        self._assign(kwargs)
        self.allocation = np.asarray(self.allocation, dtype=float).ravel()


class SweepSpec(WPCAModel):
    """A lambda sweep of Monte Carlo trials over a two-group noise profile."""

    def __init__(self, **kwargs):
        super(SweepSpec, self).__init__()
        self.param_defaults = {
            'spike': None,
            'noise': None,
            'd': None,
            'n': None,
            'trials': 100,
            'lambda_grid': None,
            'base_seed': 0,
            'metrics': None,
            'score_distribution': ScoreDistribution.gaussian
        }
        self._assign(kwargs)
        if isinstance(self.spike, dict):
            self.spike = SpikeModel.new_from_jsondict(self.spike)
        if isinstance(self.noise, dict):
            self.noise = NoiseProfile.new_from_jsondict(self.noise)
        if self.lambda_grid is None:
            self.lambda_grid = np.linspace(0.0, 1.0, 11)
        self.lambda_grid = np.asarray(self.lambda_grid, dtype=float).ravel()
        if self.metrics is None:
            self.metrics = [Metric.component, Metric.score_weighted, Metric.amplitude,
                            Metric.cross, Metric.mse]
        self.metrics = sorted(set(Metric(str(m)) for m in self.metrics),
                              key=lambda m: list(Metric).index(m))
        self.score_distribution = ScoreDistribution(str(self.score_distribution))
        self._validate()

    def _validate(self):
        if self.trials is None or int(self.trials) < 1:
            raise InvalidSweepError('trials must be >= 1')
        self.trials = int(self.trials)
        if self.d is None or self.n is None or int(self.d) < 1 or int(self.n) < 1:
            raise InvalidSweepError('d and n must be positive integers')
        self.d = int(self.d)
        self.n = int(self.n)
        if self.lambda_grid.size == 0:
            raise InvalidSweepError('lambda_grid is empty')
        if np.any(self.lambda_grid < 0) or np.any(self.lambda_grid > 1):
            raise InvalidSweepError('lambda_grid must lie within [0, 1]')
        if np.any(np.diff(self.lambda_grid) < 0):
            raise InvalidSweepError('lambda_grid must be sorted')
        self.base_seed = int(self.base_seed)


class TrialRecord(WPCAModel):
    """Empirical metrics of one Monte Carlo trial with matching predictions."""

    def __init__(self, **kwargs):
        super(TrialRecord, self).__init__()
        self.param_defaults = {
            'lambda_value': None,
            'lambda_index': None,
            'trial_index': None,
            'seed': None,
            'weights': None,
            'metrics': None,
            'predictions': None
        }
        self._assign(kwargs)
        if self.metrics is None:
            self.metrics = {}
        if self.predictions is None:
            self.predictions = {}


class SweepTable(WPCAModel):
    """Per-lambda aggregates of a sweep ready for plotting."""

    COLUMNS = ['lambda', 'component_index', 'metric', 'mean', 'q25', 'q75',
               'prediction', 'n', 'd', 'trials']

    def __init__(self, **kwargs):
        super(SweepTable, self).__init__()
        self.param_defaults = {
            'rows': None,
            'quantile_method': 'linear'
        }
        self._assign(kwargs)
        if self.rows is None:
            self.rows = []

    def select(self, metric, component_index=None, lambda_value=None):
        """Returns the rows for one metric, optionally one component and lambda."""
        metric = str(metric)
        selected = []
        for row in self.rows:
            if row['metric'] != metric:
                continue
            if component_index is not None and row['component_index'] != component_index:
                continue
            if lambda_value is not None and not np.isclose(row['lambda'], lambda_value):
                continue
            selected.append(row)
        return selected
