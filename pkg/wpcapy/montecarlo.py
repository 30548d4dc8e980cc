#!/usr/bin/env python

from __future__ import division

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from wpcapy.wpca_base import WPCABase
from wpcapy.error import WPCAError
from wpcapy.asymptotics import Asymptotics
from wpcapy.data_model import DataModel
from wpcapy.estimator import WpcaEstimator
from wpcapy.models import (
    AsymptoticConfig,
    InvalidSweepError,
    SampleWeights,
    SweepSpec,
    SweepTable,
    TrialRecord,
    WeightScheme
)
from wpcapy.utils import Utils
from wpcapy.wpca_enum import Metric, WeightKind

logger = logging.getLogger(__name__)

FULL_SCALE_TRIALS = 500
FULL_SCALE_DIM = 10000
QUANTILE_METHOD = 'linear'

class MonteCarlo(WPCABase):
    """Seeded simulation trials and lambda sweeps that compare empirical
    weighted PCA recovery with its asymptotic predictions"""

    def __init__(self, root_tol=None, threads=None):
        """Returns a MonteCarlo instance.
        Args:
          root_tol (float):
            Relative tolerance of the prediction root searches.
          threads (int):
            Worker threads running trials concurrently. Results do not
            depend on it.
        """

        super(MonteCarlo, self).__init__(root_tol, threads)
        self._model = DataModel(root_tol=self._root_tol, threads=1)
        self._estimator = WpcaEstimator(root_tol=self._root_tol, threads=1)
        self._asymptotics = Asymptotics(root_tol=self._root_tol, threads=1)

    @staticmethod
    def full_scale(spec):
        """Returns a copy of spec with 500 trials at n = d = 10^4."""
        return SweepSpec(spike=spec.spike,
                         noise=spec.noise,
                         d=FULL_SCALE_DIM,
                         n=FULL_SCALE_DIM,
                         trials=FULL_SCALE_TRIALS,
                         lambda_grid=spec.lambda_grid,
                         base_seed=spec.base_seed,
                         metrics=spec.metrics,
                         score_distribution=spec.score_distribution)

    @staticmethod
    def lambda_weights(noise, lambda_value):
        """Two-group weights w_1^2 = (1 - lambda) / p_1, w_2^2 = lambda / p_2,
        which keep sum_l p_l w_l^2 = 1. lambda = p_2 gives exactly (1, 1)
        and lambda = 1 gives exactly (0, 1 / p_2).
        Raises:
          InvalidSweepError, DegenerateLambdaError"""

        if noise.L != 2:
            raise InvalidSweepError('Lambda weights need exactly two noise groups, got %d' % noise.L)
        p1, p2 = noise.proportions
        if p1 == 0 or p2 == 0:
            raise DegenerateLambdaError(
                'Lambda weights divide by the group proportions, got p=(%r, %r)' % (p1, p2))
        lambda_value = float(lambda_value)
        # 1 - lambda and p_1 + p_2 - lambda round differently
        if lambda_value <= p2:
            w1 = 1.0 + (p2 - lambda_value) / p1
        else:
            w1 = (1.0 - lambda_value) / p1
        return WeightScheme(kind=WeightKind.custom, per_group=[w1, lambda_value / p2])

    def _lambda_index(self, spec, lambda_value):
        matches = np.flatnonzero(np.isclose(spec.lambda_grid, float(lambda_value), rtol=0.0, atol=1e-12))
        if matches.size == 0:
            raise InvalidSweepError('lambda=%r is not on the sweep grid' % (lambda_value,))
        return int(matches[0])

    def predictions(self, spec, per_group):
        """Asymptotic counterparts of the trial metrics at c = n/d.
        Returns:
          dict keyed by metric value; per-component lists, except mse"""

        cfg = AsymptoticConfig(c=spec.n / spec.d, noise=spec.noise, weights=per_group,
                               root_tol=self._root_tol)
        per_component = [self._asymptotics.predict(cfg, theta2) for theta2 in spec.spike.amplitudes]
        return {
            str(Metric.component): [p.component_recovery for p in per_component],
            str(Metric.score_weighted): [p.score_recovery for p in per_component],
            str(Metric.score_unweighted): [None for _ in per_component],
            str(Metric.amplitude): [p.amplitude_limit for p in per_component],
            str(Metric.cross): [p.cross_product for p in per_component],
            str(Metric.mse): self._asymptotics.aggregate_prediction(cfg, spec.spike)[2]
        }

    def _empirical(self, spec, fit, dataset):
        estimator = self._estimator
        spike = spec.spike
        metrics = {}
        for metric in spec.metrics:
            if metric == Metric.mse:
                metrics[str(metric)] = estimator.empirical_weighted_mse(fit, dataset)
                continue
            values = []
            for i in range(spike.k):
                if i >= fit.k:
                    values.append(float('nan'))
                elif metric == Metric.component:
                    values.append(estimator.empirical_component_recovery(fit, dataset, spike, i)[0])
                elif metric == Metric.score_weighted:
                    values.append(estimator.empirical_score_recovery(fit, dataset, spike, i)[0])
                elif metric == Metric.score_unweighted:
                    values.append(estimator.empirical_unweighted_score_recovery(fit, dataset, spike, i)[0])
                elif metric == Metric.amplitude:
                    values.append(float(fit.amplitudes[i]))
                else:
                    values.append(estimator.empirical_cross_product(fit, dataset, spike, i))
            metrics[str(metric)] = values
        return metrics

    def run_scheme_trial(self, spec, scheme, trial_index, lambda_index=0, lambda_value=None):
        """Runs one trial under an arbitrary per-group weight scheme.
        Args:
          spec (SweepSpec):
            model, sizes, seed and metrics.
          scheme (WeightScheme):
            per-group weights w_l^2.
          trial_index (int):
            trial number, part of the seed.
          lambda_index (int):
            grid position, part of the seed.
          lambda_value (float):
            recorded on the trial, None outside lambda sweeps.
        Returns:
          TrialRecord"""

        seed = Utils.derive_seed(spec.base_seed, lambda_index, trial_index)
        logger.debug('Trial %d at lambda index %d uses seed %d', trial_index, lambda_index, seed)
        dataset = self._model.generate_dataset(spec.spike, spec.noise, spec.d, spec.n,
                                               score_dist=spec.score_distribution, seed=seed)
        weights = SampleWeights.from_groups(scheme.per_group, dataset.noise_labels)
        fit = self._estimator.fit_wpca(dataset.data, weights, k=spec.spike.k)

        predictions = self.predictions(spec, scheme.per_group)
        requested = set(str(metric) for metric in spec.metrics)
        return TrialRecord(lambda_value=lambda_value,
                           lambda_index=lambda_index,
                           trial_index=int(trial_index),
                           seed=seed,
                           weights=scheme.per_group,
                           metrics=self._empirical(spec, fit, dataset),
                           predictions=dict((key, value) for key, value in predictions.items()
                                            if key in requested))

    def run_trial(self, spec, lambda_value, trial_index):
        """Runs one seeded trial of a lambda sweep.
        Args:
          spec (SweepSpec):
            sweep definition; the noise profile must have two groups.
          lambda_value (float):
            a value of spec.lambda_grid.
          trial_index (int):
            trial number.
        Returns:
          TrialRecord
        Raises:
          InvalidSweepError, DegenerateLambdaError"""

        lambda_index = self._lambda_index(spec, lambda_value)
        scheme = self.lambda_weights(spec.noise, lambda_value)
        return self.run_scheme_trial(spec, scheme, trial_index,
                                     lambda_index=lambda_index,
                                     lambda_value=float(spec.lambda_grid[lambda_index]))

    def _aggregate_rows(self, spec, lambda_value, records):
        rows = []
        for metric in spec.metrics:
            key = str(metric)
            if metric == Metric.mse:
                series = [(None, [record.metrics[key] for record in records],
                           records[0].predictions.get(key))]
            else:
                series = []
                for i in range(spec.spike.k):
                    values = [record.metrics[key][i] for record in records]
                    prediction = records[0].predictions.get(key)
                    series.append((i, values, prediction[i] if prediction else None))
            for component_index, values, prediction in series:
                values = np.asarray(values, dtype=float)
                q25, q75 = np.percentile(values, [25, 75], method=QUANTILE_METHOD)
                rows.append({'lambda': float(lambda_value),
                             'component_index': component_index,
                             'metric': key,
                             'mean': float(np.mean(values)),
                             'q25': float(q25),
                             'q75': float(q75),
                             'prediction': prediction,
                             'n': spec.n,
                             'd': spec.d,
                             'trials': spec.trials})
        return rows

    def run_sweep(self, spec):
        """Runs spec.trials trials at every lambda of the grid and aggregates
        them in trial order into means, linear-interpolation quartiles and
        the asymptotic prediction.
        Args:
          spec (SweepSpec):
            sweep definition.
        Returns:
          SweepTable
        Raises:
          InvalidSweepError, DegenerateLambdaError"""

        tasks = [(lambda_value, trial)
                 for lambda_value in spec.lambda_grid
                 for trial in range(spec.trials)]
        logger.info('Starting sweep: %d lambdas x %d trials at n=%d, d=%d on %d threads',
                    spec.lambda_grid.size, spec.trials, spec.n, spec.d, self._threads)

        def run(task):
            return self.run_trial(spec, task[0], task[1])

        if self._threads > 1:
            with ThreadPoolExecutor(max_workers=self._threads) as executor:
                records = list(executor.map(run, tasks))
        else:
            records = [run(task) for task in tasks]

        rows = []
        for lambda_index, lambda_value in enumerate(spec.lambda_grid):
            start = lambda_index * spec.trials
            rows.extend(self._aggregate_rows(spec, lambda_value, records[start:start + spec.trials]))
        logger.info('Sweep finished with %d rows', len(rows))
        return SweepTable(rows=rows, quantile_method=QUANTILE_METHOD)

    def debias_amplitude(self, observed, cfg):
        """Estimates theta^2 from an observed weighted PCA amplitude by
        inverting the asymptotic amplitude limit above the transition.
        Args:
          observed (float):
            observed amplitude theta_hat^2.
          cfg (AsymptoticConfig):
            model parameters and per-group weights.
        Returns:
          float, theta^2 with predict(cfg, theta^2).amplitude_limit = observed
        Raises:
          BelowTransitionError"""

        observed = float(observed)
        asymptotics = self._asymptotics
        alpha = asymptotics.largest_root_A(cfg)
        if alpha > cfg.pole_max:
            bulk = alpha * asymptotics.eval_C(alpha, cfg) / cfg.c
        else:
            # A has no root: every active group is noiseless
            bulk = 0.0
        if observed <= bulk:
            raise BelowTransitionError(
                'Observed amplitude %r is at or below the bulk edge prediction %r' % (observed, bulk))

        def excess(x):
            return x * asymptotics.eval_C(x, cfg) / cfg.c - observed

        beta = Utils.largest_root_above(excess, alpha, cfg.root_tol)
        mask = cfg.active
        p = cfg.noise.proportions[mask]
        w2 = cfg.weights[mask]
        gaps = beta - w2 * cfg.noise.variances[mask]
        theta2 = 1.0 / (cfg.c * float(np.sum(p * w2 / gaps)))
        logger.debug('De-biased amplitude %r to %r through beta=%r', observed, theta2, beta)
        return theta2


class BelowTransitionError(WPCAError):

    """Below Transition Error Type.

    This error is returned when an observed amplitude is at or below the
    bulk edge prediction, where the amplitude limit cannot be inverted.
    """


class DegenerateLambdaError(WPCAError):

    """Degenerate Lambda Error Type.

    This error is returned when the lambda parameterization of two-group
    weights would divide by a zero group proportion.
    """
