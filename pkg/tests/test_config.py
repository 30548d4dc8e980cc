#!/usr/bin/env python

import os
import unittest

import numpy as np

import wpcapy
from wpcapy.config import ConfigValidationError, ExperimentConfig, error_from_config_field

def config_path(name):
    return os.path.join(os.path.dirname(__file__), '..', 'testdata', 'configs', name)

class ExperimentConfigTest(unittest.TestCase):

    def _field(self, name):
        with self.assertRaises(ConfigValidationError) as context:
            ExperimentConfig.from_file(config_path(name))
        return context.exception.field

    def test_section_config(self):
        config = ExperimentConfig.from_file(config_path('two_groups.yaml'))
        self.assertEqual(config.c, 150.0)
        self.assertEqual(config.amplitudes, [1.0])
        self.assertEqual(config.noise.L, 2)
        self.assertEqual(config.schemes, [wpcapy.WeightKind.uniform,
                                          wpcapy.WeightKind.inverse_variance,
                                          wpcapy.WeightKind.square_inverse_variance,
                                          wpcapy.WeightKind.optimal])
        self.assertIs(config.normalization, wpcapy.Normalization.none)
        self.assertEqual(config.amplitude(), 1.0)
        self.assertIs(config.impact['parameter'], wpcapy.ImpactParameter.c)
        self.assertEqual(config.impact['values'], [10.0, 50.0, 150.0, 500.0])
        self.assertIsNone(config.sweep)
        self.assertIsNone(config.budget)
        self.assertIs(config.output_format, wpcapy.OutputFormat.csv)
        self.assertEqual(config.spike.k, 1)

    def test_budget_config(self):
        config = ExperimentConfig.from_file(config_path('two_sources.yaml'))
        self.assertIsInstance(config.budget, wpcapy.BudgetProblem)
        np.testing.assert_array_equal(config.budget.availabilities, [2.0, 1.0])
        self.assertEqual(config.budget.theta2, 10.0)
        self.assertEqual(config.budget.budget_per_dim, 4.5)
        with self.assertRaises(ConfigValidationError) as context:
            config.require('sweep')
        self.assertEqual(context.exception.field, 'sweep')
        with self.assertRaises(ConfigValidationError) as context:
            config.spike
        self.assertEqual(context.exception.field, 'c')

    def test_sweep_config(self):
        config = ExperimentConfig.from_file(config_path('sweep_small.yaml'))
        spec = config.sweep
        self.assertIsInstance(spec, wpcapy.SweepSpec)
        self.assertEqual((spec.d, spec.n, spec.trials, spec.base_seed), (60, 60, 2, 11))
        np.testing.assert_allclose(spec.lambda_grid, [0.2, 0.5, 0.8])
        self.assertEqual(len(spec.metrics), 6)
        self.assertEqual(config.schemes, [wpcapy.WeightKind.inverse_variance])

    def test_json_config(self):
        config = ExperimentConfig.from_file(config_path('sweep_list_grid.json'))
        np.testing.assert_array_equal(config.sweep.lambda_grid, [0.0, 0.5, 1.0])
        self.assertEqual(config.sweep.trials, 3)
        self.assertIs(config.output_format, wpcapy.OutputFormat.json)
        self.assertIsNone(config.output_path)

    def test_impact_config(self):
        config = ExperimentConfig.from_file(config_path('impact_added_rate.yaml'))
        self.assertIs(config.impact['parameter'], wpcapy.ImpactParameter.added_rate)
        self.assertEqual(len(config.impact['values']), 5)

    def test_invalid_trials(self):
        self.assertEqual(self._field('invalid_trials.yaml'), 'sweep.trials')

    def test_empty_amplitudes(self):
        self.assertEqual(self._field('empty_amplitudes.yaml'), 'amplitudes')

    def test_bad_proportions(self):
        self.assertEqual(self._field('bad_proportions.yaml'), 'noise')

    def test_broken_yaml(self):
        with self.assertRaises(ConfigValidationError) as context:
            ExperimentConfig.from_file(config_path('broken.yaml'))
        self.assertEqual(context.exception.field, 'config')
        self.assertIn('invalid YAML', context.exception.message)

    def test_missing_file(self):
        self.assertEqual(self._field('does_not_exist.yaml'), 'config')

    def test_free_unbounded_source(self):
        self.assertEqual(self._field('free_unbounded.yaml'), 'budget')

    def test_from_dict_errors(self):
        with self.assertRaises(ConfigValidationError) as context:
            ExperimentConfig.from_dict([1, 2])
        self.assertEqual(context.exception.field, 'config')
        with self.assertRaises(ConfigValidationError) as context:
            ExperimentConfig.from_dict({'schemes': ['inverse']})
        self.assertEqual(context.exception.field, 'schemes')
        with self.assertRaises(ConfigValidationError) as context:
            ExperimentConfig.from_dict({'c': -1})
        self.assertEqual(context.exception.field, 'c')
        with self.assertRaises(ConfigValidationError) as context:
            ExperimentConfig.from_dict({'noise': [{'proportion': 1.0, 'variance': 1.0}],
                                        'binary_mask': [1, 0]})
        self.assertEqual(context.exception.field, 'binary_mask')
        with self.assertRaises(ConfigValidationError) as context:
            ExperimentConfig.from_dict({'c': 1, 'amplitudes': [1],
                                        'noise': [{'proportion': 1.0, 'variance': 1.0}],
                                        'sweep': {'d': 10}})
        self.assertEqual(context.exception.field, 'sweep.n')

    def test_scheme_inputs_checked_at_parse_time(self):
        noise = [{'proportion': 0.5, 'variance': 1.0}, {'proportion': 0.5, 'variance': 2.0}]
        with self.assertRaises(ConfigValidationError) as context:
            ExperimentConfig.from_dict({'noise': noise, 'schemes': ['binary']})
        self.assertEqual(context.exception.field, 'binary_mask')
        self.assertIn('binary scheme', context.exception.message)
        with self.assertRaises(ConfigValidationError) as context:
            ExperimentConfig.from_dict({'noise': noise, 'schemes': ['binary'],
                                        'binary_mask': [1, 0.5]})
        self.assertEqual(context.exception.field, 'binary_mask')
        with self.assertRaises(ConfigValidationError) as context:
            ExperimentConfig.from_dict({'noise': noise, 'schemes': ['uniform', 'custom']})
        self.assertEqual(context.exception.field, 'custom_weights')
        with self.assertRaises(ConfigValidationError) as context:
            ExperimentConfig.from_dict({'noise': noise, 'schemes': ['custom'],
                                        'custom_weights': [1, -2]})
        self.assertEqual(context.exception.field, 'custom_weights')
        config = ExperimentConfig.from_dict({'noise': noise, 'schemes': ['binary', 'custom'],
                                             'binary_mask': [1, 0], 'custom_weights': [2, 1]})
        self.assertEqual(config.binary_mask, [1.0, 0.0])
        self.assertEqual(config.custom_weights, [2.0, 1.0])

    def test_budget_theta2_falls_back_to_amplitudes(self):
        config = ExperimentConfig.from_dict({
            'amplitudes': [4, 9],
            'budget': {'budget_per_dim': 1,
                       'sources': [{'variance': 1, 'cost': 1, 'availability_per_dim': 'unbounded'}]}})
        self.assertEqual(config.budget.theta2, 9.0)
        self.assertTrue(np.isinf(config.budget.availabilities[0]))

    def test_error_from_config_field(self):
        error = error_from_config_field('sweep.trials', 'must be >= 1')
        self.assertIsInstance(error, wpcapy.WPCAError)
        self.assertEqual(error.field, 'sweep.trials')
        self.assertEqual(error.message, 'sweep.trials: must be >= 1')
