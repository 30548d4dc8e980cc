#!/usr/bin/env python

import unittest

import numpy as np

import wpcapy

class WpcaEstimatorTest(unittest.TestCase):

    def setUp(self):
        self._estimator = wpcapy.WpcaEstimator()
        self._spike = wpcapy.SpikeModel(c=1, amplitudes=[25, 16])
        self._noise = wpcapy.NoiseProfile(proportions=[0.2, 0.8], variances=[1, 4])
        self._dataset = wpcapy.DataModel().generate_dataset(self._spike, self._noise, 60, 90, seed=4)
        self._weights = wpcapy.SampleWeights.from_groups([1.0, 0.25], self._dataset.noise_labels)

    def _noiseless(self):
        components, _ = np.linalg.qr(np.arange(1.0, 13.0).reshape(6, 2) ** 2)
        scores = np.column_stack([np.ones(8), np.tile([1.0, -1.0], 4)])
        spike = wpcapy.SpikeModel(c=8.0 / 6, amplitudes=[4, 1])
        dataset = wpcapy.SyntheticDataset(data=(components * [2.0, 1.0]).dot(scores.T),
                                          truth_components=components,
                                          truth_scores=scores,
                                          truth_amplitudes=[4, 1],
                                          noise_labels=np.zeros(8, dtype=int))
        return spike, dataset

    def test_initiation(self):
        self.assertIsInstance(self._estimator, wpcapy.WpcaEstimator)
        self.assertEqual(self._estimator._root_tol, 1e-12)
        self.assertEqual(self._estimator._threads, 1)

    def test_noiseless_recovery(self):
        spike, dataset = self._noiseless()
        fit = self._estimator.fit_wpca(dataset.data, None, k=2)
        np.testing.assert_allclose(fit.amplitudes, [4.0, 1.0], atol=1e-10)
        for i in range(2):
            matched, mismatched = self._estimator.empirical_component_recovery(fit, dataset, spike, i)
            self.assertAlmostEqual(matched, 1.0, places=10)
            self.assertAlmostEqual(mismatched, 0.0, places=10)
            matched, _ = self._estimator.empirical_score_recovery(fit, dataset, spike, i)
            self.assertAlmostEqual(matched, 1.0, places=10)
            matched, _ = self._estimator.empirical_unweighted_score_recovery(fit, dataset, spike, i)
            self.assertAlmostEqual(matched, 1.0, places=10)
            self.assertAlmostEqual(self._estimator.empirical_cross_product(fit, dataset, spike, i),
                                   1.0, places=10)
        self.assertAlmostEqual(self._estimator.empirical_weighted_mse(fit, dataset), 0.0, places=10)
        self.assertAlmostEqual(self._estimator.empirical_subspace_recovery(fit, dataset), 2.0,
                               places=10)
        self.assertAlmostEqual(self._estimator.empirical_aggregate_score_recovery(fit, dataset),
                               2.0, places=10)

    def test_sign_convention(self):
        fit = self._estimator.fit_wpca(self._dataset.data, self._weights, k=2)
        for i in range(fit.k):
            column = fit.components[:, i]
            self.assertGreater(column[np.argmax(np.abs(column))], 0)

    def test_rank_deficient(self):
        spike = wpcapy.SpikeModel(c=1, amplitudes=[4])
        noise = wpcapy.NoiseProfile(proportions=[1.0], variances=[0.0], allow_noiseless=True)
        dataset = wpcapy.DataModel().generate_dataset(spike, noise, 5, 5, seed=1)
        estimator = wpcapy.WpcaEstimator(rank_tol=1e-8)
        with self.assertLogs('wpcapy.estimator', level='WARNING'):
            fit = estimator.fit_wpca(dataset.data, None, k=2)
        self.assertEqual(fit.k, 1)
        self.assertEqual(fit.requested_k, 2)
        self.assertTrue(fit.rank_deficient)
        self.assertEqual(fit.components.shape, (5, 1))
        self.assertEqual(fit.scores.shape, (5, 1))

    def test_weighted_orthonormality(self):
        fit = self._estimator.fit_wpca(self._dataset.data, self._weights, k=2)
        n = self._dataset.data.shape[1]
        np.testing.assert_allclose(fit.components.T.dot(fit.components), np.eye(2), atol=1e-8)
        w = self._weights.values
        gram = (fit.scores * w[:, None]).T.dot(fit.scores) / n
        np.testing.assert_allclose(gram, np.eye(2), atol=1e-8)
        left = self._dataset.data.dot(w[:, None] * fit.scores) / n
        np.testing.assert_allclose(left, fit.components * np.sqrt(fit.amplitudes), atol=1e-8)

    def test_uniform_weights_match_svd(self):
        data = self._dataset.data
        fit = self._estimator.fit_wpca(data, None, k=2)
        left, singular, _ = np.linalg.svd(data, full_matrices=False)
        np.testing.assert_allclose(fit.amplitudes, singular[:2] ** 2 / data.shape[1], rtol=1e-10)
        np.testing.assert_allclose(np.abs(fit.components.T.dot(left[:, :2])), np.eye(2), atol=1e-10)

    def test_random_small_datasets(self):
        rng = np.random.default_rng(9)
        for case in range(100):
            d, n = rng.integers(3, 13, size=2)
            k = int(rng.integers(1, min(d, n) // 2 + 1))
            data = rng.standard_normal((d, n))
            w = rng.uniform(0.2, 2.0, size=n)
            with self.subTest(case=case, d=int(d), n=int(n), k=k):
                fit = self._estimator.fit_wpca(data, wpcapy.SampleWeights(values=w), k=k)
                np.testing.assert_allclose(fit.components.T.dot(fit.components), np.eye(k), atol=1e-8)
                gram = (fit.scores * w[:, None]).T.dot(fit.scores) / n
                np.testing.assert_allclose(gram, np.eye(k), atol=1e-8)
                left = data.dot(w[:, None] * fit.scores) / n
                np.testing.assert_allclose(left, fit.components * np.sqrt(fit.amplitudes), atol=1e-8)

                plain = self._estimator.fit_wpca(data, None, k=k)
                basis, singular, _ = np.linalg.svd(data, full_matrices=False)
                np.testing.assert_allclose(plain.amplitudes, singular[:k] ** 2 / n, rtol=1e-10)
                np.testing.assert_allclose(plain.components.dot(plain.components.T),
                                           basis[:, :k].dot(basis[:, :k].T), atol=1e-8)

    def test_weight_scale(self):
        fit = self._estimator.fit_wpca(self._dataset.data, self._weights, k=2)
        scaled_weights = wpcapy.SampleWeights(values=3.0 * self._weights.values)
        scaled = self._estimator.fit_wpca(self._dataset.data, scaled_weights, k=2)
        np.testing.assert_allclose(scaled.components, fit.components, atol=1e-10)
        np.testing.assert_allclose(scaled.amplitudes, 3.0 * fit.amplitudes, rtol=1e-10)
        np.testing.assert_allclose(scaled.scores, fit.scores / np.sqrt(3.0), atol=1e-10)

    def test_reconstruction_is_projection(self):
        fit = self._estimator.fit_wpca(self._dataset.data, self._weights, k=2)
        projector = fit.components.dot(fit.components.T)
        np.testing.assert_allclose(self._estimator.reconstruct(fit),
                                   projector.dot(self._dataset.data), atol=1e-8)

    def test_weighted_objective_is_minimal(self):
        data = self._dataset.data
        w = self._weights.values
        fit = self._estimator.fit_wpca(data, self._weights, k=2)
        best = self._estimator.weighted_objective(data, fit)

        def objective(basis):
            residual = data - basis.dot(basis.T.dot(data))
            return float(np.dot(w, np.sum(residual ** 2, axis=0)))

        self.assertAlmostEqual(best / objective(fit.components), 1.0, places=10)
        uniform = self._estimator.fit_wpca(data, None, k=2)
        self.assertLessEqual(best, objective(uniform.components) * (1 + 1e-10))
        rng = np.random.default_rng(0)
        for _ in range(10):
            basis, _ = np.linalg.qr(fit.components + 0.05 * rng.standard_normal(fit.components.shape))
            self.assertLessEqual(best, objective(basis) * (1 + 1e-10))

    def test_weighted_mse_of_empty_reconstruction(self):
        d, n = self._dataset.data.shape
        fit = wpcapy.WpcaFit(components=np.zeros((d, 1)),
                             amplitudes=[0.0],
                             scores=np.zeros((n, 1)),
                             weights_used=self._weights)
        signal = self._dataset.signal
        expected = np.dot(self._weights.values, np.sum(signal ** 2, axis=0)) / n
        self.assertAlmostEqual(self._estimator.empirical_weighted_mse(fit, self._dataset),
                               expected, places=8)

    def test_cross_product_sign(self):
        fit = self._estimator.fit_wpca(self._dataset.data, self._weights, k=2)
        flipped = wpcapy.WpcaFit(components=-fit.components,
                                 amplitudes=fit.amplitudes,
                                 scores=fit.scores,
                                 weights_used=fit.weights_used)
        cross = self._estimator.empirical_cross_product(fit, self._dataset, self._spike, 0)
        self.assertGreater(cross, 0)
        self.assertAlmostEqual(
            self._estimator.empirical_cross_product(flipped, self._dataset, self._spike, 0),
            -cross, places=12)
        self.assertAlmostEqual(
            self._estimator.empirical_component_recovery(flipped, self._dataset, self._spike, 0)[0],
            self._estimator.empirical_component_recovery(fit, self._dataset, self._spike, 0)[0],
            places=12)

    def test_equal_amplitudes_are_matched_together(self):
        spike = wpcapy.SpikeModel(c=1, amplitudes=[9, 9])
        dataset = wpcapy.DataModel().generate_dataset(spike, self._noise, 40, 40, seed=2)
        fit = self._estimator.fit_wpca(dataset.data, None, k=2)
        matched, mismatched = self._estimator.empirical_component_recovery(fit, dataset, spike, 0)
        self.assertEqual(mismatched, 0.0)
        self.assertLessEqual(matched, 1.0 + 1e-12)

    def test_index_errors(self):
        fit = self._estimator.fit_wpca(self._dataset.data, self._weights, k=2)
        with self.assertRaises(wpcapy.ComponentIndexError):
            self._estimator.empirical_component_recovery(fit, self._dataset, self._spike, 2)
        with self.assertRaises(wpcapy.ComponentIndexError):
            self._estimator.empirical_score_recovery(fit, self._dataset, self._spike, -1)
        with self.assertRaises(wpcapy.ComponentIndexError):
            self._estimator.fit_wpca(self._dataset.data, self._weights, k=0)
        with self.assertRaises(wpcapy.ComponentIndexError):
            self._estimator.fit_wpca(self._dataset.data, self._weights, k=61)

    def test_dimension_errors(self):
        with self.assertRaises(wpcapy.DimensionMismatchError):
            self._estimator.fit_wpca(self._dataset.data, wpcapy.SampleWeights.uniform(10), k=1)
        with self.assertRaises(wpcapy.DimensionMismatchError):
            self._estimator.fit_wpca(np.ones(5), None, k=1)
        fit = self._estimator.fit_wpca(self._dataset.data, self._weights, k=1)
        with self.assertRaises(wpcapy.DimensionMismatchError):
            self._estimator.weighted_objective(self._dataset.data[:, :10], fit)
