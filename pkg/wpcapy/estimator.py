#!/usr/bin/env python

from __future__ import division

import logging

import numpy as np
from scipy import linalg

from wpcapy.wpca_base import WPCABase
from wpcapy.error import WPCAError
from wpcapy.models import SampleWeights, WpcaFit
from wpcapy.utils import Utils

logger = logging.getLogger(__name__)

class WpcaEstimator(WPCABase):
    """Weighted PCA through a truncated generalized SVD, with empirical recovery metrics"""

    def __init__(self, root_tol=None, threads=None, rank_tol=None):
        """Returns a WpcaEstimator instance.
        Args:
          root_tol (float):
            Relative tolerance of root searches (unused by the estimator).
          threads (int):
            Worker threads (unused, a single fit runs single-threaded).
          rank_tol (float):
            Singular values below rank_tol times the largest one count as
            zero. Defaults to max(d, n) times machine epsilon.
        """

        super(WpcaEstimator, self).__init__(root_tol, threads)
        self._rank_tol = rank_tol

    @staticmethod
    def _as_weights(weights, n):
        if weights is None:
            return SampleWeights.uniform(n)
        if not isinstance(weights, SampleWeights):
            weights = SampleWeights(values=weights)
        if weights.n != n:
            raise DimensionMismatchError('Got %d weights for %d samples' % (weights.n, n))
        return weights

    def fit_wpca(self, Y, weights=None, k=1):
        """Fits k weighted principal components.
        Args:
          Y (ndarray):
            d x n data matrix with samples as columns.
          weights (SampleWeights):
            per-sample weight values omega_j^2; uniform when None.
          k (int):
            number of components.
        Returns:
          WpcaFit. When the weighted data matrix has rank below k, only the
          achievable columns are returned and rank_deficient is set.
        Raises:
          ComponentIndexError, DimensionMismatchError"""

        Y = np.asarray(Y, dtype=float)
        if Y.ndim != 2:
            raise DimensionMismatchError('Y must be a d x n matrix')
        d, n = Y.shape
        k = int(k)
        if k < 1 or k > min(d, n):
            raise ComponentIndexError('k=%d is outside [1, min(d, n)=%d]' % (k, min(d, n)))
        weights = self._as_weights(weights, n)

        omega = np.sqrt(weights.values)
        Y_tilde = Y * omega / np.sqrt(n)
        left, singular, right_t = linalg.svd(Y_tilde, full_matrices=False, check_finite=False)

        tol = self._rank_tol
        if tol is None:
            tol = max(d, n) * np.finfo(float).eps
        cutoff = tol * (singular[0] if singular.size else 0.0)
        rank = int(np.sum(singular > cutoff))
        achievable = min(k, rank)
        if achievable < k:
            logger.warning('Weighted data has rank %d < k=%d; returning %d components',
                           rank, k, achievable)

        components, _ = Utils.align_signs(left[:, :achievable])
        theta_hat = singular[:achievable]
        scores = Y.T.dot(components) / theta_hat if achievable else np.zeros((n, 0))

        return WpcaFit(components=components,
                       amplitudes=theta_hat ** 2,
                       scores=scores,
                       weights_used=weights,
                       k=achievable,
                       requested_k=k,
                       rank_deficient=achievable < k)

    def reconstruct(self, fit):
        """Reconstructs x_hat_j = sum_i u_hat_i theta_hat_i z_hat_i^(j).
        Args:
          fit (WpcaFit):
            a weighted PCA fit.
        Returns:
          d x n ndarray"""

        return (fit.components * np.sqrt(fit.amplitudes)).dot(fit.scores.T)

    def weighted_objective(self, Y, fit):
        """Returns sum_j omega_j^2 ||y_j - x_hat_j||^2.
        Raises:
          DimensionMismatchError"""

        Y = np.asarray(Y, dtype=float)
        if Y.shape != (fit.components.shape[0], fit.scores.shape[0]):
            raise DimensionMismatchError(
                'Y has shape %s but the fit is for %s' % (Y.shape, (fit.components.shape[0], fit.scores.shape[0])))
        residual = Y - self.reconstruct(fit)
        return float(np.dot(fit.weights_used.values, np.sum(residual ** 2, axis=0)))

    @staticmethod
    def _check_index(fit, truth, i):
        if fit.components.shape[0] != truth.truth_components.shape[0]:
            raise DimensionMismatchError('Fit and dataset have different dimensions')
        if i < 0 or i >= fit.k:
            raise ComponentIndexError('Component index %d is outside [0, %d)' % (i, fit.k))

    @staticmethod
    def _matching(spike, i):
        """Boolean mask over true components with theta_j = theta_i, exactly."""
        amplitudes = spike.amplitudes
        return amplitudes == amplitudes[i]

    @staticmethod
    def _split(values, matching):
        squared = values ** 2
        return float(np.sum(squared[matching])), float(np.sum(squared[~matching]))

    def _weighted_score_products(self, fit, truth, i, weights):
        weights = self._as_weights(weights if weights is not None else fit.weights_used,
                                   fit.scores.shape[0])
        n = fit.scores.shape[0]
        return (fit.scores[:, i] * weights.values).dot(truth.truth_scores) / n

    def empirical_component_recovery(self, fit, truth, spike, i):
        """Returns (matched, mismatched) sums of |<u_hat_i, u_j>|^2 over true
        components with equal and different amplitudes.
        Raises:
          ComponentIndexError, DimensionMismatchError"""

        self._check_index(fit, truth, i)
        products = truth.truth_components.T.dot(fit.components[:, i])
        return self._split(products, self._matching(spike, i))

    def empirical_score_recovery(self, fit, truth, spike, i, weights=None):
        """Returns (matched, mismatched) sums of the squared weighted inner
        products <z_hat_i/sqrt(n), z_j/sqrt(n)>_{W^2}.
        Raises:
          ComponentIndexError, DimensionMismatchError"""

        self._check_index(fit, truth, i)
        products = self._weighted_score_products(fit, truth, i, weights)
        return self._split(products, self._matching(spike, i))

    def empirical_unweighted_score_recovery(self, fit, truth, spike, i):
        """Returns (matched, mismatched) sums of |<z_hat_i/sqrt(n), z_j/sqrt(n)>|^2."""

        self._check_index(fit, truth, i)
        n = fit.scores.shape[0]
        products = fit.scores[:, i].dot(truth.truth_scores) / n
        return self._split(products, self._matching(spike, i))

    def empirical_cross_product(self, fit, truth, spike, i, weights=None):
        """Returns sum over matching j of <u_hat_i, u_j> <z_hat_i/sqrt(n), z_j/sqrt(n)>_{W^2}."""

        self._check_index(fit, truth, i)
        component_products = truth.truth_components.T.dot(fit.components[:, i])
        score_products = self._weighted_score_products(fit, truth, i, weights)
        matching = self._matching(spike, i)
        return float(np.sum(component_products[matching] * score_products[matching]))

    def empirical_weighted_mse(self, fit, truth):
        """Returns (1/n) sum_j omega_j^2 ||x_hat_j - x_j||^2."""

        residual = self.reconstruct(fit) - truth.signal
        n = residual.shape[1]
        return float(np.dot(fit.weights_used.values, np.sum(residual ** 2, axis=0)) / n)

    def empirical_subspace_recovery(self, fit, truth):
        """Returns ||U_hat^T U||_F^2."""

        return float(np.sum(fit.components.T.dot(truth.truth_components) ** 2))

    def empirical_aggregate_score_recovery(self, fit, truth, weights=None):
        """Returns (1/n^2) ||Z_hat^T W^2 Z||_F^2."""

        weights = self._as_weights(weights if weights is not None else fit.weights_used,
                                   fit.scores.shape[0])
        n = fit.scores.shape[0]
        gram = (fit.scores * weights.values[:, None]).T.dot(truth.truth_scores) / n
        return float(np.sum(gram ** 2))


class ComponentIndexError(WPCAError):

    """Component Index Error Type.

    This error is returned when the number of requested components is
    outside [1, min(d, n)] or a component index does not exist in the fit.
    """


class DimensionMismatchError(WPCAError):

    """Dimension Mismatch Error Type.

    This error is returned when data, weights, fit and ground truth do not
    agree on d or n.
    """
