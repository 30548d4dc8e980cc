#!/usr/bin/env python

from __future__ import division

import math
import logging

import numpy as np

from wpcapy.wpca_base import WPCABase
from wpcapy.error import WPCAError
from wpcapy.models import AsymptoticConfig, RecoveryPrediction
from wpcapy.utils import Utils, BracketExpansionError
from wpcapy.weighting import ZeroVarianceError

logger = logging.getLogger(__name__)

class Asymptotics(WPCABase):
    """Asymptotic recovery predictions of weighted PCA in the spiked model

    All quantities are evaluated from the rational functions

        A(x)   = 1 - c sum_l p_l w_l^4 sigma_l^4 / (x - w_l^2 sigma_l^2)^2
        B_i(x) = 1 - c theta_i^2 sum_l p_l w_l^2 / (x - w_l^2 sigma_l^2)
        C(x)   = 1 + c sum_l p_l w_l^2 sigma_l^2 / (x - w_l^2 sigma_l^2)

    where only groups with p_l w_l^2 > 0 contribute. Above the largest pole
    A and B_i increase from minus infinity to one, so each has exactly one
    root there and it is found by bisection.
    """

    def __init__(self, root_tol=None, threads=None):
        """Returns an Asymptotics instance.
        Args:
          root_tol (float):
            Default relative tolerance of the root searches, used when a
            configuration does not carry its own.
          threads (int):
            Worker threads (unused, every operation is a scalar computation).
        """

        super(Asymptotics, self).__init__(root_tol, threads)

    def config(self, c, noise, weights=None):
        """Builds an AsymptoticConfig that uses this instance's tolerance."""
        return AsymptoticConfig(c=c, noise=noise, weights=weights, root_tol=self._root_tol)

    @staticmethod
    def _terms(x, cfg):
        mask = cfg.active
        p = cfg.noise.proportions[mask]
        w2 = cfg.weights[mask]
        poles = w2 * cfg.noise.variances[mask]
        gaps = x - poles
        if np.any(gaps == 0):
            raise PoleEvaluationError('x=%r is a pole w_l^2 sigma_l^2 of the configuration' % (x,))
        return p, w2, poles, gaps

    def eval_A(self, x, cfg):
        """Evaluates A(x).
        Raises:
          PoleEvaluationError"""

        p, w2, poles, gaps = self._terms(x, cfg)
        # noiseless groups contribute nothing to A and C
        noisy = poles > 0
        return float(1.0 - cfg.c * np.sum(p[noisy] * poles[noisy] ** 2 / gaps[noisy] ** 2))

    def eval_B(self, x, cfg, theta2):
        """Evaluates B_i(x) for the amplitude theta2 = theta_i^2.
        Raises:
          PoleEvaluationError"""

        p, w2, poles, gaps = self._terms(x, cfg)
        return float(1.0 - cfg.c * theta2 * np.sum(p * w2 / gaps))

    def eval_B_prime(self, x, cfg, theta2):
        """Evaluates the derivative B_i'(x) analytically.
        Raises:
          PoleEvaluationError"""

        p, w2, poles, gaps = self._terms(x, cfg)
        return float(cfg.c * theta2 * np.sum(p * w2 / gaps ** 2))

    def eval_C(self, x, cfg):
        """Evaluates C(x).
        Raises:
          PoleEvaluationError"""

        p, w2, poles, gaps = self._terms(x, cfg)
        noisy = poles > 0
        return float(1.0 + cfg.c * np.sum(p[noisy] * poles[noisy] / gaps[noisy]))

    def largest_root_A(self, cfg):
        """Returns alpha, the largest real root of A.
        Raises:
          BracketExpansionError"""

        alpha = Utils.largest_root_above(lambda x: self.eval_A(x, cfg), cfg.pole_max, cfg.root_tol)
        logger.debug('alpha=%r above pole %r', alpha, cfg.pole_max)
        return alpha

    def largest_root_B(self, cfg, theta2):
        """Returns beta_i, the largest real root of B_i.
        Raises:
          BracketExpansionError"""

        beta = Utils.largest_root_above(lambda x: self.eval_B(x, cfg, theta2),
                                        cfg.pole_max, cfg.root_tol)
        logger.debug('beta=%r for theta2=%r above pole %r', beta, theta2, cfg.pole_max)
        return beta

    def predict(self, cfg, theta2):
        """Asymptotic amplitude, component, weighted score recovery and
        cross product of the component with amplitude theta2. Below the
        phase transition, A(beta_i) <= 0, the recoveries are truncated at
        zero and the prediction is flagged as truncated.
        Args:
          cfg (AsymptoticConfig):
            model parameters and per-group weights.
          theta2 (float):
            underlying amplitude theta_i^2 > 0.
        Returns:
          RecoveryPrediction
        Raises:
          BracketExpansionError"""

        theta2 = float(theta2)
        alpha = self.largest_root_A(cfg)
        beta = self.largest_root_B(cfg, theta2)
        x = max(alpha, beta)
        amplitude = x * self.eval_C(x, cfg) / cfg.c

        a_beta = self.eval_A(beta, cfg)
        if a_beta > 0:
            b_prime = self.eval_B_prime(beta, cfg, theta2)
            r_u = a_beta / (beta * b_prime)
            r_z = a_beta / (cfg.c * theta2 * self.eval_C(beta, cfg) * b_prime)
            return RecoveryPrediction(theta2=theta2,
                                      amplitude_limit=amplitude,
                                      component_recovery=r_u,
                                      score_recovery=r_z,
                                      cross_product=math.sqrt(r_u * r_z),
                                      alpha=alpha,
                                      beta=beta,
                                      above_transition=True,
                                      truncated=False)
        return RecoveryPrediction(theta2=theta2,
                                  amplitude_limit=amplitude,
                                  component_recovery=0.0,
                                  score_recovery=0.0,
                                  cross_product=0.0,
                                  alpha=alpha,
                                  beta=beta,
                                  above_transition=False,
                                  truncated=True)

    def predict_inverse_variance(self, c, noise, theta2):
        """Closed-form predictions for weights w_l^2 = sigma_bar^2 / sigma_l^2,
        where 1/sigma_bar^2 = sum_l p_l / sigma_l^2. The component is above
        the transition only when c theta^4 > sigma_bar^4 strictly.
        Args:
          c (float):
            samples per dimension.
          noise (NoiseProfile):
            noise groups, all variances positive.
          theta2 (float):
            underlying amplitude theta_i^2.
        Returns:
          RecoveryPrediction
        Raises:
          ZeroVarianceError"""

        if np.any(noise.variances == 0):
            raise ZeroVarianceError('Inverse noise variance weights need every variance > 0')
        c = float(c)
        theta2 = float(theta2)
        s2 = noise.inverse_average_variance()
        alpha = s2 * (1.0 + math.sqrt(c))
        beta = s2 + c * theta2
        if c * theta2 ** 2 > s2 ** 2:
            ratio = s2 / theta2
            r_u = (c - ratio ** 2) / (c + ratio)
            r_z = (c - ratio ** 2) / (c * (1.0 + ratio))
            return RecoveryPrediction(theta2=theta2,
                                      amplitude_limit=theta2 * (1.0 + s2 / (c * theta2)) * (1.0 + ratio),
                                      component_recovery=r_u,
                                      score_recovery=r_z,
                                      cross_product=math.sqrt(r_u * r_z),
                                      alpha=alpha,
                                      beta=beta,
                                      above_transition=True,
                                      truncated=False)
        return RecoveryPrediction(theta2=theta2,
                                  amplitude_limit=s2 * (1.0 + 1.0 / math.sqrt(c)) ** 2,
                                  component_recovery=0.0,
                                  score_recovery=0.0,
                                  cross_product=0.0,
                                  alpha=alpha,
                                  beta=beta,
                                  above_transition=False,
                                  truncated=True)

    @staticmethod
    def mean_weight(cfg):
        """Returns w_bar^2 = sum_l p_l w_l^2."""
        return float(np.dot(cfg.noise.proportions, cfg.weights))

    def aggregate_prediction(self, cfg, spike):
        """Aggregate limits over all k components: subspace recovery
        ||U_hat^T U||_F^2, aggregate weighted score recovery and the weighted
        mean square error of the reconstruction. Components below the
        transition contribute truncated terms.
        Args:
          cfg (AsymptoticConfig):
            model parameters and per-group weights.
          spike (SpikeModel):
            amplitudes theta_1^2..theta_k^2.
        Returns:
          Tuple (subspace_recovery, aggregate_score_recovery, weighted_mse)"""

        w_bar2 = self.mean_weight(cfg)
        subspace = 0.0
        aggregate = 0.0
        mse = 0.0
        truncated = []
        for index, theta2 in enumerate(spike.amplitudes):
            prediction = self.predict(cfg, theta2)
            subspace += prediction.component_recovery
            aggregate += prediction.score_recovery
            if prediction.above_transition:
                beta = prediction.beta
                mse += (cfg.c * w_bar2 * theta2
                        + beta * self.eval_C(beta, cfg)
                        - 2.0 * self.eval_A(beta, cfg) / self.eval_B_prime(beta, cfg, theta2)) / cfg.c
            else:
                truncated.append(index)
                mse += w_bar2 * theta2 + prediction.amplitude_limit
        if truncated:
            logger.warning('Components %s are below the phase transition; their terms are truncated',
                           truncated)
        return subspace, aggregate, mse


class PoleEvaluationError(WPCAError):

    """Pole Evaluation Error Type.

    This error is returned when A, B_i or C is evaluated exactly at one of
    its poles w_l^2 sigma_l^2.
    """


__all__ = ['Asymptotics', 'PoleEvaluationError', 'BracketExpansionError']
