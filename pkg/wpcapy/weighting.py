#!/usr/bin/env python

from __future__ import division

import logging

import numpy as np

from wpcapy.wpca_base import WPCABase
from wpcapy.error import WPCAError
from wpcapy.models import InvalidWeightsError, WeightScheme
from wpcapy.utils import Utils, BracketExpansionError
from wpcapy.wpca_enum import Normalization, WeightKind

logger = logging.getLogger(__name__)

MAX_BRACKET_SHRINKS = 200

class Weighting(WPCABase):
    """Builds per-group weight schemes and evaluates the recovery reached by
    the optimal one"""

    def __init__(self, root_tol=None, threads=None):
        """Returns a Weighting instance.
        Args:
          root_tol (float):
            Relative tolerance of the optimal recovery root search.
          threads (int):
            Worker threads (unused, every operation is closed form or scalar).
        """

        super(Weighting, self).__init__(root_tol, threads)

    @staticmethod
    def normalize(per_group, noise, normalization):
        """Rescales weights with the requested convention.
        Args:
          per_group (ndarray):
            weights w_l^2.
          noise (NoiseProfile):
            noise groups, the proportions define the average.
          normalization (Normalization):
            none, unit_average (sum_l p_l w_l^2 = 1) or unit_max.
        Returns:
          ndarray
        Raises:
          InvalidWeightsError"""

        normalization = Normalization(str(normalization))
        per_group = np.asarray(per_group, dtype=float)
        if not np.any(per_group[noise.proportions > 0] > 0):
            raise InvalidWeightsError('Every group with a positive proportion has zero weight')
        if normalization == Normalization.unit_average:
            return per_group / float(np.dot(noise.proportions, per_group))
        if normalization == Normalization.unit_max:
            return per_group / float(np.max(per_group))
        return per_group

    def make_scheme(self,
                    kind,
                    noise,
                    theta2=None,
                    binary_mask=None,
                    normalization=Normalization.none,
                    custom_weights=None):
        """Builds a weight scheme for a noise profile.
        Args:
          kind (WeightKind):
            uniform, binary, inverse_variance, square_inverse_variance,
            optimal or custom.
          noise (NoiseProfile):
            noise groups.
          theta2 (float):
            amplitude the optimal weights are tuned to, required for optimal.
          binary_mask (list):
            0/1 per group, required for binary.
          normalization (Normalization):
            rescaling applied after the weights are built.
          custom_weights (list):
            w_l^2 per group, required for custom.
        Returns:
          WeightScheme
        Raises:
          MissingAmplitudeError, MissingMaskError, ZeroVarianceError,
          InvalidWeightsError"""

        kind = WeightKind(str(kind))
        variances = noise.variances

        if kind == WeightKind.uniform:
            per_group = np.ones(noise.L)
        elif kind == WeightKind.binary:
            if binary_mask is None or len(binary_mask) != noise.L:
                raise MissingMaskError('Binary weights need a 0/1 mask with one entry per group')
            mask = np.asarray(binary_mask, dtype=float)
            if not np.all((mask == 0) | (mask == 1)):
                raise MissingMaskError('Binary mask entries must be 0 or 1, got %s' % mask.tolist())
            per_group = mask
        elif kind == WeightKind.custom:
            if custom_weights is None or len(custom_weights) != noise.L:
                raise InvalidWeightsError('Custom weights need one value per group')
            per_group = np.asarray(custom_weights, dtype=float)
        else:
            if np.any(variances == 0):
                raise ZeroVarianceError('%s weights need every group variance > 0' % kind)
            if kind == WeightKind.inverse_variance:
                per_group = 1.0 / variances
            elif kind == WeightKind.square_inverse_variance:
                per_group = 1.0 / variances ** 2
            else:
                if theta2 is None:
                    raise MissingAmplitudeError('Optimal weights need the amplitude theta2')
                theta2 = float(theta2)
                if not theta2 > 0:
                    raise MissingAmplitudeError('theta2 must be positive, got %r' % theta2)
                per_group = 1.0 / (variances * (theta2 + variances))

        per_group = self.normalize(per_group, noise, normalization)
        return WeightScheme(kind=kind, per_group=per_group, normalization=normalization)

    @staticmethod
    def recovery_residual(x, rates, variances, theta2):
        """Evaluates R(x) = 1 - sum_l c_l (theta^2 / sigma_l^2) (1 - x) / (sigma_l^2 / theta^2 + x),
        increasing on (-min_l sigma_l^2 / theta^2, 1) and at least 1 from x = 1 on."""
        rates = np.asarray(rates, dtype=float)
        variances = np.asarray(variances, dtype=float)
        return 1.0 - float(np.sum(rates * theta2 / variances * (1.0 - x) / (variances / theta2 + x)))

    def optimal_recovery(self, c, noise, theta2, excluded=None):
        """Asymptotic component recovery under the optimal weights, the
        largest real root of

            R(x) = 1 - c theta^2 sum_l p_l / sigma_l^2 (1 - x) / (sigma_l^2 / theta^2 + x)

        truncated at zero below the phase transition.
        Args:
          c (float):
            samples per dimension.
          noise (NoiseProfile):
            noise groups, all variances positive.
          theta2 (float):
            amplitude theta_i^2.
          excluded (iterable):
            indices of groups that get zero weight; the root then only sums
            over the remaining groups.
        Returns:
          float in [0, 1]
        Raises:
          ZeroVarianceError, BracketExpansionError"""

        keep = np.ones(noise.L, dtype=bool)
        if excluded is not None:
            keep[list(excluded)] = False
        rates = float(c) * noise.proportions[keep]
        return self.optimal_recovery_from_rates(rates, noise.variances[keep], theta2)

    def optimal_recovery_from_rates(self, rates, variances, theta2):
        """Optimal recovery for per-source sampling rates c_l, the largest
        root of 1 - sum_l c_l (theta^2 / sigma_l^2) (1 - x) / (sigma_l^2 / theta^2 + x).
        Args:
          rates (ndarray):
            samples per dimension c_l of every source.
          variances (ndarray):
            noise variances sigma_l^2 of every source, duplicates allowed.
          theta2 (float):
            amplitude theta_i^2.
        Returns:
          float in [0, 1]; 0 when every rate is zero.
        Raises:
          ZeroVarianceError, BracketExpansionError"""

        rates = np.asarray(rates, dtype=float).ravel()
        variances = np.asarray(variances, dtype=float).ravel()
        theta2 = float(theta2)
        used = rates > 0
        if not np.any(used):
            return 0.0
        rates = rates[used]
        variances = variances[used]
        if np.any(variances == 0):
            raise ZeroVarianceError('Optimal recovery needs every sampled variance > 0')

        def residual(x):
            return self.recovery_residual(x, rates, variances, theta2)

        floor = -float(np.min(variances)) / theta2
        eps = 1e-6 * (1.0 - floor)
        shrinks = 0
        while residual(floor + eps) >= 0:
            shrinks += 1
            if shrinks > MAX_BRACKET_SHRINKS:
                raise BracketExpansionError('No sign change of R above %r' % floor)
            eps *= 1e-3
            if floor + eps == floor:
                raise BracketExpansionError('No sign change of R above %r' % floor)

        root = Utils.bisect(residual, floor + eps, 1.0, self._root_tol)
        logger.debug('Optimal recovery root %r for theta2=%r', root, theta2)
        return max(root, 0.0)


class MissingAmplitudeError(WPCAError):

    """Missing Amplitude Error Type.

    This error is returned when optimal weights are requested without a
    positive amplitude theta^2 to tune them to.
    """


class ZeroVarianceError(WPCAError):

    """Zero Variance Error Type.

    This error is returned when inverse noise variance, square inverse or
    optimal weights are requested for a group with zero noise variance.
    """


class MissingMaskError(WPCAError):

    """Missing Mask Error Type.

    This error is returned when binary weights are requested without a valid
    0/1 mask with one entry per group.
    """
