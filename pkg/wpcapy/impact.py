#!/usr/bin/env python

from __future__ import division

import logging

import numpy as np

from wpcapy.wpca_base import WPCABase
from wpcapy.asymptotics import Asymptotics
from wpcapy.models import AsymptoticConfig, InvalidSweepError, NoiseProfile
from wpcapy.weighting import Weighting
from wpcapy.wpca_enum import ImpactParameter, Normalization, WeightKind

logger = logging.getLogger(__name__)

PATH_SCHEMES = (WeightKind.uniform,
                WeightKind.inverse_variance,
                WeightKind.square_inverse_variance,
                WeightKind.optimal)
SWEEP_SCHEMES = (WeightKind.uniform,
                 WeightKind.inverse_variance,
                 WeightKind.optimal)

class ImpactAnalysis(WPCABase):
    """Asymptotic component recovery along weight paths and as single model
    parameters vary"""

    def __init__(self, root_tol=None, threads=None):
        """Returns an ImpactAnalysis instance.
        Args:
          root_tol (float):
            Relative tolerance of the root searches.
          threads (int):
            Worker threads (unused).
        """

        super(ImpactAnalysis, self).__init__(root_tol, threads)
        self._asymptotics = Asymptotics(root_tol=self._root_tol, threads=1)
        self._weighting = Weighting(root_tol=self._root_tol, threads=1)

    def _recovery(self, c, noise, per_group, theta2):
        cfg = AsymptoticConfig(c=c, noise=noise, weights=per_group, root_tol=self._root_tol)
        return self._asymptotics.predict(cfg, theta2)

    def weight_path(self, c, noise, theta2, num=101):
        """Component recovery of a two-group profile as the weight of the
        first group w_1^2 = 1 - w_2^2 moves from 0 to 1, plus the points of
        the standard schemes on that path.
        Args:
          c (float):
            samples per dimension.
          noise (NoiseProfile):
            two noise groups.
          theta2 (float):
            amplitude theta^2.
          num (int):
            number of path points.
        Returns:
          list of dict rows [series, w2_1, w2_2, r_u, above_transition]
        Raises:
          InvalidSweepError"""

        if noise.L != 2:
            raise InvalidSweepError('Weight paths need exactly two noise groups, got %d' % noise.L)
        if int(num) < 2:
            raise InvalidSweepError('A weight path needs at least two points')

        rows = []
        for w1 in np.linspace(0.0, 1.0, int(num)):
            per_group = np.array([w1, 1.0 - w1])
            if not np.any(per_group * noise.proportions > 0):
                continue
            prediction = self._recovery(c, noise, per_group, theta2)
            rows.append(self._path_row('path', per_group, prediction))

        for kind in PATH_SCHEMES:
            scheme = self._weighting.make_scheme(kind, noise, theta2=theta2)
            per_group = scheme.per_group / scheme.per_group.sum()
            prediction = self._recovery(c, noise, per_group, theta2)
            rows.append(self._path_row(str(kind), per_group, prediction))
        return rows

    @staticmethod
    def _path_row(series, per_group, prediction):
        return {'series': series,
                'w2_1': float(per_group[0]),
                'w2_2': float(per_group[1]),
                'r_u': prediction.component_recovery,
                'above_transition': prediction.above_transition}

    @staticmethod
    def _vary(parameter, value, c, noise, theta2):
        """Returns (c, noise, theta2) with one parameter replaced."""

        value = float(value)
        if parameter == ImpactParameter.c:
            return value, noise, theta2
        if parameter == ImpactParameter.theta2:
            return c, noise, value
        if noise.L != 2:
            raise InvalidSweepError('Sweeping %s needs exactly two noise groups' % parameter)
        (p1, s1), (p2, s2) = noise.groups
        if parameter == ImpactParameter.p2:
            if not 0.0 <= value <= 1.0:
                raise InvalidSweepError('p2 values must lie in [0, 1], got %r' % value)
            return c, NoiseProfile.from_groups([(1.0 - value, s1), (value, s2)]), theta2
        if parameter == ImpactParameter.sigma2_1:
            return c, NoiseProfile.from_groups([(p1, value), (p2, s2)]), theta2
        if parameter == ImpactParameter.sigma2_2:
            return c, NoiseProfile.from_groups([(p1, s1), (p2, value)]), theta2
        # added_rate: c samples per dimension of the first source plus value of the second
        if value < 0:
            raise InvalidSweepError('added_rate values must be nonnegative, got %r' % value)
        total = c + value
        return total, NoiseProfile.from_groups([(c / total, s1), (value / total, s2)]), theta2

    def sweep(self, c, noise, theta2, parameter, values, schemes=SWEEP_SCHEMES):
        """Component recovery under several weight schemes as one parameter
        varies around a base configuration.
        Args:
          c (float):
            base samples per dimension. For added_rate it is the rate of the
            first source.
          noise (NoiseProfile):
            base noise groups.
          theta2 (float):
            base amplitude theta^2.
          parameter (ImpactParameter):
            c, theta2, p2, sigma2_1, sigma2_2 or added_rate.
          values (list):
            values taken by the parameter.
          schemes (list):
            weight kinds to compare.
        Returns:
          list of dict rows [parameter, value, scheme, r_u, above_transition]
        Raises:
          InvalidSweepError"""

        parameter = ImpactParameter(str(parameter))
        rows = []
        for value in values:
            c_v, noise_v, theta2_v = self._vary(parameter, value, float(c), noise, float(theta2))
            for kind in schemes:
                scheme = self._weighting.make_scheme(kind, noise_v, theta2=theta2_v,
                                                     normalization=Normalization.unit_average)
                prediction = self._recovery(c_v, noise_v, scheme.per_group, theta2_v)
                rows.append({'parameter': str(parameter),
                             'value': float(value),
                             'scheme': str(WeightKind(str(kind))),
                             'r_u': prediction.component_recovery,
                             'above_transition': prediction.above_transition})
        logger.info('Impact sweep over %s: %d rows', parameter, len(rows))
        return rows
