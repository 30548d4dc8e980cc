#!/usr/bin/env python

from __future__ import division

import logging

import numpy as np

from wpcapy.wpca_base import WPCABase
from wpcapy.error import WPCAError
from wpcapy.models import SyntheticDataset
from wpcapy.wpca_enum import ScoreDistribution

logger = logging.getLogger(__name__)

class DataModel(WPCABase):
    """Generator for the spiked model with heteroscedastic noise across samples"""

    def __init__(self, root_tol=None, threads=None):
        """Returns a DataModel instance.
        Args:
          root_tol (float):
            Relative tolerance of root searches (unused by generation).
          threads (int):
            Worker threads (unused by generation).
        """

        super(DataModel, self).__init__(root_tol, threads)

    @staticmethod
    def group_counts(noise, n):
        """Splits n samples into groups: n_l = round(p_l n) for all but the
        last group, which absorbs the rounding residue.
        Args:
          noise (NoiseProfile):
            noise groups.
          n (int):
            number of samples.
        Returns:
          ndarray of L nonnegative ints summing to n
        Raises:
          DimensionError"""

        n = int(n)
        counts = np.zeros(noise.L, dtype=int)
        if noise.L > 1:
            counts[:-1] = np.round(noise.proportions[:-1] * n).astype(int)
        counts[-1] = n - counts[:-1].sum()
        if counts[-1] < 0:
            raise DimensionError(
                'Proportions %s cannot be represented with n=%d samples'
                % (noise.proportions.tolist(), n))
        return counts

    @staticmethod
    def group_labels(noise, n):
        """Blockwise group labels: the first n_1 samples get group 0, etc."""
        counts = DataModel.group_counts(noise, n)
        return np.repeat(np.arange(noise.L), counts)

    def generate_dataset(self,
                         spike,
                         noise,
                         d,
                         n,
                         score_dist=ScoreDistribution.gaussian,
                         seed=0):
        """Draws Y = U Theta Z^T + E H.
        Args:
          spike (SpikeModel):
            amplitudes theta_i^2 (c is not used, d and n are explicit).
          noise (NoiseProfile):
            noise groups.
          d (int):
            dimension.
          n (int):
            number of samples.
          score_dist (ScoreDistribution):
            distribution of the score entries.
          seed (int):
            seed of the generator; equal seeds give bit-identical data.
        Returns:
          SyntheticDataset
        Raises:
          DimensionError"""

        d = int(d)
        n = int(n)
        k = spike.k
        if d < k or n < k:
            raise DimensionError('Need d >= k and n >= k, got d=%d, n=%d, k=%d' % (d, n, k))
        score_dist = ScoreDistribution(str(score_dist))

        labels = self.group_labels(noise, n)
        rng = np.random.default_rng(seed)

        basis = rng.standard_normal((d, k))
        components, _ = np.linalg.qr(basis)

        if score_dist == ScoreDistribution.rademacher:
            scores = rng.choice(np.array([-1.0, 1.0]), size=(n, k))
        else:
            scores = rng.standard_normal((n, k))

        noise_entries = rng.standard_normal((d, n))
        eta = np.sqrt(noise.variances)[labels]

        signal = (components * np.sqrt(spike.amplitudes)).dot(scores.T)
        data = signal + noise_entries * eta

        logger.debug('Generated d=%d n=%d k=%d dataset with seed %r', d, n, k, seed)
        return SyntheticDataset(data=data,
                                truth_components=components,
                                truth_scores=scores,
                                truth_amplitudes=spike.amplitudes,
                                noise_labels=labels,
                                dims=(d, n),
                                seed=seed)


class DimensionError(WPCAError):

    """Dimension Error Type.

    This error is returned when the requested dimension or sample count is
    smaller than the number of planted components, or when the proportions
    cannot be realized with the requested number of samples.
    """
