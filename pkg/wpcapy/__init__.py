#!/usr/bin/env python

"""A library for optimally weighted PCA of data with heteroscedastic noise"""

from __future__ import absolute_import

__author__       = 'wpcapy developers'
__email__        = 'wpcapy@users.noreply.github.com'
__copyright__    = 'Copyright (c) 2026 wpcapy developers'
__license__      = 'MIT License'
__version__      = '0.1.0'
__url__          = 'https://github.com/wpcapy/wpcapy'
__download_url__ = 'https://pypi.org/pypi/wpcapy'
__description__  = 'Optimally weighted PCA for heteroscedastic data'


import logging

from .error import WPCAError

from .wpca_enum import (
    ScoreDistribution,
    WeightKind,
    Normalization,
    Metric,
    OutputFormat,
    ImpactParameter
)

from .models import (
    NoiseProfile,
    SpikeModel,
    SyntheticDataset,
    SampleWeights,
    WpcaFit,
    AsymptoticConfig,
    RecoveryPrediction,
    WeightScheme,
    BudgetProblem,
    SamplingPlan,
    SweepSpec,
    TrialRecord,
    SweepTable,
    InvalidNoiseProfileError,
    InvalidSpikeModelError,
    InvalidWeightsError,
    InvalidConfigError,
    InvalidBudgetError,
    InvalidSweepError
)

from .utils import Utils, BracketExpansionError
from .wpca_base import WPCABase
from .data_model import DataModel, DimensionError
from .estimator import WpcaEstimator, ComponentIndexError, DimensionMismatchError

from .weighting import (
    Weighting,
    MissingAmplitudeError,
    ZeroVarianceError,
    MissingMaskError
)

from .asymptotics import Asymptotics, PoleEvaluationError
from .sampling import SamplingDesign, TooManySourcesError, EmptyAllocationError
from .montecarlo import MonteCarlo, BelowTransitionError, DegenerateLambdaError
from .impact import ImpactAnalysis

from .config import (
    ExperimentConfig,
    ConfigValidationError,
    error_from_config_field
)

logging.getLogger(__name__).addHandler(logging.NullHandler())
