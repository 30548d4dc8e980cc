#!/usr/bin/env python

from __future__ import division

import math
import logging

import numpy as np
from scipy import optimize

from wpcapy.error import WPCAError

logger = logging.getLogger(__name__)

MAX_DOUBLINGS = 1000

class BracketExpansionError(WPCAError):

    """Bracket Expansion Error Type.

    This error is returned when no sign change of a monotone function could
    be found above its largest pole within the allowed number of doublings,
    which means the function was built from a malformed configuration.
    """


class Utils(object):
    """Helper class for the main computation classes"""

    @staticmethod
    def largest_root_above(func, floor, rel_tol=1e-12):
        """Finds the root of a function increasing from negative values
        to positive values on (floor, infinity).
        Args:
          func (callable):
            scalar function, negative just above floor.
          floor (float):
            largest pole of func, the search starts just above it.
          rel_tol (float):
            relative tolerance on the root location.
        Returns:
          The root as a float. When func is already nonnegative just above
          floor, floor itself is returned.
        Raises:
          BracketExpansionError"""

        lower = floor * (1.0 + 1e-9) + 1e-300
        if func(lower) >= 0:
            logger.debug('No sign change above %r, root collapses to the pole', floor)
            return float(floor)

        doublings = 0
        step = 1.0
        upper = floor + step
        while func(upper) <= 0:
            doublings += 1
            if doublings > MAX_DOUBLINGS:
                raise BracketExpansionError(
                    'No sign change found above %r after %d doublings' % (floor, MAX_DOUBLINGS))
            lower = max(lower, upper)
            step *= 2.0
            upper = floor + step
        logger.debug('Bracket [%r, %r] after %d doublings', lower, upper, doublings)
        return Utils.bisect(func, lower, upper, rel_tol)

    @staticmethod
    def bisect(func, lower, upper, rel_tol=1e-12):
        """Bisection on a bracket with a sign change.
        Args:
          func (callable):
            scalar function with func(lower) < 0 < func(upper).
          lower (float):
            lower end of the bracket.
          upper (float):
            upper end of the bracket.
          rel_tol (float):
            relative tolerance on the root location.
        Returns:
          The root as a float."""

        rtol = max(float(rel_tol), 4 * np.finfo(float).eps)
        return float(optimize.bisect(func, lower, upper, xtol=1e-300, rtol=rtol, maxiter=2000))

    @staticmethod
    def align_signs(vectors, companions=None):
        """Flips columns so that each column's largest-magnitude entry is
        positive. The same flips are applied to the companion columns.
        Args:
          vectors (ndarray):
            matrix whose columns are normalized in sign.
          companions (ndarray):
            optional matrix with as many columns, flipped alongside.
        Returns:
          Tuple (vectors, companions) of flipped copies."""

        vectors = np.array(vectors, dtype=float, copy=True)
        if vectors.size == 0:
            return vectors, companions
        rows = np.argmax(np.abs(vectors), axis=0)
        signs = np.sign(vectors[rows, np.arange(vectors.shape[1])])
        signs[signs == 0] = 1.0
        vectors *= signs
        if companions is not None:
            companions = np.array(companions, dtype=float, copy=True) * signs
        return vectors, companions

    @staticmethod
    def derive_seed(base_seed, *keys):
        """Derives a 64-bit seed from a base seed and integer keys. The
        result does not depend on the order in which seeds are requested.
        Args:
          base_seed (int):
            nonnegative base seed.
          keys (int):
            spawn keys, e.g. (lambda_index, trial_index).
        Returns:
          An int in [0, 2**64)."""

        sequence = np.random.SeedSequence(int(base_seed), spawn_key=tuple(int(k) for k in keys))
        return int(sequence.generate_state(1, dtype=np.uint64)[0])

    @staticmethod
    def format_number(value):
        """Formats a value for tabular output. Floats use the shortest
        decimal representation that round-trips exactly.
        Args:
          value:
            float, int, bool or None.
        Returns:
          A string."""

        if value is None:
            return ''
        if isinstance(value, (bool, np.bool_)):
            return 'true' if value else 'false'
        if isinstance(value, (int, np.integer)):
            return str(int(value))
        if isinstance(value, (float, np.floating)):
            value = float(value)
            if math.isnan(value):
                return 'nan'
            return repr(value)
        return str(value)

    @staticmethod
    def to_jsonable(value):
        """Converts numpy containers and scalars into plain python types."""

        if isinstance(value, np.ndarray):
            return value.tolist()
        if isinstance(value, (np.bool_,)):
            return bool(value)
        if isinstance(value, np.integer):
            return int(value)
        if isinstance(value, np.floating):
            return float(value)
        if isinstance(value, (list, tuple)):
            return [Utils.to_jsonable(v) for v in value]
        if isinstance(value, dict):
            return dict((str(k), Utils.to_jsonable(v)) for k, v in value.items())
        if hasattr(value, '_value_'):
            return value._value_
        return value
