#!/usr/bin/env python

import os
import logging

logger = logging.getLogger(__name__)

THREADS_ENV = 'WPCAPY_THREADS'

class WPCABase(object):
    """ Base class from which all computation classes inherit."""

    def __init__(self,
                 root_tol=None,
                 threads=None):
        """Returns a WPCABase instance.
        Args:
          root_tol (float):
            Relative tolerance of every root search.
          threads (int):
            Worker threads for embarrassingly parallel loops. Falls back
            to the WPCAPY_THREADS environment variable, then to 1.
        """

        if root_tol:
            self._root_tol = float(root_tol)
        else:
            self._root_tol = 1e-12
        self.__set_threads(threads)

    def __set_threads(self, threads):
        """Setter for the worker thread count.
        Args:
          threads (int):
            Requested thread count, None to read the environment.
        """
        if threads is None:
            env_value = os.environ.get(THREADS_ENV)
            if env_value:
                try:
                    threads = int(env_value)
                except ValueError:
                    logger.warning('Ignoring non-integer %s=%r', THREADS_ENV, env_value)
                    threads = 1
            else:
                threads = 1
        self._threads = max(1, int(threads))
