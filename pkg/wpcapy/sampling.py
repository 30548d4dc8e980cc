#!/usr/bin/env python

from __future__ import division

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from wpcapy.wpca_base import WPCABase
from wpcapy.error import WPCAError
from wpcapy.models import SamplingPlan
from wpcapy.weighting import Weighting

logger = logging.getLogger(__name__)

MAX_SOURCES = 20
DEDUP_TOL = 1e-12
TIE_TOL = 1e-12
SATURATION_TOL = 1e-9

class SamplingDesign(WPCABase):
    """Budget constrained choice of how many samples to collect from each
    noise source. Optimally weighted recovery increases in every sampling
    rate and is constant on flats, so the maximum over the polyhedron

        { c >= 0, sum_l tau_l c_l <= T/d, c_l <= q_l/d }

    is attained at one of its vertices.
    """

    def __init__(self, root_tol=None, threads=None):
        """Returns a SamplingDesign instance.
        Args:
          root_tol (float):
            Relative tolerance of the recovery root searches.
          threads (int):
            Worker threads used to evaluate vertices concurrently.
        """

        super(SamplingDesign, self).__init__(root_tol, threads)
        self._weighting = Weighting(root_tol=self._root_tol, threads=1)

    @staticmethod
    def _append_unique(points, candidate):
        for point in points:
            if np.all(np.abs(point - candidate) <= DEDUP_TOL):
                return
        points.append(candidate)

    def enumerate_vertices(self, problem):
        """Lists the extreme points of the budget polyhedron. Every vertex
        pins each rate to 0 or to its availability, except at most one rate
        that the budget equality determines.
        Args:
          problem (BudgetProblem):
            sources, costs, availabilities and budget.
        Returns:
          list of ndarray allocations in lexicographic order
        Raises:
          TooManySourcesError"""

        L = problem.L
        if L > MAX_SOURCES:
            raise TooManySourcesError(
                '%d sources exceed the limit of %d; split the problem into smaller groups of sources'
                % (L, MAX_SOURCES))
        costs = problem.costs
        caps = problem.availabilities
        budget = problem.budget_per_dim

        def levels(index):
            if np.isinf(caps[index]):
                return (0.0,)
            return (0.0, float(caps[index]))

        points = []
        for free in [None] + list(range(L)):
            pinned = [index for index in range(L) if index != free]
            if free is not None and costs[free] == 0:
                continue
            for choice in itertools.product(*[levels(index) for index in pinned]):
                candidate = np.zeros(L)
                candidate[pinned] = choice
                spent = float(np.dot(costs, candidate))
                if free is not None:
                    value = (budget - spent) / costs[free]
                    if value < -DEDUP_TOL or value > caps[free] + DEDUP_TOL:
                        continue
                    candidate[free] = min(max(value, 0.0), caps[free])
                    spent = float(np.dot(costs, candidate))
                if spent > budget + SATURATION_TOL:
                    continue
                self._append_unique(points, candidate)

        points.sort(key=lambda point: tuple(point.tolist()))
        logger.info('Budget polyhedron has %d vertices', len(points))
        return points

    def recovery_for_allocation(self, allocation, sources, theta2):
        """Optimally weighted component recovery when c_l samples per
        dimension are collected from every source.
        Args:
          allocation (list):
            rates c_l >= 0.
          sources (ndarray or BudgetProblem):
            noise variances sigma_l^2 of the sources.
          theta2 (float):
            amplitude theta_i^2.
        Returns:
          float in [0, 1]; 0 when nothing is collected.
        Raises:
          EmptyAllocationError"""

        variances = getattr(sources, 'variances', sources)
        variances = np.asarray(variances, dtype=float).ravel()
        allocation = np.asarray(allocation, dtype=float).ravel()
        if allocation.size == 0 or allocation.size != variances.size:
            raise EmptyAllocationError(
                'Allocation has %d entries for %d sources' % (allocation.size, variances.size))
        if np.any(~np.isfinite(allocation)) or np.any(allocation < 0):
            raise EmptyAllocationError('Allocation rates must be finite and nonnegative')
        return self._weighting.optimal_recovery_from_rates(allocation, variances, theta2)

    def _is_saturated(self, allocation, problem):
        spare = problem.budget_per_dim - float(np.dot(problem.costs, allocation))
        for index in range(problem.L):
            room = problem.availabilities[index] - allocation[index]
            if problem.costs[index] > 0:
                room = min(room, spare / problem.costs[index])
            if room > SATURATION_TOL:
                return False
        return True

    def optimize_sampling(self, problem):
        """Chooses the vertex with the largest optimally weighted recovery.
        Ties within 1e-12 go to the lexicographically largest allocation.
        Args:
          problem (BudgetProblem):
            sources, costs, availabilities, budget and theta^2.
        Returns:
          SamplingPlan
        Raises:
          TooManySourcesError"""

        vertices = self.enumerate_vertices(problem)

        def evaluate(vertex):
            return self.recovery_for_allocation(vertex, problem.variances, problem.theta2)

        if self._threads > 1:
            with ThreadPoolExecutor(max_workers=self._threads) as executor:
                recoveries = list(executor.map(evaluate, vertices))
        else:
            recoveries = [evaluate(vertex) for vertex in vertices]

        best = 0
        for index in range(1, len(vertices)):
            gain = recoveries[index] - recoveries[best]
            if gain > TIE_TOL:
                best = index
            elif abs(gain) <= TIE_TOL and tuple(vertices[index]) > tuple(vertices[best]):
                best = index

        allocation = vertices[best]
        saturated = self._is_saturated(allocation, problem)
        logger.info('Chose allocation %s with recovery %r', allocation.tolist(), recoveries[best])
        return SamplingPlan(allocation=allocation,
                            recovery=recoveries[best],
                            vertex=True,
                            saturated=saturated,
                            vertices=[vertex.tolist() for vertex in vertices],
                            vertex_recoveries=recoveries)


class TooManySourcesError(WPCAError):

    """Too Many Sources Error Type.

    This error is returned when a budget problem has more sources than the
    vertex enumeration handles; split the sources into smaller problems.
    """


class EmptyAllocationError(WPCAError):

    """Empty Allocation Error Type.

    This error is returned when an allocation is empty, has a negative rate
    or does not have one rate per source.
    """
