"""Dual charts, dual geodesics, sided centroids and the Jensen barycenter
on the dually flat space carried by a generator.

Every point lives in two affine charts at once: the primal chart ``theta``
and the dual chart ``eta = grad(theta)``.  Primal geodesics are straight
in ``theta``; dual geodesics are straight in ``eta``.  The two sided
Bregman centroids have closed forms: arithmetic mean in one chart, the
quasi-arithmetic average in the other.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List

import numpy as np

from .averages import as_weights, dual_qaa, qaa, weighted_sum
from .errors import DomainEscapeError, DomainError, ValidationError
from .generators import Generator


@dataclass(frozen=True)
class DfsPoint:
    """A manifold point carried in both affine charts."""

    theta: np.ndarray
    eta: np.ndarray


@dataclass
class BarycenterTrace:
    """Iterate history of the Jensen-barycenter fixed-point iteration.

    ``residuals[k]`` is the first-order optimality norm at ``iterates[k]``;
    no monotonicity is guaranteed along the way, only that the final
    residual is below tolerance when ``converged`` is set.
    """

    iterates: List[np.ndarray] = field(default_factory=list)
    residuals: List[float] = field(default_factory=list)
    converged: bool = False

    @property
    def point(self) -> np.ndarray:
        return self.iterates[-1]

    @property
    def iterations(self) -> int:
        return len(self.iterates) - 1


def lift_point(gen: Generator, theta) -> DfsPoint:
    """Populate both charts from primal coordinates."""
    theta = gen.require_domain(theta)
    return DfsPoint(theta=theta, eta=gen.grad(theta))


def lift_dual(gen: Generator, eta) -> DfsPoint:
    """Populate both charts from dual coordinates."""
    eta = gen.require_dual_domain(eta)
    return DfsPoint(theta=gen.grad_inv(eta), eta=eta)


def _check_t(t: float) -> float:
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ValidationError("t must lie in [0, 1]", field="t")
    return t


def primal_geodesic_point(gen: Generator, p: DfsPoint, q: DfsPoint,
                          t: float) -> DfsPoint:
    """Point at parameter ``t`` on the primal geodesic: linear in the theta
    chart, the dual quasi-arithmetic average in the eta chart."""
    t = _check_t(t)
    theta = (1.0 - t) * p.theta + t * q.theta
    if not gen.domain_contains(theta):
        raise DomainError("geodesic point escaped the primal domain")
    return DfsPoint(theta=theta, eta=gen.grad(theta))


def dual_geodesic_point(gen: Generator, p: DfsPoint, q: DfsPoint,
                        t: float) -> DfsPoint:
    """Point at parameter ``t`` on the dual geodesic: linear in the eta
    chart, the quasi-arithmetic average in the theta chart."""
    t = _check_t(t)
    eta = (1.0 - t) * p.eta + t * q.eta
    if not gen.dual_domain_contains(eta):
        raise DomainError("geodesic point escaped the dual domain")
    return DfsPoint(theta=gen.grad_inv(eta), eta=eta)


def right_centroid(gen: Generator, points, w) -> DfsPoint:
    """Minimizer of ``sum_i w_i B_F(theta_i : theta)``.

    Closed form: the arithmetic mean in the theta chart; its eta chart is
    the dual quasi-arithmetic average of the eta coordinates.
    """
    points = list(points)
    if not points:
        raise ValidationError("need at least one point", field="points")
    w = as_weights(w, n=len(points))
    thetas = [gen.require_domain(p.theta, f"points[{i}].theta")
              for i, p in enumerate(points)]
    theta = weighted_sum(thetas, w)
    if not gen.domain_contains(theta):
        raise DomainError("averaged theta escaped the domain")
    return DfsPoint(theta=theta, eta=gen.grad(theta))


def left_centroid(gen: Generator, points, w) -> DfsPoint:
    """Minimizer of ``sum_i w_i B_F(theta : theta_i)``.

    Closed form: the quasi-arithmetic average in the theta chart; the
    arithmetic mean in the eta chart.
    """
    points = list(points)
    if not points:
        raise ValidationError("need at least one point", field="points")
    w = as_weights(w, n=len(points))
    theta = qaa(gen, [p.theta for p in points], w)
    eta = weighted_sum([np.asarray(p.eta, dtype=float) for p in points], w)
    return DfsPoint(theta=theta, eta=eta)


def barycenter_residual(gen: Generator, theta, thetas, w) -> float:
    """First-order stationarity norm of the Jensen-barycenter objective:
    ``max-abs of grad(theta) - sum_i w_i grad((theta + theta_i)/2)``."""
    mids = [gen.grad(0.5 * (theta + ti)) for ti in thetas]
    return float(np.max(np.abs(gen.grad(theta) - weighted_sum(mids, w))))


def jensen_barycenter(gen: Generator, thetas, w, tol: float = 1e-10,
                      max_iter: int = 200) -> BarycenterTrace:
    """Fixed-point iteration for the barycenter of the weighted Jensen
    divergences ``sum_i w_i J_F(theta, theta_i)``.

    Starts from the weighted arithmetic mean and repeatedly replaces the
    iterate by the quasi-arithmetic average of its midpoints with the
    input points.  Convergence is declared on first-order stationarity,
    not iterate displacement.  A trace with ``converged=False`` is
    returned when ``max_iter`` runs out; an iterate leaving the domain
    raises :class:`DomainEscapeError` carrying the partial trace.
    """
    thetas = [gen.require_domain(t, f"theta[{i}]") for i, t in enumerate(thetas)]
    w = as_weights(w, n=len(thetas))
    if not tol > 0.0:
        raise ValidationError("tol must be positive", field="tol")
    theta = weighted_sum(thetas, w)
    trace = BarycenterTrace()
    for _ in range(max_iter + 1):
        if not gen.domain_contains(theta):
            raise DomainEscapeError("barycenter iterate left the domain",
                                    trace=trace)
        resid = barycenter_residual(gen, theta, thetas, w)
        trace.iterates.append(theta)
        trace.residuals.append(resid)
        if resid <= tol:
            trace.converged = True
            return trace
        mids = [0.5 * (theta + ti) for ti in thetas]
        try:
            theta = qaa(gen, mids, w)
        except DomainError as exc:
            raise DomainEscapeError(f"barycenter update failed: {exc}",
                                    trace=trace) from exc
    return trace
