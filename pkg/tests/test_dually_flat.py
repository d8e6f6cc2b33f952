import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from qamlib import (
    ValidationError,
    bregman,
    dual_geodesic_point,
    jensen_barycenter,
    left_centroid,
    lift_dual,
    lift_point,
    lse0_generator,
    neg_log_det_generator,
    primal_geodesic_point,
    quadratic_generator,
    right_centroid,
    spd_harmonic_mean,
)
from qamlib.dually_flat import barycenter_residual

from conftest import random_spd

HALF = np.array([0.5, 0.5])


def lse0_f(theta):
    """Independent scalar implementation of the categorical cumulant,
    vectorized over leading axes."""
    theta = np.asarray(theta, dtype=float)
    return np.log1p(np.exp(theta).sum(axis=-1))


# ---------------------------------------------------------------------------
# Chart lifting and geodesics
# ---------------------------------------------------------------------------


def test_lift_point_examples(rng):
    quad = quadratic_generator(np.eye(2))
    t = rng.uniform(-1, 1, 2)
    pt = lift_point(quad, t)
    np.testing.assert_allclose(pt.eta, pt.theta, atol=1e-15)

    sig = lift_point(lse0_generator(1), np.zeros(1))
    np.testing.assert_allclose(sig.eta, [0.5], atol=1e-15)

    nld = lift_point(neg_log_det_generator(2), np.diag([2.0, 4.0]))
    np.testing.assert_allclose(nld.eta, np.diag([-0.5, -0.25]), atol=1e-15)


def test_lift_dual_round_trip(rng):
    gen = lse0_generator(2)
    theta = rng.uniform(-1, 1, 2)
    pt = lift_dual(gen, gen.grad(theta))
    np.testing.assert_allclose(pt.theta, theta, atol=1e-12)


def test_geodesic_endpoints(rng):
    gen = lse0_generator(2)
    p = lift_point(gen, rng.uniform(-2, 2, 2))
    q = lift_point(gen, rng.uniform(-2, 2, 2))
    for step in (primal_geodesic_point, dual_geodesic_point):
        start = step(gen, p, q, 0.0)
        end = step(gen, p, q, 1.0)
        np.testing.assert_allclose(start.theta, p.theta, atol=1e-12)
        np.testing.assert_allclose(end.theta, q.theta, atol=1e-12)


def test_geodesic_swap_reparameterization(rng):
    gen = lse0_generator(2)
    p = lift_point(gen, rng.uniform(-2, 2, 2))
    q = lift_point(gen, rng.uniform(-2, 2, 2))
    t = 0.3
    for step in (primal_geodesic_point, dual_geodesic_point):
        a = step(gen, p, q, t)
        b = step(gen, q, p, 1.0 - t)
        np.testing.assert_allclose(a.theta, b.theta, atol=1e-12)
        np.testing.assert_allclose(a.eta, b.eta, atol=1e-12)


def test_geodesic_chart_consistency(rng):
    gen = lse0_generator(3)
    p = lift_point(gen, rng.uniform(-2, 2, 3))
    q = lift_point(gen, rng.uniform(-2, 2, 3))
    for step in (primal_geodesic_point, dual_geodesic_point):
        for t in (0.2, 0.5, 0.9):
            pt = step(gen, p, q, t)
            np.testing.assert_allclose(pt.eta, gen.grad(pt.theta), atol=1e-9)


def test_quadratic_geodesics_coincide(rng):
    gen = quadratic_generator(np.eye(2))
    p = lift_point(gen, rng.uniform(-2, 2, 2))
    q = lift_point(gen, rng.uniform(-2, 2, 2))
    mid_primal = primal_geodesic_point(gen, p, q, 0.5)
    mid_dual = dual_geodesic_point(gen, p, q, 0.5)
    np.testing.assert_allclose(mid_primal.theta, 0.5 * (p.theta + q.theta),
                               atol=1e-14)
    np.testing.assert_allclose(mid_primal.theta, mid_dual.theta, atol=1e-14)


def test_sigmoid_geodesic_midpoints():
    gen = lse0_generator(1)
    p = lift_point(gen, np.array([-2.0]))
    q = lift_point(gen, np.array([2.0]))
    mid = primal_geodesic_point(gen, p, q, 0.5)
    np.testing.assert_allclose(mid.theta, [0.0], atol=1e-14)
    np.testing.assert_allclose(mid.eta, [0.5], atol=1e-14)
    dmid = dual_geodesic_point(gen, p, q, 0.5)
    # sigmoid symmetry puts the eta midpoint at 1/2, i.e. theta at 0
    np.testing.assert_allclose(dmid.eta, [0.5], atol=1e-14)
    np.testing.assert_allclose(dmid.theta, [0.0], atol=1e-12)


def test_geodesic_t_validation(rng):
    gen = lse0_generator(1)
    p = lift_point(gen, np.array([0.0]))
    q = lift_point(gen, np.array([1.0]))
    with pytest.raises(ValidationError):
        primal_geodesic_point(gen, p, q, 1.5)


def test_spd_geodesic_midpoints_are_matrix_means(rng):
    gen = neg_log_det_generator(3)
    a = random_spd(rng, 3)
    b = random_spd(rng, 3)
    p = lift_point(gen, a)
    q = lift_point(gen, b)
    np.testing.assert_allclose(primal_geodesic_point(gen, p, q, 0.5).theta,
                               0.5 * (a + b), atol=1e-12)
    np.testing.assert_allclose(dual_geodesic_point(gen, p, q, 0.5).theta,
                               spd_harmonic_mean(a, b), atol=1e-10)


# ---------------------------------------------------------------------------
# Sided centroids
# ---------------------------------------------------------------------------


def test_single_point_centroids(rng):
    gen = lse0_generator(2)
    pt = lift_point(gen, rng.uniform(-1, 1, 2))
    one = np.array([1.0])
    for side in (left_centroid, right_centroid):
        c = side(gen, [pt], one)
        np.testing.assert_allclose(c.theta, pt.theta, atol=1e-12)


def test_quadratic_centroids_coincide_at_euclidean_mean(rng):
    gen = quadratic_generator(np.eye(2))
    pts = [lift_point(gen, rng.uniform(-2, 2, 2)) for _ in range(2)]
    r = right_centroid(gen, pts, HALF)
    l = left_centroid(gen, pts, HALF)
    mid = 0.5 * (pts[0].theta + pts[1].theta)
    np.testing.assert_allclose(r.theta, mid, atol=1e-14)
    np.testing.assert_allclose(l.theta, mid, atol=1e-14)


def test_right_centroid_first_order_condition(rng):
    gen = lse0_generator(2)
    thetas = [rng.uniform(-1.5, 1.5, 2) for _ in range(3)]
    pts = [lift_point(gen, t) for t in thetas]
    w = np.full(3, 1 / 3)
    c = right_centroid(gen, pts, w)
    np.testing.assert_allclose(c.theta, np.mean(thetas, axis=0), atol=1e-12)

    def objective(theta):
        return sum(wi * bregman(gen, ti, theta)
                   for wi, ti in zip(w, thetas))

    step = 1e-6
    fd = np.array([
        (objective(c.theta + step * e) - objective(c.theta - step * e))
        / (2 * step)
        for e in np.eye(2)
    ])
    assert np.max(np.abs(fd)) < 1e-7


def test_left_centroid_against_grid_minimizer(rng):
    gen = lse0_generator(2)
    thetas = [rng.uniform(-1.0, 1.0, 2) for _ in range(3)]
    pts = [lift_point(gen, t) for t in thetas]
    w = rng.dirichlet(np.ones(3))
    c = left_centroid(gen, pts, w)

    stack = np.array(thetas)
    etas = np.array([p.eta for p in pts])

    def objective_grid(grid):
        # independent evaluation of sum_i w_i B_F(theta : theta_i)
        f_grid = lse0_f(grid)[:, None]
        f_pts = lse0_f(stack)[None, :]
        cross = np.einsum("gk,ik->gi", grid, etas) \
            - np.einsum("ik,ik->i", stack, etas)[None, :]
        return ((f_grid - f_pts - cross) @ w)

    center = c.theta
    span = 0.5
    for _ in range(4):
        xs = np.linspace(center[0] - span, center[0] + span, 41)
        ys = np.linspace(center[1] - span, center[1] + span, 41)
        grid = np.array([[x, y] for x in xs for y in ys])
        vals = objective_grid(grid)
        center = grid[int(np.argmin(vals))]
        span /= 10.0
    assert np.max(np.abs(center - c.theta)) < 1e-4


def test_left_centroid_spd_is_weighted_harmonic_mean(rng):
    gen = neg_log_det_generator(2)
    a, b = random_spd(rng, 2), random_spd(rng, 2)
    pts = [lift_point(gen, a), lift_point(gen, b)]
    c = left_centroid(gen, pts, HALF)
    np.testing.assert_allclose(c.theta, spd_harmonic_mean(a, b), atol=1e-10)


def test_centroid_chart_duality(rng):
    from qamlib import dual_qaa, weighted_sum

    gen = lse0_generator(2)
    pts = [lift_point(gen, rng.uniform(-1.5, 1.5, 2)) for _ in range(4)]
    w = rng.dirichlet(np.ones(4))
    r = right_centroid(gen, pts, w)
    np.testing.assert_allclose(r.eta, gen.grad(r.theta), atol=1e-12)
    np.testing.assert_allclose(r.eta, dual_qaa(gen, [p.eta for p in pts], w),
                               atol=1e-12)
    l = left_centroid(gen, pts, w)
    np.testing.assert_allclose(l.eta, weighted_sum([p.eta for p in pts], w),
                               atol=1e-12)
    np.testing.assert_allclose(gen.grad(l.theta), l.eta, atol=1e-9)


# ---------------------------------------------------------------------------
# Jensen barycenter
# ---------------------------------------------------------------------------


def test_barycenter_of_identical_points_converges_immediately(rng):
    gen = lse0_generator(2)
    t = rng.uniform(-1, 1, 2)
    trace = jensen_barycenter(gen, [t, t, t], np.full(3, 1 / 3))
    assert trace.converged
    assert trace.iterations == 0
    np.testing.assert_allclose(trace.point, t, atol=1e-12)


def test_barycenter_quadratic_fixed_point_is_arithmetic_mean(rng):
    gen = quadratic_generator(random_spd(rng, 2))
    thetas = [rng.uniform(-2, 2, 2) for _ in range(3)]
    w = rng.dirichlet(np.ones(3))
    trace = jensen_barycenter(gen, thetas, w)
    assert trace.converged and trace.iterations == 0
    np.testing.assert_allclose(trace.point,
                               np.asarray(thetas).T @ w, atol=1e-10)


def test_barycenter_matches_golden_section_oracle():
    gen = lse0_generator(1)
    thetas = [np.array([-1.0]), np.array([2.0])]
    w = HALF

    def objective(x):
        t = np.array([x])
        return sum(wi * (0.5 * (gen.f_eval(t) + gen.f_eval(ti))
                         - gen.f_eval(0.5 * (t + ti)))
                   for wi, ti in zip(w, thetas))

    res = minimize_scalar(objective, bounds=(-1.0, 2.0), method="bounded",
                          options={"xatol": 1e-12})
    trace = jensen_barycenter(gen, thetas, w, tol=1e-12)
    assert trace.converged
    assert trace.point[0] == pytest.approx(res.x, abs=1e-6)
    assert trace.residuals[-1] <= 1e-12


def test_barycenter_residual_is_first_order_condition(rng):
    gen = lse0_generator(2)
    thetas = [rng.uniform(-1, 1, 2) for _ in range(3)]
    w = rng.dirichlet(np.ones(3))
    trace = jensen_barycenter(gen, thetas, w, tol=1e-11)
    assert trace.converged
    final = barycenter_residual(gen, trace.point, thetas, w)
    assert final <= 1e-11


def test_barycenter_nonconvergence_reports_trace(rng):
    gen = lse0_generator(1)
    thetas = [np.array([-1.0]), np.array([2.0])]
    trace = jensen_barycenter(gen, thetas, HALF, tol=1e-14, max_iter=1)
    assert not trace.converged
    assert len(trace.iterates) == 2
    assert len(trace.residuals) == 2


def test_barycenter_rejects_bad_tol(rng):
    gen = lse0_generator(1)
    with pytest.raises(ValidationError):
        jensen_barycenter(gen, [np.zeros(1)], np.array([1.0]), tol=0.0)
