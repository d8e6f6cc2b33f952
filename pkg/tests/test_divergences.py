import math

import numpy as np
import pytest

from qamlib import (
    DomainError,
    ValidationError,
    affine_reparam,
    bregman,
    divergence_report,
    fenchel_young,
    jeffreys_bregman,
    jensen,
    jensen_diversity,
    lse0_generator,
    mn_convexity_test,
    mn_jensen,
    neg_log_det_generator,
    power_mean_spec,
    lse_mean_spec,
    power_generator,
    quadratic_generator,
)
from qamlib.checks import reference_generators

from conftest import random_spd


def test_bregman_zero_at_identical_points(rng):
    gen = lse0_generator(2)
    t = rng.uniform(-2, 2, 2)
    assert bregman(gen, t, t) == pytest.approx(0.0, abs=1e-14)


def test_bregman_quadratic_is_mahalanobis(rng):
    q = random_spd(rng, 3)
    gen = quadratic_generator(q, rng.uniform(-1, 1, 3), 0.5)
    t1 = rng.uniform(-2, 2, 3)
    t2 = rng.uniform(-2, 2, 3)
    d = t2 - t1
    assert bregman(gen, t1, t2) == pytest.approx(0.5 * d @ q @ d, abs=1e-12)


def test_bregman_neg_log_det_example():
    gen = neg_log_det_generator(2)
    value = bregman(gen, 2.0 * np.eye(2), np.eye(2))
    # -log det(2I) + log det(I) + tr(2I - I) = 2 - 2 log 2
    assert value == pytest.approx(2.0 - 2.0 * math.log(2.0), abs=1e-12)


def test_bregman_against_finite_difference_expansion(rng):
    # rebuild the divergence from f_eval and a finite-difference gradient
    gen = neg_log_det_generator(2)
    t2 = random_spd(rng, 2)
    t1 = random_spd(rng, 2)
    step = 1e-6
    fd_grad = np.zeros((2, 2))
    for i in range(2):
        for j in range(2):
            up, dn = t2.copy(), t2.copy()
            up[i, j] += step
            dn[i, j] -= step
            fd_grad[i, j] = (gen.f_eval(0.5 * (up + up.T))
                             - gen.f_eval(0.5 * (dn + dn.T))) / (2 * step)
    fd_grad = 0.5 * (fd_grad + fd_grad.T)
    oracle = gen.f_eval(t1) - gen.f_eval(t2) - float(np.sum((t1 - t2) * fd_grad))
    assert bregman(gen, t1, t2) == pytest.approx(oracle, abs=1e-5)


def test_fenchel_young_zero_on_gradient_pairs(rng):
    gen = lse0_generator(2)
    t = rng.uniform(-2, 2, 2)
    assert fenchel_young(gen, t, gen.grad(t)) == pytest.approx(0.0, abs=1e-12)


def test_fenchel_young_quadratic_example():
    gen = quadratic_generator(np.eye(2))
    value = fenchel_young(gen, np.array([1.0, 0.0]), np.array([0.0, 1.0]))
    assert value == pytest.approx(1.0, abs=1e-14)


def test_fenchel_young_sigmoid_example():
    gen = lse0_generator(1)
    assert fenchel_young(gen, np.zeros(1), np.array([0.5])) \
        == pytest.approx(0.0, abs=1e-14)


def test_fenchel_young_equals_bregman_through_grad_inv(rng):
    for gen, sample in reference_generators():
        theta = sample(rng)
        eta = gen.grad(sample(rng))
        assert fenchel_young(gen, theta, eta) == pytest.approx(
            bregman(gen, theta, gen.grad_inv(eta)), abs=1e-9)


def test_jeffreys_zero_and_quadratic_value(rng):
    gen = quadratic_generator(np.eye(2))
    t = rng.uniform(-1, 1, 2)
    assert jeffreys_bregman(gen, t, t) == pytest.approx(0.0, abs=1e-14)
    assert jeffreys_bregman(gen, np.zeros(2), np.ones(2)) \
        == pytest.approx(2.0, abs=1e-14)


def test_jeffreys_is_sum_of_sided_bregman(rng):
    gen = neg_log_det_generator(3)
    t1 = random_spd(rng, 3)
    t2 = random_spd(rng, 3)
    assert jeffreys_bregman(gen, t1, t2) == pytest.approx(
        bregman(gen, t1, t2) + bregman(gen, t2, t1), abs=1e-9)


def test_jensen_values():
    gen = quadratic_generator(np.eye(1))
    assert jensen(gen, np.array([0.0]), np.array([0.0])) == pytest.approx(0.0)
    # (0 + 2)/2 - 1/2 = 1/2 with F = t^2/2 at 0 and 2
    assert jensen(gen, np.array([0.0]), np.array([2.0])) \
        == pytest.approx(0.5, abs=1e-14)


def test_jensen_lse0_symmetric_points():
    gen = lse0_generator(1)
    t = 3.0
    direct = 0.5 * (gen.f_eval(np.array([-t])) + gen.f_eval(np.array([t]))) \
        - gen.f_eval(np.zeros(1))
    assert jensen(gen, np.array([-t]), np.array([t])) \
        == pytest.approx(direct, abs=1e-14)


def test_jensen_diversity_reduces_to_jensen(rng):
    gen = lse0_generator(2)
    t1 = rng.uniform(-2, 2, 2)
    t2 = rng.uniform(-2, 2, 2)
    assert jensen_diversity(gen, [t1, t2], np.array([0.5, 0.5])) \
        == pytest.approx(jensen(gen, t1, t2), abs=1e-12)


def test_nonnegativity_and_identity_of_indiscernibles(rng):
    for gen, sample in reference_generators():
        for _ in range(10):
            t1, t2 = sample(rng), sample(rng)
            b = bregman(gen, t1, t2)
            assert b >= -1e-12
            if np.max(np.abs(t1 - t2)) > 1e-6:
                assert b > 1e-10
            assert jensen(gen, t1, t2) >= -1e-12
            assert jeffreys_bregman(gen, t1, t2) >= -1e-12


def test_bregman_affine_invariance(rng):
    gen = lse0_generator(2)
    tilted = affine_reparam(gen, np.eye(2), c=rng.uniform(-1, 1, 2), d=0.8)
    t1, t2 = rng.uniform(-2, 2, 2), rng.uniform(-2, 2, 2)
    assert bregman(tilted, t1, t2) == pytest.approx(bregman(gen, t1, t2),
                                                    abs=1e-10)


def test_bregman_scaling_covariance(rng):
    gen = lse0_generator(2)
    lam = 3.7
    scaled = affine_reparam(gen, np.eye(2), lam=lam)
    t1, t2 = rng.uniform(-2, 2, 2), rng.uniform(-2, 2, 2)
    assert bregman(scaled, t1, t2) == pytest.approx(
        lam * bregman(gen, t1, t2), abs=1e-10)


# ---------------------------------------------------------------------------
# Comparative convexity
# ---------------------------------------------------------------------------


def test_mn_jensen_arithmetic_reduces_to_jensen():
    spec = power_mean_spec(1.0)
    func = lambda t: t * t
    # (1 + 16)/2 - F(2.5) with F = t^2
    got = mn_jensen(spec, spec, func, 1.0, 4.0)
    assert got == pytest.approx(0.5 * (1 + 16) - 0.0 - 2.5 ** 2, abs=1e-12)
    gen = quadratic_generator(np.eye(1) * 2.0)  # F(t) = t^2
    ref = jensen(gen, np.array([1.0]), np.array([4.0]))
    assert got == pytest.approx(ref, abs=1e-12)


def test_mn_jensen_log_affine_exp_has_zero_geometric_gap():
    got = mn_jensen(power_mean_spec(0.0), power_mean_spec(1.0), math.exp,
                    0.0, 2.0)
    # G(1, e^2) - e^1 = 0
    assert got == pytest.approx(0.0, abs=1e-12)


def test_mn_jensen_square_with_geometric_location():
    got = mn_jensen(power_mean_spec(1.0), power_mean_spec(0.0),
                    lambda t: t * t, 1.0, 4.0)
    assert got == pytest.approx((1.0 + 16.0) / 2.0 - 4.0, abs=1e-12)


def test_mn_convexity_scan():
    ident = power_mean_spec(1.0)
    assert mn_convexity_test(ident, ident, math.exp, (0.0, 1.0), 64)
    assert not mn_convexity_test(ident, ident, math.log, (1.0, 2.0), 64)


def test_mn_convexity_scan_is_its_own_oracle():
    # the composition log . exp . log on [1, 2] is just log, hence concave
    geo = power_mean_spec(0.0)
    composed_is_convex = mn_convexity_test(geo, geo, math.exp, (1.0, 2.0), 64)
    xs = np.linspace(1.0, 2.0, 65)
    vals = np.log(np.exp(np.log(xs)))
    gaps = 0.5 * (vals[:-2] + vals[2:]) - vals[1:-1]
    assert composed_is_convex == bool(np.all(gaps > 1e-12))
    assert not composed_is_convex


def test_mn_convexity_multiplicative_convexity_with_inverse_generator():
    # testing (G,G)-convexity of exp needs the inverse generator on the
    # argument side: log . exp . exp is convex
    geo = power_mean_spec(0.0)
    lse = lse_mean_spec()
    assert mn_convexity_test(lse, geo, math.exp, (0.0, 1.0), 64)


def test_mn_convexity_reports_evaluation_failures():
    ident = power_mean_spec(1.0)
    with pytest.raises(DomainError):
        mn_convexity_test(ident, ident, math.log, (-2.0, -1.0), 16)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def test_divergence_report_reconstruction(rng):
    gen = lse0_generator(2)
    t1, t2 = rng.uniform(-2, 2, 2), rng.uniform(-2, 2, 2)
    for kind, second in [("bregman", t2), ("jeffreys", t2), ("jensen", t2),
                         ("fenchel_young", gen.grad(t2))]:
        rep = divergence_report(gen, kind, t1, second)
        assert abs(rep.value - rep.reconstruct()) <= 1e-12
    with pytest.raises(ValidationError):
        divergence_report(gen, "nope", t1, t2)


def test_report_values_match_functions(rng):
    gen = power_generator(2.0, 2)
    t1 = rng.uniform(0.5, 2, 2)
    t2 = rng.uniform(0.5, 2, 2)
    assert divergence_report(gen, "bregman", t1, t2).value \
        == pytest.approx(bregman(gen, t1, t2), abs=1e-14)
    assert divergence_report(gen, "jensen", t1, t2).value \
        == pytest.approx(jensen(gen, t1, t2), abs=1e-14)
