"""Machine-checkable property suites.

Each suite function runs a fixed-seed battery of the library's invariants
and returns a report dict: per-check name, measured residual, tolerance,
and pass flag.  The CLI ``check`` subcommand serializes these reports; the
acceptance tests assert on them.
"""

from __future__ import annotations

import math

import numpy as np

from . import averages, divergences, dually_flat, generators, mixtures, spd

SUITES = ("generators", "invariance", "convergence", "closures")


def _entry(name, observed, tolerance, passed=None, **extra):
    if passed is None:
        passed = bool(observed <= tolerance)
    e = {"name": name, "observed": float(observed),
         "tolerance": float(tolerance), "passed": bool(passed)}
    e.update(extra)
    return e


def _report(suite, checks):
    return {"suite": suite,
            "passed": all(c["passed"] for c in checks),
            "checks": checks}


def random_spd(rng, dim, eig_low=0.1, eig_high=10.0):
    """Random SPD matrix with eigenvalues drawn from [eig_low, eig_high]."""
    q, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    eigs = rng.uniform(eig_low, eig_high, size=dim)
    return 0.5 * ((q * eigs) @ q.T + ((q * eigs) @ q.T).T)


def random_well_conditioned(rng, dim, sv_low=0.5, sv_high=2.0):
    """Random invertible matrix with singular values in [sv_low, sv_high]."""
    u, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    v, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    sv = rng.uniform(sv_low, sv_high, size=dim)
    return (u * sv) @ v.T


def _fixed_mixture_bases(rng, n=2, m=5):
    bases = rng.dirichlet(np.full(m, 4.0), size=n + 1)
    return generators.MixtureFamily(bases)


def reference_generators(seed=20240817):
    """The six concrete generator instances used by the suites, each
    paired with an interior-point sampler."""
    rng = np.random.default_rng(seed)
    q = random_spd(rng, 4, 0.5, 4.0)
    c = rng.uniform(-1.0, 1.0, size=4)
    family = _fixed_mixture_bases(rng)

    def theta_simplex(r, n):
        u = r.dirichlet(np.full(n + 1, 3.0))
        return u[:n]

    return [
        (generators.power_generator(1.5, 3),
         lambda r: r.uniform(0.3, 3.0, size=3)),
        (generators.lse0_generator(3),
         lambda r: r.uniform(-2.0, 2.0, size=3)),
        (generators.quadratic_generator(q, c, 0.7),
         lambda r: r.uniform(-3.0, 3.0, size=4)),
        (generators.neg_log_det_generator(3),
         lambda r: random_spd(r, 3, 0.3, 3.0)),
        (generators.half_trace_square_generator(3),
         lambda r: 0.5 * (lambda a: a + a.T)(r.uniform(-2.0, 2.0, size=(3, 3)))),
        (generators.mixture_negentropy_generator(family),
         lambda r: theta_simplex(r, family.order)),
    ]


def generators_suite(n_points=100, seed=7):
    """Round-trip, Young-equality, and co-monotonicity residuals for each
    of the six concrete generators."""
    checks = []
    rng = np.random.default_rng(seed)
    for gen, sample in reference_generators():
        rt = 0.0
        young = 0.0
        for _ in range(n_points):
            theta = sample(rng)
            eta = gen.grad(theta)
            rt = max(rt, float(np.max(np.abs(gen.grad_inv(eta) - theta))))
            conj = (gen.conj_eval(eta) if gen.conj_eval is not None
                    else generators.legendre_conjugate(gen, eta))
            young = max(young, abs(gen.f_eval(theta) + conj
                                   - generators.inner(theta, eta)))
        checks.append(_entry(f"round_trip[{gen.label}]", rt, 1e-9))
        checks.append(_entry(f"young_equality[{gen.label}]", young, 1e-9))
        min_jeffreys = math.inf
        for _ in range(n_points):
            t1 = sample(rng)
            t2 = sample(rng)
            if np.max(np.abs(t1 - t2)) < 1e-8:
                continue
            min_jeffreys = min(min_jeffreys,
                               divergences.jeffreys_bregman(gen, t1, t2))
        checks.append(_entry(f"comonotonicity[{gen.label}]", min_jeffreys, 0.0,
                             passed=min_jeffreys > 0.0))
    return _report("generators", checks)


def invariance_suite(n_trials=50, seed=11):
    """Affine equivariance of the average, scalar mean invariance, scale
    invariance, and affine invariance of the Bregman divergence."""
    rng = np.random.default_rng(seed)
    checks = []

    worst = 0.0
    for trial in range(n_trials):
        d = 1 + trial % 5
        base_kind = trial % 3
        if base_kind == 0:
            gen = generators.quadratic_generator(random_spd(rng, d, 0.5, 3.0),
                                                 rng.uniform(-1, 1, d))
            pts = [rng.uniform(-2.0, 2.0, d) for _ in range(4)]
        elif base_kind == 1:
            gen = generators.lse0_generator(d)
            pts = [rng.uniform(-2.0, 2.0, d) for _ in range(4)]
        else:
            gen = generators.power_generator(rng.uniform(-1.5, 2.5), d)
            pts = [rng.uniform(0.4, 2.5, d) for _ in range(4)]
        w = rng.dirichlet(np.full(4, 2.0))
        a = random_well_conditioned(rng, d)
        b = rng.uniform(-1.0, 1.0, d)
        c = rng.uniform(-1.0, 1.0, d)
        shift = rng.uniform(-1.0, 1.0)
        lam = rng.uniform(0.25, 4.0)
        rep = generators.affine_reparam(gen, a, b, c, shift, lam)
        mapped = [a @ t + b for t in pts]
        lhs = averages.qaa(rep, mapped, w)
        rhs = a @ averages.qaa(gen, pts, w) + b
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    checks.append(_entry("affine_equivariance", worst, 1e-8))

    worst = 0.0
    for _ in range(25):
        lam = rng.uniform(0.2, 5.0) * rng.choice([-1.0, 1.0])
        c = rng.uniform(-2.0, 2.0)
        f = lambda t, lam=lam, c=c: lam * np.log(t) + c
        f_inv = lambda y, lam=lam, c=c: np.exp((y - c) / lam)
        spec = averages.custom_mean_spec(f, f_inv, (1e-6, 1e6))
        xs = rng.uniform(0.2, 5.0, size=5)
        w = rng.dirichlet(np.ones(5))
        got = averages.scalar_qam(spec, xs, w)
        ref = averages.power_mean(0.0, xs, w)
        worst = max(worst, abs(got - ref))
    checks.append(_entry("scalar_mean_invariance", worst, 1e-9))

    gen = generators.lse0_generator(2)
    worst = 0.0
    for _ in range(25):
        lam = rng.uniform(0.1, 10.0)
        scaled = generators.affine_reparam(gen, np.eye(2), lam=lam)
        pts = [rng.uniform(-2, 2, 2) for _ in range(3)]
        w = rng.dirichlet(np.ones(3))
        worst = max(worst, float(np.max(np.abs(
            averages.qaa(scaled, pts, w) - averages.qaa(gen, pts, w)))))
    checks.append(_entry("scale_invariance", worst, 1e-9))

    worst = 0.0
    worst_scaled = 0.0
    for _ in range(25):
        c = rng.uniform(-1, 1, 2)
        shift = rng.uniform(-1, 1)
        lam = rng.uniform(0.2, 5.0)
        tilted = generators.affine_reparam(gen, np.eye(2), c=c, d=shift)
        scaled = generators.affine_reparam(gen, np.eye(2), lam=lam)
        t1 = rng.uniform(-2, 2, 2)
        t2 = rng.uniform(-2, 2, 2)
        ref = divergences.bregman(gen, t1, t2)
        worst = max(worst, abs(divergences.bregman(tilted, t1, t2) - ref))
        worst_scaled = max(worst_scaled,
                           abs(divergences.bregman(scaled, t1, t2) - lam * ref))
    checks.append(_entry("bregman_affine_invariance", worst, 1e-10))
    checks.append(_entry("bregman_scaling_covariance", worst_scaled, 1e-9))

    worst = 0.0
    for _ in range(25):
        d = int(rng.integers(1, 5))
        base = generators.quadratic_generator(random_spd(rng, d, 0.5, 3.0))
        a = random_well_conditioned(rng, d)
        b = rng.uniform(-1, 1, d)
        rep = generators.affine_reparam(base, a, b)
        t1 = rng.uniform(-2, 2, d)
        t2 = rng.uniform(-2, 2, d)
        worst = max(worst, abs(divergences.bregman(rep, a @ t1 + b, a @ t2 + b)
                               - divergences.bregman(base, t1, t2)))
    checks.append(_entry("bregman_reparameterization_invariance", worst, 1e-8))

    return _report("invariance", checks)


def _fit_order(gaps):
    """Least-squares slope of log gap_{t+1} against log gap_t over the
    quadratic-regime window; needs two pairs to fit."""
    pts = [(math.log(a), math.log(b))
           for a, b in zip(gaps[:-1], gaps[1:])
           if 1e-13 < b <= a < 0.5]
    if len(pts) < 2:
        return None
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    xs -= xs.mean()
    return float(np.dot(xs, ys - ys.mean()) / np.dot(xs, xs))


def convergence_suite(n_pairs=50, seed=13):
    """AHM-vs-closed-form agreement and quadratic rate, sided-centroid
    optimality against a perturbation cloud, Jensen-barycenter residuals,
    and the alpha-geodesic grid solver."""
    rng = np.random.default_rng(seed)
    checks = []

    worst_rel = 0.0
    worst_iters = 0
    orders = []
    for trial in range(n_pairs):
        d = 2 + trial % 7
        p = random_spd(rng, d, 0.1, 10.0)
        q = random_spd(rng, d, 0.1, 10.0)
        trace = spd.ahm_geometric(p, q, tol=1e-12)
        closed = spd.spd_geometric_closed(p, q)
        rel = float(np.linalg.norm(trace.limit - closed, "fro")
                    / np.linalg.norm(closed, "fro"))
        worst_rel = max(worst_rel, rel)
        worst_iters = max(worst_iters, trace.iterations)
        order = _fit_order(trace.gaps)
        if order is not None:
            orders.append(order)
    checks.append(_entry("ahm_matches_closed_form", worst_rel, 1e-10))
    checks.append(_entry("ahm_iterations", worst_iters, 10))
    min_order = min(orders)
    checks.append(_entry("ahm_quadratic_order", min_order, 1.8,
                         passed=min_order >= 1.8, fitted=len(orders)))

    worst = 0.0
    for _ in range(10):
        p = random_spd(rng, 4, 0.2, 8.0)
        limit = spd.ahm_geometric(p, np.eye(4), tol=1e-12).limit
        root = spd.spd_sqrt(p)
        worst = max(worst, float(np.linalg.norm(limit - root, "fro")
                                 / np.linalg.norm(root, "fro")))
    checks.append(_entry("ahm_square_root", worst, 1e-10))

    gen = generators.lse0_generator(2)
    pts_theta = [rng.uniform(-1.5, 1.5, 2) for _ in range(4)]
    pts = [dually_flat.lift_point(gen, t) for t in pts_theta]
    w = rng.dirichlet(np.full(4, 2.0))
    right = dually_flat.right_centroid(gen, pts, w)
    left = dually_flat.left_centroid(gen, pts, w)

    def right_obj(theta):
        return sum(wi * divergences.bregman(gen, ti, theta)
                   for wi, ti in zip(w, pts_theta))

    def left_obj(theta):
        return sum(wi * divergences.bregman(gen, theta, ti)
                   for wi, ti in zip(w, pts_theta))

    n_cloud = 10_000
    radii = np.exp(rng.uniform(math.log(1e-3), math.log(0.5), size=n_cloud))
    dirs = rng.standard_normal((n_cloud, 2))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    cloud = radii[:, None] * dirs
    r0 = right_obj(right.theta)
    l0 = left_obj(left.theta)
    right_margin = min(right_obj(right.theta + delta) - r0 for delta in cloud)
    left_margin = min(left_obj(left.theta + delta) - l0 for delta in cloud)
    checks.append(_entry("right_centroid_optimality", -right_margin, 0.0,
                         passed=right_margin > 0.0))
    checks.append(_entry("left_centroid_optimality", -left_margin, 0.0,
                         passed=left_margin > 0.0))

    worst = 0.0
    instances = [
        (generators.lse0_generator(1),
         [np.array([-1.0]), np.array([2.0])], np.array([0.5, 0.5])),
        (generators.lse0_generator(2),
         [rng.uniform(-1.5, 1.5, 2) for _ in range(3)],
         rng.dirichlet(np.ones(3))),
    ]
    all_converged = True
    for g, thetas, weights in instances:
        trace = dually_flat.jensen_barycenter(g, thetas, weights, tol=1e-10)
        all_converged = all_converged and trace.converged
        worst = max(worst, trace.residuals[-1])
    checks.append(_entry("barycenter_residual", worst, 1e-10,
                         passed=all_converged and worst <= 1e-10))

    p3 = np.array([0.7, 0.2, 0.1])
    q3 = np.array([0.1, 0.3, 0.6])
    fine = 512
    ts, path_exp = mixtures.alpha_geodesic_path(
        p3, q3, mixtures.AlphaGeodesicConfig(alpha=1.0, solver="bvp",
                                             grid_size=fine))
    closed = np.vstack([mixtures.alpha_geodesic_point(
        p3, q3, t, mixtures.AlphaGeodesicConfig(alpha=1.0)) for t in ts])
    checks.append(_entry("bvp_matches_exponential_closed_form",
                         float(np.max(np.abs(path_exp - closed))), 1e-6))
    _, path_mix = mixtures.alpha_geodesic_path(
        p3, q3, mixtures.AlphaGeodesicConfig(alpha=-1.0, solver="bvp",
                                             grid_size=fine))
    linear = (1 - ts)[:, None] * p3 + ts[:, None] * q3
    checks.append(_entry("bvp_matches_mixture_closed_form",
                         float(np.max(np.abs(path_mix - linear))), 1e-6))

    worst_refine = 0.0
    worst_end = 0.0
    for p_end, q_end in [(p3, q3),
                         (np.array([0.5, 0.4, 0.1]), np.array([0.2, 0.2, 0.6]))]:
        mid_coarse = mixtures.alpha_geodesic_point(
            p_end, q_end, 0.5,
            mixtures.AlphaGeodesicConfig(alpha=0.0, solver="bvp",
                                         grid_size=fine // 2))
        mid_fine = mixtures.alpha_geodesic_point(
            p_end, q_end, 0.5,
            mixtures.AlphaGeodesicConfig(alpha=0.0, solver="bvp",
                                         grid_size=fine))
        worst_refine = max(worst_refine,
                           float(np.max(np.abs(mid_fine - mid_coarse))))
        _, path0 = mixtures.alpha_geodesic_path(
            p_end, q_end, mixtures.AlphaGeodesicConfig(alpha=0.0, solver="bvp",
                                                       grid_size=fine // 2))
        worst_end = max(worst_end,
                        float(np.max(np.abs(path0[0] - p_end))),
                        float(np.max(np.abs(path0[-1] - q_end))))
    checks.append(_entry("bvp_grid_refinement_midpoint", worst_refine, 1e-6,
                         passed=worst_refine < 1e-6))
    checks.append(_entry("bvp_endpoints", worst_end, 1e-8))

    return _report("convergence", checks)


def closures_suite(seed=17):
    """Jensen-Shannon identities, exponential-family geometric closure,
    the mixture-family identity, and the Cauchy harmonic closure."""
    rng = np.random.default_rng(seed)
    checks = []

    worst_form = 0.0
    worst_bound = -math.inf
    for trial in range(100):
        m = 2 + trial % 9
        p = rng.dirichlet(np.ones(m))
        q = rng.dirichlet(np.ones(m))
        val = mixtures.jsd(p, q)
        entropy_form = (mixtures.shannon_entropy(0.5 * (p + q))
                        - 0.5 * (mixtures.shannon_entropy(p)
                                 + mixtures.shannon_entropy(q)))
        worst_form = max(worst_form, abs(val - entropy_form))
        worst_bound = max(worst_bound, val - math.log(2.0))
    checks.append(_entry("jsd_kl_vs_entropy_form", worst_form, 1e-12))
    checks.append(_entry("jsd_log2_bound", worst_bound, 1e-12))

    worst_mix = 0.0
    worst_geo = 0.0
    for _ in range(10):
        m = int(rng.integers(2, 8))
        p = rng.dirichlet(np.full(m, 2.0))
        q = rng.dirichlet(np.full(m, 2.0))
        worst_mix = max(worst_mix, abs(
            mixtures.nabla_alpha_jsd(p, q, alpha=-1.0) - mixtures.jsd(p, q)))
        worst_geo = max(worst_geo, abs(
            mixtures.nabla_alpha_jsd(p, q, alpha=1.0)
            - mixtures.generalized_jsd(averages.power_mean_spec(0.0), p, q)))
    checks.append(_entry("nabla_jsd_mixture_connection", worst_mix, 1e-9))
    checks.append(_entry("nabla_jsd_exponential_connection", worst_geo, 1e-9))

    worst_density = 0.0
    worst_norm = 0.0
    for trial in range(50):
        d = 1 + trial % 4
        n = 2 + trial % 2
        gen = generators.lse0_generator(d)
        thetas = [rng.uniform(-2.0, 2.0, d) for _ in range(n)]
        w = rng.dirichlet(np.ones(n))
        ps = [mixtures.categorical_density(t) for t in thetas]
        mixed, z = mixtures.qamix(averages.power_mean_spec(0.0), ps, w,
                                  return_normalizer=True)
        target = mixtures.categorical_density(averages.weighted_sum(thetas, w))
        worst_density = max(worst_density, float(np.max(np.abs(mixed - target))))
        jgap = divergences.jensen_diversity(gen, thetas, w)
        worst_norm = max(worst_norm, abs(z - math.exp(-jgap)))
    checks.append(_entry("exponential_family_geometric_closure",
                         worst_density, 1e-10))
    checks.append(_entry("geometric_mixture_normalizer", worst_norm, 1e-9))

    worst_entropy = 0.0
    for _ in range(25):
        d = int(rng.integers(1, 5))
        gen = generators.lse0_generator(d)
        theta = rng.uniform(-2.0, 2.0, d)
        eta = gen.grad(theta)
        worst_entropy = max(worst_entropy, abs(
            mixtures.shannon_entropy(mixtures.categorical_density(theta))
            + gen.conj_eval(eta)))
    checks.append(_entry("categorical_entropy_conjugate", worst_entropy, 1e-9))

    worst_identity = 0.0
    for trial in range(50):
        m = 3 + trial % 4
        bases = rng.dirichlet(np.full(m, 3.0), size=3)
        try:
            gen = generators.mixture_negentropy_generator(bases)
        except Exception:
            continue
        u = rng.dirichlet(np.full(3, 3.0))
        v = rng.dirichlet(np.full(3, 3.0))
        left, right = mixtures.mixture_family_jsd_identity(gen, u[:2], v[:2])
        worst_identity = max(worst_identity, abs(left - right))
    checks.append(_entry("mixture_family_jsd_identity", worst_identity, 1e-9))

    worst_cauchy = 0.0
    for _ in range(10):
        s1 = float(rng.uniform(0.1, 10.0))
        s2 = float(rng.uniform(0.1, 10.0))
        worst_cauchy = max(worst_cauchy,
                           mixtures.cauchy_harmonic_mixture_residual(s1, s2))
    checks.append(_entry("cauchy_harmonic_closure", worst_cauchy, 1e-6))

    return _report("closures", checks)


def run_suite(name: str):
    if name == "generators":
        return generators_suite()
    if name == "invariance":
        return invariance_suite()
    if name == "convergence":
        return convergence_suite()
    if name == "closures":
        return closures_suite()
    raise ValueError(f"unknown suite {name!r}")
