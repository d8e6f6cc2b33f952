"""Acceptance battery.

One test per acceptance criterion, at the stated tolerance, each printing
a single PASS/FAIL line with the measured residuals (run with ``-s`` to
see them).  The property computations live in qamlib.checks, which the
``qam check`` subcommand exposes as machine-readable reports.
"""

import io
import pathlib
from contextlib import redirect_stdout

import numpy as np
import pytest

from qamlib import checks
from qamlib.cli import run as cli_run

from golden_cases import GOLDEN_CASES

GOLDEN_DIR = pathlib.Path(__file__).parent / "golden"


@pytest.fixture(scope="module")
def generators_report():
    return checks.generators_suite()


@pytest.fixture(scope="module")
def invariance_report():
    return checks.invariance_suite()


@pytest.fixture(scope="module")
def convergence_report():
    return checks.convergence_suite()


@pytest.fixture(scope="module")
def closures_report():
    return checks.closures_suite()


def _pick(report, prefix):
    entries = [c for c in report["checks"] if c["name"].startswith(prefix)]
    assert entries, f"no checks named {prefix}*"
    return entries


def _emit(label, entries):
    ok = all(e["passed"] for e in entries)
    worst = max(e["observed"] for e in entries)
    print(f"{'PASS' if ok else 'FAIL'} {label}: worst observed {worst:.3e} "
          f"over {len(entries)} checks")
    return ok


def test_generator_round_trips_and_young_equality(generators_report):
    entries = _pick(generators_report, "round_trip") \
        + _pick(generators_report, "young_equality")
    assert len(entries) == 12  # six generators, two identities each
    for e in entries:
        assert e["tolerance"] == 1e-9
    assert _emit("generator round trips + Young equality (<= 1e-9)", entries)
    for e in entries:
        assert e["observed"] <= 1e-9, e["name"]


def test_comonotonicity_strictly_positive(generators_report):
    entries = _pick(generators_report, "comonotonicity")
    assert len(entries) == 6
    minimum = min(e["observed"] for e in entries)
    ok = all(e["passed"] for e in entries)
    print(f"{'PASS' if ok else 'FAIL'} co-monotonicity: minimum "
          f"symmetrized-divergence value {minimum:.3e} > 0 across "
          f"{len(entries)} generators x 100 pairs")
    for e in entries:
        assert e["observed"] > 0.0, e["name"]


def test_affine_equivariance(invariance_report):
    entries = _pick(invariance_report, "affine_equivariance")
    assert _emit("affine equivariance over 50 reparameterizations (<= 1e-8)",
                 entries)
    assert entries[0]["observed"] <= 1e-8


def test_ahm_agrees_with_closed_form_at_quadratic_rate(convergence_report):
    rel = _pick(convergence_report, "ahm_matches_closed_form")[0]
    iters = _pick(convergence_report, "ahm_iterations")[0]
    order = _pick(convergence_report, "ahm_quadratic_order")[0]
    root = _pick(convergence_report, "ahm_square_root")[0]
    ok = all(e["passed"] for e in (rel, iters, order, root))
    print(f"{'PASS' if ok else 'FAIL'} arithmetic-harmonic iteration: "
          f"rel error {rel['observed']:.3e} <= 1e-10, "
          f"max iterations {iters['observed']:.0f} <= 10, "
          f"fitted order {order['observed']:.2f} >= 1.8 "
          f"({order['fitted']} instances), "
          f"sqrt case {root['observed']:.3e} <= 1e-10")
    assert rel["observed"] <= 1e-10
    assert iters["observed"] <= 10
    assert order["observed"] >= 1.8
    assert root["observed"] <= 1e-10


def test_centroid_optimality_and_barycenter_residual(convergence_report):
    right = _pick(convergence_report, "right_centroid_optimality")[0]
    left = _pick(convergence_report, "left_centroid_optimality")[0]
    bary = _pick(convergence_report, "barycenter_residual")[0]
    ok = right["passed"] and left["passed"] and bary["passed"]
    print(f"{'PASS' if ok else 'FAIL'} centroid optimality: both sided "
          f"centroids beat a 10^4-point perturbation cloud (worst margins "
          f"{-right['observed']:.3e}, {-left['observed']:.3e}); barycenter "
          f"residual {bary['observed']:.3e} <= 1e-10")
    assert right["passed"] and left["passed"]
    assert bary["observed"] <= 1e-10


def test_jsd_identities(closures_report):
    form = _pick(closures_report, "jsd_kl_vs_entropy_form")[0]
    bound = _pick(closures_report, "jsd_log2_bound")[0]
    mix = _pick(closures_report, "nabla_jsd_mixture_connection")[0]
    geo = _pick(closures_report, "nabla_jsd_exponential_connection")[0]
    ok = all(e["passed"] for e in (form, bound, mix, geo))
    print(f"{'PASS' if ok else 'FAIL'} JSD identities: KL-form vs entropy-form "
          f"{form['observed']:.3e} <= 1e-12 on 100 pairs; log2 bound slack "
          f"{bound['observed']:.3e}; connection midpoints reproduce the "
          f"ordinary ({mix['observed']:.3e}) and geometric "
          f"({geo['observed']:.3e}) forms <= 1e-9")
    assert form["observed"] <= 1e-12
    assert bound["observed"] <= 1e-12
    assert mix["observed"] <= 1e-9
    assert geo["observed"] <= 1e-9


def test_exponential_family_geometric_closure(closures_report):
    density = _pick(closures_report, "exponential_family_geometric_closure")[0]
    norm = _pick(closures_report, "geometric_mixture_normalizer")[0]
    ok = density["passed"] and norm["passed"]
    print(f"{'PASS' if ok else 'FAIL'} exponential-family closure: density "
          f"gap {density['observed']:.3e} <= 1e-10, normalizer vs "
          f"exp(-Jensen gap) {norm['observed']:.3e} <= 1e-9 over 50 instances")
    assert density["observed"] <= 1e-10
    assert norm["observed"] <= 1e-9


def test_mixture_family_identity(closures_report):
    entry = _pick(closures_report, "mixture_family_jsd_identity")[0]
    print(f"{'PASS' if entry['passed'] else 'FAIL'} mixture-family identity: "
          f"JSD vs parameter Jensen divergence gap {entry['observed']:.3e} "
          f"<= 1e-9 over 50 instances")
    assert entry["observed"] <= 1e-9


def test_cauchy_harmonic_closure(closures_report):
    entry = _pick(closures_report, "cauchy_harmonic_closure")[0]
    print(f"{'PASS' if entry['passed'] else 'FAIL'} Cauchy harmonic closure: "
          f"sup-norm quadrature residual {entry['observed']:.3e} <= 1e-6 "
          f"over 10 scale pairs")
    assert entry["observed"] <= 1e-6


def test_alpha_geodesic_solver(convergence_report):
    exp_form = _pick(convergence_report, "bvp_matches_exponential_closed_form")[0]
    mix_form = _pick(convergence_report, "bvp_matches_mixture_closed_form")[0]
    refine = _pick(convergence_report, "bvp_grid_refinement_midpoint")[0]
    ends = _pick(convergence_report, "bvp_endpoints")[0]
    ok = all(e["passed"] for e in (exp_form, mix_form, refine, ends))
    print(f"{'PASS' if ok else 'FAIL'} alpha-geodesic solver: closed-form "
          f"gaps {exp_form['observed']:.3e}/{mix_form['observed']:.3e} "
          f"<= 1e-6, refinement midpoint shift {refine['observed']:.3e} "
          f"< 1e-6, endpoint error {ends['observed']:.3e} <= 1e-8")
    assert exp_form["observed"] <= 1e-6
    assert mix_form["observed"] <= 1e-6
    assert refine["observed"] < 1e-6
    assert ends["observed"] <= 1e-8


def test_cli_golden_determinism():
    worst = None
    for name, argv in GOLDEN_CASES:
        buffer = io.StringIO()
        with redirect_stdout(buffer):
            code = cli_run(argv)
        assert code == 0, name
        expected = (GOLDEN_DIR / f"{name}.golden").read_text(encoding="utf-8")
        if buffer.getvalue() != expected:
            worst = name
            break
    print(f"{'PASS' if worst is None else 'FAIL'} CLI determinism: "
          f"{len(GOLDEN_CASES)} documented examples byte-identical to their "
          f"golden files")
    assert worst is None, f"output drifted for {worst}"


def test_suite_reports_are_green(generators_report, invariance_report,
                                 convergence_report, closures_report):
    reports = {
        "generators": generators_report,
        "invariance": invariance_report,
        "convergence": convergence_report,
        "closures": closures_report,
    }
    for name, report in reports.items():
        assert report["passed"], name
    print("PASS all property suites green "
          f"({sum(len(r['checks']) for r in reports.values())} checks)")
