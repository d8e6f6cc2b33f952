"""Bregman, Fenchel-Young, Jeffreys-Bregman, Jensen and (M,N)-Jensen
divergences induced by a generator, plus the midpoint convexity scan used
to probe comparative convexity."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .averages import ScalarMeanSpec, as_weights, weighted_sum
from .errors import DomainError, ValidationError
from .generators import Generator, inner, legendre_conjugate


@dataclass(frozen=True)
class DivergenceReport:
    """A divergence value with an optional term-by-term breakdown."""

    kind: str
    value: float
    left: Optional[float] = None
    right: Optional[float] = None
    inner: Optional[float] = None

    def reconstruct(self) -> float:
        """Recombine the stored parts; matches ``value`` to 1e-12."""
        if self.left is None or self.right is None:
            return self.value
        if self.kind == "bregman":
            return self.left - self.right - self.inner
        if self.kind == "fenchel_young":
            return self.left + self.right - self.inner
        if self.kind == "jeffreys":
            return self.left + self.right
        if self.kind == "jensen":
            return self.left - self.right
        raise ValidationError(f"unknown divergence kind {self.kind!r}",
                              field="kind")


def bregman(gen: Generator, theta1, theta2) -> float:
    """``B_F(theta1 : theta2) = F(t1) - F(t2) - <t1 - t2, grad(t2)>``."""
    t1 = gen.require_domain(theta1, "theta1")
    t2 = gen.require_domain(theta2, "theta2")
    return gen.f_eval(t1) - gen.f_eval(t2) - inner(t1 - t2, gen.grad(t2))


def fenchel_young(gen: Generator, theta1, eta2) -> float:
    """Mixed-chart canonical divergence ``F(t1) + F*(e2) - <t1, e2>``."""
    t1 = gen.require_domain(theta1, "theta1")
    e2 = gen.require_dual_domain(eta2, "eta2")
    conj = gen.conj_eval(e2) if gen.conj_eval is not None else legendre_conjugate(gen, e2)
    return gen.f_eval(t1) + conj - inner(t1, e2)


def jeffreys_bregman(gen: Generator, theta1, theta2) -> float:
    """Symmetrized Bregman divergence ``<t2 - t1, grad(t2) - grad(t1)>``.

    Strict positivity of this quantity for distinct points is exactly the
    co-monotonicity of the gradient map.
    """
    t1 = gen.require_domain(theta1, "theta1")
    t2 = gen.require_domain(theta2, "theta2")
    return inner(t2 - t1, gen.grad(t2) - gen.grad(t1))


def jensen(gen: Generator, theta1, theta2) -> float:
    """Jensen divergence ``(F(t1) + F(t2))/2 - F((t1 + t2)/2)``."""
    t1 = gen.require_domain(theta1, "theta1")
    t2 = gen.require_domain(theta2, "theta2")
    mid = 0.5 * (t1 + t2)
    if not gen.domain_contains(mid):
        raise DomainError("midpoint escaped the domain; domain not convex?")
    return 0.5 * (gen.f_eval(t1) + gen.f_eval(t2)) - gen.f_eval(mid)


def jensen_diversity(gen: Generator, thetas, w) -> float:
    """Weighted n-point Jensen gap ``sum w_i F(t_i) - F(sum w_i t_i)``.

    For a cumulant-type generator, ``exp(-jensen_diversity)`` is the
    normalizer of the weighted geometric mixture of the family members.
    """
    pts = [gen.require_domain(t, f"theta[{i}]") for i, t in enumerate(thetas)]
    w = as_weights(w, n=len(pts))
    mean_point = weighted_sum(pts, w)
    if not gen.domain_contains(mean_point):
        raise DomainError("weighted point average escaped the domain")
    vals = np.array([gen.f_eval(t) for t in pts])
    return float(np.dot(w, vals)) - gen.f_eval(mean_point)


def divergence_report(gen: Generator, kind: str, first, second) -> DivergenceReport:
    """Evaluate a divergence and break it into its displayed terms."""
    if kind == "bregman":
        t1 = gen.require_domain(first, "theta1")
        t2 = gen.require_domain(second, "theta2")
        left = gen.f_eval(t1)
        right = gen.f_eval(t2)
        ip = inner(t1 - t2, gen.grad(t2))
        return DivergenceReport("bregman", left - right - ip, left, right, ip)
    if kind == "fenchel_young":
        t1 = gen.require_domain(first, "theta1")
        e2 = gen.require_dual_domain(second, "eta2")
        left = gen.f_eval(t1)
        right = (gen.conj_eval(e2) if gen.conj_eval is not None
                 else legendre_conjugate(gen, e2))
        ip = inner(t1, e2)
        return DivergenceReport("fenchel_young", left + right - ip, left, right, ip)
    if kind == "jeffreys":
        left = bregman(gen, first, second)
        right = bregman(gen, second, first)
        return DivergenceReport("jeffreys", jeffreys_bregman(gen, first, second),
                                left, right, None)
    if kind == "jensen":
        t1 = gen.require_domain(first, "theta1")
        t2 = gen.require_domain(second, "theta2")
        left = 0.5 * (gen.f_eval(t1) + gen.f_eval(t2))
        right = gen.f_eval(0.5 * (t1 + t2))
        return DivergenceReport("jensen", left - right, left, right, None)
    raise ValidationError(f"unknown divergence kind {kind!r}", field="kind")


# ---------------------------------------------------------------------------
# Comparative convexity
# ---------------------------------------------------------------------------


def mean_generator_pair(spec: ScalarMeanSpec):
    """The (f, f_inv) generator pair behind a scalar mean spec.

    Power means use the classical representatives ``t^p`` (identity at
    p = 1) and ``log`` at p = 0; any member of the affine equivalence
    class generates the same mean.
    """
    if spec.variant == "power":
        p = float(spec.p)
        if abs(p) < 1e-8:
            return np.log, np.exp
        if p == 1.0:
            return (lambda t: np.asarray(t, dtype=float),
                    lambda y: np.asarray(y, dtype=float))
        return (lambda t: np.asarray(t, dtype=float) ** p,
                lambda y: np.asarray(y, dtype=float) ** (1.0 / p))
    if spec.variant == "lse":
        return np.exp, np.log
    return spec.f, spec.f_inv


def _apply_bivariate_mean(spec: ScalarMeanSpec, a: float, b: float) -> float:
    """Unweighted two-point mean through the generator pair; unlike the
    strict power-mean entry point this tolerates whatever values the
    generator itself accepts (the arithmetic mean of negatives, say)."""
    f, f_inv = mean_generator_pair(spec)
    with np.errstate(all="ignore"):
        fa = float(f(a))
        fb = float(f(b))
        out = float(f_inv(0.5 * (fa + fb)))
    if not np.isfinite(out):
        raise DomainError(f"mean of ({a:g}, {b:g}) is not defined for this "
                          "generator")
    return out


def mn_jensen(m_spec: ScalarMeanSpec, n_spec: ScalarMeanSpec,
              func: Callable[[float], float], theta1: float,
              theta2: float) -> float:
    """Comparative Jensen gap ``M(F(t1), F(t2)) - F(N(t1, t2))`` for two
    scalar means M, N (taken unweighted).

    The sign is only guaranteed nonnegative when ``func`` is (M,N)-convex.
    """
    theta1 = float(theta1)
    theta2 = float(theta2)
    location = _apply_bivariate_mean(n_spec, theta1, theta2)
    pooled = _apply_bivariate_mean(m_spec, float(func(theta1)),
                                   float(func(theta2)))
    return pooled - float(func(location))


def mn_convexity_test(f1_spec: ScalarMeanSpec, f2_spec: ScalarMeanSpec,
                      g: Callable, interval, grid: int) -> bool:
    """Midpoint strict-convexity scan of the composition ``f2 o g o f1``
    over a uniform grid on ``interval``.

    Returns True iff every midpoint gap on the grid exceeds 1e-12.  Note
    the composition is applied literally: callers probing the comparative
    convexity of ``g`` choose which generator (or inverse generator) to
    put on each side.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
        raise ValidationError("interval must be a finite nonempty range",
                              field="interval")
    if grid < 2:
        raise ValidationError("grid must be at least 2", field="grid")
    f1, _ = mean_generator_pair(f1_spec)
    f2, _ = mean_generator_pair(f2_spec)
    xs = np.linspace(lo, hi, int(grid) + 1)
    try:
        vals = np.asarray(f2(np.asarray([float(g(v)) for v in f1(xs)])), dtype=float)
    except (ArithmeticError, ValueError) as exc:
        raise DomainError(f"composition failed on the scan grid: {exc}") from exc
    if not np.all(np.isfinite(vals)):
        raise DomainError("composition is not finite on the scan grid")
    gaps = 0.5 * (vals[:-2] + vals[2:]) - vals[1:-1]
    return bool(np.all(gaps > 1e-12))
