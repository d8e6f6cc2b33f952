"""Legendre-type generator bundles.

A *generator* packages a strictly convex differentiable potential F on an
open convex domain together with its gradient map, the global inverse of
that gradient, and (when known in closed form) the convex conjugate F*.
Gradient maps of such potentials are strictly co-monotone and globally
invertible, which is what lets them play the role that strictly monotone
scalar functions play for ordinary quasi-arithmetic means.

Points are plain numpy arrays: shape ``(d,)`` for vector generators and
``(d, d)`` symmetric for matrix generators.  The pairing between primal
and dual points is the Euclidean dot product for vectors and
``tr(A B^T)`` for matrices.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Optional, Sequence

import numpy as np
import scipy.linalg

from .errors import (
    ConvergenceError,
    DomainError,
    DualDomainError,
    ValidationError,
)

log = logging.getLogger(__name__)

VECTOR = "vector"
SYM_MATRIX = "sym_matrix"

# Strict-interior margin for open domains.  Keeping iterative algorithms a
# hair away from the boundary matters because gradients of Legendre-type
# potentials blow up there.
INTERIOR_MARGIN = 1e-12

# Symmetry tolerance for matrix points.
SYM_TOL = 1e-12


def inner(a, b) -> float:
    """Pairing of a primal and a dual point.

    Euclidean dot product for vectors; the Hilbert-Schmidt product
    ``tr(A B^T)`` for matrices.  Both reduce to an elementwise product sum.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValidationError(f"inner product shape mismatch: {a.shape} vs {b.shape}")
    return float(np.sum(a * b))


def is_symmetric(x, tol: float = SYM_TOL) -> bool:
    x = np.asarray(x, dtype=float)
    return x.ndim == 2 and x.shape[0] == x.shape[1] and bool(
        np.max(np.abs(x - x.T)) <= tol * max(1.0, float(np.max(np.abs(x))))
    )


def symmetrize(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return 0.5 * (x + x.T)


def min_eigenvalue(x) -> float:
    return float(np.linalg.eigvalsh(symmetrize(x))[0])


@dataclass(frozen=True)
class Generator:
    """Bundle of a Legendre-type potential and its derived maps.

    Attributes
    ----------
    label : str
        Short identifier, used in error messages and CLI output.
    kind : str
        ``"vector"`` or ``"sym_matrix"``.
    dim : int
        Vector length, or matrix side length.
    domain_contains, dual_domain_contains : callables
        Open-domain membership predicates for primal (theta) and dual
        (eta) points.  Predicates use strict interior margins.
    f_eval : callable
        The potential F.
    grad : callable
        The gradient map, primal domain -> dual domain.
    grad_inv : callable
        Global inverse of ``grad`` (equivalently, the gradient of F*).
    conj_eval : callable, optional
        Closed-form conjugate F*, when one is known.  When absent, use
        :func:`legendre_conjugate`.
    aux : object, optional
        Generator-specific payload (e.g. the mixture family behind a
        negentropy generator).
    """

    label: str
    kind: str
    dim: int
    domain_contains: Callable[[np.ndarray], bool]
    dual_domain_contains: Callable[[np.ndarray], bool]
    f_eval: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray]
    grad_inv: Callable[[np.ndarray], np.ndarray]
    conj_eval: Optional[Callable[[np.ndarray], float]] = None
    aux: Any = None

    def require_domain(self, theta, name: str = "theta") -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        if not self.domain_contains(theta):
            raise DomainError(f"{name} is outside the domain of {self.label}")
        return theta

    def require_dual_domain(self, eta, name: str = "eta") -> np.ndarray:
        eta = np.asarray(eta, dtype=float)
        if not self.dual_domain_contains(eta):
            raise DualDomainError(
                f"{name} is outside the dual domain (gradient image) of {self.label}"
            )
        return eta


@dataclass(frozen=True)
class GeneratorSpec:
    """Declarative description of a concrete generator.

    ``variant`` is one of ``power``, ``separable``, ``lse0``, ``quadratic``,
    ``neg_log_det``, ``half_trace_square``, ``mixture_negentropy``; the
    ``params`` dict holds the variant-specific parameters.  Use
    :func:`build_generator` to turn a spec into a working bundle.
    """

    variant: str
    params: dict


# ---------------------------------------------------------------------------
# Scalar building blocks (for separable generators)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScalarGenerator:
    """A strictly convex C^1 potential on an open scalar interval.

    ``df`` (the derivative) is the strictly increasing function that
    generates the matching scalar quasi-arithmetic mean; ``df_inv`` is its
    global inverse, mapping the open dual interval back.
    All callables must accept numpy arrays elementwise.
    """

    label: str
    lo: float
    hi: float
    f: Callable[[np.ndarray], np.ndarray]
    df: Callable[[np.ndarray], np.ndarray]
    df_inv: Callable[[np.ndarray], np.ndarray]
    dual_lo: float
    dual_hi: float
    conj: Optional[Callable[[np.ndarray], np.ndarray]] = None


def power_scalar(p: float) -> ScalarGenerator:
    """Scalar potential on (0, inf) whose derivative generates the power mean
    of exponent ``p`` (p=0 is the geometric-mean generator ``log``)."""
    p = float(p)
    if p == 0.0:
        return ScalarGenerator(
            label="power(0)",
            lo=0.0,
            hi=math.inf,
            f=lambda t: t * np.log(t) - t,
            df=np.log,
            df_inv=np.exp,
            dual_lo=-math.inf,
            dual_hi=math.inf,
            conj=np.exp,
        )
    if p == -1.0:
        return ScalarGenerator(
            label="power(-1)",
            lo=0.0,
            hi=math.inf,
            f=lambda t: t - np.log(t),
            df=lambda t: 1.0 - 1.0 / t,
            df_inv=lambda y: 1.0 / (1.0 - y),
            dual_lo=-math.inf,
            dual_hi=1.0,
            conj=lambda y: -1.0 - np.log(1.0 - y),
        )

    def f(t, p=p):
        return (t ** (p + 1.0) / (p + 1.0) - t) / p

    def df(t, p=p):
        return (t ** p - 1.0) / p

    def df_inv(y, p=p):
        return (1.0 + p * y) ** (1.0 / p)

    def conj(y, p=p):
        # t eta - F(t) at t = (1 + p eta)^(1/p) collapses to t^(p+1)/(p+1)
        return (1.0 + p * y) ** ((p + 1.0) / p) / (p + 1.0)

    dual_lo, dual_hi = (-1.0 / p, math.inf) if p > 0 else (-math.inf, -1.0 / p)
    return ScalarGenerator(
        label=f"power({p:g})",
        lo=0.0,
        hi=math.inf,
        f=f,
        df=df,
        df_inv=df_inv,
        dual_lo=dual_lo,
        dual_hi=dual_hi,
        conj=conj,
    )


def exp_scalar() -> ScalarGenerator:
    """Scalar potential F(t) = e^t, whose derivative generates the
    log-sum-exp mean."""
    return ScalarGenerator(
        label="exp",
        lo=-math.inf,
        hi=math.inf,
        f=np.exp,
        df=np.exp,
        df_inv=np.log,
        dual_lo=0.0,
        dual_hi=math.inf,
        conj=lambda y: y * np.log(y) - y,
    )


# ---------------------------------------------------------------------------
# Mixture families (payload for the negentropy generator)
# ---------------------------------------------------------------------------


class MixtureFamily:
    """Arithmetic mixture family over a finite support.

    Built from ``n+1`` strictly positive base densities ``p_0 .. p_n`` on a
    common support of size ``m``.  A parameter ``theta`` in the open
    simplex {theta_i > 0, sum theta_i < 1} selects the density
    ``p_0 + sum_i theta_i (p_i - p_0)``.
    """

    def __init__(self, bases):
        bases = np.asarray(bases, dtype=float)
        if bases.ndim != 2 or bases.shape[0] < 2:
            raise ValidationError(
                "mixture family needs at least two base densities", field="bases"
            )
        if np.any(bases <= 0.0):
            raise ValidationError(
                "base densities must be strictly positive everywhere", field="bases"
            )
        sums = bases.sum(axis=1)
        if np.max(np.abs(sums - 1.0)) > 1e-12:
            raise ValidationError("base densities must each sum to 1", field="bases")
        log_ratios = np.log(bases[1:] / bases[0])
        rank = np.linalg.matrix_rank(log_ratios, tol=1e-10)
        if rank < bases.shape[0] - 1:
            raise ValidationError(
                "log-ratios of the base densities are linearly dependent",
                field="bases",
            )
        self.bases = bases
        self.diffs = bases[1:] - bases[0]  # shape (n, m)
        self.order = bases.shape[0] - 1
        self.support_size = bases.shape[1]

    def contains(self, theta) -> bool:
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (self.order,) or not np.all(np.isfinite(theta)):
            return False
        return bool(
            np.all(theta > INTERIOR_MARGIN)
            and float(theta.sum()) < 1.0 - INTERIOR_MARGIN
        )

    def density(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        return self.bases[0] + theta @ self.diffs

    def negentropy(self, theta) -> float:
        m = self.density(theta)
        return float(np.sum(m * np.log(m)))

    def negentropy_grad(self, theta) -> np.ndarray:
        m = self.density(theta)
        return self.diffs @ (1.0 + np.log(m))

    def negentropy_hess(self, theta) -> np.ndarray:
        m = self.density(theta)
        return (self.diffs / m) @ self.diffs.T


def _invert_mixture_grad(family: MixtureFamily, eta, tol=1e-12, max_iter=100):
    """Damped Newton inversion of the negentropy gradient.

    Minimizes the strictly convex F(theta) - <theta, eta> from the uniform
    weight vector, damping any step that would leave the open simplex, and
    stops once the full Newton step drops below ``tol``.
    """
    eta = np.asarray(eta, dtype=float)
    n = family.order
    theta = np.full(n, 1.0 / (n + 1))
    for it in range(max_iter):
        g = family.negentropy_grad(theta) - eta
        hess = family.negentropy_hess(theta)
        try:
            step = np.linalg.solve(hess, -g)
        except np.linalg.LinAlgError as exc:
            raise DualDomainError(
                f"gradient inversion failed: singular Hessian at iteration {it}"
            ) from exc
        if float(np.max(np.abs(step))) <= tol:
            final = theta + step
            log.debug("mixture grad_inv converged in %d iterations", it + 1)
            return final if family.contains(final) else theta
        t = 1.0
        while t > 1e-14 and not family.contains(theta + t * step):
            t *= 0.5
        if t <= 1e-14:
            raise DualDomainError(
                "gradient inversion stalled at the simplex boundary; "
                "the target point does not appear to lie in the dual domain"
            )
        theta = theta + t * step
    raise DualDomainError(
        f"gradient inversion did not converge within {max_iter} iterations"
    )


# ---------------------------------------------------------------------------
# Concrete generator factories
# ---------------------------------------------------------------------------


def separable_generator(scalars: Sequence[ScalarGenerator], label=None) -> Generator:
    """Generator with a coordinatewise potential ``sum_i F_i(theta_i)``.

    Its quasi-arithmetic average is the vector of the componentwise scalar
    quasi-arithmetic means.
    """
    scalars = tuple(scalars)
    if not scalars:
        raise ValidationError("separable generator needs at least one axis",
                              field="scalars")
    d = len(scalars)
    los = np.array([s.lo for s in scalars])
    his = np.array([s.hi for s in scalars])
    dual_los = np.array([s.dual_lo for s in scalars])
    dual_his = np.array([s.dual_hi for s in scalars])

    def domain_contains(theta):
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (d,) or not np.all(np.isfinite(theta)):
            return False
        return bool(np.all(theta > los + INTERIOR_MARGIN)
                    and np.all(theta < his - INTERIOR_MARGIN))

    def dual_domain_contains(eta):
        eta = np.asarray(eta, dtype=float)
        if eta.shape != (d,) or not np.all(np.isfinite(eta)):
            return False
        return bool(np.all(eta > dual_los + INTERIOR_MARGIN)
                    and np.all(eta < dual_his - INTERIOR_MARGIN))

    def f_eval(theta):
        theta = np.asarray(theta, dtype=float)
        return float(math.fsum(float(s.f(theta[i])) for i, s in enumerate(scalars)))

    def grad(theta):
        theta = np.asarray(theta, dtype=float)
        return np.array([float(s.df(theta[i])) for i, s in enumerate(scalars)])

    def grad_inv(eta):
        eta = np.asarray(eta, dtype=float)
        return np.array([float(s.df_inv(eta[i])) for i, s in enumerate(scalars)])

    conj_eval = None
    if all(s.conj is not None for s in scalars):
        def conj_eval(eta):
            eta = np.asarray(eta, dtype=float)
            return float(math.fsum(float(s.conj(eta[i]))
                                   for i, s in enumerate(scalars)))

    return Generator(
        label=label or "separable(" + ",".join(s.label for s in scalars) + ")",
        kind=VECTOR,
        dim=d,
        domain_contains=domain_contains,
        dual_domain_contains=dual_domain_contains,
        f_eval=f_eval,
        grad=grad,
        grad_inv=grad_inv,
        conj_eval=conj_eval,
    )


def power_generator(p: float, dim: int) -> Generator:
    """Separable power generator on the open positive orthant."""
    if dim < 1:
        raise ValidationError("dim must be positive", field="dim")
    return separable_generator([power_scalar(p)] * dim,
                               label=f"power(p={p:g},dim={dim})")


def lse0_generator(dim: int) -> Generator:
    """Log-sum-exp potential with a pinned zero coordinate.

    ``F(theta) = log(1 + sum_i exp(theta_i))`` on R^d; the gradient fills
    the open probability simplex {eta_i > 0, sum eta_i < 1}.  This is the
    cumulant function of the categorical family, so the induced average is
    the categorical mean of natural parameters.
    """
    if dim < 1:
        raise ValidationError("dim must be positive", field="dim")
    d = int(dim)

    def domain_contains(theta):
        theta = np.asarray(theta, dtype=float)
        return theta.shape == (d,) and bool(np.all(np.isfinite(theta)))

    def dual_domain_contains(eta):
        eta = np.asarray(eta, dtype=float)
        if eta.shape != (d,) or not np.all(np.isfinite(eta)):
            return False
        return bool(np.all(eta > INTERIOR_MARGIN)
                    and float(eta.sum()) < 1.0 - INTERIOR_MARGIN)

    def f_eval(theta):
        theta = np.asarray(theta, dtype=float)
        # max-shift so exp never overflows
        m = max(0.0, float(np.max(theta)))
        return m + math.log(math.exp(-m) + float(np.sum(np.exp(theta - m))))

    def grad(theta):
        theta = np.asarray(theta, dtype=float)
        m = max(0.0, float(np.max(theta)))
        e = np.exp(theta - m)
        return e / (math.exp(-m) + float(e.sum()))

    def grad_inv(eta):
        eta = np.asarray(eta, dtype=float)
        rest = 1.0 - float(eta.sum())
        return np.log(eta) - math.log(rest)

    def conj_eval(eta):
        eta = np.asarray(eta, dtype=float)
        rest = 1.0 - float(eta.sum())
        return float(np.sum(eta * np.log(eta))) + rest * math.log(rest)

    return Generator(
        label=f"lse0(dim={d})",
        kind=VECTOR,
        dim=d,
        domain_contains=domain_contains,
        dual_domain_contains=dual_domain_contains,
        f_eval=f_eval,
        grad=grad,
        grad_inv=grad_inv,
        conj_eval=conj_eval,
    )


def quadratic_generator(q, c=None, kappa: float = 0.0) -> Generator:
    """Quadratic potential ``1/2 theta^T Q theta + c^T theta + kappa``.

    The induced Bregman divergence is the squared Mahalanobis distance and
    the induced average is the plain arithmetic mean, whatever Q is.
    """
    q = np.asarray(q, dtype=float)
    if q.ndim != 2 or q.shape[0] != q.shape[1]:
        raise ValidationError("Q must be a square matrix", field="q")
    if not is_symmetric(q):
        raise ValidationError("Q must be symmetric", field="q")
    d = q.shape[0]
    if min_eigenvalue(q) <= INTERIOR_MARGIN:
        raise ValidationError("Q must be symmetric positive-definite", field="q")
    c = np.zeros(d) if c is None else np.asarray(c, dtype=float)
    if c.shape != (d,):
        raise ValidationError("c has the wrong length", field="c")
    kappa = float(kappa)
    cho = scipy.linalg.cho_factor(q)

    def contains(x):
        x = np.asarray(x, dtype=float)
        return x.shape == (d,) and bool(np.all(np.isfinite(x)))

    def f_eval(theta):
        theta = np.asarray(theta, dtype=float)
        return float(0.5 * theta @ (q @ theta) + c @ theta + kappa)

    def grad(theta):
        return q @ np.asarray(theta, dtype=float) + c

    def grad_inv(eta):
        return scipy.linalg.cho_solve(cho, np.asarray(eta, dtype=float) - c)

    def conj_eval(eta):
        u = np.asarray(eta, dtype=float) - c
        return float(0.5 * u @ scipy.linalg.cho_solve(cho, u) - kappa)

    return Generator(
        label=f"quadratic(dim={d})",
        kind=VECTOR,
        dim=d,
        domain_contains=contains,
        dual_domain_contains=contains,
        f_eval=f_eval,
        grad=grad,
        grad_inv=grad_inv,
        conj_eval=conj_eval,
    )


def neg_log_det_generator(dim: int) -> Generator:
    """``F(theta) = -log det(theta)`` on the open SPD cone.

    The gradient map is ``-theta^{-1}``; the induced two-point average is
    the matrix harmonic mean, and the generator is self-dual in the sense
    that primal and dual averages coincide.
    """
    if dim < 1:
        raise ValidationError("dim must be positive", field="dim")
    d = int(dim)

    def domain_contains(theta):
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (d, d) or not np.all(np.isfinite(theta)):
            return False
        return is_symmetric(theta) and min_eigenvalue(theta) > INTERIOR_MARGIN

    def dual_domain_contains(eta):
        eta = np.asarray(eta, dtype=float)
        if eta.shape != (d, d) or not np.all(np.isfinite(eta)):
            return False
        return is_symmetric(eta) and min_eigenvalue(-eta) > INTERIOR_MARGIN

    def f_eval(theta):
        sign, logdet = np.linalg.slogdet(np.asarray(theta, dtype=float))
        if sign <= 0:
            raise DomainError("theta is not positive-definite")
        return -float(logdet)

    def grad(theta):
        return symmetrize(-np.linalg.inv(np.asarray(theta, dtype=float)))

    def grad_inv(eta):
        return symmetrize(-np.linalg.inv(np.asarray(eta, dtype=float)))

    def conj_eval(eta):
        sign, logdet = np.linalg.slogdet(-np.asarray(eta, dtype=float))
        if sign <= 0:
            raise DualDomainError("eta is not negative-definite")
        return -d - float(logdet)

    return Generator(
        label=f"neg_log_det(dim={d})",
        kind=SYM_MATRIX,
        dim=d,
        domain_contains=domain_contains,
        dual_domain_contains=dual_domain_contains,
        f_eval=f_eval,
        grad=grad,
        grad_inv=grad_inv,
        conj_eval=conj_eval,
    )


def half_trace_square_generator(dim: int) -> Generator:
    """``F(X) = 1/2 tr(X^2)`` on symmetric matrices; the identity gradient
    map makes the induced average the arithmetic matrix mean."""
    if dim < 1:
        raise ValidationError("dim must be positive", field="dim")
    d = int(dim)

    def contains(x):
        x = np.asarray(x, dtype=float)
        return x.shape == (d, d) and bool(np.all(np.isfinite(x))) and is_symmetric(x)

    def f_eval(theta):
        theta = np.asarray(theta, dtype=float)
        return float(0.5 * np.sum(theta * theta))

    identity = lambda x: np.asarray(x, dtype=float).copy()

    return Generator(
        label=f"half_trace_square(dim={d})",
        kind=SYM_MATRIX,
        dim=d,
        domain_contains=contains,
        dual_domain_contains=contains,
        f_eval=f_eval,
        grad=identity,
        grad_inv=identity,
        conj_eval=f_eval,
    )


def mixture_negentropy_generator(bases) -> Generator:
    """Shannon negentropy of an arithmetic mixture family, as a potential
    over the open simplex of mixture weights.

    ``F(theta) = sum_x m_theta(x) log m_theta(x)`` with
    ``m_theta = p_0 + sum_i theta_i (p_i - p_0)``.  The gradient has the
    exact finite-sum form ``dF/dtheta_i = sum_x (p_i - p_0)(1 + log m)``;
    no closed-form inverse exists, so ``grad_inv`` runs a damped Newton
    solve with the exact finite-sum Hessian.
    """
    family = bases if isinstance(bases, MixtureFamily) else MixtureFamily(bases)
    n = family.order

    def dual_domain_contains(eta):
        eta = np.asarray(eta, dtype=float)
        if eta.shape != (n,) or not np.all(np.isfinite(eta)):
            return False
        try:
            _invert_mixture_grad(family, eta)
        except (DualDomainError, ConvergenceError):
            return False
        return True

    return Generator(
        label=f"mixture_negentropy(n={n},m={family.support_size})",
        kind=VECTOR,
        dim=n,
        domain_contains=family.contains,
        dual_domain_contains=dual_domain_contains,
        f_eval=family.negentropy,
        grad=family.negentropy_grad,
        grad_inv=lambda eta: _invert_mixture_grad(family, eta),
        conj_eval=None,
        aux=family,
    )


# ---------------------------------------------------------------------------
# Spec-driven construction and the two generic operations
# ---------------------------------------------------------------------------

_SCALAR_DESCRIPTORS = {
    "power": lambda d: power_scalar(float(d.get("p", 1.0))),
    "exp": lambda d: exp_scalar(),
}


def build_generator(spec: GeneratorSpec) -> Generator:
    """Instantiate the generator described by ``spec``.

    Raises :class:`ValidationError` (naming the offending field) when the
    spec parameters violate their preconditions.
    """
    variant = spec.variant
    p = spec.params
    if variant == "power":
        if "p" not in p or "dim" not in p:
            raise ValidationError("power generator needs p and dim", field="params")
        return power_generator(float(p["p"]), int(p["dim"]))
    if variant == "separable":
        axes = p.get("axes")
        if not axes:
            raise ValidationError("separable generator needs axes", field="axes")
        scalars = []
        for i, axis in enumerate(axes):
            if isinstance(axis, ScalarGenerator):
                scalars.append(axis)
                continue
            kind = axis.get("kind")
            if kind not in _SCALAR_DESCRIPTORS:
                raise ValidationError(f"unknown scalar descriptor {kind!r}",
                                      field=f"axes[{i}]")
            scalars.append(_SCALAR_DESCRIPTORS[kind](axis))
        return separable_generator(scalars)
    if variant == "lse0":
        if "dim" not in p:
            raise ValidationError("lse0 generator needs dim", field="dim")
        return lse0_generator(int(p["dim"]))
    if variant == "quadratic":
        if "q" not in p:
            raise ValidationError("quadratic generator needs q", field="q")
        return quadratic_generator(p["q"], p.get("c"), float(p.get("kappa", 0.0)))
    if variant == "neg_log_det":
        if "dim" not in p:
            raise ValidationError("neg_log_det generator needs dim", field="dim")
        return neg_log_det_generator(int(p["dim"]))
    if variant == "half_trace_square":
        if "dim" not in p:
            raise ValidationError("half_trace_square generator needs dim",
                                  field="dim")
        return half_trace_square_generator(int(p["dim"]))
    if variant == "mixture_negentropy":
        if "bases" not in p:
            raise ValidationError("mixture_negentropy generator needs bases",
                                  field="bases")
        return mixture_negentropy_generator(p["bases"])
    raise ValidationError(f"unknown generator variant {variant!r}", field="variant")


def legendre_conjugate(gen: Generator, eta) -> float:
    """Evaluate the convex conjugate ``F*(eta)`` through the gradient inverse:
    ``<grad_inv(eta), eta> - F(grad_inv(eta))``."""
    eta = gen.require_dual_domain(eta)
    theta = gen.grad_inv(eta)
    return inner(theta, eta) - gen.f_eval(theta)


def affine_reparam(gen: Generator, a, b=None, c=None, d: float = 0.0,
                   lam: float = 1.0) -> Generator:
    """Affine change of chart plus affine/scale change of potential.

    Returns the bundle of ``Fbar(tbar) = lam * (F(t) + <c, t> + d)`` with
    ``t = A^{-1}(tbar - b)``, whose domain is the affine image of the
    original one.  Under this reparameterization the quasi-arithmetic
    average is equivariant: averaging the mapped points ``A t_i + b``
    gives ``A`` applied to the original average plus ``b``, and the
    Bregman divergence of the new bundle at mapped points is ``lam`` times
    the original one.
    """
    if gen.kind != VECTOR:
        raise ValidationError("affine reparameterization requires a vector generator",
                              field="gen")
    dim = gen.dim
    a = np.asarray(a, dtype=float)
    if a.shape != (dim, dim):
        raise ValidationError("A has the wrong shape", field="a")
    if not np.all(np.isfinite(a)) or np.linalg.cond(a) > 1e12:
        raise ValidationError("A must be comfortably invertible", field="a")
    b = np.zeros(dim) if b is None else np.asarray(b, dtype=float)
    c = np.zeros(dim) if c is None else np.asarray(c, dtype=float)
    if b.shape != (dim,):
        raise ValidationError("b has the wrong length", field="b")
    if c.shape != (dim,):
        raise ValidationError("c has the wrong length", field="c")
    d = float(d)
    lam = float(lam)
    if not lam > 0.0:
        raise ValidationError("lam must be positive", field="lam")
    lu = scipy.linalg.lu_factor(a)
    lu_t = scipy.linalg.lu_factor(a.T)

    def to_base(tbar):
        return scipy.linalg.lu_solve(lu, np.asarray(tbar, dtype=float) - b)

    def domain_contains(tbar):
        tbar = np.asarray(tbar, dtype=float)
        if tbar.shape != (dim,) or not np.all(np.isfinite(tbar)):
            return False
        return gen.domain_contains(to_base(tbar))

    def dual_domain_contains(ebar):
        ebar = np.asarray(ebar, dtype=float)
        if ebar.shape != (dim,) or not np.all(np.isfinite(ebar)):
            return False
        return gen.dual_domain_contains(a.T @ ebar / lam - c)

    def f_eval(tbar):
        t = to_base(tbar)
        return lam * (gen.f_eval(t) + float(c @ t) + d)

    def grad(tbar):
        t = to_base(tbar)
        return lam * scipy.linalg.lu_solve(lu_t, gen.grad(t) + c)

    def grad_inv(ebar):
        u = a.T @ np.asarray(ebar, dtype=float) / lam - c
        return a @ gen.grad_inv(u) + b

    conj_eval = None
    if gen.conj_eval is not None:
        def conj_eval(ebar):
            ebar = np.asarray(ebar, dtype=float)
            u = a.T @ ebar / lam - c
            return lam * gen.conj_eval(u) + float(b @ ebar) - lam * d

    return Generator(
        label=f"affine({gen.label})",
        kind=VECTOR,
        dim=dim,
        domain_contains=domain_contains,
        dual_domain_contains=dual_domain_contains,
        f_eval=f_eval,
        grad=grad,
        grad_inv=grad_inv,
        conj_eval=conj_eval,
        aux=gen.aux,
    )
