"""Scalar quasi-arithmetic means and vector/matrix quasi-arithmetic averages.

The scalar mean of points ``x_i`` with weights ``w`` under a strictly
monotone generator ``f`` is ``f^{-1}(sum_i w_i f(x_i))``.  The non-scalar
analogue replaces ``f`` by the gradient map of a Legendre-type potential:
``grad_inv(sum_i w_i grad(theta_i))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.special import logsumexp

from .errors import DomainError, DualDomainError, ValidationError
from .generators import Generator

WEIGHT_SUM_TOL = 1e-12


@dataclass(frozen=True)
class WeightVector:
    """Nonnegative weights summing to one.

    With ``open_flag`` set, every weight must be strictly positive (the
    open-simplex variant used by mixture parameters).
    """

    weights: np.ndarray
    open_flag: bool = False

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "weights", w)
        validate_weights(w, open_flag=self.open_flag)

    def __len__(self):
        return len(self.weights)

    def __array__(self, dtype=None):
        return np.asarray(self.weights, dtype=dtype)


def validate_weights(w, open_flag: bool = False) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise ValidationError("weights must be a nonempty 1-d array", field="w")
    if not np.all(np.isfinite(w)):
        raise ValidationError("weights must be finite", field="w")
    if open_flag:
        if np.any(w <= 0.0):
            raise ValidationError("weights must be strictly positive", field="w")
    elif np.any(w < 0.0):
        raise ValidationError("weights must be nonnegative", field="w")
    if abs(math.fsum(w.tolist()) - 1.0) > WEIGHT_SUM_TOL:
        raise ValidationError("weights must sum to 1", field="w")
    return w


def as_weights(w, n: Optional[int] = None, open_flag: bool = False) -> np.ndarray:
    """Coerce ``w`` (array-like or WeightVector) to a validated weight array."""
    if isinstance(w, WeightVector):
        arr = w.weights
        if open_flag and not w.open_flag:
            validate_weights(arr, open_flag=True)
    else:
        arr = validate_weights(w, open_flag=open_flag)
    if n is not None and len(arr) != n:
        raise ValidationError(
            f"got {len(arr)} weights for {n} points", field="w"
        )
    return arr


def weighted_sum(items: Sequence[np.ndarray], w) -> np.ndarray:
    """Compensated (Neumaier) weighted sum of same-shape arrays.

    Plain accumulation loses a couple of digits once n reaches the
    hundreds, which the tighter algebraic identities cannot afford.
    """
    w = np.asarray(w, dtype=float)
    total = np.zeros_like(np.asarray(items[0], dtype=float))
    comp = np.zeros_like(total)
    for item, wi in zip(items, w):
        term = wi * np.asarray(item, dtype=float)
        new = total + term
        comp += np.where(np.abs(total) >= np.abs(term),
                         (total - new) + term,
                         (term - new) + total)
        total = new
    return total + comp


# ---------------------------------------------------------------------------
# Scalar means
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScalarMeanSpec:
    """Descriptor of a scalar quasi-arithmetic mean.

    Variants: ``power`` (exponent ``p``, with p=0 the geometric mean),
    ``lse`` (generator ``exp``, the log-sum-exp mean), and ``custom``
    (caller-supplied strictly monotone ``f`` and ``f_inv`` on an open
    interval; both must accept numpy arrays).
    """

    variant: str
    p: Optional[float] = None
    f: Optional[Callable] = None
    f_inv: Optional[Callable] = None
    interval: tuple = (-math.inf, math.inf)

    def __post_init__(self):
        if self.variant == "power":
            if self.p is None:
                raise ValidationError("power mean needs an exponent p", field="p")
            object.__setattr__(self, "interval", (0.0, math.inf))
        elif self.variant == "lse":
            pass
        elif self.variant == "custom":
            if self.f is None or self.f_inv is None:
                raise ValidationError("custom mean needs f and f_inv", field="f")
            _check_custom_pair(self.f, self.f_inv, self.interval)
        else:
            raise ValidationError(f"unknown mean variant {self.variant!r}",
                                  field="variant")


def power_mean_spec(p: float) -> ScalarMeanSpec:
    return ScalarMeanSpec("power", p=float(p))


def lse_mean_spec() -> ScalarMeanSpec:
    return ScalarMeanSpec("lse")


def custom_mean_spec(f, f_inv, interval) -> ScalarMeanSpec:
    return ScalarMeanSpec("custom", f=f, f_inv=f_inv,
                          interval=(float(interval[0]), float(interval[1])))


def _check_custom_pair(f, f_inv, interval, n_samples=33):
    lo, hi = interval
    lo = max(lo, -1e3) if math.isinf(lo) else lo
    hi = min(hi, 1e3) if math.isinf(hi) else hi
    if not lo < hi:
        raise ValidationError("interval must be nonempty", field="interval")
    span = hi - lo
    xs = np.linspace(lo + 1e-9 * span, hi - 1e-9 * span, n_samples)
    with np.errstate(all="ignore"):
        ys = np.asarray(f(xs), dtype=float)
        back = np.asarray(f_inv(ys), dtype=float)
    diffs = np.diff(ys)
    if not np.all(np.isfinite(ys)) or not (np.all(diffs > 0.0)
                                           or np.all(diffs < 0.0)):
        raise ValidationError("custom generator is not strictly monotone on its "
                              "interval", field="f")
    scale = np.maximum(1.0, np.abs(xs))
    if not np.all(np.isfinite(back)) \
            or np.max(np.abs(back - xs) / scale) > 1e-9:
        raise ValidationError("f_inv does not invert f on the sample grid",
                              field="f_inv")


def _require_in_interval(xs, interval, name="xs"):
    lo, hi = interval
    if np.any(xs <= lo) or np.any(xs >= hi):
        raise DomainError(f"{name} must lie strictly inside ({lo:g}, {hi:g})")


def power_mean(p: float, xs, w) -> float:
    """Weighted power mean ``(sum w_i x_i^p)^(1/p)`` of positive numbers.

    Exponents with ``|p| < 1e-8`` take the exact geometric branch, which
    is the limit value; the generic branch rescales by an extremal element
    so intermediate powers cannot overflow.
    """
    xs = np.asarray(xs, dtype=float)
    w = as_weights(w, n=xs.size)
    if xs.ndim != 1 or xs.size == 0:
        raise ValidationError("xs must be a nonempty 1-d array", field="xs")
    if np.any(xs <= 0.0) or not np.all(np.isfinite(xs)):
        raise DomainError("power means require strictly positive inputs")
    p = float(p)
    if abs(p) < 1e-8:
        result = float(np.exp(np.dot(w, np.log(xs))))
    else:
        ref = float(np.max(xs)) if p > 0 else float(np.min(xs))
        result = ref * float(np.dot(w, (xs / ref) ** p)) ** (1.0 / p)
    # in-betweenness can only be violated by the last rounding; pin it
    return float(min(max(result, np.min(xs)), np.max(xs)))


def scalar_qam(spec: ScalarMeanSpec, xs, w) -> float:
    """Weighted scalar quasi-arithmetic mean ``f^{-1}(sum w_i f(x_i))``."""
    xs = np.asarray(xs, dtype=float)
    w = as_weights(w, n=xs.size)
    if spec.variant == "power":
        return power_mean(spec.p, xs, w)
    if spec.variant == "lse":
        return float(logsumexp(xs, b=w))
    _require_in_interval(xs, spec.interval)
    vals = np.asarray(spec.f(xs), dtype=float)
    result = float(spec.f_inv(math.fsum((w * vals).tolist())))
    return float(min(max(result, np.min(xs)), np.max(xs)))


# ---------------------------------------------------------------------------
# Quasi-arithmetic averages
# ---------------------------------------------------------------------------


def _gather_points(gen: Generator, points, w, dual: bool):
    pts = [np.asarray(t, dtype=float) for t in points]
    if not pts:
        raise ValidationError("need at least one point", field="points")
    w = as_weights(w, n=len(pts))
    check = gen.require_dual_domain if dual else gen.require_domain
    name = "eta" if dual else "theta"
    pts = [check(t, name=f"{name}[{i}]") for i, t in enumerate(pts)]
    return pts, w


def qaa(gen: Generator, thetas, w) -> np.ndarray:
    """Weighted quasi-arithmetic average ``grad_inv(sum w_i grad(theta_i))``."""
    thetas, w = _gather_points(gen, thetas, w, dual=False)
    pooled = weighted_sum([gen.grad(t) for t in thetas], w)
    if not gen.dual_domain_contains(pooled):
        raise DualDomainError(
            "pooled gradient left the dual domain; the gradient image of "
            f"{gen.label} is not convex along these points"
        )
    return gen.grad_inv(pooled)


def dual_qaa(gen: Generator, etas, w) -> np.ndarray:
    """Dual average ``grad(sum w_i grad_inv(eta_i))`` built from the
    conjugate potential's gradient map."""
    etas, w = _gather_points(gen, etas, w, dual=True)
    pooled = weighted_sum([gen.grad_inv(e) for e in etas], w)
    if not gen.domain_contains(pooled):
        raise DomainError(
            "pooled conjugate gradient left the primal domain of "
            f"{gen.label}"
        )
    return gen.grad(pooled)
