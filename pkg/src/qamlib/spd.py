"""Means and distances on the cone of symmetric positive-definite matrices:
arithmetic, harmonic, the closed-form geometric mean, the inductive
arithmetic-harmonic iteration converging to it, and the trace-metric
geodesic distance."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import scipy.linalg

from .errors import DomainEscapeError, DomainError, ValidationError

SYM_TOL = 1e-12
COND_LIMIT = 1e12

# Full iterate pairs are kept only this far; gaps are kept for every step.
MAX_STORED_ITERATES = 64


@dataclass
class SpdMatrix:
    """A dense SPD matrix with cached spectral data.

    Thin convenience wrapper: every function in this module also accepts a
    plain symmetric ndarray.
    """

    entries: np.ndarray
    _eigvals: Optional[np.ndarray] = None

    def __post_init__(self):
        self.entries = check_spd(self.entries)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def eigenvalues(self) -> np.ndarray:
        if self._eigvals is None:
            self._eigvals = np.linalg.eigvalsh(self.entries)
        return self._eigvals

    @property
    def condition(self) -> float:
        ev = self.eigenvalues
        return float(ev[-1] / ev[0])

    def __array__(self, dtype=None):
        return np.asarray(self.entries, dtype=dtype)


def _sym(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return 0.5 * (x + x.T)


def check_spd(p, name: str = "matrix") -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise ValidationError(f"{name} must be square", field=name)
    if not np.all(np.isfinite(p)):
        raise ValidationError(f"{name} must be finite", field=name)
    scale = max(1.0, float(np.max(np.abs(p))))
    if float(np.max(np.abs(p - p.T))) > SYM_TOL * scale:
        raise DomainError(f"{name} is not symmetric")
    ev = np.linalg.eigvalsh(_sym(p))
    if ev[0] <= 0.0:
        raise DomainError(f"{name} is not positive-definite")
    if ev[-1] / ev[0] > COND_LIMIT:
        raise DomainError(f"{name} is too ill-conditioned (cond > {COND_LIMIT:g})")
    return _sym(p)


def _check_pair(p, q):
    p = check_spd(p, "P")
    q = check_spd(q, "Q")
    if p.shape != q.shape:
        raise ValidationError("P and Q must have the same dimension", field="Q")
    return p, q


def spd_sqrt(p) -> np.ndarray:
    """Principal matrix square root through the symmetric eigendecomposition."""
    p = check_spd(p, "P")
    ev, vec = np.linalg.eigh(p)
    return _sym((vec * np.sqrt(ev)) @ vec.T)


def _spd_inv(p) -> np.ndarray:
    ev, vec = np.linalg.eigh(p)
    return _sym((vec / ev) @ vec.T)


def _spd_inv_sqrt(p) -> np.ndarray:
    ev, vec = np.linalg.eigh(p)
    return _sym((vec / np.sqrt(ev)) @ vec.T)


def spd_arith_mean(p, q) -> np.ndarray:
    """Arithmetic matrix mean ``(P + Q) / 2``."""
    p, q = _check_pair(p, q)
    return _sym(0.5 * (p + q))


def spd_harmonic_mean(p, q) -> np.ndarray:
    """Harmonic matrix mean ``2 (P^-1 + Q^-1)^-1``."""
    p, q = _check_pair(p, q)
    return _sym(2.0 * _spd_inv(_spd_inv(p) + _spd_inv(q)))


def spd_geometric_closed(p, q) -> np.ndarray:
    """Geometric matrix mean ``Q^(1/2) (Q^(-1/2) P Q^(-1/2))^(1/2) Q^(1/2)``,
    the trace-metric midpoint of P and Q."""
    p, q = _check_pair(p, q)
    qh = spd_sqrt(q)
    qih = _spd_inv_sqrt(q)
    middle = spd_sqrt(_sym(qih @ p @ qih))
    return _sym(qh @ middle @ qh)


@dataclass
class AhmTrace:
    """History of the arithmetic-harmonic iteration.

    ``gaps[t]`` is the Frobenius distance between the two sequences at
    step t; ``iterates`` keeps the first 64 pairs.  The gaps shrink
    quadratically, so the limit is reached in a handful of steps.
    """

    iterates: List[Tuple[np.ndarray, np.ndarray]] = field(default_factory=list)
    gaps: List[float] = field(default_factory=list)
    limit: Optional[np.ndarray] = None
    converged: bool = False

    @property
    def iterations(self) -> int:
        return len(self.gaps) - 1


def ahm_geometric(p, q, tol: float = 1e-12, max_iter: int = 60) -> AhmTrace:
    """Interleaved arithmetic/harmonic means converging to the geometric
    matrix mean.

    Each step replaces the pair ``(P_t, Q_t)`` by its arithmetic and
    harmonic means; both sequences close in on the common limit at a
    quadratic rate.  Stops when the Frobenius gap drops to ``tol``.  A
    trace with ``converged=False`` comes back if ``max_iter`` is
    exhausted; losing positive definiteness raises
    :class:`DomainEscapeError`.
    """
    p, q = _check_pair(p, q)
    if not tol > 0.0:
        raise ValidationError("tol must be positive", field="tol")
    trace = AhmTrace()
    for _ in range(max_iter + 1):
        gap = float(np.linalg.norm(p - q, "fro"))
        trace.gaps.append(gap)
        if len(trace.iterates) < MAX_STORED_ITERATES:
            trace.iterates.append((p, q))
        if gap <= tol:
            trace.limit = _sym(0.5 * (p + q))
            trace.converged = True
            return trace
        try:
            p, q = _sym(0.5 * (p + q)), _sym(2.0 * _spd_inv(_spd_inv(p) + _spd_inv(q)))
        except np.linalg.LinAlgError as exc:
            raise DomainEscapeError("iteration lost positive definiteness",
                                    trace=trace) from exc
        if np.linalg.eigvalsh(q)[0] <= 0.0 or np.linalg.eigvalsh(p)[0] <= 0.0:
            raise DomainEscapeError("iteration lost positive definiteness",
                                    trace=trace)
    trace.limit = _sym(0.5 * (p + q))
    return trace


def trace_metric_distance(p, q) -> float:
    """Geodesic distance of the trace metric:
    ``sqrt(sum_i log^2 lambda_i(P^(-1/2) Q P^(-1/2)))``."""
    p, q = _check_pair(p, q)
    # eigenvalues of the pencil (Q, P) equal those of P^(-1/2) Q P^(-1/2)
    lam = scipy.linalg.eigh(q, p, eigvals_only=True)
    return float(np.sqrt(np.sum(np.log(lam) ** 2)))
