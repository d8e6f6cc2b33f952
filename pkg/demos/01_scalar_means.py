"""Scalar quasi-arithmetic means: the power family, the log-sum-exp mean,
and the invariance that makes generators equivalence classes."""

import numpy as np

from qamlib import custom_mean_spec, lse_mean_spec, power_mean, scalar_qam

xs = np.array([2.0, 6.0])
w = np.array([0.5, 0.5])

print("A weighted quasi-arithmetic mean pushes the points through a strictly")
print("monotone generator f, averages there, and pulls back with f^{-1}.\n")

print("The power family interpolates the classical means on", xs.tolist())
for p, label in [(-1.0, "harmonic"), (0.0, "geometric"), (1.0, "arithmetic"),
                 (2.0, "quadratic")]:
    print(f"  p = {p:+.0f}  ({label:10s})  ->  {power_mean(p, xs, w):.6f}")

print("\nLarge exponents head toward the extremes:")
for p in (8.0, 32.0, -8.0, -32.0):
    print(f"  p = {p:+5.0f}  ->  {power_mean(p, xs, w):.6f}")

print("\nThe p -> 0 limit is the geometric mean; the implementation switches")
print("branches near zero, and the two sides agree:")
print(f"  p = 1e-9 : {power_mean(1e-9, xs, w):.12f}")
print(f"  p = 0    : {power_mean(0.0, xs, w):.12f}")

print("\nThe log-sum-exp mean is the f-mean of f = exp:")
print(f"  LSE(0, 2) = {scalar_qam(lse_mean_spec(), np.array([0.0, 2.0]), w):.6f}")

print("\nGenerators are only defined up to affine changes: lam * f + c gives")
print("the same mean.  Here f = log against g = 3 log + 7:")
g = custom_mean_spec(lambda t: 3.0 * np.log(t) + 7.0,
                     lambda y: np.exp((y - 7.0) / 3.0), (1e-8, 1e8))
print(f"  m_f(2, 6) = {power_mean(0.0, xs, w):.12f}")
print(f"  m_g(2, 6) = {scalar_qam(g, xs, w):.12f}")
