"""Tour of the spherical toolkit: quadrature, harmonics, derivatives.

Run:  python3 demos/01_sphere_toolkit.py
"""

import math

import numpy as np

from quermass import analyze, build_grid, quadrature, synthesize
from quermass.fields import ScalarField, gradient, laplacian, split_frequencies
from quermass.grids import monomial_sphere_integral

grid = build_grid(3, 32)
print(f"grid on S^2: {grid.num_nodes} nodes, exact for ambient degree <= {grid.exact_degree}")
print(f"  total weight   : {grid.weights.sum():.15f}   (4*pi = {4 * math.pi:.15f})")

val = quadrature(grid.nodes[:, 0] ** 4 * grid.nodes[:, 1] ** 2, grid)
ref = monomial_sphere_integral([4, 2, 0])
print(f"  x1^4 x2^2      : {val:.15f}   closed form {ref:.15f}")

# the coordinate function x1 is a single degree-1 harmonic
f = analyze(ScalarField(grid, grid.nodes[:, 0]))
nonzero = np.flatnonzero(np.abs(f.coeffs) > 1e-12)
print(f"\ncoordinate function x1: nonzero coefficients at flat indices {nonzero.tolist()}")

lap = laplacian(f)
print(f"  eigenvalue check: max |lap(x1) + 2 x1| = {np.max(np.abs(lap.values + 2 * f.values)):.2e}")

g = gradient(f)
tangency = np.max(np.abs(np.einsum('ij,ij->i', g, grid.nodes)))
energy = quadrature(np.einsum('ij,ij->i', g, g), grid)
print(f"  gradient tangency {tangency:.2e}; energy {energy:.12f} (= 8*pi/3 = {8 * math.pi / 3:.12f})")

# split a three-mode field at the cutoff 2n+1 = 7
rng = np.random.default_rng(1)
coeffs = np.zeros(36)
coeffs[2] = 0.7          # degree 1 (eigenvalue 2)
coeffs[6] = 0.5          # degree 2 (eigenvalue 6)
coeffs[27] = 0.3         # degree 5 (eigenvalue 30)
u = synthesize(coeffs, grid)
lo, hi = split_frequencies(u, lam=7.0)
num = quadrature(np.einsum('ij,ij->i', gradient(hi), gradient(hi)), grid)
den = quadrature(hi.values ** 2, grid)
print(f"\nfrequency split at 7: high part carries the degree-5 mode only")
print(f"  Rayleigh quotient of the high part: {num / den:.10f}  (eigenvalue 30)")
