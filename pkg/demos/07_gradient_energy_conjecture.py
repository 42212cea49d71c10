"""Exploring the open gradient-energy inequality.

Conjecturally, int lap(u) |grad u|^2 <= (n-2)/(n-1) int |grad u|^2 for
smooth u with lap(u) <= 1; only the constant-1 version is elementary.
The harness searches for large ratios and reproduces the zonal kernel
sequence showing the inequality cannot hold with a constant -> 0.

Run:  python3 demos/07_gradient_energy_conjecture.py   (~30 s)
"""

from quermass.conjecture import (
    conjectured_bound,
    green_ladder,
    maximize_ratio,
    trivial_bound_margin,
)

print("== the circle is degenerate ==")
out = maximize_ratio(2, basis_cap=8, restarts=3, seed=1, iterations=100)
print(f"  best ratio over 3 restarts: {out['best'].ratio:.2e} (identically zero in theory)")

print("\n== penalized ascent on S^2 ==")
out = maximize_ratio(3, basis_cap=12, restarts=8, seed=2024)
best = out["best"]
print(f"  best feasible ratio : {best.ratio:.4f}")
print(f"  conjectured bound   : {conjectured_bound(3):.4f}   trivial bound: 1")
print(f"  constraint margin   : {best.constraint_margin:.2e}")
print(f"  gradient validation : {best.meta['gradient_check_max_rel']:.2e} relative")
backend = out["backend"]
print(f"  trivial-bound margin of the best candidate: "
      f"{trivial_bound_margin(backend, best.coeffs):.4f}")

print("\n== zonal kernel ladder in n = 4 ==")
ladder = green_ladder(4, levels=(8, 16, 32, 64))
for k, r, g in zip(ladder["levels"], ladder["ratios"], ladder["grad_inf"]):
    print(f"  level {k:>3}: ratio {r:.4f},  |grad|_inf {g:.4f}")
print("  ratios stay bounded below while the gradient norm vanishes:")
print("  no constant tending to zero can replace the conjectured bound")
