"""Domains that are C^1-close to the ball with very negative total mean
curvature.

The construction dents the unit sphere with many identical radial bumps
of geodesic radius 1/kappa placed at points with pairwise distance at
least 2/kappa.  Each dent contributes a cubic-order negative amount
~ eps^3 / kappa to the total mean curvature while the number of dents
grows like kappa^{n-1}, so the total crosses any negative threshold for
kappa large.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np
from scipy.spatial import cKDTree

from quermass import geometry
from quermass.analytic import GeodesicRadialField
from quermass.fields import ScalarField
from quermass.grids import build_grid, sphere_area

# minimal pairwise distance of the N-point Fibonacci lattice is
# FIB_MIN_DIST/sqrt(N) (measured, stable to 4 digits across N)
FIB_MIN_DIST = 3.0921


# -- the radial dent profile -----------------------------------------------------


def _smoothstep(w):
    return ((6.0 * w - 15.0) * w + 10.0) * w**3


def _smoothstep_prime(w):
    return 30.0 * w * w * (w - 1.0) * (w - 1.0)


def _smoothstep_antideriv(w):
    return ((w - 3.0) * w + 2.5) * w**4


@dataclasses.dataclass(frozen=True)
class BumpProfile:
    """Inward dent: f <= 0 with slope ramping to eps/2 on most of [0, 1/kappa].

    The slope is eps/2 times a quintic smoothstep ramp: up on
    [0, r/8], plateau on [r/8, 7r/8], down on [7r/8, r], r = 1/kappa.
    f is the negative tail integral of the slope, so f(r) = 0 and
    -eps/2 <= f <= 0.
    """

    kappa: float
    eps: float

    def __post_init__(self):
        if not self.kappa >= 1.0:
            raise ValueError("kappa must be >= 1")
        if not 0.0 <= self.eps < 0.5:
            raise ValueError("eps must lie in [0, 1/2)")

    @property
    def radius(self) -> float:
        return 1.0 / self.kappa

    @property
    def breakpoints(self) -> tuple:
        r = self.radius
        return (r / 8.0, 7.0 * r / 8.0, r)

    def slope(self, r):
        r = np.asarray(r, dtype=float)
        a, R = self.radius / 8.0, self.radius
        out = np.zeros_like(r)
        m1 = (r >= 0) & (r < a)
        m2 = (r >= a) & (r <= 7 * a)
        m3 = (r > 7 * a) & (r < R)
        out[m1] = 0.5 * self.eps * _smoothstep(r[m1] / a)
        out[m2] = 0.5 * self.eps
        out[m3] = 0.5 * self.eps * _smoothstep((R - r[m3]) / a)
        return out

    def slope_derivative(self, r):
        r = np.asarray(r, dtype=float)
        a, R = self.radius / 8.0, self.radius
        out = np.zeros_like(r)
        m1 = (r >= 0) & (r < a)
        m3 = (r > 7 * a) & (r < R)
        out[m1] = 0.5 * self.eps * _smoothstep_prime(r[m1] / a) / a
        out[m3] = -0.5 * self.eps * _smoothstep_prime((R - r[m3]) / a) / a
        return out

    def depth(self, r):
        """f(r) = -int_r^R slope; f(0) = -(7/16) eps / kappa."""
        r = np.asarray(r, dtype=float)
        a, R = self.radius / 8.0, self.radius
        mass = 0.5 * self.eps * (7.0 * R / 8.0)
        cum = np.zeros_like(r)
        m1 = (r >= 0) & (r < a)
        m2 = (r >= a) & (r <= 7 * a)
        m3 = r > 7 * a
        cum[m1] = 0.5 * self.eps * a * _smoothstep_antideriv(r[m1] / a)
        cum[m2] = 0.5 * self.eps * (0.5 * a + (r[m2] - a))
        w = np.clip((R - r[m3]) / a, 0.0, 1.0)
        cum[m3] = 0.5 * self.eps * (6.5 * a + a * (0.5 - _smoothstep_antideriv(w)))
        return cum - mass

    def validate(self, samples: int = 4001) -> dict:
        r = np.linspace(0.0, self.radius, samples)
        f, fd = self.depth(r), self.slope(r)
        checks = {
            "depth_range": bool(np.all((-0.5 * self.eps - 1e-15 <= f) & (f <= 1e-15))),
            "slope_range": bool(np.all((-1e-15 <= fd) & (fd <= 0.5 * self.eps + 1e-15))),
            "plateau": bool(np.all(np.abs(
                self.slope(np.linspace(*self.breakpoints[:2], 101)) - 0.5 * self.eps
            ) < 1e-15)),
            "flat_start": abs(float(self.slope(np.array([0.0]))[0])) < 1e-15,
            "closes": abs(float(self.depth(np.array([self.radius]))[0])) < 1e-15,
        }
        checks["ok"] = all(checks.values())
        return checks


def make_bump(kappa: float, eps: float) -> BumpProfile:
    """Concrete dent profile; all box constraints verified on a dense sample."""
    bump = BumpProfile(float(kappa), float(eps))
    checks = bump.validate()
    if not checks["ok"]:
        raise AssertionError(f"bump profile violates its box constraints: {checks}")
    return bump


# -- point packing ------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class PackedPoints:
    """Centers on S^{n-1} with verified pairwise distance >= 2/kappa."""

    n: int
    kappa: float
    points: np.ndarray
    min_distance: float

    @property
    def count(self) -> int:
        return len(self.points)

    @property
    def packing_constant(self) -> float:
        return self.count / self.kappa ** (self.n - 1)


def fibonacci_sphere(count: int) -> np.ndarray:
    i = np.arange(count)
    z = 1.0 - (2.0 * i + 1.0) / count
    phi = 2.0 * math.pi * i / ((1.0 + math.sqrt(5.0)) / 2.0)
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    return np.stack([z, r * np.cos(phi), r * np.sin(phi)], axis=1)


def _verified_min_distance(points: np.ndarray) -> float:
    """Exact minimal pairwise distance (nearest-neighbor query over all points)."""
    tree = cKDTree(points)
    d, _ = tree.query(points, k=2, workers=-1)
    return float(d[:, 1].min())


def pack_points(n: int, kappa: float, seed: int = 0) -> PackedPoints:
    """Centers with pairwise Euclidean distance >= 2/kappa.

    n = 3 uses the Fibonacci lattice sized from its measured minimal
    distance, then verifies every pair; other dimensions use seeded
    random sequential packing.  The count is whatever the packer
    achieves and is reported, never assumed.
    """
    min_d = 2.0 / kappa

    def antipodal():
        pts = np.zeros((2, n))
        pts[0, 0], pts[1, 0] = 1.0, -1.0
        return PackedPoints(n, kappa, pts, 2.0)

    if n == 3:
        count = max(2, int((FIB_MIN_DIST * kappa / 2.0) ** 2 * 0.999))
        pts = fibonacci_sphere(count)
        for _ in range(8):
            tree = cKDTree(pts)
            bad = tree.query_pairs(r=min_d * (1.0 - 1e-12), output_type="ndarray")
            if len(bad) == 0:
                break
            pts = np.delete(pts, np.unique(bad[:, 1]), axis=0)
        else:
            raise RuntimeError("could not thin the lattice to the distance bound")
        if len(pts) < 2:
            return antipodal()
        return PackedPoints(n, kappa, pts, _verified_min_distance(pts))

    rng = np.random.default_rng(seed)
    target = max(2, int(2.0 * kappa ** (n - 1)))
    accepted = []
    attempts_left = 200 * target
    while attempts_left > 0 and len(accepted) < 4 * target:
        attempts_left -= 1
        p = rng.standard_normal(n)
        p /= np.linalg.norm(p)
        if accepted:
            arr = np.asarray(accepted)
            if np.min(np.linalg.norm(arr - p, axis=1)) < min_d:
                continue
        accepted.append(p)
    if len(accepted) < 2:
        return antipodal()
    pts = np.asarray(accepted)
    d_exact = _verified_min_distance(pts)
    if d_exact < min_d:
        raise AssertionError("random packer produced a violating pair")
    return PackedPoints(n, kappa, pts, d_exact)


# -- flat radial cubic-term identity ----------------------------------------------


def _panel_rule(edges, order: int = 24, subdivisions: int = 8):
    gx, gw = np.polynomial.legendre.leggauss(order)
    xs, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        grid = np.linspace(a, b, subdivisions + 1)
        for aa, bb in zip(grid[:-1], grid[1:]):
            xs.append(0.5 * (aa + bb) + 0.5 * (bb - aa) * gx)
            ws.append(0.5 * (bb - aa) * gw)
    return np.concatenate(xs), np.concatenate(ws)


def radial_cubic_identity_check(bump: BumpProfile, n: int, a_fn=None,
                                remainder_constant: float = 5.0) -> dict:
    """Flat-space identity for the cubic term of a radial profile.

    lhs = |S^{n-2}| int a(f, f'^2) f'' f'^2 r^{n-2} dr must match
    leading = -((n-2)|S^{n-2}|/3) int f'^3 r^{n-3} dr up to
    C * (eps |leading| + int f'^2 r^{n-2}).  With a == 1 the two sides
    are equal exactly (pure integration by parts).
    """
    area = sphere_area(n - 1)
    r, w = _panel_rule((0.0, *bump.breakpoints))
    f, fd, fdd = bump.depth(r), bump.slope(r), bump.slope_derivative(r)
    av = np.ones_like(r) if a_fn is None else a_fn(f, fd**2)
    lhs = area * float(np.sum(w * av * fdd * fd**2 * r ** (n - 2)))
    leading = -(n - 2) * area / 3.0 * float(np.sum(w * fd**3 * r ** (n - 3)))
    remainder_scale = float(np.sum(w * fd**2 * r ** (n - 2)))
    bound = remainder_constant * (bump.eps * abs(leading) + remainder_scale)
    return {
        "lhs": lhs,
        "leading": leading,
        "difference": lhs - leading,
        "remainder_scale": remainder_scale,
        "bound": bound,
        "margin": bound - abs(lhs - leading),
    }


# -- the dented sphere --------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class DentedSphere:
    """The dented near-ball domain: C^1 eps-perturbation with dents."""

    n: int
    eps: float
    kappa: float
    bump: BumpProfile
    centers: PackedPoints

    def provider(self) -> GeodesicRadialField:
        return GeodesicRadialField(self.centers.points, self.bump.depth,
                                   self.bump.slope, self.bump.slope_derivative,
                                   support=self.bump.radius)

    def on_grid(self, grid):
        from quermass.stardomain import StarDomain
        prov = self.provider()
        return StarDomain(ScalarField(grid, prov.values(grid), analytic=prov))

    def c1_norm(self) -> float:
        r = np.linspace(0.0, self.bump.radius, 4001)
        return float(max(np.max(np.abs(self.bump.depth(r))),
                         np.max(np.abs(self.bump.slope(r)))))

    def eps_size(self) -> float:
        """Sup-norm deviation of the normal from radial (center at origin).

        The deviation field vanishes off the dents and is identical on
        every dent by rotational symmetry, so the global sup equals the
        sup over a single cap, evaluated on a dense 1-D sample.
        """
        r = np.linspace(0.0, self.bump.radius, 8001)
        v2 = (self.bump.slope(r) / (1.0 + self.bump.depth(r))) ** 2
        return float(np.sqrt(np.max(geometry.normal_deviation_sq(v2))))


def build_counterexample(n: int, eps: float, kappa: float, seed: int = 0,
                         centers: PackedPoints | None = None) -> DentedSphere:
    """Dent the sphere at packed points; supports are verified disjoint."""
    bump = make_bump(kappa, eps)
    if centers is None:
        centers = pack_points(n, kappa, seed)
    if centers.min_distance < 2.0 * bump.radius:
        raise AssertionError(
            f"dent supports overlap: min distance {centers.min_distance:.3e} "
            f"< {2 * bump.radius:.3e}"
        )
    return DentedSphere(n, eps, kappa, bump, centers)


# -- total mean curvature, two ways --------------------------------------------------


def _cap_contributions(bump: BumpProfile, n: int) -> tuple[float, float]:
    """(integral of H over one dented cap, cap area on the sphere)."""
    theta, w = _panel_rule((0.0, *bump.breakpoints))
    V, Vd, Vdd = bump.depth(theta), bump.slope(theta), bump.slope_derivative(theta)
    s = np.sin(theta)
    cot_term = np.where(s > 1e-300, Vd * np.cos(theta) / s, 0.0)
    lap = Vdd + (n - 2.0) * cot_term
    H = geometry.mean_curvature_from_scalars(V, Vd**2, lap, Vdd * Vd**2, n)
    J = geometry.area_jacobian(V, Vd**2, n)
    area = sphere_area(n - 1)
    coarea = w * s ** (n - 2) * area
    return float(np.sum(coarea * H * J)), float(np.sum(coarea))


def total_mean_curvature_zonal(domain: DentedSphere) -> float:
    """Sum of identical per-dent cap integrals plus the untouched sphere."""
    n = domain.n
    cap_h, cap_area = _cap_contributions(domain.bump, n)
    q = domain.centers.count
    return (n - 1.0) * (sphere_area(n) - q * cap_area) + q * cap_h


def total_mean_curvature_grid(domain: DentedSphere, resolution: int | None = None,
                              chunk: int = 400_000) -> float:
    """Independent check on a dense 2-D grid (n = 3)."""
    if domain.n != 3:
        raise ValueError("the full-grid route is built for n = 3")
    if resolution is None:
        # ~13 polar nodes per dent radius; even multiples of kappa can beat
        # against the dent lattice and inflate the quadrature error
        resolution = max(256, int(math.ceil(13 * domain.kappa)))
    grid = build_grid(3, resolution)
    K = domain.on_grid(grid)
    return K.integrated_mean_curvature(chunk=chunk)


def total_mean_curvature(n: int, eps: float, kappa: float, seed: int = 0,
                         method: str = "zonal", resolution: int | None = None,
                         centers: PackedPoints | None = None,
                         packing_cache: dict | None = None) -> dict:
    """Total boundary mean curvature of the dented sphere.

    method "zonal" uses the exact per-dent decomposition; "both" adds
    the dense-grid evaluation (n = 3) and reports their relative gap.
    packing_cache maps kappa to PackedPoints: packings depend only on
    kappa, so sweeps over eps can share the expensive part.
    """
    if centers is None and packing_cache is not None:
        if kappa not in packing_cache:
            packing_cache[kappa] = pack_points(n, kappa, seed)
        centers = packing_cache[kappa]
    domain = build_counterexample(n, eps, kappa, seed, centers=centers)
    out = {
        "n": n, "eps": eps, "kappa": kappa,
        "count": domain.centers.count,
        "packing_constant": domain.centers.packing_constant,
        "int_H_zonal": total_mean_curvature_zonal(domain),
        "c1_norm": domain.c1_norm(),
        "eps_size": domain.eps_size(),
    }
    if method == "both":
        out["int_H_grid"] = total_mean_curvature_grid(domain, resolution)
        scale = max(abs(out["int_H_zonal"]), (n - 1.0) * sphere_area(n))
        out["relative_gap"] = abs(out["int_H_grid"] - out["int_H_zonal"]) / scale
    elif method != "zonal":
        raise ValueError(f"unknown method {method!r}")
    return out


def sweep_total_mean_curvature(n: int, eps: float, kappas, seed: int = 0,
                               method: str = "both") -> list[dict]:
    return [total_mean_curvature(n, eps, float(k), seed, method=method)
            for k in kappas]


def affine_fit(x, y) -> dict:
    """Least-squares line with R^2, for the kappa sweep."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    A = np.stack([x, np.ones_like(x)], axis=1)
    (slope, intercept), res, *_ = np.linalg.lstsq(A, y, rcond=None)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(np.sum((y - slope * x - intercept) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return {"slope": float(slope), "intercept": float(intercept), "r_squared": r2}


def find_negative_mean_curvature(n: int, eps: float, threshold: float = -1.0,
                                 kappa_start: float = 20.0,
                                 kappa_max: float = 1e5, seed: int = 0,
                                 packing_cache: dict | None = None) -> dict:
    """Double kappa until the total mean curvature drops below the threshold.

    Never silent: returns found=False with the full history when the cap
    is reached.
    """
    history = []
    kappa = float(kappa_start)
    while kappa <= kappa_max:
        rec = total_mean_curvature(n, eps, kappa, seed, method="zonal",
                                   packing_cache=packing_cache)
        history.append(rec)
        if rec["int_H_zonal"] < threshold:
            return {"found": True, "kappa_star": kappa,
                    "int_H": rec["int_H_zonal"], "history": history}
        kappa *= 2.0
    return {"found": False, "kappa_star": None,
            "int_H": history[-1]["int_H_zonal"] if history else None,
            "history": history}
