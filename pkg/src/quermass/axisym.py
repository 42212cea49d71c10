"""Axially symmetric domains: the 1-D machinery, valid for every n >= 3.

A zonal profile V(theta) on [0, pi] (angle from the e_1 axis) determines
the domain; every functional reduces to a weighted integral against
sin(theta)^{n-2} (coarea reduction), which Gauss-Jacobi rules in
t = cos(theta) integrate exactly for polynomial data.  Smooth zonal
fields are smooth functions of t, so profiles are represented in the
orthonormal zonal (Gegenbauer) basis and differentiated exactly;
profiles with analytic derivative callables bypass the basis entirely.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import roots_jacobi

from quermass import geometry
from quermass.config import DEFAULT_TOLERANCES, Tolerances
from quermass.grids import sphere_area
from quermass.harmonics import ZonalBasis
from quermass.reporting import DeficitReport
from quermass.stardomain import Functionals


def _leggauss_panel(a: float, b: float, order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (a + b) + 0.5 * (b - a) * x, 0.5 * (b - a) * w


def coarea_integral(f, n: int, resolution: int = 512) -> float:
    """Integral over S^{n-1} of a function of the polar angle.

    f is a callable of theta; the sin^{n-2} coarea weight and the
    |S^{n-2}| equatorial factor are applied here.
    """
    t, w = roots_jacobi(resolution, (n - 3) / 2.0, (n - 3) / 2.0)
    theta = np.arccos(t)
    return float(sphere_area(n - 1) * np.sum(w * f(theta)))


class AxialProfile:
    """Zonal profile V on [0, pi] with exact first and second derivatives."""

    def __init__(self, n: int, coeffs=None, callables=None, support=math.pi,
                 resolution: int = 512, breakpoints=(), tol: Tolerances = DEFAULT_TOLERANCES):
        if n < 3:
            raise ValueError("axial machinery requires n >= 3")
        self.n = n
        self.resolution = resolution
        self.support = float(support)
        self.breakpoints = tuple(breakpoints)
        self.tol = tol
        t, w = roots_jacobi(resolution, (n - 3) / 2.0, (n - 3) / 2.0)
        self.t, self.w = t, w
        self.theta = np.arccos(t)
        self._basis = None
        if (coeffs is None) == (callables is None):
            raise ValueError("provide exactly one of coeffs or callables")
        if coeffs is not None:
            self.coeffs = np.asarray(coeffs, dtype=float)
            self._basis = ZonalBasis(n, len(self.coeffs) - 1)
            self.callables = None
        else:
            self.coeffs = None
            self.callables = callables
            fd = callables[1]
            v0 = float(np.atleast_1d(fd(np.array([0.0])))[0])
            vpi = (0.0 if self.support < math.pi
                   else float(np.atleast_1d(fd(np.array([math.pi])))[0]))
            for val, label in ((v0, "0"), (vpi, "pi")):
                if abs(val) > 1e-8:
                    raise ValueError(f"profile slope at theta={label} is {val}; "
                                     "a smooth boundary needs zero polar slope")

    # -- constructors -----------------------------------------------------------

    @classmethod
    def from_zonal_coeffs(cls, n: int, coeffs, resolution: int = 512) -> "AxialProfile":
        return cls(n, coeffs=coeffs, resolution=resolution)

    @classmethod
    def from_values(cls, n: int, theta_nodes, values, degree: int | None = None,
                    resolution: int = 512) -> "AxialProfile":
        """Fit a zonal expansion to sampled values (least squares)."""
        theta_nodes = np.asarray(theta_nodes, dtype=float)
        values = np.asarray(values, dtype=float)
        if degree is None:
            degree = min(len(theta_nodes) - 1, 256)
        basis = ZonalBasis(n, degree)
        Z = basis.values(np.cos(theta_nodes))       # (L+1, M)
        coeffs, *_ = np.linalg.lstsq(Z.T, values, rcond=None)
        return cls(n, coeffs=coeffs, resolution=resolution)

    @classmethod
    def from_callables(cls, n: int, f, fd, fdd, support=math.pi,
                       breakpoints=(), resolution: int = 512) -> "AxialProfile":
        """Analytic profile; f, fd, fdd act on arrays of theta in [0, support]."""
        return cls(n, callables=(f, fd, fdd), support=support,
                   breakpoints=breakpoints, resolution=resolution)

    # -- evaluation --------------------------------------------------------------

    def _eval_callable(self, which: int, theta: np.ndarray) -> np.ndarray:
        fn = self.callables[which]
        theta = np.asarray(theta, dtype=float)
        inside = theta < self.support
        out = np.zeros_like(theta)
        if inside.any():
            out[inside] = fn(theta[inside])
        return out

    def value(self, theta) -> np.ndarray:
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        if self.callables is not None:
            return self._eval_callable(0, theta)
        Z = self._basis.values(np.cos(theta))
        return self.coeffs @ Z

    def slope(self, theta) -> np.ndarray:
        """dV/dtheta."""
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        if self.callables is not None:
            return self._eval_callable(1, theta)
        t = np.cos(theta)
        Zp = self._basis.values(t, derivative=1)
        return -np.sin(theta) * (self.coeffs @ Zp)

    def curvature_slope(self, theta) -> np.ndarray:
        """d^2 V/dtheta^2."""
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        if self.callables is not None:
            return self._eval_callable(2, theta)
        t = np.cos(theta)
        Zp = self._basis.values(t, derivative=1)
        Zpp = self._basis.values(t, derivative=2)
        return (1 - t * t) * (self.coeffs @ Zpp) - t * (self.coeffs @ Zp)

    def c1_norm(self, samples: int = 2048) -> float:
        theta = np.linspace(0.0, math.pi, samples)
        return float(max(np.max(np.abs(self.value(theta))),
                         np.max(np.abs(self.slope(theta)))))

    # -- quadrature rule tuned to the profile -------------------------------------

    def quadrature_rule(self):
        """(theta, weights) with coarea and |S^{n-2}| factors included.

        Coefficient profiles use the global Gauss-Jacobi rule; compactly
        supported analytic profiles get panel rules aligned with their
        breakpoints plus a smooth far panel.
        """
        area = sphere_area(self.n - 1)
        feature_edges = sorted(b for b in {self.support, *self.breakpoints}
                               if b < math.pi - 1e-12)
        if self.callables is None or not feature_edges:
            return self.theta, area * self.w
        pts, wts = [], []
        edges = [0.0, *feature_edges]
        for a, b in zip(edges[:-1], edges[1:]):
            sub = np.linspace(a, b, 9)
            for aa, bb in zip(sub[:-1], sub[1:]):
                x, w = _leggauss_panel(aa, bb, 16)
                pts.append(x)
                wts.append(w)
        tail0 = edges[-1]
        for a, b in ((tail0, min(2 * tail0, math.pi)),
                     (min(2 * tail0, math.pi), math.pi)):
            if b > a + 1e-15:
                x, w = _leggauss_panel(a, b, 48)
                pts.append(x)
                wts.append(w)
        theta = np.concatenate(pts)
        w = np.concatenate(wts) * np.sin(theta) ** (self.n - 2) * area
        return theta, w


def _pointwise_curvature(profile: AxialProfile, theta: np.ndarray):
    n = profile.n
    V = profile.value(theta)
    Vd = profile.slope(theta)
    Vdd = profile.curvature_slope(theta)
    s = np.sin(theta)
    with np.errstate(divide="ignore", invalid="ignore"):
        cot_term = np.where(s > 1e-12, Vd * np.cos(theta) / np.where(s > 1e-12, s, 1.0), Vdd)
    lap = Vdd + (n - 2.0) * cot_term
    grad2 = Vd * Vd
    cubic = Vdd * grad2
    H = geometry.mean_curvature_from_scalars(V, grad2, lap, cubic, n)
    return V, Vd, Vdd, cot_term, lap, grad2, cubic, H


def axial_curvature(profile: AxialProfile, theta=None) -> dict:
    """Pointwise curvature data of the axisymmetric boundary.

    Returns arrays over theta: H, |grad u| = |V'|, the Laplacian
    V'' + (n-2) V' cot(theta) (pole limit handled), and the cubic
    integrand V'' V'^2.
    """
    if theta is None:
        theta = profile.theta
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    V, Vd, Vdd, cot_term, lap, grad2, cubic, H = _pointwise_curvature(profile, theta)
    return {
        "theta": theta, "V": V, "Vdot": Vd, "Vddot": Vdd,
        "H": H, "grad_abs": np.abs(Vd), "laplacian": lap,
        "cubic_integrand": cubic,
    }


def _shape_eigen(profile: AxialProfile, theta: np.ndarray):
    """Principal curvatures along theta via the shared shape-operator kernel."""
    n = profile.n
    V, Vd, Vdd, cot_term, lap, grad2, cubic, H = _pointwise_curvature(profile, theta)
    m = theta.shape[0]
    grad_fr = np.zeros((m, n - 1))
    grad_fr[:, 0] = Vd
    hess = np.zeros((m, n - 1, n - 1))
    hess[:, 0, 0] = Vdd
    for k in range(1, n - 1):
        hess[:, k, k] = cot_term
    S = geometry.shape_operator_frame(V, grad_fr, hess)
    eigs = np.linalg.eigvalsh(S)
    return V, Vd, eigs, H


def axial_functionals(profile: AxialProfile) -> Functionals:
    """All scalar functionals of the axisymmetric domain by 1-D quadrature."""
    n = profile.n
    theta, w = profile.quadrature_rule()
    V, Vd, eigs, H = _shape_eigen(profile, theta)
    J = geometry.area_jacobian(V, Vd * Vd, n)
    wj = w * J
    sigma = geometry.elementary_symmetric(eigs)
    Hp, Hm = np.maximum(H, 0.0), np.maximum(-H, 0.0)
    return Functionals(
        n=n,
        volume=float(np.sum(w * (1.0 + V) ** n / n)),
        perimeter=float(np.sum(wj)),
        int_H=float(np.sum(wj * H)),
        int_H_plus=float(np.sum(wj * Hp)),
        int_H_minus=float(np.sum(wj * Hm)),
        int_nuclear=float(np.sum(wj * np.abs(eigs).sum(axis=1))),
        int_sigma=wj @ sigma,
        int_sigma_abs=wj @ np.abs(sigma),
        min_principal_curvature=float(np.min(eigs)),
    )


def pole_gradient_bound(profile: AxialProfile, theta0: float | None = None,
                        constants=(1.0, 3.0, 10.0), slack: float = 1.1,
                        samples: int = 400) -> dict:
    """Check the polar slope bound V'(th) <= slack*th + C0 th^{-(n-2)} * intHminus.

    Evaluated on a theta grid in (0, theta0] and mirrored near pi.
    Returns worst margins (rhs - lhs; nonnegative means the bound holds)
    for each candidate constant C0.
    """
    n = profile.n
    if theta0 is None:
        theta0 = math.sqrt(max(profile.c1_norm(), 1e-12))
    theta0 = min(theta0, math.pi / 2)
    int_h_minus = axial_functionals(profile).int_H_minus

    th = np.linspace(theta0 / samples, theta0, samples)
    north_lhs = profile.slope(th)
    south_lhs = -profile.slope(math.pi - th)
    report = {"theta0": theta0, "int_H_minus": int_h_minus, "slack": slack,
              "constants": {}}
    for c0 in constants:
        rhs = slack * th + c0 * th ** (-(n - 2.0)) * int_h_minus
        report["constants"][c0] = {
            "north_margin": float(np.min(rhs - north_lhs)),
            "south_margin": float(np.min(rhs - south_lhs)),
        }
    return report


def axial_minkowski_deficit(profile: AxialProfile, seed=None):
    """Perimeter-normalized H^+ deficit computed entirely in 1-D."""
    from quermass.deficits import minkowski_deficit
    rep = minkowski_deficit(AxialDomain(profile), seed=seed)
    return DeficitReport(
        which="axial_minkowski", n=rep.n, lhs=rep.lhs, rhs=rep.rhs,
        normalization=rep.normalization, center_used=rep.center_used,
        eps_size=rep.eps_size, seed=rep.seed, extra=rep.extra,
    )


def periodic_cubic_integral(values: np.ndarray) -> float:
    """Circle identity check: integral of V'' V'^2 over a 2pi-periodic profile.

    Fourier differentiation on the uniform grid; the integrand is the
    exact derivative of V'^3/3, so the result vanishes for resolved
    profiles.
    """
    values = np.asarray(values, dtype=float)
    m = values.shape[0]
    k = np.fft.rfftfreq(m, d=1.0 / m)
    F = np.fft.rfft(values)
    vd = np.fft.irfft(1j * k * F, n=m)
    vdd = np.fft.irfft(-(k * k) * F, n=m)
    return float(np.sum(vdd * vd * vd) * (2.0 * math.pi / m))


def lift_to_sphere(profile: AxialProfile, grid):
    """The zonal profile as a ScalarField on a full n=3 grid.

    Coefficient profiles map exactly onto the m = 0 line of the full
    harmonic basis (the zonal basis IS Y_{l,0} for n = 3), which makes
    the 1-D and 2-D pipelines independently computable on the same
    domain.  Analytic profiles are lifted through the radial provider.
    """
    from quermass.fields import ScalarField, synthesize
    if profile.callables is not None:
        from quermass.analytic import zonal_field
        prov = zonal_field(profile.value, profile.slope, profile.curvature_slope,
                           n=grid.n)
        return ScalarField(grid, prov.values(grid), analytic=prov)
    if grid.n != 3 or profile.n != 3:
        raise ValueError("coefficient lifting is exact for n = 3 only")
    from quermass.harmonics import coeff_count
    L = len(profile.coeffs) - 1
    full = np.zeros(coeff_count(L))
    for l in range(L + 1):
        full[l * l] = profile.coeffs[l]
    return synthesize(full, grid)


class AxialDomain:
    """Axisymmetric star-shaped domain; mirrors the StarDomain surface."""

    def __init__(self, profile: AxialProfile, tol: Tolerances = DEFAULT_TOLERANCES):
        theta, _ = profile.quadrature_rule()
        if np.min(1.0 + profile.value(theta)) <= 0:
            raise ValueError("profile violates 1 + V > 0: not star-shaped")
        self.profile = profile
        self.n = profile.n
        self.tol = tol
        self._eps = {}
        self._functionals = None

    def functionals(self) -> Functionals:
        if self._functionals is None:
            self._functionals = axial_functionals(self.profile)
        return self._functionals

    def volume(self) -> float:
        return self.functionals().volume

    def perimeter(self) -> float:
        return self.functionals().perimeter

    def curvature_integrals(self, check_routes: bool = True) -> Functionals:
        return self.functionals()

    def barycenter(self) -> np.ndarray:
        n = self.n
        theta, w = self.profile.quadrature_rule()
        V = self.profile.value(theta)
        b1 = float(np.sum(w * (1.0 + V) ** (n + 1) * np.cos(theta)))
        out = np.zeros(n)
        out[0] = b1 / ((n + 1) * self.volume())
        return out

    # -- planar deviation geometry -------------------------------------------------

    def _deviation(self, offset: float, theta, V, Vd):
        """|nu - radial direction from (offset, 0, ...)| pointwise on theta."""
        opu = 1.0 + V
        v = Vd / opu
        s = np.sqrt(1.0 + v * v)
        # 2-D section: x = (cos th, sin th), e_theta = (-sin th, cos th)
        nu1 = (np.cos(theta) + v * np.sin(theta)) / s
        nu2 = (np.sin(theta) - v * np.cos(theta)) / s
        p1 = opu * np.cos(theta) - offset
        p2 = opu * np.sin(theta)
        norm = np.hypot(p1, p2)
        return np.hypot(nu1 - p1 / norm, nu2 - p2 / norm)

    def eps_size(self, optimize_center: bool = True):
        if optimize_center in self._eps:
            return self._eps[optimize_center]
        theta = np.linspace(0.0, math.pi, 4096)
        V = self.profile.value(theta)
        Vd = self.profile.slope(theta)

        def objective(b):
            return float(np.max(self._deviation(b, theta, V, Vd)))

        seed = self.barycenter()[0]
        if optimize_center:
            res = minimize_scalar(objective, bounds=(seed - 0.3, seed + 0.3),
                                  method="bounded", options={"xatol": 1e-11})
            best_b = res.x if res.fun < objective(seed) else seed
        else:
            best_b = seed
        center = np.zeros(self.n)
        center[0] = best_b
        self._eps[optimize_center] = (objective(best_b), center)
        return self._eps[optimize_center]

    def deviation_mean_square(self, center) -> float:
        """Average square normal deviation over the boundary."""
        theta, w = self.profile.quadrature_rule()
        V = self.profile.value(theta)
        Vd = self.profile.slope(theta)
        dev = self._deviation(np.asarray(center).ravel()[0], theta, V, Vd)
        J = geometry.area_jacobian(V, Vd * Vd, self.n)
        return float(np.sum(w * J * dev**2) / np.sum(w * J))

    # -- transforms ------------------------------------------------------------------

    def scaled(self, s: float) -> "AxialDomain":
        prof = self.profile
        if prof.coeffs is not None:
            coeffs = s * prof.coeffs.copy()
            coeffs[0] += (s - 1.0) * math.sqrt(sphere_area(self.n))
            newp = AxialProfile(self.n, coeffs=coeffs, resolution=prof.resolution)
        else:
            f, fd, fdd = prof.callables
            sup = prof.support

            def guard(fn, outside=0.0):
                def wrapped(x):
                    x = np.asarray(x, dtype=float)
                    inside = x < sup
                    out = np.full_like(x, outside)
                    if inside.any():
                        out[inside] = fn(x[inside])
                    return out
                return wrapped

            gf, gfd, gfdd = guard(f), guard(fd), guard(fdd)
            newp = AxialProfile.from_callables(
                self.n, lambda x: s * gf(x) + (s - 1.0),
                lambda x: s * gfd(x), lambda x: s * gfdd(x),
                support=math.pi, breakpoints=prof.breakpoints + (sup,),
                resolution=prof.resolution)
        return AxialDomain(newp, tol=self.tol)

    def translated(self, shift) -> "AxialDomain":
        """Shift along the symmetry axis and re-parametrize radially."""
        b = float(np.asarray(shift).ravel()[0])
        prof = self.profile
        theta = prof.theta
        z1, z2 = np.cos(theta), np.sin(theta)
        t = np.full(theta.shape, 1.0 + float(np.mean(prof.value(theta))))
        for _ in range(60):
            p1, p2 = t * z1 + b, t * z2
            norm = np.hypot(p1, p2)
            ang = np.arctan2(p2, p1)
            g = norm - (1.0 + prof.value(ang))
            t = t - g
            if np.max(np.abs(g)) < 1e-14:
                break
        else:
            raise RuntimeError("axial re-centering did not converge")
        if np.min(t) <= 0:
            raise ValueError("translation destroys star-shapedness")
        newp = AxialProfile.from_values(self.n, theta, t - 1.0,
                                        degree=min(prof.resolution - 1, 256),
                                        resolution=prof.resolution)
        return AxialDomain(newp, tol=self.tol)
