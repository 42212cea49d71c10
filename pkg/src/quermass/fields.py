"""Scalar fields on S^{n-1} and their covariant derivatives.

A field holds node values on a grid, optionally spectral coefficients
(n = 3 full basis, n = 2 Fourier), optionally an analytic derivative
provider.  Derivatives are computed spectrally when coefficients are
available, analytically when a provider is attached, and by finite
differences on the tensor grid otherwise.

Gradients are returned either as ambient tangent vectors (N, n) or as
components in the per-node orthonormal chart frame (N, n-1); Hessians
are symmetric (n-1) x (n-1) matrices in that frame.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from quermass import harmonics
from quermass.grids import SphericalGrid, quadrature as _quad, tangent_frames


@dataclasses.dataclass
class ScalarField:
    """A function on the sphere: node values plus optional spectra."""

    grid: SphericalGrid
    values: np.ndarray
    coeffs: np.ndarray | None = None
    truncation: int | None = None
    analytic: object | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.num_nodes,):
            raise ValueError("values do not match the grid")

    @property
    def n(self) -> int:
        return self.grid.n

    def integral(self) -> float:
        return _quad(self.values, self.grid)


def constant_field(grid: SphericalGrid, value: float) -> ScalarField:
    return ScalarField(grid, np.full(grid.num_nodes, float(value)))


def quadrature(f: ScalarField) -> float:
    """Integral of the field over S^{n-1}."""
    return f.integral()


# -- per-node chart helper arrays -------------------------------------------

def node_angles(grid: SphericalGrid) -> tuple:
    """Per-node (sin(theta_1), cos(theta_1)) arrays for the n = 3 chart."""
    def build():
        shape = grid.shape
        theta = grid.angles[0]
        th = np.broadcast_to(theta[:, None], shape).ravel()
        return np.sin(th), np.cos(th)
    return grid.cache("polar_sin_cos", build)


# -- transforms --------------------------------------------------------------

def _circle_synth(grid, coeffs, dphi=0):
    K = coeffs.shape[0]
    L = (K - 1) // 2
    m_phi = grid.num_nodes
    F = np.zeros(m_phi // 2 + 1, dtype=complex)
    c0 = coeffs[0] / math.sqrt(2.0 * math.pi)
    sq = 1.0 / math.sqrt(math.pi)
    F[0] = c0 * m_phi if dphi == 0 else 0.0
    for m in range(1, L + 1):
        pc, ps = coeffs[2 * m - 1] * sq, coeffs[2 * m] * sq
        if dphi == 1:
            pc, ps = m * ps, -m * pc
        elif dphi == 2:
            pc, ps = -(m * m) * pc, -(m * m) * ps
        F[m] = (pc - 1j * ps) * (m_phi / 2.0)
    return np.fft.irfft(F, n=m_phi)


def _circle_analyze(grid, values, L):
    m_phi = grid.num_nodes
    A = np.fft.rfft(values)
    coeffs = np.zeros(2 * L + 1)
    coeffs[0] = A[0].real / m_phi * math.sqrt(2.0 * math.pi)
    for m in range(1, L + 1):
        coeffs[2 * m - 1] = 2.0 * A[m].real / m_phi * math.sqrt(math.pi)
        coeffs[2 * m] = -2.0 * A[m].imag / m_phi * math.sqrt(math.pi)
    return coeffs


def analyze(f: ScalarField, L: int | None = None) -> ScalarField:
    """Attach spectral coefficients up to degree L (defaults to grid max)."""
    grid = f.grid
    if L is None:
        L = grid.max_degree
    if L > grid.max_degree:
        raise ValueError(f"L={L} exceeds grid capability {grid.max_degree}")
    if grid.n == 3:
        coeffs = harmonics.sh_analyze(grid, f.values, L)
    elif grid.n == 2:
        coeffs = _circle_analyze(grid, f.values, L)
    else:
        raise ValueError(
            "spectral analysis on the full grid is implemented for n in {2, 3}; "
            "use the zonal machinery for higher dimensions"
        )
    return ScalarField(grid, f.values, coeffs=coeffs, truncation=L,
                       analytic=f.analytic)


def synthesize(coeffs: np.ndarray, grid: SphericalGrid) -> ScalarField:
    """Node values of a coefficient vector."""
    coeffs = np.asarray(coeffs, dtype=float)
    if grid.n == 3:
        values = harmonics.sh_synthesize(grid, coeffs)
        L = int(round(math.sqrt(coeffs.shape[0]))) - 1
    elif grid.n == 2:
        values = _circle_synth(grid, coeffs)
        L = (coeffs.shape[0] - 1) // 2
    else:
        raise ValueError("synthesis on the full grid requires n in {2, 3}")
    return ScalarField(grid, values, coeffs=coeffs, truncation=L)


def degree_eigenvalues(f: ScalarField) -> np.ndarray:
    """Eigenvalue of -Laplace for each flat coefficient index."""
    n, K = f.n, f.coeffs.shape[0]
    if n == 3:
        l = harmonics.degree_of_index(int(round(math.sqrt(K))) - 1)
    else:
        m = np.arange(K)
        l = (m + 1) // 2
    return l * (l + n - 2.0)


def split_frequencies(f: ScalarField, lam: float) -> tuple[ScalarField, ScalarField]:
    """Split into eigenspace components below / at-or-above the cutoff."""
    if lam <= 0:
        raise ValueError("frequency cutoff must be positive")
    if f.coeffs is None:
        raise ValueError("field must be analyzed before splitting")
    ev = degree_eigenvalues(f)
    low = np.where(ev < lam, f.coeffs, 0.0)
    high = np.where(ev >= lam, f.coeffs, 0.0)
    return synthesize(low, f.grid), synthesize(high, f.grid)


# -- derivative dispatch ------------------------------------------------------

def _chart_derivatives_spectral(f: ScalarField, second: bool):
    grid = f.grid
    c = f.coeffs
    if grid.n == 3:
        d = {}
        d["t"] = harmonics.sh_synthesize(grid, c, 1, 0)
        d["p"] = harmonics.sh_synthesize(grid, c, 0, 1)
        if second:
            d["tt"] = harmonics.sh_synthesize(grid, c, 2, 0)
            d["tp"] = harmonics.sh_synthesize(grid, c, 1, 1)
            d["pp"] = harmonics.sh_synthesize(grid, c, 0, 2)
        return d
    d = {"p": _circle_synth(grid, c, 1)}
    if second:
        d["pp"] = _circle_synth(grid, c, 2)
    return d


def _chart_derivatives_fd(f: ScalarField, second: bool):
    grid = f.grid
    shape = grid.shape
    vals = f.values.reshape(shape)
    d = {}
    if grid.n == 2:
        h = grid.angles[0][1] - grid.angles[0][0]
        d["p"] = ((np.roll(vals, -1) - np.roll(vals, 1)) / (2 * h)).ravel()
        if second:
            d["pp"] = ((np.roll(vals, -1) - 2 * vals + np.roll(vals, 1)) / h**2).ravel()
        return d
    if grid.n != 3:
        raise NotImplementedError(
            "finite-difference derivatives on the full tensor grid are "
            "implemented for n in {2, 3}; use zonal or analytic fields for n >= 4"
        )
    theta = grid.angles[0]
    h = grid.angles[1][1] - grid.angles[1][0]
    dt = np.gradient(vals, theta, axis=0)
    dp = (np.roll(vals, -1, axis=1) - np.roll(vals, 1, axis=1)) / (2 * h)
    d["t"], d["p"] = dt.ravel(), dp.ravel()
    if second:
        d["tt"] = np.gradient(dt, theta, axis=0).ravel()
        d["tp"] = ((np.roll(dt, -1, axis=1) - np.roll(dt, 1, axis=1)) / (2 * h)).ravel()
        d["pp"] = ((np.roll(vals, -1, axis=1) - 2 * vals + np.roll(vals, 1, axis=1))
                   / h**2).ravel()
    return d


def _chart(f: ScalarField, second: bool):
    if f.coeffs is not None:
        return _chart_derivatives_spectral(f, second)
    return _chart_derivatives_fd(f, second)


def grad_frame(f: ScalarField) -> np.ndarray:
    """Gradient components in the orthonormal chart frame, (N, n-1)."""
    if f.analytic is not None:
        return f.analytic.grad_frame(f.grid)
    d = _chart(f, second=False)
    if f.n == 2:
        return d["p"][:, None]
    s, _ = node_angles(f.grid)
    return np.stack([d["t"], d["p"] / s], axis=1)


def gradient(f: ScalarField) -> np.ndarray:
    """Ambient tangential gradient vectors, (N, n)."""
    frames = tangent_frames(f.grid)
    comp = grad_frame(f)
    return np.einsum("ik,ikj->ij", comp, frames)


def hessian_frame(f: ScalarField) -> np.ndarray:
    """Covariant Hessian in the orthonormal chart frame, (N, n-1, n-1)."""
    if f.analytic is not None:
        return f.analytic.hessian_frame(f.grid)
    if f.n == 2:
        d = _chart(f, second=True)
        return d["pp"][:, None, None]
    if f.n != 3:
        raise NotImplementedError(
            "full-grid Hessians are implemented for n in {2, 3}; "
            "zonal and analytic fields cover higher dimensions"
        )
    d = _chart(f, second=True)
    s, c = node_angles(f.grid)
    h = np.empty((f.grid.num_nodes, 2, 2))
    h[:, 0, 0] = d["tt"]
    h[:, 0, 1] = h[:, 1, 0] = d["tp"] / s - c * d["p"] / s**2
    h[:, 1, 1] = d["pp"] / s**2 + c / s * d["t"]
    return h


def laplacian(f: ScalarField) -> ScalarField:
    """Laplace-Beltrami of the field.

    Spectral fields use the exact eigenvalue action; analytic fields ask
    their provider; otherwise the chart-derivative trace is used.
    """
    if f.coeffs is not None:
        lap = -degree_eigenvalues(f) * f.coeffs
        out = synthesize(lap, f.grid)
        return out
    if f.analytic is not None:
        return ScalarField(f.grid, f.analytic.laplacian(f.grid))
    h = hessian_frame(f)
    return ScalarField(f.grid, np.trace(h, axis1=1, axis2=2))


def random_band_limited(grid: SphericalGrid, L: int, rng: np.random.Generator,
                        decay: float = -4.0, include_constant: bool = False,
                        l_min: int = 1) -> ScalarField:
    """Random smooth field: per-degree coefficient variance l^decay."""
    if grid.n != 3:
        raise ValueError("random full-basis fields are built for n = 3")
    coeffs = np.zeros(harmonics.coeff_count(L))
    for l in range(l_min, L + 1):
        block = rng.standard_normal(2 * l + 1) * (l ** (decay / 2.0))
        coeffs[l * l:(l + 1) ** 2] = block
    if include_constant:
        coeffs[0] = rng.standard_normal()
    return synthesize(coeffs, grid)
