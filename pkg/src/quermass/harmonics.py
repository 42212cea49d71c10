"""Real spherical-harmonic bases.

n = 3 gets the full real basis Y_{l,m} built from fully-normalized
associated Legendre functions (stable three-term recurrences, no
Condon-Shortley phase).  General n >= 3 gets the zonal (Gegenbauer)
basis for fields depending only on the polar angle.  Basis functions
are unit-normalized against the surface measure.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np
from scipy.special import eval_gegenbauer, gammaln

from quermass.grids import sphere_area


def eigenvalue(l: int, n: int) -> float:
    """Laplace-Beltrami eigenvalue of degree-l harmonics on S^{n-1}."""
    return float(l * (l + n - 2))


def multiplicity(l: int, n: int) -> int:
    """Dimension of the degree-l harmonic eigenspace on S^{n-1}.

    Homogeneous degree-l polynomials minus the degree l-2 ones.
    """
    if l == 0:
        return 1
    if n == 2:
        return 2
    lower = math.comb(n + l - 3, l - 2) if l >= 2 else 0
    return math.comb(n + l - 1, l) - lower


@dataclasses.dataclass(frozen=True)
class HarmonicBasis:
    """Degree bookkeeping for the harmonic decomposition on S^{n-1}."""

    n: int
    L: int

    @property
    def eigenvalues(self) -> np.ndarray:
        l = np.arange(self.L + 1)
        return l * (l + self.n - 2.0)

    @property
    def multiplicities(self) -> np.ndarray:
        return np.array([multiplicity(l, self.n) for l in range(self.L + 1)])


# ---------------------------------------------------------------------------
# n = 3: fully-normalized associated Legendre tables
# ---------------------------------------------------------------------------

def legendre_tables(L: int, t: np.ndarray, derivatives: int = 2):
    """Normalized associated Legendre values and theta-derivatives.

    Returns (Q, dQ, d2Q), each of shape (L+1, L+1, len(t)) with entry
    [l, m] the function N_l^m P_l^m(t); entries with m > l are zero.
    Normalization: 2*pi * integral of Q_{l,m}^2 dt = 1, so that the real
    basis built below is orthonormal on S^2.

    Requires |t| < 1 (the Gauss nodes exclude the poles).
    """
    t = np.asarray(t, dtype=float)
    s = np.sqrt(1.0 - t * t)
    nt = t.shape[0]
    Q = np.zeros((L + 1, L + 1, nt))
    Q[0, 0] = math.sqrt(1.0 / (4.0 * math.pi))
    for m in range(1, L + 1):
        Q[m, m] = Q[m - 1, m - 1] * s * math.sqrt((2 * m + 1) / (2.0 * m))
    for m in range(L):
        Q[m + 1, m] = Q[m, m] * t * math.sqrt(2 * m + 3.0)
        for l in range(m + 2, L + 1):
            a = math.sqrt((4.0 * l * l - 1.0) / (l * l - m * m))
            a_prev = math.sqrt((4.0 * (l - 1) ** 2 - 1.0) / ((l - 1) ** 2 - m * m))
            Q[l, m] = a * (t * Q[l - 1, m] - Q[l - 2, m] / a_prev)
    if derivatives == 0:
        return Q, None, None

    dQ = np.zeros_like(Q)
    for m in range(L + 1):
        for l in range(m, L + 1):
            b = math.sqrt((l * l - m * m) * (2.0 * l + 1.0) / (2.0 * l - 1.0)) if l > m else 0.0
            low = Q[l - 1, m] if l > m else 0.0
            dQ[l, m] = (l * t * Q[l, m] - b * low) / s
    if derivatives == 1:
        return Q, dQ, None

    # second derivative from the associated Legendre ODE
    d2Q = np.zeros_like(Q)
    cot = t / s
    for m in range(L + 1):
        for l in range(m, L + 1):
            d2Q[l, m] = -cot * dQ[l, m] - (l * (l + 1.0) - m * m / (s * s)) * Q[l, m]
    return Q, dQ, d2Q


def coeff_count(L: int) -> int:
    return (L + 1) ** 2


def degree_of_index(L: int) -> np.ndarray:
    """Degree l of each flat coefficient index (n = 3 layout)."""
    idx = np.arange(coeff_count(L))
    return np.floor(np.sqrt(idx)).astype(int)


def flat_index(l: int, m_index: int) -> int:
    """Flat position of (degree l, within-degree index m_index).

    m_index enumerates [m=0, cos 1, sin 1, ..., cos l, sin l], 0..2l.
    """
    if not 0 <= m_index <= 2 * l:
        raise ValueError(f"m_index {m_index} out of range for degree {l}")
    return l * l + m_index


def _m_slices(L: int):
    """Per-order gather indices into the flat coefficient vector.

    For each m: (cos indices over l = max(m,1*)..L, sin indices); m = 0
    has only the "cos" list (the zonal line).
    """
    cos_idx, sin_idx = [], []
    for m in range(L + 1):
        if m == 0:
            cos_idx.append(np.array([l * l for l in range(L + 1)]))
            sin_idx.append(None)
        else:
            cos_idx.append(np.array([l * l + 2 * m - 1 for l in range(m, L + 1)]))
            sin_idx.append(np.array([l * l + 2 * m for l in range(m, L + 1)]))
    return cos_idx, sin_idx


def sh_tables_for_grid(grid, L: int):
    """Legendre tables at the grid's polar nodes, cached on the grid."""
    if grid.n != 3:
        raise ValueError("full spherical-harmonic stack is built for n = 3 only")
    if L > grid.max_degree:
        raise ValueError(
            f"truncation L={L} exceeds grid capability {grid.max_degree}"
        )

    def build():
        t = grid.axis_nodes[0]
        Q, dQ, d2Q = legendre_tables(L, t)
        return {"tables": (Q, dQ, d2Q), "slices": _m_slices(L)}

    return grid.cache(("sh", L), build)


_SQRT2 = math.sqrt(2.0)


def sh_synthesize(grid, coeffs: np.ndarray, dtheta: int = 0, dphi: int = 0) -> np.ndarray:
    """Evaluate a coefficient vector (or its chart derivative) at grid nodes.

    dtheta in {0,1,2} selects the Legendre table; dphi in {0,1,2} applies
    the d/dphi action on the (cos, sin) pairs.  Returns (N,) node values.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    L = int(round(math.sqrt(coeffs.shape[0]))) - 1
    if coeff_count(L) != coeffs.shape[0]:
        raise ValueError("coefficient vector length is not a perfect square")
    data = sh_tables_for_grid(grid, L)
    Q = data["tables"][dtheta]
    cos_idx, sin_idx = data["slices"]
    n_theta = len(grid.axis_nodes[0])
    m_phi = len(grid.angles[1])

    F = np.zeros((n_theta, m_phi // 2 + 1), dtype=complex)
    for m in range(L + 1):
        table = Q[m:, m, :]  # (L+1-m, n_theta)
        pc = coeffs[cos_idx[m]] @ table
        ps = coeffs[sin_idx[m]] @ table if m > 0 else np.zeros(n_theta)
        if m > 0:
            pc, ps = _SQRT2 * pc, _SQRT2 * ps
        if dphi == 1:
            pc, ps = m * ps, -m * pc
        elif dphi == 2:
            pc, ps = -(m * m) * pc, -(m * m) * ps
        if m == 0:
            F[:, 0] = pc * m_phi
        else:
            F[:, m] = (pc - 1j * ps) * (m_phi / 2.0)
    values = np.fft.irfft(F, n=m_phi, axis=1)
    return values.ravel()


def sh_analyze(grid, values: np.ndarray, L: int) -> np.ndarray:
    """Forward transform: flat coefficient vector from node values."""
    data = sh_tables_for_grid(grid, L)
    Q = data["tables"][0]
    cos_idx, sin_idx = data["slices"]
    n_theta = len(grid.axis_nodes[0])
    m_phi = len(grid.angles[1])
    w = grid.axis_weights[0]

    A = np.fft.rfft(np.asarray(values, dtype=float).reshape(n_theta, m_phi), axis=1)
    coeffs = np.zeros(coeff_count(L))
    for m in range(L + 1):
        table = Q[m:, m, :]  # (L+1-m, n_theta)
        if m == 0:
            a0 = A[:, 0].real / m_phi
            coeffs[cos_idx[0]] = 2.0 * math.pi * (table @ (w * a0))
        else:
            am = 2.0 * A[:, m].real / m_phi
            bm = -2.0 * A[:, m].imag / m_phi
            coeffs[cos_idx[m]] = math.pi * _SQRT2 * (table @ (w * am))
            coeffs[sin_idx[m]] = math.pi * _SQRT2 * (table @ (w * bm))
    return coeffs


def sh_values_at_points(coeffs: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Evaluate an n=3 coefficient vector at arbitrary unit vectors.

    Used for off-grid needs (rotating a profile, re-centering a domain).
    """
    coeffs = np.asarray(coeffs, dtype=float)
    L = int(round(math.sqrt(coeffs.shape[0]))) - 1
    pts = np.asarray(points, dtype=float)
    t = np.clip(pts[:, 0], -1.0, 1.0)
    phi = np.arctan2(pts[:, 2], pts[:, 1])
    # guard the poles: Legendre recurrences divide by sin(theta) only in
    # derivative tables, values are safe, but keep |t| slightly inside.
    t = np.clip(t, -1.0 + 1e-15, 1.0 - 1e-15)
    Q, _, _ = legendre_tables(L, t, derivatives=0)
    cos_idx, sin_idx = _m_slices(L)
    out = coeffs[cos_idx[0]] @ Q[:, 0, :]
    for m in range(1, L + 1):
        table = Q[m:, m, :]
        pc = coeffs[cos_idx[m]] @ table
        ps = coeffs[sin_idx[m]] @ table
        out = out + _SQRT2 * (pc * np.cos(m * phi) + ps * np.sin(m * phi))
    return out


# ---------------------------------------------------------------------------
# general n: zonal (Gegenbauer) basis
# ---------------------------------------------------------------------------

class ZonalBasis:
    """Orthonormal zonal harmonics Z_l(t), t = cos(theta), on S^{n-1}.

    Z_l(x . axis) is the unit-normalized degree-l zonal harmonic; the
    basis diagonalizes the Laplace-Beltrami operator on zonal fields
    with eigenvalues l(l+n-2).
    """

    def __init__(self, n: int, L: int):
        if n < 3:
            raise ValueError("zonal basis requires n >= 3")
        self.n = n
        self.L = L
        self.alpha = (n - 2) / 2.0
        l = np.arange(L + 1)
        # squared L^2([-1,1], (1-t^2)^{alpha-1/2}) norm of C_l^{(alpha)}
        a = self.alpha
        log_h = (
            math.log(math.pi) + (1.0 - 2.0 * a) * math.log(2.0)
            + gammaln(l + 2.0 * a) - gammaln(l + 1.0)
            - np.log(l + a) - 2.0 * gammaln(a)
        )
        self.norms = np.sqrt(sphere_area(n - 1) * np.exp(log_h))
        self.eigenvalues = l * (l + n - 2.0)

    def values(self, t: np.ndarray, derivative: int = 0) -> np.ndarray:
        """Matrix Z^{(derivative)}_l(t), shape (L+1, len(t)).

        derivative counts d/dt applications (not d/dtheta).
        """
        t = np.asarray(t, dtype=float)
        a = self.alpha
        out = np.zeros((self.L + 1, t.shape[0]))
        for l in range(self.L + 1):
            if derivative == 0:
                v = eval_gegenbauer(l, a, t)
            elif derivative == 1:
                v = 2.0 * a * eval_gegenbauer(l - 1, a + 1.0, t) if l >= 1 else 0.0
            elif derivative == 2:
                v = (4.0 * a * (a + 1.0) * eval_gegenbauer(l - 2, a + 2.0, t)
                     if l >= 2 else 0.0)
            else:
                raise ValueError("derivative order must be 0, 1 or 2")
            out[l] = v / self.norms[l]
        return out
