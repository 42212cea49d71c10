import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from quermass.grids import (
    build_grid,
    monomial_sphere_integral,
    quadrature,
    sphere_area,
    tangent_frames,
)


@pytest.fixture(scope="module")
def grid3():
    return build_grid(3, 32)


@pytest.fixture(scope="module")
def grid4():
    return build_grid(4, 16)


def test_total_weight_s2(grid3):
    assert abs(grid3.weights.sum() - 4 * math.pi) < 1e-12


def test_total_weight_s3(grid4):
    assert abs(grid4.weights.sum() - 2 * math.pi**2) < 1e-10


def test_nodes_unit_norm(grid3, grid4):
    for g in (grid3, grid4):
        assert np.max(np.abs(np.linalg.norm(g.nodes, axis=1) - 1.0)) < 1e-14


def test_weights_positive(grid3, grid4):
    for g in (grid3, grid4):
        assert np.all(g.weights > 0)


def test_coordinate_square(grid3):
    # symmetry: integral of x_i^2 is |S^2|/3
    val = quadrature(grid3.nodes[:, 0] ** 2, grid3)
    assert abs(val - 4 * math.pi / 3) < 1e-10


@pytest.mark.parametrize("n,res", [(2, 8), (3, 8), (4, 6), (5, 5)])
def test_monomial_exactness(n, res):
    g = build_grid(n, res)
    rng = np.random.default_rng(20240801 + n)
    for _ in range(12):
        deg = rng.integers(0, min(g.exact_degree, 8) + 1)
        expo = rng.multinomial(deg, np.full(n, 1.0 / n))
        val = quadrature(np.prod(g.nodes**expo, axis=1), g)
        ref = monomial_sphere_integral(expo)
        assert abs(val - ref) <= 1e-10 * max(1.0, abs(ref))


def test_refinement_stability():
    # doubling resolution moves the integral of a fixed smooth field by < 1e-9
    f = lambda x: np.exp(x[:, 0]) * (1.0 + 0.3 * x[:, 1] ** 2)
    g1, g2 = build_grid(3, 24), build_grid(3, 48)
    v1 = quadrature(f(g1.nodes), g1)
    v2 = quadrature(f(g2.nodes), g2)
    assert abs(v1 - v2) < 1e-9 * abs(v2)


def test_rejects_bad_parameters():
    with pytest.raises(ValueError):
        build_grid(1, 16)
    with pytest.raises(ValueError):
        build_grid(3, 3)


@pytest.mark.parametrize("n,res", [(2, 8), (3, 10), (4, 6), (5, 5)])
def test_frames_orthonormal_tangent(n, res):
    g = build_grid(n, res)
    fr = tangent_frames(g)
    assert fr.shape == (g.num_nodes, n - 1, n)
    # tangency: frame rows orthogonal to the node vector
    dots = np.einsum("ikj,ij->ik", fr, g.nodes)
    assert np.max(np.abs(dots)) < 1e-12
    # orthonormality among rows
    gram = np.einsum("ikj,ilj->ikl", fr, fr)
    eye = np.eye(n - 1)
    assert np.max(np.abs(gram - eye)) < 1e-12


def test_exact_degree_declared(grid3):
    assert grid3.exact_degree == 63
    assert grid3.max_degree == 31
