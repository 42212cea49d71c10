import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from quermass import harmonics
from quermass.conjecture import (
    conjectured_bound,
    feasibility,
    green_ladder,
    green_sequence,
    make_backend,
    maximize_ratio,
    mean_laplacian,
    ratio,
    ratio_and_parts,
    reject_constant_laplacian,
    trivial_bound_margin,
)


@pytest.fixture(scope="module")
def backend3():
    return make_backend(3, 8)


def random_feasible(backend, seed, scale=0.1):
    rng = np.random.default_rng(seed)
    c = rng.standard_normal(backend.num_coeffs)
    c[backend.eigenvalues < 0.5] = 0.0
    mx = 1.0 - feasibility(backend, c)
    if mx > 0:
        c *= scale / mx
    return c


def test_degree_one_ratio_vanishes(backend3):
    c = np.zeros(backend3.num_coeffs)
    c[harmonics.flat_index(1, 0)] = 0.05
    assert abs(ratio(backend3, c)) < 1e-12


def test_circle_ratio_vanishes():
    backend = make_backend(2, 10)
    rng = np.random.default_rng(9)
    c = rng.standard_normal(backend.num_coeffs) * 0.05
    num, den = ratio_and_parts(backend, c)
    assert abs(num / den) < 1e-10


def test_feasibility_cases(backend3):
    c = np.zeros(backend3.num_coeffs)
    assert feasibility(backend3, c) == 1.0
    c = random_feasible(backend3, 3)
    mx = 1.0 - feasibility(backend3, c)
    c = c / mx  # rescale so max laplacian is exactly 1
    assert abs(feasibility(backend3, c)) < 1e-10


def test_trivial_bound_on_feasible_suite(backend3):
    for seed in range(40):
        c = random_feasible(backend3, 100 + seed, scale=0.99)
        assert trivial_bound_margin(backend3, c) >= -1e-8
        assert ratio(backend3, c) <= 1 + 1e-8


def test_ratio_homogeneity(backend3):
    c = random_feasible(backend3, 17)
    base = ratio(backend3, c)
    for t in (0.5, 0.25):
        assert abs(ratio(backend3, t * c) - t * base) < 1e-8


def test_mean_zero_laplacian(backend3):
    c = random_feasible(backend3, 23)
    assert abs(mean_laplacian(backend3, c)) < 1e-9


def test_constant_laplacian_rejected():
    with pytest.raises(ValueError):
        reject_constant_laplacian(1.0)
    reject_constant_laplacian(0.0)


def test_green_sequence_requires_dimension():
    with pytest.raises(ValueError):
        green_sequence(3, 8)


def test_green_sequence_positive_ratio():
    cand = green_sequence(4, 8)
    assert cand.ratio > 0
    assert cand.constraint_margin >= -1e-10
    assert cand.grad_norm_inf < 0.2


def test_green_ladder_gradient_decay():
    out = green_ladder(4, levels=(8, 16, 32))
    assert out["min_ratio"] > 0
    assert out["grad_nonincreasing_within_10pct"]
    assert out["grad_inf"][0] > 1.5 * out["grad_inf"][-1]


def test_maximize_circle_is_null():
    out = maximize_ratio(2, basis_cap=6, restarts=2, seed=3, iterations=80)
    assert abs(out["best"].ratio) <= 1e-8
    assert out["best"].meta["gradient_check_max_rel"] <= 1e-5


def test_maximize_small_search_feasible():
    out = maximize_ratio(3, basis_cap=6, restarts=2, seed=4, iterations=120)
    best = out["best"]
    assert best.constraint_margin >= -1e-8
    assert best.ratio <= 1 + 1e-8
    assert best.ratio > 0
    assert best.meta["gradient_check_max_rel"] <= 1e-5
