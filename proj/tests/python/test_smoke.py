"""Smoke tests for the python bindings."""

import math

import pytest

import transferop as t


def test_map_evaluation():
    spec = t.MapSpec.logistic()
    assert t.apply_map(spec, 0.5) == 1.0
    assert t.apply_map(spec, 0.0) == 0.0
    assert t.apply_map(spec, 0.25) == pytest.approx(0.75)
    with pytest.raises(Exception):
        t.apply_map(spec, 1.5)


def test_orbit_and_ensemble():
    spec = t.MapSpec.logistic()
    orbit = t.generate_orbit(spec, 0.5, 2, burn_in=0, seed=1)
    assert orbit.pairs == [(0.5, 1.0), (1.0, 0.0)]
    assert orbit.mode == "orbit"

    ens = t.generate_ensemble(spec, 500, seed=3)
    assert len(ens) == 500
    assert all(0.0 <= x <= 1.0 and 0.0 <= y <= 1.0 for x, y in ens.pairs)

    again = t.generate_ensemble(spec, 500, seed=3)
    assert ens.pairs == again.pairs


def test_truncated_normal():
    noise = t.NoiseSpec(0.1)
    assert t.truncated_normal_pdf(0.5, 0.5, noise) == pytest.approx(3.98942509, rel=1e-6)
    assert t.truncated_normal_pdf(1.2, 0.5, noise) == 0.0
    draws = t.sample_truncated_normal(0.5, noise, seed=9, count=2000)
    assert all(0.0 <= d <= 1.0 for d in draws)
    assert sum(draws) / len(draws) == pytest.approx(0.5, abs=0.02)


def test_histogram():
    h = t.hist_fit([0.1, 0.3, 0.6, 0.9], 2)
    assert h.counts == [2.0, 2.0]
    assert h.value(0.7) == 1.0
    assert t.bin_index(0.0, 10) == 1
    assert t.bin_index(1.0, 10) == 10

    consts = t.ub_constants()
    by_formula, by_argmin = t.hist_optimal_bin_count(
        10**6, consts["slope"], consts["density"]
    )
    assert by_argmin == 2503
    assert by_formula == 1986


def test_kde():
    kernel = t.KernelSpec.make("gaussian")
    kde = t.KdeDensity([0.5], 1.0, kernel)
    assert kde.value(0.5) == pytest.approx(1.0 / math.sqrt(2.0 * math.pi))

    consts = t.ub_constants()
    delta, rate = t.kde_optimal_bandwidth(
        10**6, consts["density"], consts["curvature"], kernel
    )
    assert delta == pytest.approx(0.0011, rel=0.1)
    assert rate == -0.2

    epan = t.KernelSpec.make("epanechnikov")
    assert epan.second_moment == pytest.approx(0.2)
    assert epan.roughness == pytest.approx(0.6)


def test_operator_and_stationary():
    spec = t.MapSpec.logistic()
    exact = t.ulam_matrix_exact(spec, 2)
    hi = math.sqrt(2.0) / 2.0
    assert exact.row(0) == pytest.approx([1.0 - hi, hi], abs=1e-3)

    result = t.leading_left_eigenvector(exact)
    assert result.converged and result.unique
    assert result.vector == pytest.approx([1.0 - hi, hi], abs=1e-3)
    assert t.stationary_to_density(result.vector, 2)[1] == pytest.approx(2 * hi, abs=2e-3)

    samples = t.generate_ensemble(spec, 50000, seed=2)
    counted = t.ulam_matrix_from_pairs(samples, 40)
    assert all(sum(counted.row(i)) == pytest.approx(1.0, abs=1e-12) for i in range(40))

    pushed = t.push_density(exact, [1.0, 0.0])
    assert pushed == pytest.approx([1.0 - hi, hi], abs=1e-3)


def test_exact_operator_fixed_point():
    spec = t.MapSpec.logistic()
    rho = t.ReferenceDensity.logistic_arcsine()
    for x in [0.1, 0.37, 0.62, 0.9]:
        assert t.apply_fp_exact(spec, rho.value, x) == pytest.approx(
            rho.value(x), rel=1e-10
        )


def test_evaluation_grid():
    grid = t.evaluation_grid()
    assert len(grid) == 100
    assert grid[0] == pytest.approx(0.01)
    assert grid[-1] == pytest.approx(0.99)
