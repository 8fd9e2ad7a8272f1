import json
import math
import os
import subprocess

import _zetalab as z


def test_grid_reference_configuration():
    grid = z.build_grid(z.GridParams(log_t=1e4, k=2.0, cutoff=2.0))
    assert grid.capital_l == 4
    assert math.isclose(grid.beta(1), 0.01, rel_tol=1e-12)
    assert math.isclose(grid.c(1), 1.2022644346174131, rel_tol=1e-10)
    barriers = z.barrier_bounds(grid)
    assert len(barriers.lower) == 4
    doc = json.loads(grid.to_json())
    assert doc["capital_l"] == 4


def test_lambda0_and_bessel():
    lam = z.solve_lambda0()
    assert round(lam, 4) == 0.4912
    assert abs(math.exp(-lam) - lam - lam * lam / 2) < 1e-12
    assert math.isclose(z.bessel_i0(0.5), 1.0634833707413236, rel_tol=1e-9)


def test_sieve_and_weighted_sums():
    table = z.sieve_primes(10000)
    assert table.count() == 1229
    small = z.sieve_primes(10)
    value, terms, _ = z.weighted_prime_sum(small, 0.5)
    assert terms == 4
    assert math.isclose(value, 2.1096351188853584, rel_tol=1e-12)
    assert math.isclose(z.mertens_log_sum(small, 10.0), 1.312652433140255, rel_tol=1e-12)


def test_zeta_half_line():
    point = z.zeta_half_line(0.0)
    assert abs(point.value.real + 1.4603545088095868) < 1e-8
    assert abs(z.zeta_half_line(14.134725).value) < 1e-4
    assert z.zeta_half_line(1e5).method == "riemann_siegel"


def test_partial_sum_matches_model_at_zero_phases():
    table = z.sieve_primes(100)
    spec = z.DirichletPolySpec.free_standing(math.log(100.0), None)
    direct = z.partial_sum(spec, table, 0.0)
    model = z.model_partial_sum(spec, table, z.PhaseAssignment.constant_phase(0.0))
    assert math.isclose(direct, model, rel_tol=1e-13)


def test_indicator_poly_sandwich():
    poly = z.build_indicator_poly(3.0, 5, 30.0)
    points, lower, upper, excess = z.validate_sandwich(poly, 2000)
    assert (lower, upper) == (0, 0)
    assert excess == 0.0
    assert poly.degree_ceiling_ok() and poly.coeff_ceiling_ok()
    inside = poly.eval_squared(1.0 / 6.0)
    assert abs(inside - 1.0) < 1e-9


def test_run_experiment_roundtrip():
    ok, body = z.run_experiment("grid", json.dumps({"log_t": 1e4, "cutoff": 2.0, "k": 2.0}), 1, 1)
    assert ok
    assert json.loads(body)["capital_l"] == 4


def test_torus_box_probability():
    value, err = z.torus_box_probability([0.7], -0.7, 0.7)
    assert math.isclose(value, 1.0, abs_tol=1e-9)
    half, _ = z.torus_box_probability([0.7], 0.0, 0.7)
    assert math.isclose(half, 0.5, abs_tol=1e-9)


def test_cli_binary_runs():
    lab = os.path.join(os.environ.get("ZETALAB_BIN", ""), "lab")
    if not os.path.exists(lab):
        import pytest
        pytest.skip("lab binary not on ZETALAB_BIN")
    out = subprocess.run(
        [lab, "grid", "--param", "log_t=10000", "--param", "cutoff=2.0", "--param", "k=2.0"],
        capture_output=True, text=True, check=True)
    doc = json.loads(out.stdout)
    assert doc["results"]["capital_l"] == 4
    bad = subprocess.run([lab, "grid", "--param", "nonsense=1"], capture_output=True, text=True)
    assert bad.returncode == 2
    assert "unknown parameter" in bad.stderr
