"""Christoffel kernels, the LP sup oracle, the polynomial family verifier,
point classification, and the disk-functional optimizer.

Reference values were computed independently with 100-digit arithmetic
(mpmath) and frozen here.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from projhull.curves import PoleSeriesParams, build_curve, omega_full, unit_circle_curve
from projhull.hullscan import (
    DegreeCapError,
    DiskFamilySpec,
    GridSlice,
    HullScanOptions,
    OptimizerOpts,
    chart_closed_form,
    christoffel_lambda,
    classify_grid,
    classify_point,
    disk_lower_bound,
    exact_kernel_profile,
    gram_build,
    infinity_chart_polynomial,
    kernel_optimizer_coeffs,
    log_abs_pn,
    log_abs_pn_on_curve,
    monomial_basis,
    pn_polynomial,
    pole_fiber_value,
    sup_extremal_lp,
    verify_theorem3,
)
from projhull.polyring import eval_poly

# frozen 100-digit references
LAMBDA24_AT_2 = 2.01202274545028
LAMBDA24_ON_CIRCLE = 1.06935954481312
P1_AT_00 = 0.01075565650424060
CHART_P1_AT_1_0 = -1.03226696951272
ROOT60_AT_0_1 = -0.02036167368545
ROOT60_AT_HALF_I_2 = 0.10463164025153


def test_monomial_basis_counts():
    assert len(monomial_basis(1, 5)) == 6
    assert len(monomial_basis(2, 4)) == 15  # C(6, 2)
    b = monomial_basis(2, 3)
    assert b == sorted(b)


def test_gram_on_circle_is_identity(circle512):
    G = gram_build(circle512, 8)
    assert np.allclose(G.matrix, np.eye(G.dim), atol=1e-13)
    assert G.evals.min() > 0.99


def test_degree_cap(circle512):
    with pytest.raises(DegreeCapError):
        gram_build(circle512, 200)


def test_christoffel_circle_references(circle512):
    G = gram_build(circle512, 24)
    _, lam2 = christoffel_lambda([2.0], G)
    assert abs(lam2 - LAMBDA24_AT_2) < 0.005 * LAMBDA24_AT_2
    K0, lam0 = christoffel_lambda([0.0], G)
    assert abs(K0 - 1.0) < 1e-12
    _, lamc = christoffel_lambda([np.exp(0.7j)], G)
    assert abs(lamc - LAMBDA24_ON_CIRCLE) < 0.005 * LAMBDA24_ON_CIRCLE


def test_kernel_optimizer_is_extremal(circle512):
    # the reproducing coefficients have unit quadrature norm and realize
    # |P(z)|^2 = K_d(z, z)
    G = gram_build(circle512, 10)
    z = [1.7 - 0.4j]
    K, _ = christoffel_lambda(z, G)
    q = kernel_optimizer_coeffs(z, G)
    V = np.array(
        [[pt[0] ** e[0] for e in G.basis] for pt in circle512.points], dtype=complex
    )
    norm2 = float(np.mean(np.abs(V @ q) ** 2))
    val2 = abs(np.dot(q, [z[0] ** e[0] for e in G.basis])) ** 2
    assert abs(norm2 - 1.0) < 1e-10
    assert abs(val2 - K) < 1e-8 * K


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_kernel_certificate_dominates_random_polys(seed):
    # K_d(z,z) >= |q(z)|^2 / ||q||^2_quad for every coefficient vector q
    circle = unit_circle_curve(256)
    G = gram_build(circle, 8)
    rng = np.random.default_rng(seed)
    q = rng.normal(size=G.dim) + 1j * rng.normal(size=G.dim)
    z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
    K, _ = christoffel_lambda([z], G)
    V = np.array([[pt[0] ** e[0] for e in G.basis] for pt in circle.points])
    norm2 = float(np.mean(np.abs(V @ q) ** 2))
    val2 = abs(np.dot(q, [z ** e[0] for e in G.basis])) ** 2
    assert val2 / norm2 <= K * (1.0 + 1e-8)


def test_sup_lp_oracle(circle512):
    assert abs(sup_extremal_lp([2.0], circle512, 1) - 2.0) < 0.005 * 2.0
    with pytest.raises(ValueError):
        sup_extremal_lp([2.0], circle512, 5)
    with pytest.raises(ValueError):
        sup_extremal_lp([2.0], circle512, 2, phases=8)


def test_sup_lp_below_kernel_root(circle512):
    for z in (0.5, 1.5, 2.0 + 1.0j):
        for d in (1, 2, 3):
            G = gram_build(circle512, d)
            K, _ = christoffel_lambda([z], G)
            phi = sup_extremal_lp([z], circle512, d)
            assert phi <= math.sqrt(K) * (1.0 + 1e-8)


# --- the explicit polynomial family --------------------------------------


def test_pn_vs_expanded_polynomial(params_std):
    for N in (1, 2, 4):
        P = pn_polynomial(params_std, N)
        for z, w in ((0.3 + 0.1j, 1.2), (2.0, -0.5j), (-1.0, 0.25)):
            direct = log_abs_pn(params_std, N, z, w)
            expanded = math.log(abs(eval_poly(P, (z, w))))
            assert abs(direct - expanded) < 1e-10
    with pytest.raises(ValueError):
        pn_polynomial(params_std, 13)


def test_p1_at_origin(params_std):
    P = pn_polynomial(params_std, 1)
    assert abs(eval_poly(P, (0.0, 0.0)) - P1_AT_00) < 1e-15


def test_log_abs_pn_rejects_pole(params_std):
    with pytest.raises(ValueError):
        log_abs_pn(params_std, 3, params_std.a(2), 1.0)


def test_remainder_form_matches_defining_form(params_std, curve_std):
    zs = curve_std.points[::512, 0]
    ws = curve_std.points[::512, 1]
    logs = log_abs_pn_on_curve(params_std, 3, zs)
    for k in range(len(zs)):
        direct = log_abs_pn(params_std, 3, zs[k], ws[k])
        # the defining form cancels ~tail/value digits; the remainder form
        # is the trustworthy one, so compare loosely
        assert abs(logs[k] - direct) < 1e-5 * max(1.0, abs(direct))


def test_remainder_form_handles_z_equals_1(params_rapid):
    # z = 1 sits at the accumulation point of the poles; the tail loop must
    # not divide by the double-rounded a_n == 1.0
    vals = log_abs_pn_on_curve(params_rapid, 10, np.array([1.0 + 0j]))
    assert np.isfinite(vals).all()


def test_pole_fiber_value(params_std):
    # N=2 fiber: -c_1 (a_1 - a_2) = +1/16, independent of w
    signs_logs = [pole_fiber_value(params_std, 2, 1, w) for w in (0.0, 1.0, 5.0j)]
    for sign, log_mag in signs_logs:
        assert sign == 1.0
        assert abs(math.exp(log_mag) - 0.0625) < 1e-15
    with pytest.raises(ValueError):
        pole_fiber_value(params_std, 2, 3, 0.0)


def test_root_limit_references(params_std):
    v1 = log_abs_pn(params_std, 60, 0.0, 1.0) / 61
    v2 = log_abs_pn(params_std, 60, 0.5j, 2.0) / 61
    assert abs(v1 - ROOT60_AT_0_1) < 1e-9
    assert abs(v2 - ROOT60_AT_HALF_I_2) < 1e-9


def test_infinity_chart_polynomial(params_std):
    for N in (1, 2, 3):
        Q = infinity_chart_polynomial(params_std, N)
        for w in (1.0, -2.0j, 0.75):
            assert abs(eval_poly(Q, (0.0, w)) - w) < 1e-12
        for t, w in ((0.5, 1.0), (-0.2 + 0.1j, 2.0)):
            want = chart_closed_form(params_std, N, t, w)
            assert abs(eval_poly(Q, (t, w)) - want) < 1e-10 * max(1.0, abs(want))
    assert abs(chart_closed_form(params_std, 1, 1.0, 0.0) - CHART_P1_AT_1_0) < 1e-12


def test_verify_suite_standard_small(params_std):
    rep = verify_theorem3(params_std, 12, m=1024)
    assert rep.all_pass
    assert not rep.z_equals_1_check["applicable"]
    obj = rep.to_json()
    assert obj["all_pass"] and obj["N_max"] == 12
    assert rep.failing() == []


def test_verify_suite_rapid_z1(params_rapid):
    rep = verify_theorem3(params_rapid, 16, m=1024)
    assert rep.z_equals_1_check["applicable"]
    assert rep.z_equals_1_check["pass"]
    assert rep.all_pass


def test_verify_suite_caps(params_std):
    with pytest.raises(ValueError):
        verify_theorem3(params_std, 200)
    with pytest.raises(ValueError):
        verify_theorem3(params_std, 10, m=256)


# --- classification -------------------------------------------------------


def test_classify_inside_and_outside(curve_std):
    inside = classify_point(np.array([0.0, 0.0]), curve_std, 12)
    assert inside.classification == "IN"
    assert "C_hat" in inside.certificate
    outside = classify_point(np.array([0.0, 0.5]), curve_std, 12)
    assert outside.classification == "OUT"
    assert outside.certificate["witness_family_N"] >= 1
    assert outside.certificate["lambda_ratio"] > 1.0


def test_classify_on_curve_point(curve_std):
    p = classify_point(curve_std.points[100], curve_std, 12)
    assert p.classification == "IN"


def test_profile_json(curve_std):
    p = classify_point(np.array([0.0, 0.0]), curve_std, 8)
    obj = p.to_json()
    assert obj["class"] == "IN"
    assert len(obj["degrees"]) == len(obj["lambda_hat"])


def test_grid_slice_validation():
    with pytest.raises(ValueError):
        GridSlice({}, 0, (0, 0, 1, 1), (600, 600))
    with pytest.raises(ValueError):
        GridSlice({0: 1.0}, 0, (0, 0, 1, 1), (4, 4))


def test_classify_grid_metadata(curve_std):
    spec = GridSlice({0: 0.0 + 0.0j}, 1, (-0.2, -0.2, 0.6, 0.2), (3, 2))
    report = classify_grid(spec, curve_std, 10)
    assert len(report.profiles) == 6
    cal = report.calibration
    assert cal["witness_family"] is True
    assert cal["in_slope"] == HullScanOptions().in_slope
    assert cal["out_slope"] == HullScanOptions().out_slope
    assert cal["witness_resolution"] == HullScanOptions().witness_resolution
    rows = report.heatmap_rows()
    assert len(rows) == 6
    obj = report.to_json()
    assert obj["d_max"] == 10 and len(obj["points"]) == 6


def test_exact_kernel_profile_diagnostic(params_std):
    prof = exact_kernel_profile(np.array([0.0, 0.0]), params_std, 6, m=256)
    assert prof["degrees"] == [2, 3, 4, 5, 6]
    assert all(l > 0 for l in prof["lambda_hat"])
    assert prof["precision_bits"] >= 2048
    with pytest.raises(ValueError):
        exact_kernel_profile(np.array([0.0]), params_std, 6, m=256)


# --- disk-functional optimizer -------------------------------------------


def test_family_spec_validation(params_std):
    with pytest.raises(ValueError):
        DiskFamilySpec((0.5,), (1.0, 2.0))
    with pytest.raises(ValueError):
        DiskFamilySpec((1.5,), (1.0,))
    with pytest.raises(ValueError):
        DiskFamilySpec((0.5,), (-1.0,))
    spec = DiskFamilySpec.from_params(params_std, 3)
    assert spec.count == 3
    assert spec.a_init == (0.5, 0.75, 0.875)


def test_disk_lower_bound_empty_family(curve_std):
    empty = DiskFamilySpec((), ())
    res = disk_lower_bound([0.0, 0.0], curve_std, 0.05, empty)
    assert not res.feasible
    res2 = disk_lower_bound([0.0, 0.0], curve_std, 2.0, empty)
    assert res2.feasible and res2.value == 0.0


def test_disk_lower_bound_deterministic(params_std, curve_std):
    family = DiskFamilySpec.from_params(params_std, 2)
    opts = OptimizerOpts(restarts=2, seed=7, maxiter=150)
    r1 = disk_lower_bound([0.0, 0.0], curve_std, 0.05, family, opts)
    r2 = disk_lower_bound([0.0, 0.0], curve_std, 0.05, family, opts)
    assert r1 == r2
    assert r1.feasible
    assert r1.value >= math.log(0.5) + math.log(0.75) - 1e-6
    with pytest.raises(ValueError):
        disk_lower_bound([0.0, 0.0], curve_std, -1.0, family, opts)
