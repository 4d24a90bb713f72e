"""Blaschke products, rational disk maps, the four conditions, and chi."""

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from projhull.curves import PoleSeriesParams, tail_bound
from projhull.disks import (
    BlaschkeProduct,
    DiskComponent,
    PoleTerm,
    RationalDiskMap,
    UnsupportedPoleError,
    blaschke_eval,
    blaschke_for,
    blaschke_log_center,
    check_conditions,
    chi_eval,
    disk_functional,
    diskmap_from_json,
    diskmap_to_json,
    eval_disk,
    example_family,
    g_product_bound,
    max_principle_check,
    membership_bound_check,
)
from projhull.polyring import ComplexPolynomial

# radii bounded away from 0 so the center product stays in the normal
# double range, where the summed-log identity holds at 1e-12
disk_zeros = st.builds(
    lambda r, t: r * cmath.exp(2j * math.pi * t),
    st.floats(1e-3, 0.95),
    st.floats(0.0, 1.0, exclude_max=True),
)


def test_blaschke_validation():
    with pytest.raises(ValueError):
        BlaschkeProduct((1.0,))
    with pytest.raises(ValueError):
        BlaschkeProduct((0.5, 1.2j))
    with pytest.raises(ValueError):
        blaschke_eval(BlaschkeProduct((0.5,)), 1.5)


def test_empty_product_is_one():
    B = BlaschkeProduct(())
    assert blaschke_eval(B, 0.3 + 0.1j) == 1.0
    assert blaschke_log_center(B) == 0.0


def test_zero_at_origin_center():
    assert blaschke_log_center(BlaschkeProduct((0.0, 0.5))) == -math.inf


@settings(max_examples=50, deadline=None)
@given(st.lists(disk_zeros, max_size=8), st.floats(0.0, 1.0, exclude_max=True))
def test_blaschke_boundary_modulus_and_center(zeros, t):
    B = BlaschkeProduct(tuple(zeros))
    zeta = cmath.exp(2j * math.pi * t)
    assert abs(abs(blaschke_eval(B, zeta)) - 1.0) <= 1e-10
    b0 = blaschke_eval(B, 0.0)
    want = blaschke_log_center(B)
    if want == -math.inf:
        assert b0 == 0
    else:
        assert abs(math.log(abs(b0)) - want) <= 1e-12


def test_pole_term_validation():
    with pytest.raises(ValueError):
        PoleTerm(1.0, 1.0)
    with pytest.raises(ValueError):
        PoleTerm(0.5, 1.0, order=0)
    with pytest.raises(ValueError):
        RationalDiskMap(2, (DiskComponent((0.0, 1.0)),))


def test_eval_disk_pole_fiber():
    f = RationalDiskMap(
        2,
        (
            DiskComponent((0.0, 1.0)),
            DiskComponent((0.0,), (PoleTerm(0.5, 0.25),)),
        ),
    )
    p = eval_disk(f, 0.5)
    assert p.at_infinity
    assert np.allclose(p.direction, [0.0, 0.25])
    q = eval_disk(f, 0.0)
    assert not q.at_infinity
    assert abs(q.affine[1] - 0.25 / (0.0 - 0.5)) < 1e-15


def test_example_family_centered_at_origin(params_std):
    f = example_family(params_std, 3)
    v = eval_disk(f, 0.0).affine
    assert abs(v[0]) < 1e-15 and abs(v[1]) < 1e-15
    assert abs(disk_functional(f) - sum(math.log(params_std.a(j)) for j in (1, 2, 3))) < 1e-14


def test_example_family_boundary_near_curve(params_std, curve_std):
    f = example_family(params_std, 4)
    rep = check_conditions(f, curve_std, r=0.1, z0=(0, 0), M=2.0, m_bdy=256)
    # the truncation leaves the boundary within the certified series tail
    assert rep.cond_i[0]
    assert rep.cond_i[1] < 10.0 * tail_bound(params_std, 4) + 1e-6
    assert rep.all_hold


def test_check_conditions_failure_modes(params_std, curve_std):
    f = example_family(params_std, 3)
    assert not check_conditions(f, curve_std, 1e-6, (0, 0), 2.0, m_bdy=256).cond_i[0]
    assert not check_conditions(f, curve_std, 0.1, (0.5, 0), 2.0, m_bdy=256).cond_ii[0]
    assert not check_conditions(f, curve_std, 0.1, (0, 0), 1.0, m_bdy=256).cond_iii[0]
    g = RationalDiskMap(
        2,
        (
            DiskComponent((0.0, 1.0)),
            DiskComponent((0.0,), (PoleTerm(0.5, 0.1, order=2),)),
        ),
    )
    rep = check_conditions(g, curve_std, 10.0, (0, 0.4), 2.0, m_bdy=256)
    assert not rep.cond_iv[0]
    with pytest.raises(ValueError):
        check_conditions(f, curve_std, 0.1, (0, 0), 2.0, m_bdy=64)


def test_center_identity_implies_claim(params_std, curve_std):
    # whenever condition (iii) passes with budget M, the Blaschke center
    # identity gives |B(0)| = exp(sum log a_j) >= e^-M
    for n in (1, 2, 3, 5):
        f = example_family(params_std, n)
        B = blaschke_for(f)
        for M in (0.5, 1.2, 2.0):
            rep = check_conditions(f, curve_std, 0.5, (0, 0), M, m_bdy=256)
            if rep.cond_iii[0]:
                assert abs(blaschke_eval(B, 0.0)) >= math.exp(-M) - 1e-15


def test_chi_extends_across_poles(params_std):
    f = example_family(params_std, 2)
    B = blaschke_for(f)
    # P(z, w) = w has a degree-1 pole along the fiber; with d = 1 the
    # Blaschke factor cancels it exactly and the extension is finite
    P = ComplexPolynomial(2, {(0, 1): 1.0})
    d = 1
    pole = params_std.a(1)
    at_pole = chi_eval(P, d, f, B, pole)
    near = chi_eval(P, d, f, B, pole + 1e-7)
    assert math.isfinite(at_pole)
    assert abs(at_pole - near) < 1e-3
    with pytest.raises(ValueError):
        chi_eval(P, 0, f, B, 0.1)  # P.degree exceeding d is rejected


def test_chi_matches_direct_formula(params_std):
    f = example_family(params_std, 2)
    B = blaschke_for(f)
    P = ComplexPolynomial(2, {(1, 0): 1.0, (0, 1): 2.0})
    zeta = 0.3 + 0.2j
    direct = math.log(
        abs(
            eval_disk(f, zeta).affine[0] + 2.0 * eval_disk(f, zeta).affine[1]
        )
    ) + 1 * math.log(abs(blaschke_eval(B, zeta)))
    assert abs(chi_eval(P, 1, f, B, zeta) - direct) < 1e-12


def test_chi_requires_matching_blaschke(params_std):
    f = example_family(params_std, 2)
    wrong = BlaschkeProduct((0.1,))
    with pytest.raises(ValueError):
        chi_eval(ComplexPolynomial(2, {(0, 1): 1.0}), 1, f, wrong, 0.2)


def test_max_principle_simple_case(params_std):
    f = example_family(params_std, 2)
    B = blaschke_for(f)
    P = ComplexPolynomial(2, {(1, 0): 1.0})  # chi = log|zeta| + d log|B|
    interior, boundary, ok = max_principle_check(P, 2, f, B, grid=(64, 64), m_bdy=512)
    assert ok
    assert interior <= boundary + 1e-8
    with pytest.raises(ValueError):
        max_principle_check(P, 2, f, B, grid=(32, 64))


def test_membership_bound_check(params_std):
    f = example_family(params_std, 2)
    B = blaschke_for(f)
    P = ComplexPolynomial(2, {(0, 1): 1.0})
    ok, lhs, rhs = membership_bound_check(P, 2, f, B, 0.3, sup_on_tube=2.0)
    assert ok and lhs <= rhs * (1 + 1e-12)
    with pytest.raises(ValueError):
        membership_bound_check(P, 2, f, B, params_std.a(1))


def test_g_product_bound(params_std):
    f = example_family(params_std, 2)
    B = blaschke_for(f)
    gb = g_product_bound(f, B, m_bdy=512, grid=(64, 64))
    assert gb.max_principle_ok
    assert gb.interior_max <= gb.boundary_sup + 1e-8
    assert len(gb.pole_values) == 2


def test_diskmap_json_round_trip(params_std):
    f = example_family(params_std, 3)
    back = diskmap_from_json(diskmap_to_json(f))
    assert back.n == f.n
    for c1, c2 in zip(back.components, f.components):
        assert c1.poly == c2.poly
        assert c1.poles == c2.poles
