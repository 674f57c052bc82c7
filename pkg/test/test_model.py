#!/usr/bin/env python
# -*- coding: utf-8 -*-

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from frozen_orbits.errors import DomainError, ModelError, UnitsError
from frozen_orbits.model import (ModelParams, PhysicalUnits, closed_form_dimensional, dimensionalize_threshold,
                                 eval_gf, eval_K_delaunay, get_normal_form, nondimensionalize)

# mu = a = 1 so that L = 1 and the nondimensional K is (K_dim + 1/2) / lambda
UNIT = dict(mu=1.0, a=1.0, rp=0.5, j2=0.004, j4=-1.3 * 0.004 ** 2, c=50.0)


@pytest.mark.parametrize('kwargs, error', [
    (dict(model='j2', rho=1.5, lam=0.001), DomainError),
    (dict(model='j2', rho=0.0, lam=0.001), DomainError),
    (dict(model='j2', rho=0.2, lam=1.5), ModelError),
    (dict(model='j2', rho=0.2, lam=0.001, j4=1.0), ModelError),
    (dict(model='j4', rho=0.2, lam=0.001), ModelError),
    (dict(model='j4', rho=0.2, lam=0.001, j4=7.0), ModelError),
    (dict(model='rel', rho=0.2, lam=0.001, jc=-0.1), ModelError),
    (dict(model='j6', rho=0.2, lam=0.001), ModelError),
])
def test_invalid_params(kwargs, error):
    with pytest.raises(error):
        ModelParams(**kwargs)


def test_rho_out_of_range_message():
    with pytest.raises(DomainError, match='rho out of range'):
        ModelParams('j2', 1.5, 0.001)


def test_derived_quantities():
    p = ModelParams('j4', -0.3, 0.001, j4=1.3)
    assert p.abs_rho == 0.3
    assert p.r == pytest.approx(0.09)
    assert p.E == pytest.approx(0.455)
    assert p.extra == 1.3
    assert p.with_rho(0.5).rho == 0.5
    assert p.to_dict() == {'model': 'j4', 'rho': -0.3, 'lambda': 0.001, 'j4': 1.3}
    assert ModelParams('j2', 0.3, 0.001).extra == 0.0


def test_normal_forms_are_shared():
    assert get_normal_form('j4', 0.001, 1.3) is get_normal_form('j4', 0.001, 1.3)
    assert ModelParams('rel', 0.2, 0.001, jc=0.2).normal_form().MODEL == 'rel'


def test_physical_units_validation():
    with pytest.raises(UnitsError):
        PhysicalUnits(mu=1.0, rp=2.0, a=1.0, j2=0.001)
    with pytest.raises(UnitsError):
        PhysicalUnits(mu=1.0, rp=0.5, a=1.0, j2=-0.001)
    with pytest.raises(UnitsError):
        PhysicalUnits(mu=0.0, rp=0.5, a=1.0, j2=0.001)


def test_physical_units_from_file(physical_file, tmp_path):
    phys = PhysicalUnits.from_file(physical_file)
    assert phys.j4 == pytest.approx(-1.6196e-6)
    assert phys.L == pytest.approx(np.sqrt(3.986004418e14 * 7.0e6))

    broken = tmp_path / 'broken.yaml'
    broken.write_text("mu: 1.0\n")
    with pytest.raises(UnitsError):
        PhysicalUnits.from_file(str(broken))
    with pytest.raises(UnitsError):
        PhysicalUnits.from_file(str(tmp_path / 'missing.yaml'))


def test_nondimensionalize(physical_file):
    phys = PhysicalUnits.from_file(physical_file)
    p = nondimensionalize(phys, 'j4', 0.3)
    assert p.lam == pytest.approx(1.08263e-3 * (6378137.0 / 7.0e6) ** 2)
    assert p.j4 == pytest.approx(1.6196e-6 / 1.08263e-3 ** 2)

    rel = nondimensionalize(PhysicalUnits(**UNIT), 'rel', 0.3)
    assert rel.lam == pytest.approx(0.001)
    assert rel.jc == pytest.approx(1.0 / (0.001 * 50.0 ** 2))

    with pytest.raises(UnitsError):
        nondimensionalize(phys, 'j2')
    with_h = PhysicalUnits(mu=1.0, rp=0.5, a=1.0, j2=0.004, h=0.25)
    assert nondimensionalize(with_h, 'j2').rho == pytest.approx(0.25)
    with pytest.raises(UnitsError):
        nondimensionalize(PhysicalUnits(mu=1.0, rp=0.5, a=1.0, j2=0.0), 'j4', 0.3)


def test_dimensionalize_threshold():
    phys = PhysicalUnits(mu=4.0, rp=0.5, a=1.0, j2=0.004)
    assert dimensionalize_threshold(0.4, phys) == pytest.approx(0.8)
    with pytest.raises(DomainError):
        dimensionalize_threshold(1.2, phys)


@pytest.mark.parametrize('model', ['j2', 'j4', 'rel'])
def test_dimensional_closed_form_agrees(model):
    phys = PhysicalUnits(**UNIT)
    p = nondimensionalize(phys, model, 0.3)
    assert p.lam == pytest.approx(0.001)
    for G in np.linspace(0.35, 0.95, 7):
        for g in (0.0, 0.4, 1.3):
            K = float(eval_K_delaunay(p, G, g))
            K_dim = float(closed_form_dimensional(phys, G, 0.3, g, model))
            assert K == pytest.approx((K_dim + 0.5) / p.lam, rel=1e-9)


@given(st.floats(0.05, 0.9), st.floats(-0.999, 0.999), st.floats(-1.0, 1.0))
def test_gf_matches_delaunay_chart(rho, z_frac, x_frac):
    p = ModelParams('j4', rho, 0.001, j4=0.7)
    Z = z_frac * p.E
    X = x_frac * (p.E ** 2 - Z ** 2)
    ev = eval_gf(p, Z)
    G = np.sqrt(Z + (1.0 + p.r) / 2.0)
    P = (G * G - p.r) * (1.0 - G * G)
    g_angle = 0.5 * np.arccos(np.clip(X / P, -1.0, 1.0)) if P > 0.0 else 0.0
    expected = float(eval_K_delaunay(p, G, g_angle))
    assert ev.K(P * np.cos(2.0 * g_angle)) == pytest.approx(expected, rel=1e-10, abs=1e-12)


def test_gf_derivatives_match_finite_differences(any_params):
    p = any_params
    Z, X, h = 0.1 * p.E, 0.01, 1e-6
    ev = eval_gf(p, Z)
    up, down = eval_gf(p, Z + h), eval_gf(p, Z - h)
    assert ev.K_Z(X) == pytest.approx((up.K(X) - down.K(X)) / (2.0 * h), rel=1e-6)
    assert ev.d2g_dZ2 == pytest.approx((up.dg_dZ - down.dg_dZ) / (2.0 * h), rel=1e-6)
    assert ev.d2f_dZ2 == pytest.approx((up.df_dZ - down.df_dZ) / (2.0 * h), rel=1e-5, abs=1e-12)


@given(st.sampled_from(['j2', 'j4', 'rel']), st.floats(0.05, 0.9), st.floats(0.01, 0.99))
def test_hamiltonian_is_linear_in_X(model, rho, g_frac):
    extra = {'j4': dict(j4=-1.3), 'rel': dict(jc=0.2)}.get(model, {})
    p = ModelParams(model, rho, 0.001, **extra)
    G = p.abs_rho + 0.5 * (1.0 - p.abs_rho)
    Z = G * G - (1.0 + p.r) / 2.0
    P = (G * G - p.r) * (1.0 - G * G)
    ev = eval_gf(p, Z)
    g_angle = g_frac * np.pi
    base = float(eval_K_delaunay(p, G, np.pi / 4.0))
    K = float(eval_K_delaunay(p, G, g_angle))
    assert base == pytest.approx(ev.g_val, rel=1e-12, abs=1e-14)
    assert K - base == pytest.approx(ev.f_val * P * np.cos(2.0 * g_angle), rel=1e-9, abs=1e-12)


@pytest.mark.parametrize('model, extra', [('j4', dict(j4=0.0)), ('rel', dict(jc=0.0))])
def test_extra_parameter_zero_gives_the_j2_problem(model, extra):
    for rho in (0.1, 0.45, 0.8):
        reduced = ModelParams(model, rho, 0.001, **extra)
        plain = ModelParams('j2', rho, 0.001)
        for z_frac in np.linspace(-0.95, 0.95, 9):
            Z = z_frac * plain.E
            a, b = eval_gf(reduced, Z), eval_gf(plain, Z)
            assert a.g_val == pytest.approx(b.g_val, rel=1e-12, abs=1e-12)
            assert a.f_val == pytest.approx(b.f_val, rel=1e-12, abs=1e-12)
            assert a.dg_dZ == pytest.approx(b.dg_dZ, rel=1e-12, abs=1e-12)
        nf, nf2 = reduced.normal_form(), plain.normal_form()
        for sign in (1, -1):
            assert nf.rho_crit(sign) == pytest.approx(nf2.rho_crit(sign), rel=1e-10)


@pytest.mark.parametrize('lam', np.geomspace(1e-5, 1e-2, 20))
def test_j2_tangency_branches_are_increasing(lam):
    nf = get_normal_form('j2', float(lam), 0.0)
    G = np.linspace(1e-3, 1.0, 10000)
    for sign in (1, -1):
        rho2 = nf.branch_rho2(sign, G)
        assert np.all(np.isfinite(rho2))
        assert np.all(np.diff(rho2) > 0.0)
