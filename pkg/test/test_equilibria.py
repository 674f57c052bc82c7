#!/usr/bin/env python
# -*- coding: utf-8 -*-

import numpy as np
import pytest

from frozen_orbits.common import G_of_Z, xhat
from frozen_orbits.equilibria import (ebar_coordinates, enumerate_equilibria, family_of, find_ebar,
                                      find_tangency_equilibria, level_curve, polynomial_tangency_G, s_minus,
                                      s_plus, tangency_roots, vector_field_residual)
from frozen_orbits.model import ModelParams, PhysicalUnits


def _by_label(equilibria):
    return {eq.label: eq for eq in equilibria}


def test_j2_frozen_orbit_values(j2_params):
    equilibria = enumerate_equilibria(j2_params)
    assert len(equilibria) == 4
    found = _by_label(equilibria)
    assert sorted(found) == ['E1', 'E2', 'E3', 'E4']
    assert found['E3'].kind == 'Eplus'
    assert found['E4'].kind == 'Eminus'
    assert found['E3'].G_value == pytest.approx(0.4424, abs=5e-4)
    assert found['E4'].G_value == pytest.approx(0.4512, abs=5e-4)
    assert found['E1'].G_value == pytest.approx(0.2)
    assert found['E2'].G_value == 1.0


@pytest.mark.parametrize('rho', [0.6, 0.9])
def test_j2_far_from_critical_inclination(rho):
    equilibria = enumerate_equilibria(ModelParams('j2', rho, 0.001))
    assert [eq.kind for eq in equilibria] == ['E1', 'E2']


def test_equilibria_are_fixed_points(any_params):
    for eq in enumerate_equilibria(any_params, classify=False):
        assert eq.stability is None
        assert vector_field_residual(any_params, eq) < 1e-9


def test_tangencies_are_zeros_of_s(j2_params):
    for Z, degenerate in tangency_roots(j2_params, 1):
        assert not degenerate
        assert abs(s_plus(j2_params, Z)) < 1e-8
    for Z, _ in tangency_roots(j2_params, -1):
        assert abs(s_minus(j2_params, Z)) < 1e-8


@pytest.mark.parametrize('route', ['printed', 'numerator'])
def test_polynomial_route_agrees(j2_params, route):
    numeric = sorted(eq.G_value for eq in enumerate_equilibria(j2_params, classify=False) if eq.kind == 'Eplus')
    assert polynomial_tangency_G(j2_params, 1, route) == pytest.approx(numeric, rel=1e-8)
    numeric = sorted(eq.G_value for eq in enumerate_equilibria(j2_params, classify=False) if eq.kind == 'Eminus')
    assert polynomial_tangency_G(j2_params, -1, route) == pytest.approx(numeric, rel=1e-8)


def test_numerator_route_for_every_model(any_params):
    for kind, sign in (('Eplus', 1), ('Eminus', -1)):
        numeric = sorted(eq.G_value for eq in enumerate_equilibria(any_params, classify=False) if eq.kind == kind)
        roots = polynomial_tangency_G(any_params, sign, 'numerator')
        for G in numeric:
            assert min(abs(np.array(roots) - G)) < 1e-8


def test_ebar_absent_in_the_j2_problem():
    for lam in np.geomspace(1e-4, 0.3, 8):
        for rho in np.linspace(0.02, 0.98, 25):
            assert find_ebar(ModelParams('j2', float(rho), float(lam))) == []


@pytest.mark.slow
def test_ebar_absent_on_a_fine_j2_grid():
    for lam in np.geomspace(1e-5, 0.3, 200):
        for rho in np.linspace(0.005, 0.995, 200):
            params = ModelParams('j2', float(rho), float(lam))
            assert find_ebar(params) == [], params.to_dict()


@pytest.mark.parametrize('params', [
    ModelParams('j2', 0.2, 0.001),
    ModelParams('j4', 0.24, 0.001, j4=0.95),
    ModelParams('rel', 0.2, 0.001, jc=0.2),
])
def test_ebar_vertical_asymptote_closed_form(params):
    coords = ebar_coordinates(params)
    assert len(coords) == 1
    Zbar = coords[0][0]
    nf = params.normal_form()
    assert Zbar == pytest.approx(float(nf.ebar_G2(params.r)) - (1.0 + params.r) / 2.0, rel=1e-10)
    assert abs(float(nf.F(G_of_Z(Zbar, params.r), params.r))) < 1e-9 * nf.f_max(params.r)


@pytest.mark.parametrize('j4', [0.95, -0.6, -1.35, -3.0])
def test_every_admissible_ebar_root_gives_a_pair(j4):
    for rho in np.linspace(0.02, 0.5, 25):
        params = ModelParams('j4', float(rho), 0.001, j4=j4)
        admissible = [c for c in ebar_coordinates(params) if abs(c[0]) <= params.E and c[2] >= 0.0]
        pairs = find_ebar(params)
        assert len(pairs) == len(admissible)
        for (plus, minus), (Zbar, Xbar, _) in zip(pairs, admissible):
            assert plus.Z == minus.Z == Zbar
            assert plus.lemon.X == Xbar
            assert plus.lemon.Y == -minus.lemon.Y
        ebar = [eq for eq in enumerate_equilibria(params, classify=False) if eq.kind == 'Ebar']
        assert len(ebar) == 2 * len(pairs)


def test_level_curve_touches_contour_at_tangency(j2_params):
    nf = j2_params.normal_form()
    for eq in enumerate_equilibria(j2_params, classify=False):
        if eq.kind not in ('Eplus', 'Eminus'):
            continue
        k = float(nf.K(eq.lemon.X, eq.Z, j2_params.r))
        curve = level_curve(j2_params, k, [eq.Z])
        contour = curve['X_hat_plus'] if eq.kind == 'Eplus' else curve['X_hat_minus']
        assert curve['X_tilde'][0] == pytest.approx(contour[0], rel=1e-10, abs=1e-14)


def test_j2_families_are_principal(j2_params):
    for eq in enumerate_equilibria(j2_params, classify=False)[2:]:
        assert family_of(j2_params, eq) == 'principal'


def test_orbital_elements(j2_params):
    found = _by_label(enumerate_equilibria(j2_params))
    e3 = found['E3'].to_dict()
    assert e3['e'] == pytest.approx(np.sqrt(1.0 - e3['G'] ** 2))
    assert e3['i'] == pytest.approx(63.43, abs=1.0)
    assert e3['g_deg'] == pytest.approx(0.0)
    assert found['E4'].to_dict()['g_deg'] == pytest.approx(90.0)
    assert found['E1'].to_dict()['g_deg'] is None
    assert 'collisional' not in e3


def test_collision_annotation(j2_params):
    # planet radius close to the semi-major axis: every eccentric frozen orbit hits it
    phys = PhysicalUnits(mu=1.0, rp=0.5, a=1.0, j2=0.004)
    found = _by_label(enumerate_equilibria(j2_params))
    e3 = found['E3'].to_dict(phys)
    assert e3['perigee_radius'] == pytest.approx(1.0 - e3['e'])
    assert e3['collisional'] is True
    assert found['E2'].to_dict(phys)['collisional'] is False


def test_tangency_equilibria_sit_on_the_contour(j4_params):
    for eq in find_tangency_equilibria(j4_params):
        assert eq.lemon.Y == 0.0
        assert abs(eq.lemon.X) == pytest.approx(float(xhat(eq.Z, j4_params.r)))
        assert len(eq.xi_preimages) == 2
