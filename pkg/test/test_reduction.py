#!/usr/bin/env python
# -*- coding: utf-8 -*-

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from frozen_orbits.errors import AngleUndefined, ConstraintError, DomainError
from frozen_orbits.reduction import (DelaunayState, LemonState, XiState, delaunay_to_lemon, delaunay_to_xi,
                                     kepler_invariants, lemon_to_delaunay, lemon_to_xi, sigma_variables,
                                     sphere_radius, xi_to_delaunay, xi_to_lemon, xi_to_pi)

rhos = st.floats(0.02, 0.95)
fractions = st.floats(0.01, 0.99)
angles = st.floats(0.0, 2.0 * np.pi, exclude_max=True)


def _state(rho, frac, g):
    G = rho + frac * (1.0 - rho)
    return DelaunayState(G, g, rho)


@given(rhos, fractions, angles)
def test_chart_identities(rho, frac, g):
    s = _state(rho, frac, g)
    xi = delaunay_to_xi(s)
    assert xi.residual() < 1e-14
    lemon = xi_to_lemon(xi)
    assert lemon.residual() < 1e-14
    direct = delaunay_to_lemon(s)
    np.testing.assert_allclose([lemon.X, lemon.Y, lemon.Z], [direct.X, direct.Y, direct.Z], atol=1e-14)
    pi = xi_to_pi(xi)
    assert pi.residual() < 1e-12
    assert sigma_variables(pi)[1] == pytest.approx(s.G, rel=1e-12)


@given(rhos, fractions, angles)
def test_delaunay_roundtrip(rho, frac, g):
    s = _state(rho, frac, g)
    back = xi_to_delaunay(delaunay_to_xi(s))
    assert back.G == pytest.approx(s.G, rel=1e-10)
    assert np.cos(back.g_angle - s.g_angle) == pytest.approx(1.0, abs=1e-9)


@given(rhos, fractions, angles)
def test_lemon_preimages(rho, frac, g):
    s = _state(rho, frac, g)
    lemon = delaunay_to_lemon(s)
    preimages = lemon_to_xi(lemon)
    assert len(preimages) == 2
    for xi in preimages:
        assert xi.residual() < 1e-12
        image = xi_to_lemon(xi)
        np.testing.assert_allclose([image.X, image.Y, image.Z], [lemon.X, lemon.Y, lemon.Z], atol=1e-8)
    a, b = preimages
    assert (a.xi1, a.xi2) == (-b.xi1, -b.xi2)

    reps = lemon_to_delaunay(lemon)
    assert reps[1].g_angle - reps[0].g_angle == pytest.approx(np.pi)
    assert reps[0].G == pytest.approx(s.G, rel=1e-10)


def test_cusps():
    rho = 0.3
    E = sphere_radius(rho)
    for Z in (E, -E):
        cusp = LemonState(0.0, 0.0, Z, rho)
        assert cusp.at_cusp()
        assert lemon_to_xi(cusp) == [XiState(0.0, 0.0, Z, rho)]
        with pytest.raises(AngleUndefined):
            lemon_to_delaunay(cusp)
    with pytest.raises(AngleUndefined):
        xi_to_delaunay(XiState(0.0, 0.0, E, rho))


def test_off_lemon_points_are_rejected():
    rho = 0.3
    E = sphere_radius(rho)
    with pytest.raises(ConstraintError):
        lemon_to_xi(LemonState(0.5, 0.5, 0.0, rho))
    with pytest.raises(ConstraintError):
        lemon_to_xi(LemonState(0.0, 0.0, 1.1 * E, rho))


def test_delaunay_domain():
    with pytest.raises(DomainError):
        DelaunayState(0.2, 0.0, 0.3)
    with pytest.raises(DomainError):
        DelaunayState(1.01, 0.0, 0.3)



@given(rhos, fractions, angles, angles)
def test_kepler_invariants_on_unit_sphere(rho, frac, g, h):
    s = _state(rho, frac, g)
    x, y = kepler_invariants(s.G, g, h, rho)
    assert np.linalg.norm(x) == pytest.approx(1.0, abs=1e-12)
    assert np.linalg.norm(y) == pytest.approx(1.0, abs=1e-12)
    # x + y = 2 G, so its polar component is 2 H
    assert (x + y)[2] == pytest.approx(2.0 * rho, abs=1e-12)
