#!/usr/bin/env python
# -*- coding: utf-8 -*-

import numpy as np
import pytest
from scipy.optimize import brentq

from frozen_orbits.common import NormalForm
from frozen_orbits.equilibria import enumerate_equilibria, find_ebar
from frozen_orbits.errors import DomainError
from frozen_orbits.hamiltonian.rel import RelativisticNormalForm
from frozen_orbits.model import ModelParams, get_normal_form
from frozen_orbits.oracle import linearize_at
from frozen_orbits.stability import (REL_ZERO_ORDER_FLIP, STABLE, UNSTABLE, classify_E1, classify_E2, classify_ebar,
                                     classify_tangency, poincare_hopf_audit, zero_order_verdicts)

LAMBDA = 0.001


def _verdicts(params):
    return {eq.label: eq.stability for eq in enumerate_equilibria(params)}


@pytest.mark.parametrize('rho', [0.05, 0.2])
def test_j2_below_critical_inclination(rho):
    assert _verdicts(ModelParams('j2', rho, LAMBDA)) == {'E1': STABLE, 'E2': STABLE, 'E3': STABLE, 'E4': UNSTABLE}


@pytest.mark.parametrize('rho', [0.6, 0.9])
def test_j2_above_critical_inclination(rho):
    assert _verdicts(ModelParams('j2', rho, LAMBDA)) == {'E1': STABLE, 'E2': STABLE}


def test_j2_between_pitchforks():
    nf = get_normal_form('j2', LAMBDA, 0.0)
    rho_plus, rho_minus = nf.rho_crit(1), nf.rho_crit(-1)
    assert rho_minus < rho_plus
    assert abs(rho_plus - np.sqrt(0.2)) < 2e-4 * np.sqrt(0.2)
    assert abs(rho_minus - np.sqrt(0.2)) < 2e-4 * np.sqrt(0.2)
    params = ModelParams('j2', 0.5 * (rho_plus + rho_minus), LAMBDA)
    assert _verdicts(params) == {'E1': STABLE, 'E2': UNSTABLE, 'E3': STABLE}


@pytest.mark.parametrize('rho', [0.05, 0.2, 0.6])
def test_poincare_hopf_audit(rho):
    report = poincare_hopf_audit(enumerate_equilibria(ModelParams('j2', rho, LAMBDA)))
    assert report.passed
    assert report.total == 2


def test_audit_on_j4_model(j4_params):
    report = poincare_hopf_audit(enumerate_equilibria(j4_params))
    assert report.passed


def test_audit_needs_classification(j2_params):
    with pytest.raises(DomainError):
        poincare_hopf_audit(enumerate_equilibria(j2_params, classify=False))


def test_poles_are_stable_for_small_inclination_parameter(j2_params):
    assert classify_E1(j2_params).classification == STABLE
    assert classify_E2(j2_params).classification == STABLE
    assert classify_E2(j2_params).index_contribution == 1


def test_eigenvalues_match_characteristic_coefficient(j2_params):
    for eq in enumerate_equilibria(j2_params):
        lin = linearize_at(j2_params, eq)
        assert lin.classification == eq.stability
        assert lin.magnitude == pytest.approx(np.sqrt(abs(eq.char_coeff)), rel=1e-4)


@pytest.mark.parametrize('model,extra', [('j2', 0.0), ('j4', 1.3), ('j4', -2.0), ('rel', 0.2)])
def test_endpoint_quadratic_matches_numerator(model, extra):
    nf = get_normal_form(model, LAMBDA, extra)
    for sign in (1, -1):
        listed = nf.endpoint_quadratic(sign)
        generic = NormalForm.endpoint_quadratic(nf, sign)
        assert listed == pytest.approx(generic, rel=1e-10, abs=1e-14)


@pytest.mark.parametrize('lam', [1e-4, 1e-3, 0.05])
def test_j2_radical_pitchforks(lam):
    nf = get_normal_form('j2', lam, 0.0)
    for sign in (1, -1):
        assert nf.rho_crit_radical(sign) == pytest.approx(nf.rho_crit(sign), rel=1e-10)


def test_zero_order_relativistic_families():
    assert zero_order_verdicts(0.006) == {'E15': STABLE, 'E17': STABLE}
    assert zero_order_verdicts(0.0075)['E15'] == STABLE
    for x in (0.0095, 0.01, 0.011):
        assert zero_order_verdicts(x) == {'E15': UNSTABLE, 'E17': STABLE}


def test_zero_order_flip():
    flip = brentq(lambda x: RelativisticNormalForm.zero_order_curvature('rising', x), 0.0075, 0.0095)
    assert flip == pytest.approx(REL_ZERO_ORDER_FLIP, rel=1e-2)


def test_zero_order_verdicts_agree_with_the_full_problem(rel_params):
    x = rel_params.jc * rel_params.r
    found = _verdicts(rel_params)
    for label, stability in zero_order_verdicts(x).items():
        assert found[label] == stability


@pytest.mark.parametrize('rho, expected', [
    (0.2517, {'E1': STABLE, 'E2': STABLE, 'E16': STABLE, 'E18': UNSTABLE}),
    (0.22, {'E1': STABLE, 'E2': STABLE, 'E15': UNSTABLE, 'E16': STABLE, 'E17': STABLE, 'E18': UNSTABLE}),
    (0.21, {'E1': STABLE, 'E2': STABLE, 'E15': STABLE, 'E16': STABLE, 'E17': STABLE, 'E18': UNSTABLE,
            'Ebar': UNSTABLE}),
    (0.207, {'E1': STABLE, 'E2': STABLE, 'E15': STABLE, 'E16': UNSTABLE, 'E17': STABLE, 'E18': UNSTABLE}),
])
def test_relativistic_sequence(rho, expected):
    params = ModelParams('rel', rho, LAMBDA, jc=0.2)
    equilibria = enumerate_equilibria(params)
    assert {eq.label: eq.stability for eq in equilibria} == expected
    assert poincare_hopf_audit(equilibria).passed


@pytest.mark.parametrize('x', [0.0, -0.001, 1.0 / 80.0, 0.02])
def test_zero_order_domain(x):
    with pytest.raises(DomainError):
        zero_order_verdicts(x)


def test_tangency_coefficient(j2_params):
    for eq in enumerate_equilibria(j2_params):
        if eq.kind in ('E1', 'E2'):
            with pytest.raises(DomainError):
                classify_tangency(eq, j2_params)
            continue
        verdict = classify_tangency(eq, j2_params)
        assert verdict.alpha_sq_coeff == eq.char_coeff
        assert verdict.index_contribution == (1 if eq.kind == 'Eplus' else -1)


def test_ebar_pair_is_a_saddle():
    pairs = []
    for rho in np.linspace(0.236, 0.252, 17):
        params = ModelParams('j4', float(rho), LAMBDA, j4=0.95)
        pairs = find_ebar(params)
        if pairs:
            break
    assert pairs
    pair = pairs[0]
    assert pair[0].lemon.Y == -pair[1].lemon.Y
    verdict = classify_ebar(pair, params)
    assert verdict.classification == UNSTABLE
    assert verdict.alpha_sq_coeff < 0.0
