#!/usr/bin/env python
# -*- coding: utf-8 -*-

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from frozen_orbits import utils
from frozen_orbits.errors import DomainError, OrderUnsupported, SmallRhoWarning
from frozen_orbits.model import ModelParams, PhysicalUnits, get_normal_form

logger = utils.get_logger(__name__, log_file="frozen_orbits.log")

SQRT5 = np.sqrt(5.0)
SMALL_RHO = 0.05

# coefficients of rho+/- = (1/sqrt5)(1 + sum c_k lambda^k), exact rationals
RHO_SERIES_J2 = {
    1: (Fraction(1), Fraction(1, 10), Fraction(-7, 200), Fraction(-7, 800)),
    -1: (Fraction(1), Fraction(-1, 10), Fraction(3, 40), Fraction(-299, 4000)),
}


@dataclass(frozen=True)
class SeriesResult:
    value: float
    order: int
    terms: Tuple[float, ...]


def _result(terms, order):
    terms = tuple(float(t) for t in terms[:order + 1])
    return SeriesResult(float(sum(terms)), order, terms)


def critical_inclination() -> float:
    '''
    arccos(1/sqrt5) in radians: the perigee drift vanishes at first order.
    '''
    return float(np.arccos(1.0 / SQRT5))


def critical_G(rho: float) -> float:
    return float(SQRT5 * abs(rho))


def rho_crit_exact(params: ModelParams) -> Tuple[Optional[float], Optional[float]]:
    '''
    (rho+, rho-) from the radical forms; rho~+/- for the relativistic model,
    None where no admissible value exists.
    '''
    nf = params.normal_form()
    out = []
    for sign in (1, -1):
        with np.errstate(invalid='ignore'):
            value = nf.rho_crit_radical(sign)
        if value is None or not np.isfinite(value) or not 0.0 < value < 1.0:
            out.append(None)
        else:
            out.append(float(value))
    return out[0], out[1]


def _rho_coefficients(params, sign):
    if params.model == 'j2':
        return [float(c) for c in RHO_SERIES_J2[sign]]
    if params.model == 'j4':
        j4 = params.j4
        if sign > 0:
            return [1.0, (1.0 + 6.0 * j4) / 10.0, -(7.0 + 20.0 * j4 - 132.0 * j4 ** 2) / 200.0]
        return [1.0, -(1.0 - 8.0 * j4) / 10.0, (15.0 - 166.0 * j4 + 368.0 * j4 ** 2) / 200.0]
    raise OrderUnsupported("no rho+/- series is available for the relativistic model")


def rho_crit_series(params: ModelParams, order: int = 3) -> Tuple[SeriesResult, SeriesResult]:
    out = []
    for sign in (1, -1):
        coef = _rho_coefficients(params, sign)
        if not 0 <= order < len(coef):
            raise OrderUnsupported(f"rho series of the {params.model} model stops at order {len(coef) - 1}")
        terms = [c * params.lam ** k / SQRT5 for k, c in enumerate(coef)]
        out.append(_result(terms, order))
    return out[0], out[1]


def h_crit_series(phys: PhysicalUnits, order: int = 3) -> Tuple[SeriesResult, SeriesResult]:
    '''
    |H| of the two pitchforks of the J2 problem in physical units, series in
    J2 mu^2 Rp^2 / L^4.
    '''
    lam = phys.j2 * phys.mu ** 2 * phys.rp ** 2 / phys.L ** 4
    params = ModelParams('j2', 0.5, lam)
    out = []
    for res in rho_crit_series(params, order):
        terms = tuple(t * phys.L for t in res.terms)
        out.append(SeriesResult(float(sum(terms)), order, terms))
    return out[0], out[1]


def _G_terms_j2(rho, lam, sign):
    s5 = SQRT5
    if sign > 0:
        c1 = (-1.0 + 4.0 * rho ** 2) / (10.0 * s5 * rho ** 3)
        c2 = -(14.0 + 6.0 * s5 * rho - 81.0 * rho ** 2 - 24.0 * s5 * rho ** 3 + 100.0 * rho ** 4) \
            / (5000.0 * s5 * rho ** 7)
        c3 = (353.0 - 336.0 * s5 * rho - 4077.0 * rho ** 2 + 1944.0 * s5 * rho ** 3
              + 12310.0 * rho ** 4 - 2400.0 * s5 * rho ** 5 - 6600.0 * rho ** 6) / (5000000.0 * s5 * rho ** 11)
    else:
        c1 = (9.0 - 35.0 * rho ** 2) / (100.0 * s5 * rho ** 3)
        c2 = -(1305.0 - 108.0 * s5 * rho - 7910.0 * rho ** 2 + 420.0 * s5 * rho ** 3 + 11025.0 * rho ** 4) \
            / (100000.0 * s5 * rho ** 7)
        c3 = (267309.0 - 31320.0 * s5 * rho - 2226905.0 * rho ** 2 + 189840.0 * s5 * rho ** 3
              + 5775175.0 * rho ** 4 - 264600.0 * s5 * rho ** 5 - 4501875.0 * rho ** 6) \
            / (100000000.0 * s5 * rho ** 11)
    return [s5 * rho, c1 * lam, c2 * lam ** 2, c3 * lam ** 3]


def _G_terms_j4(rho, lam, j4, sign):
    s5 = SQRT5
    p = rho
    if sign > 0:
        c1 = (-5.0 - 7.0 * j4 + 20.0 * p ** 2 + 5.0 * j4 * p ** 2) / (50.0 * s5 * p ** 3)
        # constant group -70 - 378 j4 - 392 j4^2 reproduces the J2 limit and the rho+ series
        c2 = (-70.0 - 378.0 * j4 - 392.0 * j4 ** 2 - 30.0 * s5 * p - 42.0 * s5 * j4 * p
              + 405.0 * p ** 2 + 1215.0 * j4 * p ** 2 + 70.0 * j4 ** 2 * p ** 2
              + 120.0 * s5 * p ** 3 + 30.0 * s5 * j4 * p ** 3
              - 500.0 * p ** 4 + 475.0 * j4 * p ** 4 + 150.0 * j4 ** 2 * p ** 4) / (25000.0 * s5 * p ** 7)
        c3 = (1765.0 - 16569.0 * j4 - 70021.0 * j4 ** 2 - 60711.0 * j4 ** 3
              - 1680.0 * s5 * p - 9072.0 * s5 * j4 * p - 9408.0 * s5 * j4 ** 2 * p
              - 20385.0 * p ** 2 + 86215.0 * j4 * p ** 2 + 189665.0 * j4 ** 2 * p ** 2 - 20335.0 * j4 ** 3 * p ** 2
              + 9720.0 * s5 * p ** 3 + 29160.0 * s5 * j4 * p ** 3 + 1680.0 * s5 * j4 ** 2 * p ** 3
              + 61550.0 * p ** 4 - 19900.0 * j4 * p ** 4 + 265125.0 * j4 ** 2 * p ** 4 + 53375.0 * j4 ** 3 * p ** 4
              - 12000.0 * s5 * p ** 5 + 11400.0 * s5 * j4 * p ** 5 + 3600.0 * s5 * j4 ** 2 * p ** 5
              - 33000.0 * p ** 6 - 316750.0 * j4 * p ** 6 - 99625.0 * j4 ** 2 * p ** 6
              - 5625.0 * j4 ** 3 * p ** 6) / (25000000.0 * s5 * p ** 11)
    else:
        c1 = (125.0 * j4 * p ** 2 - 41.0 * j4 - 35.0 * p ** 2 + 9.0) / (100.0 * s5 * p ** 3)
        c2 = (-103125.0 * j4 ** 2 * p ** 4 + 90450.0 * j4 ** 2 * p ** 2 - 18573.0 * j4 ** 2
              + 68250.0 * j4 * p ** 4 + 1500.0 * s5 * j4 * p ** 3 - 54320.0 * j4 * p ** 2
              - 492.0 * s5 * j4 * p + 10022.0 * j4
              - 11025.0 * p ** 4 - 420.0 * s5 * p ** 3 + 7910.0 * p ** 2 + 108.0 * s5 * p - 1305.0) \
            / (100000.0 * s5 * p ** 7)
        # the j4^2 rho^4 term is listed with a stray j4^4
        c3 = -(-106171875.0 * j4 ** 3 * p ** 6 + 113728125.0 * j4 ** 2 * p ** 6 + 2475000.0 * s5 * j4 ** 2 * p ** 5
               + 168643125.0 * j4 ** 3 * p ** 4 - 168503125.0 * j4 ** 2 * p ** 4
               - 2170800.0 * s5 * j4 ** 2 * p ** 3 - 80521425.0 * j4 ** 3 * p ** 2 + 75097235.0 * j4 ** 2 * p ** 2
               + 445752.0 * s5 * j4 ** 2 * p + 12014271.0 * j4 ** 3 - 10434331.0 * j4 ** 2
               - 39598125.0 * j4 * p ** 6 - 1638000.0 * s5 * j4 * p ** 5 + 54647375.0 * j4 * p ** 4
               + 1303680.0 * s5 * j4 * p ** 3 - 22678075.0 * j4 * p ** 2 - 240528.0 * s5 * j4 * p
               + 2929289.0 * j4
               + 4501875.0 * p ** 6 + 264600.0 * s5 * p ** 5 - 5775175.0 * p ** 4 - 189840.0 * s5 * p ** 3
               + 2226905.0 * p ** 2 + 31320.0 * s5 * p - 267309.0) / (100000000.0 * s5 * p ** 11)
    return [s5 * p, c1 * lam, c2 * lam ** 2, c3 * lam ** 3]


def G_frozen_series(params: ModelParams, order: int = 3) -> Tuple[SeriesResult, SeriesResult]:
    '''
    G of the principal E+ (E3) and E- (E4) families as series in lambda.
    '''
    if params.model == 'rel':
        raise OrderUnsupported("no G+/- series is available for the relativistic model")
    if not 0 <= order <= 3:
        raise OrderUnsupported(f"G series stop at order 3, got {order}")
    rho = params.abs_rho
    if rho < SMALL_RHO:
        warnings.warn(f"G series at |rho| = {rho} < {SMALL_RHO} are unreliable", SmallRhoWarning)
        logger.warning(f"G series evaluated at small |rho| = {rho}")
    out = []
    for sign in (1, -1):
        if params.model == 'j2':
            terms = _G_terms_j2(rho, params.lam, sign)
        else:
            terms = _G_terms_j4(rho, params.lam, params.j4, sign)
        out.append(_result(terms, order))
    return out[0], out[1]


def j4_vinti_series(lam: float) -> float:
    return 1.0 - 14.0 / 5.0 * lam + 1239.0 / 50.0 * lam ** 2


def j4_vinti_boundary(lam: float) -> Tuple[float, float]:
    '''
    j4 at which rho+ = rho-.
    @return (series value, value from solving the radical forms)
    '''
    if not 0.0 < lam < 1.0:
        raise DomainError(f"lambda = {lam} outside (0, 1)")

    def gap(j4):
        nf = get_normal_form('j4', lam, float(j4))
        return nf.rho_crit_radical(1) - nf.rho_crit_radical(-1)

    guess = j4_vinti_series(lam)
    width = max(0.05, 20.0 * lam)
    direct = brentq(gap, guess - width, guess + width, xtol=1e-14)
    return guess, float(direct)


def endpoint_rho_roots(params: ModelParams, sign: int) -> List[float]:
    '''
    |rho| in (0, 1) at which an E+ (sign=1) or E- (sign=-1) family leaves E1:
    zeros of N_sign at G = |rho|, r = rho^2, a polynomial in |rho|.
    '''
    nf = params.normal_form()
    a, b, c = nf.numerator_parts(sign)
    P, _ = (a.shift(4) + b.shift(2) + c).numerator()
    out = []
    for root in P.roots():
        if abs(root.imag) > 1e-10 * max(1.0, abs(root.real)):
            continue
        x = float(root.real)
        if 0.0 < x < 1.0:
            out.append(x)
    return sorted(out, reverse=True)


def misc_thresholds(params: ModelParams) -> Dict:
    '''
    rho_tri_up / rho_tri_down for the J4 model; jC~ and the zero-order
    roots for the relativistic one. Absent values are None.
    '''
    out = {}
    if params.model == 'j4':
        up = endpoint_rho_roots(params, 1)
        down = endpoint_rho_roots(params, -1)
        out['rho_tri_up'] = up[0] if up else None
        out['rho_tri_down'] = down[0] if down else None
        out['j4_tri_up_onset'] = -31.0 / 35.0
        out['j4_tri_down_onset'] = -12.0 / 25.0
    elif params.model == 'rel':
        nf = params.normal_form()
        out['jc_tilde'] = float(nf.jc_tilde())
        out['zero_order_Z'] = nf.zero_order_roots(params.abs_rho)
    return out
