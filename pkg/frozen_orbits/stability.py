#!/usr/bin/env python
# -*- coding: utf-8 -*-

from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from frozen_orbits import utils
from frozen_orbits.common import G_of_Z, xhat
from frozen_orbits.equilibria import Equilibrium, SIGN_OF_KIND
from frozen_orbits.errors import AuditFailure, DegenerateTangency, DomainError
from frozen_orbits.hamiltonian.rel import RelativisticNormalForm
from frozen_orbits.model import ModelParams

logger = utils.get_logger(__name__, log_file="frozen_orbits.log")

TAU_DEG = 1e-9

STABLE = 'Stable'
UNSTABLE = 'Unstable'
DEGENERATE = 'Degenerate'
INDEX = {STABLE: 1, UNSTABLE: -1, DEGENERATE: 0}

# jC rho^2 below which both zero-order E+ families of the relativistic problem are centres
REL_ZERO_ORDER_FLIP = 7.0 / 810.0


@dataclass(frozen=True)
class StabilityVerdict:
    '''
    alpha^2 + C = 0 is the characteristic equation: C > 0 centre, C < 0 saddle.
    '''
    alpha_sq_coeff: float
    classification: str
    concavity_diff: Optional[float] = None

    @property
    def index_contribution(self) -> int:
        return INDEX[self.classification]


def _verdict(C, scale, tau=TAU_DEG, concavity=None):
    if abs(C) <= tau * scale:
        return StabilityVerdict(float(C), DEGENERATE, concavity)
    return StabilityVerdict(float(C), STABLE if C > 0.0 else UNSTABLE, concavity)


def _pole_coefficient(params, G, tau):
    nf = params.normal_form()
    r = params.r
    C = float(nf.numerator(1, G, r) * nf.numerator(-1, G, r))
    scale = float(nf.numerator_scale(1, G, r) * nf.numerator_scale(-1, G, r))
    return _verdict(C, scale, tau)


def classify_E1(params: ModelParams, tau: float = TAU_DEG) -> StabilityVerdict:
    '''
    C = 4 rho^2 f^2 s+ s- at Z = -E, written as N+ N- at G = |rho|.
    '''
    return _pole_coefficient(params, params.abs_rho, tau)


def classify_E2(params: ModelParams, tau: float = TAU_DEG) -> StabilityVerdict:
    return _pole_coefficient(params, 1.0, tau)


def contour_curvature(params: ModelParams, kind: str, Z: float) -> Tuple[float, float]:
    '''
    second Z-derivative of K restricted to the contour X = +/- Xhat(Z), with
    the sum of the magnitudes of its terms.
    '''
    sign = SIGN_OF_KIND[kind]
    g, f, g1, f1, g2, f2 = params.normal_form().gf(Z, params.r)
    Xh = xhat(Z, params.r)
    terms = (g2, sign * f2 * Xh, -sign * 4.0 * Z * f1, -sign * 2.0 * f)
    return float(sum(terms)), float(sum(abs(t) for t in terms))


def classify_tangency(eq: Equilibrium, params: ModelParams, tau: float = TAU_DEG) -> StabilityVerdict:
    '''
    The level curve through the tangency is X~ = (k - g)/f; its concavity
    minus that of the contour is -k''/f, k'' the contour curvature of K.
    '''
    if eq.kind not in SIGN_OF_KIND:
        raise DomainError(f"classify_tangency needs an Eplus or Eminus point, got {eq.kind}")
    sign = SIGN_OF_KIND[eq.kind]
    Z = eq.Z
    G = float(G_of_Z(Z, params.r))
    f = float(params.normal_form().gf(Z, params.r)[1])
    Xh = float(xhat(Z, params.r))
    k2, scale = contour_curvature(params, eq.kind, Z)
    concavity = -k2 / f
    if eq.degenerate_root or abs(k2) <= tau * scale:
        raise DegenerateTangency(f"{eq.label or eq.kind} at Z={Z}: contact of order higher than two")
    C = -sign * 16.0 * G * G * f * Xh * k2
    return StabilityVerdict(float(C), STABLE if C > 0.0 else UNSTABLE, concavity)


def classify_ebar(pair: Sequence[Equilibrium], params: ModelParams, tau: float = TAU_DEG) -> StabilityVerdict:
    '''
    C = -16 G^2 f_Z^2 Ybar^2: the pair is a saddle pair, degenerate on the contour.
    '''
    eq = pair[0]
    Zbar = eq.Z
    if abs(Zbar) < 1e-12:
        logger.warning(f"Ebar at Zbar = 0 for {params.to_dict()}")
    G = float(G_of_Z(Zbar, params.r))
    f1 = float(params.normal_form().gf(Zbar, params.r)[3])
    Ysq = eq.lemon.Y ** 2
    C = -16.0 * G * G * f1 * f1 * Ysq
    scale = 16.0 * G * G * f1 * f1 * max((params.E ** 2 - Zbar ** 2) ** 2, 1e-300)
    return _verdict(C, scale, tau)


def classify_all(params: ModelParams, equilibria: List[Equilibrium], tau: float = TAU_DEG) -> List[Equilibrium]:
    verdicts = []
    for eq in equilibria:
        if eq.kind == 'E1':
            v = classify_E1(params, tau)
        elif eq.kind == 'E2':
            v = classify_E2(params, tau)
        elif eq.kind == 'Ebar':
            v = classify_ebar((eq,), params, tau)
        else:
            try:
                v = classify_tangency(eq, params, tau)
            except DegenerateTangency as e:
                logger.debug(str(e))
                k2, _ = contour_curvature(params, eq.kind, eq.Z)
                v = StabilityVerdict(0.0 if eq.degenerate_root else k2, DEGENERATE)
        verdicts.append(v)
    # tau is relative to the terms of each coefficient, not to the whole set
    return [replace(eq, stability=v.classification, char_coeff=v.alpha_sq_coeff)
            for eq, v in zip(equilibria, verdicts)]


@dataclass(frozen=True)
class AuditReport:
    total: int
    status: str
    contributions: Dict[str, int]

    @property
    def passed(self) -> bool:
        return self.status == 'Pass'


def poincare_hopf_audit(equilibria: List[Equilibrium]) -> AuditReport:
    '''
    sum of the indices of all sphere preimages; 2 on the sphere.
    '''
    total = 0
    contributions = {}
    degenerate = False
    for eq in equilibria:
        if eq.stability is None:
            raise DomainError(f"{eq.label or eq.kind} has not been classified")
        if eq.stability == DEGENERATE:
            degenerate = True
        c = INDEX[eq.stability] * len(eq.xi_preimages)
        key = eq.label or eq.kind
        contributions[key] = contributions.get(key, 0) + c
        total += c
    if degenerate:
        status = 'Inconclusive'
    elif total == 2:
        status = 'Pass'
    else:
        raise AuditFailure(f"index sum {total} != 2: {contributions}")
    logger.debug(f"Poincare-Hopf audit {status}: sum {total}")
    return AuditReport(total, status, contributions)


def zero_order_verdicts(x: float) -> Dict[str, str]:
    '''
    stability of the rising (E15/E16) and falling (E17/E18) E+ families of the
    relativistic problem at lambda -> 0, from the sign of the level-set
    curvature; x = jC rho^2 < 1/80.
    '''
    if not 0.0 < x < 1.0 / 80.0:
        raise DomainError(f"jC rho^2 = {x} outside (0, 1/80)")
    out = {}
    for label, family in (('E15', 'rising'), ('E17', 'falling')):
        curvature = RelativisticNormalForm.zero_order_curvature(family, x)
        out[label] = STABLE if curvature > 0.0 else UNSTABLE
    return out
