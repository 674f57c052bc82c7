#!/usr/bin/env python
# -*- coding: utf-8 -*-

from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from frozen_orbits import utils
from frozen_orbits.common import POLE_TOL, G_of_Z, Z_of_G, xhat
from frozen_orbits.errors import DegenerateTangency, DomainError, PoleError
from frozen_orbits.model import ModelParams, PhysicalUnits
from frozen_orbits.reduction import LemonState, XiState, lemon_to_xi

logger = utils.get_logger(__name__, log_file="frozen_orbits.log")

GRID_POINTS = 4096
REFINE_FACTOR = 8
ROOT_XTOL = 1e-13
MERGE_TOL = 1e-8
TRACE_STEPS = 512

KINDS = ('E1', 'E2', 'Eplus', 'Eminus', 'Ebar')
SIGN_OF_KIND = {'Eplus': 1, 'Eminus': -1}


@dataclass(frozen=True)
class Equilibrium:
    '''
    A relative equilibrium of the reduced problem.

    @param kind: E1, E2, Eplus, Eminus or Ebar.
    @param lemon: its (X, Y, Z).
    @param G_value: angular momentum, G^2 = Z + (1 + rho^2)/2.
    @param xi_preimages: the points of the sphere it stands for.
    @param degenerate_root: two tangency roots merged into this one.
    '''
    kind: str
    lemon: LemonState
    G_value: float
    xi_preimages: Tuple[XiState, ...] = field(default_factory=tuple)
    stability: Optional[str] = None
    char_coeff: Optional[float] = None
    label: Optional[str] = None
    degenerate_root: bool = False

    @property
    def Z(self) -> float:
        return self.lemon.Z

    @property
    def rho(self) -> float:
        return self.lemon.rho

    def g_deg(self) -> Optional[float]:
        if self.kind in ('E1', 'E2'):
            return None
        return float(np.degrees(np.mod(np.arctan2(self.lemon.Y, self.lemon.X) / 2.0, np.pi)))

    def to_dict(self, phys: Optional[PhysicalUnits] = None) -> Dict:
        G = self.G_value
        out = {
            'kind': self.kind,
            'label': self.label,
            'X': self.lemon.X,
            'Y': self.lemon.Y,
            'Z': self.lemon.Z,
            'G': G,
            'e': float(np.sqrt(max(0.0, 1.0 - G * G))),
            'i': float(np.degrees(np.arccos(np.clip(self.rho / G, -1.0, 1.0)))),
            'g_deg': self.g_deg(),
            'stability': self.stability,
            'char_coeff': self.char_coeff,
        }
        if phys is not None:
            perigee = phys.a * (1.0 - out['e'])
            out['perigee_radius'] = perigee
            out['collisional'] = bool(perigee <= phys.rp)
        return out


def s_plus(params: ModelParams, Z: float) -> float:
    return _s(params, 1, Z)


def s_minus(params: ModelParams, Z: float) -> float:
    return _s(params, -1, Z)


def _s(params, sign, Z):
    nf = params.normal_form()
    E = params.E
    # the cusps have closed forms of their own
    if abs(Z + E) <= 1e-15:
        return float(nf.endpoint_s(sign, 'equatorial', params.rho))
    if abs(Z - E) <= 1e-15:
        return float(nf.endpoint_s(sign, 'circular', params.rho))
    return float(nf.s(sign, Z, params.r))


def lemon_vector_field(params: ModelParams, X, Y, Z) -> np.ndarray:
    '''
    (dX/dt, dY/dt, dZ/dt) of the reduced flow on the lemon.
    '''
    ev = params.normal_form().gf(Z, params.r)
    g1, f, f1 = ev[2], ev[1], ev[3]
    G = G_of_Z(Z, params.r)
    K_Z = g1 + f1 * X
    return np.array([
        -4.0 * G * Y * K_Z,
        4.0 * G * (X * K_Z - 2.0 * Z * np.sqrt(X * X + Y * Y) * f),
        4.0 * G * Y * f,
    ], dtype=float)


def vector_field_residual(params: ModelParams, eq: Equilibrium) -> float:
    return float(np.linalg.norm(lemon_vector_field(params, eq.lemon.X, eq.lemon.Y, eq.lemon.Z)))


def _tangency_grid(E, n):
    # uniform in Z, with the first and last cells refined
    Z = np.linspace(-E, E, n)
    h = Z[1] - Z[0]
    head = np.linspace(-E, -E + REFINE_FACTOR * h, REFINE_FACTOR * REFINE_FACTOR + 1)
    tail = np.linspace(E - REFINE_FACTOR * h, E, REFINE_FACTOR * REFINE_FACTOR + 1)
    return np.unique(np.concatenate([head, Z, tail]))


def _numerator_in_Z(params, sign):
    nf = params.normal_form()
    r = params.r

    def N(Z):
        return float(nf.numerator(sign, G_of_Z(Z, r), r))
    return N


def tangency_roots(params: ModelParams, sign: int, n: int = GRID_POINTS) -> List[Tuple[float, bool]]:
    '''
    zeros of s_sign in (-E, E), found on the numerator N = 2 G f s_sign which
    carries no pole.
    @return list of (Z, degenerate) sorted by Z.
    '''
    nf = params.normal_form()
    r, E = params.r, params.E
    Z = _tangency_grid(E, n)
    G = G_of_Z(Z, r)
    values = nf.numerator(sign, G, r)
    scale = nf.numerator_scale(sign, G, r)
    N = _numerator_in_Z(params, sign)

    roots = []
    for i in range(len(Z) - 1):
        a, b = values[i], values[i + 1]
        if a == 0.0:
            roots.append((Z[i], False))
        elif a * b < 0.0:
            roots.append((brentq(N, Z[i], Z[i + 1], xtol=ROOT_XTOL, rtol=4 * np.finfo(float).eps), False))

    # touching zeros: a local minimum of |N| that the sign test cannot see
    mag = np.abs(values)
    for i in range(1, len(Z) - 1):
        if mag[i] <= mag[i - 1] and mag[i] <= mag[i + 1] \
                and values[i - 1] * values[i] > 0.0 and values[i] * values[i + 1] > 0.0:
            res = minimize_scalar(lambda z: abs(N(z)), bounds=(Z[i - 1], Z[i + 1]), method='bounded',
                                  options={'xatol': ROOT_XTOL})
            if abs(N(res.x)) <= 1e-10 * max(scale[i], 1e-300):
                logger.debug(f"touching tangency root sign={sign} at Z={res.x}")
                roots.append((float(res.x), True))

    roots = [(float(z), d) for z, d in roots if abs(z - E) > 1e-12 and abs(z + E) > 1e-12]
    roots.sort()
    merged = []
    for z, d in roots:
        if merged and abs(z - merged[-1][0]) < MERGE_TOL:
            logger.warning(f"merging tangency roots at Z={merged[-1][0]} and Z={z} (sign {sign})")
            merged[-1] = ((merged[-1][0] + z) / 2.0, True)
        else:
            merged.append((z, d))
    return merged


def _on_contour(params, kind, Z, degenerate=False):
    sign = SIGN_OF_KIND[kind]
    X = sign * float(xhat(Z, params.r))
    lemon = LemonState(X, 0.0, float(Z), params.rho)
    return Equilibrium(kind, lemon, float(G_of_Z(Z, params.r)),
                       tuple(lemon_to_xi(lemon)), degenerate_root=degenerate)


def find_tangency_equilibria(params: ModelParams, n: int = GRID_POINTS) -> List[Equilibrium]:
    out = []
    for kind in ('Eplus', 'Eminus'):
        for Z, degenerate in tangency_roots(params, SIGN_OF_KIND[kind], n):
            out.append(_on_contour(params, kind, Z, degenerate))
    logger.debug(f"{len(out)} tangency equilibria for {params}")
    return out


def polynomial_tangency_G(params: ModelParams, sign: int, route: str = 'printed') -> List[float]:
    '''
    G of the tangencies as real roots in (|rho|, 1] of a polynomial in G:
    the closed-form listing (route="printed") or the numerator of N_sign.
    '''
    nf = params.normal_form()
    if route == 'printed':
        P = nf.tangency_polynomial(sign, params.abs_rho)
    else:
        P, _ = nf.numerator_laurent(sign, params.r).numerator()
    out = []
    for root in P.roots():
        if abs(root.imag) > 1e-9 * max(1.0, abs(root.real)):
            continue
        G = float(root.real)
        if params.abs_rho < G <= 1.0:
            out.append(G)
    return sorted(out)


def ebar_coordinates(params: ModelParams) -> List[Tuple[float, float, float]]:
    '''
    (Zbar, Xbar, Ybar^2) for every zero of f in [|rho|, 1], existing or not.
    '''
    nf = params.normal_form()
    r = params.r
    out = []
    for G in nf.ebar_G(r):
        Zbar = float(Z_of_G(G, r))
        Xbar = float(-nf.A(G, r, 1) / nf.F(G, r, 1))
        Ysq = (params.E ** 2 - Zbar ** 2) ** 2 - Xbar ** 2
        out.append((Zbar, Xbar, float(Ysq)))
    return out


def find_ebar(params: ModelParams) -> List[Tuple[Equilibrium, Equilibrium]]:
    '''
    one (+Ybar, -Ybar) pair per admissible zero of f; empty when there is none.
    '''
    E = params.E
    pairs = []
    for Zbar, Xbar, Ysq in ebar_coordinates(params):
        if abs(Zbar) > E or Ysq < 0.0:
            continue
        Y = float(np.sqrt(Ysq))
        pair = []
        for Ybar in (Y, -Y):
            lemon = LemonState(Xbar, Ybar, Zbar, params.rho)
            pair.append(Equilibrium('Ebar', lemon, float(G_of_Z(Zbar, params.r)),
                                    tuple(lemon_to_xi(lemon)), label='Ebar'))
        logger.debug(f"Ebar pair at Z={Zbar}, X={Xbar}, Y=+/-{Y}")
        pairs.append((pair[0], pair[1]))
    return pairs


def level_curve(params: ModelParams, k: float, Z_grid) -> Dict[str, np.ndarray]:
    '''
    X~(Z) = (k - g(Z)) / f(Z) on the grid, with the contour +/- Xhat(Z).
    '''
    nf = params.normal_form()
    Z = np.asarray(Z_grid, dtype=float)
    G = G_of_Z(Z, params.r)
    f = nf.F(G, params.r)
    if np.any(np.abs(f) < POLE_TOL * nf.f_max(params.r)):
        raise PoleError("level curve grid touches the vertical asymptote f(Z) = 0")
    Xh = xhat(Z, params.r)
    return {
        'Z': Z,
        'X_tilde': (k - nf.A(G, params.r)) / f,
        'X_hat_plus': Xh,
        'X_hat_minus': -Xh,
    }


def enumerate_equilibria(params: ModelParams, classify: bool = True, n: int = GRID_POINTS,
                         tau: Optional[float] = None) -> List[Equilibrium]:
    E = params.E
    poles = []
    for kind, Z, G in (('E1', -E, params.abs_rho), ('E2', E, 1.0)):
        lemon = LemonState(0.0, 0.0, Z, params.rho)
        poles.append(Equilibrium(kind, lemon, G, tuple(lemon_to_xi(lemon)), label=kind))

    tangencies = assign_labels(params, find_tangency_equilibria(params, n))
    ebar = [eq for pair in find_ebar(params) for eq in pair]
    equilibria = poles + tangencies + ebar

    if classify:
        from frozen_orbits import stability
        if tau is None:
            equilibria = stability.classify_all(params, equilibria)
        else:
            equilibria = stability.classify_all(params, equilibria, tau)
    logger.debug(f"{len(equilibria)} equilibria at {params.to_dict()}")
    return equilibria


LABELS = {
    'j2': {'principal': ('E3', 'E4')},
    'j4': {'principal': ('E3', 'E4'), 'degenerate': ('E5', 'E6'), 'rising': ('E7', 'E8'),
           'falling': ('E9', 'E10'), 'equatorial': ('E11', 'E12')},
    'rel': {'principal': ('E3', 'E4'), 'degenerate': ('E13', 'E14'), 'rising': ('E15', 'E16'),
            'falling': ('E17', 'E18')},
}


def _branch_roots(nf, sign, G):
    a, b, c = nf.numerator_parts(sign)
    roots = np.roots([float(a(G)), float(b(G)), float(c(G))])
    return np.sort(roots[np.abs(roots.imag) <= 1e-12 * np.maximum(1.0, np.abs(roots.real))].real)


def branch_slope(params: ModelParams, sign: int, G: float) -> float:
    '''
    d(rho^2)/dG along the zero set N_sign(G, rho^2) = 0.
    '''
    nf = params.normal_form()
    a, b, c = nf.numerator_parts(sign)
    r = params.r
    N_G = a.deriv()(G) * r * r + b.deriv()(G) * r + c.deriv()(G)
    N_r = 2.0 * a(G) * r + b(G)
    return float(-N_G / N_r)


def trace_branch(params: ModelParams, sign: int, G0: float) -> Dict:
    '''
    follow the branch rho^2(G) through (G0, rho^2) towards G = 1.
    @return dict with exit ("circular", "equatorial", "zero", "lost"),
            the end value and whether rho^2 kept increasing.
    '''
    nf = params.normal_form()
    r = params.r
    prev = r
    monotone = True
    for G in np.linspace(G0, 1.0, TRACE_STEPS)[1:]:
        roots = _branch_roots(nf, sign, G)
        if roots.size == 0:
            return {'exit': 'lost', 'G': float(G), 'rho2': prev, 'monotone': monotone}
        cur = float(roots[np.argmin(np.abs(roots - prev))])
        if cur < prev - 1e-14:
            monotone = False
        if cur >= G * G:
            return {'exit': 'equatorial', 'G': float(G), 'rho2': cur, 'monotone': monotone}
        if cur <= 0.0:
            return {'exit': 'zero', 'G': float(G), 'rho2': cur, 'monotone': monotone}
        prev = cur
    return {'exit': 'circular', 'G': 1.0, 'rho2': prev, 'monotone': monotone}


def family_of(params: ModelParams, eq: Equilibrium) -> str:
    '''
    name the branch a tangency equilibrium belongs to: principal (ends on E2
    at the pitchfork value with rho^2 increasing), degenerate, equatorial
    (ends on E1), rising or falling.
    '''
    if params.model == 'j2':
        return 'principal'
    if eq.degenerate_root:
        return 'degenerate'
    sign = SIGN_OF_KIND[eq.kind]
    trace = trace_branch(params, sign, eq.G_value)
    if trace['exit'] == 'equatorial' and params.model == 'j4':
        return 'equatorial'
    if trace['exit'] == 'circular' and trace['monotone']:
        crit = params.normal_form().rho_crit(sign)
        if crit is not None and abs(trace['rho2'] - crit * crit) <= 1e-6 * max(crit * crit, 1e-12):
            return 'principal'
    slope = branch_slope(params, sign, eq.G_value)
    return 'rising' if slope > 0.0 else 'falling'


def assign_labels(params: ModelParams, tangencies: List[Equilibrium]) -> List[Equilibrium]:
    '''
    odd names for the Eplus kind, even for Eminus.
    '''
    table = LABELS[params.model]
    out = []
    for eq in tangencies:
        family = family_of(params, eq)
        names = table.get(family, table['principal'])
        label = names[0] if eq.kind == 'Eplus' else names[1]
        out.append(replace(eq, label=label))
    return out
