#!/usr/bin/env python
# -*- coding: utf-8 -*-

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from frozen_orbits import utils
from frozen_orbits.errors import AngleUndefined, ConstraintError, DomainError

logger = utils.get_logger(__name__, log_file="frozen_orbits.log")

CUSP_TOL = 1e-12
LEMON_TOL = 1e-8


def sphere_radius(rho: float) -> float:
    return (1.0 - rho * rho) / 2.0


@dataclass(frozen=True)
class DelaunayState:
    G: float
    g_angle: float
    rho: float

    def __post_init__(self):
        rho = abs(self.rho)
        if not rho - 1e-14 <= self.G <= 1.0 + 1e-14:
            raise DomainError(f"G = {self.G} outside [|rho|, 1] = [{rho}, 1]")


@dataclass(frozen=True)
class XiState:
    xi1: float
    xi2: float
    xi3: float
    rho: float

    def as_array(self) -> np.ndarray:
        return np.array([self.xi1, self.xi2, self.xi3])

    def residual(self) -> float:
        E = sphere_radius(self.rho)
        return abs(self.xi1 ** 2 + self.xi2 ** 2 + self.xi3 ** 2 - E * E)


@dataclass(frozen=True)
class LemonState:
    X: float
    Y: float
    Z: float
    rho: float

    def residual(self) -> float:
        E = sphere_radius(self.rho)
        return abs(self.X ** 2 + self.Y ** 2 - (E * E - self.Z ** 2) ** 2)

    def at_cusp(self) -> bool:
        E = sphere_radius(self.rho)
        return abs(self.Z - E) < CUSP_TOL or abs(self.Z + E) < CUSP_TOL


@dataclass(frozen=True)
class PiState:
    pi1: float
    pi2: float
    pi3: float
    rho: float

    def residual(self) -> float:
        r = self.rho * self.rho
        rhs = ((1.0 + self.pi1) ** 2 - r) * ((1.0 - self.pi1) ** 2 - r)
        return abs(self.pi2 ** 2 + self.pi3 ** 2 - rhs)


def delaunay_to_xi(s: DelaunayState) -> XiState:
    r = s.rho * s.rho
    G2 = s.G * s.G
    amp = np.sqrt(max(0.0, (G2 - r) * (1.0 - G2)))
    return XiState(float(amp * np.cos(s.g_angle)), float(amp * np.sin(s.g_angle)),
                   G2 - (1.0 + r) / 2.0, s.rho)


def xi_to_delaunay(s: XiState) -> DelaunayState:
    '''
    inverse of delaunay_to_xi; g is returned in [0, 2 pi).
    '''
    r = s.rho * s.rho
    if np.hypot(s.xi1, s.xi2) < CUSP_TOL:
        raise AngleUndefined("argument of perigee undefined on a circular or equatorial orbit")
    G = float(np.sqrt(max(0.0, s.xi3 + (1.0 + r) / 2.0)))
    g = float(np.mod(np.arctan2(s.xi2, s.xi1), 2.0 * np.pi))
    return DelaunayState(min(max(G, abs(s.rho)), 1.0), g, s.rho)


def xi_to_lemon(s: XiState) -> LemonState:
    return LemonState(s.xi1 ** 2 - s.xi2 ** 2, 2.0 * s.xi1 * s.xi2, s.xi3, s.rho)


def _check_lemon(s: LemonState):
    E = sphere_radius(s.rho)
    scale = max(E ** 4, 1e-300)
    if abs(s.Z) > E + LEMON_TOL or s.residual() > LEMON_TOL * max(1.0, scale):
        raise ConstraintError(
            f"({s.X}, {s.Y}, {s.Z}) is not on the lemon of rho = {s.rho}: residual {s.residual()}")


def lemon_to_xi(s: LemonState) -> List[XiState]:
    '''
    every point of the sphere over a lemon point. A cusp has one preimage,
    any other point two, exchanged by (xi1, xi2) -> (-xi1, -xi2).
    '''
    _check_lemon(s)
    E = sphere_radius(s.rho)
    if s.at_cusp():
        return [XiState(0.0, 0.0, float(np.copysign(E, s.Z)), s.rho)]
    P = max(E * E - s.Z * s.Z, 0.0)
    xi1 = np.sqrt(max(0.0, (P + s.X) / 2.0))
    xi2 = np.sqrt(max(0.0, (P - s.X) / 2.0))
    if s.Y < 0.0:
        xi2 = -xi2
    if xi1 == 0.0 and xi2 == 0.0:
        return [XiState(0.0, 0.0, s.Z, s.rho)]
    return [XiState(float(xi1), float(xi2), s.Z, s.rho),
            XiState(float(-xi1), float(-xi2), s.Z, s.rho)]


def lemon_to_delaunay(s: LemonState) -> List[DelaunayState]:
    '''
    @return the two representatives g and g + pi, g in [0, pi).
    '''
    _check_lemon(s)
    if s.at_cusp():
        raise AngleUndefined("g is undefined at the cusps Z = +/- E")
    r = s.rho * s.rho
    G = float(np.sqrt(s.Z + (1.0 + r) / 2.0))
    G = min(max(G, abs(s.rho)), 1.0)
    g = float(np.mod(np.arctan2(s.Y, s.X) / 2.0, np.pi))
    return [DelaunayState(G, g, s.rho), DelaunayState(G, g + np.pi, s.rho)]


def delaunay_to_lemon(s: DelaunayState) -> LemonState:
    r = s.rho * s.rho
    G2 = s.G * s.G
    P = (G2 - r) * (1.0 - G2)
    return LemonState(float(P * np.cos(2.0 * s.g_angle)), float(P * np.sin(2.0 * s.g_angle)),
                      G2 - (1.0 + r) / 2.0, s.rho)


def xi_to_pi(s: XiState) -> PiState:
    r = s.rho * s.rho
    D = 2.0 * s.xi3 + 1.0 + r
    if D <= 0.0:
        raise DomainError("2 xi3 + 1 + rho^2 vanishes: the pi chart is singular there")
    return PiState(float(np.sqrt(2.0) * s.xi2 / np.sqrt(D)), -2.0 * s.xi1,
                   2.0 * s.xi3 + 2.0 * s.xi2 ** 2 / D, s.rho)


def sigma_variables(s: PiState) -> Tuple[float, float]:
    '''
    (sigma1, sigma2) of the further reduction by the R1..R3 symmetries; sigma2 = G.
    '''
    r = s.rho * s.rho
    sigma1 = (1.0 - abs(s.rho)) ** 2 - s.pi1 ** 2
    sigma2 = np.sqrt(max(0.0, 1.0 + r - s.pi1 ** 2 + s.pi3)) / np.sqrt(2.0)
    return float(sigma1), float(sigma2)


def kepler_invariants(G: float, g_angle: float, h_angle: float, rho: float) -> Tuple[np.ndarray, np.ndarray]:
    '''
    x = G + L A and y = G - L A for L = 1; both lie on the unit sphere.
    Not used by the reduced dynamics.
    '''
    cos_i = rho / G
    sin_i = np.sqrt(max(0.0, 1.0 - cos_i * cos_i))
    Gvec = G * np.array([sin_i * np.sin(h_angle), -sin_i * np.cos(h_angle), cos_i])
    e = np.sqrt(max(0.0, 1.0 - G * G))
    cg, sg = np.cos(g_angle), np.sin(g_angle)
    ch, sh = np.cos(h_angle), np.sin(h_angle)
    Avec = e * np.array([cg * ch - sg * sh * cos_i, cg * sh + sg * ch * cos_i, sg * sin_i])
    return Gvec + Avec, Gvec - Avec
