#!/usr/bin/env python
# -*- coding: utf-8 -*-

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Optional

import numpy as np
import yaml

from frozen_orbits import utils
from frozen_orbits.common import NormalForm, G_of_Z
from frozen_orbits.errors import DomainError, ModelError, UnitsError
from frozen_orbits.hamiltonian import J2NormalForm, J4NormalForm, RelativisticNormalForm

logger = utils.get_logger(__name__, log_file="frozen_orbits.log")

MODELS = ('j2', 'j4', 'rel')
J4_RANGE = (-6.0, 6.0)

NORMAL_FORMS = {
    'j2': J2NormalForm,
    'j4': J4NormalForm,
    'rel': RelativisticNormalForm,
}


@lru_cache(maxsize=256)
def get_normal_form(model: str, lam: float, extra: float) -> NormalForm:
    '''
    normal forms are immutable once built, so they are shared between calls.
    '''
    cls = NORMAL_FORMS[model]
    if model == 'j2':
        return cls(lam)
    return cls(lam, extra)


@dataclass(frozen=True)
class ModelParams:
    '''
    The parameter vector (rho; lambda, j4 | jC) of one closed-form problem.

    @param model: one of "j2", "j4", "rel".
    @param rho: H / L; only |rho| enters the dynamics.
    @param lam: J2 (Rp / a)^2, in (0, 1).
    @param j4: -J4 / J2^2, J4 model only.
    @param jc: 1 / (lambda c^2), relativistic model only.
    '''
    model: str
    rho: float
    lam: float
    j4: Optional[float] = None
    jc: Optional[float] = None

    def __post_init__(self):
        if self.model not in MODELS:
            raise ModelError(f"unknown model '{self.model}', expected one of {MODELS}")
        if not 0.0 < abs(self.rho) < 1.0:
            raise DomainError(f"rho out of range: |rho| = {abs(self.rho)} must lie in (0, 1)")
        if not 0.0 < self.lam < 1.0:
            raise ModelError(f"lambda out of range: {self.lam} must lie in (0, 1)")
        if self.model == 'j2' and (self.j4 is not None or self.jc is not None):
            raise ModelError("the J2 model takes neither j4 nor jC")
        if self.model == 'j4':
            if self.j4 is None or self.jc is not None:
                raise ModelError("the J4 model needs j4 and no jC")
            if not J4_RANGE[0] <= self.j4 <= J4_RANGE[1]:
                raise ModelError(f"j4 = {self.j4} outside {J4_RANGE}")
        if self.model == 'rel':
            if self.jc is None or self.j4 is not None:
                raise ModelError("the relativistic model needs jC and no j4")
            if self.jc < 0.0:
                raise ModelError(f"jC must be non-negative, got {self.jc}")

    @property
    def abs_rho(self) -> float:
        return abs(self.rho)

    @property
    def r(self) -> float:
        return self.rho * self.rho

    @property
    def E(self) -> float:
        '''radius (1 - rho^2)/2 of the xi-sphere, half-height of the lemon.'''
        return (1.0 - self.r) / 2.0

    @property
    def extra(self) -> float:
        if self.model == 'j4':
            return self.j4
        if self.model == 'rel':
            return self.jc
        return 0.0

    def normal_form(self) -> NormalForm:
        return get_normal_form(self.model, self.lam, float(self.extra))

    def with_rho(self, rho: float) -> 'ModelParams':
        return replace(self, rho=rho)

    def to_dict(self) -> dict:
        out = {'model': self.model, 'rho': self.rho, 'lambda': self.lam}
        if self.j4 is not None:
            out['j4'] = self.j4
        if self.jc is not None:
            out['jc'] = self.jc
        return out


@dataclass(frozen=True)
class PhysicalUnits:
    '''
    Dimensional inputs, SI units. J4 keeps its physical sign.
    '''
    mu: float
    rp: float
    a: float
    j2: float
    j4: float = 0.0
    c: float = 299792458.0
    h: Optional[float] = None

    def __post_init__(self):
        for name in ('mu', 'rp', 'a', 'c'):
            if not getattr(self, name) > 0.0:
                raise UnitsError(f"{name} must be strictly positive")
        if self.j2 < 0.0:
            raise UnitsError("J2 must be non-negative")
        if self.rp >= self.a:
            raise UnitsError(f"planet radius {self.rp} must be smaller than the semi-major axis {self.a}")

    @property
    def L(self) -> float:
        return float(np.sqrt(self.mu * self.a))

    @classmethod
    def from_file(cls, path: str) -> 'PhysicalUnits':
        '''
        read the keys mu, rp, a, j2, j4, c (and optional h) from a JSON or YAML file.
        '''
        try:
            with open(path, 'r') as f:
                cfg = yaml.safe_load(f) or {}
        except (OSError, yaml.YAMLError) as e:
            raise UnitsError(f"cannot read physical config {path}: {e}")
        try:
            return cls(**{k: float(v) for k, v in cfg.items()
                          if k in ('mu', 'rp', 'a', 'j2', 'j4', 'c', 'h')})
        except TypeError as e:
            raise UnitsError(f"incomplete physical config {path}: {e}")


@dataclass(frozen=True)
class NormalFormEval:
    '''
    g(Z), f(Z) and their first two Z-derivatives; K(X, Z) = g_val + f_val X.
    '''
    g_val: float
    f_val: float
    dg_dZ: float
    df_dZ: float
    d2g_dZ2: float
    d2f_dZ2: float

    def K(self, X):
        return self.g_val + self.f_val * X

    def K_Z(self, X):
        return self.dg_dZ + self.df_dZ * X

    def K_ZZ(self, X):
        return self.d2g_dZ2 + self.d2f_dZ2 * X


def eval_gf(params: ModelParams, Z: float) -> NormalFormEval:
    nf = params.normal_form()
    return NormalFormEval(*(float(v) for v in nf.gf(Z, params.r)))


def eval_K_delaunay(params: ModelParams, G, g_angle):
    return params.normal_form().K_delaunay(G, g_angle, params.r)


def nondimensionalize(phys: PhysicalUnits, model: str = 'j2', rho: Optional[float] = None) -> ModelParams:
    '''
    semi-major axis and sqrt(a^3 / mu) become the units of length and time.
    @param rho: H / L; taken from phys.h when omitted.
    '''
    if rho is None:
        if phys.h is None:
            raise UnitsError("either rho or the physical angular momentum h is required")
        rho = phys.h / phys.L
    if model in ('j4', 'rel') and phys.j2 == 0.0:
        raise UnitsError(f"J2 = 0 leaves the {model} extra parameter undefined")
    lam = phys.j2 * (phys.rp / phys.a) ** 2
    j4 = jc = None
    if model == 'j4':
        j4 = -phys.j4 / phys.j2 ** 2
    if model == 'rel':
        c_nd = phys.c * np.sqrt(phys.a / phys.mu)
        jc = float(1.0 / (lam * c_nd ** 2))
    logger.debug(f"nondimensionalized: lambda={lam}, j4={j4}, jC={jc}, rho={rho}")
    return ModelParams(model, float(rho), float(lam), j4=j4, jc=jc)


def dimensionalize_threshold(rho_star: float, phys: PhysicalUnits) -> float:
    if not 0.0 < rho_star < 1.0:
        raise DomainError(f"rho_star = {rho_star} must lie in (0, 1)")
    return rho_star * phys.L


def closed_form_dimensional(phys: PhysicalUnits, G, H, g_angle, model: str = 'j2'):
    '''
    secular closed form in (mu, L, G, H, J2, J4, Rp, c) before time rescaling;
    the nondimensional K equals (K_dim + mu^2 / (2 L^2)) / lambda in units mu = L = 1.
    '''
    mu, L, Rp, J2, J4 = phys.mu, phys.L, phys.rp, phys.j2, phys.j4
    G = np.asarray(G, dtype=float)
    H2 = H * H
    G2 = G * G
    L2 = L * L
    c2g = np.cos(2.0 * np.asarray(g_angle, dtype=float))
    P = (G2 - H2) * (L2 - G2)

    K = -mu ** 2 / (2.0 * L2)
    K = K + mu ** 4 * J2 * Rp ** 2 * (G2 - 3.0 * H2) / (4.0 * G ** 5 * L ** 3)
    K = K + 3.0 * mu ** 6 * J2 ** 2 * Rp ** 4 / (128.0 * L ** 5 * G ** 11) * (
        -5.0 * G ** 6 - 4.0 * G ** 5 * L + 24.0 * G ** 3 * H2 * L - 36.0 * G * H2 * H2 * L
        - 35.0 * H2 * H2 * L2 + G ** 4 * (18.0 * H2 + 5.0 * L2) - 5.0 * G2 * (H2 * H2 + 2.0 * H2 * L2)
        + 2.0 * (G2 - 15.0 * H2) * (G2 - L2) * (G2 - H2) * c2g)
    if model == 'j4':
        K = K + 3.0 * mu ** 6 * J4 * Rp ** 4 / (128.0 * L ** 5 * G ** 11) * (
            (3.0 * G2 * G2 - 30.0 * G2 * H2 + 35.0 * H2 * H2) * (5.0 * L2 - 3.0 * G2)
            - 10.0 * (G2 - 7.0 * H2) * P * c2g)
    if model == 'rel':
        c2 = phys.c ** 2
        K = K + (3.0 / 8.0) * mu ** 4 / (c2 * L ** 4 * G) * (5.0 * G - 8.0 * L)
        K = K + mu ** 6 * J2 * Rp ** 2 / (8.0 * c2 * L ** 5 * G ** 7) * (
            (G2 - 3.0 * H2) * (6.0 * L2 - 5.0 * G2)
            - 6.0 * (G2 - 3.0 * H2) * (4.0 * G2 - 3.0 * G * L - 5.0 * L2)
            - 9.0 * P * c2g)
    return K
