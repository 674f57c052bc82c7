#!/usr/bin/env python
# -*- coding: utf-8 -*-

import numpy as np
from frozen_orbits import utils
from frozen_orbits.errors import DomainError, ModelError, PoleError
from frozen_orbits.laurent import Laurent

logger = utils.get_logger(__name__, log_file="frozen_orbits.log")

# sample values of r = rho^2 used to split every object into a quadratic in r
R_NODES = (0.0, 0.5, 1.0)
POLE_TOL = 1e-10
ENDPOINT_SCALE = -64.0 / 3.0


def quadratic_parts(values):
    '''
    interpolate q(r) = a r^2 + b r + c through q(0), q(1/2), q(1).
    Works on floats, arrays and Laurent objects alike.
    @return (a, b, c)
    '''
    q0, qh, q1 = values
    a = 2.0 * q1 - 4.0 * qh + 2.0 * q0
    b = q1 - q0 - a
    return a, b, q0


def z_laurent(r):
    return Laurent({2: 1.0, 0: -(1.0 + r) / 2.0})


def xhat_laurent(r):
    return Laurent({4: -1.0, 2: 1.0 + r, 0: -r})


def Z_of_G(G, r):
    return np.asarray(G) ** 2 - (1.0 + r) / 2.0


def G_of_Z(Z, r):
    arg = np.asarray(Z, dtype=float) + (1.0 + r) / 2.0
    if np.any(arg <= 0.0):
        raise DomainError(
            "Z must exceed -(1+rho^2)/2 = {0}".format(-(1.0 + r) / 2.0))
    return np.sqrt(arg)


def xhat(Z, r):
    E = (1.0 - r) / 2.0
    return E * E - np.asarray(Z) ** 2


class NormalForm(object):
    '''
    NormalForm is the super class of the closed-form secular Hamiltonians.

    In units L = 1, H = rho every model reads K = A(G) + F(G) X with
    X = (G^2 - rho^2)(1 - G^2) cos 2g, so g(Z) = A(G) and f(Z) = F(G) once
    G^2 = Z + (1 + rho^2)/2. A and F are Laurent polynomials in G whose
    coefficients are at most quadratic in r = rho^2; they are stored as three
    Laurent parts so that any quantity can be evaluated on arrays of (G, r).
    '''

    MODEL = None

    def __init__(self, lam, extra=0.0):
        '''
        @param lam: J2 Rp^2 in semi-major-axis units, in (0, 1).
        @param extra: the model parameter beyond lambda, j4 or jC; 0 for J2.
        '''
        if not 0.0 < lam < 1.0:
            raise ModelError("lambda must lie in (0, 1), got {0}".format(lam))
        self.lam = float(lam)
        self.extra = float(extra)

        forms = [self.hamiltonian(r) for r in R_NODES]
        self._A = [quadratic_parts([A.deriv(m) for A, _ in forms])
                   for m in range(3)]
        self._F = [quadratic_parts([F.deriv(m) for _, F in forms])
                   for m in range(3)]
        self._N = {}
        for sign in (1, -1):
            self._N[sign] = quadratic_parts(
                [self._numerator_at(sign, r, A, F) for r, (A, F) in zip(R_NODES, forms)])

    def hamiltonian(self, r):
        '''
        This method needs to be override by all subclasses.
        @return (A, F) as Laurent polynomials in G for the given r = rho^2.
        '''
        raise NotImplementedError

    def describe(self):
        return {'model': self.MODEL, 'lambda': self.lam, 'extra': self.extra}

    @staticmethod
    def _numerator_at(sign, r, A, F):
        # N = -A_G -/+ F_G Xhat +/- 4 G Z F, equal to 2 G f s_sign
        G = Laurent({1: 1.0})
        return (-A.deriv() - sign * F.deriv() * xhat_laurent(r)
                + sign * 4.0 * G * z_laurent(r) * F)

    @staticmethod
    def _combine(parts, r):
        a, b, c = parts
        return a * (r * r) + b * r + c

    @staticmethod
    def _evaluate(parts, G, r):
        a, b, c = parts
        r = np.asarray(r, dtype=float)
        return a(G) * r * r + b(G) * r + c(G)

    def A(self, G, r, m=0):
        return self._evaluate(self._A[m], G, r)

    def F(self, G, r, m=0):
        return self._evaluate(self._F[m], G, r)

    def laurent_A(self, r, m=0):
        return self._combine(self._A[m], r)

    def laurent_F(self, r, m=0):
        return self._combine(self._F[m], r)

    def numerator_parts(self, sign):
        '''
        @return (a, b, c) Laurent polynomials in G with N_sign = a r^2 + b r + c.
        '''
        return self._N[sign]

    def numerator_laurent(self, sign, r):
        return self._combine(self._N[sign], r)

    def numerator(self, sign, G, r):
        return self._evaluate(self._N[sign], G, r)

    def numerator_scale(self, sign, G, r):
        '''
        sum of the absolute values of the terms of N_sign, the yardstick of degeneracy tests.
        '''
        Z = Z_of_G(G, r)
        X = (1.0 - G * G) * (G * G - r)
        return (np.abs(self.A(G, r, 1)) + np.abs(self.F(G, r, 1) * X)
                + np.abs(4.0 * G * Z * self.F(G, r)))

    def gf(self, Z, r):
        '''
        g, f and their first two Z-derivatives.
        @return (g, f, g_Z, f_Z, g_ZZ, f_ZZ)
        '''
        G = G_of_Z(Z, r)
        A0, A1, A2 = (self.A(G, r, m) for m in range(3))
        F0, F1, F2 = (self.F(G, r, m) for m in range(3))
        g1 = A1 / (2.0 * G)
        f1 = F1 / (2.0 * G)
        g2 = (A2 - A1 / G) / (4.0 * G * G)
        f2 = (F2 - F1 / G) / (4.0 * G * G)
        return A0, F0, g1, f1, g2, f2

    def K(self, X, Z, r):
        G = G_of_Z(Z, r)
        return self.A(G, r) + self.F(G, r) * np.asarray(X)

    def K_delaunay(self, G, g_angle, r):
        rho = np.sqrt(r)
        Gr = np.real(G)
        if np.any(Gr < rho - 1e-14) or np.any(Gr > 1.0 + 1e-14):
            raise DomainError("G must lie in [|rho|, 1] = [{0}, 1]".format(rho))
        X = (G * G - r) * (1.0 - G * G) * np.cos(2.0 * np.asarray(g_angle))
        return self.A(G, r) + self.F(G, r) * X

    def f_max(self, r, n=257):
        G = np.linspace(np.sqrt(r), 1.0, n)
        return float(np.max(np.abs(self.F(G, r))))

    def s(self, sign, Z, r):
        '''
        s_+ (sign=1) or s_- (sign=-1): zero exactly at the tangencies of the
        level curves with the lemon contour X = +/- Xhat(Z).
        '''
        G = G_of_Z(Z, r)
        F = self.F(G, r)
        if np.any(np.abs(F) < POLE_TOL * self.f_max(r)):
            raise PoleError("s evaluated on the vertical asymptote f(Z) = 0")
        return self.numerator(sign, G, r) / (2.0 * G * F)

    def endpoint_quadratic(self, sign):
        '''
        coefficients (a, b, c) of a r^2 + b r + c, proportional to N_sign at G = 1.
        Subclasses override with the closed-form listing; this generic route
        serves as its cross-check.
        '''
        a, b, c = self._N[sign]
        return tuple(ENDPOINT_SCALE * float(part(1.0)) for part in (a, b, c))

    def rho_crit(self, sign):
        '''
        |rho| at which E2 is degenerate for the given family, i.e. the
        admissible root r in (0, 1) of the endpoint quadratic.
        @return rho, or None when no admissible root exists.
        '''
        a, b, c = self.endpoint_quadratic(sign)
        disc = b * b - 4.0 * a * c
        if disc < 0.0:
            return None
        roots = []
        q = -0.5 * (b + np.copysign(np.sqrt(disc), b))
        if q != 0.0:
            roots.append(c / q)
        if a != 0.0:
            roots.append(q / a)
        admissible = sorted(x for x in roots if 0.0 < x < 1.0)
        if not admissible:
            return None
        if len(admissible) > 1:
            logger.debug("two admissible endpoint roots for sign {0}: {1}".format(sign, admissible))
        return float(np.sqrt(admissible[0]))

    def endpoint_s(self, sign, which, rho):
        '''
        closed-form s_sign at the cusps of the lemon.
        @param which: "equatorial" (Z = -E, G = |rho|) or "circular" (Z = E, G = 1).
        '''
        rho = abs(rho)
        if which == 'equatorial':
            return self.equatorial_closed_form(sign, rho)
        if which == 'circular':
            r = rho * rho
            a, b, c = self.endpoint_quadratic(sign)
            N1 = (a * r * r + b * r + c) / ENDPOINT_SCALE
            return N1 / (2.0 * float(self.F(1.0, r)))
        raise DomainError("unknown endpoint '{0}'".format(which))

    def equatorial_closed_form(self, sign, rho):
        '''
        This method needs to be override by all subclasses.
        '''
        raise NotImplementedError

    def ebar_G(self, r):
        '''
        roots of F in [|rho|, 1]: the G coordinate of the vertical asymptote.
        '''
        P, _ = self.laurent_F(r).numerator()
        rho = np.sqrt(r)
        out = []
        for root in P.roots():
            if abs(root.imag) > 1e-12 * max(1.0, abs(root.real)):
                continue
            G = float(root.real)
            if rho <= G <= 1.0:
                out.append(G)
        return sorted(out)

    def ebar_G2(self, r):
        '''
        closed-form G^2 of the vertical asymptote, vectorised over r.
        '''
        raise NotImplementedError

    def tangency_polynomial(self, sign, rho):
        '''
        the polynomial in G of the closed-form listing whose zeros are the
        E+ (sign=1) or E- (sign=-1) tangencies.
        '''
        raise NotImplementedError

    # ratio between the listed tangency polynomial and G^12 N_sign
    TANGENCY_SCALE = 128.0 / 3.0
