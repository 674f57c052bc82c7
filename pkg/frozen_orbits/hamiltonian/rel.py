#!/usr/bin/env python
# -*- coding: utf-8 -*-

import numpy as np
from numpy.polynomial import Polynomial
from frozen_orbits.common import NormalForm
from frozen_orbits.errors import ModelError
from frozen_orbits.hamiltonian.j2 import J2NormalForm
from frozen_orbits.laurent import Laurent

MODEL = 'rel'


class RelativisticNormalForm(NormalForm):
    '''
    J2 problem plus the first relativistic corrections; extra parameter
    jC = 1 / (lambda c^2). The secular relativistic term is taken as
    jC (3/8)(5 - 8/G), the form that reproduces the endpoint and zero-order
    listings of this model.
    '''

    MODEL = MODEL
    TANGENCY_SCALE = -128.0 / 3.0

    def __init__(self, lam, jc=0.0):
        if jc < 0.0:
            raise ModelError("jC must be non-negative, got {0}".format(jc))
        self.jc = float(jc)
        super(RelativisticNormalForm, self).__init__(lam, extra=jc)

    def hamiltonian(self, r):
        A, F = J2NormalForm.hamiltonian(self, r)
        lam, jc = self.lam, self.jc
        A = A + jc * (3.0 / 8.0) * Laurent({0: 5.0, -1: -8.0})
        A = A + (lam * jc / 8.0) * Laurent({
            -3: -29.0,
            -4: 18.0,
            -5: 36.0 + 87.0 * r,
            -6: -54.0 * r,
            -7: -108.0 * r,
        })
        F = F - (9.0 * lam * jc / 8.0) * Laurent({-7: 1.0})
        return A, F

    def endpoint_quadratic(self, sign):
        lam, jc = self.lam, self.jc
        if sign > 0:
            return (425.0 * lam,
                    80.0 - 146.0 * lam + 1672.0 * jc * lam,
                    9.0 * lam - 16.0 + 64.0 * jc - 392.0 * jc * lam)
        return (365.0 * lam,
                80.0 - 82.0 * lam + 1768.0 * jc * lam,
                5.0 * lam - 16.0 + 64.0 * jc - 488.0 * jc * lam)

    def equatorial_closed_form(self, sign, rho):
        # the listing drops a positive factor: 2 for s+, 4 for s-
        lam, jc = self.lam, self.jc
        den = lam * (12.0 * jc * rho ** 2 - 7.0)
        if sign > 0:
            num = ((8.0 * rho ** 6 - 110.0 * lam * rho ** 4 + 84.0 * rho ** 3 * lam + 186.0 * lam * rho ** 2) * jc
                   + 8.0 * rho ** 4 - 7.0 * lam * rho ** 2 + 12.0 * lam * rho + 31.0 * lam)
            return 2.0 * num / den
        num = ((4.0 * rho ** 6 - 61.0 * lam * rho ** 4 + 42.0 * rho ** 3 * lam + 99.0 * lam * rho ** 2) * jc
               + 4.0 * rho ** 4 + 6.0 * lam * rho + 12.0 * lam)
        return 4.0 * num / den

    def rho_crit_exists(self, sign):
        lam, jc = self.lam, self.jc
        if sign > 0:
            return lam >= 8.0 / 49.0 or jc < (16.0 - 9.0 * lam) / (64.0 - 392.0 * lam)
        return lam >= 8.0 / 61.0 or jc < (16.0 - 5.0 * lam) / (64.0 - 488.0 * lam)

    def rho_crit_radical(self, sign):
        lam, jc = self.lam, self.jc
        if not self.rho_crit_exists(sign):
            return None
        if sign > 0:
            inner = (43681.0 * jc ** 2 * lam ** 2 + 2784.0 * jc * lam ** 2 + 2480.0 * jc * lam
                     + 94.0 * lam ** 2 + 60.0 * lam + 100.0)
            rho2 = (-836.0 * jc * lam + 73.0 * lam - 40.0 + 4.0 * np.sqrt(inner)) / (425.0 * lam)
        else:
            inner = (48841.0 * jc ** 2 * lam ** 2 + 6602.0 * jc * lam ** 2 + 2960.0 * jc * lam
                     - 9.0 * lam ** 2 + 160.0 * lam + 100.0)
            rho2 = (-884.0 * jc * lam + 41.0 * lam - 40.0 + 4.0 * np.sqrt(inner)) / (365.0 * lam)
        if not 0.0 < rho2 < 1.0:
            return None
        return np.sqrt(rho2)

    def jc_tilde(self):
        '''
        jC above which rho~- > rho~+. The two endpoint quadratics share the
        root rho^2 = (1 + 24 jC)/15 exactly at this value.
        '''
        lam = self.lam
        return (397.0 * lam - 180.0 + np.sqrt(142321.0 * lam ** 2 - 1800.0 * lam + 32400.0)) / (7056.0 * lam)

    def tangency_polynomial(self, sign, rho):
        lam, jc = self.lam, self.jc
        r = rho * rho
        G = Polynomial([0.0, 1.0])
        if sign > 0:
            quad = -225.0 * G ** 2 * lam + 360.0 * G * lam + 715.0 * lam
            lin = (-2080.0 * G ** 6 * jc * lam + 1728.0 * G ** 5 * jc * lam + 160.0 * G ** 6
                   + 3696.0 * G ** 4 * jc * lam + 98.0 * G ** 4 * lam - 192.0 * G ** 3 * lam
                   - 198.0 * G ** 2 * lam)
            const = (128.0 * G ** 10 * jc + 320.0 * G ** 8 * jc * lam - 384.0 * G ** 7 * jc * lam
                     - 32.0 * G ** 8 - 720.0 * G ** 6 * jc * lam + 15.0 * G ** 6 * lam
                     + 24.0 * G ** 5 * lam - 21.0 * G ** 4 * lam)
        else:
            quad = 315.0 * G ** 2 * lam + 360.0 * G * lam + 55.0 * lam
            lin = (-2560.0 * G ** 6 * jc * lam + 1728.0 * G ** 5 * jc * lam + 160.0 * G ** 6
                   + 4368.0 * G ** 4 * jc * lam - 350.0 * G ** 4 * lam - 192.0 * G ** 3 * lam
                   + 378.0 * G ** 2 * lam)
            const = (128.0 * G ** 10 * jc + 608.0 * G ** 8 * jc * lam - 384.0 * G ** 7 * jc * lam
                     - 32.0 * G ** 8 - 1200.0 * G ** 6 * jc * lam + 35.0 * G ** 6 * lam
                     + 24.0 * G ** 5 * lam - 49.0 * G ** 4 * lam)
        return quad * r * r + lin * r + const

    def ebar_G2(self, r):
        r = np.asarray(r, dtype=float)
        if self.jc == 0.0:
            return 15.0 * r
        return (-1.0 + np.sqrt(1.0 + 1440.0 * self.jc * r)) / (48.0 * self.jc)

    def ebar_closed_form(self, rho):
        r = rho * rho
        return float(self.ebar_G2(r)) - (1.0 + r) / 2.0

    def zero_order_roots(self, rho):
        '''
        Z of the two equilibria of the lambda -> 0 problem; None when jC rho^2 > 1/80.
        '''
        jc, r = self.jc, rho * rho
        disc = 1.0 - 80.0 * jc * r
        if jc == 0.0 or disc < 0.0:
            return None
        base = -4.0 * jc * r - 4.0 * jc + 1.0
        return ((base - np.sqrt(disc)) / (8.0 * jc), (base + np.sqrt(disc)) / (8.0 * jc))

    @staticmethod
    def zero_order_curvature(family, x):
        '''
        sign-carrying curvature of the zero-order level sets at the E15/E16
        (family="rising") or E17/E18 (family="falling") equilibria, x = jC rho^2.
        The rising family is the one that changes sign at x = 7/810.
        '''
        root = np.sqrt(1.0 - 80.0 * x)
        quad = 10000.0 * x ** 2 - 600.0 * x + 7.0
        cubic = -144000.0 * x ** 3 + 28400.0 * x ** 2 - 880.0 * x + 7.0
        if family == 'rising':
            return 16.0 * root * (-cubic + root * quad)
        return 16.0 * root * (cubic + root * quad)
