#!/usr/bin/env python
# -*- coding: utf-8 -*-

import numpy as np
from numpy.polynomial import Polynomial
from frozen_orbits.common import NormalForm
from frozen_orbits.laurent import Laurent

MODEL = 'j2'


class J2NormalForm(NormalForm):
    '''
    closed-form secular Hamiltonian of the J2 problem, time rescaled by lambda:

        K = (G^2 - 3 rho^2) / (4 G^5) + 3 lambda / (128 G^11) [ ... + 2 (G^2 - 15 rho^2)(G^2 - 1)(G^2 - rho^2) cos 2g ]
    '''

    MODEL = MODEL

    def hamiltonian(self, r):
        lam = self.lam
        A = Laurent({-3: 0.25, -5: -0.75 * r})
        A = A + (3.0 * lam / 128.0) * Laurent({
            -5: -5.0,
            -6: -4.0,
            -7: 18.0 * r + 5.0,
            -8: 24.0 * r,
            -9: -5.0 * (r * r + 2.0 * r),
            -10: -36.0 * r * r,
            -11: -35.0 * r * r,
        })
        F = -(3.0 * lam / 64.0) * Laurent({-9: 1.0, -11: -15.0 * r})
        return A, F

    def endpoint_quadratic(self, sign):
        lam = self.lam
        if sign > 0:
            return 425.0 * lam, 80.0 - 146.0 * lam, 9.0 * lam - 16.0
        return 365.0 * lam, 80.0 - 82.0 * lam, 5.0 * lam - 16.0

    def equatorial_closed_form(self, sign, rho):
        lam = self.lam
        if sign > 0:
            return -(2.0 / 7.0) * (8.0 * rho ** 4 + lam * (-7.0 * rho ** 2 + 12.0 * rho + 31.0)) / lam
        return -(8.0 / 7.0) * (2.0 * rho ** 4 + 3.0 * lam * rho + 6.0 * lam) / lam

    def rho_crit_radical(self, sign):
        '''
        |rho| of the pitchfork bifurcations of E2, in radical form.
        '''
        lam = self.lam
        if sign > 0:
            inner = 85.0 * lam ** 2 + (3.0 * lam + 10.0) ** 2
            return np.sqrt(0.2 + (-4.0 * (3.0 * lam + 10.0) + 4.0 * np.sqrt(inner)) / (425.0 * lam))
        inner = -73.0 * lam ** 2 + (8.0 * lam + 10.0) ** 2
        return np.sqrt(0.2 + (-4.0 * (8.0 * lam + 10.0) + 4.0 * np.sqrt(inner)) / (365.0 * lam))

    def tangency_polynomial(self, sign, rho):
        lam = self.lam
        r = rho * rho
        if sign > 0:
            coef = [-715.0 * lam * r * r,
                    -360.0 * lam * r * r,
                    225.0 * lam * r * r + 198.0 * lam * r,
                    192.0 * lam * r,
                    -98.0 * lam * r + 21.0 * lam,
                    -24.0 * lam,
                    -160.0 * r - 15.0 * lam,
                    0.0,
                    32.0]
        else:
            coef = [-55.0 * lam * r * r,
                    -360.0 * lam * r * r,
                    -315.0 * lam * r * r - 378.0 * lam * r,
                    192.0 * lam * r,
                    350.0 * lam * r + 49.0 * lam,
                    -24.0 * lam,
                    -160.0 * r - 35.0 * lam,
                    0.0,
                    32.0]
        return Polynomial(coef)

    def ebar_G2(self, r):
        return 15.0 * np.asarray(r, dtype=float)

    def ebar_closed_form(self, rho):
        '''
        (Zbar, Xbar) of the vertical-asymptote intersection.
        '''
        rho = abs(rho)
        Zbar = (29.0 * rho ** 2 - 1.0) / 2.0
        Xbar = (-(1.0 / 3.0) * rho ** 2 * (-144.0 * np.sqrt(15.0) * rho - 2835.0 * rho ** 2 + 307.0)
                - 18000.0 * rho ** 6 / self.lam)
        return Zbar, Xbar

    def branch_rho2(self, sign, G):
        '''
        the admissible solution rho^2(G) of the tangency polynomial, read as a
        quadratic in rho^2 with G as parameter; strictly increasing on (0, 1].
        '''
        lam = self.lam
        G = np.asarray(G, dtype=float)
        if sign > 0:
            A = 80.0 * G ** 4 + lam * (49.0 * G ** 2 - 96.0 * G - 99.0)
            C = 45.0 * G ** 2 - 72.0 * G - 143.0
            D = 32.0 * G ** 4 + lam * (-15.0 * G ** 2 - 24.0 * G + 21.0)
            B = (A * A - 5.0 * lam * C * D) / 16.0
            return G ** 2 * (A - 4.0 * np.sqrt(B)) / (5.0 * lam * C)
        A = 80.0 * G ** 4 + lam * (-175.0 * G ** 2 - 96.0 * G + 189.0)
        C = 63.0 * G ** 2 + 72.0 * G + 11.0
        D = 32.0 * G ** 4 + lam * (-35.0 * G ** 2 - 24.0 * G + 49.0)
        B = (A * A + 5.0 * lam * C * D) / 16.0
        return -G ** 2 * (A - 4.0 * np.sqrt(B)) / (5.0 * lam * C)
