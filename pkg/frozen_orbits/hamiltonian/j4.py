#!/usr/bin/env python
# -*- coding: utf-8 -*-

import numpy as np
from numpy.polynomial import Polynomial
from frozen_orbits.common import NormalForm
from frozen_orbits.hamiltonian.j2 import J2NormalForm
from frozen_orbits.laurent import Laurent

MODEL = 'j4'

# j4 = -J4 / J2^2 of the Vinti problem
J4_VINTI = 1.0


class J4NormalForm(NormalForm):
    '''
    J2 problem plus the averaged J4 term; extra parameter j4 = -J4 / J2^2.
    '''

    MODEL = MODEL

    def __init__(self, lam, j4=0.0):
        self.j4 = float(j4)
        super(J4NormalForm, self).__init__(lam, extra=j4)

    def hamiltonian(self, r):
        A, F = J2NormalForm.hamiltonian(self, r)
        lam, j4 = self.lam, self.j4
        A = A - (3.0 * j4 * lam / 128.0) * Laurent({
            -5: -9.0,
            -7: 15.0 + 90.0 * r,
            -9: -(150.0 * r + 105.0 * r * r),
            -11: 175.0 * r * r,
        })
        F = F + (15.0 * lam * j4 / 64.0) * Laurent({-9: 1.0, -11: -7.0 * r})
        return A, F

    def endpoint_quadratic(self, sign):
        lam, j4 = self.lam, self.j4
        if sign > 0:
            return (lam * (420.0 * j4 + 425.0),
                    80.0 - lam * (280.0 * j4 + 146.0),
                    lam * (20.0 * j4 + 9.0) - 16.0)
        return (lam * (560.0 * j4 + 365.0),
                80.0 - lam * (440.0 * j4 + 82.0),
                lam * (40.0 * j4 + 5.0) - 16.0)

    def equatorial_closed_form(self, sign, rho):
        lam, j4 = self.lam, self.j4
        den = lam * (15.0 * j4 - 7.0)
        if sign > 0:
            return 2.0 * (8.0 * rho ** 4 + lam * (31.0 + 12.0 * rho - 7.0 * rho ** 2
                                                  - 5.0 * j4 * (3.0 * rho ** 2 - 7.0))) / den
        return 4.0 * (4.0 * rho ** 4 + lam * (6.0 * (2.0 + rho) - 5.0 * j4 * (3.0 * rho ** 2 - 5.0))) / den

    def rho_crit_radical(self, sign):
        lam, j4 = self.lam, self.j4
        if sign > 0:
            inner = 50.0 + (30.0 - 140.0 * j4) * lam + (47.0 + 255.0 * j4 + 350.0 * j4 ** 2) * lam ** 2
            rho2 = ((lam * (140.0 * j4 + 73.0) - 40.0 + 4.0 * np.sqrt(2.0) * np.sqrt(inner))
                    / (5.0 * (84.0 * j4 + 85.0) * lam))
        else:
            inner = 100.0 + (160.0 - 540.0 * j4) * lam - (9.0 - 40.0 * j4 - 1625.0 * j4 ** 2) * lam ** 2
            rho2 = ((lam * (220.0 * j4 + 41.0) - 40.0 + 4.0 * np.sqrt(inner))
                    / (5.0 * (112.0 * j4 + 73.0) * lam))
        return np.sqrt(rho2)

    def tangency_polynomial(self, sign, rho):
        lam, j4 = self.lam, self.j4
        r = rho * rho
        G = Polynomial([0.0, 1.0])
        if sign > 0:
            quad = (315.0 * j4 + 225.0) * G ** 2 - 360.0 * G - 1155.0 * j4 - 715.0
            lin = 80.0 * G ** 4 + lam * ((35.0 * j4 + 49.0) * G ** 2 - 96.0 * G - 315.0 * j4 - 99.0)
            const = 32.0 * G ** 4 + lam * ((-5.0 * j4 - 15.0) * G ** 2 - 24.0 * G - 35.0 * j4 + 21.0)
        else:
            quad = (1575.0 * j4 - 315.0) * G ** 2 - 360.0 * G - 2695.0 * j4 - 55.0
            lin = 80.0 * G ** 4 + lam * ((595.0 * j4 - 175.0) * G ** 2 - 96.0 * G - 1035.0 * j4 + 189.0)
            const = 32.0 * G ** 4 + lam * ((95.0 * j4 - 35.0) * G ** 2 - 24.0 * G - 175.0 * j4 + 49.0)
        return lam * r * r * quad - 2.0 * r * G ** 2 * lin + G ** 4 * const

    def ebar_G2(self, r):
        j4 = self.j4
        return 5.0 * np.asarray(r, dtype=float) * (7.0 * j4 - 3.0) / (5.0 * j4 - 1.0)

    def ebar_closed_form(self, rho):
        '''
        Zbar only; Xbar has no compact form for this model.
        '''
        j4, r = self.j4, rho * rho
        return (65.0 * j4 * r - 29.0 * r - 5.0 * j4 + 1.0) / (2.0 * (5.0 * j4 - 1.0))
