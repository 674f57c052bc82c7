#!/usr/bin/env python
# -*- coding: utf-8 -*-

import numpy as np
from numpy.polynomial import Polynomial


class Laurent(object):
    '''
    Finite Laurent polynomial in G: sum of c_k * G**k over integer k.

    The closed-form normal forms are sums of such terms once the actions are
    written with L = 1 and H = rho, so A(G), F(G), their derivatives and the
    tangency numerators are all exact Laurent objects.
    '''

    def __init__(self, terms=None):
        self.terms = {}
        for k, c in (terms or {}).items():
            c = float(c)
            if c != 0.0:
                self.terms[int(k)] = self.terms.get(int(k), 0.0) + c

    @classmethod
    def monomial(cls, power, coeff=1.0):
        return cls({power: coeff})

    def __call__(self, G):
        # complex arguments pass through for complex-step differentiation
        G = np.asarray(G)
        if not np.iscomplexobj(G):
            G = G.astype(float)
        out = np.zeros_like(G)
        for k, c in self.terms.items():
            out = out + c * G ** float(k)
        return out

    def deriv(self, m=1):
        res = self
        for _ in range(m):
            res = Laurent({k - 1: k * c for k, c in res.terms.items() if k != 0})
        return res

    def _coerce(self, other):
        if isinstance(other, Laurent):
            return other
        return Laurent({0: other})

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0.0) + c
        return Laurent(terms)

    __radd__ = __add__

    def __neg__(self):
        return Laurent({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        terms = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                terms[k1 + k2] = terms.get(k1 + k2, 0.0) + c1 * c2
        return Laurent(terms)

    __rmul__ = __mul__

    def shift(self, power):
        return Laurent({k + power: c for k, c in self.terms.items()})

    @property
    def low(self):
        return min(self.terms) if self.terms else 0

    @property
    def high(self):
        return max(self.terms) if self.terms else 0

    def numerator(self):
        '''
        split self = G**p * P(G) with P an ordinary polynomial and p the lowest power.
        @return (P, p)
        '''
        if not self.terms:
            return Polynomial([0.0]), 0
        p = self.low
        coef = np.zeros(self.high - p + 1)
        for k, c in self.terms.items():
            coef[k - p] = c
        return Polynomial(coef), p

    def __repr__(self):
        body = " + ".join("{0:g}*G^{1}".format(c, k)
                          for k, c in sorted(self.terms.items()))
        return "Laurent({0})".format(body or "0")
