#!/usr/bin/env python
# -*- coding: utf-8 -*-


class FrozenOrbitError(Exception):
    '''
    base class of every error raised by the library.
    '''


class DomainError(FrozenOrbitError):
    '''
    argument outside the admissible range, e.g. Z <= -(1+rho^2)/2 or G outside [|rho|, 1].
    '''


class ModelError(FrozenOrbitError):
    '''
    parameters inconsistent with the selected model.
    '''


class UnitsError(FrozenOrbitError):
    pass


class ConstraintError(FrozenOrbitError):
    '''
    a state violates its chart constraint (sphere, lemon or pi surface).
    '''


class AngleUndefined(FrozenOrbitError):
    '''
    the argument of perigee has no meaning on circular or equatorial orbits.
    '''


class PoleError(FrozenOrbitError):
    '''
    s+/s- or the level curve evaluated on the vertical asymptote f(Z) = 0.
    '''


class DegenerateTangency(FrozenOrbitError):
    pass


class AuditFailure(FrozenOrbitError):
    '''
    index sum over the sphere differs from 2 with no degenerate point present.
    '''


class OrderUnsupported(FrozenOrbitError):
    pass


class StepFailure(FrozenOrbitError):
    pass


class ChartExit(FrozenOrbitError):
    '''
    a (g,G) trajectory reached a cusp of the lemon where the chart breaks down.
    '''


class DegenerateLinearization(FrozenOrbitError):
    pass


class ConfigError(FrozenOrbitError):
    pass


class SmallRhoWarning(UserWarning):
    pass
