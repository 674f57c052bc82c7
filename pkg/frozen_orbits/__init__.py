'''
Frozen orbits of the doubly averaged zonal satellite problem: equilibria,
stability, bifurcation thresholds and series approximations for the J2,
J2 + J4 and J2 + relativistic normal forms.
'''

from frozen_orbits.errors import FrozenOrbitError
from frozen_orbits.model import ModelParams, PhysicalUnits, nondimensionalize

__version__ = '0.1.0'

__all__ = ['FrozenOrbitError', 'ModelParams', 'PhysicalUnits', 'nondimensionalize']
