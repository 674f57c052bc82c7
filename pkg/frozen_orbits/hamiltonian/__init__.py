from frozen_orbits.hamiltonian.j2 import J2NormalForm
from frozen_orbits.hamiltonian.j4 import J4NormalForm
from frozen_orbits.hamiltonian.rel import RelativisticNormalForm
