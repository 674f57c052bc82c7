#!/usr/bin/env python
# -*- coding: utf-8 -*-

import csv
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq, fsolve
from scipy.spatial import cKDTree

from frozen_orbits import utils
from frozen_orbits.common import G_of_Z, xhat
from frozen_orbits.equilibria import enumerate_equilibria, lemon_vector_field
from frozen_orbits.errors import (AuditFailure, ChartExit, ConstraintError, DegenerateLinearization,
                                  DomainError, FrozenOrbitError, StepFailure)
from frozen_orbits.model import ModelParams
from frozen_orbits.reduction import LemonState, XiState, lemon_to_delaunay, xi_to_lemon
from frozen_orbits.stability import DEGENERATE, STABLE, UNSTABLE, poincare_hopf_audit

logger = utils.get_logger(__name__, log_file="frozen_orbits.log")

RTOL = 1e-12
ATOL = 1e-14
CHART_MARGIN = 1e-6
START_TOL = 1e-10
EPS_ENERGY = 1e-9
EPS_CONSTRAINT = 1e-9
FIBONACCI_POINTS = 100000
CONTOUR_POINTS = 4096
DEDUP_TOL = 1e-7
EIG_TOL = 1e-10


@dataclass(frozen=True)
class Trajectory:
    '''
    Samples of one orbit of the reduced flow.

    @param chart: "xi" (states are (xi1, xi2, xi3)) or "gG" (states are (g, G)).
    @param energy: K at every sample.
    @param residual: constraint residual at every sample; zero by construction in the gG chart.
    '''
    chart: str
    t: np.ndarray
    states: np.ndarray
    energy: np.ndarray
    residual: np.ndarray

    @property
    def energy_drift(self) -> float:
        return float(np.max(np.abs(self.energy - self.energy[0])))

    @property
    def constraint_drift(self) -> float:
        return float(np.max(self.residual))

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def check(self, eps_energy: float = EPS_ENERGY, eps_constraint: float = EPS_CONSTRAINT) -> bool:
        return self.energy_drift <= eps_energy and self.constraint_drift <= eps_constraint

    def to_csv(self, path: str):
        names = ('xi1', 'xi2', 'xi3') if self.chart == 'xi' else ('g', 'G')
        with open(path, 'w', newline='') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(('t',) + names + ('K', 'residual'))
            for t, s, k, res in zip(self.t, self.states, self.energy, self.residual):
                writer.writerow([utils.fmt_float(t)] + [utils.fmt_float(v) for v in s]
                                + [utils.fmt_float(k), utils.fmt_float(res)])


# -- flows --------------------------------------------------------------------

def xi_vector_field(params: ModelParams, xi) -> np.ndarray:
    '''
    dxi/dt = 2 G (grad K x xi), K = g(xi3) + f(xi3)(xi1^2 - xi2^2).
    '''
    xi1, xi2, xi3 = xi
    r = params.r
    g, f, g1, f1, _, _ = params.normal_form().gf(xi3, r)
    G = G_of_Z(xi3, r)
    grad = np.array([2.0 * f * xi1, -2.0 * f * xi2, g1 + f1 * (xi1 * xi1 - xi2 * xi2)], dtype=float)
    return 2.0 * float(G) * np.cross(grad, np.array([xi1, xi2, xi3], dtype=float))


def _xi_energy(params, states):
    nf = params.normal_form()
    X = states[:, 0] ** 2 - states[:, 1] ** 2
    return nf.K(X, states[:, 2], params.r)


def gG_vector_field(params: ModelParams, g_angle, G) -> np.ndarray:
    '''
    (dg/dt, dG/dt) = (dK/dG, -dK/dg) with K = A(G) + F(G) P(G) cos 2g,
    P = (G^2 - rho^2)(1 - G^2). Complex arguments pass through.
    '''
    nf = params.normal_form()
    r = params.r
    G2 = G * G
    P = (G2 - r) * (1.0 - G2)
    P_G = 2.0 * G * (1.0 + r - 2.0 * G2)
    A1 = nf.A(G, r, 1)
    F0 = nf.F(G, r)
    F1 = nf.F(G, r, 1)
    c2, s2 = np.cos(2.0 * g_angle), np.sin(2.0 * g_angle)
    return np.array([A1 + (F1 * P + F0 * P_G) * c2, 2.0 * F0 * P * s2])


def _check_start_xi(params, xi0):
    E = params.E
    res = abs(float(np.dot(xi0, xi0)) - E * E)
    if res > START_TOL:
        raise ConstraintError(f"initial xi off the sphere: residual {res}")


def integrate_xi(params: ModelParams, xi0, t_end: float, tol: float = RTOL, atol: float = ATOL,
                 n_samples: int = 201, project: bool = False) -> Trajectory:
    '''
    DOP853 integration of the sphere flow. With project=True the state is
    scaled back onto the sphere between output samples.
    Negative t_end integrates backwards.
    '''
    xi0 = np.asarray(xi0, dtype=float)
    _check_start_xi(params, xi0)
    E = params.E

    def rhs(_, y):
        return xi_vector_field(params, y)

    t = np.linspace(0.0, t_end, n_samples)
    if project:
        states = [xi0]
        for t0, t1 in zip(t[:-1], t[1:]):
            sol = solve_ivp(rhs, (t0, t1), states[-1], method='DOP853', rtol=tol, atol=atol)
            if sol.status < 0:
                raise StepFailure(f"xi integration failed at t={t0}: {sol.message}")
            y = sol.y[:, -1]
            states.append(y * (E / np.linalg.norm(y)))
        states = np.array(states)
    else:
        sol = solve_ivp(rhs, (0.0, t_end), xi0, method='DOP853', rtol=tol, atol=atol, t_eval=t)
        if sol.status < 0:
            raise StepFailure(f"xi integration failed: {sol.message}")
        states = sol.y.T
    residual = np.abs(np.sqrt(np.sum(states ** 2, axis=1)) - E)
    return Trajectory('xi', t, states, _xi_energy(params, states), residual)


def integrate_gG(params: ModelParams, G0: float, g0: float, t_end: float, tol: float = RTOL,
                 atol: float = ATOL, n_samples: int = 201) -> Trajectory:
    '''
    canonical flow in the Delaunay chart. Raises ChartExit when G comes within
    1e-6 of |rho| or 1, where the chart breaks down.
    '''
    rho = params.abs_rho
    if not rho < G0 < 1.0:
        raise DomainError(f"G0 = {G0} must lie in (|rho|, 1) = ({rho}, 1)")

    def rhs(_, y):
        return gG_vector_field(params, y[0], y[1])

    def near_equator(_, y):
        return y[1] - (rho + CHART_MARGIN)

    def near_circular(_, y):
        return (1.0 - CHART_MARGIN) - y[1]

    near_equator.terminal = near_circular.terminal = True
    t = np.linspace(0.0, t_end, n_samples)
    sol = solve_ivp(rhs, (0.0, t_end), [g0, G0], method='DOP853', rtol=tol, atol=atol, t_eval=t,
                    events=(near_equator, near_circular))
    if sol.status < 0:
        raise StepFailure(f"(g, G) integration failed: {sol.message}")
    if sol.status == 1:
        raise ChartExit(f"trajectory from (g, G) = ({g0}, {G0}) reached a cusp at t = {sol.t[-1]}")
    states = sol.y.T
    energy = params.normal_form().K_delaunay(states[:, 1], states[:, 0], params.r)
    return Trajectory('gG', sol.t, states, np.asarray(energy, dtype=float), np.zeros(len(sol.t)))


def time_reversal_error(params: ModelParams, xi0, t_end: float, tol: float = RTOL) -> float:
    forward = integrate_xi(params, xi0, t_end, tol, n_samples=2)
    back = integrate_xi(params, forward.final, -t_end, tol, n_samples=2)
    return float(np.linalg.norm(back.final - np.asarray(xi0, dtype=float)))


# -- brute force --------------------------------------------------------------

@dataclass(frozen=True)
class Candidate:
    '''
    A fixed point found without the s+/s- machinery.
    @param routes: "contour" (slope matching on the lemon rim), "sphere" (Fibonacci grid + Newton).
    '''
    kind: str
    lemon: LemonState
    routes: Tuple[str, ...] = ()

    @property
    def Z(self) -> float:
        return self.lemon.Z


def tangency_residual(params: ModelParams, sign: int, Z) -> np.ndarray:
    '''
    slope of the level curve through (Z, sign Xhat(Z)) minus the slope of the
    contour there, times f so that the asymptote f = 0 carries no pole.
    '''
    g, f, g1, f1, _, _ = params.normal_form().gf(Z, params.r)
    Xh = xhat(Z, params.r)
    level_slope_f = -(g1 + f1 * sign * Xh)
    contour_slope = sign * (-2.0 * np.asarray(Z))
    return level_slope_f - contour_slope * f


def _contour_route(params, grid_n):
    E = params.E
    Z = np.linspace(-E, E, grid_n)[1:-1]
    out = []
    for sign, kind in ((1, 'Eplus'), (-1, 'Eminus')):
        R = tangency_residual(params, sign, Z)

        def scalar(z, sign=sign):
            return float(tangency_residual(params, sign, z))

        for i in range(Z.size - 1):
            if R[i] == 0.0 or R[i] * R[i + 1] < 0.0:
                z = Z[i] if R[i] == 0.0 else brentq(scalar, Z[i], Z[i + 1], xtol=1e-14, rtol=1e-15)
                X = sign * float(xhat(z, params.r))
                out.append(Candidate(kind, LemonState(X, 0.0, float(z), params.rho), ('contour',)))
    return out


def fibonacci_sphere(n: int, radius: float) -> np.ndarray:
    i = np.arange(n, dtype=float)
    z = 1.0 - (2.0 * i + 1.0) / n
    rad = np.sqrt(1.0 - z * z)
    phi = i * np.pi * (3.0 - np.sqrt(5.0))
    return radius * np.stack([rad * np.cos(phi), rad * np.sin(phi), z], axis=1)


def _field_norms(params, pts):
    nf = params.normal_form()
    r = params.r
    g, f, g1, f1, _, _ = nf.gf(pts[:, 2], r)
    G = G_of_Z(pts[:, 2], r)
    grad = np.stack([2.0 * f * pts[:, 0], -2.0 * f * pts[:, 1],
                     g1 + f1 * (pts[:, 0] ** 2 - pts[:, 1] ** 2)], axis=1)
    F = 2.0 * G[:, None] * np.cross(grad, pts)
    return np.linalg.norm(F, axis=1)


def _sphere_route(params, n):
    E = params.E
    pts = fibonacci_sphere(n, E)
    norms = _field_norms(params, pts)
    tree = cKDTree(pts)
    _, idx = tree.query(pts, k=9)
    minima = np.where(np.all(norms[:, None] <= norms[idx[:, 1:]], axis=1))[0]

    def system(y):
        return xi_vector_field(params, y) + (np.dot(y, y) - E * E) * y

    out = []
    for i in minima:
        y, info, ier, _ = fsolve(system, pts[i], full_output=True, xtol=1e-14)
        if ier != 1 or np.linalg.norm(xi_vector_field(params, y)) > 1e-10 * max(E, 1e-300):
            continue
        radius = np.linalg.norm(y)
        # the penalty also vanishes at the origin, which is not on the sphere
        if abs(radius - E) > 1e-8 * E:
            logger.debug(f"sphere solve left the sphere at |y|={radius:.3e}, E={E:.3e}")
            continue
        y = y * (E / radius)
        lemon = xi_to_lemon(XiState(float(y[0]), float(y[1]), float(y[2]), params.rho))
        out.append(Candidate(_kind_of(params, lemon), lemon, ('sphere',)))
    return out


def _kind_of(params, lemon):
    E = params.E
    if abs(lemon.Z + E) < 1e-9:
        return 'E1'
    if abs(lemon.Z - E) < 1e-9:
        return 'E2'
    Xh = float(xhat(lemon.Z, params.r))
    if abs(lemon.Y) <= 1e-7 * max(Xh, 1e-300):
        return 'Eplus' if lemon.X > 0.0 else 'Eminus'
    return 'Ebar'


def _dedup(candidates, tol=DEDUP_TOL):
    out = []
    for c in candidates:
        for j, d in enumerate(out):
            same = (c.kind == d.kind and abs(c.lemon.Z - d.lemon.Z) < tol
                    and abs(c.lemon.X - d.lemon.X) < tol * 10.0 and abs(c.lemon.Y - d.lemon.Y) < tol * 10.0)
            if same:
                out[j] = Candidate(d.kind, d.lemon, tuple(sorted(set(d.routes) | set(c.routes))))
                break
        else:
            out.append(c)
    return out


def brute_force_equilibria(params: ModelParams, grid_n: int = CONTOUR_POINTS,
                           sphere_points: int = FIBONACCI_POINTS) -> List[Candidate]:
    '''
    fixed points located directly: the two poles, tangencies by slope
    matching on the rim of the lemon, and zeros of the sphere field from
    a Fibonacci grid. sphere_points=0 skips the last route.
    '''
    if grid_n < 512:
        raise DomainError(f"grid_n = {grid_n} is below 512")
    E = params.E
    poles = [Candidate('E1', LemonState(0.0, 0.0, -E, params.rho), ('contour',)),
             Candidate('E2', LemonState(0.0, 0.0, E, params.rho), ('contour',))]
    found = poles + _contour_route(params, grid_n)
    if sphere_points:
        found += _sphere_route(params, sphere_points)
    found = _dedup(found)
    found.sort(key=lambda c: (c.kind, c.Z, c.lemon.Y))
    logger.debug(f"brute force found {len(found)} fixed points at {params.to_dict()}")
    return found


# -- linearization ------------------------------------------------------------

@dataclass(frozen=True)
class Linearization:
    eigenvalues: Tuple[complex, complex]
    classification: str
    chart: str

    @property
    def magnitude(self) -> float:
        return float(max(abs(e) for e in self.eigenvalues))


def _gG_jacobian(params, g, G, method):
    J = np.zeros((2, 2))
    if method == 'complex':
        h = 1e-30
        J[:, 0] = np.imag(gG_vector_field(params, g + 1j * h, complex(G))) / h
        J[:, 1] = np.imag(gG_vector_field(params, complex(g), G + 1j * h)) / h
    else:
        h = 1e-6
        for k, (dg, dG) in enumerate(((h, 0.0), (0.0, h))):
            up = gG_vector_field(params, g + dg, G + dG)
            down = gG_vector_field(params, g - dg, G - dG)
            J[:, k] = np.real(up - down) / (2.0 * h)
    return J


def _pole_jacobian(params, Z):
    xi0 = np.array([0.0, 0.0, Z])
    h = 1e-7 * max(params.E, 1e-12)
    J = np.zeros((2, 2))
    for k in range(2):
        d = np.zeros(3)
        d[k] = h
        J[:, k] = (xi_vector_field(params, xi0 + d) - xi_vector_field(params, xi0 - d))[:2] / (2.0 * h)
    return J


def linearize_at(params: ModelParams, point, method: str = 'complex') -> Linearization:
    '''
    eigenvalues of the flow linearised at a fixed point: the (g, G) chart
    away from the cusps, the tangent plane of the sphere at E1 and E2.
    @param point: an Equilibrium or a Candidate.
    '''
    lemon = point.lemon
    residual = np.linalg.norm(lemon_vector_field(params, lemon.X, lemon.Y, lemon.Z))
    if residual > 1e-8:
        raise DomainError(f"not a fixed point: field norm {residual}")
    if lemon.at_cusp():
        J = _pole_jacobian(params, lemon.Z)
        chart = 'xi'
    else:
        s = lemon_to_delaunay(lemon)[0]
        J = _gG_jacobian(params, s.g_angle, s.G, method)
        chart = 'gG'
    eig = np.linalg.eigvals(J)
    mags = np.abs(eig)
    if np.all(mags < EIG_TOL):
        raise DegenerateLinearization(f"both eigenvalues below {EIG_TOL} at Z = {lemon.Z}")
    classification = UNSTABLE if np.max(np.abs(eig.real)) > 1e-6 * np.max(mags) else STABLE
    return Linearization((complex(eig[0]), complex(eig[1])), classification, chart)


# -- verification -------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    name: str
    params: Dict
    passed: bool
    detail: str = ""


def compare_with_analytic(params: ModelParams, sphere_points: int = 20000, z_tol: float = 1e-6) -> CheckResult:
    '''
    brute-force fixed points against enumerate_equilibria: same count, same Z
    within z_tol, same stability wherever the analytic verdict is not degenerate.
    '''
    analytic = enumerate_equilibria(params)
    brute = brute_force_equilibria(params, sphere_points=sphere_points)
    problems = []
    used = set()
    for eq in analytic:
        match = None
        for j, c in enumerate(brute):
            if j in used or c.kind != eq.kind:
                continue
            if abs(c.Z - eq.Z) <= z_tol and (eq.kind != 'Ebar' or np.sign(c.lemon.Y) == np.sign(eq.lemon.Y)):
                match = j
                break
        if match is None and eq.degenerate_root:
            continue
        if match is None:
            problems.append(f"{eq.label or eq.kind} at Z={eq.Z:.6g} not found by brute force")
            continue
        used.add(match)
        if eq.stability == DEGENERATE:
            continue
        try:
            lin = linearize_at(params, eq)
        except (DegenerateLinearization, FrozenOrbitError) as e:
            problems.append(f"{eq.label or eq.kind}: {e}")
            continue
        if lin.classification != eq.stability:
            problems.append(f"{eq.label or eq.kind}: linearization {lin.classification} vs {eq.stability}")
    extra = [brute[j] for j in range(len(brute)) if j not in used]
    for c in extra:
        problems.append(f"brute force {c.kind} at Z={c.Z:.6g} has no analytic counterpart")
    try:
        poincare_hopf_audit(analytic)
    except AuditFailure as e:
        problems.append(str(e))
    return CheckResult('oracle_equivalence', params.to_dict(), not problems, "; ".join(problems))


def conservation_check(params: ModelParams, t_end: float, eps_energy: float = EPS_ENERGY,
                       eps_constraint: float = EPS_CONSTRAINT, seed: int = 0) -> CheckResult:
    '''
    one trajectory from a seeded random start on the sphere.
    '''
    rng = np.random.default_rng(seed)
    v = rng.normal(size=3)
    xi0 = params.E * v / np.linalg.norm(v)
    traj = integrate_xi(params, xi0, t_end)
    ok = traj.check(eps_energy, eps_constraint)
    detail = f"energy drift {traj.energy_drift:.3g}, radius drift {traj.constraint_drift:.3g}"
    return CheckResult('conservation', params.to_dict(), ok, detail)


def regression_points(models: Optional[Sequence[str]] = None) -> List[Tuple[ModelParams, Dict]]:
    '''
    the built-in regression set, regression/<model>.json.
    '''
    out = []
    for name in utils.get_file_list('regression'):
        if models and name not in models:
            continue
        doc = utils.read_json_file('regression', name)
        for point in doc.get('points', []):
            params = ModelParams(name, point['rho'], point['lambda'], j4=point.get('j4'), jc=point.get('jc'))
            out.append((params, point))
    return out


def _expected_check(params, point):
    '''
    expected labels and stabilities listed with a regression point.
    '''
    expected = point.get('expect', {})
    if not expected:
        return None
    equilibria = enumerate_equilibria(params)
    found = {eq.label: eq.stability for eq in equilibria}
    problems = []
    for label, stab in sorted(expected.items()):
        if found.get(label) != stab:
            problems.append(f"{label}: expected {stab}, got {found.get(label)}")
    count = point.get('count')
    if count is not None and len(equilibria) != count:
        problems.append(f"expected {count} equilibria, got {len(equilibria)}")
    return CheckResult('regression', params.to_dict(), not problems, "; ".join(problems))


def run_verification(models: Optional[Sequence[str]] = None, t_end: float = 1000.0,
                     eps_energy: float = EPS_ENERGY, eps_constraint: float = EPS_CONSTRAINT) -> List[CheckResult]:
    results = []
    for params, point in regression_points(models):
        for check in (lambda: _expected_check(params, point),
                      lambda: compare_with_analytic(params),
                      lambda: conservation_check(params, t_end, eps_energy, eps_constraint)):
            try:
                res = check()
            except FrozenOrbitError as e:
                res = CheckResult('error', params.to_dict(), False, str(e))
            if res is not None:
                results.append(res)
                log = logger.info if res.passed else logger.error
                log(f"{res.name} {params.to_dict()}: {'pass' if res.passed else 'FAIL'} {res.detail}")
    return results
