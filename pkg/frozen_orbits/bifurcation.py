#!/usr/bin/env python
# -*- coding: utf-8 -*-

import csv
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from frozen_orbits import utils
from frozen_orbits.common import G_of_Z, Z_of_G, xhat
from frozen_orbits.equilibria import LABELS, enumerate_equilibria
from frozen_orbits.errors import AuditFailure, DomainError, FrozenOrbitError
from frozen_orbits.model import ModelParams, get_normal_form
from frozen_orbits.series import endpoint_rho_roots, rho_crit_exact
from frozen_orbits.stability import DEGENERATE, STABLE, poincare_hopf_audit

logger = utils.get_logger(__name__, log_file="frozen_orbits.log")

CLOSED_FORM = 'ClosedForm'
MAXIMIZATION = 'Maximization'
ROOT_COINCIDENCE = 'RootCoincidence'

SN_GRID = np.unique(np.concatenate([np.geomspace(1e-3, 1e-2, 128, endpoint=False),
                                    np.linspace(1e-2, 1.0 - 1e-9, 2048)]))
EBAR_GRID = np.unique(np.concatenate([np.geomspace(1e-6, 1e-3, 400, endpoint=False),
                                      np.linspace(1e-3, 1.0 - 1e-6, 4000)]))
SN_GTOL = 1e-10
SN_EDGE = 1e-6
RHO_XTOL = 1e-14

TABLE_LAMBDA = 0.001
SCAN_RANGE = (-1.6, 1.2)
SCAN_STEP = 0.002
SCAN_XTOL = 1e-6
SCAN_MERGE = 1e-3
EXACT_BOUNDARIES = (-12.0 / 25.0, -31.0 / 35.0)

EVENT_NAMES = {
    ('PitchforkE2', 1): 'rho_plus',
    ('PitchforkE2', -1): 'rho_minus',
    ('PitchforkE1', 1): 'rho_tri_up',
    ('PitchforkE1', -1): 'rho_tri_down',
    ('SaddleNode', 1): 'rho_sn_up',
    ('SaddleNode', -1): 'rho_sn_down',
    ('EbarExchange', 1): 'rho_diamond',
    ('EbarExchange', -1): 'rho_square',
}


def _kind(base, sign):
    return "{0}_{1}".format(base, 'plus' if sign > 0 else 'minus')


@dataclass(frozen=True)
class BaseParams:
    '''
    A ModelParams without rho: what a sweep over |rho| keeps fixed.
    '''
    model: str
    lam: float
    j4: Optional[float] = None
    jc: Optional[float] = None

    def at(self, rho: float) -> ModelParams:
        return ModelParams(self.model, rho, self.lam, j4=self.j4, jc=self.jc)

    @property
    def extra(self) -> float:
        if self.model == 'j4':
            return self.j4
        if self.model == 'rel':
            return self.jc
        return 0.0

    def normal_form(self):
        return get_normal_form(self.model, self.lam, float(self.extra))

    def to_dict(self) -> Dict:
        out = {'model': self.model, 'lambda': self.lam}
        if self.j4 is not None:
            out['j4'] = self.j4
        if self.jc is not None:
            out['jc'] = self.jc
        return out


@dataclass(frozen=True)
class BifurcationEvent:
    rho_star: float
    event_kind: str
    name: str
    affected: Tuple[str, ...] = ()
    detection: str = CLOSED_FORM

    def to_dict(self) -> Dict:
        return {'rho_star': self.rho_star, 'event_kind': self.event_kind, 'name': self.name,
                'affected': list(self.affected), 'detection': self.detection}


@dataclass(frozen=True)
class Regime:
    rho_low: float
    rho_high: float
    rho_sample: float
    inventory: Tuple[Tuple[str, str, str], ...]
    audit: str

    def labels(self) -> List[str]:
        return sorted({label for label, _, _ in self.inventory})

    def to_dict(self) -> Dict:
        return {'rho_low': self.rho_low, 'rho_high': self.rho_high, 'rho_sample': self.rho_sample,
                'inventory': [{'label': l, 'kind': k, 'stability': s} for l, k, s in self.inventory],
                'audit': self.audit}


@dataclass(frozen=True)
class BifurcationDiagram:
    params_base: BaseParams
    events: Tuple[BifurcationEvent, ...]
    regimes: Tuple[Regime, ...] = ()

    def to_dict(self) -> Dict:
        return {'params': self.params_base.to_dict(),
                'events': [e.to_dict() for e in self.events],
                'regimes': [r.to_dict() for r in self.regimes]}


def _static_affected(model, base, sign):
    table = LABELS[model]
    i = 0 if sign > 0 else 1
    if base == 'PitchforkE2':
        return ('E2', table['principal'][i])
    if base == 'PitchforkE1':
        return ('E1',) + ((table['equatorial'][i],) if 'equatorial' in table else ())
    if base == 'SaddleNode':
        names = tuple(table[f][i] for f in ('rising', 'falling') if f in table)
        return names or (table['principal'][i],)
    return ('Ebar', table['principal'][i])


def _named(found, base, sign, detection, model):
    '''
    the largest root takes the plain name, the second one "_bis", further ones a counter.
    '''
    out = []
    stem = EVENT_NAMES[(base, sign)]
    for k, rho in enumerate(sorted(found, reverse=True)):
        name = stem if k == 0 else (stem + '_bis' if k == 1 else "{0}_{1}".format(stem, k + 1))
        out.append(BifurcationEvent(float(rho), _kind(base, sign), name,
                                    _static_affected(model, base, sign), detection))
    return out


# -- pitchforks ---------------------------------------------------------------

def _pitchfork_E2(base):
    params = base.at(0.5)
    plus, minus = rho_crit_exact(params)
    out = []
    for sign, value in ((1, plus), (-1, minus)):
        if value is not None:
            out += _named([value], 'PitchforkE2', sign, CLOSED_FORM, base.model)
    return out


def _pitchfork_E1(base):
    params = base.at(0.5)
    out = []
    for sign in (1, -1):
        found = endpoint_rho_roots(params, sign)
        out += _named(found, 'PitchforkE1', sign, ROOT_COINCIDENCE, base.model)
    return out


# -- saddle-nodes -------------------------------------------------------------

def _admissible_roots(nf, sign, G):
    '''
    roots r in (0, G^2) of N_sign(G, r) = 0, sorted; NaN where absent.
    @return array of shape (len(G), 2) and the count per G.
    '''
    a, b, c = (part(G) for part in nf.numerator_parts(sign))
    G = np.asarray(G, dtype=float)
    with np.errstate(invalid='ignore', divide='ignore', over='ignore'):
        disc = b * b - 4.0 * a * c
        sq = np.sqrt(np.where(disc >= 0.0, disc, np.nan))
        q = -0.5 * (b + np.copysign(sq, b))
        r1 = np.where(a != 0.0, q / a, np.nan)
        r2 = np.where(q != 0.0, c / q, np.nan)
    both = np.stack([r1, r2], axis=-1).reshape(G.size, 2)
    upper = (G * G).reshape(G.size, 1)
    ok = np.isfinite(both) & (both > 0.0) & (both < upper)
    both = np.where(ok, both, np.nan)
    both.sort(axis=1)
    return both, ok.sum(axis=1)


def _saddle_nodes(base, sign):
    '''
    interior maxima of each admissible branch rho^2(G) of N_sign = 0. A family
    is reported as soon as the maximum exists, however small rho* is.
    '''
    nf = base.normal_form()
    G = SN_GRID
    roots, count = _admissible_roots(nf, sign, G)
    found = []
    for k in range(2):
        branch = roots[:, k]
        for i in range(1, G.size - 1):
            if not (count[i - 1] == count[i] == count[i + 1] > k):
                continue
            if not (branch[i] >= branch[i - 1] and branch[i] > branch[i + 1]):
                continue

            def objective(x, k=k, n=count[i]):
                rr, cc = _admissible_roots(nf, sign, np.array([x]))
                if cc[0] != n:
                    return np.inf
                return -rr[0, k]

            res = minimize_scalar(objective, bounds=(G[i - 1], G[i + 1]), method='bounded',
                                  options={'xatol': SN_GTOL})
            G_star = float(res.x) if np.isfinite(res.fun) else float(G[i])
            r_star = -float(res.fun) if np.isfinite(res.fun) else float(branch[i])
            if G_star > 1.0 - SN_EDGE:
                logger.warning(f"saddle-node of sign {sign} at G = 1 merges with the E2 pitchfork: suppressed")
                continue
            logger.debug(f"saddle-node sign {sign}: G* = {G_star}, rho* = {np.sqrt(r_star)}")
            found.append(np.sqrt(r_star))
    return _named(found, 'SaddleNode', sign, MAXIMIZATION, base.model)


# -- Ebar exchanges -----------------------------------------------------------

def ebar_gap(base: BaseParams, sign: int, rho) -> np.ndarray:
    '''
    Xhat(Zbar) - sign * Xbar over an array of |rho|: zero where the Ebar pair
    lands on the contour branch of the E+ (sign=1) or E- (sign=-1) family.
    NaN where Zbar is outside the lemon.
    '''
    nf = base.normal_form()
    r = np.asarray(rho, dtype=float) ** 2
    with np.errstate(invalid='ignore', divide='ignore', over='ignore'):
        G2 = nf.ebar_G2(r)
        inside = np.isfinite(G2) & (G2 > r) & (G2 < 1.0)
        G = np.sqrt(np.where(inside, G2, np.nan))
        Xbar = -nf.A(G, r, 1) / nf.F(G, r, 1)
        Xh = xhat(Z_of_G(G, r), r)
        gap = Xh - sign * Xbar
    return np.where(inside, gap, np.nan)


def _gap_roots(base, sign):
    rho = EBAR_GRID
    phi = ebar_gap(base, sign, rho)

    def scalar(x):
        return float(ebar_gap(base, sign, np.array([x]))[0])

    found = []
    for i in range(rho.size - 1):
        a, b = phi[i], phi[i + 1]
        if not (np.isfinite(a) and np.isfinite(b)):
            continue
        try:
            if a == 0.0:
                found.append(rho[i])
            elif a * b < 0.0:
                found.append(brentq(scalar, rho[i], rho[i + 1], xtol=RHO_XTOL))
            elif 0 < i and np.isfinite(phi[i - 1]) and abs(a) < abs(phi[i - 1]) and abs(a) < abs(b):
                # a dip towards zero between samples may hide two crossings
                s = np.sign(a)
                res = minimize_scalar(lambda x: s * scalar(x), bounds=(rho[i - 1], rho[i + 1]),
                                      method="bounded", options={"xatol": RHO_XTOL})
                if np.isfinite(res.fun) and res.fun < 0.0:
                    found.append(brentq(scalar, rho[i - 1], res.x, xtol=RHO_XTOL))
                    found.append(brentq(scalar, res.x, rho[i + 1], xtol=RHO_XTOL))
        except ValueError as e:
            logger.debug(f"Ebar gap root near rho = {rho[i]} skipped: {e}")
    return sorted(set(float(x) for x in found), reverse=True)


def _ebar_exchanges(base, sign):
    return _named(_gap_roots(base, sign), 'EbarExchange', sign, ROOT_COINCIDENCE, base.model)


def detect_events(base: BaseParams, affected: bool = False) -> List[BifurcationEvent]:
    '''
    every bifurcation in |rho| for fixed (lambda, j4) or (lambda, jC), sorted
    by decreasing rho_star.
    @param affected: replace the labels implied by the event kind with the
                     labels that actually change across each event.
    '''
    events = _pitchfork_E2(base) + _pitchfork_E1(base)
    for sign in (1, -1):
        events += _saddle_nodes(base, sign)
        events += _ebar_exchanges(base, sign)
    events = [e for e in events if 0.0 < e.rho_star < 1.0]
    events.sort(key=lambda e: (-e.rho_star, e.name))
    if affected:
        events = [_measured_affected(base, e) for e in events]
    logger.debug(f"{len(events)} events for {base.to_dict()}: {[e.name for e in events]}")
    return events


def _measured_affected(base, event, rel=1e-6):
    sides = []
    for rho in (event.rho_star * (1.0 - rel), min(event.rho_star * (1.0 + rel), 1.0 - 1e-12)):
        sides.append({eq.label for eq in enumerate_equilibria(base.at(rho), classify=False)})
    changed = tuple(sorted(sides[0] ^ sides[1]))
    return BifurcationEvent(event.rho_star, event.event_kind, event.name,
                            changed or event.affected, event.detection)


# -- diagrams and regimes -----------------------------------------------------

def inventory_at(params: ModelParams) -> Tuple[Tuple[Tuple[str, str, str], ...], str]:
    equilibria = enumerate_equilibria(params)
    inventory = tuple(sorted((eq.label or eq.kind, eq.kind, eq.stability) for eq in equilibria))
    try:
        status = poincare_hopf_audit(equilibria).status
    except AuditFailure as e:
        logger.error(f"audit failed at {params.to_dict()}: {e}")
        status = 'Fail'
    return inventory, status


def build_diagram(base: BaseParams, events: Optional[Sequence[BifurcationEvent]] = None) -> BifurcationDiagram:
    '''
    events plus the equilibrium inventory at the middle of every interval between them.
    '''
    if events is None:
        events = detect_events(base)
    cuts = [1.0] + sorted({e.rho_star for e in events}, reverse=True) + [0.0]
    regimes = []
    for high, low in zip(cuts[:-1], cuts[1:]):
        if high - low < 1e-12:
            continue
        mid = 0.5 * (high + low)
        inventory, status = inventory_at(base.at(mid))
        regimes.append(Regime(low, high, mid, inventory, status))
    return BifurcationDiagram(base, tuple(events), tuple(regimes))


def ordering_chain(events: Sequence[BifurcationEvent], tol: float = 1e-12) -> str:
    '''
    "rho_minus>=rho_plus>rho_sn_down>rho_sn_up" style chain, largest first.
    '''
    if not events:
        return ""
    ordered = sorted(events, key=lambda e: (-e.rho_star, e.name))
    chain = ordered[0].name
    for prev, cur in zip(ordered[:-1], ordered[1:]):
        chain += ('>=' if prev.rho_star - cur.rho_star <= tol * max(1.0, prev.rho_star) else '>') + cur.name
    return chain


@dataclass(frozen=True)
class RegimeRow:
    j4: float
    lam: float
    ordering: str
    events: Tuple[BifurcationEvent, ...]
    regimes: Tuple[Regime, ...]
    extrapolated: bool = False

    def labels(self) -> List[str]:
        out = set()
        for regime in self.regimes:
            out.update(regime.labels())
        return sorted(out)


def classify_regime(j4: float, lam: float = TABLE_LAMBDA, inventories: bool = True) -> RegimeRow:
    '''
    the row of the J4 bifurcation sequence for the given j4: ordering of the
    detected events and the inventory of every rho interval between them.
    Rows are only reproduced as tabulated for lambda = 0.001.
    '''
    base = BaseParams('j4', lam, j4=float(j4))
    events = detect_events(base)
    regimes = build_diagram(base, events).regimes if inventories else ()
    extrapolated = abs(lam - TABLE_LAMBDA) > 1e-15
    if extrapolated:
        logger.info(f"regime at lambda = {lam} is an extrapolation of the tabulated sequence")
    return RegimeRow(float(j4), lam, ordering_chain(events), tuple(events), tuple(regimes), extrapolated)


def signature(base: BaseParams) -> Tuple[frozenset, str]:
    '''
    names of the events present and the order of the two E2 pitchforks.
    '''
    events = detect_events(base)
    names = frozenset(e.name for e in events)
    by_name = {e.name: e.rho_star for e in events}
    if 'rho_plus' in by_name and 'rho_minus' in by_name:
        order = 'plus>minus' if by_name['rho_plus'] > by_name['rho_minus'] else 'minus>=plus'
    else:
        order = ''
    return names, order


def _j4_signature(lam, j4):
    return signature(BaseParams('j4', lam, j4=float(j4)))


def _bisect_boundary(lam, lo, hi, sig_lo, xtol):
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if _j4_signature(lam, mid) == sig_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def scan_j4_boundaries(lam: float = TABLE_LAMBDA, j4_range: Tuple[float, float] = SCAN_RANGE,
                       step: float = SCAN_STEP, threads: int = 1, xtol: float = SCAN_XTOL) -> List[float]:
    '''
    j4 values at which the set of events or the order of rho+ and rho- changes,
    sorted descending. Boundaries near -12/25 and -31/35 are snapped to them.
    '''
    lo, hi = j4_range
    if not hi > lo or step <= 0.0:
        raise DomainError(f"bad j4 scan range [{lo}, {hi}] with step {step}")
    grid = np.linspace(lo, hi, int(round((hi - lo) / step)) + 1)
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        sigs = list(pool.map(lambda x: _j4_signature(lam, x), grid))

    brackets = [(grid[i], grid[i + 1], sigs[i]) for i in range(grid.size - 1) if sigs[i] != sigs[i + 1]]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        raw = list(pool.map(lambda b: _bisect_boundary(lam, b[0], b[1], b[2], xtol), brackets))

    merged = []
    for value in sorted(raw, reverse=True):
        if merged and merged[-1] - value < SCAN_MERGE:
            continue
        merged.append(value)
    out = []
    for value in merged:
        for exact in EXACT_BOUNDARIES:
            if abs(value - exact) < SCAN_MERGE:
                value = exact
        out.append(float(value))
    logger.info(f"j4 boundaries at lambda = {lam}: {[utils.fmt_float(v, 6) for v in out]}")
    return out


def sweep(model: str, lam: float, values: Sequence[float], threads: int = 1) -> List[BifurcationDiagram]:
    '''
    detect_events over a grid of j4 (J4 model) or jC (relativistic model);
    results keep the order of values.
    '''
    if model not in ('j4', 'rel'):
        raise DomainError(f"sweeps run over j4 or jC, not over the {model} model")

    def one(value):
        base = BaseParams(model, lam, j4=float(value)) if model == 'j4' else BaseParams(model, lam, jc=float(value))
        try:
            return BifurcationDiagram(base, tuple(detect_events(base)))
        except FrozenOrbitError as e:
            logger.warning(f"sweep point {value} skipped: {e}")
            return BifurcationDiagram(base, ())

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        return list(pool.map(one, values))


# -- export -------------------------------------------------------------------

CSV_HEADER = ('j4_or_jC', 'event_kind', 'rho_star')


def export_diagram(diagram: Union[BifurcationDiagram, Sequence[BifurcationDiagram]], path: str,
                   fmt: str = 'csv'):
    '''
    write one diagram or a sweep of them. CSV rows are (j4 or jC, event kind,
    rho_star); JSON keeps the full structure. Floats carry 17 significant digits.
    '''
    diagrams = [diagram] if isinstance(diagram, BifurcationDiagram) else list(diagram)
    if fmt == 'csv':
        with open(path, 'w', newline='') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(CSV_HEADER)
            for d in diagrams:
                for e in d.events:
                    writer.writerow((utils.fmt_float(d.params_base.extra), e.event_kind,
                                     utils.fmt_float(e.rho_star)))
    elif fmt == 'json':
        with open(path, 'w', encoding='utf-8') as f:
            json.dump([d.to_dict() for d in diagrams], f, sort_keys=True, indent=2)
            f.write('\n')
    else:
        raise DomainError(f"unknown export format '{fmt}'")
    logger.info(f"exported {len(diagrams)} diagram(s) to {path}")


# -- phase portraits ----------------------------------------------------------

STYLE_OF = {STABLE: 'tangency', DEGENERATE: 'degenerate'}


def _gG_points(Z, X, Xh, G):
    '''
    the four angles g of each (Z, X) point of a level curve inside the lemon.
    '''
    ok = np.isfinite(X) & (Xh > 0.0)
    cos2g = np.clip(X[ok] / Xh[ok], -1.0, 1.0)
    half = 0.5 * np.arccos(cos2g)
    g = np.concatenate([half, np.pi - half, np.pi + half, 2.0 * np.pi - half])
    return g, np.tile(G[ok], 4)


def phase_portrait_data(params: ModelParams, n_levels: int = 10, n_points: int = 801) -> Dict:
    '''
    Level curves of K on the lemon, in the (Z, X) and (g, G) charts.

    Every tangency equilibrium contributes its level; stable ones are styled
    "tangency", unstable ones and the poles' saddles "separatrix", degenerate
    ones "degenerate". n_levels further levels are spread over the range of K
    on the contour. The Z of the vertical asymptote is reported as a singular line.
    '''
    if n_levels < 0:
        raise DomainError(f"n_levels must be non-negative, got {n_levels}")
    nf = params.normal_form()
    r, E = params.r, params.E
    equilibria = enumerate_equilibria(params)
    Z = np.linspace(-E, E, n_points)
    G = G_of_Z(Z, r)
    Xh = xhat(Z, r)
    g_val = nf.A(G, r)
    f_val = nf.F(G, r)

    def curve(k):
        with np.errstate(divide='ignore', invalid='ignore'):
            X = (k - g_val) / f_val
        X = np.where(np.isfinite(X) & (np.abs(X) <= Xh * (1.0 + 1e-12)), X, np.nan)
        g, Gc = _gG_points(Z, X, Xh, G)
        return X, g, Gc

    levels = []
    for eq in equilibria:
        k = float(nf.K(eq.lemon.X, eq.Z, r))
        style = STYLE_OF.get(eq.stability, 'separatrix')
        X, g, Gc = curve(k)
        levels.append({'k': k, 'style': style, 'source': eq.label or eq.kind, 'Z': Z, 'X': X, 'g': g, 'G': Gc})

    on_contour = np.concatenate([g_val + f_val * Xh, g_val - f_val * Xh])
    k_lo, k_hi = float(np.min(on_contour)), float(np.max(on_contour))
    for k in np.linspace(k_lo, k_hi, n_levels + 2)[1:-1]:
        X, g, Gc = curve(float(k))
        levels.append({'k': float(k), 'style': 'level', 'source': None, 'Z': Z, 'X': X, 'g': g, 'G': Gc})

    singular = [float(Z_of_G(Gb, r)) for Gb in nf.ebar_G(r)]
    return {
        'params': params.to_dict(),
        'contour': {'Z': Z, 'X_plus': Xh, 'X_minus': -Xh},
        'levels': levels,
        'singular_Z': singular,
        'equilibria': [eq.to_dict() for eq in equilibria],
    }


def export_portrait(bundle: Dict, prefix: str) -> Tuple[str, str]:
    '''
    one CSV per chart: <prefix>_ZX.csv and <prefix>_gG.csv.
    '''
    zx_path, gg_path = prefix + '_ZX.csv', prefix + '_gG.csv'
    with open(zx_path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(('curve', 'style', 'k', 'Z', 'X'))
        for Zv, Xp in zip(bundle['contour']['Z'], bundle['contour']['X_plus']):
            writer.writerow(('contour', 'contour', '', utils.fmt_float(Zv), utils.fmt_float(Xp)))
            writer.writerow(('contour', 'contour', '', utils.fmt_float(Zv), utils.fmt_float(-Xp)))
        for i, level in enumerate(bundle['levels']):
            for Zv, Xv in zip(level['Z'], level['X']):
                if np.isfinite(Xv):
                    writer.writerow((level['source'] or "level{0}".format(i), level['style'],
                                     utils.fmt_float(level['k']), utils.fmt_float(Zv), utils.fmt_float(Xv)))
        for Zs in bundle['singular_Z']:
            writer.writerow(('singular', 'singular', '', utils.fmt_float(Zs), ''))
    with open(gg_path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(('curve', 'style', 'k', 'g', 'G'))
        for i, level in enumerate(bundle['levels']):
            for gv, Gv in zip(level['g'], level['G']):
                writer.writerow((level['source'] or "level{0}".format(i), level['style'],
                                 utils.fmt_float(level['k']), utils.fmt_float(gv), utils.fmt_float(Gv)))
    return zx_path, gg_path
