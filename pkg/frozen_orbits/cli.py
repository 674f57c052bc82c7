#!/usr/bin/env python
# -*- coding: utf-8 -*-

import json
import os
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
import yaml

from frozen_orbits import utils
from frozen_orbits.bifurcation import (BaseParams, BifurcationDiagram, build_diagram, detect_events,
                                       export_diagram, export_portrait, phase_portrait_data, sweep)
from frozen_orbits.collector import (BifurcationCollector, EquilibriumCollector, VerificationCollector,
                                     write_metrics)
from frozen_orbits.equilibria import enumerate_equilibria
from frozen_orbits.errors import ConfigError, FrozenOrbitError
from frozen_orbits.model import MODELS, ModelParams, PhysicalUnits, nondimensionalize
from frozen_orbits.oracle import EPS_CONSTRAINT, EPS_ENERGY, run_verification
from frozen_orbits.stability import TAU_DEG

logger = utils.get_logger(__name__, log_file="frozen_orbits.log")

MODEL_DEFAULT = 'j2'
LAMBDA_DEFAULT = 0.001
STEP_DEFAULT = 0.01
LEVELS_DEFAULT = 10
FORMAT_DEFAULT = 'json'
T_END_DEFAULT = 1000.0
MODELS_DEFAULT = 'j2,j4,rel'
OUTPUT_DIR_DEFAULT = '.'

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2


class FrozenOrbitEnv:
    FROZEN_ORBIT_CONFIG = os.environ.get('FROZEN_ORBIT_CONFIG', None)
    FROZEN_ORBIT_THREADS = os.environ.get('FROZEN_ORBIT_THREADS', None)
    FROZEN_ORBIT_OUTPUT_DIR = os.environ.get('FROZEN_ORBIT_OUTPUT_DIR', OUTPUT_DIR_DEFAULT)
    FROZEN_ORBIT_METRICS_FILE = os.environ.get('FROZEN_ORBIT_METRICS_FILE', None)


@dataclass(frozen=True)
class Tolerances:
    tau_deg: float = TAU_DEG
    eps_energy: float = EPS_ENERGY
    eps_constraint: float = EPS_CONSTRAINT


@dataclass(frozen=True)
class RunConfig:
    '''
    Everything one command needs. Flags win over the config file, the config
    file over the environment, except FROZEN_ORBIT_THREADS which wins over --threads.
    '''
    command: str
    model: str = MODEL_DEFAULT
    rho: Optional[float] = None
    lam: Optional[float] = None
    j4: Optional[float] = None
    jc: Optional[float] = None
    physical_config: Optional[str] = None
    collision_check: bool = False
    j4_min: Optional[float] = None
    j4_max: Optional[float] = None
    jc_min: Optional[float] = None
    jc_max: Optional[float] = None
    step: float = STEP_DEFAULT
    regimes: bool = False
    n_levels: int = LEVELS_DEFAULT
    models: str = MODELS_DEFAULT
    t_end: float = T_END_DEFAULT
    output: Optional[str] = None
    format: str = FORMAT_DEFAULT
    metrics_file: Optional[str] = None
    threads: int = 1
    tolerances: Tolerances = field(default_factory=Tolerances)

    def validate(self):
        if self.model not in MODELS:
            raise ConfigError(f"unknown model '{self.model}'")
        if self.command in ('equilibria', 'portrait') and self.rho is None and not self.physical_config:
            raise ConfigError(f"{self.command} needs --rho")
        if self.format not in ('json', 'csv'):
            raise ConfigError(f"unknown format '{self.format}'")
        if self.step <= 0.0:
            raise ConfigError(f"step must be positive, got {self.step}")
        for lo, hi, name in ((self.j4_min, self.j4_max, 'j4'), (self.jc_min, self.jc_max, 'jc')):
            if lo is not None and hi is not None and hi < lo:
                raise ConfigError(f"empty {name} range [{lo}, {hi}]")
        if self.n_levels < 0:
            raise ConfigError(f"--levels must be non-negative, got {self.n_levels}")
        if self.threads < 1:
            raise ConfigError(f"--threads must be at least 1, got {self.threads}")
        if self.t_end <= 0.0:
            raise ConfigError(f"--t-end must be positive, got {self.t_end}")
        models = self.model_list()
        if not models or set(models) - set(MODELS):
            raise ConfigError(f"bad model list '{self.models}', expected a subset of {MODELS}")

    def model_list(self) -> List[str]:
        return [m.strip() for m in self.models.split(',') if m.strip()]


def _file_config(path: Optional[str]) -> Dict:
    if not path:
        return {}
    logger.info("use provided config: {}".format(path))
    try:
        cfg = utils.load_yaml(path)
    except (OSError, yaml.YAMLError) as e:
        raise ConfigError(f"cannot load config file {path}: {e}")
    if cfg is None:
        return {}
    if not isinstance(cfg, dict):
        raise ConfigError(f"config file {path} must hold a mapping")
    return cfg


def build_config(args) -> RunConfig:
    '''
    resolve a RunConfig from parsed arguments.

    The config file is read from --config or FROZEN_ORBIT_CONFIG. Its "model"
    section applies to every command, the section named after the command
    overrides it, and "tolerances" feeds the Tolerances record.
    '''
    cfg = _file_config(args.config or FrozenOrbitEnv.FROZEN_ORBIT_CONFIG)
    section = dict(cfg.get('model', {}) or {})
    section.update(cfg.get(args.command, {}) or {})
    tol_section = cfg.get('tolerances', {}) or {}

    def pick(name, default=None):
        value = getattr(args, name, None)
        if value is not None and value is not False:
            return value
        return section.get(name, default)

    try:
        threads = FrozenOrbitEnv.FROZEN_ORBIT_THREADS or pick('threads') or os.cpu_count() or 1
        tolerances = Tolerances(
            tau_deg=float(tol_section.get('tau_deg', TAU_DEG)),
            eps_energy=float(pick('tol_energy') or tol_section.get('eps_energy', EPS_ENERGY)),
            eps_constraint=float(pick('tol_constraint') or tol_section.get('eps_constraint', EPS_CONSTRAINT)),
        )
        run = RunConfig(
            command=args.command,
            model=pick('model', MODEL_DEFAULT),
            rho=_opt_float(pick('rho')),
            lam=_opt_float(pick('lam')),
            j4=_opt_float(pick('j4')),
            jc=_opt_float(pick('jc')),
            physical_config=pick('physical_config'),
            collision_check=bool(pick('collision_check', False)),
            j4_min=_opt_float(pick('j4_min')),
            j4_max=_opt_float(pick('j4_max')),
            jc_min=_opt_float(pick('jc_min')),
            jc_max=_opt_float(pick('jc_max')),
            step=float(pick('step', STEP_DEFAULT)),
            regimes=bool(pick('regimes', False)),
            n_levels=int(pick('n_levels', LEVELS_DEFAULT)),
            models=str(pick('models', MODELS_DEFAULT)),
            t_end=float(pick('t_end', T_END_DEFAULT)),
            output=pick('output'),
            format=pick('format', FORMAT_DEFAULT),
            metrics_file=pick('metrics_file', FrozenOrbitEnv.FROZEN_ORBIT_METRICS_FILE),
            threads=int(threads),
            tolerances=tolerances,
        )
    except (TypeError, ValueError) as e:
        raise ConfigError(f"bad configuration value: {e}")
    run.validate()
    return run


def _opt_float(value):
    return None if value is None else float(value)


def model_params(cfg: RunConfig, rho: Optional[float] = None):
    '''
    @return (ModelParams, PhysicalUnits or None)
    '''
    rho = cfg.rho if rho is None else rho
    if cfg.physical_config:
        phys = PhysicalUnits.from_file(cfg.physical_config)
        return nondimensionalize(phys, cfg.model, rho), phys
    lam = LAMBDA_DEFAULT if cfg.lam is None else cfg.lam
    if cfg.model == 'j4' and cfg.j4 is None:
        raise ConfigError("the j4 model needs --j4")
    if cfg.model == 'rel' and cfg.jc is None:
        raise ConfigError("the rel model needs --jc")
    j4 = cfg.j4 if cfg.model == 'j4' else None
    jc = cfg.jc if cfg.model == 'rel' else None
    return ModelParams(cfg.model, rho, lam, j4=j4, jc=jc), None


def _emit(cfg: RunConfig, text: str, default_name: str):
    if not cfg.output:
        sys.stdout.write(text)
        return
    path = cfg.output
    if os.path.isdir(path):
        path = os.path.join(path, default_name)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(text)
    logger.info(f"written {path}")


def _json_default(value):
    if isinstance(value, np.ndarray):
        return [float(v) if np.isfinite(v) else None for v in value.tolist()]
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    raise TypeError(f"not serialisable: {type(value)}")


def _dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, default=_json_default) + '\n'


def cmd_equilibria(cfg: RunConfig) -> int:
    params, phys = model_params(cfg)
    equilibria = enumerate_equilibria(params, tau=cfg.tolerances.tau_deg)
    if cfg.collision_check and phys is None:
        logger.warning("--collision-check ignored without --physical-config")
    report = [eq.to_dict(phys if cfg.collision_check else None) for eq in equilibria]
    for eq in report:
        logger.info("{0:>6} G={1} e={2} i={3} {4}".format(
            eq['label'] or eq['kind'], utils.fmt_float(eq['G'], 6), utils.fmt_float(eq['e'], 6),
            utils.fmt_float(eq['i'], 6), eq['stability']))
    doc = {'params': params.to_dict(), 'equilibria': report}
    _emit(cfg, _dumps(doc), 'equilibria.json')
    write_metrics(EquilibriumCollector(params.to_dict(), report), cfg.metrics_file)
    return EXIT_OK


def sweep_values(lo: Optional[float], hi: Optional[float], step: float) -> Optional[List[float]]:
    '''
    the grid lo, lo + step, ... up to hi inclusive; a missing end collapses onto the other.
    '''
    if lo is None and hi is None:
        return None
    lo = hi if lo is None else lo
    hi = lo if hi is None else hi
    n = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return [float(lo + i * step) for i in range(n)]


def _base_params(cfg: RunConfig) -> BaseParams:
    params, _ = model_params(cfg, rho=0.5)
    return BaseParams(params.model, params.lam, j4=params.j4, jc=params.jc)


def cmd_bifurcation(cfg: RunConfig) -> int:
    values = None
    if cfg.model == 'j4':
        values = sweep_values(cfg.j4_min, cfg.j4_max, cfg.step)
    elif cfg.model == 'rel':
        values = sweep_values(cfg.jc_min, cfg.jc_max, cfg.step)

    if values is not None:
        if cfg.physical_config:
            lam = _base_params(cfg).lam
        else:
            lam = LAMBDA_DEFAULT if cfg.lam is None else cfg.lam
        logger.info(f"sweeping {len(values)} {cfg.model} points on {cfg.threads} threads")
        diagrams = sweep(cfg.model, lam, values, threads=cfg.threads)
    else:
        base = _base_params(cfg)
        diagrams = [BifurcationDiagram(base, tuple(detect_events(base)))]
    if cfg.regimes:
        diagrams = [build_diagram(d.params_base, d.events) for d in diagrams]
    for d in diagrams:
        for e in d.events:
            logger.info(f"{d.params_base.to_dict()} {e.name} = {utils.fmt_float(e.rho_star, 6)}")

    if cfg.output:
        path = cfg.output
        if os.path.isdir(path):
            path = os.path.join(path, 'bifurcation.' + cfg.format)
        export_diagram(diagrams, path, cfg.format)
    else:
        sys.stdout.write(_dumps([d.to_dict() for d in diagrams]))
    write_metrics(BifurcationCollector([d.to_dict() for d in diagrams]), cfg.metrics_file)
    return EXIT_OK


def cmd_portrait(cfg: RunConfig) -> int:
    '''
    CSVs go to <output>_ZX.csv and <output>_gG.csv, level styles to
    <output>_meta.json. The prefix defaults to FROZEN_ORBIT_OUTPUT_DIR/portrait.
    '''
    params, _ = model_params(cfg)
    bundle = phase_portrait_data(params, cfg.n_levels)
    meta = {
        'params': bundle['params'],
        'singular_Z': bundle['singular_Z'],
        'equilibria': bundle['equilibria'],
        'levels': [{'source': lv['source'], 'style': lv['style'], 'k': lv['k']} for lv in bundle['levels']],
    }
    prefix = cfg.output or os.path.join(FrozenOrbitEnv.FROZEN_ORBIT_OUTPUT_DIR, 'portrait')
    if os.path.isdir(prefix):
        prefix = os.path.join(prefix, 'portrait')
    zx_path, gg_path = export_portrait(bundle, prefix)
    with open(prefix + '_meta.json', 'w', encoding='utf-8') as f:
        f.write(_dumps(meta))
    logger.info(f"portrait written to {zx_path} and {gg_path}")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    tol = cfg.tolerances
    results = run_verification(cfg.model_list(), cfg.t_end, tol.eps_energy, tol.eps_constraint)
    lines = ["{0:<22} {1:<60} {2}".format('check', 'params', 'result')]
    for res in results:
        lines.append("{0:<22} {1:<60} {2}".format(
            res.name, json.dumps(res.params, sort_keys=True),
            'pass' if res.passed else 'FAIL {0}'.format(res.detail)))
    _emit(cfg, "\n".join(lines) + "\n", 'verify.txt')
    write_metrics(VerificationCollector(results), cfg.metrics_file)
    failed = [r for r in results if not r.passed]
    if failed or not results:
        logger.error(f"{len(failed)} of {len(results)} checks failed")
        return EXIT_VERIFY_FAILED
    logger.info(f"all {len(results)} checks passed")
    return EXIT_OK


COMMAND_MAPPING = {
    'equilibria': cmd_equilibria,
    'bifurcation': cmd_bifurcation,
    'portrait': cmd_portrait,
    'verify': cmd_verify,
}


def main(argv=None) -> int:
    try:
        args = utils.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if not e.code else EXIT_USAGE
    try:
        cfg = build_config(args)
        return COMMAND_MAPPING[cfg.command](cfg)
    except FrozenOrbitError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE
    except OSError as e:
        sys.stderr.write(f"error: cannot write output: {e}\n")
        return EXIT_USAGE
