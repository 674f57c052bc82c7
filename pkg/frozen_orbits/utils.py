#!/usr/bin/env python
# -*- coding: utf-8 -*-

import os
import logging
import argparse
import yaml

FROZEN_ORBIT_LOGS_DIR = os.environ.get(
    'FROZEN_ORBIT_LOGS_DIR', '/tmp/frozen_orbits')

LOG_FORMAT = '%(asctime)s %(filename)s[line:%(lineno)d]-[%(levelname)s]: %(message)s'


def get_logger(name, log_file="frozen_orbits.log"):
    '''
    define a common logger template to record log.
    @param name log module or object name.
    @param log_file file name under FROZEN_ORBIT_LOGS_DIR.
    @return logger.
    '''

    logger = logging.getLogger(name)
    logger.setLevel(logging.DEBUG)
    if logger.handlers:
        return logger

    fmt = logging.Formatter(fmt=LOG_FORMAT)

    try:
        if not os.path.exists(FROZEN_ORBIT_LOGS_DIR):
            os.makedirs(FROZEN_ORBIT_LOGS_DIR)
        fh = logging.FileHandler(os.path.join(FROZEN_ORBIT_LOGS_DIR, log_file))
    except OSError:
        fh = None
    if fh is not None:
        fh.setLevel(logging.INFO)
        fh.setFormatter(fmt)
        logger.addHandler(fh)

    sh = logging.StreamHandler()
    sh.setLevel(logging.INFO)
    sh.setFormatter(fmt)
    logger.addHandler(sh)
    return logger


logger = get_logger(__name__)


def resource_path(path_name):
    '''
    resolve a resource directory (metrics, regression) relative to the repository root.
    '''
    path = os.path.dirname(os.path.realpath(__file__))
    parent_path = os.path.dirname(path)
    return os.path.join(parent_path, path_name)


def read_json_file(path_name, file_name):
    '''
    read a json resource file, e.g. metrics/equilibria.json.
    @return the parsed mapping, or {} when the file is missing or malformed.
    '''
    metric_name = "{0}.json".format(file_name)
    try:
        with open(os.path.join(resource_path(path_name), metric_name), 'r') as f:
            return yaml.safe_load(f) or {}
    except Exception as e:
        logger.info("read json file failed, error msg is: %s" % e)
        return {}


def get_file_list(file_path_name):
    '''
    This function is to get all .json file names in the specified directory.
    @param file_path_name: The directory name, e.g. metrics, regression.
    @return a sorted list of file names without extension.
    '''
    json_path = resource_path(file_path_name)
    try:
        files = os.listdir(json_path)
    except OSError:
        logger.info("no such file or directory: '%s'" % json_path)
        return []
    return sorted(f.split(".json")[0] for f in files if f.endswith(".json"))


def load_yaml(path):
    '''
    load a yaml (or json) document from an explicit path.
    '''
    with open(path, 'r') as f:
        return yaml.safe_load(f) or {}


def fmt_float(value, digits=17):
    '''
    machine output uses 17 significant digits, human summaries 6.
    '''
    if value is None:
        return ""
    return "{0:.{1}g}".format(float(value), digits)


def _add_model_args(parser):
    parser.add_argument(
        '--model',
        dest='model',
        required=False,
        choices=['j2', 'j4', 'rel'],
        help='Normal form to analyse. (default "j2")',
        default=None
    )
    parser.add_argument(
        '--lambda',
        dest='lam',
        required=False,
        type=float,
        help='J2 * Rp^2 in semi-major-axis units. (default 0.001)',
        default=None
    )
    parser.add_argument(
        '--j4',
        dest='j4',
        required=False,
        type=float,
        help='-J4/J2^2, J4 model only. (example "1.3")',
        default=None
    )
    parser.add_argument(
        '--jc',
        dest='jc',
        required=False,
        type=float,
        help='1/(lambda c^2), relativistic model only. (example "0.2")',
        default=None
    )
    parser.add_argument(
        '--physical-config',
        dest='physical_config',
        required=False,
        help='JSON/YAML file with mu, rp, a, j2, j4, c (SI) used instead of --lambda/--j4/--jc. (default: None)',
        default=None
    )


def _add_output_args(parser):
    parser.add_argument(
        '-o', '--output',
        dest='output',
        required=False,
        help='Output file or directory. (default: stdout / FROZEN_ORBIT_OUTPUT_DIR)',
        default=None
    )
    parser.add_argument(
        '--format',
        dest='format',
        required=False,
        choices=['json', 'csv'],
        help='Output format. (default "json")',
        default=None
    )
    parser.add_argument(
        '--metrics-file',
        dest='metrics_file',
        required=False,
        help='Write run gauges in Prometheus text format to this file. (default: None)',
        default=None
    )
    parser.add_argument(
        '--threads',
        dest='threads',
        required=False,
        type=int,
        help='Worker pool size for sweeps. (default: available parallelism)',
        default=None
    )


def parse_args(argv=None):

    parser = argparse.ArgumentParser(
        description='frozen orbits of the averaged zonal satellite problem: equilibria, bifurcations, portraits and verification.'
    )
    parser.add_argument(
        '-cfg', '--config',
        required=False,
        dest='config',
        help='Run config file (yaml). (default: None)',
        default=None
    )
    sub = parser.add_subparsers(dest='command')
    sub.required = True

    eq = sub.add_parser('equilibria', help='Equilibrium report with stability.')
    _add_model_args(eq)
    eq.add_argument(
        '--rho',
        dest='rho',
        required=False,
        type=float,
        help='H/L. (example "0.2")',
        default=None
    )
    eq.add_argument(
        '--collision-check',
        dest='collision_check',
        action='store_true',
        help='Annotate equilibria whose perigee lies inside the planet (needs --physical-config).'
    )
    _add_output_args(eq)

    bif = sub.add_parser('bifurcation', help='Bifurcation events and regimes.')
    _add_model_args(bif)
    bif.add_argument(
        '--j4-min',
        dest='j4_min',
        required=False,
        type=float,
        help='Lower end of a j4 sweep. (default: --j4)',
        default=None
    )
    bif.add_argument(
        '--j4-max',
        dest='j4_max',
        required=False,
        type=float,
        help='Upper end of a j4 sweep. (default: --j4)',
        default=None
    )
    bif.add_argument(
        '--jc-min',
        dest='jc_min',
        required=False,
        type=float,
        help='Lower end of a jC sweep. (default: --jc)',
        default=None
    )
    bif.add_argument(
        '--jc-max',
        dest='jc_max',
        required=False,
        type=float,
        help='Upper end of a jC sweep. (default: --jc)',
        default=None
    )
    bif.add_argument(
        '--step',
        dest='step',
        required=False,
        type=float,
        help='Sweep step. (default 0.01)',
        default=None
    )
    bif.add_argument(
        '--regimes',
        dest='regimes',
        action='store_true',
        help='Also classify the equilibrium inventory of every rho interval.'
    )
    _add_output_args(bif)

    por = sub.add_parser('portrait', help='Level-curve bundle in the (Z,X) and (g,G) charts.')
    _add_model_args(por)
    por.add_argument(
        '--rho',
        dest='rho',
        required=False,
        type=float,
        help='H/L. (example "0.2")',
        default=None
    )
    por.add_argument(
        '--levels',
        dest='n_levels',
        required=False,
        type=int,
        help='Number of generic level curves. (default 10)',
        default=None
    )
    _add_output_args(por)

    ver = sub.add_parser('verify', help='Oracle-vs-analytic and index audits on the regression set.')
    ver.add_argument(
        '--models',
        dest='models',
        required=False,
        help='Comma separated subset of j2,j4,rel. (default "j2,j4,rel")',
        default=None
    )
    ver.add_argument(
        '--tol-energy',
        dest='tol_energy',
        required=False,
        type=float,
        help='Energy drift tolerance for trajectories. (default 1e-9)',
        default=None
    )
    ver.add_argument(
        '--tol-constraint',
        dest='tol_constraint',
        required=False,
        type=float,
        help='Sphere radius drift tolerance. (default 1e-9)',
        default=None
    )
    ver.add_argument(
        '--t-end',
        dest='t_end',
        required=False,
        type=float,
        help='Integration span in rescaled time. (default 1000)',
        default=None
    )
    _add_output_args(ver)

    return parser.parse_args(argv)
