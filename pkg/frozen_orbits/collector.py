#!/usr/bin/env python
# -*- coding: utf-8 -*-

import os
import re
from typing import Dict, List, Optional

from prometheus_client import CollectorRegistry, write_to_textfile
from prometheus_client.core import GaugeMetricFamily

from frozen_orbits import utils
from frozen_orbits.stability import INDEX

FROZEN_ORBIT_METRICS_DIR = os.environ.get('FROZEN_ORBIT_METRICS_DIR', 'metrics')

STABILITY_VALUE = dict(INDEX)


class ResultCollector(object):
    '''
    ResultCollector is the super class of the collectors that publish one run
    of a command. Descriptions come from metrics/<command>.json, names are
    prefixed frozen_orbit_<command>_.
    '''

    def __init__(self, command):
        '''
        @param command: "equilibria", "bifurcation" or "verify".
        '''
        self._command = command
        self._prefix = 'frozen_orbit_{0}'.format(command)
        self._descriptions = utils.read_json_file(FROZEN_ORBIT_METRICS_DIR, command)
        self._metrics = {}

    def _gauge(self, key, labels):
        snake_case = re.sub('([a-z0-9])([A-Z])', r'\1_\2', key).lower()
        descriptions = self._descriptions.get(key, key)
        self._metrics[key] = GaugeMetricFamily("_".join([self._prefix, snake_case]),
                                               descriptions, labels=labels)
        return self._metrics[key]

    def collect(self):
        '''
        This method needs to be override by all subclasses.
        '''
        return iter(())


def _param_labels(params: Dict) -> List[str]:
    return [str(params.get('model', '')), utils.fmt_float(params.get('lambda')),
            utils.fmt_float(params.get('j4')), utils.fmt_float(params.get('jc'))]


PARAM_LABELS = ['model', 'lam', 'j4', 'jc']


class EquilibriumCollector(ResultCollector):
    COMMAND = 'equilibria'

    def __init__(self, params: Dict, equilibria: List[Dict]):
        ResultCollector.__init__(self, self.COMMAND)
        self.logger = utils.get_logger(__name__, log_file="frozen_orbits.log")
        self._params = params
        self._equilibria = equilibria

    def collect(self):
        count = self._gauge('EquilibriumCount', PARAM_LABELS + ['rho'])
        G = self._gauge('AngularMomentum', PARAM_LABELS + ['rho', 'label', 'index'])
        stab = self._gauge('Stability', PARAM_LABELS + ['rho', 'label', 'index'])
        ecc = self._gauge('Eccentricity', PARAM_LABELS + ['rho', 'label', 'index'])
        base = _param_labels(self._params)
        rho = utils.fmt_float(self._params.get('rho'))
        count.add_metric(base + [rho], len(self._equilibria))
        for i, eq in enumerate(self._equilibria):
            labels = base + [rho, str(eq.get('label') or eq.get('kind')), str(i)]
            G.add_metric(labels, eq['G'])
            ecc.add_metric(labels, eq['e'])
            stab.add_metric(labels, STABILITY_VALUE.get(eq.get('stability'), 0))
        self.logger.debug(f"collected {len(self._equilibria)} equilibria")
        for metric in self._metrics.values():
            yield metric


class BifurcationCollector(ResultCollector):
    COMMAND = 'bifurcation'

    def __init__(self, diagrams: List[Dict]):
        '''
        @param diagrams: BifurcationDiagram.to_dict() outputs.
        '''
        ResultCollector.__init__(self, self.COMMAND)
        self._diagrams = diagrams

    def collect(self):
        thresholds = self._gauge('Threshold', PARAM_LABELS + ['name', 'kind', 'detection'])
        count = self._gauge('EventCount', PARAM_LABELS)
        for d in self._diagrams:
            base = _param_labels(d['params'])
            count.add_metric(base, len(d['events']))
            for e in d['events']:
                thresholds.add_metric(base + [e['name'], e['event_kind'], e['detection']], e['rho_star'])
        for metric in self._metrics.values():
            yield metric


class VerificationCollector(ResultCollector):
    COMMAND = 'verify'

    def __init__(self, results):
        '''
        @param results: oracle.CheckResult objects.
        '''
        ResultCollector.__init__(self, self.COMMAND)
        self._results = results

    def collect(self):
        passed = self._gauge('CheckPassed', PARAM_LABELS + ['rho', 'check'])
        total = self._gauge('ChecksTotal', ['outcome'])
        n_pass = 0
        for res in self._results:
            labels = _param_labels(res.params) + [utils.fmt_float(res.params.get('rho')), res.name]
            passed.add_metric(labels, 1 if res.passed else 0)
            n_pass += int(res.passed)
        total.add_metric(['pass'], n_pass)
        total.add_metric(['fail'], len(self._results) - n_pass)
        for metric in self._metrics.values():
            yield metric


def write_metrics(collector: ResultCollector, path: Optional[str]):
    '''
    register the collector in a fresh registry and dump it in text format.
    '''
    if not path:
        return
    registry = CollectorRegistry()
    registry.register(collector)
    write_to_textfile(path, registry)
    utils.logger.info(f"metrics written to {path}")
