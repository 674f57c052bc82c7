#!/usr/bin/env python
# -*- coding: utf-8 -*-

import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.realpath(__file__))))

from frozen_orbits.model import ModelParams  # noqa: E402

# numerical strategies are slow per example; no deadline
settings.register_profile('default', deadline=None, max_examples=50,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile('thorough', deadline=None, max_examples=1000,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get('HYPOTHESIS_PROFILE', 'default'))

LAMBDA = 0.001


@pytest.fixture
def j2_params():
    return ModelParams('j2', 0.2, LAMBDA)


@pytest.fixture
def j4_params():
    return ModelParams('j4', 0.3, LAMBDA, j4=1.3)


@pytest.fixture
def rel_params():
    return ModelParams('rel', 0.22, LAMBDA, jc=0.2)


@pytest.fixture(params=['j2', 'j4', 'rel'])
def any_params(request):
    return {
        'j2': ModelParams('j2', 0.2, LAMBDA),
        'j4': ModelParams('j4', 0.3, LAMBDA, j4=1.3),
        'rel': ModelParams('rel', 0.22, LAMBDA, jc=0.2),
    }[request.param]


@pytest.fixture
def physical_file(tmp_path):
    path = tmp_path / 'earth.yaml'
    path.write_text("mu: 3.986004418e14\nrp: 6378137.0\na: 7.0e6\nj2: 1.08263e-3\nj4: -1.6196e-6\n")
    return str(path)
