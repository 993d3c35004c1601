# Copyright 2026 The certikit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Quantum state certification testers, estimators and simulators."""

import json as _json

from ._core import (
    CHEBYSHEV_C,
    CertikitError,
    DensityMatrix,
    Tester,
    __version__,
    bures_chisq,
    bures_sq,
    depolarize,
    fidelity,
    hs_distance,
    load_state,
    make_tester,
    maximally_mixed,
    paninski,
    random_state,
    trace_distance,
    verify,
)
from . import _core

__all__ = [
    "CHEBYSHEV_C",
    "CertikitError",
    "DensityMatrix",
    "Tester",
    "__version__",
    "bures_chisq",
    "bures_sq",
    "calibrate",
    "depolarize",
    "estimate",
    "fidelity",
    "hs_distance",
    "load_state",
    "make_tester",
    "maximally_mixed",
    "paninski",
    "random_state",
    "run_experiment",
    "trace_distance",
    "verify",
]


def run_experiment(config, threads=0):
    """Run an experiment from a config dict (or JSON text).

    Returns ``(report, csv)`` where ``report`` is the parsed JSON report.
    """
    text = config if isinstance(config, str) else _json.dumps(config)
    report, csv = _core.run_experiment_json(text, threads)
    return _json.loads(report), csv


def estimate(quantity, state, sigma=None, *, copies, seed, backend=None):
    """Point estimate with its theoretical standard deviation, as a dict."""
    return _json.loads(_core.estimate_json(quantity, state, sigma, copies=copies, seed=seed, backend=backend))


def calibrate(profile="mixedness", **kwargs):
    """Sweep the planner constant; returns the calibration record as a dict."""
    return _json.loads(_core.calibrate_json(profile, **kwargs))
