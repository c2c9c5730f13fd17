"""Python bindings for the birkhoff C++ library."""

import json as _json

from ._core import (
    BatchFormatError,
    BirkhoffError,
    PreconditionError,
    SampleBatch,
    canfield_mckay_birkhoff,
    canfield_mckay_rect,
    check_doubly_stochastic,
    gibbs_chain,
    ks_exp1,
    load_batch,
    mc_volume,
    mixing_profile,
    persist_batch,
    rejection_exact,
    singular_values,
    uniform_sum_density,
    vertex_mixture,
)
from ._core import config_schema as _config_schema
from ._core import run_experiment as _run_experiment


def config_schema():
    return _json.loads(_config_schema())


def run_experiment(experiment, **options):
    """Run a named experiment; returns the report as a dict."""
    config = dict(options, experiment=experiment)
    return _json.loads(_run_experiment(_json.dumps(config)))


__all__ = [
    "BatchFormatError",
    "BirkhoffError",
    "PreconditionError",
    "SampleBatch",
    "canfield_mckay_birkhoff",
    "canfield_mckay_rect",
    "check_doubly_stochastic",
    "config_schema",
    "gibbs_chain",
    "ks_exp1",
    "load_batch",
    "mc_volume",
    "mixing_profile",
    "persist_batch",
    "rejection_exact",
    "run_experiment",
    "singular_values",
    "uniform_sum_density",
    "vertex_mixture",
]
