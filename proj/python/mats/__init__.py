"""Python front end for the mats C++ core.

Configs and reports are plain dicts; traces are JSONL strings.
"""

import json

from . import _mats
from ._mats import ConfigError, KernelError, ProtocolViolation, TraceError, minimal_hitting_sets

__all__ = [
    "ConfigError",
    "KernelError",
    "ProtocolViolation",
    "TraceError",
    "make_universe",
    "simulate",
    "check",
    "essential_sets",
    "classify",
    "minimal_delivery_path",
    "check_interactive",
    "reorg_histogram",
    "minimal_hitting_sets",
]


def make_universe(platform, others, servers=1, bootstrap=2):
    return json.loads(_mats.make_universe(platform, others, servers, bootstrap))


def simulate(config, **policy):
    return _mats.simulate(json.dumps(config), json.dumps(policy) if policy else "")


def check(prop, trace, window=0):
    return json.loads(_mats.check(prop, trace, window))


def essential_sets(config, depth=8):
    return json.loads(_mats.essential_sets(json.dumps(config), depth))


def classify(platform, depth=8, family=()):
    return json.loads(_mats.classify(platform, depth, [json.dumps(f) for f in family]))


def minimal_delivery_path(platform):
    return tuple(_mats.minimal_delivery_path(platform))


def check_interactive(config, p, p_prime, depth=8):
    return json.loads(_mats.check_interactive(json.dumps(config), list(p), list(p_prime), depth))


def reorg_histogram(config, trials=100, **policy):
    return _mats.reorg_histogram(json.dumps(config), json.dumps(policy) if policy else "", trials)
