"""Quantum Fisher information of spin-orbit-coupled trapped atoms."""

import json

from ._socmetro import *  # noqa: F401,F403
from ._socmetro import run_scenario as _run_scenario


def run_scenario(scenario, config=None, overrides=()):
    """Run a named scenario; config is a dict merged over the defaults."""
    text = json.dumps(config) if config is not None else ""
    return _run_scenario(scenario, text, list(overrides))
