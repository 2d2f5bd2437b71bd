"""Mixing operator on finitely supported measures, with exact transport distances."""

import json as _json

from ._mixop import *  # noqa: F401,F403
from ._mixop import converge as _converge


def converge(config, threads=1):
    """Run a convergence experiment. `config` is a dict or a JSON string."""
    if not isinstance(config, str):
        config = _json.dumps(config)
    out = _converge(config, threads)
    return out["csv"], _json.loads(out["summary"])
