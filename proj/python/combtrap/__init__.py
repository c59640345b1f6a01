# Copyright 2026 The combtrap Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Frequency-comb driven trapped-ion simulator."""

import json as _json

from . import _core
from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401


def execute(config, threads=1, exact=False):
    """Run a config (JSON text or dict) in memory.

    Returns a dict with ``columns``, ``rows`` (list of tuples), ``report``,
    ``max_leakage`` and ``warnings``.
    """
    text = config if isinstance(config, str) else _json.dumps(config)
    out = _core.execute(text, threads, exact)
    out["report"] = _json.loads(out.pop("report_json"))
    return out


def run(config, out=None, format=None, threads=1, exact=False):
    """Run a config and write the output file plus its manifest; returns the manifest."""
    text = config if isinstance(config, str) else _json.dumps(config)
    return _json.loads(_core.run(text, out, format, threads, exact))


def preset(name):
    """A bundled configuration as a dict."""
    return _json.loads(_core.preset_text(name))
