# Copyright 2025 dressedqed contributors
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
"""Driven transmon-resonator spectra and renormalized observables."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import compute_rows as _compute_rows
from ._core import run_sweep as _run_sweep

__version__ = "0.1.0"


def _as_text(config):
    return config if isinstance(config, str) else _json.dumps(config)


def sweep(config, workers=1):
    """Rows of a sweep; ``config`` is a dict or a JSON string."""
    return _compute_rows(_as_text(config), workers)


def run(config, workers=1):
    """Write results.csv and manifest.json; returns the CLI exit code."""
    return _run_sweep(_as_text(config), workers)
