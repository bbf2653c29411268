# Copyright 2026 The parrep Authors
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

"""Python interface to the parrep C++ core."""

import json

from ._parrep import (
    Game,
    classical_value,
    embezzlement_coefficients,
    fixture_game,
    game_from_text,
    load_game,
    seesaw_value,
    theorem1_bound,
    win_probability,
)
from ._parrep import run_reduction_json as _run_reduction_json
from ._parrep import verify_json as _verify_json

__all__ = [
    "Game",
    "classical_value",
    "embezzlement_coefficients",
    "fixture_game",
    "game_from_text",
    "load_game",
    "run_reduction",
    "seesaw_value",
    "theorem1_bound",
    "verify",
    "win_probability",
]


def run_reduction(game, strategy, n, C=(), **kwargs):
    """Run the single-shot reduction; coordinates in C are 1-based. Returns the report dict."""
    return json.loads(_run_reduction_json(game, strategy, n, list(C), **kwargs))


def verify(suite, game=None, strategy="tsirelson", n=2, C=(), seed=7, trials=1000):
    """Run an invariant suite; returns (passed, report dict)."""
    game = game if game is not None else fixture_game("chsh")
    ok, text = _verify_json(suite, game, strategy, n, list(C), seed, trials)
    return ok, json.loads(text)
