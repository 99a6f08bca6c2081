# Copyright 2026 The poadual Authors
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
"""Exact price-of-anarchy certificates via configuration LP duality.

Thin wrapper over the C++ core. All numeric values are exact rationals
rendered as "p" or "p/q" strings; `Fraction` converts them losslessly.
"""

import json
from fractions import Fraction

try:
    from . import _poadual
except ImportError:  # running against a build tree on PYTHONPATH
    import _poadual

__all__ = [
    "poa",
    "certify",
    "pigou",
    "auction_certify",
    "no_envy",
    "round_trip",
    "solve_lp",
    "rational",
]


def rational(text):
    """Exact Fraction from the library's "p/q" rendering."""
    return Fraction(text)


def poa(instance_text, max_profiles=0, max_configs=0):
    return json.loads(_poadual.poa_json(instance_text, max_profiles, max_configs))


def certify(instance_text, lambda_="", mu="", max_profiles=0, max_configs=0):
    return json.loads(
        _poadual.certify_json(instance_text, lambda_, mu, max_profiles, max_configs)
    )


def pigou(instance_text, lo="0", hi="2", step="1/64"):
    return json.loads(_poadual.pigou_json(instance_text, lo, hi, step))


def auction_certify(instance_text):
    return json.loads(_poadual.auction_certify_json(instance_text))


def no_envy(instance_text, horizon=100, seed=0, r="1"):
    return json.loads(_poadual.no_envy_json(instance_text, horizon, seed, r))


def round_trip(instance_text):
    return _poadual.round_trip(instance_text)


def solve_lp(lp_text):
    return json.loads(_poadual.solve_lp_json(lp_text))
