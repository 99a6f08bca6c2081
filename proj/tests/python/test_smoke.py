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

import os
from fractions import Fraction

import poadual

HERE = os.path.dirname(__file__)
INSTANCES = os.environ.get(
    "POADUAL_INSTANCES", os.path.join(HERE, "..", "..", "instances")
)


def read(name):
    with open(os.path.join(INSTANCES, name)) as f:
        return f.read()


def test_poa_on_g1():
    out = poadual.poa(read("g1.game"))
    assert out["kind"] == "atomic"
    assert Fraction(out["optimum"]) == 2
    assert Fraction(out["worst_cce_cost"]) == 3
    assert Fraction(out["poa_cce"]) == Fraction(3, 2)


def test_certify_g1():
    out = poadual.certify(read("g1.game"), "5/3", "1/3")
    assert out["certificate"]["feasible"] is True
    assert Fraction(out["certified_poa_bound"]) == Fraction(5, 2)
    assert Fraction(out["certificate"]["dual_objective"]) == Fraction(6, 5)


def test_pigou_bound_and_certificate():
    out = poadual.pigou(read("pigou.game"))
    assert Fraction(out["bound"]) == Fraction(4, 3)
    cert = poadual.certify(read("pigou.game"))
    assert cert["certificate"]["feasible"] is True
    assert Fraction(cert["certificate"]["certified_ratio"]) == Fraction(4, 3)


def test_auction_certificate():
    out = poadual.auction_certify(read("simultaneous_2item.auction"))
    welfare = Fraction(out["equilibrium_welfare"])
    opt = Fraction(out["optimal_welfare"])
    assert out["certificate"]["feasible"] is True
    assert welfare >= opt / 4


def test_no_envy_theorem():
    out = poadual.no_envy(read("learning_1item.auction"), horizon=100, seed=0)
    assert out["theorem_holds"] is True


def test_round_trip_is_stable():
    text = read("g1.game")
    once = poadual.round_trip(text)
    assert poadual.round_trip(once) == once


def test_exact_lp_solve():
    lp = "\n".join(
        [
            "lp demo",
            "sense minimize",
            "var x 0 -",
            "con lb >= 3 : 1 x",
            "obj : 1 x",
            "end",
        ]
    )
    out = poadual.solve_lp(lp)
    assert out["status"] == "optimal"
    assert Fraction(out["objective"]) == 3
    assert Fraction(out["dual"]["lb"]) == 1
