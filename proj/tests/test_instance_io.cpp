// Copyright 2026 The poadual Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "poadual/instance_io.hpp"
#include "poadual/report.hpp"

using namespace poadual;
using namespace poadual::io;

namespace {

const char* kG1 = R"(# two unit players on two linear links
game atomic
resources e1 e2
cost e1 poly 0 1
cost e2 poly 0 1
player p1 weight 1 strategies {e1} {e2}
player p2 weight 1 strategies {e1} {e2}
)";

const char* kPigou = R"(game nonatomic
epsilon 1/4
resources top bottom
cost top poly 1
cost bottom poly 0 1
type t1 m 4 strategies {top} {bottom}
)";

const char* kSplit = R"(game splittable
epsilon 1/2
resources l1 l2
cost l1 poly 0 1
cost l2 poly 0 1
player p1 weight 1 strategies {l1} {l2}
player p2 weight 1 strategies {l1} {l2}
)";

const char* kAuction = R"(auction simultaneous
mechanism second-price
items 1
bidgrid 0 1/2 1 2
player a
type lo prior 1/2 value {1}:1
type hi prior 1/2 value {1}:2
player b
type v prior 1 value {1}:1
)";

}  // namespace

TEST_CASE("congestion instances parse and round-trip") {
  for (const char* text : {kG1, kPigou, kSplit}) {
    auto m = parse_instance(text);
    auto emitted = emit_instance(m);
    auto again = parse_instance(emitted);
    CHECK(instances_equal(m, again));
    CHECK(emit_instance(again) == emitted);
  }
  CHECK(kind_name(parse_instance(kG1)) == "atomic");
  CHECK(kind_name(parse_instance(kPigou)) == "nonatomic");
  CHECK(kind_name(parse_instance(kSplit)) == "splittable");
}

TEST_CASE("auction instances parse and round-trip") {
  auto m = parse_instance(kAuction);
  CHECK(kind_name(m) == "auction");
  const auto& auc = std::get<auctions::BayesianAuction>(m);
  CHECK(auc.players() == 2);
  CHECK(auc.types[0].size() == 2);
  // The high type keeps its truthful bid of 2 (admissibility is per type).
  bool has_two = false;
  for (int a : auc.admissible[0][1])
    if (auc.actions[0][a].bids[0] == Rational(2)) has_two = true;
  CHECK(has_two);
  for (int a : auc.admissible[0][0]) CHECK(auc.actions[0][a].bids[0] <= 1);

  auto again = parse_instance(emit_instance(m));
  CHECK(instances_equal(m, again));
}

TEST_CASE("pwl costs and multi-resource strategies survive the round trip") {
  const char* text = R"(game atomic
resources a b c
cost a pwl 0:0 1:1 3:2
cost b poly 1/2 0 2
cost c poly 3
player p weight 3/2 strategies {a,b,c} {} {b}
)";
  auto m = parse_instance(text);
  auto again = parse_instance(emit_instance(m));
  CHECK(instances_equal(m, again));
  const auto& g = std::get<congestion::AtomicGame>(m);
  CHECK(g.players[0].strategies[1].empty());
}

TEST_CASE("additive valuations expand with the monotone closure") {
  const char* text = R"(auction simultaneous
mechanism first-price
items 2
bidgrid 0 1
player a
type v prior 1 additive 1 1
player b
type v prior 1 value {1}:1 {2}:1
)";
  auto m = parse_instance(text);
  const auto& auc = std::get<auctions::BayesianAuction>(m);
  CHECK(auc.types[0][0].valuation.of(3) == Rational(2));
  // Monotone closure fills {1,2} with max of the parts.
  CHECK(auc.types[1][0].valuation.of(3) == Rational(1));
}

TEST_CASE("parse errors carry line numbers") {
  try {
    parse_instance("game atomic\nresources a\ncost a poly 0 1\nplayer p "
                   "weight 1 strategies {zzz}\n");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.line == 4);
  }
  CHECK_THROWS_AS(parse_instance("game sideways\n"), ParseError);
  CHECK_THROWS_AS(parse_instance(""), ParseError);
  CHECK_THROWS_AS(parse_instance("game atomic\nresources a\n"), ParseError);
  CHECK_THROWS_AS(
      parse_instance("auction simultaneous\nmechanism second-price\n"),
      ParseError);
  // Decimal literals are rejected everywhere.
  CHECK_THROWS_AS(
      parse_instance("game atomic\nresources a\ncost a poly 0.5\nplayer p "
                     "weight 1 strategies {a}\n"),
      Error);
}

TEST_CASE("the parser only ever throws, never crashes, on garbage") {
  std::mt19937_64 rng(99);
  const std::string alphabet =
      "game auction {}/:#-1248 \nplayer type cost poly pwl resources";
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    size_t len = rng() % 120;
    for (size_t i = 0; i < len; ++i)
      text.push_back(alphabet[rng() % alphabet.size()]);
    try {
      auto m = parse_instance(text);
      // A syntactically valid accident must still round-trip.
      CHECK(instances_equal(m, parse_instance(emit_instance(m))));
    } catch (const Error&) {
      // expected for almost every input
    }
  }
}

TEST_CASE("reports are deterministic and rationals render as p/q") {
  report::Json j;
  j["value"] = report::rational(Rational(3, 4));
  j["whole"] = report::rational(Rational(8, 4));
  CHECK(j["value"] == "3/4");
  CHECK(j["whole"] == "2");
  auto a = report::to_json_text(j);
  auto b = report::to_json_text(j);
  CHECK(a == b);
  CHECK(a.find("0.75") == std::string::npos);
  CHECK(report::fnv1a_digest("abc") == report::fnv1a_digest("abc"));
  CHECK(report::fnv1a_digest("abc") != report::fnv1a_digest("abd"));
}
