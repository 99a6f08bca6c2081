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

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "poadual/rational.hpp"

namespace poadual::congestion {

struct InvalidProfile : Error {
  using Error::Error;
};

/// Non-decreasing latency, evaluated exactly on rationals. Two kinds:
/// polynomials with non-negative rational coefficients (differentiable) and
/// non-decreasing piecewise-linear interpolants (no derivative, so rejected
/// by splittable games).
class CostFunction {
 public:
  enum class Kind { Polynomial, PiecewiseLinear };

  // coeffs[k] multiplies x^k; all coefficients must be >= 0.
  static CostFunction polynomial(std::vector<Rational> coeffs);
  // Breakpoints (x, y), strictly increasing in x and non-decreasing in y,
  // first x must be 0; beyond the last point the final slope extrapolates.
  static CostFunction piecewise_linear(
      std::vector<std::pair<Rational, Rational>> breakpoints);

  Kind kind() const { return kind_; }
  Rational eval(const Rational& load) const;
  bool has_derivative() const { return kind_ == Kind::Polynomial; }
  Rational derivative(const Rational& load) const;

  const std::vector<Rational>& coefficients() const { return coeffs_; }
  const std::vector<std::pair<Rational, Rational>>& breakpoints() const {
    return breaks_;
  }
  bool operator==(const CostFunction&) const = default;

 private:
  Kind kind_ = Kind::Polynomial;
  std::vector<Rational> coeffs_;
  std::vector<std::pair<Rational, Rational>> breaks_;
};

struct AtomicPlayer {
  std::string name;
  Rational weight;                       // > 0
  std::vector<std::vector<int>> strategies;  // resource index subsets
  bool operator==(const AtomicPlayer&) const = default;
};

struct AtomicGame {
  std::vector<std::string> resources;
  std::vector<CostFunction> costs;  // one per resource
  std::vector<AtomicPlayer> players;

  void validate() const;
  bool unweighted() const;
  bool operator==(const AtomicGame&) const = default;
};

// One strategy index per player.
using Profile = std::vector<int>;

struct PlayerType {
  std::string name;
  long m = 0;  // total amount = m * epsilon
  std::vector<std::vector<int>> strategies;
  bool operator==(const PlayerType&) const = default;
};

struct NonAtomicGame {
  Rational epsilon;  // > 0, the flow granularity
  std::vector<std::string> resources;
  std::vector<CostFunction> costs;
  std::vector<PlayerType> types;

  Rational amount(long k) const { return epsilon * k; }
  Rational demand(int type) const { return epsilon * types[type].m; }
  void validate() const;
  bool operator==(const NonAtomicGame&) const = default;
};

// Per type, amount on each strategy (multiples of epsilon, summing to the
// type's demand). Loads are always derived, never stored.
using FlowProfile = std::vector<std::vector<Rational>>;

struct SplittablePlayer {
  std::string name;
  Rational weight;  // multiple of epsilon
  std::vector<std::vector<int>> strategies;
  bool operator==(const SplittablePlayer&) const = default;
};

struct SplittableGame {
  Rational epsilon;
  std::vector<std::string> resources;
  std::vector<CostFunction> costs;  // must have derivatives
  std::vector<SplittablePlayer> players;

  void validate() const;
  bool operator==(const SplittableGame&) const = default;
};

// Per player, amount on each strategy.
using SplitProfile = std::vector<std::vector<Rational>>;

// ---- Cost accounting (loads recomputed from profiles each time) ----

std::vector<Rational> loads(const AtomicGame& g, const Profile& s);
Rational atomic_player_cost(const AtomicGame& g, int player, const Profile& s);
// Computes the total both as sum of player costs and as the load identity
// sum_e w_e * l_e(w_e); asserts they agree.
Rational atomic_total_cost(const AtomicGame& g, const Profile& s);

void validate_profile(const AtomicGame& g, const Profile& s);

std::vector<Rational> flow_loads(const NonAtomicGame& g, const FlowProfile& f);
void validate_flow(const NonAtomicGame& g, const FlowProfile& f);
// Cost of one unit of type i's flow on strategy j: sum of resource latencies.
Rational strategy_cost(const NonAtomicGame& g, const FlowProfile& f, int type,
                       int strategy);
Rational nonatomic_social_cost(const NonAtomicGame& g, const FlowProfile& f);

std::vector<Rational> split_loads(const SplittableGame& g,
                                  const SplitProfile& u);
std::vector<Rational> player_split_loads(const SplittableGame& g,
                                         const SplitProfile& u, int player);
void validate_split(const SplittableGame& g, const SplitProfile& u);
Rational splittable_player_cost(const SplittableGame& g, int player,
                                const SplitProfile& u);
Rational splittable_total_cost(const SplittableGame& g, const SplitProfile& u);

}  // namespace poadual::congestion
